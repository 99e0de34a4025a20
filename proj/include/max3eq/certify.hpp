#pragma once

// Certified infima of the single-variable ratio functions that bound the
// Gaussian rounding's per-constraint performance, plus the arccos supremum
// Psi(a) they come from and grid checks of the supporting trigonometric
// inequalities.
//
// Accuracy contract: std::acos is assumed accurate to a few ulp, so every
// function below is evaluated to within kEvalError = 1e-6 (a very loose
// bound for double precision). Certified intervals are only as rigorous as
// that assumption; this is not interval arithmetic.

#include <cstddef>
#include <string>
#include <vector>

#include <json.hpp>

namespace max3eq {

inline constexpr double kEvalError = 1e-6;
inline constexpr double kCertifyBudget = 1e-4;

/// (1 - (2 acos a + acos(2a - 1))/(2 pi)) / a on (0, 1].
double h1(double a);
/// (1 - 3 acos((4a - 1)/3)/(2 pi)) / a on (0, 1].
double h2(double a);
/// h2 after substituting (4a - 1)/3 = cos x: 4 (1 - 3x/(2 pi)) / (1 + 3 cos x), x in [0, pi/2].
double h2_substituted(double x);
/// (1 - (pi + acos(4a - 1))/(2 pi)) / a on (0, 1/4]; the small-a critical branch.
double small_branch(double a);
/// (1 - 3 acos(1 - delta)/(2 pi)) / (1 - 3 delta/4), delta in (0, 1].
double delta_form(double delta);

/// acos(2(a+b)-1) + acos(2(a+c)-1) + acos(2(a+d)-1).
double arccos_sum(double a, double b, double c, double d);
/// acos(2a - 1) + 2 acos(a): sup of arccos_sum over the face b = 0.
double boundary_sup(double a);
/// pi + acos(4a - 1) for a <= 1/4, 3 acos((4a - 1)/3) above.
double critical_sup(double a);
/// sup of arccos_sum(a, b, c, d) over b + c + d = 1 - a, b, c, d >= 0.
double psi(double a);

/// Analytic lower bound discharging an end region of the domain.
struct RegionBound {
    std::string name;
    double lo = 0.0;
    double hi = 0.0;
    double claimed_bound = 0.0;
    /// Smallest value of the analytic lower-bound expression on the region
    /// (sampled); must be >= claimed_bound.
    double checked_minimum = 0.0;
    bool holds = false;
};

struct CertifiedInterval {
    double lo = 0.0;
    double hi = 0.0;
    double min_value = 0.0;        // smallest grid evaluation
    double argmin_estimate = 0.0;  // grid point attaining it (in the function's own variable)
    double domain_lo = 0.0;        // gridded range
    double domain_hi = 0.0;
    std::size_t grid_points = 0;
    double grid_spacing = 0.0;
    double lipschitz_bound = 0.0;
    double eval_error = kEvalError;
    std::vector<RegionBound> regions;

    bool contains(double v) const { return lo <= v && v <= hi; }
    double width() const { return hi - lo; }
};

struct GridOptions {
    /// 0 selects the spacing from the budget: L s/2 + eval_error <= budget.
    double spacing = 0.0;
    double budget = kCertifyBudget;
};

/// Spacing with lipschitz * s / 2 + kEvalError == budget.
double budget_spacing(double lipschitz, double budget = kCertifyBudget);

/// inf of h1 over (0,1]: analytic bounds on (0, 0.179] (>= 0.85) and
/// [0.99, 1] (>= 0.83), midpoint grid on (0.179, 0.99) with |h1'| <= 500.
CertifiedInterval certify_h1_infimum(const GridOptions& opts = {});

/// inf of h2_substituted over [0, pi/2) with |g'| <= 50 (the h2 branch).
CertifiedInterval certify_h2_infimum(const GridOptions& opts = {});

struct AlphaCertificate {
    CertifiedInterval alpha;    // min over the three branches
    CertifiedInterval h1;       // boundary branch
    CertifiedInterval h2;       // interior critical branch, a > 1/4
    double small_branch_value;  // small_branch(1/4), equal to 1
    double argmin_a = 0.0;      // (1 + 3 cos x*)/4
    double argmin_delta = 0.0;  // 4 (1 - a*)/3
};

AlphaCertificate certify_alpha(const GridOptions& h1_opts = {}, const GridOptions& h2_opts = {});

struct TrigFactResult {
    std::string name;
    std::string statement;
    double worst_margin = 0.0;
    double worst_at = 0.0;
    std::size_t points = 0;
    bool holds = false;
};

/// Margin slack for equality points.
inline constexpr double kTrigSlack = 1e-12;

/// Evaluates the seven supporting inequalities on uniform grids with `grid`
/// points each. Throws std::invalid_argument if grid < 2.
std::vector<TrigFactResult> verify_trig_facts(std::size_t grid);

nlohmann::json to_json(const CertifiedInterval& c);
nlohmann::json to_json(const AlphaCertificate& c);
nlohmann::json to_json(const std::vector<TrigFactResult>& facts);

}  // namespace max3eq
