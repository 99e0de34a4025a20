#pragma once

// Acceptance probabilities of the MAX-3-EQUAL and MAX-k-AND dictatorship
// tests. The test draws n i.i.d. columns from a gadget distribution over
// {-1,1}^k and queries f on each of the k rows.
//
//   equal test (k = 3, columns ~ d_delta):  E[f(X)f(Y)f(Z) + (1-f(X))(1-f(Y))(1-f(Z))]
//   AND test   (columns ~ mix(d_k, xi)):     E[f(X_1) ... f(X_k)]

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "max3eq/fourier.hpp"
#include "max3eq/pmf.hpp"
#include "max3eq/stats.hpp"

namespace max3eq {

/// Junta limit for exact evaluation.
inline constexpr std::size_t kMaxExactJunta = 10;
/// Exact evaluation materialises 2^(junta * (k-1)) partial sums.
inline constexpr std::size_t kMaxExactTensorBits = 24;

/// A [0,1]-valued function on {-1,1}^n, possibly of large arity, with
/// optional knowledge of the few coordinates it depends on.
class TestFunction {
public:
    using Evaluator = std::function<double(std::span<const std::int8_t>)>;

    TestFunction(std::string name, std::size_t arity, Evaluator eval);
    /// Function of the listed coordinates only; `table` is indexed by the
    /// junta point (bit t set iff x_{coords[t]} = +1).
    static TestFunction junta(std::string name, std::size_t arity, std::vector<std::size_t> coords,
                              std::vector<double> table);

    static TestFunction dictator(std::size_t arity, std::size_t i);
    static TestFunction constant(std::size_t arity, double value);
    /// Majority of all `arity` coordinates (odd arity), mapped to {0,1}.
    static TestFunction majority(std::size_t arity);
    /// Dense table; the junta is detected from the table.
    static TestFunction from_table(std::string name, const BooleanFunction& f);
    /// Balanced {0,1}-valued table with exactly half ones (arity <= kMaxArity).
    static TestFunction random_balanced(std::size_t arity, std::uint64_t seed);

    const std::string& name() const { return name_; }
    std::size_t arity() const { return arity_; }
    double operator()(std::span<const std::int8_t> x) const { return eval_(x); }

    bool has_junta() const { return junta_coords_.has_value(); }
    const std::vector<std::size_t>& junta_coords() const { return *junta_coords_; }
    const std::vector<double>& junta_table() const { return junta_table_; }

private:
    std::string name_;
    std::size_t arity_;
    Evaluator eval_;
    std::optional<std::vector<std::size_t>> junta_coords_;
    std::vector<double> junta_table_;
};

/// Builds a zoo function by name: "dictator", "const-half", "majority-<t>"
/// (t odd, arity t), "random-balanced". Throws std::invalid_argument for an
/// unknown name.
TestFunction zoo_function(const std::string& name, std::size_t arity, std::uint64_t seed = 0);

enum class EvalMethod { exact_junta, monte_carlo };

struct EvalMode {
    EvalMethod method = EvalMethod::exact_junta;
    std::uint64_t trials = 0;
    std::uint64_t seed = 0;

    static EvalMode exact() { return {}; }
    static EvalMode monte_carlo(std::uint64_t trials, std::uint64_t seed) {
        return {EvalMethod::monte_carlo, trials, seed};
    }
};

struct TestReport {
    EvalMethod method = EvalMethod::exact_junta;
    double accept_prob = 0.0;
    /// Exact rational value when every table entry and mass is rational and
    /// the computation is small enough to run in exact arithmetic.
    std::optional<Rational> exact;
    /// Present for Monte Carlo runs only.
    std::optional<McEstimate> estimate;
    double completeness_bound = 0.0;
    double soundness_bound = 0.0;
};

/// Throws std::invalid_argument for exact mode on a function without a known
/// junta of at most kMaxExactJunta coordinates.
TestReport accept_equal(const TestFunction& f, const Rational& delta, const EvalMode& mode);
TestReport accept_and(const TestFunction& f, std::size_t k, const Rational& xi, const EvalMode& mode);

/// E[prod_a g(x^a)] (or plus the complementary term for the equal test)
/// over columns drawn from `column` restricted to m junta coordinates, in
/// exact rational arithmetic.
Rational junta_acceptance_exact(std::span<const Rational> table, std::size_t m, const Pmf& column,
                                bool with_complement);
double junta_acceptance(std::span<const double> table, std::size_t m, const Pmf& column,
                        bool with_complement);

struct EqualBounds {
    double completeness;  // 1 - 3 delta/4
    double soundness;     // 1 - 3 acos(1 - delta)/(2 pi)
    double ratio;         // soundness / completeness
};

EqualBounds equal_bounds(double delta);

struct RatioGridMin {
    double ratio;
    double delta;
    std::size_t points;
};
/// Minimum of equal_bounds(delta).ratio over delta = step, 2 step, ..., <= 1.
RatioGridMin equal_ratio_grid_min(double step);

struct AndHardness {
    Rational completeness;  // 1/(2 ceil((k+1)/2))
    Rational soundness;     // 2^-k
    Rational factor;        // ceil((k+1)/2) / 2^(k-1)
};

AndHardness and_hardness(std::size_t k);

nlohmann::json to_json(const TestReport& r);
std::string rational_string(const Rational& r);

}  // namespace max3eq
