#include "max3eq/certify.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "max3eq/parallel.hpp"

namespace max3eq {
namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * std::numbers::pi;

void check_unit_interval(double a, const char* what) {
    if (!(a > 0.0 && a <= 1.0)) throw std::domain_error(std::string(what) + ": argument must lie in (0,1]");
}

struct GridMin {
    double value = std::numeric_limits<double>::infinity();
    double at = 0.0;
};

// Minimum of fn over the midpoints of `count` equal cells of [lo, hi].
// Blocks are reduced in index order, so ties resolve to the leftmost point.
GridMin midpoint_grid_min(const std::function<double(double)>& fn, double lo, double hi,
                          std::size_t count) {
    constexpr std::size_t kBlock = 1 << 15;
    const std::size_t blocks = (count + kBlock - 1) / kBlock;
    const double step = (hi - lo) / static_cast<double>(count);
    std::vector<GridMin> partial(blocks);
    for_each_block(blocks, [&](std::size_t b) {
        GridMin best;
        const std::size_t end = std::min(count, (b + 1) * kBlock);
        for (std::size_t t = b * kBlock; t < end; ++t) {
            const double x = lo + (static_cast<double>(t) + 0.5) * step;
            const double v = fn(x);
            if (v < best.value) best = {v, x};
        }
        partial[b] = best;
    });
    GridMin best;
    for (const auto& p : partial) {
        if (p.value < best.value) best = p;
    }
    return best;
}

CertifiedInterval grid_certificate(const std::function<double(double)>& fn, double lo, double hi,
                                   double lipschitz, const GridOptions& opts) {
    const double target = opts.spacing > 0.0 ? opts.spacing : budget_spacing(lipschitz, opts.budget);
    const auto count = static_cast<std::size_t>(std::ceil((hi - lo) / target));
    CertifiedInterval c;
    c.domain_lo = lo;
    c.domain_hi = hi;
    c.grid_points = count;
    c.grid_spacing = (hi - lo) / static_cast<double>(count);
    c.lipschitz_bound = lipschitz;
    c.eval_error = kEvalError;
    const auto best = midpoint_grid_min(fn, lo, hi, count);
    c.min_value = best.value;
    c.argmin_estimate = best.at;
    // Every point of [lo, hi] is within spacing/2 of a midpoint.
    c.lo = best.value - lipschitz * c.grid_spacing / 2.0 - kEvalError;
    c.hi = best.value + kEvalError;
    return c;
}

// Minimum of `bound` sampled densely on [lo, hi] (endpoints included).
double sampled_min(const std::function<double(double)>& bound, double lo, double hi) {
    constexpr std::size_t kSamples = 100001;
    double m = std::numeric_limits<double>::infinity();
    for (std::size_t t = 0; t < kSamples; ++t) {
        const double x = lo + (hi - lo) * static_cast<double>(t) / static_cast<double>(kSamples - 1);
        m = std::min(m, bound(x));
    }
    return m;
}

}  // namespace

double h1(double a) {
    check_unit_interval(a, "h1");
    return (1.0 - (2.0 * std::acos(a) + std::acos(2.0 * a - 1.0)) / kTwoPi) / a;
}

double h2(double a) {
    check_unit_interval(a, "h2");
    return (1.0 - 3.0 * std::acos((4.0 * a - 1.0) / 3.0) / kTwoPi) / a;
}

double h2_substituted(double x) {
    if (!(x >= 0.0 && x <= kPi / 2.0)) throw std::domain_error("h2_substituted: x must lie in [0, pi/2]");
    return 4.0 * (1.0 - 3.0 * x / kTwoPi) / (1.0 + 3.0 * std::cos(x));
}

double small_branch(double a) {
    if (!(a > 0.0 && a <= 0.25)) throw std::domain_error("small_branch: argument must lie in (0,1/4]");
    return (1.0 - (kPi + std::acos(4.0 * a - 1.0)) / kTwoPi) / a;
}

double delta_form(double delta) {
    if (!(delta > 0.0 && delta <= 1.0)) throw std::domain_error("delta_form: delta must lie in (0,1]");
    return (1.0 - 3.0 * std::acos(1.0 - delta) / kTwoPi) / (1.0 - 3.0 * delta / 4.0);
}

double arccos_sum(double a, double b, double c, double d) {
    const auto ac = [](double v) { return std::acos(std::min(1.0, std::max(-1.0, v))); };
    return ac(2.0 * (a + b) - 1.0) + ac(2.0 * (a + c) - 1.0) + ac(2.0 * (a + d) - 1.0);
}

double boundary_sup(double a) {
    check_unit_interval(a, "boundary_sup");
    return std::acos(2.0 * a - 1.0) + 2.0 * std::acos(a);
}

double critical_sup(double a) {
    check_unit_interval(a, "critical_sup");
    if (a <= 0.25) return kPi + std::acos(4.0 * a - 1.0);
    return 3.0 * std::acos((4.0 * a - 1.0) / 3.0);
}

double psi(double a) { return std::max(boundary_sup(a), critical_sup(a)); }

double budget_spacing(double lipschitz, double budget) {
    if (!(budget > kEvalError)) throw std::invalid_argument("budget must exceed the evaluation error");
    return 2.0 * (budget - kEvalError) / lipschitz;
}

CertifiedInterval certify_h1_infimum(const GridOptions& opts) {
    constexpr double kLeft = 0.179, kRight = 0.99;
    auto c = grid_certificate([](double a) { return h1(a); }, kLeft, kRight, 500.0, opts);

    // (0, 0.179]: h1(a) >= 1/pi + 1/(pi sqrt(2a)), decreasing in a.
    RegionBound left{"left-end", 0.0, kLeft, 0.85, 0.0, false};
    left.checked_minimum = sampled_min(
        [](double a) { return 1.0 / kPi + 1.0 / (kPi * std::sqrt(2.0 * a)); }, 1e-9, kLeft);
    left.holds = left.checked_minimum >= left.claimed_bound;
    // [0.99, 1]: h1(a) >= (1 - 11 sqrt(1 - a)/(2 pi)) / a.
    RegionBound right{"right-end", kRight, 1.0, 0.83, 0.0, false};
    right.checked_minimum = sampled_min(
        [](double a) { return (1.0 - 11.0 * std::sqrt(1.0 - a) / kTwoPi) / a; }, kRight, 1.0);
    right.holds = right.checked_minimum >= right.claimed_bound;
    c.regions = {left, right};

    // The end regions can only lower the bracket's left end; the right end
    // is an attained value and stays an upper bound on the infimum.
    for (const auto& r : c.regions) {
        if (!r.holds) throw std::logic_error("h1 region bound " + r.name + " failed");
        c.lo = std::min(c.lo, r.claimed_bound);
    }
    return c;
}

CertifiedInterval certify_h2_infimum(const GridOptions& opts) {
    return grid_certificate([](double x) { return h2_substituted(x); }, 0.0, kPi / 2.0, 50.0, opts);
}

AlphaCertificate certify_alpha(const GridOptions& h1_opts, const GridOptions& h2_opts) {
    AlphaCertificate out;
    out.h1 = certify_h1_infimum(h1_opts);
    out.h2 = certify_h2_infimum(h2_opts);
    // small_branch is decreasing on (0, 1/4], so its infimum is the value at 1/4.
    out.small_branch_value = small_branch(0.25);

    out.alpha = out.h2;
    out.alpha.lo = std::min({out.h1.lo, out.h2.lo, out.small_branch_value});
    out.alpha.hi = std::min({out.h1.hi, out.h2.hi, out.small_branch_value});
    out.argmin_a = (1.0 + 3.0 * std::cos(out.h2.argmin_estimate)) / 4.0;
    out.argmin_delta = 4.0 * (1.0 - out.argmin_a) / 3.0;
    return out;
}

std::vector<TrigFactResult> verify_trig_facts(std::size_t grid) {
    if (grid < 2) throw std::invalid_argument("verify_trig_facts: grid must be at least 2");
    const auto point = [grid](double lo, double hi, std::size_t t) {
        return lo + (hi - lo) * static_cast<double>(t) / static_cast<double>(grid - 1);
    };
    const auto scan = [&](std::string name, std::string statement, double lo, double hi,
                          const std::function<double(double)>& margin) {
        TrigFactResult r{std::move(name), std::move(statement),
                         std::numeric_limits<double>::infinity(), lo, grid, false};
        for (std::size_t t = 0; t < grid; ++t) {
            const double x = point(lo, hi, t);
            const double m = margin(x);
            if (m < r.worst_margin) {
                r.worst_margin = m;
                r.worst_at = x;
            }
        }
        r.holds = r.worst_margin >= -kTrigSlack;
        return r;
    };

    std::vector<TrigFactResult> out;
    out.push_back(scan("double-angle", "2 acos(a) - acos(2a-1) >= 0 on [0,1]", 0.0, 1.0, [](double a) {
        return 2.0 * std::acos(a) - std::acos(2.0 * a - 1.0);
    }));

    // Both sign cases share one grid on [-1, 1].
    out.push_back(scan("branch-order", "pi + acos(x) <= 3 acos(x/3) for x >= 0, >= for x <= 0", -1.0, 1.0,
                       [](double x) {
                           const double diff = 3.0 * std::acos(x / 3.0) - kPi - std::acos(x);
                           return x >= 0.0 ? diff : -diff;
                       }));

    {
        // Monotone decrease of small_branch on (0, 1/4]: consecutive grid
        // values must not increase.
        TrigFactResult r{"small-branch-decreasing", "(1 - (pi + acos(4x-1))/(2 pi))/x is decreasing on (0,1/4]",
                         std::numeric_limits<double>::infinity(), 0.0, grid, false};
        double prev = small_branch(0.25 / static_cast<double>(grid));
        for (std::size_t t = 2; t <= grid; ++t) {
            const double x = 0.25 * static_cast<double>(t) / static_cast<double>(grid);
            const double cur = small_branch(x);
            if (prev - cur < r.worst_margin) {
                r.worst_margin = prev - cur;
                r.worst_at = x;
            }
            prev = cur;
        }
        r.holds = r.worst_margin >= -kTrigSlack;
        out.push_back(r);
    }

    out.push_back(scan("acos-linear", "acos(x) <= pi/2 - x on [0,1]", 0.0, 1.0,
                       [](double x) { return kPi / 2.0 - x - std::acos(x); }));
    out.push_back(scan("acos-shifted-sqrt", "acos(x-1) <= pi - sqrt(x) on [0,1]", 0.0, 1.0,
                       [](double x) { return kPi - std::sqrt(x) - std::acos(x - 1.0); }));
    out.push_back(scan("acos-sqrt", "acos(x) <= 3 sqrt(1-x) on [0,1]", 0.0, 1.0,
                       [](double x) { return 3.0 * std::sqrt(1.0 - x) - std::acos(x); }));
    out.push_back(scan("acos-double-sqrt", "acos(2x-1) <= 5 sqrt(1-x) on [0.9,1]", 0.9, 1.0,
                       [](double x) { return 5.0 * std::sqrt(1.0 - x) - std::acos(2.0 * x - 1.0); }));
    return out;
}

nlohmann::json to_json(const CertifiedInterval& c) {
    nlohmann::json regions = nlohmann::json::array();
    for (const auto& r : c.regions) {
        regions.push_back({{"name", r.name},
                           {"lo", r.lo},
                           {"hi", r.hi},
                           {"claimed_bound", r.claimed_bound},
                           {"checked_minimum", r.checked_minimum},
                           {"holds", r.holds}});
    }
    return {{"lo", c.lo},
            {"hi", c.hi},
            {"width", c.width()},
            {"min_value", c.min_value},
            {"argmin_estimate", c.argmin_estimate},
            {"domain", {c.domain_lo, c.domain_hi}},
            {"grid_points", c.grid_points},
            {"grid_spacing", c.grid_spacing},
            {"lipschitz_bound", c.lipschitz_bound},
            {"eval_error", c.eval_error},
            {"regions", regions}};
}

nlohmann::json to_json(const AlphaCertificate& c) {
    return {{"alpha", to_json(c.alpha)},
            {"branches",
             {{"small_a", c.small_branch_value}, {"h1", to_json(c.h1)}, {"h2", to_json(c.h2)}}},
            {"argmin_a", c.argmin_a},
            {"argmin_delta", c.argmin_delta}};
}

nlohmann::json to_json(const std::vector<TrigFactResult>& facts) {
    nlohmann::json out = nlohmann::json::array();
    for (const auto& f : facts) {
        out.push_back({{"name", f.name},
                       {"statement", f.statement},
                       {"worst_margin", f.worst_margin},
                       {"worst_at", f.worst_at},
                       {"points", f.points},
                       {"holds", f.holds}});
    }
    return out;
}

}  // namespace max3eq
