#include "max3eq/dictatorship.hpp"

#include <bit>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "max3eq/parallel.hpp"
#include "max3eq/rng.hpp"

namespace max3eq {
namespace {

constexpr std::uint64_t kBlockTrials = 1 << 13;
constexpr std::size_t kMaxRationalTensorBits = 12;

// E over columns mu^{(x) m} of prod_{a<k} g(x^a), where g is a table on the
// m junta coordinates and mu is indexed by points of {-1,1}^k.
//
// The last row is folded in first: expanding g coordinate by coordinate with
// the 2^(k-1) x 2 matrix mu(rows 0..k-2, row k-1) gives a tensor over the
// remaining rows, which is then contracted with g one row at a time.
template <class T>
T product_expectation(std::span<const T> g, std::size_t m, std::size_t k, const std::vector<T>& mu) {
    const std::size_t w = k - 1;
    const std::size_t C = std::size_t{1} << w;
    std::vector<T> cur(g.begin(), g.end());
    std::size_t low = 1;  // C^j
    for (std::size_t j = 0; j < m; ++j) {
        const std::size_t high = std::size_t{1} << (m - j - 1);
        std::vector<T> next(low * C * high, T(0));
        for (std::size_t h = 0; h < high; ++h) {
            for (std::size_t b = 0; b < 2; ++b) {
                for (std::size_t l = 0; l < low; ++l) {
                    const T& val = cur[l + b * low + h * 2 * low];
                    if (val == 0) continue;
                    for (std::size_t c = 0; c < C; ++c) {
                        const T& p = mu[c | (b << w)];
                        if (p == 0) continue;
                        next[l + c * low + h * low * C] += p * val;
                    }
                }
            }
        }
        cur = std::move(next);
        low *= C;
    }
    for (std::size_t r = w; r-- > 0;) {
        const std::size_t width = r + 1;
        const std::size_t mask = (std::size_t{1} << width) - 1;
        std::vector<T> next(std::size_t{1} << (m * r), T(0));
        for (std::size_t idx = 0; idx < cur.size(); ++idx) {
            if (cur[idx] == 0) continue;
            std::size_t x = 0, out = 0;
            for (std::size_t j = 0; j < m; ++j) {
                const std::size_t cj = (idx >> (width * j)) & mask;
                x |= (cj >> r) << j;
                out |= (cj & (mask >> 1)) << (r * j);
            }
            if (g[x] == 0) continue;
            next[out] += cur[idx] * g[x];
        }
        cur = std::move(next);
    }
    return cur[0];
}

template <class T>
std::vector<T> dense_masses(const Pmf& p, const std::function<T(const Rational&)>& conv) {
    std::vector<T> mu(std::size_t{1} << p.arity(), T(0));
    for (const auto& [pt, m] : p.support()) mu[pt] = conv(m);
    return mu;
}

template <class T>
T acceptance(std::span<const T> table, std::size_t m, std::size_t k, const std::vector<T>& mu,
             bool with_complement) {
    T v = product_expectation<T>(table, m, k, mu);
    if (with_complement) {
        std::vector<T> comp(table.begin(), table.end());
        for (auto& x : comp) x = T(1) - x;
        v += product_expectation<T>(std::span<const T>(comp), m, k, mu);
    }
    return v;
}

TestReport evaluate_test(const TestFunction& f, const Pmf& column, bool with_complement,
                         const EvalMode& mode) {
    const std::size_t k = column.arity();
    TestReport r;
    r.method = mode.method;
    if (mode.method == EvalMethod::exact_junta) {
        if (!f.has_junta()) {
            throw std::invalid_argument("exact mode needs a function with a known junta");
        }
        const std::size_t m = f.junta_coords().size();
        if (m > kMaxExactJunta || m * (k - 1) > kMaxExactTensorBits) {
            throw std::invalid_argument("exact mode: junta of " + std::to_string(m) +
                                        " coordinates is too large");
        }
        r.accept_prob = junta_acceptance(f.junta_table(), m, column, with_complement);
        if (m * (k - 1) <= kMaxRationalTensorBits) {
            std::vector<Rational> table;
            table.reserve(f.junta_table().size());
            for (double v : f.junta_table()) table.emplace_back(v);  // exact conversion
            r.exact = junta_acceptance_exact(table, m, column, with_complement);
            r.accept_prob = to_double(*r.exact);
        }
        return r;
    }

    if (mode.trials == 0) throw std::invalid_argument("Monte Carlo mode needs trials > 0");
    const AliasSampler sampler(column);
    // Columns are i.i.d., so a junta only needs its own coordinates sampled.
    const bool use_junta = f.has_junta();
    const std::size_t width = use_junta ? f.junta_coords().size() : f.arity();
    const std::size_t blocks = (mode.trials + kBlockTrials - 1) / kBlockTrials;
    std::vector<RunningStats> partial(blocks);
    for_each_block(blocks, [&](std::size_t b) {
        Rng rng = make_stream(mode.seed, b);
        const std::uint64_t count = std::min(kBlockTrials, mode.trials - b * kBlockTrials);
        std::vector<Point> cols(width);
        std::vector<std::int8_t> row(f.arity(), -1);
        RunningStats stats;
        for (std::uint64_t t = 0; t < count; ++t) {
            for (auto& c : cols) c = sampler.draw(rng);
            double all = 1.0, none = 1.0;
            for (std::size_t a = 0; a < k; ++a) {
                double v;
                if (use_junta) {
                    std::size_t idx = 0;
                    for (std::size_t j = 0; j < width; ++j) idx |= static_cast<std::size_t>((cols[j] >> a) & 1u) << j;
                    v = f.junta_table()[idx];
                } else {
                    for (std::size_t j = 0; j < width; ++j) row[j] = (cols[j] >> a) & 1u ? 1 : -1;
                    v = f(row);
                }
                all *= v;
                none *= 1.0 - v;
            }
            stats.add(with_complement ? all + none : all);
        }
        partial[b] = stats;
    });
    const auto est = merge_blocks(partial);
    r.accept_prob = est.mean;
    r.estimate = est;
    return r;
}

}  // namespace

TestFunction::TestFunction(std::string name, std::size_t arity, Evaluator eval)
    : name_(std::move(name)), arity_(arity), eval_(std::move(eval)) {}

TestFunction TestFunction::junta(std::string name, std::size_t arity, std::vector<std::size_t> coords,
                                 std::vector<double> table) {
    if (coords.size() > 30 || table.size() != (std::size_t{1} << coords.size())) {
        throw std::invalid_argument("junta table must have 2^|coords| entries");
    }
    for (std::size_t c : coords) {
        if (c >= arity) throw std::invalid_argument("junta coordinate out of range");
    }
    for (double v : table) {
        if (!(v >= 0.0 && v <= 1.0)) throw std::invalid_argument("junta values must lie in [0,1]");
    }
    TestFunction f(std::move(name), arity, [coords, table](std::span<const std::int8_t> x) {
        std::size_t idx = 0;
        for (std::size_t t = 0; t < coords.size(); ++t) {
            if (x[coords[t]] == 1) idx |= std::size_t{1} << t;
        }
        return table[idx];
    });
    f.junta_coords_ = std::move(coords);
    f.junta_table_ = std::move(table);
    return f;
}

TestFunction TestFunction::dictator(std::size_t arity, std::size_t i) {
    return junta("dictator", arity, {i}, {0.0, 1.0});
}

TestFunction TestFunction::constant(std::size_t arity, double value) {
    return junta("constant", arity, {}, {value});
}

TestFunction TestFunction::majority(std::size_t arity) {
    if (arity % 2 == 0) throw std::invalid_argument("majority needs an odd arity");
    return TestFunction("majority-" + std::to_string(arity), arity, [](std::span<const std::int8_t> x) {
        int s = 0;
        for (auto v : x) s += v;
        return s > 0 ? 1.0 : 0.0;
    });
}

TestFunction TestFunction::from_table(std::string name, const BooleanFunction& f) {
    const auto coords = relevant_coordinates(f);
    std::vector<double> table(std::size_t{1} << coords.size());
    for (std::size_t idx = 0; idx < table.size(); ++idx) {
        std::uint64_t point = 0;  // irrelevant coordinates fixed to -1
        for (std::size_t t = 0; t < coords.size(); ++t) {
            if ((idx >> t) & 1u) point |= std::uint64_t{1} << coords[t];
        }
        table[idx] = f.at(point);
    }
    return junta(std::move(name), f.arity(), coords, std::move(table));
}

TestFunction TestFunction::random_balanced(std::size_t arity, std::uint64_t seed) {
    if (arity == 0 || arity > kMaxArity) throw std::invalid_argument("random_balanced: bad arity");
    std::vector<double> table(std::size_t{1} << arity, 0.0);
    std::fill(table.begin(), table.begin() + static_cast<std::ptrdiff_t>(table.size() / 2), 1.0);
    Rng rng(seed);
    for (std::size_t i = table.size(); i > 1; --i) {
        std::swap(table[i - 1], table[uniform_below(rng, i)]);
    }
    return from_table("random-balanced", BooleanFunction(arity, std::move(table)));
}

TestFunction zoo_function(const std::string& name, std::size_t arity, std::uint64_t seed) {
    if (name == "dictator") return TestFunction::dictator(arity, 0);
    if (name == "const-half") return TestFunction::constant(arity, 0.5);
    if (name == "random-balanced") return TestFunction::random_balanced(arity, seed);
    const std::string prefix = "majority-";
    if (name.rfind(prefix, 0) == 0) {
        std::size_t t = 0;
        try {
            std::size_t used = 0;
            t = std::stoul(name.substr(prefix.size()), &used);
            if (used != name.size() - prefix.size()) throw std::invalid_argument(name);
        } catch (const std::exception&) {
            throw std::invalid_argument("bad majority size in '" + name + "'");
        }
        return TestFunction::majority(t);
    }
    throw std::invalid_argument("unknown function '" + name + "'");
}

Rational junta_acceptance_exact(std::span<const Rational> table, std::size_t m, const Pmf& column,
                                bool with_complement) {
    if (table.size() != (std::size_t{1} << m)) throw std::invalid_argument("table must have 2^m entries");
    const auto mu = dense_masses<Rational>(column, [](const Rational& r) { return r; });
    return acceptance<Rational>(table, m, column.arity(), mu, with_complement);
}

double junta_acceptance(std::span<const double> table, std::size_t m, const Pmf& column,
                        bool with_complement) {
    if (table.size() != (std::size_t{1} << m)) throw std::invalid_argument("table must have 2^m entries");
    const auto mu = dense_masses<double>(column, [](const Rational& r) { return to_double(r); });
    return acceptance<double>(table, m, column.arity(), mu, with_complement);
}

TestReport accept_equal(const TestFunction& f, const Rational& delta, const EvalMode& mode) {
    auto r = evaluate_test(f, d_delta(delta), true, mode);
    const auto b = equal_bounds(to_double(delta));
    r.completeness_bound = b.completeness;
    r.soundness_bound = b.soundness;
    return r;
}

TestReport accept_and(const TestFunction& f, std::size_t k, const Rational& xi, const EvalMode& mode) {
    if (k < 3) throw std::invalid_argument("accept_and: k must be at least 3");
    if (!(xi > 0 && xi <= 1)) throw std::invalid_argument("accept_and: xi must lie in (0,1]");
    auto r = evaluate_test(f, mix(d_k(k), xi), false, mode);
    const Rational two_k = Rational(boost::multiprecision::cpp_int(1) << k);
    r.completeness_bound = to_double(all_ones_target(k) * (1 - xi) + xi / two_k);
    r.soundness_bound = std::ldexp(1.0, -static_cast<int>(k));
    return r;
}

EqualBounds equal_bounds(double delta) {
    if (!(delta > 0.0 && delta <= 1.0)) throw std::domain_error("equal_bounds: delta must lie in (0,1]");
    EqualBounds b;
    b.completeness = 1.0 - 3.0 * delta / 4.0;
    b.soundness = 1.0 - 3.0 * std::acos(1.0 - delta) / (2.0 * std::numbers::pi);
    b.ratio = b.soundness / b.completeness;
    return b;
}

RatioGridMin equal_ratio_grid_min(double step) {
    if (!(step > 0.0 && step <= 1.0)) throw std::invalid_argument("equal_ratio_grid_min: bad step");
    const auto count = static_cast<std::size_t>(std::floor(1.0 / step + 1e-9));
    RatioGridMin best{INFINITY, 0.0, count};
    for (std::size_t t = 1; t <= count; ++t) {
        const double delta = std::min(1.0, static_cast<double>(t) * step);
        const double r = equal_bounds(delta).ratio;
        if (r < best.ratio) {
            best.ratio = r;
            best.delta = delta;
        }
    }
    return best;
}

AndHardness and_hardness(std::size_t k) {
    if (k < 3) throw std::invalid_argument("and_hardness: k must be at least 3");
    using boost::multiprecision::cpp_int;
    const auto half_up = static_cast<long long>((k + 2) / 2);  // ceil((k+1)/2)
    AndHardness h;
    h.completeness = all_ones_target(k);
    h.soundness = Rational(cpp_int(1), cpp_int(1) << k);
    h.factor = Rational(cpp_int(half_up), cpp_int(1) << (k - 1));
    return h;
}

std::string rational_string(const Rational& r) {
    return numerator(r).str() + "/" + denominator(r).str();
}

nlohmann::json to_json(const TestReport& r) {
    nlohmann::json j{{"method", r.method == EvalMethod::exact_junta ? "exact-junta" : "monte-carlo"},
                     {"accept_prob", r.accept_prob},
                     {"completeness_bound", r.completeness_bound},
                     {"soundness_bound", r.soundness_bound}};
    if (r.exact) j["exact"] = rational_string(*r.exact);
    if (r.estimate) {
        j["std_error"] = r.estimate->std_error;
        j["samples"] = r.estimate->samples;
    }
    return j;
}

}  // namespace max3eq
