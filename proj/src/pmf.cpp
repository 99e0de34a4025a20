#include "max3eq/pmf.hpp"

#include <bit>
#include <stdexcept>
#include <string>

namespace max3eq {
namespace {

using boost::multiprecision::cpp_int;

cpp_int binomial(std::size_t n, std::size_t r) {
    if (r > n) return 0;
    cpp_int c = 1;
    for (std::size_t t = 1; t <= r; ++t) {
        c *= static_cast<unsigned>(n - r + t);
        c /= static_cast<unsigned>(t);
    }
    return c;
}

// Calls fn(mask) for every k-bit mask with exactly `ones` set bits.
template <class Fn>
void for_each_weight(std::size_t k, std::size_t ones, Fn&& fn) {
    if (ones > k) return;
    if (ones == 0) {
        fn(Point{0});
        return;
    }
    const std::uint64_t end = std::uint64_t{1} << k;
    std::uint64_t v = (std::uint64_t{1} << ones) - 1;
    while (v < end) {
        fn(static_cast<Point>(v));
        const std::uint64_t t = v | (v - 1);
        v = (t + 1) | (((~t & (t + 1)) - 1) >> (std::countr_zero(v) + 1));
    }
}

Point all_ones(std::size_t k) { return static_cast<Point>((std::uint64_t{1} << k) - 1); }

}  // namespace

double to_double(const Rational& r) { return r.convert_to<double>(); }

Pmf::Pmf(std::size_t k, std::map<Point, Rational> mass) : k_(k) {
    if (k > kMaxPmfArity) throw std::invalid_argument("pmf arity too large");
    Rational total = 0;
    const std::uint64_t limit = std::uint64_t{1} << k;
    for (auto& [p, m] : mass) {
        if (p >= limit) throw std::invalid_argument("pmf point outside {-1,1}^k");
        if (m < 0) throw std::invalid_argument("pmf mass must be non-negative");
        total += m;
        if (m != 0) mass_.emplace(p, std::move(m));
    }
    if (total != 1) throw std::invalid_argument("pmf masses must sum to exactly 1");
}

Pmf Pmf::uniform(std::size_t k) {
    if (k > kMaxPmfArity) throw std::invalid_argument("pmf arity too large");
    std::map<Point, Rational> m;
    const Rational each(cpp_int(1), cpp_int(1) << k);
    for (std::uint64_t p = 0; p < (std::uint64_t{1} << k); ++p) m.emplace(static_cast<Point>(p), each);
    return Pmf(k, std::move(m));
}

Pmf Pmf::point_mass(std::size_t k, Point p) { return Pmf(k, {{p, Rational(1)}}); }

Rational Pmf::mass(Point p) const {
    const auto it = mass_.find(p);
    return it == mass_.end() ? Rational(0) : it->second;
}

Rational Pmf::min_mass() const {
    if (mass_.size() < (std::size_t{1} << k_)) return 0;
    Rational lo = mass_.begin()->second;
    for (const auto& [p, m] : mass_) lo = m < lo ? m : lo;
    return lo;
}

Pmf d_delta(const Rational& delta) {
    if (!(delta > 0 && delta <= 1)) throw std::invalid_argument("d_delta: delta must lie in (0,1]");
    std::map<Point, Rational> m;
    const Rational equal = Rational(1, 2) - 3 * delta / 8;
    for (Point p = 0; p < 8; ++p) m.emplace(p, (p == 0 || p == 7) ? equal : delta / 8);
    return Pmf(3, std::move(m));
}

Rational all_ones_target(std::size_t k) {
    return Rational(1, static_cast<long long>(2 * ((k + 2) / 2)));
}

Pmf d_k(std::size_t k) {
    if (k < 2) throw std::invalid_argument("d_k: k must be at least 2");
    if (k > kMaxPmfArity) throw std::invalid_argument("d_k: k too large");
    std::map<Point, Rational> m;
    const auto spread = [&](std::size_t ones, const Rational& total) {
        const Rational each = total / Rational(binomial(k, ones));
        for_each_weight(k, ones, [&](Point p) { m.emplace(p, each); });
    };
    const auto kk = static_cast<long long>(k);
    if (k % 2 == 1) {
        m.emplace(all_ones(k), Rational(1, kk + 1));
        spread((k - 1) / 2, Rational(kk, kk + 1));  // coordinate sum -1
    } else {
        m.emplace(all_ones(k), Rational(1, kk + 2));
        spread(k / 2, Rational(1, 2));                // sum 0
        spread(k / 2 - 1, Rational(kk, 2 * kk + 4));  // sum -2
    }
    return Pmf(k, std::move(m));
}

Pmf mix(const Pmf& base, const Rational& xi) {
    if (!(xi >= 0 && xi <= 1)) throw std::invalid_argument("mix: xi must lie in [0,1]");
    const std::size_t k = base.arity();
    std::map<Point, Rational> m;
    const Rational u = xi / Rational(cpp_int(1) << k);
    if (xi != 0) {
        for (std::uint64_t p = 0; p < (std::uint64_t{1} << k); ++p) m.emplace(static_cast<Point>(p), u);
    }
    for (const auto& [p, w] : base.support()) m[p] += (1 - xi) * w;
    return Pmf(k, std::move(m));
}

MomentReport verify_pairwise(const Pmf& p) {
    const std::size_t k = p.arity();
    // Sum integer numerators over a common denominator; rational additions
    // renormalise on every step and dominate the cost for large supports.
    cpp_int common = 1;
    for (const auto& [pt, m] : p.support()) common = boost::multiprecision::lcm(common, denominator(m));
    std::vector<cpp_int> mean(k, 0);
    std::vector<cpp_int> corr(k * k, 0);
    for (const auto& [pt, m] : p.support()) {
        const cpp_int w = numerator(m) * (common / denominator(m));
        for (std::size_t a = 0; a < k; ++a) {
            const bool xa = (pt >> a) & 1u;
            if (xa) mean[a] += w;
            else mean[a] -= w;
            for (std::size_t b = a + 1; b < k; ++b) {
                if (xa == static_cast<bool>((pt >> b) & 1u)) corr[a * k + b] += w;
                else corr[a * k + b] -= w;
            }
        }
    }
    MomentReport r;
    r.means.reserve(k);
    for (std::size_t a = 0; a < k; ++a) {
        r.means.emplace_back(mean[a], common);
        if (mean[a] != 0) r.zero_means = false;
    }
    r.correlations.assign(k, std::vector<Rational>(k, Rational(1)));
    for (std::size_t a = 0; a < k; ++a) {
        for (std::size_t b = a + 1; b < k; ++b) {
            r.correlations[a][b] = r.correlations[b][a] = Rational(corr[a * k + b], common);
            if (corr[a * k + b] != 0) r.zero_correlations = false;
        }
    }
    r.all_ones_probability = p.mass(all_ones(k));
    return r;
}

AliasSampler::AliasSampler(const Pmf& p) : k_(p.arity()) {
    const std::size_t n = p.support().size();
    points_.reserve(n);
    std::vector<double> scaled;
    scaled.reserve(n);
    for (const auto& [pt, m] : p.support()) {
        points_.push_back(pt);
        scaled.push_back(to_double(m) * static_cast<double>(n));
    }
    accept_.assign(n, 1.0);
    alias_.resize(n);
    for (std::size_t i = 0; i < n; ++i) alias_[i] = static_cast<std::uint32_t>(i);
    std::vector<std::uint32_t> small, large;
    for (std::size_t i = 0; i < n; ++i) {
        (scaled[i] < 1.0 ? small : large).push_back(static_cast<std::uint32_t>(i));
    }
    while (!small.empty() && !large.empty()) {
        const auto s = small.back();
        small.pop_back();
        const auto l = large.back();
        accept_[s] = scaled[s];
        alias_[s] = l;
        scaled[l] = (scaled[l] + scaled[s]) - 1.0;
        if (scaled[l] < 1.0) {
            large.pop_back();
            small.push_back(l);
        }
    }
    // leftovers are 1 up to rounding
}

Point AliasSampler::draw(Rng& rng) const {
    const auto i = static_cast<std::size_t>(uniform_below(rng, points_.size()));
    return uniform01(rng) < accept_[i] ? points_[i] : points_[alias_[i]];
}

std::vector<std::vector<std::int8_t>> sample_rows(const AliasSampler& sampler, std::size_t n,
                                                  Rng& rng) {
    std::vector<std::vector<std::int8_t>> rows(sampler.arity(), std::vector<std::int8_t>(n));
    for (std::size_t i = 0; i < n; ++i) {
        const Point p = sampler.draw(rng);
        for (std::size_t a = 0; a < rows.size(); ++a) rows[a][i] = (p >> a) & 1u ? 1 : -1;
    }
    return rows;
}

std::vector<std::vector<std::int8_t>> sample_rows(const Pmf& p, std::size_t n, Rng& rng) {
    return sample_rows(AliasSampler(p), n, rng);
}

nlohmann::json to_json(const Pmf& p) {
    nlohmann::json out = nlohmann::json::array();
    for (const auto& [pt, m] : p.support()) {
        std::vector<int> coords(p.arity());
        for (std::size_t a = 0; a < p.arity(); ++a) coords[a] = (pt >> a) & 1u ? 1 : -1;
        const auto num = numerator(m);
        const auto den = denominator(m);
        if (num > std::numeric_limits<std::int64_t>::max() ||
            den > std::numeric_limits<std::int64_t>::max()) {
            throw std::overflow_error("pmf mass does not fit 64-bit JSON integers");
        }
        out.push_back({{"point", coords},
                       {"num", num.convert_to<std::int64_t>()},
                       {"den", den.convert_to<std::int64_t>()}});
    }
    return out;
}

Pmf pmf_from_json(const nlohmann::json& j) {
    try {
        if (!j.is_array() || j.empty()) throw std::invalid_argument("pmf JSON: expected a non-empty array");
        const std::size_t k = j.front().at("point").size();
        std::map<Point, Rational> m;
        for (const auto& atom : j) {
            const auto coords = atom.at("point").get<std::vector<int>>();
            if (coords.size() != k) throw std::invalid_argument("pmf JSON: inconsistent arity");
            Point p = 0;
            for (std::size_t a = 0; a < k; ++a) {
                if (coords[a] == 1) {
                    p |= Point{1} << a;
                } else if (coords[a] != -1) {
                    throw std::invalid_argument("pmf JSON: coordinates must be +1 or -1");
                }
            }
            const auto den = atom.at("den").get<std::int64_t>();
            if (den <= 0) throw std::invalid_argument("pmf JSON: denominator must be positive");
            m[p] += Rational(atom.at("num").get<std::int64_t>(), den);
        }
        return Pmf(k, std::move(m));
    } catch (const nlohmann::json::exception& e) {
        throw std::invalid_argument(std::string("pmf JSON: ") + e.what());
    }
}

}  // namespace max3eq
