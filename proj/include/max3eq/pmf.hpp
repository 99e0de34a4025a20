#pragma once

// Exact-rational probability mass functions over {-1,1}^k and the gadget
// distributions used by the dictatorship tests.
//
// A point of {-1,1}^k is a bitmask: bit a is set iff coordinate a is +1.

#include <cstddef>
#include <cstdint>
#include <map>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>
#include <json.hpp>

#include "max3eq/rng.hpp"

namespace max3eq {

using Rational = boost::multiprecision::cpp_rational;
using Point = std::uint32_t;

inline constexpr std::size_t kMaxPmfArity = 24;

class Pmf {
public:
    /// Zero masses are dropped. Throws std::invalid_argument if k exceeds
    /// kMaxPmfArity, a point lies outside {-1,1}^k, a mass is negative, or the
    /// masses do not sum to exactly 1.
    Pmf(std::size_t k, std::map<Point, Rational> mass);

    static Pmf uniform(std::size_t k);
    static Pmf point_mass(std::size_t k, Point p);

    std::size_t arity() const { return k_; }
    const std::map<Point, Rational>& support() const { return mass_; }
    Rational mass(Point p) const;
    Rational min_mass() const;

private:
    std::size_t k_;
    std::map<Point, Rational> mass_;
};

/// 1/2 - 3 delta/8 on (1,1,1) and (-1,-1,-1), delta/8 elsewhere; 0 < delta <= 1.
Pmf d_delta(const Rational& delta);

/// Pairwise-independent distribution on {-1,1}^k (k >= 2) with
/// Pr[all ones] = 1/(2 ceil((k+1)/2)). Odd k: 1/(k+1) on the all-ones point,
/// the rest spread evenly over points with coordinate sum -1. Even k: 1/(k+2)
/// on all-ones, 1/2 over sum 0, and the rest over sum -2.
Pmf d_k(std::size_t k);

/// 1/(2 ceil((k+1)/2)).
Rational all_ones_target(std::size_t k);

/// (1 - xi) base + xi uniform, 0 <= xi <= 1.
Pmf mix(const Pmf& base, const Rational& xi);

struct MomentReport {
    std::vector<Rational> means;                      // E[x_a]
    std::vector<std::vector<Rational>> correlations;  // E[x_a x_b], unit diagonal
    Rational all_ones_probability;
    bool zero_means = true;
    bool zero_correlations = true;
};

MomentReport verify_pairwise(const Pmf& p);

/// Walker/Vose alias table over a pmf's support (double precision).
class AliasSampler {
public:
    explicit AliasSampler(const Pmf& p);
    Point draw(Rng& rng) const;
    std::size_t arity() const { return k_; }

private:
    std::size_t k_;
    std::vector<Point> points_;
    std::vector<double> accept_;
    std::vector<std::uint32_t> alias_;
};

/// k rows of length n: column i is an independent draw from p, row a holds
/// coordinate a of every draw.
std::vector<std::vector<std::int8_t>> sample_rows(const AliasSampler& sampler, std::size_t n,
                                                  Rng& rng);
std::vector<std::vector<std::int8_t>> sample_rows(const Pmf& p, std::size_t n, Rng& rng);

nlohmann::json to_json(const Pmf& p);
Pmf pmf_from_json(const nlohmann::json& j);

double to_double(const Rational& r);

}  // namespace max3eq
