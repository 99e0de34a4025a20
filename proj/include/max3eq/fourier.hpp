#pragma once

// [0,1]-valued functions on the n-cube and their Fourier expansions.
//
// Indexing: table entry b is the point x with x_i = +1 iff bit i of b is set.
// Coefficient entry S is the character x_S = prod_{i in S} x_i for the subset
// encoded by bitmask S.
//
// Influence convention: Inf_i(f) = sum_{S containing i} f_hat(S)^2. For the
// [0,1]-valued dictator (1 + x_i)/2 this gives 1/4, not 1.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include <json.hpp>

namespace max3eq {

/// Arity limit for dense tables (2^24 doubles).
inline constexpr std::size_t kMaxArity = 24;

class BooleanFunction {
public:
    /// Throws std::invalid_argument unless table.size() == 2^n, n <= kMaxArity
    /// and every entry lies in [0, 1].
    BooleanFunction(std::size_t n, std::vector<double> table);

    static BooleanFunction constant(std::size_t n, double value);
    static BooleanFunction dictator(std::size_t n, std::size_t i);
    /// (1 + sign(x_0 + ... + x_{n-1}))/2 for odd n.
    static BooleanFunction majority(std::size_t n);
    static BooleanFunction from_points(std::size_t n,
                                       const std::function<double(std::span<const std::int8_t>)>& fn);

    std::size_t arity() const { return n_; }
    std::span<const double> table() const { return table_; }
    double at(std::uint64_t point) const { return table_[point]; }
    double mean() const;
    /// 1 - f.
    BooleanFunction complement() const;

private:
    std::size_t n_;
    std::vector<double> table_;
};

struct FourierExpansion {
    std::size_t n = 0;
    std::vector<double> coeffs;

    double operator[](std::uint64_t subset) const { return coeffs[subset]; }
    /// Sum of squared coefficients.
    double squared_norm() const;
};

FourierExpansion fourier(const BooleanFunction& f);
/// Table of sum_S f_hat(S) x_S (not range-checked).
std::vector<double> inverse_fourier(const FourierExpansion& e);

/// Inf_i via the Fourier formula. Throws std::out_of_range for i >= n.
double influence(const BooleanFunction& f, std::size_t i);
/// Inf_i as E_x[Var_{x_i}(f)], computed directly from the table.
double influence_by_variance(const BooleanFunction& f, std::size_t i);
/// All n influences from a single transform.
std::vector<double> influences(const BooleanFunction& f);

/// Bonami-Beckner operator T_rho. Throws std::invalid_argument unless
/// -1 <= rho <= 1.
BooleanFunction noise(const BooleanFunction& f, double rho);

/// {i : Inf_i(T_{1-gamma} f) >= tau}, in increasing order.
std::vector<std::size_t> high_influence_set(const BooleanFunction& f, double gamma, double tau);

/// Coordinates the table actually depends on (exact comparison, no tolerance).
std::vector<std::size_t> relevant_coordinates(const BooleanFunction& f);

nlohmann::json to_json(const BooleanFunction& f);
BooleanFunction boolean_function_from_json(const nlohmann::json& j);

}  // namespace max3eq
