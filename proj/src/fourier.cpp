#include "max3eq/fourier.hpp"

#include <bit>
#include <cmath>
#include <stdexcept>
#include <string>

#include "max3eq/kernels.hpp"

namespace max3eq {
namespace {

std::size_t checked_size(std::size_t n) {
    if (n > kMaxArity) {
        throw std::invalid_argument("arity " + std::to_string(n) + " exceeds the dense limit " +
                                    std::to_string(kMaxArity));
    }
    return std::size_t{1} << n;
}

double parity_sign(std::uint64_t subset) { return (std::popcount(subset) & 1) ? -1.0 : 1.0; }

}  // namespace

BooleanFunction::BooleanFunction(std::size_t n, std::vector<double> table)
    : n_(n), table_(std::move(table)) {
    if (table_.size() != checked_size(n)) {
        throw std::invalid_argument("table length must be 2^n");
    }
    for (double v : table_) {
        if (!(v >= 0.0 && v <= 1.0)) throw std::invalid_argument("table entries must lie in [0,1]");
    }
}

BooleanFunction BooleanFunction::constant(std::size_t n, double value) {
    return BooleanFunction(n, std::vector<double>(checked_size(n), value));
}

BooleanFunction BooleanFunction::dictator(std::size_t n, std::size_t i) {
    if (i >= n) throw std::out_of_range("dictator coordinate out of range");
    std::vector<double> t(checked_size(n));
    for (std::size_t b = 0; b < t.size(); ++b) t[b] = (b >> i) & 1u ? 1.0 : 0.0;
    return BooleanFunction(n, std::move(t));
}

BooleanFunction BooleanFunction::majority(std::size_t n) {
    if (n % 2 == 0) throw std::invalid_argument("majority needs an odd arity");
    std::vector<double> t(checked_size(n));
    for (std::size_t b = 0; b < t.size(); ++b) {
        t[b] = 2 * std::popcount(b) > static_cast<int>(n) ? 1.0 : 0.0;
    }
    return BooleanFunction(n, std::move(t));
}

BooleanFunction BooleanFunction::from_points(
    std::size_t n, const std::function<double(std::span<const std::int8_t>)>& fn) {
    std::vector<double> t(checked_size(n));
    std::vector<std::int8_t> x(n);
    for (std::size_t b = 0; b < t.size(); ++b) {
        for (std::size_t i = 0; i < n; ++i) x[i] = (b >> i) & 1u ? 1 : -1;
        t[b] = fn(x);
    }
    return BooleanFunction(n, std::move(t));
}

double BooleanFunction::mean() const {
    double s = 0.0;
    for (double v : table_) s += v;
    return s / static_cast<double>(table_.size());
}

BooleanFunction BooleanFunction::complement() const {
    auto t = table_;
    for (auto& v : t) v = 1.0 - v;
    return BooleanFunction(n_, std::move(t));
}

double FourierExpansion::squared_norm() const {
    double s = 0.0;
    for (double c : coeffs) s += c * c;
    return s;
}

FourierExpansion fourier(const BooleanFunction& f) {
    FourierExpansion e;
    e.n = f.arity();
    e.coeffs.assign(f.table().begin(), f.table().end());
    kernels::fwht(e.coeffs);
    // x_i = +1 on set bits, so x_S = (-1)^|S| (-1)^{|S & b|}.
    const double scale = 1.0 / static_cast<double>(e.coeffs.size());
    for (std::uint64_t s = 0; s < e.coeffs.size(); ++s) e.coeffs[s] *= parity_sign(s) * scale;
    return e;
}

std::vector<double> inverse_fourier(const FourierExpansion& e) {
    std::vector<double> t(e.coeffs.size());
    for (std::uint64_t s = 0; s < t.size(); ++s) t[s] = parity_sign(s) * e.coeffs[s];
    kernels::fwht(t);
    return t;
}

std::vector<double> influences(const BooleanFunction& f) {
    const auto e = fourier(f);
    std::vector<double> inf(f.arity(), 0.0);
    for (std::uint64_t s = 1; s < e.coeffs.size(); ++s) {
        const double w = e.coeffs[s] * e.coeffs[s];
        for (std::uint64_t rest = s; rest; rest &= rest - 1) inf[std::countr_zero(rest)] += w;
    }
    return inf;
}

double influence(const BooleanFunction& f, std::size_t i) {
    if (i >= f.arity()) throw std::out_of_range("influence: coordinate out of range");
    const auto e = fourier(f);
    double s = 0.0;
    for (std::uint64_t set = 0; set < e.coeffs.size(); ++set) {
        if ((set >> i) & 1u) s += e.coeffs[set] * e.coeffs[set];
    }
    return s;
}

double influence_by_variance(const BooleanFunction& f, std::size_t i) {
    if (i >= f.arity()) throw std::out_of_range("influence: coordinate out of range");
    const auto t = f.table();
    const std::uint64_t bit = std::uint64_t{1} << i;
    double s = 0.0;
    for (std::uint64_t b = 0; b < t.size(); ++b) {
        if (b & bit) continue;
        const double half_diff = 0.5 * (t[b] - t[b | bit]);
        s += half_diff * half_diff;  // Var over x_i with the rest fixed
    }
    return s / static_cast<double>(t.size() / 2);
}

BooleanFunction noise(const BooleanFunction& f, double rho) {
    if (!(rho >= -1.0 && rho <= 1.0)) throw std::invalid_argument("noise: rho must lie in [-1,1]");
    auto e = fourier(f);
    std::vector<double> pw(f.arity() + 1, 1.0);
    for (std::size_t d = 1; d < pw.size(); ++d) pw[d] = pw[d - 1] * rho;
    for (std::uint64_t s = 0; s < e.coeffs.size(); ++s) e.coeffs[s] *= pw[std::popcount(s)];
    auto t = inverse_fourier(e);
    // T_rho is an average of f, so only roundoff can leave [0,1].
    for (auto& v : t) v = std::min(1.0, std::max(0.0, v));
    return BooleanFunction(f.arity(), std::move(t));
}

std::vector<std::size_t> high_influence_set(const BooleanFunction& f, double gamma, double tau) {
    if (!(gamma > 0.0 && gamma < 1.0) || !(tau > 0.0)) {
        throw std::invalid_argument("high_influence_set: need 0 < gamma < 1 and tau > 0");
    }
    const auto inf = influences(noise(f, 1.0 - gamma));
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < inf.size(); ++i) {
        if (inf[i] >= tau) out.push_back(i);
    }
    return out;
}

std::vector<std::size_t> relevant_coordinates(const BooleanFunction& f) {
    const auto t = f.table();
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < f.arity(); ++i) {
        const std::uint64_t bit = std::uint64_t{1} << i;
        for (std::uint64_t b = 0; b < t.size(); ++b) {
            if (!(b & bit) && t[b] != t[b | bit]) {
                out.push_back(i);
                break;
            }
        }
    }
    return out;
}

nlohmann::json to_json(const BooleanFunction& f) {
    return {{"n", f.arity()}, {"table", std::vector<double>(f.table().begin(), f.table().end())}};
}

BooleanFunction boolean_function_from_json(const nlohmann::json& j) {
    try {
        return BooleanFunction(j.at("n").get<std::size_t>(), j.at("table").get<std::vector<double>>());
    } catch (const nlohmann::json::exception& e) {
        throw std::invalid_argument(std::string("boolean function JSON: ") + e.what());
    }
}

}  // namespace max3eq
