#include "max3eq/kernels.hpp"

namespace max3eq::kernels::scalar {

void fwht(std::span<double> data) {
    const std::size_t n = data.size();
    for (std::size_t h = 1; h < n; h <<= 1) {
        for (std::size_t i = 0; i < n; i += 2 * h) {
            for (std::size_t j = i; j < i + h; ++j) {
                const double a = data[j];
                const double b = data[j + h];
                data[j] = a + b;
                data[j + h] = a - b;
            }
        }
    }
}

void gemv(std::span<const double> a, std::size_t rows, std::size_t cols,
          std::span<const double> x, std::span<double> y) {
    for (std::size_t r = 0; r < rows; ++r) {
        const double* row = a.data() + r * cols;
        double acc = 0.0;
        for (std::size_t c = 0; c < cols; ++c) acc += row[c] * x[c];
        y[r] = acc;
    }
}

void satisfied_counts(std::span<const PackedConstraint> constraints, std::uint32_t first,
                      std::span<std::uint32_t> out) {
    for (std::size_t t = 0; t < out.size(); ++t) {
        const std::uint32_t mask = first + static_cast<std::uint32_t>(t);
        std::uint32_t count = 0;
        for (const auto& c : constraints) {
            const std::uint32_t bi = (mask >> c.i) & 1u;
            const std::uint32_t bj = (mask >> c.j) & 1u;
            const std::uint32_t bk = (mask >> c.k) & 1u;
            count += ((bi ^ bj) == c.flip_ij) & ((bj ^ bk) == c.flip_jk);
        }
        out[t] = count;
    }
}

}  // namespace max3eq::kernels::scalar
