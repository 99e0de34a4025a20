#include "max3eq/kernels.hpp"

#include <immintrin.h>

namespace max3eq::kernels::avx2 {

void fwht(std::span<double> data) {
    const std::size_t n = data.size();
    double* d = data.data();
    std::size_t h = 1;
    // Strides below one register width stay scalar.
    for (; h < n && h < 4; h <<= 1) {
        for (std::size_t i = 0; i < n; i += 2 * h) {
            for (std::size_t j = i; j < i + h; ++j) {
                const double a = d[j];
                const double b = d[j + h];
                d[j] = a + b;
                d[j + h] = a - b;
            }
        }
    }
    for (; h < n; h <<= 1) {
        for (std::size_t i = 0; i < n; i += 2 * h) {
            for (std::size_t j = i; j < i + h; j += 4) {
                const __m256d a = _mm256_loadu_pd(d + j);
                const __m256d b = _mm256_loadu_pd(d + j + h);
                _mm256_storeu_pd(d + j, _mm256_add_pd(a, b));
                _mm256_storeu_pd(d + j + h, _mm256_sub_pd(a, b));
            }
        }
    }
}

void gemv(std::span<const double> a, std::size_t rows, std::size_t cols,
          std::span<const double> x, std::span<double> y) {
    const double* xp = x.data();
    for (std::size_t r = 0; r < rows; ++r) {
        const double* row = a.data() + r * cols;
        __m256d acc0 = _mm256_setzero_pd();
        __m256d acc1 = _mm256_setzero_pd();
        std::size_t c = 0;
        for (; c + 8 <= cols; c += 8) {
            acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(row + c), _mm256_loadu_pd(xp + c), acc0);
            acc1 = _mm256_fmadd_pd(_mm256_loadu_pd(row + c + 4), _mm256_loadu_pd(xp + c + 4), acc1);
        }
        for (; c + 4 <= cols; c += 4) {
            acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(row + c), _mm256_loadu_pd(xp + c), acc0);
        }
        acc0 = _mm256_add_pd(acc0, acc1);
        const __m128d lo = _mm256_castpd256_pd128(acc0);
        const __m128d hi = _mm256_extractf128_pd(acc0, 1);
        __m128d s = _mm_add_pd(lo, hi);
        s = _mm_add_sd(s, _mm_unpackhi_pd(s, s));
        double acc = _mm_cvtsd_f64(s);
        for (; c < cols; ++c) acc += row[c] * xp[c];
        y[r] = acc;
    }
}

void satisfied_counts(std::span<const PackedConstraint> constraints, std::uint32_t first,
                      std::span<std::uint32_t> out) {
    const __m256i one = _mm256_set1_epi32(1);
    const __m256i lane = _mm256_setr_epi32(0, 1, 2, 3, 4, 5, 6, 7);
    std::size_t t = 0;
    for (; t + 8 <= out.size(); t += 8) {
        const __m256i mask =
            _mm256_add_epi32(_mm256_set1_epi32(static_cast<int>(first + t)), lane);
        __m256i count = _mm256_setzero_si256();
        for (const auto& c : constraints) {
            const __m256i bi = _mm256_srl_epi32(mask, _mm_cvtsi32_si128(static_cast<int>(c.i)));
            const __m256i bj = _mm256_srl_epi32(mask, _mm_cvtsi32_si128(static_cast<int>(c.j)));
            const __m256i bk = _mm256_srl_epi32(mask, _mm_cvtsi32_si128(static_cast<int>(c.k)));
            const __m256i e1 = _mm256_xor_si256(_mm256_xor_si256(bi, bj),
                                                _mm256_set1_epi32(static_cast<int>(c.flip_ij)));
            const __m256i e2 = _mm256_xor_si256(_mm256_xor_si256(bj, bk),
                                                _mm256_set1_epi32(static_cast<int>(c.flip_jk)));
            // low bit of (e1 | e2) is 0 exactly when the constraint holds
            const __m256i miss = _mm256_and_si256(_mm256_or_si256(e1, e2), one);
            count = _mm256_add_epi32(count, _mm256_xor_si256(miss, one));
        }
        _mm256_storeu_si256(reinterpret_cast<__m256i*>(out.data() + t), count);
    }
    if (t < out.size()) {
        scalar::satisfied_counts(constraints, first + static_cast<std::uint32_t>(t),
                                 out.subspan(t));
    }
}

}  // namespace max3eq::kernels::avx2
