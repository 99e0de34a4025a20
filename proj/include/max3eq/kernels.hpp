#pragma once

// Data-parallel inner loops. Every kernel has a portable scalar reference in
// namespace `scalar` and, on x86-64, an AVX2/FMA variant in namespace `avx2`.
// The unqualified entry points dispatch once, at first use, to the best
// variant the running CPU supports. Set MAX3EQ_ISA=scalar to pin the
// reference path.

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>

namespace max3eq::kernels {

enum class Isa { scalar, avx2 };

std::string_view isa_name(Isa isa);
bool isa_available(Isa isa);
Isa active_isa();
/// Overrides the dispatch choice (tests use this to compare variants).
/// Throws std::invalid_argument if the ISA is not available on this CPU.
void set_active_isa(Isa isa);

/// MAX-3-EQUAL constraint compiled for bit-sliced evaluation. An assignment
/// is a bitmask where bit v is 1 iff x_v = +1. The constraint holds iff
/// bit_i ^ bit_j == flip_ij and bit_j ^ bit_k == flip_jk.
struct PackedConstraint {
    std::uint32_t i, j, k;
    std::uint32_t flip_ij, flip_jk;
};

/// In-place unnormalised Walsh-Hadamard transform; size must be a power of two.
void fwht(std::span<double> data);

/// y = A x with A row-major rows x cols.
void gemv(std::span<const double> a, std::size_t rows, std::size_t cols,
          std::span<const double> x, std::span<double> y);

/// out[t] = number of constraints satisfied by the assignment mask first + t.
void satisfied_counts(std::span<const PackedConstraint> constraints, std::uint32_t first,
                      std::span<std::uint32_t> out);

namespace scalar {
void fwht(std::span<double> data);
void gemv(std::span<const double> a, std::size_t rows, std::size_t cols,
          std::span<const double> x, std::span<double> y);
void satisfied_counts(std::span<const PackedConstraint> constraints, std::uint32_t first,
                      std::span<std::uint32_t> out);
}  // namespace scalar

namespace avx2 {
void fwht(std::span<double> data);
void gemv(std::span<const double> a, std::size_t rows, std::size_t cols,
          std::span<const double> x, std::span<double> y);
void satisfied_counts(std::span<const PackedConstraint> constraints, std::uint32_t first,
                      std::span<std::uint32_t> out);
}  // namespace avx2

}  // namespace max3eq::kernels
