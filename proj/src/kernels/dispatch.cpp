#include "max3eq/kernels.hpp"

#include <atomic>
#include <cstdlib>
#include <stdexcept>
#include <string>

namespace max3eq::kernels {
namespace {

bool cpu_has_avx2() {
#if defined(MAX3EQ_HAVE_AVX2) && (defined(__x86_64__) || defined(__i386__))
    __builtin_cpu_init();
    return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
    return false;
#endif
}

Isa detect() {
    if (const char* env = std::getenv("MAX3EQ_ISA")) {
        if (std::string(env) == "scalar") return Isa::scalar;
    }
    return cpu_has_avx2() ? Isa::avx2 : Isa::scalar;
}

std::atomic<Isa>& active() {
    static std::atomic<Isa> isa{detect()};
    return isa;
}

}  // namespace

std::string_view isa_name(Isa isa) {
    switch (isa) {
        case Isa::scalar: return "scalar";
        case Isa::avx2: return "avx2";
    }
    return "unknown";
}

bool isa_available(Isa isa) {
    return isa == Isa::scalar || cpu_has_avx2();
}

Isa active_isa() { return active().load(std::memory_order_relaxed); }

void set_active_isa(Isa isa) {
    if (!isa_available(isa)) {
        throw std::invalid_argument("ISA not available on this CPU: " + std::string(isa_name(isa)));
    }
    active().store(isa, std::memory_order_relaxed);
}

#if defined(MAX3EQ_HAVE_AVX2)
#define MAX3EQ_DISPATCH(fn, ...) \
    (active_isa() == Isa::avx2 ? avx2::fn(__VA_ARGS__) : scalar::fn(__VA_ARGS__))
#else
#define MAX3EQ_DISPATCH(fn, ...) scalar::fn(__VA_ARGS__)
#endif

void fwht(std::span<double> data) {
    if (data.size() & (data.size() - 1)) {
        throw std::invalid_argument("fwht: length must be a power of two");
    }
    MAX3EQ_DISPATCH(fwht, data);
}

void gemv(std::span<const double> a, std::size_t rows, std::size_t cols,
          std::span<const double> x, std::span<double> y) {
    MAX3EQ_DISPATCH(gemv, a, rows, cols, x, y);
}

void satisfied_counts(std::span<const PackedConstraint> constraints, std::uint32_t first,
                      std::span<std::uint32_t> out) {
    MAX3EQ_DISPATCH(satisfied_counts, constraints, first, out);
}

}  // namespace max3eq::kernels
