#include <doctest.h>

#include <bit>
#include <cstdlib>
#include <stdexcept>
#include <random>
#include <string>
#include <vector>

#include "max3eq/kernels.hpp"

using namespace max3eq::kernels;

namespace {

std::vector<double> random_vector(std::size_t n, std::mt19937_64& gen) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    std::vector<double> v(n);
    for (auto& x : v) x = u(gen);
    return v;
}

std::vector<PackedConstraint> random_constraints(std::size_t n, std::size_t m, std::mt19937_64& gen) {
    std::vector<PackedConstraint> out;
    for (std::size_t c = 0; c < m; ++c) {
        std::uint32_t i = gen() % n, j = gen() % n, k = gen() % n;
        out.push_back({i, j, k, static_cast<std::uint32_t>(gen() & 1), static_cast<std::uint32_t>(gen() & 1)});
    }
    return out;
}

// Direct definition of the bit-sliced predicate, independent of both kernels.
std::uint32_t count_direct(const std::vector<PackedConstraint>& cs, std::uint32_t mask) {
    std::uint32_t s = 0;
    for (const auto& c : cs) {
        const std::uint32_t bi = (mask >> c.i) & 1, bj = (mask >> c.j) & 1, bk = (mask >> c.k) & 1;
        s += ((bi ^ bj) == c.flip_ij && (bj ^ bk) == c.flip_jk) ? 1 : 0;
    }
    return s;
}

}  // namespace

TEST_SUITE("kernels") {

TEST_CASE("dispatch honours the environment pin") {
    const char* pin = std::getenv("MAX3EQ_ISA");
    if (pin != nullptr && std::string(pin) == "scalar") CHECK(active_isa() == Isa::scalar);
    CHECK(isa_available(Isa::scalar));
    CHECK(isa_name(Isa::scalar) == "scalar");
}

TEST_CASE("scalar fwht matches the naive transform") {
    std::mt19937_64 gen(1);
    for (std::size_t n : {1u, 2u, 4u, 8u, 64u}) {
        auto v = random_vector(n, gen);
        std::vector<double> naive(n, 0.0);
        for (std::size_t s = 0; s < n; ++s) {
            for (std::size_t x = 0; x < n; ++x) {
                naive[s] += (std::popcount(s & x) % 2 ? -1.0 : 1.0) * v[x];
            }
        }
        scalar::fwht(v);
        for (std::size_t s = 0; s < n; ++s) CHECK(v[s] == doctest::Approx(naive[s]).epsilon(1e-12));
    }
}

TEST_CASE("fwht rejects lengths that are not powers of two") {
    std::vector<double> v(6);
    CHECK_THROWS_AS(fwht(v), std::invalid_argument);
}

TEST_CASE("scalar satisfied_counts matches the predicate") {
    std::mt19937_64 gen(2);
    const auto cs = random_constraints(12, 40, gen);
    std::vector<std::uint32_t> out(1000);
    scalar::satisfied_counts(cs, 77, out);
    for (std::uint32_t t = 0; t < out.size(); ++t) CHECK(out[t] == count_direct(cs, 77 + t));
}

#ifdef MAX3EQ_HAVE_AVX2
TEST_CASE("avx2 kernels agree with the scalar reference") {
    if (!isa_available(Isa::avx2)) {
        MESSAGE("AVX2 not available on this CPU; skipping");
        return;
    }
    std::mt19937_64 gen(3);

    SUBCASE("fwht is bit-identical") {
        for (std::size_t n = 1; n <= (1u << 14); n *= 2) {
            auto a = random_vector(n, gen);
            auto b = a;
            scalar::fwht(a);
            avx2::fwht(b);
            CHECK(a == b);
        }
    }
    SUBCASE("gemv agrees to rounding") {
        for (std::size_t rows : {1u, 3u, 8u, 17u}) {
            for (std::size_t cols : {1u, 2u, 5u, 8u, 13u, 64u}) {
                const auto a = random_vector(rows * cols, gen);
                const auto x = random_vector(cols, gen);
                std::vector<double> y1(rows), y2(rows);
                scalar::gemv(a, rows, cols, x, y1);
                avx2::gemv(a, rows, cols, x, y2);
                for (std::size_t r = 0; r < rows; ++r) CHECK(y1[r] == doctest::Approx(y2[r]).epsilon(1e-13));
            }
        }
    }
    SUBCASE("satisfied_counts is identical, including ragged tails") {
        for (std::size_t len : {1u, 7u, 8u, 9u, 31u, 4096u}) {
            const auto cs = random_constraints(20, 50, gen);
            std::vector<std::uint32_t> o1(len), o2(len);
            scalar::satisfied_counts(cs, 12345, o1);
            avx2::satisfied_counts(cs, 12345, o2);
            CHECK(o1 == o2);
        }
    }
    SUBCASE("set_active_isa switches the dispatched path") {
        const Isa before = active_isa();
        set_active_isa(Isa::scalar);
        CHECK(active_isa() == Isa::scalar);
        set_active_isa(Isa::avx2);
        CHECK(active_isa() == Isa::avx2);
        set_active_isa(before);
    }
}
#endif

}  // TEST_SUITE
