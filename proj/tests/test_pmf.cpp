#include <doctest.h>

#include <algorithm>
#include <bit>
#include <cmath>

#include "max3eq/pmf.hpp"
#include "max3eq/stats.hpp"

using namespace max3eq;
using boost::multiprecision::cpp_int;

namespace {

Rational q(long long num, long long den) { return Rational(cpp_int(num), cpp_int(den)); }

Point all_ones(std::size_t k) { return static_cast<Point>((std::uint64_t{1} << k) - 1); }

// E[X_a Y_a] style row statistic: mean of prod over the chosen rows, per column.
McEstimate row_product(const std::vector<std::vector<std::int8_t>>& rows, std::size_t a, std::size_t b) {
    RunningStats s;
    for (std::size_t i = 0; i < rows[a].size(); ++i) s.add(rows[a][i] * rows[b][i]);
    return s.estimate();
}

}  // namespace

TEST_SUITE("pmf") {

TEST_CASE("d_delta masses and moments") {
    const auto p = d_delta(q(1, 1000));
    CHECK(p.mass(all_ones(3)) == q(1, 2) - q(3, 8000));
    CHECK(p.mass(0) == q(1, 2) - q(3, 8000));
    CHECK(p.mass(0b010) == q(1, 8000));

    for (const auto& delta : {q(1, 10), q(2, 5), q(1, 2), q(1, 1)}) {
        const auto d = d_delta(delta);
        CHECK(d.min_mass() >= delta / 8);
        const auto m = verify_pairwise(d);
        for (const auto& mean : m.means) CHECK(mean == 0);
        for (std::size_t a = 0; a < 3; ++a) {
            for (std::size_t b = 0; b < 3; ++b) CHECK(m.correlations[a][b] == (a == b ? Rational(1) : 1 - delta));
        }
        Rational triple = 0;
        for (const auto& [pt, mass] : d.support()) {
            const int sign = (std::popcount(pt) % 2 == 1) ? 1 : -1;  // odd number of +1 among 3
            triple += sign * mass;
        }
        CHECK(triple == 0);
    }
    const auto half = verify_pairwise(d_delta(q(1, 2)));
    CHECK(half.all_ones_probability == q(5, 16));
    CHECK_THROWS_AS(d_delta(0), std::invalid_argument);
    CHECK_THROWS_AS(d_delta(q(3, 2)), std::invalid_argument);
}

TEST_CASE("d_k small cases") {
    const auto d3 = d_k(3);
    CHECK(d3.mass(0b111) == q(1, 4));
    CHECK(d3.mass(0b001) == q(1, 4));
    CHECK(d3.mass(0b010) == q(1, 4));
    CHECK(d3.mass(0b100) == q(1, 4));
    CHECK(d_k(4).mass(0b1111) == q(1, 6));
    CHECK(verify_pairwise(d_k(7)).all_ones_probability == q(1, 8));
    CHECK_THROWS_AS(d_k(1), std::invalid_argument);
}

TEST_CASE("d_k is pairwise independent for every k in 2..16") {
    for (std::size_t k = 2; k <= 16; ++k) {
        CAPTURE(k);
        const auto m = verify_pairwise(d_k(k));
        CHECK(m.zero_means);
        CHECK(m.zero_correlations);
        CHECK(m.all_ones_probability == Rational(cpp_int(1), cpp_int(2 * ((k + 2) / 2))));
        CHECK(all_ones_target(k) == m.all_ones_probability);
    }
}

TEST_CASE("d_k is symmetric under coordinate permutations") {
    for (std::size_t k = 2; k <= 9; ++k) {
        const auto p = d_k(k);
        for (const auto& [pt, mass] : p.support()) {
            // swap coordinates 0 and k-1
            const Point lo = pt & 1u, hi = (pt >> (k - 1)) & 1u;
            Point swapped = pt & ~(1u | (1u << (k - 1)));
            swapped |= hi | (lo << (k - 1));
            CHECK(p.mass(swapped) == mass);
        }
    }
}

TEST_CASE("mixtures") {
    const auto base = d_k(3);
    const auto same = mix(base, 0);
    CHECK(same.support() == base.support());
    const auto uni = mix(base, 1);
    CHECK(uni.support() == Pmf::uniform(3).support());
    CHECK(mix(base, q(1, 2)).mass(0b111) == q(3, 16));
    for (std::size_t k = 3; k <= 8; ++k) {
        const auto xi = q(1, 20);
        const auto p = mix(d_k(k), xi);
        Rational total = 0;
        for (const auto& [pt, mass] : p.support()) total += mass;
        CHECK(total == 1);
        CHECK(p.min_mass() >= xi / Rational(cpp_int(1) << k));
        CHECK(p.support().size() == (std::size_t{1} << k));
    }
    CHECK_THROWS_AS(mix(base, q(-1, 2)), std::invalid_argument);
}

TEST_CASE("pmf validation") {
    CHECK_THROWS_AS(Pmf(2, {{0, q(1, 2)}}), std::invalid_argument);
    CHECK_THROWS_AS(Pmf(2, {{0, q(3, 2)}, {1, q(-1, 2)}}), std::invalid_argument);
    CHECK_THROWS_AS(Pmf(2, {{4, 1}}), std::invalid_argument);
    CHECK(verify_pairwise(Pmf::uniform(3)).all_ones_probability == q(1, 8));
    CHECK(verify_pairwise(Pmf::uniform(3)).zero_correlations);
}

TEST_CASE("pmf json round trip") {
    const auto p = mix(d_k(5), q(1, 7));
    CHECK(pmf_from_json(to_json(p)).support() == p.support());
}

TEST_CASE("sample_rows") {
    Rng rng(1);
    const auto point = sample_rows(Pmf::point_mass(3, 0b111), 50, rng);
    REQUIRE(point.size() == 3);
    for (const auto& row : point) CHECK(std::all_of(row.begin(), row.end(), [](auto v) { return v == 1; }));

    const std::size_t n = 1000000;
    const auto rows = sample_rows(d_delta(q(2, 5)), n, rng);
    for (auto [a, b] : {std::pair{0, 1}, {1, 2}, {0, 2}}) CHECK(row_product(rows, a, b).z_score(0.6) <= 4.0);

    const auto uni = sample_rows(Pmf::uniform(2), n, rng);
    CHECK(row_product(uni, 0, 1).z_score(0.0) <= 4.0);

    Rng r1(9), r2(9);
    CHECK(sample_rows(d_k(5), 100, r1) == sample_rows(d_k(5), 100, r2));
}

TEST_CASE("alias sampler frequencies") {
    const auto p = mix(d_k(4), q(1, 10));
    const AliasSampler s(p);
    Rng rng(2);
    const std::size_t n = 400000;
    std::vector<std::size_t> counts(16, 0);
    for (std::size_t t = 0; t < n; ++t) ++counts[s.draw(rng)];
    for (Point pt = 0; pt < 16; ++pt) {
        const double expect = to_double(p.mass(pt));
        const double se = std::sqrt(expect * (1 - expect) / static_cast<double>(n));
        CHECK(std::abs(static_cast<double>(counts[pt]) / static_cast<double>(n) - expect) <= 4 * se);
    }
}

}  // TEST_SUITE
