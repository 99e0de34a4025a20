#include <doctest.h>

#include <cmath>
#include <random>

#include "max3eq/csp.hpp"

using namespace max3eq;

namespace {

Instance single(std::array<int, 3> signs) { return Instance(3, {Constraint{{0, 1, 2}, signs}}); }

Instance contradictory_pair() {
    return Instance(3, {Constraint{{0, 1, 2}, {1, 1, 1}}, Constraint{{0, 1, 2}, {1, 1, -1}}});
}

// Second exhaustive search: every one of the 2^n assignments, values built
// from scratch, literal equality checked directly.
double reference_optimum(const Instance& inst) {
    const std::size_t n = inst.num_vars();
    std::size_t best = 0;
    std::vector<int> x(n);
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
        for (std::size_t v = 0; v < n; ++v) x[v] = (mask >> v) & 1 ? 1 : -1;
        std::size_t sat = 0;
        for (const auto& c : inst.constraints()) {
            const int a = c.signs[0] * x[c.vars[0]];
            const int b = c.signs[1] * x[c.vars[1]];
            const int d = c.signs[2] * x[c.vars[2]];
            if (a == b && b == d) ++sat;
        }
        best = std::max(best, sat);
    }
    return static_cast<double>(best) / static_cast<double>(inst.num_constraints());
}

}  // namespace

TEST_SUITE("csp") {

TEST_CASE("evaluate on small instances") {
    CHECK(evaluate(single({1, 1, 1}), Assignment({1, 1, 1})) == 1.0);
    CHECK(evaluate(single({1, 1, 1}), Assignment({1, 1, -1})) == 0.0);
    CHECK(evaluate(contradictory_pair(), Assignment({1, 1, 1})) == 0.5);
    CHECK(evaluate(single({1, -1, 1}), Assignment({-1, 1, -1})) == 1.0);
}

TEST_CASE("evaluate rejects bad input") {
    CHECK_THROWS_AS(evaluate(single({1, 1, 1}), Assignment({1, 1})), std::invalid_argument);
    CHECK_THROWS_AS(evaluate(Instance(3, {}), Assignment({1, 1, 1})), std::invalid_argument);
}

TEST_CASE("instance validation") {
    CHECK_THROWS_AS(Instance(3, {Constraint{{0, 1, 3}, {1, 1, 1}}}), std::invalid_argument);
    CHECK_THROWS_AS(Instance(4, {Constraint{{1, 0, 2}, {1, 1, 1}}}), std::invalid_argument);
    CHECK_THROWS_AS(Instance(4, {Constraint{{0, 0, 2}, {1, 1, 1}}}), std::invalid_argument);
    CHECK_THROWS_AS(Instance(4, {Constraint{{0, 1, 2}, {1, 0, 1}}}), std::invalid_argument);
}

TEST_CASE("brute force on fixed instances") {
    std::vector<Constraint> cs;
    for (std::uint32_t i = 0; i + 2 < 6; ++i) cs.push_back({{i, i + 1, i + 2}, {1, 1, 1}});
    const auto consistent = brute_force_opt(Instance(6, cs));
    CHECK(consistent.value == 1.0);
    CHECK(consistent.witness == Assignment({1, 1, 1, 1, 1, 1}));

    const auto pair = brute_force_opt(contradictory_pair());
    CHECK(pair.value == 0.5);
    CHECK(pair.satisfied == 1);
    CHECK(evaluate(contradictory_pair(), pair.witness) == 0.5);
}

TEST_CASE("brute force matches an independent search") {
    const auto inst = random_instance(12, 60, 7);
    const auto r = brute_force_opt(inst);
    CHECK(r.value == reference_optimum(inst));
    CHECK(evaluate(inst, r.witness) == r.value);
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const auto small = random_instance(3 + seed % 9, 5 + 3 * seed, seed);
        const auto s = brute_force_opt(small);
        CHECK(s.value == reference_optimum(small));
        CHECK(evaluate(small, s.witness) == s.value);
    }
}

TEST_CASE("brute force witness is the smallest optimal mask with x_0 = +1") {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        const auto inst = random_instance(8, 20, 100 + seed);
        const auto r = brute_force_opt(inst);
        CHECK(r.witness[0] == 1);
        for (std::uint64_t mask = 1; mask < r.witness.mask(); mask += 2) {
            CHECK(count_satisfied(inst, Assignment::from_mask(8, mask)) < r.satisfied);
        }
    }
}

TEST_CASE("brute force enforces the exhaustive limit") {
    const auto inst = random_instance(kExhaustiveLimit + 1, 10, 0);
    CHECK_THROWS_AS(brute_force_opt(inst), std::invalid_argument);
}

TEST_CASE("random instances") {
    const auto one = random_instance(3, 1, 99);
    REQUIRE(one.num_constraints() == 1);
    CHECK(one.constraints()[0].vars == std::array<std::uint32_t, 3>{0, 1, 2});

    CHECK(random_instance(10, 50, 42) == random_instance(10, 50, 42));
    CHECK(to_json(random_instance(10, 50, 42)).dump() != to_json(random_instance(10, 50, 43)).dump());
    CHECK_THROWS_AS(random_instance(2, 5, 0), std::invalid_argument);
}

TEST_CASE("evaluation properties over random instances and assignments") {
    std::mt19937_64 gen(5);
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t n = 3 + gen() % 10, m = 1 + gen() % 30;
        const auto inst = random_instance(n, m, gen());
        const auto asg = Assignment::from_mask(n, gen() & ((std::uint64_t{1} << n) - 1));
        const double v = evaluate(inst, asg);
        CHECK(v >= 0.0);
        CHECK(v <= 1.0);
        CHECK(v * static_cast<double>(m) == doctest::Approx(std::round(v * static_cast<double>(m))));
        CHECK(evaluate(inst, asg.negated()) == v);
        CHECK(evaluate(inst.canonical(), asg) == v);
    }
}

TEST_CASE("json round trip") {
    const auto inst = random_instance(9, 17, 3);
    const auto j = to_json(inst);
    CHECK(j.at("n") == 9);
    CHECK(j.at("constraints").size() == 17);
    CHECK(instance_from_json(j) == inst);
    CHECK_THROWS(instance_from_json(nlohmann::json{{"n", 3}, {"constraints", {{{"vars", {0, 1, 5}}, {"signs", {1, 1, 1}}}}}}));
}

}  // TEST_SUITE
