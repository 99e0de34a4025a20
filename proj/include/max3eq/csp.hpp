#pragma once

// MAX-3-EQUAL instances: each constraint (i,j,k) x (s_i,s_j,s_k) asks that
// s_i x_i = s_j x_j = s_k x_k over +/-1 variables.

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include <json.hpp>

namespace max3eq {

/// Largest variable count brute_force_opt will enumerate.
inline constexpr std::size_t kExhaustiveLimit = 24;

struct Constraint {
    std::array<std::uint32_t, 3> vars;  // strictly increasing
    std::array<int, 3> signs;           // each +1 or -1

    /// Same predicate with signs flipped so that signs[0] == +1.
    Constraint canonical() const;
    bool satisfied_by(std::span<const std::int8_t> x) const;

    friend bool operator==(const Constraint&, const Constraint&) = default;
};

/// A +/-1 vector. Bit v of mask() is 1 iff value v is +1.
class Assignment {
public:
    Assignment() = default;
    explicit Assignment(std::vector<std::int8_t> values);
    static Assignment from_mask(std::size_t n, std::uint64_t mask);

    std::size_t size() const { return values_.size(); }
    std::int8_t operator[](std::size_t i) const { return values_[i]; }
    std::span<const std::int8_t> values() const { return values_; }
    std::uint64_t mask() const;
    Assignment negated() const;

    friend bool operator==(const Assignment&, const Assignment&) = default;

private:
    std::vector<std::int8_t> values_;
};

class Instance {
public:
    /// Throws std::invalid_argument on an out-of-range or non-increasing
    /// variable triple, or a sign outside {-1, +1}. Repeated constraints
    /// are allowed and weigh in the uniform average.
    Instance(std::size_t n, std::vector<Constraint> constraints);

    std::size_t num_vars() const { return n_; }
    std::size_t num_constraints() const { return constraints_.size(); }
    const std::vector<Constraint>& constraints() const { return constraints_; }

    Instance canonical() const;

    friend bool operator==(const Instance&, const Instance&) = default;

private:
    std::size_t n_;
    std::vector<Constraint> constraints_;
};

/// Fraction of constraints satisfied. Throws std::invalid_argument on a
/// length mismatch or an instance without constraints.
double evaluate(const Instance& inst, const Assignment& asg);
std::size_t count_satisfied(const Instance& inst, const Assignment& asg);

struct BruteForceResult {
    double value = 0.0;
    std::size_t satisfied = 0;
    Assignment witness;
};

/// Exhaustive optimum over all 2^n assignments (n <= kExhaustiveLimit).
///
/// The predicate is invariant under global negation, so only assignments
/// with x_0 = +1 are enumerated; among optimal ones the witness is the
/// smallest mask in binary order (bit v set iff x_v = +1).
BruteForceResult brute_force_opt(const Instance& inst);

/// m constraints, each on a uniformly random triple i<j<k with uniformly
/// random signs. Deterministic in seed. Requires n >= 3.
Instance random_instance(std::size_t n, std::size_t m, std::uint64_t seed);

nlohmann::json to_json(const Instance& inst);
Instance instance_from_json(const nlohmann::json& j);

}  // namespace max3eq
