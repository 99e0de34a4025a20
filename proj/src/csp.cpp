#include "max3eq/csp.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>
#include <string>

#include "max3eq/kernels.hpp"
#include "max3eq/rng.hpp"

namespace max3eq {

Constraint Constraint::canonical() const {
    if (signs[0] == 1) return *this;
    return Constraint{vars, {-signs[0], -signs[1], -signs[2]}};
}

bool Constraint::satisfied_by(std::span<const std::int8_t> x) const {
    const int a = signs[0] * x[vars[0]];
    return a == signs[1] * x[vars[1]] && a == signs[2] * x[vars[2]];
}

Assignment::Assignment(std::vector<std::int8_t> values) : values_(std::move(values)) {
    for (auto v : values_) {
        if (v != 1 && v != -1) throw std::invalid_argument("assignment entries must be +1 or -1");
    }
}

Assignment Assignment::from_mask(std::size_t n, std::uint64_t mask) {
    std::vector<std::int8_t> v(n);
    for (std::size_t i = 0; i < n; ++i) v[i] = ((mask >> i) & 1u) ? 1 : -1;
    return Assignment(std::move(v));
}

std::uint64_t Assignment::mask() const {
    if (values_.size() > 64) throw std::length_error("assignment too long for a 64-bit mask");
    std::uint64_t m = 0;
    for (std::size_t i = 0; i < values_.size(); ++i) {
        if (values_[i] == 1) m |= std::uint64_t{1} << i;
    }
    return m;
}

Assignment Assignment::negated() const {
    auto v = values_;
    for (auto& x : v) x = static_cast<std::int8_t>(-x);
    return Assignment(std::move(v));
}

Instance::Instance(std::size_t n, std::vector<Constraint> constraints)
    : n_(n), constraints_(std::move(constraints)) {
    for (std::size_t c = 0; c < constraints_.size(); ++c) {
        const auto& con = constraints_[c];
        const auto& v = con.vars;
        if (!(v[0] < v[1] && v[1] < v[2]) || v[2] >= n_) {
            throw std::invalid_argument("constraint " + std::to_string(c) +
                                        ": variables must satisfy i < j < k < n");
        }
        for (int s : con.signs) {
            if (s != 1 && s != -1) {
                throw std::invalid_argument("constraint " + std::to_string(c) +
                                            ": signs must be +1 or -1");
            }
        }
    }
}

Instance Instance::canonical() const {
    std::vector<Constraint> out;
    out.reserve(constraints_.size());
    for (const auto& c : constraints_) out.push_back(c.canonical());
    return Instance(n_, std::move(out));
}

std::size_t count_satisfied(const Instance& inst, const Assignment& asg) {
    if (asg.size() != inst.num_vars()) {
        throw std::invalid_argument("assignment length " + std::to_string(asg.size()) +
                                    " does not match instance size " +
                                    std::to_string(inst.num_vars()));
    }
    std::size_t sat = 0;
    for (const auto& c : inst.constraints()) sat += c.satisfied_by(asg.values());
    return sat;
}

double evaluate(const Instance& inst, const Assignment& asg) {
    if (inst.num_constraints() == 0) throw std::invalid_argument("instance has no constraints");
    return static_cast<double>(count_satisfied(inst, asg)) /
           static_cast<double>(inst.num_constraints());
}

BruteForceResult brute_force_opt(const Instance& inst) {
    const std::size_t n = inst.num_vars();
    if (n > kExhaustiveLimit) {
        throw std::invalid_argument("brute_force_opt: n = " + std::to_string(n) +
                                    " exceeds the exhaustive limit " +
                                    std::to_string(kExhaustiveLimit));
    }
    if (inst.num_constraints() == 0) throw std::invalid_argument("instance has no constraints");

    std::vector<kernels::PackedConstraint> packed;
    packed.reserve(inst.num_constraints());
    for (const auto& c : inst.constraints()) {
        const auto s = [](int sign) { return sign < 0 ? 1u : 0u; };
        packed.push_back({c.vars[0], c.vars[1], c.vars[2], s(c.signs[0]) ^ s(c.signs[1]),
                          s(c.signs[1]) ^ s(c.signs[2])});
    }

    // Enumerate masks with bit 0 set: mask = 2*t + 1 for t in [0, 2^(n-1)).
    // The kernel walks consecutive masks, so evaluate all and skip even ones.
    // Non-empty instances have n >= 3.
    const std::uint64_t total = std::uint64_t{1} << n;
    constexpr std::uint64_t kChunk = 4096;
    std::vector<std::uint32_t> counts(kChunk);
    std::uint32_t best = 0;
    std::uint64_t best_mask = 1;
    bool found = false;
    for (std::uint64_t start = 0; start < total; start += kChunk) {
        const std::uint64_t len = std::min(kChunk, total - start);
        std::span<std::uint32_t> out(counts.data(), len);
        kernels::satisfied_counts(packed, static_cast<std::uint32_t>(start), out);
        for (std::uint64_t t = 1; t < len; t += 2) {
            if (!found || out[t] > best) {
                best = out[t];
                best_mask = start + t;
                found = true;
            }
        }
    }
    BruteForceResult r;
    r.satisfied = best;
    r.value = static_cast<double>(best) / static_cast<double>(inst.num_constraints());
    r.witness = Assignment::from_mask(n, best_mask);
    return r;
}

Instance random_instance(std::size_t n, std::size_t m, std::uint64_t seed) {
    if (n < 3) throw std::invalid_argument("random_instance: n must be at least 3");
    if (n > std::numeric_limits<std::uint32_t>::max()) {
        throw std::invalid_argument("random_instance: n too large");
    }
    Rng rng(seed);
    std::vector<Constraint> cons;
    cons.reserve(m);
    for (std::size_t c = 0; c < m; ++c) {
        std::array<std::uint32_t, 3> v{};
        v[0] = static_cast<std::uint32_t>(uniform_below(rng, n));
        do {
            v[1] = static_cast<std::uint32_t>(uniform_below(rng, n));
        } while (v[1] == v[0]);
        do {
            v[2] = static_cast<std::uint32_t>(uniform_below(rng, n));
        } while (v[2] == v[0] || v[2] == v[1]);
        std::sort(v.begin(), v.end());
        std::array<int, 3> s{};
        for (auto& x : s) x = (rng() >> 63) ? 1 : -1;
        cons.push_back({v, s});
    }
    return Instance(n, std::move(cons));
}

nlohmann::json to_json(const Instance& inst) {
    nlohmann::json cons = nlohmann::json::array();
    for (const auto& c : inst.constraints()) {
        cons.push_back({{"vars", c.vars}, {"signs", c.signs}});
    }
    return {{"n", inst.num_vars()}, {"constraints", std::move(cons)}};
}

Instance instance_from_json(const nlohmann::json& j) {
    try {
        const auto n = j.at("n").get<std::int64_t>();
        if (n < 0) throw std::invalid_argument("instance: n must be non-negative");
        std::vector<Constraint> cons;
        for (const auto& c : j.at("constraints")) {
            const auto vars = c.at("vars").get<std::vector<std::int64_t>>();
            const auto signs = c.at("signs").get<std::vector<int>>();
            if (vars.size() != 3 || signs.size() != 3) {
                throw std::invalid_argument("instance: each constraint needs 3 vars and 3 signs");
            }
            Constraint con{};
            for (int t = 0; t < 3; ++t) {
                if (vars[t] < 0) throw std::invalid_argument("instance: negative variable index");
                con.vars[t] = static_cast<std::uint32_t>(vars[t]);
                con.signs[t] = signs[t];
            }
            cons.push_back(con);
        }
        return Instance(static_cast<std::size_t>(n), std::move(cons));
    } catch (const nlohmann::json::exception& e) {
        throw std::invalid_argument(std::string("instance JSON: ") + e.what());
    }
}

}  // namespace max3eq
