#pragma once

#include <cmath>
#include <cstdint>
#include <span>

namespace max3eq {

/// Monte Carlo estimate of a mean.
struct McEstimate {
    double mean = 0.0;
    double std_error = 0.0;
    std::uint64_t samples = 0;

    /// |mean - reference| measured in standard errors (0 when both agree exactly).
    double z_score(double reference) const {
        const double diff = std::abs(mean - reference);
        if (std_error == 0.0) return diff == 0.0 ? 0.0 : INFINITY;
        return diff / std_error;
    }
};

/// Welford accumulator; merge() combines partial results from sample blocks.
class RunningStats {
public:
    void add(double x) {
        ++count_;
        const double delta = x - mean_;
        mean_ += delta / static_cast<double>(count_);
        m2_ += delta * (x - mean_);
    }

    void merge(const RunningStats& other) {
        if (other.count_ == 0) return;
        if (count_ == 0) {
            *this = other;
            return;
        }
        const double total = static_cast<double>(count_ + other.count_);
        const double delta = other.mean_ - mean_;
        mean_ += delta * static_cast<double>(other.count_) / total;
        m2_ += other.m2_ + delta * delta * static_cast<double>(count_) *
                               static_cast<double>(other.count_) / total;
        count_ += other.count_;
    }

    std::uint64_t count() const { return count_; }
    double mean() const { return mean_; }
    double variance() const { return count_ > 1 ? m2_ / static_cast<double>(count_ - 1) : 0.0; }

    McEstimate estimate() const {
        McEstimate e;
        e.mean = mean_;
        e.samples = count_;
        e.std_error = count_ > 0 ? std::sqrt(variance() / static_cast<double>(count_)) : 0.0;
        return e;
    }

private:
    std::uint64_t count_ = 0;
    double mean_ = 0.0;
    double m2_ = 0.0;
};

inline McEstimate merge_blocks(std::span<const RunningStats> blocks) {
    RunningStats total;
    for (const auto& b : blocks) total.merge(b);
    return total.estimate();
}

}  // namespace max3eq
