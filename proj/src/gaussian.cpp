#include "max3eq/gaussian.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "max3eq/kernels.hpp"
#include "max3eq/parallel.hpp"

namespace max3eq {
namespace {

constexpr std::uint64_t kBlockSamples = 1 << 16;

}  // namespace

Covariance::Covariance(Eigen::MatrixXd m) : m_(std::move(m)) {
    if (m_.rows() != m_.cols()) throw std::invalid_argument("covariance must be square");
    if (m_.rows() == 0) throw std::invalid_argument("covariance must be non-empty");
    if ((m_ - m_.transpose()).cwiseAbs().maxCoeff() > kSymmetryTol) {
        throw std::invalid_argument("covariance must be symmetric");
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m_, Eigen::EigenvaluesOnly);
    min_eig_ = es.eigenvalues().minCoeff();
    if (min_eig_ < -kPsdTol) {
        throw std::invalid_argument("covariance is not PSD (min eigenvalue " +
                                    std::to_string(min_eig_) + ")");
    }
}

Covariance Covariance::identity(std::size_t dim) {
    return Covariance(Eigen::MatrixXd::Identity(static_cast<Eigen::Index>(dim),
                                                static_cast<Eigen::Index>(dim)));
}

Covariance Covariance::equicorrelated(std::size_t dim, double rho) {
    const auto d = static_cast<Eigen::Index>(dim);
    Eigen::MatrixXd m = Eigen::MatrixXd::Constant(d, d, rho);
    m.diagonal().setOnes();
    return Covariance(std::move(m));
}

bool Covariance::is_correlation(double tol) const {
    return (m_.diagonal().array() - 1.0).abs().maxCoeff() <= tol;
}

bool correlation_triple_is_psd(double rho1, double rho2, double rho3, double tol) {
    for (double r : {rho1, rho2, rho3}) {
        if (!std::isfinite(r) || 1.0 - r * r < -tol) return false;
    }
    const double det =
        1.0 + 2.0 * rho1 * rho2 * rho3 - rho1 * rho1 - rho2 * rho2 - rho3 * rho3;
    return det >= -tol;
}

double clamped_acos(double x) {
    if (x > 1.0 && x <= 1.0 + kPsdTol) x = 1.0;
    if (x < -1.0 && x >= -1.0 - kPsdTol) x = -1.0;
    return std::acos(x);
}

double trivariate_orthant(double rho1, double rho2, double rho3) {
    if (!correlation_triple_is_psd(rho1, rho2, rho3)) {
        throw std::domain_error("trivariate_orthant: correlations are not a valid 3x3 correlation");
    }
    double p = 0.5 - (clamped_acos(rho1) + clamped_acos(rho2) + clamped_acos(rho3)) /
                         (4.0 * std::numbers::pi);
    if (p < 0.0 && p > -1e-12) p = 0.0;
    if (p > 1.0 && p < 1.0 + 1e-12) p = 1.0;
    return p;
}

MvnSampler::MvnSampler(const Covariance& sigma) : dim_(sigma.dim()) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(sigma.matrix());
    if (es.info() != Eigen::Success) throw std::runtime_error("eigendecomposition failed");
    const auto& vals = es.eigenvalues();
    const auto& vecs = es.eigenvectors();
    // Eigenvalues within the PSD tolerance of zero are roundoff from
    // rank-deficient inputs and are dropped.
    const double cutoff = kPsdTol * std::max(1.0, vals.maxCoeff());
    std::vector<Eigen::Index> keep;
    for (Eigen::Index c = 0; c < vals.size(); ++c) {
        if (vals[c] < -kPsdTol) throw std::invalid_argument("covariance is not PSD");
        if (vals[c] > cutoff) keep.push_back(c);
    }
    rank_ = keep.size();
    factor_.assign(dim_ * rank_, 0.0);
    for (std::size_t r = 0; r < dim_; ++r) {
        for (std::size_t c = 0; c < rank_; ++c) {
            const auto col = keep[c];
            factor_[r * rank_ + c] = vecs(static_cast<Eigen::Index>(r), col) * std::sqrt(vals[col]);
        }
    }
    // Identical rows of Sigma mean Var(Z_r - Z_q) = 0; share the factor row
    // so the coordinates come out bit-identical rather than equal to roundoff.
    const auto& m = sigma.matrix();
    for (std::size_t r = 1; r < dim_; ++r) {
        for (std::size_t q = 0; q < r; ++q) {
            if (m.row(static_cast<Eigen::Index>(r)) == m.row(static_cast<Eigen::Index>(q))) {
                std::copy_n(factor_.begin() + static_cast<std::ptrdiff_t>(q * rank_), rank_,
                            factor_.begin() + static_cast<std::ptrdiff_t>(r * rank_));
                break;
            }
        }
    }
}

void MvnSampler::sample(Rng& rng, std::span<double> out, std::span<double> scratch) const {
    std::normal_distribution<double> normal;
    for (std::size_t c = 0; c < rank_; ++c) scratch[c] = normal(rng);
    if (rank_ == 0) {
        std::fill(out.begin(), out.end(), 0.0);
        return;
    }
    kernels::gemv(factor_, dim_, rank_, scratch.first(rank_), out.first(dim_));
}

std::vector<double> MvnSampler::sample(Rng& rng) const {
    std::vector<double> out(dim_), scratch(rank_);
    sample(rng, out, scratch);
    return out;
}

std::vector<double> sample_mvn(const Covariance& sigma, Rng& rng) {
    return MvnSampler(sigma).sample(rng);
}

McEstimate mc_orthant(const Covariance& sigma, std::uint64_t samples, std::uint64_t seed) {
    if (samples == 0) throw std::invalid_argument("mc_orthant: samples must be positive");
    const MvnSampler sampler(sigma);
    const std::size_t blocks = (samples + kBlockSamples - 1) / kBlockSamples;
    std::vector<std::uint64_t> hits(blocks, 0);
    for_each_block(blocks, [&](std::size_t b) {
        Rng rng = make_stream(seed, b);
        const std::uint64_t begin = b * kBlockSamples;
        const std::uint64_t count = std::min(kBlockSamples, samples - begin);
        std::vector<double> z(sampler.dim()), scratch(sampler.rank());
        std::uint64_t h = 0;
        for (std::uint64_t s = 0; s < count; ++s) {
            sampler.sample(rng, z, scratch);
            h += std::all_of(z.begin(), z.end(), [](double v) { return v <= 0.0; });
        }
        hits[b] = h;
    });
    std::uint64_t total = 0;
    for (auto h : hits) total += h;
    const double n = static_cast<double>(samples);
    McEstimate e;
    e.samples = samples;
    e.mean = static_cast<double>(total) / n;
    const double var = samples > 1 ? (static_cast<double>(total) - e.mean * static_cast<double>(total)) / (n - 1.0) : 0.0;
    e.std_error = std::sqrt(std::max(0.0, var) / n);
    return e;
}

}  // namespace max3eq
