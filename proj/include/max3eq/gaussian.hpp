#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "max3eq/rng.hpp"
#include "max3eq/stats.hpp"

namespace max3eq {

inline constexpr double kSymmetryTol = 1e-12;
inline constexpr double kPsdTol = 1e-9;

/// Symmetric positive semidefinite matrix (minimum eigenvalue >= -kPsdTol).
class Covariance {
public:
    /// Throws std::invalid_argument if the matrix is not square, not
    /// symmetric to kSymmetryTol, or has an eigenvalue below -kPsdTol.
    explicit Covariance(Eigen::MatrixXd m);

    static Covariance identity(std::size_t dim);
    /// Unit diagonal with every off-diagonal entry equal to rho.
    static Covariance equicorrelated(std::size_t dim, double rho);

    std::size_t dim() const { return static_cast<std::size_t>(m_.rows()); }
    const Eigen::MatrixXd& matrix() const { return m_; }
    double min_eigenvalue() const { return min_eig_; }
    bool is_correlation(double tol = 1e-12) const;

private:
    Eigen::MatrixXd m_;
    double min_eig_;
};

/// True iff the 3x3 unit-diagonal matrix with off-diagonals rho1 = (X,Y),
/// rho2 = (Y,Z), rho3 = (X,Z) is PSD, checked through all principal minors
/// to within tol.
bool correlation_triple_is_psd(double rho1, double rho2, double rho3, double tol = kPsdTol);

/// Pr[X,Y,Z <= 0] = 1/2 - (acos rho1 + acos rho2 + acos rho3)/(4 pi) for
/// standard normals with the given pairwise correlations. Throws
/// std::domain_error when the triple is not a valid correlation.
double trivariate_orthant(double rho1, double rho2, double rho3);

/// acos with arguments within kPsdTol of +/-1 clamped onto [-1,1].
double clamped_acos(double x);

/// Draws from N(0, Sigma) through a symmetric eigendecomposition
/// Sigma = V diag(lambda) V^T. Eigenvalues at or below kPsdTol (relative to
/// the largest) are treated as zero, so rank-deficient Sigma is fine.
class MvnSampler {
public:
    explicit MvnSampler(const Covariance& sigma);

    std::size_t dim() const { return dim_; }
    std::size_t rank() const { return rank_; }
    /// Writes one draw into out (size dim()). `scratch` holds rank() normals.
    void sample(Rng& rng, std::span<double> out, std::span<double> scratch) const;
    std::vector<double> sample(Rng& rng) const;

    /// dim x rank factor L (row-major) with L L^T = Sigma.
    std::span<const double> factor() const { return factor_; }

private:
    std::size_t dim_;
    std::size_t rank_;
    std::vector<double> factor_;
};

std::vector<double> sample_mvn(const Covariance& sigma, Rng& rng);

/// Monte Carlo estimate of Pr[all coordinates <= 0] for N(0, Sigma).
/// Samples are split into fixed blocks, each with its own stream derived
/// from seed, so the result is reproducible for any thread count.
McEstimate mc_orthant(const Covariance& sigma, std::uint64_t samples, std::uint64_t seed);

}  // namespace max3eq
