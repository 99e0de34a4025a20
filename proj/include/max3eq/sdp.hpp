#pragma once

// Gram-matrix form of the MAX-3-EQUAL semidefinite relaxation.
//
// Per triple (i,j,k) the relaxation carries weights (alpha, beta, gamma,
// delta) on the four polarity patterns of (x_i, x_j, x_k) modulo global
// negation. They sum to 1 and determine the three inner products linearly:
//
//   X_ij = a + b - c - d,   X_jk = a - b + c - d,   X_ik = a - b - c + d.
//
// That 4x4 system is a scaled Hadamard matrix, so the weights are eliminated
// exactly and non-negativity becomes four linear cuts on the Gram entries.
// A constraint with signs s contributes
//
//   lambda(e) = (1 + s_i s_j X_ij + s_j s_k X_jk + s_i s_k X_ik) / 4
//
// to the objective, which is the uniform average of lambda(e).

#include <array>
#include <cstddef>
#include <cstdint>
#include <vector>

#include <Eigen/Dense>
#include <json.hpp>

#include "max3eq/csp.hpp"

namespace max3eq {

struct TripleWeights {
    double alpha, beta, gamma, delta;
};

/// Solves the weight system for one triple. Always sums to 1; feasibility
/// (all four >= 0) is up to the caller.
TripleWeights recover_abcd(double x_ij, double x_jk, double x_ik);

/// lambda(e) for one constraint under Gram matrix X.
double constraint_lambda(const Constraint& c, const Eigen::MatrixXd& gram);

struct SdpProblem {
    struct Pair {
        std::uint32_t i, j;
    };

    std::size_t n = 0;
    std::vector<Constraint> constraints;
    /// Distinct variable pairs that occur in some constraint.
    std::vector<Pair> pairs;
    /// objective() is the mean of lambda(e), equal to objective_constant + sum_p pair_weight[p] * X_{pairs[p]}.
    std::vector<double> pair_weight;
    double objective_constant = 0.25;
    /// Distinct constrained triples as indices into `pairs` for (ij, jk, ik).
    std::vector<std::array<std::size_t, 3>> triples;

    double objective(const Eigen::MatrixXd& gram) const;
    std::vector<double> lambdas(const Eigen::MatrixXd& gram) const;
    /// Smallest value of 1 + s1 X_ij + s2 X_jk + s3 X_ik over all cuts
    /// (equivalently 4 * the smallest recovered weight).
    double min_cut_value(const Eigen::MatrixXd& gram) const;
    /// Dense symmetric C with <C, X> + objective_constant equal to objective(X).
    Eigen::MatrixXd objective_matrix() const;
};

/// Cut sign patterns (s1, s2, s3) with s1 s2 s3 = +1, in alpha, beta, gamma,
/// delta order.
inline constexpr std::array<std::array<int, 3>, 4> kCutSigns{
    {{1, 1, 1}, {1, -1, -1}, {-1, 1, -1}, {-1, -1, 1}}};

SdpProblem build_sdp(const Instance& inst);

struct SolverOptions {
    double tol = 1e-5;
    std::size_t max_iter = 50000;
    double rho = 1.0;
};

struct SdpSolution {
    Eigen::MatrixXd gram;
    double objective = 0.0;
    /// ADMM residuals at the last iterate (before the feasibility repair).
    double primal_residual = 0.0;
    double dual_residual = 0.0;
    /// max(0, -smallest cut value) of the returned Gram matrix.
    double cut_violation = 0.0;
    double min_eigenvalue = 0.0;
    double max_diag_error = 0.0;
    std::size_t iterations = 0;
    bool converged = false;
};

/// ADMM on the splitting X (unit diagonal) = S (PSD cone), 1 + G x = z >= 0.
///
/// The returned Gram matrix is the PSD iterate rescaled to unit diagonal and,
/// if any cut is still violated, shrunk toward the identity just enough to
/// satisfy every cut. Non-convergence within max_iter is reported through
/// `converged`, not thrown.
SdpSolution solve_sdp(const SdpProblem& prob, const SolverOptions& opts = {});

nlohmann::json to_json(const SdpSolution& sol, const SdpProblem& prob);

}  // namespace max3eq
