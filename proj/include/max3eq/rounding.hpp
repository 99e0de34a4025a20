#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include <Eigen/Dense>
#include <json.hpp>

#include "max3eq/csp.hpp"
#include "max3eq/gaussian.hpp"
#include "max3eq/stats.hpp"

namespace max3eq {

struct RoundingReport {
    double expected_value_closed_form = 0.0;
    double sdp_objective = 0.0;  // mean of per_constraint_lambda
    std::vector<double> per_constraint_kappa;
    std::vector<double> per_constraint_lambda;
    /// min kappa/lambda over constraints with lambda > kRatioLambdaFloor
    /// (+inf when there is none).
    double min_ratio = 0.0;
    std::size_t min_ratio_constraint = 0;
    bool has_empirical = false;
    McEstimate empirical;
};

inline constexpr double kRatioLambdaFloor = 1e-9;

/// Probability that Gaussian rounding satisfies c:
/// 1 - (acos r_ij + acos r_jk + acos r_ik)/(2 pi) with sign-adjusted
/// correlations r_ab = s_a s_b X_ab. Throws std::domain_error if the signed
/// triple is not a valid correlation.
double constraint_kappa(const Constraint& c, const Eigen::MatrixXd& gram);

/// x_i = +1 iff Z_i >= 0 for one Z ~ N(0, X).
Assignment round_gaussian(const MvnSampler& sampler, Rng& rng);
Assignment round_gaussian(const Instance& inst, const Eigen::MatrixXd& gram, Rng& rng);

/// Rows of the returned matrix are vectors v_i with <v_i, v_j> = X_ij.
Eigen::MatrixXd gram_factors(const Eigen::MatrixXd& gram);

/// x_i = sign(<g, v_i>) (ties to +1) for one standard normal g. Throws
/// std::invalid_argument unless factors * factors^T matches gram to 1e-6.
Assignment round_hyperplane(const Instance& inst, const Eigen::MatrixXd& factors,
                            const Eigen::MatrixXd& gram, Rng& rng);

RoundingReport expected_value_closed_form(const Instance& inst, const Eigen::MatrixXd& gram);

/// Mean and standard error of evaluate() over independent Gaussian roundings.
McEstimate empirical_round(const Instance& inst, const Eigen::MatrixXd& gram,
                           std::uint64_t trials, std::uint64_t seed);

nlohmann::json to_json(const RoundingReport& r);
/// One row per constraint: index,i,j,k,s_i,s_j,s_k,lambda,kappa,ratio.
std::string to_csv(const RoundingReport& r, const Instance& inst);

}  // namespace max3eq
