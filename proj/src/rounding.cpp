#include "max3eq/rounding.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "max3eq/parallel.hpp"

namespace max3eq {
namespace {

constexpr std::uint64_t kBlockTrials = 1 << 14;

Covariance as_covariance(const Instance& inst, const Eigen::MatrixXd& gram) {
    if (static_cast<std::size_t>(gram.rows()) != inst.num_vars()) {
        throw std::invalid_argument("Gram matrix size does not match the instance");
    }
    return Covariance(gram);
}

}  // namespace

double constraint_kappa(const Constraint& c, const Eigen::MatrixXd& gram) {
    const auto [i, j, k] = c.vars;
    const auto [si, sj, sk] = c.signs;
    const double r1 = si * sj * gram(i, j);
    const double r2 = sj * sk * gram(j, k);
    const double r3 = si * sk * gram(i, k);
    if (!correlation_triple_is_psd(r1, r2, r3)) {
        throw std::domain_error("constraint correlations are not a valid 3x3 correlation");
    }
    const double kappa =
        1.0 - (clamped_acos(r1) + clamped_acos(r2) + clamped_acos(r3)) / (2.0 * std::numbers::pi);
    return std::min(1.0, std::max(0.0, kappa));
}

Assignment round_gaussian(const MvnSampler& sampler, Rng& rng) {
    const auto z = sampler.sample(rng);
    std::vector<std::int8_t> x(z.size());
    for (std::size_t i = 0; i < z.size(); ++i) x[i] = z[i] >= 0.0 ? 1 : -1;
    return Assignment(std::move(x));
}

Assignment round_gaussian(const Instance& inst, const Eigen::MatrixXd& gram, Rng& rng) {
    return round_gaussian(MvnSampler(as_covariance(inst, gram)), rng);
}

Eigen::MatrixXd gram_factors(const Eigen::MatrixXd& gram) {
    const MvnSampler sampler{Covariance(gram)};
    const auto n = static_cast<Eigen::Index>(sampler.dim());
    const auto r = static_cast<Eigen::Index>(sampler.rank());
    Eigen::MatrixXd v(n, r);
    const auto f = sampler.factor();
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index c = 0; c < r; ++c) v(i, c) = f[static_cast<std::size_t>(i * r + c)];
    }
    return v;
}

Assignment round_hyperplane(const Instance& inst, const Eigen::MatrixXd& factors,
                            const Eigen::MatrixXd& gram, Rng& rng) {
    if (static_cast<std::size_t>(factors.rows()) != inst.num_vars() ||
        gram.rows() != factors.rows() || gram.cols() != factors.rows()) {
        throw std::invalid_argument("round_hyperplane: dimension mismatch");
    }
    if ((factors * factors.transpose() - gram).cwiseAbs().maxCoeff() > 1e-6) {
        throw std::invalid_argument("round_hyperplane: factors do not reproduce the Gram matrix");
    }
    std::normal_distribution<double> normal;
    Eigen::VectorXd g(factors.cols());
    for (Eigen::Index c = 0; c < g.size(); ++c) g[c] = normal(rng);
    const Eigen::VectorXd proj = factors * g;
    std::vector<std::int8_t> x(inst.num_vars());
    for (std::size_t i = 0; i < x.size(); ++i) x[i] = proj[static_cast<Eigen::Index>(i)] >= 0.0 ? 1 : -1;
    return Assignment(std::move(x));
}

RoundingReport expected_value_closed_form(const Instance& inst, const Eigen::MatrixXd& gram) {
    if (inst.num_constraints() == 0) throw std::invalid_argument("instance has no constraints");
    if (static_cast<std::size_t>(gram.rows()) != inst.num_vars()) {
        throw std::invalid_argument("Gram matrix size does not match the instance");
    }
    RoundingReport r;
    r.min_ratio = std::numeric_limits<double>::infinity();
    double kappa_sum = 0.0, lambda_sum = 0.0;
    for (std::size_t e = 0; e < inst.num_constraints(); ++e) {
        const auto& c = inst.constraints()[e];
        const double kappa = constraint_kappa(c, gram);
        const auto [i, j, k] = c.vars;
        const auto [si, sj, sk] = c.signs;
        const double lambda =
            (1.0 + si * sj * gram(i, j) + sj * sk * gram(j, k) + si * sk * gram(i, k)) / 4.0;
        r.per_constraint_kappa.push_back(kappa);
        r.per_constraint_lambda.push_back(lambda);
        kappa_sum += kappa;
        lambda_sum += lambda;
        if (lambda > kRatioLambdaFloor && kappa / lambda < r.min_ratio) {
            r.min_ratio = kappa / lambda;
            r.min_ratio_constraint = e;
        }
    }
    const double m = static_cast<double>(inst.num_constraints());
    r.expected_value_closed_form = kappa_sum / m;
    r.sdp_objective = lambda_sum / m;
    return r;
}

McEstimate empirical_round(const Instance& inst, const Eigen::MatrixXd& gram,
                           std::uint64_t trials, std::uint64_t seed) {
    if (trials == 0) throw std::invalid_argument("empirical_round: trials must be positive");
    if (inst.num_constraints() == 0) throw std::invalid_argument("instance has no constraints");
    const MvnSampler sampler(as_covariance(inst, gram));
    const std::size_t blocks = (trials + kBlockTrials - 1) / kBlockTrials;
    std::vector<RunningStats> partial(blocks);
    for_each_block(blocks, [&](std::size_t b) {
        Rng rng = make_stream(seed, b);
        const std::uint64_t count = std::min(kBlockTrials, trials - b * kBlockTrials);
        std::vector<double> z(sampler.dim()), scratch(sampler.rank());
        std::vector<std::int8_t> x(sampler.dim());
        RunningStats stats;
        for (std::uint64_t t = 0; t < count; ++t) {
            sampler.sample(rng, z, scratch);
            for (std::size_t i = 0; i < x.size(); ++i) x[i] = z[i] >= 0.0 ? 1 : -1;
            std::size_t sat = 0;
            for (const auto& c : inst.constraints()) sat += c.satisfied_by(x);
            stats.add(static_cast<double>(sat) / static_cast<double>(inst.num_constraints()));
        }
        partial[b] = stats;
    });
    return merge_blocks(partial);
}

nlohmann::json to_json(const RoundingReport& r) {
    nlohmann::json j{{"expected_value_closed_form", r.expected_value_closed_form},
                     {"sdp_objective", r.sdp_objective},
                     {"per_constraint_kappa", r.per_constraint_kappa},
                     {"per_constraint_lambda", r.per_constraint_lambda},
                     {"min_ratio", std::isfinite(r.min_ratio) ? nlohmann::json(r.min_ratio)
                                                              : nlohmann::json(nullptr)},
                     {"min_ratio_constraint", r.min_ratio_constraint}};
    if (r.has_empirical) {
        j["empirical"] = {{"mean", r.empirical.mean},
                          {"std_error", r.empirical.std_error},
                          {"samples", r.empirical.samples}};
    }
    return j;
}

std::string to_csv(const RoundingReport& r, const Instance& inst) {
    std::ostringstream out;
    out.precision(17);
    out << "index,i,j,k,s_i,s_j,s_k,lambda,kappa,ratio\n";
    for (std::size_t e = 0; e < inst.num_constraints(); ++e) {
        const auto& c = inst.constraints()[e];
        const double lambda = r.per_constraint_lambda[e];
        const double kappa = r.per_constraint_kappa[e];
        out << e << ',' << c.vars[0] << ',' << c.vars[1] << ',' << c.vars[2] << ',' << c.signs[0]
            << ',' << c.signs[1] << ',' << c.signs[2] << ',' << lambda << ',' << kappa << ',';
        if (lambda > kRatioLambdaFloor) out << kappa / lambda;
        out << '\n';
    }
    return out.str();
}

}  // namespace max3eq
