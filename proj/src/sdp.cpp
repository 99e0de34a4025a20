#include "max3eq/sdp.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>
#include <utility>

#include <Eigen/Sparse>
#include <Eigen/SparseCholesky>

namespace max3eq {

TripleWeights recover_abcd(double x_ij, double x_jk, double x_ik) {
    return {(1.0 + x_ij + x_jk + x_ik) / 4.0, (1.0 + x_ij - x_jk - x_ik) / 4.0,
            (1.0 - x_ij + x_jk - x_ik) / 4.0, (1.0 - x_ij - x_jk + x_ik) / 4.0};
}

double constraint_lambda(const Constraint& c, const Eigen::MatrixXd& gram) {
    const auto [i, j, k] = c.vars;
    const auto [si, sj, sk] = c.signs;
    return (1.0 + si * sj * gram(i, j) + sj * sk * gram(j, k) + si * sk * gram(i, k)) / 4.0;
}

double SdpProblem::objective(const Eigen::MatrixXd& gram) const {
    // Summed per constraint so that a +/-1 Gram gives count/|E| exactly.
    double v = 0.0;
    for (const auto& c : constraints) v += constraint_lambda(c, gram);
    return v / static_cast<double>(constraints.size());
}

std::vector<double> SdpProblem::lambdas(const Eigen::MatrixXd& gram) const {
    std::vector<double> out;
    out.reserve(constraints.size());
    for (const auto& c : constraints) out.push_back(constraint_lambda(c, gram));
    return out;
}

double SdpProblem::min_cut_value(const Eigen::MatrixXd& gram) const {
    double lo = INFINITY;
    for (const auto& t : triples) {
        const double a = gram(pairs[t[0]].i, pairs[t[0]].j);
        const double b = gram(pairs[t[1]].i, pairs[t[1]].j);
        const double c = gram(pairs[t[2]].i, pairs[t[2]].j);
        for (const auto& s : kCutSigns) lo = std::min(lo, 1.0 + s[0] * a + s[1] * b + s[2] * c);
    }
    return lo;
}

Eigen::MatrixXd SdpProblem::objective_matrix() const {
    const auto d = static_cast<Eigen::Index>(n);
    Eigen::MatrixXd c = Eigen::MatrixXd::Zero(d, d);
    for (std::size_t p = 0; p < pairs.size(); ++p) {
        c(pairs[p].i, pairs[p].j) += pair_weight[p] / 2.0;
        c(pairs[p].j, pairs[p].i) += pair_weight[p] / 2.0;
    }
    return c;
}

SdpProblem build_sdp(const Instance& inst) {
    if (inst.num_constraints() == 0) throw std::invalid_argument("build_sdp: instance has no constraints");
    SdpProblem prob;
    prob.n = inst.num_vars();
    prob.constraints = inst.constraints();
    std::map<std::pair<std::uint32_t, std::uint32_t>, std::size_t> pair_index;
    const auto pair_of = [&](std::uint32_t i, std::uint32_t j) {
        const auto [it, inserted] = pair_index.try_emplace({i, j}, prob.pairs.size());
        if (inserted) {
            prob.pairs.push_back({i, j});
            prob.pair_weight.push_back(0.0);
        }
        return it->second;
    };
    std::map<std::array<std::uint32_t, 3>, bool> seen;
    const double w = 1.0 / (4.0 * static_cast<double>(inst.num_constraints()));
    for (const auto& c : inst.constraints()) {
        const auto [i, j, k] = c.vars;
        const auto [si, sj, sk] = c.signs;
        const std::size_t pij = pair_of(i, j), pjk = pair_of(j, k), pik = pair_of(i, k);
        prob.pair_weight[pij] += si * sj * w;
        prob.pair_weight[pjk] += sj * sk * w;
        prob.pair_weight[pik] += si * sk * w;
        if (seen.try_emplace(c.vars, true).second) prob.triples.push_back({pij, pjk, pik});
    }
    return prob;
}

namespace {

Eigen::MatrixXd project_psd(const Eigen::MatrixXd& m) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m);
    const Eigen::VectorXd vals = es.eigenvalues().cwiseMax(0.0);
    return es.eigenvectors() * vals.asDiagonal() * es.eigenvectors().transpose();
}

// Unit-diagonal rescaling followed by the smallest shrink toward the
// identity that satisfies every cut.
Eigen::MatrixXd repair(const SdpProblem& prob, const Eigen::MatrixXd& s) {
    const auto n = s.rows();
    Eigen::VectorXd inv_sqrt(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        inv_sqrt[i] = s(i, i) > 1e-12 ? 1.0 / std::sqrt(s(i, i)) : 0.0;
    }
    Eigen::MatrixXd x = inv_sqrt.asDiagonal() * s * inv_sqrt.asDiagonal();
    // a zero diagonal entry means an all-zero row/column; give it its own axis
    for (Eigen::Index i = 0; i < n; ++i) x(i, i) = 1.0;
    x = (x + x.transpose()) / 2.0;
    const double violation = std::max(0.0, -prob.min_cut_value(x));
    if (violation > 0.0) {
        const double t = violation / (1.0 + violation);
        x = (1.0 - t) * x + t * Eigen::MatrixXd::Identity(n, n);
    }
    return x;
}

}  // namespace

SdpSolution solve_sdp(const SdpProblem& prob, const SolverOptions& opts) {
    if (!(opts.tol > 0.0)) throw std::invalid_argument("solve_sdp: tol must be positive");
    if (!(opts.rho > 0.0)) throw std::invalid_argument("solve_sdp: rho must be positive");
    const auto n = static_cast<Eigen::Index>(prob.n);
    const auto np = static_cast<Eigen::Index>(prob.pairs.size());
    const auto m = static_cast<Eigen::Index>(4 * prob.triples.size());

    // G maps pair values to cut values (minus the constant 1).
    Eigen::SparseMatrix<double> g(m, np);
    {
        std::vector<Eigen::Triplet<double>> trip;
        trip.reserve(static_cast<std::size_t>(3 * m));
        for (std::size_t t = 0; t < prob.triples.size(); ++t) {
            for (std::size_t c = 0; c < 4; ++c) {
                const auto row = static_cast<Eigen::Index>(4 * t + c);
                for (std::size_t e = 0; e < 3; ++e) {
                    trip.emplace_back(row, static_cast<Eigen::Index>(prob.triples[t][e]),
                                      kCutSigns[c][e]);
                }
            }
        }
        g.setFromTriplets(trip.begin(), trip.end());
    }
    Eigen::SparseMatrix<double> normal = Eigen::SparseMatrix<double>(g.transpose()) * g;
    for (Eigen::Index p = 0; p < np; ++p) normal.coeffRef(p, p) += 2.0;
    Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> ldlt(normal);
    if (ldlt.info() != Eigen::Success) throw std::runtime_error("solve_sdp: factorization failed");

    // Objective rescaled to unit max-norm; the optimiser is unchanged.
    Eigen::VectorXd w(np);
    for (Eigen::Index p = 0; p < np; ++p) w[p] = prob.pair_weight[static_cast<std::size_t>(p)];
    const double wmax = w.cwiseAbs().maxCoeff();
    if (wmax > 0.0) w /= wmax;

    Eigen::MatrixXd x = Eigen::MatrixXd::Identity(n, n);
    Eigen::MatrixXd s = x;
    Eigen::MatrixXd u = Eigen::MatrixXd::Zero(n, n);
    Eigen::VectorXd xp = Eigen::VectorXd::Zero(np);
    Eigen::VectorXd z = Eigen::VectorXd::Ones(m);
    Eigen::VectorXd wd = Eigen::VectorXd::Zero(m);
    const Eigen::VectorXd ones = Eigen::VectorXd::Ones(m);
    double rho = opts.rho;

    SdpSolution sol;
    std::size_t it = 0;
    for (; it < opts.max_iter; ++it) {
        // X-update: unit diagonal; free pairs copy S - U, constrained pairs
        // solve (2I + G^T G) x = w/rho + 2(S - U) - G^T (1 - z + W).
        const Eigen::MatrixXd a = s - u;
        x = a;
        x.diagonal().setOnes();
        Eigen::VectorXd ap(np);
        for (Eigen::Index p = 0; p < np; ++p) {
            const auto& pr = prob.pairs[static_cast<std::size_t>(p)];
            ap[p] = 0.5 * (a(pr.i, pr.j) + a(pr.j, pr.i));
        }
        const Eigen::VectorXd rhs = w / rho + 2.0 * ap - g.transpose() * (ones - z + wd);
        xp = ldlt.solve(rhs);
        for (Eigen::Index p = 0; p < np; ++p) {
            const auto& pr = prob.pairs[static_cast<std::size_t>(p)];
            x(pr.i, pr.j) = x(pr.j, pr.i) = xp[p];
        }
        x = (x + x.transpose()) / 2.0;

        const Eigen::MatrixXd s_prev = s;
        const Eigen::VectorXd z_prev = z;
        s = project_psd(x + u);
        const Eigen::VectorXd gx = g * xp + ones;
        z = (gx + wd).cwiseMax(0.0);

        u += x - s;
        wd += gx - z;

        const double r_psd = (x - s).cwiseAbs().maxCoeff();
        const double r_cut = m > 0 ? (gx - z).cwiseAbs().maxCoeff() : 0.0;
        sol.primal_residual = std::max(r_psd, r_cut);
        const double d_psd = (s - s_prev).cwiseAbs().maxCoeff();
        const double d_cut = m > 0 ? (z - z_prev).cwiseAbs().maxCoeff() : 0.0;
        sol.dual_residual = rho * std::max(d_psd, d_cut);

        if (sol.primal_residual <= opts.tol && sol.dual_residual <= opts.tol && it > 0) {
            sol.converged = true;
            ++it;
            break;
        }
        if (it % 10 == 9) {
            // residual balancing
            if (sol.primal_residual > 10.0 * sol.dual_residual) {
                rho *= 2.0;
                u /= 2.0;
                wd /= 2.0;
            } else if (sol.dual_residual > 10.0 * sol.primal_residual) {
                rho /= 2.0;
                u *= 2.0;
                wd *= 2.0;
            }
        }
    }
    sol.iterations = it;
    sol.gram = repair(prob, s);
    sol.objective = prob.objective(sol.gram);
    sol.cut_violation = prob.triples.empty() ? 0.0 : std::max(0.0, -prob.min_cut_value(sol.gram));
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(sol.gram, Eigen::EigenvaluesOnly);
    sol.min_eigenvalue = es.eigenvalues().minCoeff();
    sol.max_diag_error = (sol.gram.diagonal().array() - 1.0).abs().maxCoeff();
    return sol;
}

nlohmann::json to_json(const SdpSolution& sol, const SdpProblem& prob) {
    std::vector<double> flat;
    flat.reserve(static_cast<std::size_t>(sol.gram.size()));
    for (Eigen::Index r = 0; r < sol.gram.rows(); ++r) {
        for (Eigen::Index c = 0; c < sol.gram.cols(); ++c) flat.push_back(sol.gram(r, c));
    }
    return {{"n", prob.n},
            {"gram", flat},
            {"objective", sol.objective},
            {"primal_residual", sol.primal_residual},
            {"dual_residual", sol.dual_residual},
            {"cut_violation", sol.cut_violation},
            {"min_eigenvalue", sol.min_eigenvalue},
            {"iterations", sol.iterations},
            {"converged", sol.converged},
            {"lambda", prob.lambdas(sol.gram)}};
}

}  // namespace max3eq
