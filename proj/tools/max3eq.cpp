// max3eq: generate, solve, round and certify MAX-3-EQUAL instances, and run
// the dictatorship tests. JSON reports go to stdout (or --output), a short
// human summary to stderr.
//
// Exit codes: 0 success, 2 usage error, 3 solver non-convergence.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "max3eq/certify.hpp"
#include "max3eq/csp.hpp"
#include "max3eq/dictatorship.hpp"
#include "max3eq/gaussian.hpp"
#include "max3eq/kernels.hpp"
#include "max3eq/parallel.hpp"
#include "max3eq/rounding.hpp"
#include "max3eq/sdp.hpp"

#ifndef MAX3EQ_VERSION
#define MAX3EQ_VERSION "0.0.0"
#endif

namespace {

using nlohmann::json;
using namespace max3eq;

constexpr int kExitUsage = 2;
constexpr int kExitNoConvergence = 3;

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// "0.4", "-1.25", "3" or "2/5", parsed exactly.
Rational parse_rational(const std::string& s) {
    using boost::multiprecision::cpp_int;
    try {
        if (auto slash = s.find('/'); slash != std::string::npos) {
            const cpp_int den(s.substr(slash + 1));
            if (den == 0) throw UsageError("zero denominator in '" + s + "'");
            return Rational(cpp_int(s.substr(0, slash)), den);
        }
        std::string digits = s;
        cpp_int den = 1;
        if (auto dot = s.find('.'); dot != std::string::npos) {
            const std::string frac = s.substr(dot + 1);
            digits = s.substr(0, dot) + frac;
            for (std::size_t i = 0; i < frac.size(); ++i) den *= 10;
        }
        if (digits.empty() || digits == "-" || digits == "+") throw UsageError("bad number '" + s + "'");
        if (digits[0] == '+') digits.erase(0, 1);
        return Rational(cpp_int(digits), den);
    } catch (const UsageError&) {
        throw;
    } catch (const std::exception&) {
        throw UsageError("bad number '" + s + "'");
    }
}

struct Output {
    std::string path;
    std::string format = "json";
};

json header(const std::string& command, json config) {
    return json{{"tool", "max3eq"},
                {"version", MAX3EQ_VERSION},
                {"command", command},
                {"isa", kernels::isa_name(kernels::active_isa())},
                {"config", std::move(config)}};
}

void emit(const Output& out, const std::string& text) {
    if (out.path.empty()) {
        std::cout << text;
        std::cout.flush();
        return;
    }
    std::ofstream f(out.path, std::ios::binary);
    if (!f) throw UsageError("cannot write '" + out.path + "'");
    f << text;
}

void emit_json(const Output& out, const json& j) { emit(out, j.dump(2) + "\n"); }

Instance read_instance(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw UsageError("cannot read '" + path + "'");
    json j;
    try {
        f >> j;
    } catch (const json::exception& e) {
        throw UsageError("'" + path + "' is not valid JSON: " + e.what());
    }
    // Reports written by `gen` wrap the instance.
    if (j.contains("instance")) j = j.at("instance");
    try {
        return instance_from_json(j);
    } catch (const std::exception& e) {
        throw UsageError("'" + path + "': " + e.what());
    }
}

// gen ---------------------------------------------------------------------

struct GenArgs {
    std::size_t n = 0;
    std::size_t m = 0;
    std::uint64_t seed = 0;
};

int run_gen(const GenArgs& a, const Output& out) {
    const auto inst = random_instance(a.n, a.m, a.seed);
    json report = header("gen", {{"n", a.n}, {"m", a.m}, {"seed", a.seed}});
    report["instance"] = to_json(inst);
    emit_json(out, report);
    std::cerr << "generated " << a.m << " constraints on " << a.n << " variables (seed " << a.seed
              << ")\n";
    return 0;
}

// solve -------------------------------------------------------------------

struct SolveArgs {
    std::string instance;
    double tol = 1e-5;
    std::size_t max_iter = 50000;
    std::uint64_t trials = 100000;
    std::uint64_t seed = 0;
    bool brute_force = true;
};

int run_solve(const SolveArgs& a, const Output& out) {
    const auto inst = read_instance(a.instance);
    const auto prob = build_sdp(inst);
    SolverOptions opts;
    opts.tol = a.tol;
    opts.max_iter = a.max_iter;
    const auto sol = solve_sdp(prob, opts);
    auto report = expected_value_closed_form(inst, sol.gram);
    if (a.trials > 0) {
        report.empirical = empirical_round(inst, sol.gram, a.trials, a.seed);
        report.has_empirical = true;
    }
    std::optional<BruteForceResult> opt;
    if (a.brute_force && inst.num_vars() <= kExhaustiveLimit) opt = brute_force_opt(inst);

    if (out.format == "csv") {
        emit(out, to_csv(report, inst));
    } else {
        json j = header("solve", {{"instance", a.instance},
                                  {"tol", a.tol},
                                  {"max_iter", a.max_iter},
                                  {"trials", a.trials},
                                  {"seed", a.seed},
                                  {"brute_force", a.brute_force}});
        j["n"] = inst.num_vars();
        j["m"] = inst.num_constraints();
        j["sdp"] = to_json(sol, prob);
        j["rounding"] = to_json(report);
        if (opt) {
            j["brute_force"] = {{"value", opt->value},
                                {"satisfied", opt->satisfied},
                                {"witness_mask", opt->witness.mask()}};
        } else {
            j["brute_force"] = nullptr;
        }
        emit_json(out, j);
    }

    std::fprintf(stderr, "sdp %.6f  rounded %.6f", sol.objective, report.expected_value_closed_form);
    if (report.has_empirical) {
        std::fprintf(stderr, "  empirical %.6f +/- %.6f", report.empirical.mean, report.empirical.std_error);
    }
    if (opt) std::fprintf(stderr, "  opt %.6f", opt->value);
    std::fprintf(stderr, "  min ratio %.6f\n", report.min_ratio);
    if (!sol.converged) {
        std::fprintf(stderr, "solver did not converge after %zu iterations (primal %.3g, dual %.3g)\n",
                     sol.iterations, sol.primal_residual, sol.dual_residual);
        return kExitNoConvergence;
    }
    return 0;
}

// certify -----------------------------------------------------------------

struct CertifyArgs {
    double spacing = 0.0;
    std::size_t grid = 100000;
};

void summarize(const char* label, const CertifiedInterval& c) {
    std::fprintf(stderr, "%s in [%.7f, %.7f]  (grid min %.7f at %.7f, %zu points)\n", label, c.lo, c.hi,
                 c.min_value, c.argmin_estimate, c.grid_points);
}

int run_certify_alpha(const CertifyArgs& a, const Output& out) {
    GridOptions g;
    g.spacing = a.spacing;
    const auto cert = certify_alpha(g, g);
    json j = header("certify alpha", {{"spacing", a.spacing}, {"budget", g.budget}});
    j["result"] = to_json(cert);
    emit_json(out, j);
    summarize("alpha", cert.alpha);
    std::fprintf(stderr, "argmin a = %.7f, delta = %.7f\n", cert.argmin_a, cert.argmin_delta);
    return 0;
}

int run_certify_h1(const CertifyArgs& a, const Output& out) {
    GridOptions g;
    g.spacing = a.spacing;
    const auto cert = certify_h1_infimum(g);
    json j = header("certify h1", {{"spacing", a.spacing}, {"budget", g.budget}});
    j["result"] = to_json(cert);
    emit_json(out, j);
    summarize("h1", cert);
    return 0;
}

int run_certify_trig(const CertifyArgs& a, const Output& out) {
    if (a.grid < 2) throw UsageError("--grid must be at least 2");
    const auto facts = verify_trig_facts(a.grid);
    json j = header("certify trig", {{"grid", a.grid}, {"slack", kTrigSlack}});
    j["result"] = to_json(facts);
    emit_json(out, j);
    for (const auto& f : facts) {
        std::fprintf(stderr, "%-24s %s  worst margin %.3g at %.6f\n", f.name.c_str(), f.holds ? "ok  " : "FAIL",
                     f.worst_margin, f.worst_at);
    }
    return 0;
}

// dict --------------------------------------------------------------------

struct DictArgs {
    std::string function = "dictator";
    std::size_t arity = 8;
    std::string delta = "0.4";
    std::size_t k = 4;
    std::string xi = "0.05";
    std::uint64_t trials = 0;
    std::uint64_t seed = 0;
};

EvalMode eval_mode(const DictArgs& a, const TestFunction& f) {
    if (a.trials > 0) return EvalMode::monte_carlo(a.trials, a.seed);
    if (!f.has_junta()) throw UsageError("'" + a.function + "' needs --trials (no exact evaluation)");
    return EvalMode::exact();
}

void summarize(const TestReport& r) {
    std::fprintf(stderr, "acceptance %.6f", r.accept_prob);
    if (r.exact) std::fprintf(stderr, " (= %s)", rational_string(*r.exact).c_str());
    if (r.estimate) std::fprintf(stderr, " +/- %.6f", r.estimate->std_error);
    std::fprintf(stderr, "  completeness %.6f  soundness %.6f\n", r.completeness_bound, r.soundness_bound);
}

int run_dict_equal(const DictArgs& a, const Output& out) {
    const auto f = zoo_function(a.function, a.arity, a.seed);
    const Rational delta = parse_rational(a.delta);
    if (!(delta > 0 && delta <= 1)) throw UsageError("--delta must lie in (0, 1]");
    const auto r = accept_equal(f, delta, eval_mode(a, f));
    json j = header("dict equal", {{"function", a.function},
                                   {"arity", f.arity()},
                                   {"delta", rational_string(delta)},
                                   {"trials", a.trials},
                                   {"seed", a.seed}});
    j["result"] = to_json(r);
    emit_json(out, j);
    summarize(r);
    return 0;
}

int run_dict_and(const DictArgs& a, const Output& out) {
    if (a.k < 3 || a.k > 16) throw UsageError("--k must lie in [3, 16]");
    const auto f = zoo_function(a.function, a.arity, a.seed);
    const Rational xi = parse_rational(a.xi);
    if (!(xi > 0 && xi <= 1)) throw UsageError("--xi must lie in (0, 1]");
    const auto r = accept_and(f, a.k, xi, eval_mode(a, f));
    const auto h = and_hardness(a.k);
    json j = header("dict and", {{"function", a.function},
                                 {"arity", f.arity()},
                                 {"k", a.k},
                                 {"xi", rational_string(xi)},
                                 {"trials", a.trials},
                                 {"seed", a.seed}});
    j["result"] = to_json(r);
    j["hardness"] = {{"completeness", rational_string(h.completeness)},
                     {"soundness", rational_string(h.soundness)},
                     {"factor", rational_string(h.factor)}};
    emit_json(out, j);
    summarize(r);
    return 0;
}

// orthant -----------------------------------------------------------------

struct OrthantArgs {
    double rho[3] = {0.0, 0.0, 0.0};
    std::uint64_t trials = 0;
    std::uint64_t seed = 0;
};

int run_orthant(const OrthantArgs& a, const Output& out) {
    const auto [r1, r2, r3] = a.rho;
    if (!correlation_triple_is_psd(r1, r2, r3)) throw UsageError("correlations do not form a PSD matrix");
    const double closed = trivariate_orthant(r1, r2, r3);
    json j = header("orthant", {{"rho", {r1, r2, r3}}, {"trials", a.trials}, {"seed", a.seed}});
    j["closed_form"] = closed;
    std::fprintf(stderr, "closed form %.8f", closed);
    if (a.trials > 0) {
        Eigen::Matrix3d m;
        m << 1, r1, r3, r1, 1, r2, r3, r2, 1;
        const auto est = mc_orthant(Covariance(m), a.trials, a.seed);
        j["monte_carlo"] = {{"mean", est.mean},
                            {"std_error", est.std_error},
                            {"samples", est.samples},
                            {"z_score", est.z_score(closed)}};
        std::fprintf(stderr, "  monte carlo %.8f +/- %.8f (z = %.2f)", est.mean, est.std_error,
                     est.z_score(closed));
    }
    std::fprintf(stderr, "\n");
    emit_json(out, j);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"MAX-3-EQUAL relaxation, rounding and certification toolkit"};
    app.set_version_flag("--version", std::string(MAX3EQ_VERSION));
    app.require_subcommand(1);

    Output out;
    auto add_output = [&](CLI::App* sub, bool csv) {
        sub->add_option("-o,--output", out.path, "Write the report here instead of stdout");
        if (csv) {
            sub->add_option("--format", out.format, "Report format")
                ->check(CLI::IsMember({"json", "csv"}))
                ->capture_default_str();
        }
    };

    GenArgs gen;
    auto* gen_cmd = app.add_subcommand("gen", "Generate a random instance");
    gen_cmd->add_option("--n", gen.n, "Variables")->required()->check(CLI::Range(std::size_t{3}, std::size_t{1} << 31));
    gen_cmd->add_option("--m", gen.m, "Constraints")->required()->check(CLI::PositiveNumber);
    gen_cmd->add_option("--seed", gen.seed)->capture_default_str();
    add_output(gen_cmd, false);

    SolveArgs solve;
    auto* solve_cmd = app.add_subcommand("solve", "Solve the relaxation and round it");
    solve_cmd->alias("solve-round");
    solve_cmd->add_option("--instance", solve.instance, "Instance JSON")->required();
    solve_cmd->add_option("--tol", solve.tol)->capture_default_str()->check(CLI::PositiveNumber);
    solve_cmd->add_option("--max-iter", solve.max_iter)->capture_default_str();
    solve_cmd->add_option("--trials", solve.trials, "Empirical rounding trials (0 skips)")->capture_default_str();
    solve_cmd->add_option("--seed", solve.seed)->capture_default_str();
    solve_cmd->add_flag("!--no-brute-force", solve.brute_force, "Skip the exhaustive optimum");
    add_output(solve_cmd, true);

    CertifyArgs cert;
    auto* cert_cmd = app.add_subcommand("certify", "Certified infima and supporting inequalities");
    cert_cmd->require_subcommand(1);
    auto* cert_alpha = cert_cmd->add_subcommand("alpha", "Certify the approximation constant");
    auto* cert_h1 = cert_cmd->add_subcommand("h1", "Certify the boundary-branch infimum");
    auto* cert_trig = cert_cmd->add_subcommand("trig", "Check the trigonometric inequalities on grids");
    for (auto* sub : {cert_alpha, cert_h1}) {
        sub->add_option("--spacing", cert.spacing, "Grid spacing (0 derives it from the error budget)")
            ->capture_default_str();
        add_output(sub, false);
    }
    cert_trig->add_option("--grid", cert.grid, "Points per inequality")->capture_default_str();
    add_output(cert_trig, false);

    DictArgs dict;
    auto* dict_cmd = app.add_subcommand("dict", "Dictatorship test acceptance");
    dict_cmd->require_subcommand(1);
    auto* dict_equal = dict_cmd->add_subcommand("equal", "MAX-3-EQUAL test");
    auto* dict_and = dict_cmd->add_subcommand("and", "MAX-k-AND test");
    for (auto* sub : {dict_equal, dict_and}) {
        sub->add_option("--f", dict.function, "dictator, const-half, majority-<t> or random-balanced")
            ->capture_default_str();
        sub->add_option("--arity", dict.arity, "Arity (majority-<t> uses t)")->capture_default_str();
        sub->add_option("--trials", dict.trials, "Monte Carlo trials (0 = exact)")->capture_default_str();
        sub->add_option("--seed", dict.seed)->capture_default_str();
        add_output(sub, false);
    }
    dict_equal->add_option("--delta", dict.delta, "Noise rate in (0,1], decimal or p/q")->capture_default_str();
    dict_and->add_option("--k", dict.k)->capture_default_str();
    dict_and->add_option("--xi", dict.xi, "Uniform mixing weight in (0,1], decimal or p/q")->capture_default_str();

    OrthantArgs orth;
    auto* orth_cmd = app.add_subcommand("orthant", "Trivariate normal orthant probability");
    orth_cmd->add_option("rho1", orth.rho[0])->required();
    orth_cmd->add_option("rho2", orth.rho[1])->required();
    orth_cmd->add_option("rho3", orth.rho[2])->required();
    orth_cmd->add_option("--trials", orth.trials, "Monte Carlo samples (0 skips)")->capture_default_str();
    orth_cmd->add_option("--seed", orth.seed)->capture_default_str();
    add_output(orth_cmd, false);

    try {
        app.parse(argc, argv);
    } catch (const CLI::Success& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    try {
        if (*gen_cmd) return run_gen(gen, out);
        if (*solve_cmd) return run_solve(solve, out);
        if (*cert_alpha) return run_certify_alpha(cert, out);
        if (*cert_h1) return run_certify_h1(cert, out);
        if (*cert_trig) return run_certify_trig(cert, out);
        if (*dict_equal) return run_dict_equal(dict, out);
        if (*dict_and) return run_dict_and(dict, out);
        if (*orth_cmd) return run_orthant(orth, out);
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::domain_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    }
    return kExitUsage;
}
