#include "mfgs/experiments.hpp"

#include "mfgs/errors.hpp"
#include "mfgs/manufactured.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <numbers>
#include <optional>

namespace mfgs {

namespace {

using nlohmann::json;

constexpr double kRateFloor = 1e-13; // below this, errors are round-off and rates meaningless

std::string fmt(double v) {
    if (!std::isfinite(v)) return "NA";
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::string fmt(bool v) { return v ? "true" : "false"; }

void write_text(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << text;
}

void write_field_csv(const std::filesystem::path& path, const Field& f) {
    const PeriodicMesh& mesh = *f.mesh;
    std::string text = mesh.dim() == 1 ? "x,value\n" : "x,y,value\n";
    for (int i = 0; i < mesh.node_count(); ++i) {
        const Point p = mesh.node(i);
        text += fmt(p[0]);
        if (mesh.dim() == 2) text += "," + fmt(p[1]);
        text += "," + fmt(f.values[i]) + "\n";
    }
    write_text(path, text);
}

void write_history_csv(const std::filesystem::path& path, const SolveReport& report) {
    std::string text = "k,residual,step_norm,rate_estimate\n";
    for (std::size_t k = 0; k < report.residual_history.size(); ++k) {
        text += std::to_string(k) + "," + fmt(report.residual_history[k]) + ",";
        text += (k >= 1 && k - 1 < report.step_history.size()) ? fmt(report.step_history[k - 1])
                                                               : std::string("NA");
        text += ",";
        text += (k >= 1 && k - 1 < report.rate_estimates.size()) ? fmt(report.rate_estimates[k - 1])
                                                                 : std::string("NA");
        text += "\n";
    }
    write_text(path, text);
}

json config_json(const RunConfig& cfg) {
    json j;
    j["experiment"] = cfg.experiment;
    j["dim"] = cfg.dim;
    if (cfg.n > 0) j["n"] = cfg.n;
    if (!cfg.n_list.empty()) j["n_list"] = cfg.n_list;
    if (cfg.lambda > 0) j["lambda"] = cfg.lambda;
    if (!cfg.lambda_list.empty()) j["lambda_list"] = cfg.lambda_list;
    j["coupling"] = {{"family", cfg.coupling.family}, {"scale", cfg.coupling.scale}};
    j["m0"] = {{"family", cfg.m0.family}, {"amplitude", cfg.m0.amplitude}};
    j["solver"] = {{"method", cfg.solver.method},
                   {"tol", cfg.solver.tol},
                   {"damping", cfg.solver.damping},
                   {"line_search", cfg.solver.line_search}};
    if (cfg.solver.max_iter) j["solver"]["max_iter"] = *cfg.solver.max_iter;
    if (cfg.experiment == "converge") {
        j["manufactured"] = cfg.manufactured;
        if (cfg.reference_n > 0) j["reference_n"] = cfg.reference_n;
    }
    if (cfg.experiment == "sensitivity") {
        j["epsilons"] = cfg.epsilons;
        j["perturbation"] = {{"fhat",
                              {{"family", cfg.perturbation.fhat.family},
                               {"scale", cfg.perturbation.fhat.scale}}},
                             {"m1",
                              {{"family", cfg.perturbation.m1.family},
                               {"amplitude", cfg.perturbation.m1.amplitude}}}};
    }
    j["stability_threshold"] = cfg.stability_threshold;
    return j;
}

json checks_json(const SolutionChecks& c) {
    json j;
    j["mass_m"] = c.mass_m;
    j["mass_error"] = c.mass_error;
    j["u_sup"] = c.u_sup;
    j["u_bound"] = c.u_bound;
    j["u_bound_ok"] = c.u_bound_ok;
    j["m_sup"] = c.m_sup;
    j["m_bound_applicable"] = c.m_bound_applicable;
    j["m_bound"] = c.m_bound_applicable ? json(c.m_bound) : json();
    j["m_bound_ok"] = c.m_bound_ok;
    j["min_m"] = c.min_m;
    j["positivity_ok"] = c.positivity_ok;
    return j;
}

json stability_json(const StabilityReport& r) {
    json j;
    j["sigma_min"] = r.sigma_min;
    j["sigma_converged"] = r.sigma_converged;
    j["stable"] = r.stable;
    j["threshold"] = r.threshold;
    j["monotone_condition"] = r.monotone_condition;
    j["K_hat"] = r.K_hat;
    j["M_hat"] = r.M_hat;
    j["Lambda_hat"] = r.Lambda_hat;
    j["large_lambda_condition"] = r.large_lambda_condition;
    return j;
}

json solve_json(const SolveReport& report) {
    json j;
    j["converged"] = report.converged;
    j["iterations"] = report.iterations;
    j["residual"] = report.residual_history.empty() ? json() : json(report.residual_history.back());
    return j;
}

void write_summary(const std::filesystem::path& out_dir, json summary) {
    summary["schema_version"] = 1;
    write_text(out_dir / "summary.json", summary.dump(2) + "\n");
}

std::pair<State, SolveReport> solve_with_config(const Problem& problem, const RunConfig& cfg) {
    const SolverOptions opts = make_solver_options(cfg.solver);
    if (cfg.solver.method == "picard") return picard_solve(problem, problem.m0(), opts);
    const State init{constant_field(problem.mesh_ptr()), problem.m0()};
    return newton_solve(problem, init, opts);
}

void run_solve(const RunConfig& cfg, const std::filesystem::path& out) {
    const Problem problem = make_problem(cfg, cfg.n, cfg.lambda);
    const auto [state, report] = solve_with_config(problem, cfg);
    const SolutionChecks checks = validate_solution(problem, state);

    json summary;
    summary["experiment"] = "solve";
    summary["config"] = config_json(cfg);
    summary["solve"] = solve_json(report);
    summary["checks"] = checks_json(checks);
    const double residual = report.residual_history.back();
    if (residual <= 1e-9) {
        summary["stability"] =
            stability_json(certify_stability(problem, state, cfg.stability_threshold));
    } else {
        summary["stability"] = json(); // certificate needs residual <= 1e-9
    }
    summary["outputs"] = {"fields_u.csv", "fields_m.csv", "history.csv"};

    write_field_csv(out / "fields_u.csv", state.u);
    write_field_csv(out / "fields_m.csv", state.m);
    write_history_csv(out / "history.csv", report);
    write_summary(out, std::move(summary));
}

void run_converge(const RunConfig& cfg, const std::filesystem::path& out) {
    struct Row {
        int n;
        double h, err_u_h1, err_m_l2, err_u_l2;
    };
    std::vector<Row> rows;

    std::optional<State> reference;
    if (!cfg.manufactured) {
        const Problem ref_problem = make_problem(cfg, cfg.reference_n, cfg.lambda);
        reference = solve_with_config(ref_problem, cfg).first;
    }
    const ManufacturedSolution ms = manufactured_solution(cfg.dim);

    for (const int n : cfg.n_list) {
        const Problem problem = make_problem(cfg, n, cfg.lambda);
        const State state = solve_with_config(problem, cfg).first;
        Row row{n, problem.mesh().width(), 0, 0, 0};
        if (cfg.manufactured) {
            const auto [u_l2, u_h1] = error_against(state.u, ms.u, ms.du);
            const auto [m_l2, m_h1] = error_against(state.m, ms.m, ms.dm);
            (void)m_h1;
            row.err_u_h1 = u_h1;
            row.err_u_l2 = u_l2;
            row.err_m_l2 = m_l2;
        } else {
            const Field u_ref = nodal_field(problem.mesh_ptr(), [&](Point x) {
                return interpolate(reference->u, x);
            });
            const Field m_ref = nodal_field(problem.mesh_ptr(), [&](Point x) {
                return interpolate(reference->m, x);
            });
            const Field du{problem.mesh_ptr(), state.u.values - u_ref.values};
            const Field dm{problem.mesh_ptr(), state.m.values - m_ref.values};
            row.err_u_h1 = problem.space().norms(du).h1;
            row.err_u_l2 = problem.space().norms(du).l2;
            row.err_m_l2 = problem.space().norms(dm).l2;
        }
        rows.push_back(row);
    }

    auto rate = [](double e_coarse, double e_fine, int n_coarse, int n_fine) {
        if (e_coarse < kRateFloor || e_fine < kRateFloor)
            return std::numeric_limits<double>::quiet_NaN();
        return std::log(e_coarse / e_fine) / std::log(double(n_fine) / n_coarse);
    };

    std::string text = cfg.manufactured
                           ? "n,h,err_u_H1,err_m_L2,rate_u,rate_m,err_u_L2,rate_u_L2\n"
                           : "n,h,err_u_H1,err_m_L2,rate_u,rate_m\n";
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const Row& r = rows[i];
        const bool first = i == 0;
        const double rate_u =
            first ? std::numeric_limits<double>::quiet_NaN()
                  : rate(rows[i - 1].err_u_h1, r.err_u_h1, rows[i - 1].n, r.n);
        const double rate_m =
            first ? std::numeric_limits<double>::quiet_NaN()
                  : rate(rows[i - 1].err_m_l2, r.err_m_l2, rows[i - 1].n, r.n);
        text += std::to_string(r.n) + "," + fmt(r.h) + "," + fmt(r.err_u_h1) + "," +
                fmt(r.err_m_l2) + "," + fmt(rate_u) + "," + fmt(rate_m);
        if (cfg.manufactured) {
            const double rate_u_l2 =
                first ? std::numeric_limits<double>::quiet_NaN()
                      : rate(rows[i - 1].err_u_l2, r.err_u_l2, rows[i - 1].n, r.n);
            text += "," + fmt(r.err_u_l2) + "," + fmt(rate_u_l2);
        }
        text += "\n";
    }
    write_text(out / "converge.csv", text);

    json summary;
    summary["experiment"] = "converge";
    summary["config"] = config_json(cfg);
    summary["notes"] = cfg.manufactured
                           ? "errors measured against the exact manufactured solution"
                           : "errors measured against the converged reference_n solution "
                             "interpolated onto each coarse mesh";
    summary["outputs"] = {"converge.csv"};
    write_summary(out, std::move(summary));
}

void run_newton_rates(const RunConfig& cfg, const std::filesystem::path& out) {
    const Problem problem = make_problem(cfg, cfg.n, cfg.lambda);
    const auto [state, report] = solve_with_config(problem, cfg);
    (void)state;

    std::string text = "k,residual,step_norm,quad_ratio\n";
    const auto& res = report.residual_history;
    for (std::size_t k = 0; k < res.size(); ++k) {
        text += std::to_string(k) + "," + fmt(res[k]) + ",";
        text += (k >= 1 && k - 1 < report.step_history.size()) ? fmt(report.step_history[k - 1])
                                                               : std::string("NA");
        text += ",";
        if (k >= 1 && res[k - 1] > 0.0)
            text += fmt(res[k] / (res[k - 1] * res[k - 1]));
        else
            text += "NA";
        text += "\n";
    }
    write_text(out / "newton_rates.csv", text);

    json summary;
    summary["experiment"] = "newton-rates";
    summary["config"] = config_json(cfg);
    summary["solve"] = solve_json(report);
    summary["outputs"] = {"newton_rates.csv"};
    write_summary(out, std::move(summary));
}

void run_stability_sweep(const RunConfig& cfg, const std::filesystem::path& out) {
    std::vector<double> lambdas = cfg.lambda_list;
    std::sort(lambdas.begin(), lambdas.end());

    std::string text = "lambda,sigma_min,K_hat,M_hat,Lambda_hat,monotone,large_lambda,stable,status\n";
    json sweep = json::array();
    for (const double lambda : lambdas) {
        std::string row = fmt(lambda) + ",";
        try {
            const Problem problem = make_problem(cfg, cfg.n, lambda);
            const auto [state, report] = solve_with_config(problem, cfg);
            (void)report;
            const StabilityReport r = certify_stability(problem, state, cfg.stability_threshold);
            row += fmt(r.sigma_min) + "," + fmt(r.K_hat) + "," + fmt(r.M_hat) + "," +
                   fmt(r.Lambda_hat) + "," + fmt(r.monotone_condition) + "," +
                   fmt(r.large_lambda_condition) + "," + fmt(r.stable) + ",ok";
            sweep.push_back({{"lambda", lambda}, {"status", "ok"}, {"stable", r.stable}});
        } catch (const MaxIterationsError&) {
            row += "NA,NA,NA,NA,NA,NA,NA,max_iterations";
            sweep.push_back({{"lambda", lambda}, {"status", "max_iterations"}});
        } catch (const LinearSolveError&) {
            row += "NA,NA,NA,NA,NA,NA,NA,linear_solve_failure";
            sweep.push_back({{"lambda", lambda}, {"status", "linear_solve_failure"}});
        }
        text += row + "\n";
    }
    write_text(out / "stability_sweep.csv", text);

    json summary;
    summary["experiment"] = "stability-sweep";
    summary["config"] = config_json(cfg);
    summary["sweep"] = sweep;
    summary["outputs"] = {"stability_sweep.csv"};
    write_summary(out, std::move(summary));
}

Coupling make_fhat(const CouplingSpec& spec) {
    if (spec.family == "zero") return zero_coupling();
    if (spec.family == "constant") return constant_coupling(spec.scale);
    if (spec.family == "inverse_quadratic") return inverse_quadratic_coupling(spec.scale);
    throw ValidationError("perturbation.fhat.family", "unknown family '" + spec.family + "'");
}

void run_sensitivity(const RunConfig& cfg, const std::filesystem::path& out) {
    const Problem problem = make_problem(cfg, cfg.n, cfg.lambda);
    const auto [state, report] = solve_with_config(problem, cfg);

    const StabilityReport stability =
        certify_stability(problem, state, cfg.stability_threshold);
    if (!stability.stable)
        throw UnstableEquilibriumError(
            "sensitivity is defined only at stable solutions; certificate says stable = false "
            "(sigma_min = " +
            std::to_string(stability.sigma_min) + ")");

    const Coupling fhat = make_fhat(cfg.perturbation.fhat);
    const Field m1 = make_density(problem.space(), cfg.perturbation.m1);
    const SensitivityResult result = perturbed_taylor_check(
        problem, state, fhat, m1, cfg.epsilons, make_solver_options(cfg.solver));

    std::string text = "epsilon,remainder\n";
    for (const auto& [eps, r] : result.taylor_errors) text += fmt(eps) + "," + fmt(r) + "\n";
    write_text(out / "sensitivity.csv", text);
    write_field_csv(out / "fields_delta_u.csv", result.direction.u);
    write_field_csv(out / "fields_delta_m.csv", result.direction.m);

    json summary;
    summary["experiment"] = "sensitivity";
    summary["config"] = config_json(cfg);
    summary["solve"] = solve_json(report);
    summary["stability"] = stability_json(stability);
    summary["sensitivity"] = {
        {"observed_order", std::isfinite(result.observed_order) ? json(result.observed_order)
                                                                : json()},
    };
    summary["outputs"] = {"sensitivity.csv", "fields_delta_u.csv", "fields_delta_m.csv"};
    write_summary(out, std::move(summary));
}

} // namespace

Coupling make_coupling(const CouplingSpec& spec) {
    if (spec.family == "zero") return zero_coupling();
    if (spec.family == "constant") return constant_coupling(spec.scale);
    if (spec.family == "atan") return atan_coupling(spec.scale);
    if (spec.family == "neg_atan") return atan_coupling(-spec.scale);
    if (spec.family == "rational_bump") return rational_bump_coupling(spec.scale);
    throw ValidationError("coupling.family", "unknown family '" + spec.family + "'");
}

std::function<double(Point)> density_function(const DensitySpec& spec, int dim) {
    if (spec.family == "uniform") return [](Point) { return 1.0; };
    const double a = spec.amplitude;
    const double two_pi = 2.0 * std::numbers::pi;
    if (dim == 1) return [a, two_pi](Point x) { return 1.0 + a * std::cos(two_pi * x[0]); };
    return [a, two_pi](Point x) {
        return 1.0 + a * std::cos(two_pi * x[0]) * std::cos(two_pi * x[1]);
    };
}

Field make_density(const FemSpace& space, const DensitySpec& spec) {
    if (spec.family == "uniform") return constant_field(space.mesh_ptr(), 1.0);
    return space.project(density_function(spec, space.mesh().dim()));
}

SolverOptions make_solver_options(const SolverSpec& spec) {
    SolverOptions opts;
    opts.tol = spec.tol;
    opts.max_iter = spec.max_iter;
    opts.damping = spec.damping;
    opts.line_search = spec.line_search;
    return opts;
}

Problem make_problem(const RunConfig& cfg, int n, double lambda) {
    auto space = std::make_shared<const FemSpace>(build_mesh(cfg.dim, n));
    const Coupling coupling = make_coupling(cfg.coupling);
    Field m0 = make_density(*space, cfg.m0);

    std::optional<Field> source_u, source_m;
    if (cfg.manufactured) {
        const ManufacturedSolution ms = manufactured_solution(cfg.dim);
        source_u = space->project(manufactured_source_u(ms, lambda, coupling));
        source_m = space->project(
            manufactured_source_m(ms, lambda, density_function(cfg.m0, cfg.dim)));
    }
    return Problem(space, lambda, coupling, std::move(m0), std::move(source_u),
                   std::move(source_m));
}

void run_experiment(const RunConfig& cfg, const std::filesystem::path& out_dir) {
    std::filesystem::create_directories(out_dir);
    if (cfg.experiment == "solve") return run_solve(cfg, out_dir);
    if (cfg.experiment == "converge") return run_converge(cfg, out_dir);
    if (cfg.experiment == "newton-rates") return run_newton_rates(cfg, out_dir);
    if (cfg.experiment == "stability-sweep") return run_stability_sweep(cfg, out_dir);
    if (cfg.experiment == "sensitivity") return run_sensitivity(cfg, out_dir);
    throw ValidationError("experiment", "unknown experiment '" + cfg.experiment + "'");
}

} // namespace mfgs
