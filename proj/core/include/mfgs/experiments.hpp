#pragma once

#include "mfgs/analyze.hpp"
#include "mfgs/run_config.hpp"

#include <filesystem>

namespace mfgs {

/// Realize the config's coupling / density / solver specs.
Coupling make_coupling(const CouplingSpec& spec);
std::function<double(Point)> density_function(const DensitySpec& spec, int dim);
Field make_density(const FemSpace& space, const DensitySpec& spec);
SolverOptions make_solver_options(const SolverSpec& spec);

/// Build the problem a config describes (optionally overriding n or lambda,
/// used by the study runners). Applies manufactured sources when asked.
Problem make_problem(const RunConfig& cfg, int n, double lambda);

/// Dispatch on cfg.experiment and write the experiment's artifacts into
/// out_dir (created if missing). Outputs are byte-identical across runs of
/// the same config. Throws ValidationError for bad configs and solver-side
/// errors (MaxIterationsError, LinearSolveError, UnstableEquilibriumError)
/// for failed runs; the CLI maps these to exit codes 2 and 3.
void run_experiment(const RunConfig& cfg, const std::filesystem::path& out_dir);

} // namespace mfgs
