#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace mfgs {

// Declarative experiment configuration. One JSON file per run; the CLI only
// selects the config path and the output directory, so every experiment is
// reproducible from its config alone. The published JSON schema lives at
// tools/schema/config.schema.json.

struct CouplingSpec {
    std::string family = "zero"; // zero|constant|atan|neg_atan|rational_bump
    double scale = 1.0;
};

struct DensitySpec {
    std::string family = "uniform"; // uniform|cosine
    double amplitude = 0.0;         // in [0,1): keeps the density positive
};

struct SolverSpec {
    std::string method = "newton"; // newton|picard
    double tol = 1e-11;
    std::optional<int> max_iter;
    double damping = 0.5;
    bool line_search = false;
};

struct PerturbationSpec {
    CouplingSpec fhat{"zero", 1.0}; // zero|constant|inverse_quadratic
    DensitySpec m1{"uniform", 0.0};
};

struct RunConfig {
    std::string experiment; // solve|converge|newton-rates|stability-sweep|sensitivity
    int dim = 1;
    int n = 0;
    std::vector<int> n_list;         // converge
    double lambda = 0.0;
    std::vector<double> lambda_list; // stability-sweep
    CouplingSpec coupling;
    DensitySpec m0;
    SolverSpec solver;
    int reference_n = 0;    // converge (ignored when manufactured)
    bool manufactured = false;
    std::vector<double> epsilons{1e-1, 1e-2, 1e-3}; // sensitivity
    PerturbationSpec perturbation;                  // sensitivity
    double stability_threshold = 1e-8;
};

/// Parse and validate. Throws ValidationError whose field() names the
/// offending entry (e.g. "m0.amplitude"); unknown keys are rejected.
RunConfig parse_run_config(const std::string& json_text);
RunConfig load_run_config(const std::filesystem::path& path);

} // namespace mfgs
