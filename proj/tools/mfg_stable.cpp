#include "mfgs/errors.hpp"
#include "mfgs/experiments.hpp"
#include "mfgs/run_config.hpp"
#include "mfgs/solve.hpp"

#include <CLI11.hpp>

#include <iostream>

int main(int argc, char** argv) {
    CLI::App app{"mfg-stable: stationary mean field game experiments on the periodic torus"};

    std::string config_path;
    std::string out_dir = ".";
    app.add_option("--config", config_path, "path to the run configuration (JSON)")
        ->required();
    app.add_option("--out", out_dir, "output directory (created if missing)");

    CLI11_PARSE(app, argc, argv);

    try {
        const mfgs::RunConfig cfg = mfgs::load_run_config(config_path);
        mfgs::run_experiment(cfg, out_dir);
        return 0;
    } catch (const mfgs::ValidationError& err) {
        std::cerr << "validation error: " << err.what() << "\n";
        return 2;
    } catch (const mfgs::MaxIterationsError& err) {
        std::cerr << "solver failure (max_iterations): " << err.what() << "\n";
        return 3;
    } catch (const mfgs::LinearSolveError& err) {
        std::cerr << "solver failure (linear_solve): " << err.what() << "\n";
        return 3;
    } catch (const mfgs::UnstableEquilibriumError& err) {
        std::cerr << "solver failure (unstable_equilibrium): " << err.what() << "\n";
        return 3;
    } catch (const std::exception& err) {
        std::cerr << "error: " << err.what() << "\n";
        return 1;
    }
}
