#include "mfgs/run_config.hpp"

#include "mfgs/errors.hpp"

#include <json.hpp>

#include <cmath>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>

namespace mfgs {

namespace {

using nlohmann::json;

void check_keys(const json& obj, const std::string& prefix, const std::set<std::string>& known) {
    for (const auto& [key, value] : obj.items()) {
        (void)value;
        if (!known.contains(key))
            throw ValidationError(prefix.empty() ? key : prefix + "." + key, "unknown field");
    }
}

double get_number(const json& obj, const std::string& prefix, const std::string& key,
                  double fallback, bool required = false) {
    const std::string where = prefix.empty() ? key : prefix + "." + key;
    if (!obj.contains(key)) {
        if (required) throw ValidationError(where, "missing required field");
        return fallback;
    }
    if (!obj[key].is_number()) throw ValidationError(where, "must be a number");
    return obj[key].get<double>();
}

int get_int(const json& obj, const std::string& prefix, const std::string& key, int fallback,
            bool required = false) {
    const std::string where = prefix.empty() ? key : prefix + "." + key;
    if (!obj.contains(key)) {
        if (required) throw ValidationError(where, "missing required field");
        return fallback;
    }
    if (!obj[key].is_number_integer()) throw ValidationError(where, "must be an integer");
    return obj[key].get<int>();
}

std::string get_string(const json& obj, const std::string& prefix, const std::string& key,
                       const std::string& fallback, bool required = false) {
    const std::string where = prefix.empty() ? key : prefix + "." + key;
    if (!obj.contains(key)) {
        if (required) throw ValidationError(where, "missing required field");
        return fallback;
    }
    if (!obj[key].is_string()) throw ValidationError(where, "must be a string");
    return obj[key].get<std::string>();
}

CouplingSpec parse_coupling(const json& obj, const std::string& prefix,
                            const std::set<std::string>& families) {
    check_keys(obj, prefix, {"family", "scale"});
    CouplingSpec spec;
    spec.family = get_string(obj, prefix, "family", spec.family, true);
    if (!families.contains(spec.family)) {
        std::ostringstream msg;
        msg << "unknown family '" << spec.family << "'";
        throw ValidationError(prefix + ".family", msg.str());
    }
    spec.scale = get_number(obj, prefix, "scale", spec.scale);
    if (!std::isfinite(spec.scale)) throw ValidationError(prefix + ".scale", "must be finite");
    return spec;
}

DensitySpec parse_density(const json& obj, const std::string& prefix) {
    check_keys(obj, prefix, {"family", "amplitude"});
    DensitySpec spec;
    spec.family = get_string(obj, prefix, "family", spec.family, true);
    if (spec.family != "uniform" && spec.family != "cosine")
        throw ValidationError(prefix + ".family", "must be 'uniform' or 'cosine'");
    spec.amplitude = get_number(obj, prefix, "amplitude", spec.amplitude);
    if (!(spec.amplitude >= 0.0 && spec.amplitude < 1.0))
        throw ValidationError(prefix + ".amplitude",
                              "must lie in [0, 1) to keep the density positive");
    return spec;
}

} // namespace

RunConfig parse_run_config(const std::string& json_text) {
    json root;
    try {
        root = json::parse(json_text);
    } catch (const json::parse_error& err) {
        throw ValidationError("config", std::string("invalid JSON: ") + err.what());
    }
    if (!root.is_object()) throw ValidationError("config", "top level must be an object");

    check_keys(root, "",
               {"experiment", "dim", "n", "n_list", "lambda", "lambda_list", "coupling", "m0",
                "solver", "reference_n", "manufactured", "epsilons", "perturbation",
                "stability_threshold"});

    RunConfig cfg;
    cfg.experiment = get_string(root, "", "experiment", "", true);
    const std::set<std::string> experiments{"solve", "converge", "newton-rates",
                                            "stability-sweep", "sensitivity"};
    if (!experiments.contains(cfg.experiment))
        throw ValidationError("experiment", "unknown experiment '" + cfg.experiment + "'");

    cfg.dim = get_int(root, "", "dim", 1, true);
    if (cfg.dim != 1 && cfg.dim != 2) throw ValidationError("dim", "must be 1 or 2");

    const bool needs_single_n = cfg.experiment != "converge";
    cfg.n = get_int(root, "", "n", 0, needs_single_n);
    if (needs_single_n && cfg.n < 2) throw ValidationError("n", "must be at least 2");

    const bool needs_single_lambda = cfg.experiment != "stability-sweep";
    cfg.lambda = get_number(root, "", "lambda", 0.0, needs_single_lambda);
    if (needs_single_lambda && !(cfg.lambda > 0.0))
        throw ValidationError("lambda", "must be positive");

    if (root.contains("coupling")) {
        if (!root["coupling"].is_object()) throw ValidationError("coupling", "must be an object");
        cfg.coupling = parse_coupling(root["coupling"], "coupling",
                                      {"zero", "constant", "atan", "neg_atan", "rational_bump"});
    }
    if (root.contains("m0")) {
        if (!root["m0"].is_object()) throw ValidationError("m0", "must be an object");
        cfg.m0 = parse_density(root["m0"], "m0");
    }
    if (root.contains("solver")) {
        const json& s = root["solver"];
        if (!s.is_object()) throw ValidationError("solver", "must be an object");
        check_keys(s, "solver", {"method", "tol", "max_iter", "damping", "line_search"});
        cfg.solver.method = get_string(s, "solver", "method", cfg.solver.method);
        if (cfg.solver.method != "newton" && cfg.solver.method != "picard")
            throw ValidationError("solver.method", "must be 'newton' or 'picard'");
        cfg.solver.tol = get_number(s, "solver", "tol", cfg.solver.tol);
        if (!(cfg.solver.tol > 0.0)) throw ValidationError("solver.tol", "must be positive");
        if (s.contains("max_iter")) {
            const int mi = get_int(s, "solver", "max_iter", 0);
            if (mi < 0) throw ValidationError("solver.max_iter", "must be nonnegative");
            cfg.solver.max_iter = mi;
        }
        cfg.solver.damping = get_number(s, "solver", "damping", cfg.solver.damping);
        if (!(cfg.solver.damping > 0.0 && cfg.solver.damping <= 1.0))
            throw ValidationError("solver.damping", "must lie in (0, 1]");
        if (s.contains("line_search")) {
            if (!s["line_search"].is_boolean())
                throw ValidationError("solver.line_search", "must be a boolean");
            cfg.solver.line_search = s["line_search"].get<bool>();
        }
    }

    cfg.stability_threshold =
        get_number(root, "", "stability_threshold", cfg.stability_threshold);
    if (!(cfg.stability_threshold > 0.0))
        throw ValidationError("stability_threshold", "must be positive");

    if (root.contains("manufactured")) {
        if (!root["manufactured"].is_boolean())
            throw ValidationError("manufactured", "must be a boolean");
        cfg.manufactured = root["manufactured"].get<bool>();
    }

    if (cfg.experiment == "converge") {
        if (!root.contains("n_list")) throw ValidationError("n_list", "missing required field");
        if (!root["n_list"].is_array() || root["n_list"].empty())
            throw ValidationError("n_list", "must be a nonempty array");
        int prev = 0;
        for (const auto& v : root["n_list"]) {
            if (!v.is_number_integer()) throw ValidationError("n_list", "entries must be integers");
            const int n = v.get<int>();
            if (n < 2) throw ValidationError("n_list", "entries must be at least 2");
            if (n <= prev) throw ValidationError("n_list", "must be strictly increasing");
            cfg.n_list.push_back(n);
            prev = n;
        }
        if (!cfg.manufactured) {
            cfg.reference_n = get_int(root, "", "reference_n", 0, true);
            if (cfg.reference_n < 8 * cfg.n_list.back())
                throw ValidationError("reference_n",
                                      "must be at least 8 times the largest n_list entry");
        } else {
            cfg.reference_n = get_int(root, "", "reference_n", 0);
        }
    }

    if (cfg.experiment == "stability-sweep") {
        if (!root.contains("lambda_list"))
            throw ValidationError("lambda_list", "missing required field");
        if (!root["lambda_list"].is_array() || root["lambda_list"].empty())
            throw ValidationError("lambda_list", "must be a nonempty array");
        for (const auto& v : root["lambda_list"]) {
            if (!v.is_number() || !(v.get<double>() > 0.0))
                throw ValidationError("lambda_list", "entries must be positive numbers");
            cfg.lambda_list.push_back(v.get<double>());
        }
    }

    if (cfg.experiment == "sensitivity") {
        if (root.contains("epsilons")) {
            if (!root["epsilons"].is_array() || root["epsilons"].empty())
                throw ValidationError("epsilons", "must be a nonempty array");
            cfg.epsilons.clear();
            double prev = std::numeric_limits<double>::infinity();
            for (const auto& v : root["epsilons"]) {
                if (!v.is_number() || !(v.get<double>() > 0.0))
                    throw ValidationError("epsilons", "entries must be positive numbers");
                const double e = v.get<double>();
                if (e >= prev) throw ValidationError("epsilons", "must be strictly decreasing");
                cfg.epsilons.push_back(e);
                prev = e;
            }
        }
        if (root.contains("perturbation")) {
            const json& p = root["perturbation"];
            if (!p.is_object()) throw ValidationError("perturbation", "must be an object");
            check_keys(p, "perturbation", {"fhat", "m1"});
            if (p.contains("fhat")) {
                if (!p["fhat"].is_object())
                    throw ValidationError("perturbation.fhat", "must be an object");
                cfg.perturbation.fhat = parse_coupling(p["fhat"], "perturbation.fhat",
                                                       {"zero", "constant", "inverse_quadratic"});
            }
            if (p.contains("m1")) {
                if (!p["m1"].is_object())
                    throw ValidationError("perturbation.m1", "must be an object");
                cfg.perturbation.m1 = parse_density(p["m1"], "perturbation.m1");
            }
        }
    }

    return cfg;
}

RunConfig load_run_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("config", "cannot open " + path.string());
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_run_config(buffer.str());
}

} // namespace mfgs
