#pragma once

#include <cmath>
#include <fstream>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "fracepi/errors.hpp"
#include "fracepi/models.hpp"
#include "fracepi/solver.hpp"
#include "fracepi/stability.hpp"
#include "fracepi/types.hpp"

namespace fracepi::cli {

enum class ModelKind { sis, sirs, sis_legacy };

inline const char* to_string(ModelKind m) noexcept {
    switch (m) {
        case ModelKind::sis:
            return "sis";
        case ModelKind::sirs:
            return "sirs";
        case ModelKind::sis_legacy:
            return "sis-legacy";
    }
    return "sis";
}

inline std::size_t dimension(ModelKind m) noexcept { return m == ModelKind::sirs ? 3 : 2; }

enum class OutputKind { csv, svg, report };

inline constexpr double default_step = 0.05;
inline constexpr double default_t_end = 1000.0;

/// One simulation experiment. Rates are stored without alpha; each entry of
/// `alphas` produces its own run.
struct Scenario {
    ModelKind model = ModelKind::sis;
    std::variant<SisParams, SirsParams> params;
    std::vector<FractionalOrder> alphas;
    std::vector<double> initial_state;
    GridSpec grid{default_step, default_t_end};
    int corrector_iterations = 1;
    bool clamp_nonnegative = false;
    std::set<OutputKind> outputs{OutputKind::csv};

    SisParams sis_params(FractionalOrder alpha) const {
        SisParams p = std::get<SisParams>(params);
        p.alpha = alpha;
        return p;
    }
    SirsParams sirs_params(FractionalOrder alpha) const {
        SirsParams p = std::get<SirsParams>(params);
        p.alpha = alpha;
        return p;
    }
};

namespace detail {

inline double rate_field(const nlohmann::json& obj, const char* name) {
    const std::string path = std::string("params.") + name;
    if (!obj.contains(name)) throw ConfigError(path + ": missing");
    const auto& v = obj.at(name);
    if (!v.is_number()) throw ConfigError(path + ": must be a number");
    const double x = v.get<double>();
    if (!(x > 0.0) || !std::isfinite(x)) throw ConfigError(path + ": must be positive and finite");
    return x;
}

inline void reject_unknown(const nlohmann::json& obj, const std::set<std::string>& allowed,
                           const std::string& prefix) {
    for (const auto& [key, value] : obj.items()) {
        if (!allowed.contains(key)) throw ConfigError(prefix + key + ": unknown field");
    }
}

inline double positive_number(const nlohmann::json& obj, const char* name, const std::string& path) {
    const auto& v = obj.at(name);
    if (!v.is_number()) throw ConfigError(path + ": must be a number");
    const double x = v.get<double>();
    if (!(x > 0.0) || !std::isfinite(x)) throw ConfigError(path + ": must be positive and finite");
    return x;
}

}  // namespace detail

/// Parses a scenario document. Unknown fields are errors; messages start
/// with the offending field path.
inline Scenario parse_scenario(const nlohmann::json& doc) {
    if (!doc.is_object()) throw ConfigError("scenario: top level must be a JSON object");
    detail::reject_unknown(doc,
                           {"model", "params", "alphas", "initial_state", "grid", "corrector_iterations",
                            "clamp_nonnegative", "outputs"},
                           "");

    Scenario sc;
    if (!doc.contains("model") || !doc["model"].is_string()) throw ConfigError("model: missing or not a string");
    const std::string model = doc["model"].get<std::string>();
    if (model == "sis") {
        sc.model = ModelKind::sis;
    } else if (model == "sirs") {
        sc.model = ModelKind::sirs;
    } else if (model == "sis-legacy") {
        sc.model = ModelKind::sis_legacy;
    } else {
        throw ConfigError("model: expected one of sis, sirs, sis-legacy, got '" + model + "'");
    }

    if (!doc.contains("params") || !doc["params"].is_object()) throw ConfigError("params: missing or not an object");
    const auto& p = doc["params"];
    if (sc.model == ModelKind::sirs) {
        detail::reject_unknown(
            p, {"recruitment", "infection", "natural_death", "recovery", "disease_death", "immunity_loss"}, "params.");
        sc.params = SirsParams{detail::rate_field(p, "recruitment"),   detail::rate_field(p, "infection"),
                               detail::rate_field(p, "natural_death"), detail::rate_field(p, "recovery"),
                               detail::rate_field(p, "disease_death"), detail::rate_field(p, "immunity_loss")};
    } else {
        detail::reject_unknown(p, {"recruitment", "infection", "natural_death", "return_rate", "disease_death"},
                               "params.");
        sc.params = SisParams{detail::rate_field(p, "recruitment"), detail::rate_field(p, "infection"),
                              detail::rate_field(p, "natural_death"), detail::rate_field(p, "return_rate"),
                              detail::rate_field(p, "disease_death")};
    }

    if (!doc.contains("alphas") || !doc["alphas"].is_array()) throw ConfigError("alphas: missing or not an array");
    if (doc["alphas"].empty()) throw ConfigError("alphas: must be non-empty");
    for (const auto& a : doc["alphas"]) {
        if (!a.is_number()) throw ConfigError("alphas: entries must be numbers");
        const double v = a.get<double>();
        if (!(v > 0.0 && v <= 1.0)) throw ConfigError("alphas: entry " + std::to_string(v) + " outside (0, 1]");
        sc.alphas.emplace_back(v);
    }

    if (!doc.contains("initial_state") || !doc["initial_state"].is_array()) {
        throw ConfigError("initial_state: missing or not an array");
    }
    for (const auto& v : doc["initial_state"]) {
        if (!v.is_number()) throw ConfigError("initial_state: entries must be numbers");
        const double x = v.get<double>();
        if (!(x >= 0.0) || !std::isfinite(x)) throw ConfigError("initial_state: entries must be finite and >= 0");
        sc.initial_state.push_back(x);
    }
    if (sc.initial_state.size() != dimension(sc.model)) {
        throw ConfigError("initial_state: expected " + std::to_string(dimension(sc.model)) + " components for model " +
                          model);
    }

    if (doc.contains("grid")) {
        const auto& g = doc["grid"];
        if (!g.is_object()) throw ConfigError("grid: must be an object");
        detail::reject_unknown(g, {"step", "t_end"}, "grid.");
        const double step = g.contains("step") ? detail::positive_number(g, "step", "grid.step") : default_step;
        const double t_end = g.contains("t_end") ? detail::positive_number(g, "t_end", "grid.t_end") : default_t_end;
        if (t_end < step) throw ConfigError("grid.t_end: must be at least one step");
        sc.grid = GridSpec(step, t_end);
    }

    if (doc.contains("corrector_iterations")) {
        const auto& c = doc["corrector_iterations"];
        if (!c.is_number_integer()) throw ConfigError("corrector_iterations: must be an integer");
        const int k = c.get<int>();
        if (k < 1 || k > max_corrector_iterations) throw ConfigError("corrector_iterations: must be in [1, 10]");
        sc.corrector_iterations = k;
    }

    if (doc.contains("clamp_nonnegative")) {
        if (!doc["clamp_nonnegative"].is_boolean()) throw ConfigError("clamp_nonnegative: must be a boolean");
        sc.clamp_nonnegative = doc["clamp_nonnegative"].get<bool>();
    }

    if (doc.contains("outputs")) {
        const auto& o = doc["outputs"];
        if (!o.is_array()) throw ConfigError("outputs: must be an array");
        sc.outputs.clear();
        for (const auto& v : o) {
            const std::string s = v.is_string() ? v.get<std::string>() : std::string();
            if (s == "csv") {
                sc.outputs.insert(OutputKind::csv);
            } else if (s == "svg") {
                sc.outputs.insert(OutputKind::svg);
            } else if (s == "report") {
                sc.outputs.insert(OutputKind::report);
            } else {
                throw ConfigError("outputs: expected csv, svg or report");
            }
        }
    }
    return sc;
}

inline Scenario load_scenario(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("scenario: cannot open '" + path + "'");
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw ConfigError(std::string("scenario: malformed JSON (") + e.what() + ")");
    }
    return parse_scenario(doc);
}

/// Integrates one alpha of a scenario.
inline Trajectory simulate(const Scenario& sc, FractionalOrder alpha) {
    const PeceOptions opts{sc.corrector_iterations, sc.clamp_nonnegative};
    switch (sc.model) {
        case ModelKind::sis:
            return pece_solve(SisField(sc.sis_params(alpha)), alpha, sc.initial_state, sc.grid, opts);
        case ModelKind::sis_legacy:
            return pece_solve(SisField::legacy(sc.sis_params(alpha)), alpha, sc.initial_state, sc.grid, opts);
        case ModelKind::sirs:
            return pece_solve(SirsField(sc.sirs_params(alpha)), alpha, sc.initial_state, sc.grid, opts);
    }
    throw std::logic_error("unreachable model kind");
}

inline StabilityReport analyze(const Scenario& sc, FractionalOrder alpha) {
    switch (sc.model) {
        case ModelKind::sis:
            return stability_report(sc.sis_params(alpha));
        case ModelKind::sis_legacy:
            return legacy_sis_stability_report(sc.sis_params(alpha));
        case ModelKind::sirs:
            return stability_report(sc.sirs_params(alpha));
    }
    throw std::logic_error("unreachable model kind");
}

}  // namespace fracepi::cli
