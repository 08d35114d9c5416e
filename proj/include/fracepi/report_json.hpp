#pragma once

#include <json.hpp>

#include "fracepi/stability.hpp"

namespace fracepi {

namespace detail {

inline nlohmann::json verdict_json(const StabilityVerdict& v) {
    nlohmann::json j;
    j["classification"] = to_string(v.classification);
    j["rule_fired"] = v.rule_fired;
    j["margin"] = v.margin ? nlohmann::json(*v.margin) : nlohmann::json(nullptr);
    j["discriminant"] = v.discriminant ? nlohmann::json(*v.discriminant) : nlohmann::json(nullptr);
    if (v.matignon_cross_check) j["matignon_cross_check"] = to_string(*v.matignon_cross_check);
    return j;
}

}  // namespace detail

/// Serialization schema for stability reports:
///   model, alpha, r0, equilibria{disease_free, endemic}, analyses[...],
///   attractor, verdict.
/// Each analysis carries state, jacobian, char_poly, eigenvalues as
/// [re, im] pairs, and verdicts{route, matignon, overall}.
inline nlohmann::json to_json(const StabilityReport& rep) {
    nlohmann::json out;
    out["model"] = rep.model;
    out["alpha"] = rep.alpha.value();
    out["r0"] = rep.equilibria.r0;
    out["equilibria"] = {
        {"disease_free", rep.equilibria.disease_free},
        {"endemic", rep.equilibria.endemic ? nlohmann::json(*rep.equilibria.endemic) : nlohmann::json(nullptr)},
        {"disease_free_residual", rep.equilibria.disease_free_residual},
        {"endemic_residual",
         rep.equilibria.endemic_residual ? nlohmann::json(*rep.equilibria.endemic_residual) : nlohmann::json(nullptr)},
    };

    nlohmann::json analyses = nlohmann::json::array();
    for (const auto& an : rep.analyses) {
        nlohmann::json a;
        a["point"] = an.label;
        a["state"] = an.state;
        nlohmann::json jac = nlohmann::json::array();
        for (std::size_t i = 0; i < an.jacobian.size(); ++i) {
            nlohmann::json row = nlohmann::json::array();
            for (std::size_t k = 0; k < an.jacobian.size(); ++k) row.push_back(an.jacobian(i, k));
            jac.push_back(row);
        }
        a["jacobian"] = jac;
        a["char_poly"] = an.char_poly.coefficients;
        nlohmann::json eig = nlohmann::json::array();
        for (auto z : an.eigenvalues.values) eig.push_back({z.real(), z.imag()});
        a["eigenvalues"] = eig;
        a["verdicts"] = {
            {"route", detail::verdict_json(an.route)},
            {"matignon", detail::verdict_json(an.matignon)},
            {"overall", to_string(an.overall)},
        };
        a["routes_agree"] = an.routes_agree;
        nlohmann::json diag = nlohmann::json::array();
        for (const auto& c : an.diagnostics) {
            diag.push_back({{"coefficient", c.name},
                            {"from_jacobian", c.from_jacobian},
                            {"closed_form", c.closed_form},
                            {"matches", c.matches}});
        }
        a["diagnostics"] = diag;
        analyses.push_back(std::move(a));
    }
    out["analyses"] = std::move(analyses);
    out["attractor"] = rep.attractor().label;
    out["verdict"] = to_string(rep.attractor().overall);
    return out;
}

}  // namespace fracepi
