#pragma once

#include <array>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "fracepi/cli/scenario.hpp"

namespace fracepi::cli {

inline constexpr std::array<double, 4> figure_alphas{1.0, 0.99, 0.95, 0.90};
inline constexpr double disease_free_horizon = 2000.0;
inline constexpr double endemic_horizon = 1000.0;

enum class PresetKind { sis_disease_free, sis_endemic, sirs_disease_free, sirs_endemic };

inline bool is_disease_free(PresetKind k) noexcept {
    return k == PresetKind::sis_disease_free || k == PresetKind::sirs_disease_free;
}

/// Simulation parameter sets behind the figures.
inline Scenario preset_scenario(PresetKind kind) {
    Scenario sc;
    for (double a : figure_alphas) sc.alphas.emplace_back(a);
    sc.outputs = {OutputKind::csv, OutputKind::svg};
    switch (kind) {
        case PresetKind::sis_disease_free:
            sc.model = ModelKind::sis;
            sc.params = SisParams{0.01, 0.06, 0.01, 0.02, 0.2};
            sc.initial_state = {0.95, 0.05};
            break;
        case PresetKind::sis_endemic:
            sc.model = ModelKind::sis;
            sc.params = SisParams{0.01, 0.45, 0.01, 0.2, 0.05};
            sc.initial_state = {0.95, 0.05};
            break;
        case PresetKind::sirs_disease_free:
            sc.model = ModelKind::sirs;
            // recruitment, infection, natural death, recovery (kappa), disease death (delta), immunity loss
            sc.params = SirsParams{0.01, 0.06, 0.01, 0.3, 0.15, 0.02};
            sc.initial_state = {0.95, 0.05, 0.0};
            break;
        case PresetKind::sirs_endemic:
            sc.model = ModelKind::sirs;
            sc.params = SirsParams{0.01, 0.5, 0.01, 0.2, 0.015, 0.02};
            sc.initial_state = {0.95, 0.05, 0.0};
            break;
    }
    sc.grid = GridSpec(default_step, is_disease_free(kind) ? disease_free_horizon : endemic_horizon);
    return sc;
}

enum class PlotKind { time_series, phase_portrait };

struct FigurePreset {
    std::string id;
    PresetKind preset;
    PlotKind plot;
    std::size_t component = 0;  // plotted component for time series
    std::string title;
    Scenario scenario;
};

inline const char* component_name(std::size_t i) noexcept {
    static constexpr const char* names[] = {"Q_S", "Q_I", "Q_R"};
    return i < 3 ? names[i] : "?";
}

inline std::optional<FigurePreset> figure_preset(std::string_view id) {
    struct Row {
        std::string_view id;
        PresetKind preset;
        PlotKind plot;
        std::size_t component;
        std::string_view title;
    };
    using enum PresetKind;
    static constexpr Row rows[] = {
        {"fig1", sis_disease_free, PlotKind::time_series, 0, "SIS susceptible, R0 < 1"},
        {"fig2", sis_disease_free, PlotKind::time_series, 1, "SIS infected, R0 < 1"},
        {"fig3", sis_disease_free, PlotKind::phase_portrait, 0, "SIS SI-plane, R0 < 1"},
        {"fig4", sis_endemic, PlotKind::time_series, 0, "SIS susceptible, R0 > 1"},
        {"fig5", sis_endemic, PlotKind::time_series, 1, "SIS infected, R0 > 1"},
        {"fig6", sis_endemic, PlotKind::phase_portrait, 0, "SIS SI-plane, R0 > 1"},
        {"fig7", sirs_disease_free, PlotKind::time_series, 0, "SIRS susceptible, R0 < 1"},
        {"fig8", sirs_disease_free, PlotKind::time_series, 1, "SIRS infected, R0 < 1"},
        {"fig9", sirs_disease_free, PlotKind::time_series, 2, "SIRS recovered, R0 < 1"},
        {"fig10", sirs_disease_free, PlotKind::phase_portrait, 0, "SIRS SI-plane, R0 < 1"},
        {"fig11", sirs_endemic, PlotKind::time_series, 0, "SIRS susceptible, R0 > 1"},
        {"fig12", sirs_endemic, PlotKind::time_series, 1, "SIRS infected, R0 > 1"},
        {"fig13", sirs_endemic, PlotKind::time_series, 2, "SIRS recovered, R0 > 1"},
        {"fig14", sirs_endemic, PlotKind::phase_portrait, 0, "SIRS SI-plane, R0 > 1"},
    };
    for (const auto& r : rows) {
        if (r.id == id) {
            return FigurePreset{std::string(r.id), r.preset, r.plot, r.component, std::string(r.title),
                                preset_scenario(r.preset)};
        }
    }
    return std::nullopt;
}

inline std::vector<std::string> figure_ids() {
    std::vector<std::string> ids;
    for (int i = 1; i <= 14; ++i) ids.push_back("fig" + std::to_string(i));
    return ids;
}

/// Distance check between a simulated end state and the analyzer's
/// equilibrium: disease-free presets need |Q_I| < 1e-3 and |Q_S - Q_S*| < 1e-2
/// (Q_R, when present, uses the looser bound); endemic presets need every
/// component within 1e-2.
inline bool within_preset_tolerance(PresetKind kind, std::span<const double> final_state,
                                    std::span<const double> equilibrium) {
    for (std::size_t i = 0; i < final_state.size(); ++i) {
        const double tol = (is_disease_free(kind) && i == 1) ? 1e-3 : 1e-2;
        if (!(std::abs(final_state[i] - equilibrium[i]) < tol)) return false;
    }
    return true;
}

}  // namespace fracepi::cli
