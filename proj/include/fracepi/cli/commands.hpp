#pragma once

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <future>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "fracepi/cli/output.hpp"
#include "fracepi/cli/presets.hpp"
#include "fracepi/cli/scenario.hpp"
#include "fracepi/errors.hpp"
#include "fracepi/report_json.hpp"

namespace fracepi::cli {

inline constexpr int exit_ok = 0;
inline constexpr int exit_io_error = 1;
inline constexpr int exit_config_error = 2;
inline constexpr int exit_numerical_failure = 3;

/// Flags shared by all verbs.
struct CommonOptions {
    std::optional<std::string> out_dir;
    std::optional<double> step;
    std::optional<double> t_end;
    std::optional<std::string> format;  // csv | json | svg
    bool clamp_nonnegative = false;
};

namespace detail {

inline void apply_overrides(Scenario& sc, const CommonOptions& opts) {
    if (opts.step || opts.t_end) {
        const double step = opts.step.value_or(sc.grid.step());
        const double t_end = opts.t_end.value_or(sc.grid.t_end());
        if (!(step > 0.0) || !std::isfinite(step)) throw ConfigError("--h: must be positive and finite");
        if (!(t_end >= step) || !std::isfinite(t_end)) throw ConfigError("--t-end: must be at least one step");
        sc.grid = GridSpec(step, t_end);
    }
    if (opts.clamp_nonnegative) sc.clamp_nonnegative = true;
    if (opts.format) {
        if (*opts.format == "csv") {
            sc.outputs = {OutputKind::csv};
        } else if (*opts.format == "svg") {
            sc.outputs = {OutputKind::svg};
        } else if (*opts.format == "json") {
            sc.outputs = {OutputKind::report};
        } else {
            throw ConfigError("--format: expected csv, json or svg");
        }
    }
}

/// Runs every alpha concurrently; results come back in input order.
inline std::vector<Trajectory> simulate_all(const Scenario& sc, const std::vector<FractionalOrder>& alphas) {
    std::vector<std::future<Trajectory>> jobs;
    jobs.reserve(alphas.size());
    for (auto a : alphas) jobs.push_back(std::async(std::launch::async, [&sc, a] { return simulate(sc, a); }));
    std::vector<Trajectory> out;
    out.reserve(alphas.size());
    std::optional<NumericalFailure> failure;
    for (std::size_t k = 0; k < jobs.size(); ++k) {
        try {
            out.push_back(jobs[k].get());
        } catch (const NumericalFailure& e) {
            if (!failure) failure.emplace(e.with_context("alpha=" + alpha_label(alphas[k].value()) + ": "));
        }
    }
    if (failure) throw *failure;
    return out;
}

inline std::filesystem::path output_dir(const CommonOptions& opts) {
    std::filesystem::path dir = opts.out_dir.value_or(".");
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw std::runtime_error("cannot create output directory '" + dir.string() + "': " + ec.message());
    return dir;
}

inline void write_file(const std::filesystem::path& path, const std::string& content) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot write '" + path.string() + "'");
    f << content;
    if (!f) throw std::runtime_error("write failed for '" + path.string() + "'");
}

inline nlohmann::json reports_json(const Scenario& sc, const std::vector<FractionalOrder>& alphas) {
    nlohmann::json doc;
    doc["model"] = to_string(sc.model);
    doc["reports"] = nlohmann::json::array();
    for (auto a : alphas) doc["reports"].push_back(to_json(analyze(sc, a)));
    return doc;
}

template <class Body>
int guarded(std::ostream& err, Body&& body) {
    try {
        return body();
    } catch (const ConfigError& e) {
        err << "configuration error: " << e.what() << '\n';
        return exit_config_error;
    } catch (const NumericalFailure& e) {
        err << "numerical failure: " << e.what() << '\n';
        return exit_numerical_failure;
    } catch (const std::invalid_argument& e) {
        err << "configuration error: " << e.what() << '\n';
        return exit_config_error;
    } catch (const std::domain_error& e) {
        err << "configuration error: " << e.what() << '\n';
        return exit_config_error;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return exit_io_error;
    }
}

}  // namespace detail

/// `simulate`: one CSV (and optional SVG / JSON report) per scenario.
inline int cmd_simulate(const std::string& scenario_path, const CommonOptions& opts, std::ostream& out,
                        std::ostream& err) {
    return detail::guarded(err, [&] {
        Scenario sc = load_scenario(scenario_path);
        detail::apply_overrides(sc, opts);
        const auto trajectories = detail::simulate_all(sc, sc.alphas);
        const auto dir = detail::output_dir(opts);
        const std::string stem = to_string(sc.model);

        if (sc.outputs.contains(OutputKind::csv)) {
            for (const auto& traj : trajectories) {
                const auto path = dir / (stem + "_alpha_" + alpha_label(traj.alpha().value()) + ".csv");
                detail::write_file(path, trajectory_csv(traj));
                out << path.string() << '\n';
            }
        }
        if (sc.outputs.contains(OutputKind::svg)) {
            std::vector<Panel> panels;
            for (std::size_t c = 0; c < dimension(sc.model); ++c) {
                Panel p{std::string(component_name(c)) + "(t)", "t", component_name(c), {}};
                for (const auto& traj : trajectories) {
                    p.series.push_back(time_series(traj, c, "alpha = " + alpha_label(traj.alpha().value())));
                }
                panels.push_back(std::move(p));
            }
            const auto path = dir / (stem + ".svg");
            detail::write_file(path, render_svg(panels, 1));
            out << path.string() << '\n';
        }
        if (sc.outputs.contains(OutputKind::report)) {
            const auto path = dir / (stem + "_report.json");
            detail::write_file(path, detail::reports_json(sc, sc.alphas).dump(2) + "\n");
            out << path.string() << '\n';
        }
        return exit_ok;
    });
}

/// `analyze`: JSON stability report per alpha on `out`.
inline int cmd_analyze(const std::string& scenario_path, const CommonOptions& opts, std::ostream& out,
                       std::ostream& err) {
    return detail::guarded(err, [&] {
        Scenario sc = load_scenario(scenario_path);
        if (opts.format && *opts.format != "json") throw ConfigError("--format: analyze only emits json");
        out << detail::reports_json(sc, sc.alphas).dump(2) << '\n';
        return exit_ok;
    });
}

/// `reproduce`: CSVs plus one SVG for a figure preset.
inline int cmd_reproduce(const std::string& figure_id, const CommonOptions& opts, std::ostream& out,
                         std::ostream& err) {
    return detail::guarded(err, [&] {
        auto fig = figure_preset(figure_id);
        if (!fig) throw ConfigError("figure: unknown id '" + figure_id + "' (expected fig1 ... fig14)");
        Scenario sc = fig->scenario;
        detail::apply_overrides(sc, opts);
        const auto trajectories = detail::simulate_all(sc, sc.alphas);
        const auto dir = detail::output_dir(opts);

        if (sc.outputs.contains(OutputKind::csv)) {
            for (const auto& traj : trajectories) {
                const auto path = dir / (fig->id + "_alpha_" + alpha_label(traj.alpha().value()) + ".csv");
                detail::write_file(path, trajectory_csv(traj));
                out << path.string() << '\n';
            }
        }
        if (sc.outputs.contains(OutputKind::svg)) {
            std::string svg;
            if (fig->plot == PlotKind::time_series) {
                Panel p{fig->title, "t", component_name(fig->component), {}};
                for (const auto& traj : trajectories) {
                    p.series.push_back(
                        time_series(traj, fig->component, "alpha = " + alpha_label(traj.alpha().value())));
                }
                svg = render_svg({p}, 1);
            } else {
                std::vector<Panel> panels;
                for (const auto& traj : trajectories) {
                    const std::string label = "alpha = " + alpha_label(traj.alpha().value());
                    panels.push_back(Panel{fig->title + " (" + label + ")", "Q_S", "Q_I", {phase_series(traj, label)}});
                }
                svg = render_svg(panels, 2);
            }
            const auto path = dir / (fig->id + ".svg");
            detail::write_file(path, svg);
            out << path.string() << '\n';
        }
        if (sc.outputs.contains(OutputKind::report)) {
            const auto path = dir / (fig->id + "_report.json");
            detail::write_file(path, detail::reports_json(sc, sc.alphas).dump(2) + "\n");
            out << path.string() << '\n';
        }
        return exit_ok;
    });
}

/// Parses `start:end:step`, `start:end` (single step) or a single value.
inline std::vector<FractionalOrder> parse_alpha_range(const std::string& spec) {
    std::vector<double> parts;
    std::stringstream ss(spec);
    std::string item;
    while (std::getline(ss, item, ':')) {
        try {
            std::size_t used = 0;
            parts.push_back(std::stod(item, &used));
            if (used != item.size()) throw std::invalid_argument("trailing characters");
        } catch (const std::exception&) {
            throw ConfigError("alpha range: cannot parse '" + item + "'");
        }
    }
    if (parts.empty() || parts.size() > 3) throw ConfigError("alpha range: expected start:end:step");
    const double start = parts[0];
    const double end = parts.size() > 1 ? parts[1] : start;
    const double step = parts.size() > 2 ? parts[2] : (end - start);
    if (!(start > 0.0 && start <= 1.0) || !(end > 0.0 && end <= 1.0)) {
        throw ConfigError("alpha range: bounds must lie in (0, 1]");
    }
    if (start > end) throw ConfigError("alpha range: start must not exceed end");
    if (start == end) return {FractionalOrder(start)};
    if (!(step > 0.0)) throw ConfigError("alpha range: step must be positive");

    const auto count = static_cast<std::size_t>(std::floor((end - start) / step + 1e-9)) + 1;
    std::vector<FractionalOrder> alphas;
    for (std::size_t k = 0; k < count; ++k) {
        // Round away accumulated representation error (0.9 + 2 * 0.05 > 1).
        const double a = std::round((start + static_cast<double>(k) * step) * 1e12) / 1e12;
        alphas.emplace_back(std::min(a, 1.0));
    }
    return alphas;
}

/// `sweep-alpha`: one summary row per alpha.
inline int cmd_sweep_alpha(const std::string& scenario_path, const std::string& range_spec,
                           const CommonOptions& opts, std::ostream& out, std::ostream& err) {
    return detail::guarded(err, [&] {
        Scenario sc = load_scenario(scenario_path);
        const auto alphas = parse_alpha_range(range_spec);
        detail::apply_overrides(sc, opts);
        const auto trajectories = detail::simulate_all(sc, alphas);

        std::string csv = "alpha";
        for (std::size_t c = 0; c < dimension(sc.model); ++c) csv += std::string(",") + component_name(c);
        csv += ",distance,verdict,margin\n";
        for (std::size_t k = 0; k < alphas.size(); ++k) {
            const auto report = analyze(sc, alphas[k]);
            const auto& target = report.attractor();
            const auto final_state = trajectories[k].back();
            double distance = 0.0;
            for (std::size_t c = 0; c < final_state.size(); ++c) {
                distance = std::max(distance, std::abs(final_state[c] - target.state[c]));
            }
            csv += format_double(alphas[k].value());
            for (double v : final_state) csv += "," + format_double(v);
            csv += "," + format_double(distance) + "," + to_string(target.overall) + "," +
                   format_double(target.matignon.margin.value_or(std::nan(""))) + "\n";
        }
        if (opts.out_dir) {
            const auto path = detail::output_dir(opts) / "sweep_alpha.csv";
            detail::write_file(path, csv);
            out << path.string() << '\n';
        } else {
            out << csv;
        }
        return exit_ok;
    });
}

}  // namespace fracepi::cli
