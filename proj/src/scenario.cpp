#include "cqtraj/scenario.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>

#include <json.hpp>

#include "cqtraj/errors.hpp"
#include "cqtraj/version.hpp"

namespace cqtraj {

namespace {

using nlohmann::json;

std::string fmt12(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

void write_text_file(const std::string& path, const std::string& content) {
    const std::filesystem::path p(path);
    if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
    std::ofstream out(p, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    out << content;
    if (!out) throw std::runtime_error("failed while writing: " + path);
}

std::string sidecar_path(const std::string& csv_path) {
    const std::string suffix = ".csv";
    if (csv_path.size() > suffix.size() &&
        csv_path.compare(csv_path.size() - suffix.size(), suffix.size(), suffix) == 0) {
        return csv_path.substr(0, csv_path.size() - suffix.size()) + ".meta.json";
    }
    return csv_path + ".meta.json";
}

json model_json(const ModelSpec& model) {
    json j;
    j["type"] = model_name(model);
    std::visit(
        [&](const auto& m) {
            using T = std::decay_t<decltype(m)>;
            if constexpr (std::is_same_v<T, HarmonicOscillator>) {
                j["n"] = m.n;
                j["alpha"] = m.alpha;
            } else if constexpr (std::is_same_v<T, PlaneWave>) {
                j["k"] = m.k;
                j["amplitude"] = m.amplitude;
            } else if constexpr (std::is_same_v<T, PotentialStep>) {
                j["energy"] = m.energy;
                j["v0"] = m.v0;
                j["reflection"] = m.reflection;
            } else {
                j["sigma"] = m.sigma;
                j["k_bar"] = m.k_bar;
            }
        },
        model);
    return j;
}

json derived_json(const ModelSpec& model, const Units& units) {
    json j;
    std::visit(
        [&](const auto& m) {
            using T = std::decay_t<decltype(m)>;
            if constexpr (std::is_same_v<T, HarmonicOscillator>) {
                j["omega"] = oscillator_frequency(m, units);
                j["energy_level"] = oscillator_energy(m, units);
            } else if constexpr (std::is_same_v<T, PlaneWave>) {
                j["energy"] = units.hbar * units.hbar * m.k * m.k / (2.0 * units.mass);
                j["velocity"] = units.hbar * m.k / units.mass;
            } else if constexpr (std::is_same_v<T, PotentialStep>) {
                const double k = m.wavenumber_in(units);
                const double q = m.wavenumber_out(units);
                j["k"] = k;
                j["q"] = q;
                j["omega_k"] = units.hbar * k * k / units.mass;
                j["transmission"] = m.transmission();
                j["probability_reflection"] = m.reflection * m.reflection;
                const Complex s = step_stagnation_point(m, units);
                j["stagnation_point"] = {s.real(), s.imag()};
                j["separatrix_c"] = -4.0 * m.reflection;
            } else {
                j["group_velocity"] = units.hbar * m.k_bar / units.mass;
                j["spread_time"] = units.mass * m.sigma * m.sigma / units.hbar;
            }
        },
        model);
    j["length_scale"] = length_scale(model, units);
    return j;
}

json integrator_json(const IntegratorConfig& cfg) {
    json j;
    j["rel_tol"] = cfg.rel_tol;
    j["abs_tol"] = cfg.abs_tol;
    j["max_step"] = cfg.max_step;
    j["fixed_step"] = cfg.fixed_step;
    j["psi_floor"] = cfg.psi_floor;
    j["node_floor"] = cfg.node_floor;
    j["max_steps"] = cfg.max_steps;
    j["close_eps"] = cfg.close_eps;
    j["stop_at_step_boundary"] = cfg.stop_at_step_boundary;
    return j;
}

json base_meta(const ScenarioConfig& cfg) {
    json j;
    j["tool"] = "cqtraj";
    j["version"] = kVersion;
    j["mode"] = cfg.mode;
    j["model"] = model_json(cfg.model);
    j["units"] = {{"hbar", cfg.units.hbar}, {"mass", cfg.units.mass}};
    j["derived"] = derived_json(cfg.model, cfg.units);
    return j;
}

std::string trajectory_csv(const Trajectory& traj) {
    std::string out = "t,x_re,x_im,v_re,v_im\n";
    for (const auto& p : traj.points) {
        out += fmt12(p.t) + "," + fmt12(p.x.real()) + "," + fmt12(p.x.imag()) + "," +
               fmt12(p.xdot.real()) + "," + fmt12(p.xdot.imag()) + "\n";
    }
    return out;
}

void add_trajectory_meta(json& meta, const Trajectory& traj, Complex x0, double t0, double t1) {
    meta["x0"] = {x0.real(), x0.imag()};
    meta["t_span"] = {t0, t1};
    meta["n_points"] = traj.points.size();
    meta["termination"] = to_string(traj.termination);
    meta["crossed_step_boundary"] = traj.crossed_step_boundary;
    if (std::holds_alternative<PotentialStep>(traj.model)) {
        meta["notes"] = {
            "a sign change of Re(x) switches the wavefunction region; the run continues "
            "in the new region unless stop_at_step_boundary is set"};
    }
}

GridSpec resolve_grid(const ScenarioConfig& cfg) {
    GridSpec g = cfg.grid;
    const bool default_x = g.xr_min == g.xr_max;
    const bool default_y = g.xi_min == g.xi_max;
    if (const auto* step = std::get_if<PotentialStep>(&cfg.model)) {
        const double k = step->wavenumber_in(cfg.units);
        if (default_x) {
            g.xr_min = -2.0 * M_PI / k;
            g.xr_max = 2.0 * M_PI / k;
        }
        if (default_y) {
            g.xi_min = -1.0 / k;
            g.xi_max = 1.0 / k;
        }
    } else {
        const double l = length_scale(cfg.model, cfg.units);
        if (default_x) {
            g.xr_min = -4.0 * l;
            g.xr_max = 4.0 * l;
        }
        if (default_y) {
            g.xi_min = -2.0 * l;
            g.xi_max = 2.0 * l;
        }
    }
    return g;
}

int run_traj(const ScenarioConfig& cfg) {
    int status = 0;
    const std::string stem = cfg.out.empty() ? "cqtraj_traj" : cfg.out;
    for (std::size_t i = 0; i < cfg.x0.size(); ++i) {
        const std::string path =
            cfg.x0.size() == 1 ? stem + ".csv"
                               : stem + "_" + (char('0' + i / 100 % 10)) +
                                     (char('0' + i / 10 % 10)) + (char('0' + i % 10)) + ".csv";
        json meta = base_meta(cfg);
        meta["integrator"] = integrator_json(cfg.integrator);
        meta["data_file"] = std::filesystem::path(path).filename().string();
        std::string csv;
        try {
            const Trajectory traj =
                integrate(cfg.model, cfg.units, cfg.x0[i], cfg.t0, cfg.t1, cfg.integrator);
            csv = trajectory_csv(traj);
            add_trajectory_meta(meta, traj, cfg.x0[i], cfg.t0, cfg.t1);
            if (traj.termination == Termination::Singularity) status = 2;
        } catch (const NodeSingularityError& e) {
            // x0 already inside the node floor: keep the (empty) data file and flag it.
            csv = "t,x_re,x_im,v_re,v_im\n";
            meta["x0"] = {cfg.x0[i].real(), cfg.x0[i].imag()};
            meta["t_span"] = {cfg.t0, cfg.t1};
            meta["n_points"] = 0;
            meta["termination"] = to_string(Termination::Singularity);
            meta["error"] = e.what();
            status = 2;
        }
        write_text_file(path, csv);
        write_text_file(sidecar_path(path), meta.dump(2) + "\n");
    }
    return status;
}

int run_field(const ScenarioConfig& cfg) {
    std::string quantity = cfg.field_quantity;
    if (quantity == "auto") {
        quantity = std::holds_alternative<PotentialStep>(cfg.model) ? "c" : "vr";
    }
    if (quantity == "c" && !std::holds_alternative<PotentialStep>(cfg.model)) {
        throw std::invalid_argument("field: quantity 'c' is defined only for the step model");
    }
    const GridSpec g = resolve_grid(cfg);
    if (g.nx < 2 || g.ny < 2) throw std::invalid_argument("field: grid must be at least 2x2");

    std::string csv = "x_re,x_im,value\n";
    for (int iy = 0; iy < g.ny; ++iy) {
        const double xi = g.xi_min + (g.xi_max - g.xi_min) * iy / (g.ny - 1);
        for (int ix = 0; ix < g.nx; ++ix) {
            const double xr = g.xr_min + (g.xr_max - g.xr_min) * ix / (g.nx - 1);
            double value;
            if (quantity == "c") {
                value = step_contour_value(std::get<PotentialStep>(cfg.model), cfg.units,
                                           Complex{xr, xi});
            } else {
                try {
                    value = physical_velocity_field(cfg.model, cfg.units, xr, xi, cfg.t0,
                                                    cfg.integrator.psi_floor);
                } catch (const NodeSingularityError&) {
                    value = std::numeric_limits<double>::quiet_NaN();
                }
            }
            csv += fmt12(xr) + "," + fmt12(xi) + "," + fmt12(value) + "\n";
        }
    }
    const std::string path = (cfg.out.empty() ? "cqtraj_field" : cfg.out) + ".csv";
    json meta = base_meta(cfg);
    meta["quantity"] = quantity;
    meta["t"] = cfg.t0;
    meta["grid"] = {{"xr_min", g.xr_min}, {"xr_max", g.xr_max}, {"xi_min", g.xi_min},
                    {"xi_max", g.xi_max}, {"nx", g.nx},         {"ny", g.ny}};
    meta["row_order"] = "x_i outer ascending, x_r inner ascending";
    meta["data_file"] = std::filesystem::path(path).filename().string();
    write_text_file(path, csv);
    write_text_file(sidecar_path(path), meta.dump(2) + "\n");
    return 0;
}

int run_action(const ScenarioConfig& cfg) {
    const std::string path = (cfg.out.empty() ? "cqtraj_action" : cfg.out) + ".csv";
    const PeriodResult pr = detect_period(cfg.model, cfg.units, cfg.x0.front(), cfg.integrator);
    const OrbitAnalysis oa = action_of_orbit(cfg.model, cfg.units, pr.orbit);
    json meta = base_meta(cfg);
    meta["integrator"] = integrator_json(cfg.integrator);
    meta["x0"] = {cfg.x0.front().real(), cfg.x0.front().imag()};
    meta["period"] = oa.period;
    meta["action"] = oa.action;
    meta["action_over_h"] = oa.action / (2.0 * M_PI * cfg.units.hbar);
    meta["action_imag_residual"] = oa.action_imag_residual;
    meta["winding"] = oa.winding;
    meta["enclosed_zero_count"] = oa.enclosed_zero_count;
    meta["is_larger_nest"] = oa.is_larger_nest;
    meta["termination"] = to_string(pr.orbit.termination);
    meta["data_file"] = std::filesystem::path(path).filename().string();
    write_text_file(path, trajectory_csv(pr.orbit));
    write_text_file(sidecar_path(path), meta.dump(2) + "\n");
    return 0;
}

int run_expect(const ScenarioConfig& cfg) {
    const ExpectationReport rep =
        expectation_report(cfg.model, cfg.units, cfg.t0, cfg.quad_tol);
    const std::string path = (cfg.out.empty() ? "cqtraj_expect" : cfg.out) + ".csv";
    std::string csv = "t,norm,mean_x,mean_p,mean_E,truncation_L\n";
    csv += fmt12(cfg.t0) + "," + fmt12(rep.norm) + "," + fmt12(rep.mean_x) + "," +
           fmt12(rep.mean_p) + "," + fmt12(rep.mean_E) + "," + fmt12(rep.truncation_L) + "\n";
    json meta = base_meta(cfg);
    meta["t"] = cfg.t0;
    meta["quad_tol"] = rep.quad_tol;
    meta["truncation_L"] = rep.truncation_L;
    meta["norm"] = rep.norm;
    meta["mean_x"] = rep.mean_x;
    meta["mean_p"] = rep.mean_p;
    meta["mean_E"] = rep.mean_E;
    meta["max_imag_residual"] = rep.max_imag_residual;
    meta["data_file"] = std::filesystem::path(path).filename().string();
    write_text_file(path, csv);
    write_text_file(sidecar_path(path), meta.dump(2) + "\n");
    return 0;
}

// Orbit families shown in the oscillator figures; real seeds per level.
struct FigureFamily {
    int n;
    double seeds[4];
};

int emit_oscillator_figure(const std::string& which, const std::string& out_dir) {
    static const FigureFamily families[] = {
        {0, {1.0, 2.0, 3.0, 4.0}},
        {1, {1.2, 1.35, 1.45, 1.55}},
        {2, {1.8, 1.9, 2.0, 2.1}},
    };
    const FigureFamily& fam = families[which == "shm0" ? 0 : which == "shm1" ? 1 : 2];
    const HarmonicOscillator osc{fam.n, 1.0};
    const ModelSpec model{osc};
    const Units units{};

    IntegratorConfig icfg;
    icfg.rel_tol = 1e-10;
    icfg.abs_tol = 1e-13;
    icfg.max_step = 2.0 * M_PI / oscillator_frequency(osc, units) / 512.0;

    for (int i = 0; i < 4; ++i) {
        const Complex x0{fam.seeds[i], 0.0};
        const PeriodResult pr = detect_period(model, units, x0, icfg);
        const OrbitAnalysis oa = action_of_orbit(model, units, pr.orbit);
        const std::string path =
            out_dir + "/" + which + "_00" + char('0' + i) + ".csv";
        ScenarioConfig meta_cfg;
        meta_cfg.mode = "figures";
        meta_cfg.model = model;
        meta_cfg.units = units;
        json meta = base_meta(meta_cfg);
        meta["figure_set"] = which;
        meta["integrator"] = integrator_json(icfg);
        meta["x0"] = {x0.real(), x0.imag()};
        meta["termination"] = to_string(pr.orbit.termination);
        meta["n_points"] = pr.orbit.points.size();
        meta["period"] = oa.period;
        meta["action"] = oa.action;
        meta["action_over_h"] = oa.action / (2.0 * M_PI * units.hbar);
        meta["winding"] = oa.winding;
        meta["enclosed_zero_count"] = oa.enclosed_zero_count;
        meta["is_larger_nest"] = oa.is_larger_nest;
        const InvariantProbe probe = invariant_value(model, units, x0);
        meta["invariant_at_seed"] = probe.value;
        meta["data_file"] = std::filesystem::path(path).filename().string();
        write_text_file(path, trajectory_csv(pr.orbit));
        write_text_file(sidecar_path(path), meta.dump(2) + "\n");
    }
    return 0;
}

int emit_step_figure(const std::string& out_dir) {
    // E = 1/2 and v0 = 6 sqrt(2) - 8 give k = 1, q = 3 - 2 sqrt(2) and a
    // matched reflection amplitude of exactly 1/sqrt(2).
    const PotentialStep step = make_step(0.5, 6.0 * std::sqrt(2.0) - 8.0);
    const ModelSpec model{step};
    const Units units{};
    const double k = step.wavenumber_in(units);
    const double omega_k = units.hbar * k * k / units.mass;

    ScenarioConfig field_cfg;
    field_cfg.mode = "figures";
    field_cfg.model = model;
    field_cfg.units = units;
    field_cfg.field_quantity = "c";
    field_cfg.out = out_dir + "/step_field";
    int status = run_field(field_cfg);

    IntegratorConfig icfg;
    icfg.rel_tol = 1e-10;
    icfg.abs_tol = 1e-13;
    icfg.max_step = 2.0 * M_PI / omega_k / 256.0;

    const double levels[] = {-4.0, -3.0, -2.0, -1.0};
    for (int i = 0; i < 4; ++i) {
        const double c = levels[i];
        const Complex x0{-M_PI / k, step_contour_height(step, units, c, true)};
        const double t1 = 20.0 / omega_k;
        const Trajectory traj = integrate(model, units, x0, 0.0, t1, icfg);
        double drift = 0.0;
        for (const auto& p : traj.points) {
            drift = std::max(drift, std::abs(step_contour_value(step, units, p.x) - c));
        }
        const std::string path = out_dir + "/step_traj_00" + std::string(1, char('0' + i)) + ".csv";
        ScenarioConfig meta_cfg;
        meta_cfg.mode = "figures";
        meta_cfg.model = model;
        meta_cfg.units = units;
        json meta = base_meta(meta_cfg);
        meta["figure_set"] = "step";
        meta["integrator"] = integrator_json(icfg);
        meta["contour_c"] = c;
        meta["contour_drift"] = drift;
        add_trajectory_meta(meta, traj, x0, 0.0, t1);
        meta["data_file"] = std::filesystem::path(path).filename().string();
        write_text_file(path, trajectory_csv(traj));
        write_text_file(sidecar_path(path), meta.dump(2) + "\n");
        if (traj.termination == Termination::Singularity) status = 2;
    }
    return status;
}

Complex json_to_complex(const json& v) {
    if (v.is_number()) return Complex{v.get<double>(), 0.0};
    if (v.is_array() && v.size() == 2) {
        return Complex{v[0].get<double>(), v[1].get<double>()};
    }
    if (v.is_string()) {
        const std::string s = v.get<std::string>();
        const auto comma = s.find(',');
        if (comma == std::string::npos) return Complex{std::stod(s), 0.0};
        return Complex{std::stod(s.substr(0, comma)), std::stod(s.substr(comma + 1))};
    }
    throw std::invalid_argument("x0 entries must be numbers, [re, im] pairs, or \"re,im\"");
}

ModelSpec model_from_json(const json& j) {
    const std::string type = j.value("type", "harmonic_oscillator");
    if (type == "ho" || type == "harmonic_oscillator") {
        return HarmonicOscillator{j.value("n", 0), j.value("alpha", 1.0)};
    }
    if (type == "plane" || type == "plane_wave") {
        return PlaneWave{j.value("k", 1.0), j.value("amplitude", 1.0)};
    }
    if (type == "step" || type == "potential_step") {
        const double energy = j.value("energy", j.value("e", 1.0));
        const double v0 = j.value("v0", 0.5);
        if (j.contains("reflection") || j.contains("r")) {
            return make_step(energy, v0, j.value("reflection", j.value("r", 0.0)));
        }
        return make_step(energy, v0);
    }
    if (type == "packet" || type == "gaussian_packet") {
        return GaussianPacket{j.value("sigma", 1.0), j.value("k_bar", j.value("kbar", 1.0))};
    }
    throw std::invalid_argument("unknown model type: " + type);
}

}  // namespace

ScenarioConfig scenario_from_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot read config file: " + path);
    json j = json::parse(in);

    ScenarioConfig cfg;
    cfg.mode = j.value("mode", "");
    if (j.contains("model")) cfg.model = model_from_json(j["model"]);
    if (j.contains("units")) {
        cfg.units.hbar = j["units"].value("hbar", 1.0);
        cfg.units.mass = j["units"].value("mass", 1.0);
    }
    if (j.contains("x0")) {
        for (const auto& v : j["x0"]) cfg.x0.push_back(json_to_complex(v));
    }
    cfg.t0 = j.value("t0", cfg.t0);
    cfg.t1 = j.value("t1", cfg.t1);
    cfg.out = j.value("out", cfg.out);
    cfg.which = j.value("which", cfg.which);
    cfg.field_quantity = j.value("quantity", cfg.field_quantity);
    cfg.quad_tol = j.value("quad_tol", cfg.quad_tol);
    if (j.contains("integrator")) {
        const json& ji = j["integrator"];
        cfg.integrator.rel_tol = ji.value("rtol", cfg.integrator.rel_tol);
        cfg.integrator.abs_tol = ji.value("atol", cfg.integrator.abs_tol);
        cfg.integrator.max_step = ji.value("max_step", cfg.integrator.max_step);
        cfg.integrator.fixed_step = ji.value("fixed_step", cfg.integrator.fixed_step);
        cfg.integrator.psi_floor = ji.value("psi_floor", cfg.integrator.psi_floor);
        cfg.integrator.node_floor = ji.value("node_floor", cfg.integrator.node_floor);
        cfg.integrator.max_steps = ji.value("max_steps", cfg.integrator.max_steps);
        cfg.integrator.close_eps = ji.value("close_eps", cfg.integrator.close_eps);
        cfg.integrator.stop_at_step_boundary =
            ji.value("stop_at_step_boundary", cfg.integrator.stop_at_step_boundary);
    }
    if (j.contains("grid")) {
        const json& jg = j["grid"];
        cfg.grid.xr_min = jg.value("xr_min", cfg.grid.xr_min);
        cfg.grid.xr_max = jg.value("xr_max", cfg.grid.xr_max);
        cfg.grid.xi_min = jg.value("xi_min", cfg.grid.xi_min);
        cfg.grid.xi_max = jg.value("xi_max", cfg.grid.xi_max);
        cfg.grid.nx = jg.value("nx", cfg.grid.nx);
        cfg.grid.ny = jg.value("ny", cfg.grid.ny);
    }
    return cfg;
}

int emit_figure_dataset(const std::string& which, const std::string& out_dir) {
    try {
        const std::string dir = out_dir.empty() ? "figures" : out_dir;
        if (which == "shm0" || which == "shm1" || which == "shm2") {
            return emit_oscillator_figure(which, dir);
        }
        if (which == "step") {
            return emit_step_figure(dir);
        }
        std::cerr << "figures: unknown dataset '" << which
                  << "' (expected shm0, shm1, shm2, or step)\n";
        return 3;
    } catch (const std::invalid_argument& e) {
        std::cerr << "figures: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "figures: " << e.what() << "\n";
        return 2;
    }
}

int run_scenario(const ScenarioConfig& cfg) {
    try {
        validate(cfg.model, cfg.units);
        if (cfg.mode == "figures") {
            return emit_figure_dataset(cfg.which, cfg.out);
        }
        if (cfg.mode == "traj" || cfg.mode == "action") {
            if (cfg.x0.empty()) {
                throw std::invalid_argument(cfg.mode + ": at least one --x0 is required");
            }
        }
        if (cfg.mode == "traj") return run_traj(cfg);
        if (cfg.mode == "field") return run_field(cfg);
        if (cfg.mode == "action") return run_action(cfg);
        if (cfg.mode == "expect") return run_expect(cfg);
        throw std::invalid_argument("unknown mode: '" + cfg.mode +
                                    "' (expected traj, field, action, expect, or figures)");
    } catch (const std::invalid_argument& e) {
        std::cerr << "cqtraj: " << e.what() << "\n";
        return 3;
    } catch (const NonNormalizableError& e) {
        std::cerr << "cqtraj: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "cqtraj: " << e.what() << "\n";
        return 2;
    }
}

}  // namespace cqtraj
