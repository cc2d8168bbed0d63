#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "cqtraj/scenario.hpp"
#include "cqtraj/version.hpp"

namespace {

using cqtraj::Complex;

Complex parse_complex(const std::string& text) {
    const auto comma = text.find(',');
    if (comma == std::string::npos) return Complex{std::stod(text), 0.0};
    return Complex{std::stod(text.substr(0, comma)), std::stod(text.substr(comma + 1))};
}

// Model flags shared by the subcommands; values only apply when the user
// passed them, so a JSON config survives partial overrides.
struct ModelFlags {
    std::string type;
    int n = 0;
    double alpha = 1.0;
    double k = 1.0;
    double amplitude = 1.0;
    double energy = 1.0;
    double v0 = 0.5;
    double reflection = 0.0;
    double sigma = 1.0;
    double k_bar = 1.0;

    CLI::Option* type_opt = nullptr;
    CLI::Option* n_opt = nullptr;
    CLI::Option* alpha_opt = nullptr;
    CLI::Option* k_opt = nullptr;
    CLI::Option* amplitude_opt = nullptr;
    CLI::Option* energy_opt = nullptr;
    CLI::Option* v0_opt = nullptr;
    CLI::Option* reflection_opt = nullptr;
    CLI::Option* sigma_opt = nullptr;
    CLI::Option* k_bar_opt = nullptr;

    void attach(CLI::App* cmd) {
        type_opt = cmd->add_option("--model", type,
                                   "wavefunction model: ho | plane | step | packet");
        n_opt = cmd->add_option("--n", n, "oscillator quantum number");
        alpha_opt = cmd->add_option("--alpha", alpha, "oscillator inverse length scale");
        k_opt = cmd->add_option("--k", k, "plane-wave wavenumber");
        amplitude_opt = cmd->add_option("--amplitude", amplitude, "plane-wave amplitude");
        energy_opt = cmd->add_option("--e", energy, "step energy E");
        v0_opt = cmd->add_option("--v0", v0, "step height v0");
        reflection_opt = cmd->add_option(
            "--r", reflection, "step reflection amplitude R (default: matched (k-q)/(k+q))");
        sigma_opt = cmd->add_option("--sigma", sigma, "packet initial spread");
        k_bar_opt = cmd->add_option("--kbar", k_bar, "packet mean wavenumber");
    }

    bool any_given() const {
        return type_opt->count() || n_opt->count() || alpha_opt->count() || k_opt->count() ||
               amplitude_opt->count() || energy_opt->count() || v0_opt->count() ||
               reflection_opt->count() || sigma_opt->count() || k_bar_opt->count();
    }

    // Layer the given flags over `base` (from JSON or defaults).
    cqtraj::ModelSpec resolve(const cqtraj::ModelSpec& base) const {
        std::string name = cqtraj::model_name(base);
        if (type_opt->count()) {
            if (type == "ho") name = "harmonic_oscillator";
            else if (type == "plane") name = "plane_wave";
            else if (type == "step") name = "potential_step";
            else if (type == "packet") name = "gaussian_packet";
            else throw std::invalid_argument("unknown --model '" + type +
                                             "' (expected ho, plane, step, or packet)");
        }
        if (name == "harmonic_oscillator") {
            cqtraj::HarmonicOscillator m =
                std::holds_alternative<cqtraj::HarmonicOscillator>(base)
                    ? std::get<cqtraj::HarmonicOscillator>(base)
                    : cqtraj::HarmonicOscillator{};
            if (n_opt->count()) m.n = n;
            if (alpha_opt->count()) m.alpha = alpha;
            return m;
        }
        if (name == "plane_wave") {
            cqtraj::PlaneWave m = std::holds_alternative<cqtraj::PlaneWave>(base)
                                      ? std::get<cqtraj::PlaneWave>(base)
                                      : cqtraj::PlaneWave{};
            if (k_opt->count()) m.k = k;
            if (amplitude_opt->count()) m.amplitude = amplitude;
            return m;
        }
        if (name == "potential_step") {
            cqtraj::PotentialStep m = std::holds_alternative<cqtraj::PotentialStep>(base)
                                          ? std::get<cqtraj::PotentialStep>(base)
                                          : cqtraj::make_step(1.0, 0.5);
            if (energy_opt->count()) m.energy = energy;
            if (v0_opt->count()) m.v0 = v0;
            if (reflection_opt->count()) {
                m.reflection = reflection;
            } else if (energy_opt->count() || v0_opt->count()) {
                m = cqtraj::make_step(m.energy, m.v0);  // re-match R to the new profile
            }
            return m;
        }
        cqtraj::GaussianPacket m = std::holds_alternative<cqtraj::GaussianPacket>(base)
                                       ? std::get<cqtraj::GaussianPacket>(base)
                                       : cqtraj::GaussianPacket{};
        if (sigma_opt->count()) m.sigma = sigma;
        if (k_bar_opt->count()) m.k_bar = k_bar;
        return m;
    }
};

struct CommonFlags {
    std::string json_config;
    std::vector<std::string> x0;
    double t0 = 0.0;
    double t1 = 10.0;
    double rtol = 1e-9;
    double atol = 1e-12;
    std::string out;
    ModelFlags model;

    CLI::Option* json_opt = nullptr;
    CLI::Option* x0_opt = nullptr;
    CLI::Option* t0_opt = nullptr;
    CLI::Option* t1_opt = nullptr;
    CLI::Option* rtol_opt = nullptr;
    CLI::Option* atol_opt = nullptr;
    CLI::Option* out_opt = nullptr;

    void attach(CLI::App* cmd) {
        json_opt = cmd->add_option("--json-config", json_config,
                                   "JSON config file; explicit flags override its fields")
                       ->check(CLI::ExistingFile);
        x0_opt = cmd->add_option("--x0", x0, "start position \"re,im\" (repeatable)");
        t0_opt = cmd->add_option("--t0", t0, "start time");
        t1_opt = cmd->add_option("--t1", t1, "end time");
        rtol_opt = cmd->add_option("--rtol", rtol, "integrator relative tolerance");
        atol_opt = cmd->add_option("--atol", atol, "integrator absolute tolerance");
        out_opt = cmd->add_option("--out", out, "output stem (directory for figures)");
        model.attach(cmd);
    }

    cqtraj::ScenarioConfig build(const std::string& mode) const {
        cqtraj::ScenarioConfig cfg;
        if (json_opt->count()) cfg = cqtraj::scenario_from_json_file(json_config);
        cfg.mode = mode;
        cfg.model = model.resolve(cfg.model);
        if (x0_opt->count()) {
            cfg.x0.clear();
            for (const auto& s : x0) cfg.x0.push_back(parse_complex(s));
        }
        if (t0_opt->count()) cfg.t0 = t0;
        if (t1_opt->count()) cfg.t1 = t1;
        if (rtol_opt->count()) cfg.integrator.rel_tol = rtol;
        if (atol_opt->count()) cfg.integrator.abs_tol = atol;
        if (out_opt->count()) cfg.out = out;
        return cfg;
    }
};

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"complex quantum trajectories: evaluation, integration, action, expectations"};
    app.set_version_flag("--version", cqtraj::kVersion);
    app.require_subcommand(1);

    CLI::App* traj = app.add_subcommand("traj", "integrate trajectories from --x0 seeds");
    CLI::App* field = app.add_subcommand("field", "tabulate a scalar field on a grid");
    CLI::App* action = app.add_subcommand("action", "close an orbit and quantize its action");
    CLI::App* expect = app.add_subcommand("expect", "real-axis expectation values at --t0");
    CLI::App* figures = app.add_subcommand("figures", "emit a canned dataset");

    CommonFlags traj_flags, field_flags, action_flags, expect_flags;
    traj_flags.attach(traj);
    field_flags.attach(field);
    action_flags.attach(action);
    expect_flags.attach(expect);

    std::string field_quantity = "auto";
    field->add_option("--quantity", field_quantity, "field value: c | vr | auto");

    double quad_tol = 1e-10;
    expect->add_option("--quad-tol", quad_tol, "expectation quadrature tolerance");

    std::string figures_which;
    std::string figures_out = "figures";
    figures->add_option("--which", figures_which, "dataset: shm0 | shm1 | shm2 | step")
        ->required();
    figures->add_option("--out", figures_out, "output directory");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 3;
    }

    try {
        if (figures->parsed()) {
            return cqtraj::emit_figure_dataset(figures_which, figures_out);
        }
        const CommonFlags* flags = nullptr;
        std::string mode;
        if (traj->parsed()) { flags = &traj_flags; mode = "traj"; }
        else if (field->parsed()) { flags = &field_flags; mode = "field"; }
        else if (action->parsed()) { flags = &action_flags; mode = "action"; }
        else { flags = &expect_flags; mode = "expect"; }

        cqtraj::ScenarioConfig cfg = flags->build(mode);
        if (field->parsed()) cfg.field_quantity = field_quantity;
        if (expect->parsed()) cfg.quad_tol = quad_tol;
        return cqtraj::run_scenario(cfg);
    } catch (const std::exception& e) {
        std::cerr << "cqtraj: " << e.what() << "\n";
        return 3;
    }
}
