#pragma once

#include <string>
#include <vector>

#include "cqtraj/action.hpp"
#include "cqtraj/observables.hpp"

namespace cqtraj {

struct GridSpec {
    double xr_min = 0.0, xr_max = 0.0;  // equal bounds: use the model default window
    double xi_min = 0.0, xi_max = 0.0;
    int nx = 400;
    int ny = 200;
};

struct ScenarioConfig {
    std::string mode;  // traj | field | action | expect | figures
    ModelSpec model = HarmonicOscillator{};
    Units units;
    std::vector<Complex> x0;
    double t0 = 0.0;
    double t1 = 10.0;
    IntegratorConfig integrator;
    std::string out;                     // file stem (directory for figures)
    std::string which;                   // figures: shm0 | shm1 | shm2 | step
    std::string field_quantity = "auto"; // c | vr | auto (c for the step, vr otherwise)
    GridSpec grid;
    double quad_tol = 1e-10;
};

// Runs one scenario and serializes results: CSV data plus one JSON metadata
// sidecar per data file. Returns the process exit status: 0 on success, 2 on
// a singularity abort (partial data kept, flagged in the metadata), 3 on an
// invalid configuration. Reruns with the same config are byte-identical.
int run_scenario(const ScenarioConfig& config);

// Canned datasets: shm0/shm1/shm2 are families of four oscillator orbits for
// n = 0, 1, 2; "step" is the contour-scalar grid plus four trajectories on
// the levels c = -4, -3, -2, -1.
int emit_figure_dataset(const std::string& which, const std::string& out_dir);

// Parses a scenario config from a JSON file (the CLI applies flags on top).
ScenarioConfig scenario_from_json_file(const std::string& path);

}  // namespace cqtraj
