#pragma once

#include <vector>

#include "cqtraj/velocity.hpp"

namespace cqtraj {

struct IntegratorConfig {
    double rel_tol = 1e-9;
    double abs_tol = 1e-12;
    double max_step = 0.0;     // 0: no cap
    double fixed_step = 0.0;   // >0: plain order-5 steps of this size, no adaptivity
    double psi_floor = 1e-12;  // node guard, in units of the local length scale
    double node_floor = 1e-4;  // node-passage abort radius, same units; 0 disables
    long max_steps = 1000000;
    double close_eps = 1e-6;   // orbit closure tolerance, relative to the orbit scale
    bool stop_at_step_boundary = false;  // stop instead of continuing into region II
};

enum class Termination { TimeReached, ClosedOrbit, Singularity, StepBoundaryCrossed, MaxSteps };
const char* to_string(Termination term);

struct TrajectoryPoint {
    double t;
    Complex x;
    Complex xdot;  // complex_velocity at (x, t), evaluated on acceptance
};

struct Trajectory {
    ModelSpec model;
    Units units;
    std::vector<TrajectoryPoint> points;
    Termination termination = Termination::TimeReached;
    bool crossed_step_boundary = false;

    // Cubic Hermite dense output over the accepted steps.
    Complex sample(double t) const;
};

// Adaptive embedded Runge-Kutta 5(4) integration of xdot = (hbar/im) psi'/psi.
// For the step model a sign change of Re(x) is located by bisection and the
// integration continues in the other region (or stops, per config).
Trajectory integrate(const ModelSpec& model, const Units& units, Complex x0, double t0, double t1,
                     const IntegratorConfig& config = {});

// Exact paths where one exists: oscillator n = 0 and n = 1 (continuous square
// root branch), plane wave, packet. Throws UnsupportedModelError otherwise.
Complex closed_form_position(const ModelSpec& model, const Units& units, Complex x0, double t);

struct PeriodResult {
    double period = 0.0;
    Trajectory orbit;  // exactly one circuit, termination ClosedOrbit
};

// Integrates from x0 at t = 0 until the path leaves a ball of radius
// 0.1 * scale around x0 and then crosses the local section through x0 again
// within close_eps * scale; the return time is refined by bisection. Throws
// NotClosedError if no closure is found by t_max (default 400 / omega_char).
PeriodResult detect_period(const ModelSpec& model, const Units& units, Complex x0,
                           const IntegratorConfig& config = {}, double t_max = 0.0);

enum class InvariantKind { RadiusN0, NestValueN1, NestValueN2, StepContourC };

struct InvariantProbe {
    InvariantKind kind;
    double value;
};

// Model-specific conserved quantity of the complex flow at a point:
//   n = 0: |alpha x|
//   n = 1: |(alpha x)^2 - 1|
//   n = 2: |4 (alpha x) ((alpha x)^2 - 5/2)^2|
//   step, Re x < 0: the contour scalar c (see step_contour_value)
// Throws UnsupportedModelError otherwise.
InvariantProbe invariant_value(const ModelSpec& model, const Units& units, Complex x);

// c(x) = 2 R cos(2 k x_r) - exp(-2 k x_i) - R^2 exp(2 k x_i); conserved by the
// region-I flow, defined over the whole plane for field grids.
double step_contour_value(const PotentialStep& model, const Units& units, Complex x);

// On a crest column (cos 2 k x_r = 1) the level c < 0 sits at two heights
// solving R^2 Y^2 - (2R - c) Y + 1 = 0 with Y = exp(2 k x_i); upper selects
// the larger root (the branch above the stagnation line).
double step_contour_height(const PotentialStep& model, const Units& units, double c, bool upper);

// The region-I stagnation point (0, ln(1/R) / (2k)).
Complex step_stagnation_point(const PotentialStep& model, const Units& units);

}  // namespace cqtraj
