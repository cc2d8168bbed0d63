#pragma once

#include "cqtraj/wavefunction.hpp"

namespace cqtraj {

struct VelocitySample {
    Complex xdot;    // (hbar / i m) psi' / psi
    double xdot_r;   // Re(xdot): the physical velocity
};

struct EnergySample {
    Complex energy;        // (m/2) xdot^2 + V + quantum term
    Complex quantum_term;  // (hbar / 2i) d(xdot)/dx
};

// A point counts as singular when |psi| <= floor * L * |psi'| with L the model
// length scale, i.e. the point sits within `floor` local lengths of a node.
bool near_node(const ModelSpec& model, const Units& units, Complex x, double t,
               double psi_floor = 1e-12);

VelocitySample complex_velocity(const ModelSpec& model, const Units& units, Complex x, double t,
                                double psi_floor = 1e-12);

// Re(xdot) on the line Im(x) = x_i, as a real scalar field.
double physical_velocity_field(const ModelSpec& model, const Units& units, double x_r, double x_i,
                               double t, double psi_floor = 1e-12);

// Standard guidance-equation velocity on the real axis, computed from the
// probability current; comparison oracle for the physical velocity.
double dbb_velocity(const ModelSpec& model, const Units& units, double x_r, double t,
                    double psi_floor = 1e-12);

// Total-energy field of a stationary state; throws NotStationaryError for the
// packet.
EnergySample energy_field(const ModelSpec& model, const Units& units, Complex x, double t,
                          double psi_floor = 1e-12);

// S_hat with Psi = N exp(i S_hat / hbar), principal log branch (the value is
// defined modulo 2 pi hbar).
Complex hj_function(const ModelSpec& model, const Units& units, Complex x, double t,
                    double psi_floor = 1e-12);

}  // namespace cqtraj
