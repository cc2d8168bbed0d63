#include "cqtraj/velocity.hpp"

#include <cmath>
#include <sstream>

#include "cqtraj/errors.hpp"

namespace cqtraj {

namespace {

constexpr Complex kI{0.0, 1.0};

bool within_node_floor(const WaveValue& w, double lscale, double psi_floor) {
    // |psi| <= floor * L * |psi'| means the point lies within ~floor local
    // lengths of a zero of psi (psi ~ psi' * distance near a simple zero).
    return std::abs(w.psi) <= psi_floor * lscale * std::abs(w.dpsi_dx);
}

void guard_node(const WaveValue& w, const ModelSpec& model, const Units& units, Complex x,
                double psi_floor, const char* where) {
    if (within_node_floor(w, length_scale(model, units), psi_floor)) {
        std::ostringstream msg;
        msg << where << ": |psi| below the node floor at x = (" << x.real() << ", " << x.imag()
            << ")";
        throw NodeSingularityError(msg.str());
    }
}

}  // namespace

bool near_node(const ModelSpec& model, const Units& units, Complex x, double t, double psi_floor) {
    return within_node_floor(evaluate(model, units, x, t), length_scale(model, units), psi_floor);
}

VelocitySample complex_velocity(const ModelSpec& model, const Units& units, Complex x, double t,
                                double psi_floor) {
    const WaveValue w = evaluate(model, units, x, t);
    guard_node(w, model, units, x, psi_floor, "complex_velocity");
    const Complex xdot = units.hbar / (kI * units.mass) * (w.dpsi_dx / w.psi);
    return {xdot, xdot.real()};
}

double physical_velocity_field(const ModelSpec& model, const Units& units, double x_r, double x_i,
                               double t, double psi_floor) {
    return complex_velocity(model, units, Complex{x_r, x_i}, t, psi_floor).xdot_r;
}

double dbb_velocity(const ModelSpec& model, const Units& units, double x_r, double t,
                    double psi_floor) {
    const WaveValue w = evaluate(model, units, Complex{x_r, 0.0}, t);
    guard_node(w, model, units, Complex{x_r, 0.0}, psi_floor, "dbb_velocity");
    // j / |psi|^2 with j = (hbar / 2 i m)(psi* psi' - psi psi*'), evaluated
    // through complex arithmetic as an independent route to the same number.
    const Complex numerator =
        std::conj(w.psi) * w.dpsi_dx - std::conj(w.dpsi_dx) * w.psi;
    const Complex v = units.hbar / (2.0 * kI * units.mass) * numerator / std::norm(w.psi);
    return v.real();
}

EnergySample energy_field(const ModelSpec& model, const Units& units, Complex x, double t,
                          double psi_floor) {
    if (!is_stationary(model)) {
        throw NotStationaryError("energy_field: " + model_name(model) +
                                 " is not a stationary state");
    }
    const WaveValue w = evaluate(model, units, x, t);
    guard_node(w, model, units, x, psi_floor, "energy_field");
    const Complex log_deriv = w.dpsi_dx / w.psi;
    const Complex xdot = units.hbar / (kI * units.mass) * log_deriv;
    const Complex dxdot_dx =
        units.hbar / (kI * units.mass) * (w.d2psi_dx2 / w.psi - log_deriv * log_deriv);
    const Complex quantum_term = units.hbar / (2.0 * kI) * dxdot_dx;
    const Complex energy =
        0.5 * units.mass * xdot * xdot + potential(model, units, x) + quantum_term;
    return {energy, quantum_term};
}

Complex hj_function(const ModelSpec& model, const Units& units, Complex x, double t,
                    double psi_floor) {
    const WaveValue w = evaluate(model, units, x, t);
    guard_node(w, model, units, x, psi_floor, "hj_function");
    const double amplitude = reference_amplitude(model, units);
    return units.hbar / kI * std::log(w.psi / amplitude);
}

}  // namespace cqtraj
