#pragma once

#include <string>
#include <variant>

#include "cqtraj/units.hpp"

namespace cqtraj {

// Stationary eigenstate psi_n(x) exp(-i E_n t / hbar) with
// psi_n = N_n H_n(alpha x) exp(-(alpha x)^2 / 2) and omega = hbar alpha^2 / m.
struct HarmonicOscillator {
    int n = 0;
    double alpha = 1.0;  // inverse length scale
};

// A exp(i k x - i E t / hbar) with E = hbar^2 k^2 / 2m.
struct PlaneWave {
    double k = 1.0;
    double amplitude = 1.0;
};

// Scattering state above a step of height v0 at Re(x) = 0, with E > v0 > 0:
//   region I  (Re x <  0): exp(i k x) + R exp(-i k x)
//   region II (Re x >= 0): T exp(i q x),  T = 1 + R
// where k = sqrt(2 m E) / hbar and q = sqrt(2 m (E - v0)) / hbar. The
// amplitude-matched value is R = (k - q) / (k + q); other R in [0, 1) are
// accepted to decouple the contour geometry from the step height.
struct PotentialStep {
    double energy = 1.0;
    double v0 = 0.5;
    double reflection = 0.0;  // R; use make_step() for the matched value

    double wavenumber_in(const Units& units) const;
    double wavenumber_out(const Units& units) const;
    double transmission() const { return 1.0 + reflection; }
};

PotentialStep make_step(double energy, double v0);  // matched R = (k - q)/(k + q)
PotentialStep make_step(double energy, double v0, double reflection);

// Free minimum-uncertainty packet with initial spread sigma and mean
// wavenumber k_bar; spreads with tau(t) = sigma^2 + i hbar t / m.
struct GaussianPacket {
    double sigma = 1.0;
    double k_bar = 1.0;
};

using ModelSpec = std::variant<HarmonicOscillator, PlaneWave, PotentialStep, GaussianPacket>;

// Throws std::invalid_argument on parameter-domain violations.
void validate(const ModelSpec& model, const Units& units);

bool is_stationary(const ModelSpec& model);    // false only for GaussianPacket
bool is_normalizable(const ModelSpec& model);  // oscillator and packet

// omega for the oscillator, hbar k^2 / m for the travelling models, the
// inverse spread time hbar / (m sigma^2) for the packet.
double characteristic_frequency(const ModelSpec& model, const Units& units);

// 1/alpha, 1/|k|, 1/k, sigma respectively (1 when k = 0).
double length_scale(const ModelSpec& model, const Units& units);

std::string model_name(const ModelSpec& model);

double oscillator_frequency(const HarmonicOscillator& m, const Units& units);
double oscillator_energy(const HarmonicOscillator& m, const Units& units);  // (n + 1/2) hbar omega

}  // namespace cqtraj
