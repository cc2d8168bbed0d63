#pragma once

#include <complex>
#include <vector>

#include "cqtraj/model.hpp"

namespace cqtraj {

using Complex = std::complex<double>;

// Psi and its exact analytic derivatives at one complex position.
struct WaveValue {
    Complex psi;
    Complex dpsi_dx;
    Complex d2psi_dx2;
    Complex dpsi_dt;
};

// Physicists' Hermite polynomial via H_{n+1} = 2 z H_n - 2 n H_{n-1}.
Complex hermite(int n, Complex z);

// The n real zeros of H_n, ascending.
std::vector<double> hermite_zeros(int n);

WaveValue evaluate(const ModelSpec& model, const Units& units, Complex x, double t);

// 0.5 m omega^2 x^2, 0, the step profile (by sign of Re x), 0 respectively.
Complex potential(const ModelSpec& model, const Units& units, Complex x);

// (i hbar dPsi/dt + (hbar^2/2m) d2Psi/dx2 - V Psi) / max(|Psi|, floor).
Complex schrodinger_residual(const ModelSpec& model, const Units& units, Complex x, double t,
                             double floor = 1e-300);

// N giving unit real-axis norm at t = 0: closed form for the oscillator,
// numerical quadrature (cached) for the packet. Throws NonNormalizableError
// for the plane wave and the step.
double normalization_constant(const ModelSpec& model, const Units& units);

// The N in Psi = N exp(i S_hat / hbar): the normalization constant when one
// exists, the incident amplitude otherwise.
double reference_amplitude(const ModelSpec& model, const Units& units);

}  // namespace cqtraj
