#pragma once

#include "cqtraj/trajectory.hpp"

namespace cqtraj {

struct OrbitAnalysis {
    double period = 0.0;
    double action = 0.0;               // J = Re of the closed contour integral of m xdot dx
    double action_imag_residual = 0.0; // |Im| of the same integral
    int winding = 0;                   // zeros of psi enclosed, by the argument principle
    int enclosed_zero_count = 0;       // geometric winding summed over the known zeros
    bool is_larger_nest = false;       // orbit encloses every zero (winding == n for the oscillator)
};

// Contour quadrature of m xdot over the closed orbit polyline, refined by
// midpoint insertion until successive estimates differ by less than
// tol * 2 pi hbar. Requires termination == ClosedOrbit.
OrbitAnalysis action_of_orbit(const ModelSpec& model, const Units& units, const Trajectory& orbit,
                              double tol = 1e-8);

// Accumulated change of arg psi along the closed orbit divided by 2 pi;
// midpoints are inserted until every increment is below pi/2, and the total
// must land within 0.01 of an integer.
int winding_number(const ModelSpec& model, const Units& units, const Trajectory& orbit);

// (J_high - J_low) / (E_high - E_low) for oscillator levels with
// E_n = (n + 1/2) hbar omega; requires n_high == n_low + 1 and both analyses
// to be larger nests.
double dj_de_ratio(const Units& units, double alpha, int n_low, int n_high,
                   const OrbitAnalysis& low, const OrbitAnalysis& high);

}  // namespace cqtraj
