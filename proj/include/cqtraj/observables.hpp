#pragma once

#include "cqtraj/wavefunction.hpp"

namespace cqtraj {

enum class Observable { Norm, X, P, E };

struct ExpectationReport {
    double norm = 0.0;
    double mean_x = 0.0;
    double mean_p = 0.0;
    double mean_E = 0.0;
    double truncation_L = 0.0;
    double quad_tol = 0.0;
    double max_imag_residual = 0.0;  // largest |Im| among the four integrals
};

// Real-axis expectation integrals over [-L, L], with L grown until |psi|^2 at
// the endpoints is below 1e-16 of its peak (L_override > 0 forces L). Throws
// NonNormalizableError for the plane wave and the step.
ExpectationReport expectation_report(const ModelSpec& model, const Units& units, double t,
                                     double quad_tol = 1e-10, double L_override = 0.0);

double expectation(const ModelSpec& model, const Units& units, double t, Observable which,
                   double quad_tol = 1e-10, double L_override = 0.0);

}  // namespace cqtraj
