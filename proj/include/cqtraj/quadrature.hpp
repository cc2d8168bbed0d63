#pragma once

#include <complex>
#include <functional>

namespace cqtraj {

// Adaptive Simpson quadrature for complex integrands on [a, b]. tol is
// relative to the integral scale; when the value itself cancels towards zero
// the L1 mass of the integrand is used as the scale instead.
std::complex<double> adaptive_simpson(const std::function<std::complex<double>(double)>& f,
                                      double a, double b, double tol, int max_depth = 48);

}  // namespace cqtraj
