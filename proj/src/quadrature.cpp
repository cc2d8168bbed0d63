#include "cqtraj/quadrature.hpp"

#include <cmath>

namespace cqtraj {

namespace {

using C = std::complex<double>;
using Fn = std::function<C(double)>;

C simpson(C fa, C fm, C fb, double a, double b) {
    return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

C refine(const Fn& f, double a, double b, C fa, C fm, C fb, C whole, double tol_abs, int depth,
         int force_depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m);
    const double rm = 0.5 * (m + b);
    const C flm = f(lm);
    const C frm = f(rm);
    const C left = simpson(fa, flm, fm, a, m);
    const C right = simpson(fm, frm, fb, m, b);
    const C delta = left + right - whole;
    // A narrow feature can vanish at every node of a coarse panel and fake a
    // zero error estimate, so the first force_depth levels always split.
    if (depth <= 0 || (force_depth <= 0 && std::abs(delta) <= 15.0 * tol_abs)) {
        return left + right + delta / 15.0;  // one Richardson step
    }
    return refine(f, a, m, fa, flm, fm, left, 0.5 * tol_abs, depth - 1, force_depth - 1) +
           refine(f, m, b, fm, frm, fb, right, 0.5 * tol_abs, depth - 1, force_depth - 1);
}

}  // namespace

C adaptive_simpson(const Fn& f, double a, double b, double tol, int max_depth) {
    if (a == b) return 0.0;
    const C fa = f(a);
    const C fm = f(0.5 * (a + b));
    const C fb = f(b);
    const C whole = simpson(fa, fm, fb, a, b);
    // Scale for the relative tolerance: the integral magnitude, backed by a
    // crude L1 mass so symmetric cancellation does not collapse the budget.
    double mass = 0.0;
    const int kProbe = 32;
    for (int i = 0; i <= kProbe; ++i) {
        mass += std::abs(f(a + (b - a) * i / kProbe));
    }
    mass *= std::abs(b - a) / (kProbe + 1);
    const double scale = std::max({std::abs(whole), 0.5 * mass, 1e-300});
    return refine(f, a, b, fa, fm, fb, whole, tol * scale, max_depth, 8);
}

}  // namespace cqtraj
