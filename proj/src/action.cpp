#include "cqtraj/action.hpp"

#include <cmath>
#include <functional>
#include <stdexcept>

#include "cqtraj/errors.hpp"

namespace cqtraj {

namespace {

std::vector<Complex> closed_polyline(const Trajectory& orbit) {
    std::vector<Complex> poly;
    poly.reserve(orbit.points.size() + 1);
    for (const auto& p : orbit.points) poly.push_back(p.x);
    if (poly.size() < 3) throw NotClosedError("closed orbit has too few points");
    if (poly.back() != poly.front()) poly.push_back(poly.front());
    return poly;
}

// Accumulated principal-branch phase change of fn along the chord a -> b,
// splitting at chord midpoints until each increment is below pi/2 so no whole
// turn can hide inside one increment.
double phase_delta(const std::function<Complex(Complex)>& fn, Complex a, Complex b, Complex fa,
                   Complex fb, int depth) {
    if (fa == Complex{0.0} || fb == Complex{0.0} || !std::isfinite(std::abs(fa)) ||
        !std::isfinite(std::abs(fb))) {
        throw PhaseAmbiguityError("phase tracking hit a zero of the tracked function");
    }
    const double d = std::arg(fb / fa);
    if (std::abs(d) < M_PI / 2.0) return d;
    if (depth >= 48) {
        throw PhaseAmbiguityError("phase increment cannot be refined below pi/2");
    }
    const Complex m = 0.5 * (a + b);
    const Complex fm = fn(m);
    return phase_delta(fn, a, m, fa, fm, depth + 1) + phase_delta(fn, m, b, fm, fb, depth + 1);
}

int accumulate_winding(const std::function<Complex(Complex)>& fn,
                       const std::vector<Complex>& poly) {
    double total = 0.0;
    Complex prev_val = fn(poly.front());
    for (std::size_t i = 0; i + 1 < poly.size(); ++i) {
        const Complex next_val = fn(poly[i + 1]);
        total += phase_delta(fn, poly[i], poly[i + 1], prev_val, next_val, 0);
        prev_val = next_val;
    }
    const double turns = total / (2.0 * M_PI);
    const double nearest = std::round(turns);
    if (std::abs(turns - nearest) > 0.01) {
        throw PhaseAmbiguityError("accumulated phase is not an integer number of turns: " +
                                  std::to_string(turns));
    }
    return int(nearest);
}

// Known zeros of the spatial wavefunction near the orbit's footprint.
std::vector<Complex> known_zeros(const ModelSpec& model, const Units& units,
                                 const std::vector<Complex>& poly) {
    std::vector<Complex> zeros;
    if (const auto* osc = std::get_if<HarmonicOscillator>(&model)) {
        for (double z : hermite_zeros(osc->n)) zeros.emplace_back(z / osc->alpha, 0.0);
        return zeros;
    }
    if (const auto* step = std::get_if<PotentialStep>(&model)) {
        // exp(2 i k x) = -R: the row x_i = ln(1/R)/(2k), x_r = (2m+1) pi / (2k)
        const double k = step->wavenumber_in(units);
        const double row = std::log(1.0 / step->reflection) / (2.0 * k);
        double lo = poly.front().real(), hi = lo;
        for (const auto& p : poly) {
            lo = std::min(lo, p.real());
            hi = std::max(hi, p.real());
        }
        const double margin = M_PI / k;
        const long m_lo = long(std::floor(((lo - margin) * 2.0 * k / M_PI - 1.0) / 2.0));
        const long m_hi = long(std::ceil(((hi + margin) * 2.0 * k / M_PI - 1.0) / 2.0));
        for (long m = m_lo; m <= m_hi; ++m) {
            zeros.emplace_back((2.0 * m + 1.0) * M_PI / (2.0 * k), row);
        }
    }
    return zeros;  // plane wave and packet: none
}

}  // namespace

int winding_number(const ModelSpec& model, const Units& units, const Trajectory& orbit) {
    if (orbit.termination != Termination::ClosedOrbit) {
        throw NotClosedError("winding_number: requires a closed orbit");
    }
    const auto poly = closed_polyline(orbit);
    const auto psi_spatial = [&](Complex x) { return evaluate(model, units, x, 0.0).psi; };
    return accumulate_winding(psi_spatial, poly);
}

OrbitAnalysis action_of_orbit(const ModelSpec& model, const Units& units, const Trajectory& orbit,
                              double tol) {
    if (orbit.termination != Termination::ClosedOrbit) {
        throw NotClosedError("action_of_orbit: requires a closed orbit");
    }
    const double h_planck = 2.0 * M_PI * units.hbar;
    const auto momentum = [&](Complex x) {
        return units.mass * complex_velocity(model, units, x, 0.0).xdot;
    };
    const auto trapezoid = [](const std::vector<Complex>& xs, const std::vector<Complex>& fs) {
        Complex sum = 0.0;
        for (std::size_t i = 0; i + 1 < xs.size(); ++i) {
            sum += 0.5 * (fs[i] + fs[i + 1]) * (xs[i + 1] - xs[i]);
        }
        return sum;
    };

    std::vector<Complex> xs = closed_polyline(orbit);
    Complex total;
    try {
        std::vector<Complex> fs;
        fs.reserve(xs.size());
        for (const auto& x : xs) fs.push_back(momentum(x));
        Complex prev = trapezoid(xs, fs);
        bool converged = false;
        // Chord-midpoint refinement: the polyline stays in the homotopy class
        // of the orbit, so the limit is exactly the contour integral.
        for (int level = 0; level < 12 && !converged; ++level) {
            std::vector<Complex> xs2, fs2;
            xs2.reserve(2 * xs.size());
            fs2.reserve(2 * xs.size());
            for (std::size_t i = 0; i + 1 < xs.size(); ++i) {
                xs2.push_back(xs[i]);
                fs2.push_back(fs[i]);
                const Complex mid = 0.5 * (xs[i] + xs[i + 1]);
                xs2.push_back(mid);
                fs2.push_back(momentum(mid));
            }
            xs2.push_back(xs.back());
            fs2.push_back(fs.back());
            xs = std::move(xs2);
            fs = std::move(fs2);
            total = trapezoid(xs, fs);
            converged = std::abs(total - prev) < tol * h_planck;
            prev = total;
            if (xs.size() > 2000000) break;
        }
        if (!converged) {
            throw QuadratureDivergedError("action_of_orbit: refinement did not converge");
        }
    } catch (const NodeSingularityError& e) {
        throw QuadratureDivergedError(std::string("action_of_orbit: contour touches a node (") +
                                      e.what() + ")");
    }

    OrbitAnalysis out;
    out.period = orbit.points.back().t - orbit.points.front().t;
    out.action = total.real();
    out.action_imag_residual = std::abs(total.imag());
    out.winding = winding_number(model, units, orbit);

    const auto poly = closed_polyline(orbit);
    int enclosed = 0;
    for (const auto& zero : known_zeros(model, units, poly)) {
        enclosed += accumulate_winding([&](Complex x) { return x - zero; }, poly);
    }
    out.enclosed_zero_count = enclosed;
    if (const auto* osc = std::get_if<HarmonicOscillator>(&model)) {
        out.is_larger_nest = out.winding == osc->n;
    }
    return out;
}

double dj_de_ratio(const Units& units, double alpha, int n_low, int n_high,
                   const OrbitAnalysis& low, const OrbitAnalysis& high) {
    if (n_high != n_low + 1) {
        throw std::invalid_argument("dj_de_ratio: levels must be adjacent");
    }
    if (!low.is_larger_nest || !high.is_larger_nest) {
        throw std::invalid_argument("dj_de_ratio: both orbits must be larger nests");
    }
    const double omega = units.hbar * alpha * alpha / units.mass;
    return (high.action - low.action) / (double(n_high - n_low) * units.hbar * omega);
}

}  // namespace cqtraj
