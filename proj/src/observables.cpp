#include "cqtraj/observables.hpp"

#include <algorithm>
#include <cmath>

#include "cqtraj/errors.hpp"
#include "cqtraj/quadrature.hpp"

namespace cqtraj {

namespace {

constexpr Complex kI{0.0, 1.0};

double density(const ModelSpec& model, const Units& units, double x, double t) {
    return std::norm(evaluate(model, units, Complex{x, 0.0}, t).psi);
}

// Half-width of the integration window: start from the model's own extent and
// grow until the endpoint density is below 1e-16 of the sampled peak.
double choose_truncation(const ModelSpec& model, const Units& units, double t) {
    double L = 0.0;
    if (const auto* osc = std::get_if<HarmonicOscillator>(&model)) {
        L = (std::sqrt(2.0 * osc->n + 1.0) + 8.0) / osc->alpha;
    } else {
        const auto& packet = std::get<GaussianPacket>(model);
        const double center = units.hbar * packet.k_bar / units.mass * t;
        const double spread = units.hbar * t / (units.mass * packet.sigma);
        const double width = std::hypot(packet.sigma, spread);
        L = std::abs(center) + 12.0 * width;
    }
    double peak = 0.0;
    const int kProbe = 1024;
    for (int i = 0; i <= kProbe; ++i) {
        peak = std::max(peak, density(model, units, -L + 2.0 * L * i / kProbe, t));
    }
    for (int iter = 0; iter < 64; ++iter) {
        const double edge = std::max(density(model, units, -L, t), density(model, units, L, t));
        if (edge <= 1e-16 * peak) break;
        L *= 1.25;
    }
    return L;
}

}  // namespace

ExpectationReport expectation_report(const ModelSpec& model, const Units& units, double t,
                                     double quad_tol, double L_override) {
    validate(model, units);
    if (!is_normalizable(model)) {
        throw NonNormalizableError("expectation: " + model_name(model) +
                                   " has no finite real-axis norm");
    }
    const double L = L_override > 0.0 ? L_override : choose_truncation(model, units, t);

    const auto integral = [&](const std::function<Complex(const WaveValue&, double)>& weight) {
        return adaptive_simpson(
            [&](double x) {
                const WaveValue w = evaluate(model, units, Complex{x, 0.0}, t);
                return weight(w, x);
            },
            -L, L, quad_tol);
    };

    const Complex norm = integral([](const WaveValue& w, double) { return Complex{std::norm(w.psi)}; });
    const Complex mean_x =
        integral([](const WaveValue& w, double x) { return x * std::norm(w.psi); });
    const Complex mean_p = integral([&](const WaveValue& w, double) {
        return std::conj(w.psi) * (units.hbar / kI) * w.dpsi_dx;
    });
    const Complex mean_E = integral([&](const WaveValue& w, double x) {
        const Complex h_psi = -units.hbar * units.hbar / (2.0 * units.mass) * w.d2psi_dx2 +
                              potential(model, units, Complex{x, 0.0}) * w.psi;
        return std::conj(w.psi) * h_psi;
    });

    ExpectationReport report;
    report.norm = norm.real();
    report.mean_x = mean_x.real();
    report.mean_p = mean_p.real();
    report.mean_E = mean_E.real();
    report.truncation_L = L;
    report.quad_tol = quad_tol;
    report.max_imag_residual = std::max({std::abs(norm.imag()), std::abs(mean_x.imag()),
                                         std::abs(mean_p.imag()), std::abs(mean_E.imag())});
    return report;
}

double expectation(const ModelSpec& model, const Units& units, double t, Observable which,
                   double quad_tol, double L_override) {
    const ExpectationReport report = expectation_report(model, units, t, quad_tol, L_override);
    switch (which) {
        case Observable::Norm: return report.norm;
        case Observable::X: return report.mean_x;
        case Observable::P: return report.mean_p;
        case Observable::E: return report.mean_E;
    }
    return 0.0;
}

}  // namespace cqtraj
