#include "cqtraj/wavefunction.hpp"

#include <array>
#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>

#include "cqtraj/errors.hpp"
#include "cqtraj/quadrature.hpp"

namespace cqtraj {

namespace {

constexpr Complex kI{0.0, 1.0};

double hermite_real(int n, double z) {
    double hm1 = 1.0;
    if (n == 0) return hm1;
    double h = 2.0 * z;
    for (int k = 1; k < n; ++k) {
        const double next = 2.0 * z * h - 2.0 * k * hm1;
        hm1 = h;
        h = next;
    }
    return h;
}

// N_n = sqrt(alpha / (sqrt(pi) 2^n n!)), via logs to stay finite for large n.
double oscillator_norm(const HarmonicOscillator& m) {
    const double log_pi = std::log(M_PI);
    const double log_denom = 0.5 * log_pi + m.n * std::log(2.0) + std::lgamma(m.n + 1.0);
    return std::sqrt(m.alpha) * std::exp(-0.5 * log_denom);
}

WaveValue eval_oscillator(const HarmonicOscillator& m, const Units& units, Complex x, double t) {
    const Complex u = m.alpha * x;
    const double energy = oscillator_energy(m, units);
    const Complex hn = hermite(m.n, u);
    const Complex hnm1 = m.n > 0 ? hermite(m.n - 1, u) : Complex{0.0};
    const Complex envelope = std::exp(-0.5 * u * u);
    const Complex phase = std::exp(-kI * (energy * t / units.hbar));
    const double norm = oscillator_norm(m);

    WaveValue w;
    w.psi = norm * envelope * hn * phase;
    // d/dx [e^{-u^2/2} H_n] = alpha e^{-u^2/2} (2 n H_{n-1} - u H_n)
    w.dpsi_dx = norm * m.alpha * envelope * (2.0 * double(m.n) * hnm1 - u * hn) * phase;
    // eigenstate identity: psi'' = alpha^2 (u^2 - 2n - 1) psi
    w.d2psi_dx2 = m.alpha * m.alpha * (u * u - (2.0 * m.n + 1.0)) * w.psi;
    w.dpsi_dt = -kI * (energy / units.hbar) * w.psi;
    return w;
}

WaveValue eval_plane_wave(const PlaneWave& m, const Units& units, Complex x, double t) {
    const double energy = units.hbar * units.hbar * m.k * m.k / (2.0 * units.mass);
    WaveValue w;
    w.psi = m.amplitude * std::exp(kI * (m.k * x) - kI * (energy * t / units.hbar));
    w.dpsi_dx = kI * m.k * w.psi;
    w.d2psi_dx2 = -m.k * m.k * w.psi;
    w.dpsi_dt = -kI * (energy / units.hbar) * w.psi;
    return w;
}

WaveValue eval_step(const PotentialStep& m, const Units& units, Complex x, double t) {
    const double k = m.wavenumber_in(units);
    const double q = m.wavenumber_out(units);
    WaveValue w;
    if (x.real() < 0.0) {
        const Complex incident = std::exp(kI * (k * x));
        const Complex reflected = m.reflection * std::exp(-kI * (k * x));
        w.psi = incident + reflected;
        w.dpsi_dx = kI * k * (incident - reflected);
        w.d2psi_dx2 = -k * k * w.psi;
    } else {
        w.psi = m.transmission() * std::exp(kI * (q * x));
        w.dpsi_dx = kI * q * w.psi;
        w.d2psi_dx2 = -q * q * w.psi;
    }
    const Complex phase = std::exp(-kI * (m.energy * t / units.hbar));
    w.psi *= phase;
    w.dpsi_dx *= phase;
    w.d2psi_dx2 *= phase;
    w.dpsi_dt = -kI * (m.energy / units.hbar) * w.psi;
    return w;
}

// Packet with N = 1; shared by evaluate() and the normalization integral.
WaveValue eval_packet_unnormalized(const GaussianPacket& m, const Units& units, Complex x,
                                   double t) {
    const double s2 = m.sigma * m.sigma;
    const Complex tau = s2 + kI * (units.hbar * t / units.mass);
    const Complex y = x - kI * (s2 * m.k_bar);
    const Complex pref = std::sqrt(2.0 * M_PI * m.sigma / tau);
    const Complex damp = std::exp(-y * y / (2.0 * tau) - 0.5 * (s2 + m.k_bar * m.k_bar));

    WaveValue w;
    w.psi = pref * damp;
    w.dpsi_dx = -(y / tau) * w.psi;
    w.d2psi_dx2 = (y * y / (tau * tau) - 1.0 / tau) * w.psi;
    // free evolution: i hbar psi_t = -(hbar^2/2m) psi'', exactly
    w.dpsi_dt = kI * units.hbar / (2.0 * units.mass) * w.d2psi_dx2;
    return w;
}

double packet_norm(const GaussianPacket& m) {
    static std::mutex mutex;
    static std::map<std::array<double, 2>, double> cache;
    const std::array<double, 2> key{m.sigma, m.k_bar};
    std::lock_guard<std::mutex> lock(mutex);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;

    const Units unit_system{};  // the t = 0 profile does not involve hbar or mass
    const double L = 10.0 * m.sigma;
    const Complex integral = adaptive_simpson(
        [&](double x) -> Complex {
            const Complex p = eval_packet_unnormalized(m, unit_system, Complex{x, 0.0}, 0.0).psi;
            return std::norm(p);
        },
        -L, L, 1e-13);
    const double norm = 1.0 / std::sqrt(integral.real());
    cache.emplace(key, norm);
    return norm;
}

WaveValue eval_packet(const GaussianPacket& m, const Units& units, Complex x, double t) {
    WaveValue w = eval_packet_unnormalized(m, units, x, t);
    const double norm = packet_norm(m);
    w.psi *= norm;
    w.dpsi_dx *= norm;
    w.d2psi_dx2 *= norm;
    w.dpsi_dt *= norm;
    return w;
}

}  // namespace

Complex hermite(int n, Complex z) {
    if (n < 0) throw std::invalid_argument("hermite: n must be >= 0");
    Complex hm1 = 1.0;
    if (n == 0) return hm1;
    Complex h = 2.0 * z;
    for (int k = 1; k < n; ++k) {
        const Complex next = 2.0 * z * h - 2.0 * double(k) * hm1;
        hm1 = h;
        h = next;
    }
    return h;
}

std::vector<double> hermite_zeros(int n) {
    if (n < 0) throw std::invalid_argument("hermite_zeros: n must be >= 0");
    std::vector<double> zeros;
    if (n == 0) return zeros;
    // All n zeros are real, simple, and inside |z| < sqrt(2n + 1); bracket by
    // a sign scan and bisect.
    const double reach = std::sqrt(2.0 * n + 1.0) + 1.0;
    const int cells = 64 * n;
    double prev_z = -reach;
    double prev_f = hermite_real(n, prev_z);
    for (int i = 1; i <= cells; ++i) {
        const double z = -reach + 2.0 * reach * i / cells;
        const double f = hermite_real(n, z);
        if (prev_f == 0.0) {
            zeros.push_back(prev_z);
        } else if (prev_f * f < 0.0) {
            double lo = prev_z, hi = z, flo = prev_f;
            for (int iter = 0; iter < 100; ++iter) {
                const double mid = 0.5 * (lo + hi);
                const double fm = hermite_real(n, mid);
                if (flo * fm <= 0.0) {
                    hi = mid;
                } else {
                    lo = mid;
                    flo = fm;
                }
            }
            zeros.push_back(0.5 * (lo + hi));
        }
        prev_z = z;
        prev_f = f;
    }
    return zeros;
}

WaveValue evaluate(const ModelSpec& model, const Units& units, Complex x, double t) {
    return std::visit(
        [&](const auto& m) -> WaveValue {
            using T = std::decay_t<decltype(m)>;
            if constexpr (std::is_same_v<T, HarmonicOscillator>) {
                return eval_oscillator(m, units, x, t);
            } else if constexpr (std::is_same_v<T, PlaneWave>) {
                return eval_plane_wave(m, units, x, t);
            } else if constexpr (std::is_same_v<T, PotentialStep>) {
                return eval_step(m, units, x, t);
            } else {
                return eval_packet(m, units, x, t);
            }
        },
        model);
}

Complex potential(const ModelSpec& model, const Units& units, Complex x) {
    return std::visit(
        [&](const auto& m) -> Complex {
            using T = std::decay_t<decltype(m)>;
            if constexpr (std::is_same_v<T, HarmonicOscillator>) {
                const double omega = oscillator_frequency(m, units);
                return 0.5 * units.mass * omega * omega * x * x;
            } else if constexpr (std::is_same_v<T, PotentialStep>) {
                return x.real() < 0.0 ? Complex{0.0} : Complex{m.v0};
            } else {
                (void)m;
                return Complex{0.0};
            }
        },
        model);
}

Complex schrodinger_residual(const ModelSpec& model, const Units& units, Complex x, double t,
                             double floor) {
    const WaveValue w = evaluate(model, units, x, t);
    const Complex lhs = kI * units.hbar * w.dpsi_dt +
                        units.hbar * units.hbar / (2.0 * units.mass) * w.d2psi_dx2 -
                        potential(model, units, x) * w.psi;
    return lhs / std::max(std::abs(w.psi), floor);
}

double normalization_constant(const ModelSpec& model, const Units& units) {
    (void)units;
    return std::visit(
        [&](const auto& m) -> double {
            using T = std::decay_t<decltype(m)>;
            if constexpr (std::is_same_v<T, HarmonicOscillator>) {
                return oscillator_norm(m);
            } else if constexpr (std::is_same_v<T, GaussianPacket>) {
                return packet_norm(m);
            } else {
                throw NonNormalizableError(model_name(ModelSpec{m}) +
                                           ": no finite real-axis norm");
            }
        },
        model);
}

double reference_amplitude(const ModelSpec& model, const Units& units) {
    if (const auto* plane = std::get_if<PlaneWave>(&model)) return plane->amplitude;
    if (std::holds_alternative<PotentialStep>(model)) return 1.0;  // incident amplitude
    return normalization_constant(model, units);
}

}  // namespace cqtraj
