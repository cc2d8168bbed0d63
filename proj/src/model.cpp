#include "cqtraj/model.hpp"

#include <cmath>
#include <stdexcept>

namespace cqtraj {

namespace {

void require(bool ok, const char* msg) {
    if (!ok) throw std::invalid_argument(msg);
}

}  // namespace

double PotentialStep::wavenumber_in(const Units& units) const {
    return std::sqrt(2.0 * units.mass * energy) / units.hbar;
}

double PotentialStep::wavenumber_out(const Units& units) const {
    return std::sqrt(2.0 * units.mass * (energy - v0)) / units.hbar;
}

PotentialStep make_step(double energy, double v0) {
    require(std::isfinite(energy) && std::isfinite(v0) && energy > v0 && energy > 0.0,
            "step: energy must exceed the barrier height");
    PotentialStep step{energy, v0, 0.0};
    // Amplitude matching at the boundary, independent of units:
    // R = (k - q)/(k + q) = (sqrt(E) - sqrt(E - v0)) / (sqrt(E) + sqrt(E - v0)).
    const double a = std::sqrt(energy);
    const double b = std::sqrt(energy - v0);
    step.reflection = (a - b) / (a + b);
    return step;
}

PotentialStep make_step(double energy, double v0, double reflection) {
    require(std::isfinite(energy) && std::isfinite(v0) && energy > v0 && energy > 0.0,
            "step: energy must exceed the barrier height");
    return PotentialStep{energy, v0, reflection};
}

void validate(const ModelSpec& model, const Units& units) {
    require(std::isfinite(units.hbar) && units.hbar > 0.0, "units: hbar must be positive");
    require(std::isfinite(units.mass) && units.mass > 0.0, "units: mass must be positive");
    std::visit(
        [](const auto& m) {
            using T = std::decay_t<decltype(m)>;
            if constexpr (std::is_same_v<T, HarmonicOscillator>) {
                require(m.n >= 0, "oscillator: n must be >= 0");
                require(std::isfinite(m.alpha) && m.alpha > 0.0, "oscillator: alpha must be positive");
            } else if constexpr (std::is_same_v<T, PlaneWave>) {
                require(std::isfinite(m.k), "plane wave: k must be finite");
                require(std::isfinite(m.amplitude) && m.amplitude > 0.0,
                        "plane wave: amplitude must be positive");
            } else if constexpr (std::is_same_v<T, PotentialStep>) {
                require(std::isfinite(m.energy) && std::isfinite(m.v0), "step: E, v0 must be finite");
                require(m.v0 > 0.0, "step: v0 must be positive");
                require(m.energy > m.v0, "step: E must exceed v0");
                require(std::isfinite(m.reflection) && m.reflection >= 0.0 && m.reflection < 1.0,
                        "step: R must lie in [0, 1)");
            } else {
                require(std::isfinite(m.sigma) && m.sigma > 0.0, "packet: sigma must be positive");
                require(std::isfinite(m.k_bar), "packet: k_bar must be finite");
            }
        },
        model);
}

bool is_stationary(const ModelSpec& model) {
    return !std::holds_alternative<GaussianPacket>(model);
}

bool is_normalizable(const ModelSpec& model) {
    return std::holds_alternative<HarmonicOscillator>(model) ||
           std::holds_alternative<GaussianPacket>(model);
}

double characteristic_frequency(const ModelSpec& model, const Units& units) {
    return std::visit(
        [&](const auto& m) -> double {
            using T = std::decay_t<decltype(m)>;
            if constexpr (std::is_same_v<T, HarmonicOscillator>) {
                return oscillator_frequency(m, units);
            } else if constexpr (std::is_same_v<T, PlaneWave>) {
                const double k = m.k != 0.0 ? m.k : 1.0;
                return units.hbar * k * k / units.mass;
            } else if constexpr (std::is_same_v<T, PotentialStep>) {
                const double k = m.wavenumber_in(units);
                return units.hbar * k * k / units.mass;
            } else {
                return units.hbar / (units.mass * m.sigma * m.sigma);
            }
        },
        model);
}

double length_scale(const ModelSpec& model, const Units& units) {
    return std::visit(
        [&](const auto& m) -> double {
            using T = std::decay_t<decltype(m)>;
            if constexpr (std::is_same_v<T, HarmonicOscillator>) {
                return 1.0 / m.alpha;
            } else if constexpr (std::is_same_v<T, PlaneWave>) {
                return m.k != 0.0 ? 1.0 / std::abs(m.k) : 1.0;
            } else if constexpr (std::is_same_v<T, PotentialStep>) {
                return 1.0 / m.wavenumber_in(units);
            } else {
                return m.sigma;
            }
        },
        model);
}

std::string model_name(const ModelSpec& model) {
    return std::visit(
        [](const auto& m) -> std::string {
            using T = std::decay_t<decltype(m)>;
            if constexpr (std::is_same_v<T, HarmonicOscillator>) return "harmonic_oscillator";
            else if constexpr (std::is_same_v<T, PlaneWave>) return "plane_wave";
            else if constexpr (std::is_same_v<T, PotentialStep>) return "potential_step";
            else return "gaussian_packet";
        },
        model);
}

double oscillator_frequency(const HarmonicOscillator& m, const Units& units) {
    return units.hbar * m.alpha * m.alpha / units.mass;
}

double oscillator_energy(const HarmonicOscillator& m, const Units& units) {
    return (m.n + 0.5) * units.hbar * oscillator_frequency(m, units);
}

}  // namespace cqtraj
