#include "cqtraj/trajectory.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>

#include "cqtraj/errors.hpp"

namespace cqtraj {

namespace {

constexpr Complex kI{0.0, 1.0};

// Dormand-Prince 5(4) tableau (FSAL).
constexpr double kC2 = 1.0 / 5.0, kC3 = 3.0 / 10.0, kC4 = 4.0 / 5.0, kC5 = 8.0 / 9.0;
constexpr double kA21 = 1.0 / 5.0;
constexpr double kA31 = 3.0 / 40.0, kA32 = 9.0 / 40.0;
constexpr double kA41 = 44.0 / 45.0, kA42 = -56.0 / 15.0, kA43 = 32.0 / 9.0;
constexpr double kA51 = 19372.0 / 6561.0, kA52 = -25360.0 / 2187.0, kA53 = 64448.0 / 6561.0,
                 kA54 = -212.0 / 729.0;
constexpr double kA61 = 9017.0 / 3168.0, kA62 = -355.0 / 33.0, kA63 = 46732.0 / 5247.0,
                 kA64 = 49.0 / 176.0, kA65 = -5103.0 / 18656.0;
constexpr double kB1 = 35.0 / 384.0, kB3 = 500.0 / 1113.0, kB4 = 125.0 / 192.0,
                 kB5 = -2187.0 / 6784.0, kB6 = 11.0 / 84.0;
constexpr double kE1 = 71.0 / 57600.0, kE3 = -71.0 / 16695.0, kE4 = 71.0 / 1920.0,
                 kE5 = -17253.0 / 339200.0, kE6 = 22.0 / 525.0, kE7 = -1.0 / 40.0;

struct Trial {
    bool singular = false;
    Complex x_new{};
    Complex f_new{};  // velocity at the step end (FSAL stage)
    double err_norm = 0.0;
};

int region_of(const ModelSpec& model, Complex x) {
    if (!std::holds_alternative<PotentialStep>(model)) return 0;
    return x.real() < 0.0 ? 1 : 2;
}

class Engine {
  public:
    Engine(const ModelSpec& model, const Units& units, const IntegratorConfig& cfg)
        : model_(model),
          units_(units),
          cfg_(cfg),
          lscale_(length_scale(model, units)),
          is_step_(std::holds_alternative<PotentialStep>(model)) {}

    bool is_step() const { return is_step_; }
    double length() const { return lscale_; }

    Complex f(double t, Complex x) const {
        return complex_velocity(model_, units_, x, t, cfg_.psi_floor).xdot;
    }

    // One embedded step of signed size hs from (t, x) with k1 already known.
    Trial attempt(double t, Complex x, Complex k1, double hs) const {
        Trial trial;
        try {
            const Complex k2 = f(t + kC2 * hs, x + hs * (kA21 * k1));
            const Complex k3 = f(t + kC3 * hs, x + hs * (kA31 * k1 + kA32 * k2));
            const Complex k4 = f(t + kC4 * hs, x + hs * (kA41 * k1 + kA42 * k2 + kA43 * k3));
            const Complex k5 =
                f(t + kC5 * hs, x + hs * (kA51 * k1 + kA52 * k2 + kA53 * k3 + kA54 * k4));
            const Complex k6 =
                f(t + hs, x + hs * (kA61 * k1 + kA62 * k2 + kA63 * k3 + kA64 * k4 + kA65 * k5));
            trial.x_new = x + hs * (kB1 * k1 + kB3 * k3 + kB4 * k4 + kB5 * k5 + kB6 * k6);
            trial.f_new = f(t + hs, trial.x_new);
            const Complex err = hs * (kE1 * k1 + kE3 * k3 + kE4 * k4 + kE5 * k5 + kE6 * k6 +
                                      kE7 * trial.f_new);
            const double sc =
                cfg_.abs_tol + cfg_.rel_tol * std::max(std::abs(x), std::abs(trial.x_new));
            trial.err_norm = std::abs(err) / sc;
        } catch (const NodeSingularityError&) {
            trial.singular = true;
        }
        return trial;
    }

  private:
    const ModelSpec& model_;
    const Units& units_;
    const IntegratorConfig& cfg_;
    double lscale_;
    bool is_step_;
};

double initial_step(Complex x, Complex fx, double span, const IntegratorConfig& cfg) {
    const double sc = cfg.abs_tol + cfg.rel_tol * std::abs(x);
    const double d0 = std::abs(x) / sc;
    const double d1 = std::abs(fx) / sc;
    double h0 = (d0 < 1e-5 || d1 < 1e-5) ? 1e-6 * span : 0.01 * d0 / d1;
    if (!std::isfinite(h0) || h0 <= 0.0) h0 = 1e-6 * span;
    return std::min(h0, span);
}

// Observer runs after each accepted point; returning true stops the run.
using Observer = std::function<bool(const Trajectory&)>;

Trajectory integrate_core(const ModelSpec& model, const Units& units, Complex x0, double t0,
                          double t1, const IntegratorConfig& cfg, const Observer& on_accept) {
    validate(model, units);
    Trajectory traj{model, units, {}, Termination::TimeReached, false};
    const Engine eng(model, units, cfg);
    const double dir = t1 >= t0 ? 1.0 : -1.0;
    const double span = std::abs(t1 - t0);

    double t = t0;
    Complex x = x0;
    Complex fx = eng.f(t, x);  // a start inside the node floor throws here
    traj.points.push_back({t, x, fx});

    // A path squeezing inside node_floor of a wavefunction zero is treated as
    // having hit the node: the velocity is ~1/node_floor and diverges underneath,
    // so the continuation onto the mirror branch is dominated by roundoff.
    const auto hits_node = [&](Complex xx, double tt) {
        return cfg.node_floor > 0.0 && near_node(model, units, xx, tt, cfg.node_floor);
    };
    if (hits_node(x, t)) {
        traj.termination = Termination::Singularity;
        return traj;
    }
    if (span == 0.0) return traj;

    const bool fixed = cfg.fixed_step > 0.0;
    const double h_floor = 1e-14 * span;
    double h = fixed ? cfg.fixed_step : initial_step(x, fx, span, cfg);
    if (cfg.max_step > 0.0) h = std::min(h, cfg.max_step);
    double err_prev = 1e-4;
    long steps = 0;
    int region = region_of(model, x);

    while (true) {
        if (steps++ >= cfg.max_steps) {
            traj.termination = Termination::MaxSteps;
            break;
        }
        const double remaining = std::abs(t1 - t);
        bool final_step = false;
        double h_try = fixed ? cfg.fixed_step : h;
        if (h_try >= remaining) {
            h_try = remaining;
            final_step = true;
        }

        Trial trial = eng.attempt(t, x, fx, dir * h_try);
        if (trial.singular) {
            h = 0.25 * h_try;
            if (fixed || h < h_floor) {
                traj.termination = Termination::Singularity;
                break;
            }
            continue;
        }
        if (!fixed && trial.err_norm > 1.0) {
            h = h_try * std::max(0.1, 0.9 * std::pow(trial.err_norm, -0.2));
            if (h < h_floor) {
                traj.termination = Termination::Singularity;
                break;
            }
            continue;
        }

        // Landing on the step boundary: bisect the sub-step size until the
        // first point past the sign change of Re(x) sits within 1e-12 of it.
        bool crossed = false;
        double h_used = h_try;
        if (eng.is_step() && region_of(model, trial.x_new) != region) {
            double lo = 0.0, hi = h_try;
            Trial best = trial;
            bool best_valid = true;
            for (int iter = 0; iter < 200; ++iter) {
                if (best_valid && std::abs(best.x_new.real()) <= 1e-12 * eng.length()) break;
                if (hi - lo <= 1e-15 * h_try) break;
                const double mid = 0.5 * (lo + hi);
                const Trial probe = eng.attempt(t, x, fx, dir * mid);
                if (probe.singular) {
                    hi = mid;
                    best_valid = false;
                } else if (region_of(model, probe.x_new) != region) {
                    hi = mid;
                    best = probe;
                    best_valid = true;
                } else {
                    lo = mid;
                }
            }
            if (!best_valid) {
                traj.termination = Termination::Singularity;
                break;
            }
            trial = best;
            h_used = hi;
            crossed = true;
            final_step = false;
        }

        t = final_step ? t1 : t + dir * h_used;
        x = trial.x_new;
        fx = trial.f_new;
        traj.points.push_back({t, x, fx});
        if (hits_node(x, t)) {
            traj.termination = Termination::Singularity;
            break;
        }
        if (crossed) {
            traj.crossed_step_boundary = true;
            region = region_of(model, x);
            if (cfg.stop_at_step_boundary) {
                traj.termination = Termination::StepBoundaryCrossed;
                break;
            }
        }
        if (on_accept && on_accept(traj)) break;
        if (final_step) {
            traj.termination = Termination::TimeReached;
            break;
        }
        if (!fixed) {
            const double en = std::max(trial.err_norm, 1e-10);
            const double fac = std::clamp(0.9 * std::pow(en, -0.17) * std::pow(err_prev, 0.04),
                                          0.2, 5.0);
            h = h_used * fac;
            if (cfg.max_step > 0.0) h = std::min(h, cfg.max_step);
            err_prev = en;
        }
    }
    return traj;
}

}  // namespace

const char* to_string(Termination term) {
    switch (term) {
        case Termination::TimeReached: return "TimeReached";
        case Termination::ClosedOrbit: return "ClosedOrbit";
        case Termination::Singularity: return "Singularity";
        case Termination::StepBoundaryCrossed: return "StepBoundaryCrossed";
        case Termination::MaxSteps: return "MaxSteps";
    }
    return "Unknown";
}

Complex Trajectory::sample(double t) const {
    if (points.empty()) throw std::logic_error("Trajectory::sample: no points");
    if (points.size() == 1) return points.front().x;
    const bool forward = points.back().t >= points.front().t;
    const auto before = [&](double a, double b) { return forward ? a < b : a > b; };
    if (!before(points.front().t, t)) return points.front().x;
    if (!before(t, points.back().t)) return points.back().x;

    std::size_t lo = 0, hi = points.size() - 1;
    while (hi - lo > 1) {
        const std::size_t mid = (lo + hi) / 2;
        if (before(t, points[mid].t)) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    const auto& a = points[lo];
    const auto& b = points[hi];
    const double h = b.t - a.t;
    if (h == 0.0) return a.x;
    const double s = (t - a.t) / h;
    const double h00 = (1.0 + 2.0 * s) * (1.0 - s) * (1.0 - s);
    const double h10 = s * (1.0 - s) * (1.0 - s);
    const double h01 = s * s * (3.0 - 2.0 * s);
    const double h11 = s * s * (s - 1.0);
    return h00 * a.x + h10 * h * a.xdot + h01 * b.x + h11 * h * b.xdot;
}

Trajectory integrate(const ModelSpec& model, const Units& units, Complex x0, double t0, double t1,
                     const IntegratorConfig& config) {
    return integrate_core(model, units, x0, t0, t1, config, nullptr);
}

Complex closed_form_position(const ModelSpec& model, const Units& units, Complex x0, double t) {
    validate(model, units);
    return std::visit(
        [&](const auto& m) -> Complex {
            using T = std::decay_t<decltype(m)>;
            if constexpr (std::is_same_v<T, HarmonicOscillator>) {
                const double omega = oscillator_frequency(m, units);
                if (m.n == 0) {
                    return x0 * std::exp(kI * (omega * t));
                }
                if (m.n == 1) {
                    // (alpha x)^2 - 1 = A exp(2 i omega t); follow the square
                    // root branch continuously from alpha x0.
                    const Complex u0 = m.alpha * x0;
                    const Complex a = u0 * u0 - 1.0;
                    Complex w_prev = 1.0 + a;  // = u0^2
                    if (std::abs(w_prev) < 1e-150) {
                        throw std::invalid_argument(
                            "closed_form_position: start is on a node of the n=1 state");
                    }
                    const double phi_total = 2.0 * omega * t;
                    const int pieces =
                        std::max(1, int(std::ceil(std::abs(phi_total) / (M_PI / 4.0))));
                    Complex u = u0;
                    for (int i = 1; i <= pieces; ++i) {
                        const Complex w =
                            1.0 + a * std::exp(kI * (phi_total * double(i) / pieces));
                        u *= std::sqrt(w / w_prev);
                        w_prev = w;
                    }
                    return u / m.alpha;
                }
                throw UnsupportedModelError(
                    "closed_form_position: no closed form for oscillator n >= 2");
            } else if constexpr (std::is_same_v<T, PlaneWave>) {
                return x0 + units.hbar * m.k / units.mass * t;
            } else if constexpr (std::is_same_v<T, PotentialStep>) {
                throw UnsupportedModelError("closed_form_position: no closed form for the step");
            } else {
                // xdot = (i hbar / m) (x - i sigma^2 k_bar) / sigma^2 at fixed
                // spatial argument integrates to a linear-in-t path.
                const double s2 = m.sigma * m.sigma;
                return x0 + units.hbar * m.k_bar / units.mass * t +
                       kI * (units.hbar / (units.mass * s2) * t) * x0;
            }
        },
        model);
}

PeriodResult detect_period(const ModelSpec& model, const Units& units, Complex x0,
                           const IntegratorConfig& config, double t_max) {
    validate(model, units);
    if (!is_stationary(model)) {
        throw NotStationaryError("detect_period: requires a stationary state");
    }
    const double omega = characteristic_frequency(model, units);
    const double horizon = t_max > 0.0 ? t_max : 400.0 / omega;
    const double lscale = length_scale(model, units);
    const double scale = std::max(std::abs(x0), lscale);
    const double r_leave = 0.1 * scale;
    const double eps_close = config.close_eps * scale;

    IntegratorConfig icfg = config;
    if (icfg.max_step <= 0.0) icfg.max_step = 2.0 * M_PI / omega / 256.0;

    const Complex v0 = complex_velocity(model, units, x0, 0.0, config.psi_floor).xdot;
    if (std::abs(v0) <= 1e-12 * omega * scale) {
        throw NotClosedError("detect_period: x0 is a stagnation point of the flow");
    }
    const Complex nhat = v0 / std::abs(v0);
    const auto section = [&](Complex x) { return (std::conj(nhat) * (x - x0)).real(); };

    bool outside = false;
    double found_t = -1.0;
    const auto observer = [&](const Trajectory& traj) -> bool {
        const auto& pb = traj.points.back();
        const auto& pa = traj.points[traj.points.size() - 2];
        const double dist_b = std::abs(pb.x - x0);
        if (!outside) {
            outside = dist_b > r_leave;
            return false;
        }
        const double dist_a = std::abs(pa.x - x0);
        if (std::min(dist_a, dist_b) >= r_leave) return false;
        const double ga = section(pa.x);
        const double gb = section(pb.x);
        if (!(ga < 0.0 && gb >= 0.0)) return false;
        // Refine the section crossing time on the dense output.
        double lo = pa.t, hi = pb.t;
        for (int iter = 0; iter < 100; ++iter) {
            const double mid = 0.5 * (lo + hi);
            if (section(traj.sample(mid)) < 0.0) {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        const double t_cross = 0.5 * (lo + hi);
        if (std::abs(traj.sample(t_cross) - x0) > eps_close) return false;  // a near miss
        found_t = t_cross;
        return true;
    };

    Trajectory run = integrate_core(model, units, x0, 0.0, horizon, icfg, observer);
    if (found_t <= 0.0) {
        throw NotClosedError(std::string("detect_period: no closure by t = ") +
                             std::to_string(horizon) + " (termination " +
                             to_string(run.termination) + ")");
    }

    PeriodResult result;
    result.period = found_t;
    result.orbit = Trajectory{model, units, {}, Termination::ClosedOrbit,
                              run.crossed_step_boundary};
    for (const auto& p : run.points) {
        if (p.t < found_t) result.orbit.points.push_back(p);
    }
    const Complex x_close = run.sample(found_t);
    const Complex v_close = complex_velocity(model, units, x_close, found_t, config.psi_floor).xdot;
    result.orbit.points.push_back({found_t, x_close, v_close});
    return result;
}

InvariantProbe invariant_value(const ModelSpec& model, const Units& units, Complex x) {
    return std::visit(
        [&](const auto& m) -> InvariantProbe {
            using T = std::decay_t<decltype(m)>;
            if constexpr (std::is_same_v<T, HarmonicOscillator>) {
                const Complex u = m.alpha * x;
                switch (m.n) {
                    case 0: return {InvariantKind::RadiusN0, std::abs(u)};
                    case 1: return {InvariantKind::NestValueN1, std::abs(u * u - 1.0)};
                    case 2:
                        return {InvariantKind::NestValueN2,
                                std::abs(4.0 * u * (u * u - 2.5) * (u * u - 2.5))};
                    default:
                        throw UnsupportedModelError(
                            "invariant_value: no closed-form invariant for oscillator n >= 3");
                }
            } else if constexpr (std::is_same_v<T, PotentialStep>) {
                if (x.real() >= 0.0) {
                    throw UnsupportedModelError(
                        "invariant_value: the step contour scalar lives in region I (Re x < 0)");
                }
                return {InvariantKind::StepContourC, step_contour_value(m, units, x)};
            } else {
                throw UnsupportedModelError("invariant_value: no scalar invariant for " +
                                            model_name(ModelSpec{m}));
            }
        },
        model);
}

double step_contour_value(const PotentialStep& model, const Units& units, Complex x) {
    const double k = model.wavenumber_in(units);
    const double r = model.reflection;
    return 2.0 * r * std::cos(2.0 * k * x.real()) - std::exp(-2.0 * k * x.imag()) -
           r * r * std::exp(2.0 * k * x.imag());
}

double step_contour_height(const PotentialStep& model, const Units& units, double c, bool upper) {
    if (c > 0.0) {
        throw std::invalid_argument("step_contour_height: the contour scalar is never positive");
    }
    const double k = model.wavenumber_in(units);
    const double r = model.reflection;
    // R^2 Y^2 - (2R - c) Y + 1 = 0, Y = exp(2 k x_i)
    const double b = 2.0 * r - c;
    const double disc = b * b - 4.0 * r * r;
    const double root = std::sqrt(std::max(disc, 0.0));
    const double y = upper ? (b + root) / (2.0 * r * r)
                           : 2.0 / (b + root);  // product of the roots is 1/R^2
    return std::log(y) / (2.0 * k);
}

Complex step_stagnation_point(const PotentialStep& model, const Units& units) {
    const double k = model.wavenumber_in(units);
    return Complex{0.0, std::log(1.0 / model.reflection) / (2.0 * k)};
}

}  // namespace cqtraj
