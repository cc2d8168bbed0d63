#include <doctest.h>

#include <cmath>
#include <complex>
#include <random>
#include <vector>

#include "cqtraj/errors.hpp"
#include "cqtraj/trajectory.hpp"
#include "cqtraj/velocity.hpp"
#include "test_support.hpp"

using namespace cqtraj;

namespace {
constexpr double kPi = 3.14159265358979323846;
constexpr double kTwoPi = 2.0 * kPi;

IntegratorConfig tight(double max_step = 0.0) {
    IntegratorConfig cfg;
    cfg.rel_tol = 1e-10;
    cfg.abs_tol = 1e-13;
    cfg.max_step = max_step;
    return cfg;
}
}  // namespace

TEST_CASE("ground-state orbit is a circle that closes after 2 pi / omega") {
    const Units units;
    const ModelSpec model = HarmonicOscillator{0, 1.0};
    const Trajectory traj = integrate(model, units, Complex{2.0, 0.0}, 0.0, kTwoPi,
                                      IntegratorConfig{});
    REQUIRE(traj.termination == Termination::TimeReached);
    CHECK(std::abs(traj.points.back().x - Complex{2.0, 0.0}) <= 1e-6);
    for (const auto& p : traj.points) {
        CHECK(std::abs(std::abs(p.x) - 2.0) <= 1e-6);
    }
    CHECK(std::abs(traj.sample(kPi) - Complex{-2.0, 0.0}) <= 1e-6);
}

TEST_CASE("numerical paths agree with closed forms") {
    const Units units;
    struct Case {
        ModelSpec model;
        Complex x0;
        double t1;
    };
    const std::vector<Case> cases = {
        {HarmonicOscillator{0, 1.0}, Complex{2.0, 0.0}, 10.0},
        {HarmonicOscillator{1, 1.0}, Complex{1.55, 0.0}, 10.0},   // outer nest
        {HarmonicOscillator{1, 1.0}, Complex{0.5, 0.0}, 6.0},     // inner nest
        {PlaneWave{1.3, 1.0}, Complex{0.0, 0.3}, 10.0},
        {GaussianPacket{1.0, 1.0}, Complex{1.0, 1.0}, 2.0},
    };
    for (const auto& c : cases) {
        const double scale = std::max(1.0, std::abs(c.x0));
        const Trajectory traj = integrate(c.model, units, c.x0, 0.0, c.t1, tight());
        REQUIRE(traj.termination == Termination::TimeReached);
        for (const auto& p : traj.points) {
            const Complex want = closed_form_position(c.model, units, c.x0, p.t);
            CHECK(std::abs(p.x - want) <= 1e-7 * scale);
        }
    }
}

TEST_CASE("closed-form packet path: x = i sigma^2 kbar is a fixed point") {
    const Units units;
    const ModelSpec packet = GaussianPacket{1.0, 1.0};
    CHECK(std::abs(closed_form_position(packet, units, Complex{0.0, 1.0}, 0.5) -
                   Complex{0.0, 1.0}) <= 1e-14);
    // generic seed: x(t) = x0 + (hbar kbar/m) t + i (hbar/(m sigma^2)) x0 t
    CHECK(std::abs(closed_form_position(packet, units, Complex{1.0, 0.0}, 0.5) -
                   Complex{1.5, 0.5}) <= 1e-14);
    CHECK(std::abs(closed_form_position(packet, units, Complex{1.0, 1.0}, 0.5) -
                   Complex{1.0, 1.5}) <= 1e-14);

    const Trajectory traj = integrate(packet, units, Complex{0.0, 1.0}, 0.0, 2.0, tight());
    for (const auto& p : traj.points) {
        CHECK(std::abs(p.x - Complex{0.0, 1.0}) <= 1e-9);
    }
}

TEST_CASE("closed forms are refused where no closed form exists") {
    const Units units;
    CHECK_THROWS_AS(closed_form_position(HarmonicOscillator{2, 1.0}, units,
                                         Complex{2.0, 0.0}, 1.0),
                    UnsupportedModelError);
    CHECK_THROWS_AS(closed_form_position(make_step(2.0, 1.0), units,
                                         Complex{-1.0, 0.3}, 1.0),
                    UnsupportedModelError);
}

TEST_CASE("backward integration follows the same circle") {
    const Units units;
    const ModelSpec model = HarmonicOscillator{0, 1.0};
    const Trajectory traj = integrate(model, units, Complex{2.0, 0.0}, 0.0, -kPi, tight());
    REQUIRE(traj.termination == Termination::TimeReached);
    CHECK(std::abs(traj.points.back().x - Complex{-2.0, 0.0}) <= 1e-7);
}

TEST_CASE("time-reversal consistency on a first-excited nest") {
    const Units units;
    const ModelSpec model = HarmonicOscillator{1, 1.0};
    const Complex x0{1.35, 0.0};
    const Trajectory fwd = integrate(model, units, x0, 0.0, kPi, tight());
    REQUIRE(fwd.termination == Termination::TimeReached);
    const Trajectory bwd = integrate(model, units, fwd.points.back().x, kPi, 0.0, tight());
    REQUIRE(bwd.termination == Termination::TimeReached);
    CHECK(std::abs(bwd.points.back().x - x0) <= 1e-7);
}

TEST_CASE("dense output matches the analytic circle between accepted steps") {
    const Units units;
    const ModelSpec model = HarmonicOscillator{0, 1.0};
    const Trajectory traj = integrate(model, units, Complex{2.0, 0.0}, 0.0, kTwoPi, tight());
    std::mt19937 rng(11);
    std::uniform_real_distribution<double> ts(0.0, kTwoPi);
    for (int i = 0; i < 100; ++i) {
        const double t = ts(rng);
        const Complex want = 2.0 * std::exp(Complex{0.0, t});
        CHECK(std::abs(traj.sample(t) - want) <= 1e-7);
    }
    // endpoints are reproduced exactly
    CHECK(traj.sample(0.0) == traj.points.front().x);
    CHECK(traj.sample(kTwoPi) == traj.points.back().x);
}

TEST_CASE("fixed-step convergence order is at least four") {
    const Units units;
    const ModelSpec model = HarmonicOscillator{0, 1.0};
    auto end_error = [&](double h) {
        IntegratorConfig cfg;
        cfg.fixed_step = h;
        const Trajectory traj = integrate(model, units, Complex{2.0, 0.0}, 0.0, kTwoPi, cfg);
        return std::abs(traj.points.back().x - Complex{2.0, 0.0});
    };
    const double e1 = end_error(kTwoPi / 40.0);
    const double e2 = end_error(kTwoPi / 80.0);
    REQUIRE(e1 > 1e-13);  // errors must sit above the rounding floor
    REQUIRE(e2 > 1e-15);
    const double order = std::log2(e1 / e2);
    CHECK(order >= 4.0);
    CHECK(order <= 7.0);
}

TEST_CASE("max step count aborts cleanly") {
    const Units units;
    IntegratorConfig cfg;
    cfg.max_steps = 5;
    const Trajectory traj = integrate(HarmonicOscillator{0, 1.0}, units, Complex{2.0, 0.0},
                                      0.0, 100.0, cfg);
    CHECK(traj.termination == Termination::MaxSteps);
    CHECK(traj.points.size() <= 7);
}

TEST_CASE("separatrix start runs into the node and aborts as a singularity") {
    const Units units;
    const ModelSpec model = HarmonicOscillator{1, 1.0};
    // |x0^2 - 1| = 1 puts the path on the separatrix through the node at the origin,
    // which it reaches at t = pi/2.
    const Trajectory traj = integrate(model, units, Complex{std::sqrt(2.0), 0.0}, 0.0, 3.0,
                                      IntegratorConfig{});
    REQUIRE(traj.termination == Termination::Singularity);
    const double t_end = traj.points.back().t;
    CHECK(t_end > kPi / 2.0 - 0.05);
    CHECK(t_end < kPi / 2.0 + 1e-6);

    // A seed already inside the node-passage radius is singular from the start.
    const Trajectory at_node = integrate(model, units, Complex{1e-6, 0.0}, 0.0, 1.0,
                                         IntegratorConfig{});
    CHECK(at_node.termination == Termination::Singularity);
    CHECK(at_node.points.size() == 1);

    // Disabling the passage radius lets the integrator thread the near-miss
    // (a floating-point seed is never exactly on the separatrix) and carry on.
    IntegratorConfig loose;
    loose.node_floor = 0.0;
    const Trajectory threaded = integrate(model, units, Complex{std::sqrt(2.0), 0.0}, 0.0, 3.0,
                                          loose);
    CHECK(threaded.termination == Termination::TimeReached);
}

TEST_CASE("detected periods match the level structure") {
    const Units units;
    auto cfg = tight();

    // ground state: every orbit closes after 2 pi / omega
    const PeriodResult p0 = detect_period(HarmonicOscillator{0, 1.0}, units,
                                          Complex{2.0, 0.0}, cfg);
    CHECK(p0.period == doctest::Approx(kTwoPi).epsilon(1e-8));
    CHECK(p0.orbit.termination == Termination::ClosedOrbit);
    CHECK(std::abs(p0.orbit.points.back().x - Complex{2.0, 0.0}) <= 1e-6 * 2.0);

    // first excited state: outer nests take a full 2 pi, inner nests close in pi
    const PeriodResult p1 = detect_period(HarmonicOscillator{1, 1.0}, units,
                                          Complex{1.55, 0.0}, cfg);
    CHECK(p1.period == doctest::Approx(kTwoPi).epsilon(1e-8));
    const PeriodResult p1s = detect_period(HarmonicOscillator{1, 1.0}, units,
                                           Complex{0.5, 0.0}, cfg);
    CHECK(p1s.period == doctest::Approx(kPi).epsilon(1e-8));

    // second excited state: the sub-nest around u = sqrt(5/2) closes in 4 pi / 5
    const PeriodResult p2s = detect_period(HarmonicOscillator{2, 1.0}, units,
                                           Complex{1.8, 0.0}, cfg);
    CHECK(p2s.period == doctest::Approx(4.0 * kPi / 5.0).epsilon(1e-7));
    const PeriodResult p2 = detect_period(HarmonicOscillator{2, 1.0}, units,
                                          Complex{2.0, 0.0}, cfg);
    CHECK(p2.period == doctest::Approx(kTwoPi).epsilon(1e-7));
}

TEST_CASE("inner-nest geometry: real-axis turning points") {
    const Units units;
    const PeriodResult pr = detect_period(HarmonicOscillator{1, 1.0}, units,
                                          Complex{0.5, 0.0}, tight());
    // |u^2 - 1| = 0.75 crosses the real axis at u = 0.5 and u = sqrt(1.75).
    // Sample densely: accepted points alone straddle the turning instant.
    double max_re = 0.0;
    const double t_end = pr.orbit.points.back().t;
    for (int i = 0; i <= 4096; ++i) {
        const double t = t_end * i / 4096.0;
        max_re = std::max(max_re, pr.orbit.sample(t).real());
    }
    CHECK(max_re == doctest::Approx(std::sqrt(1.75)).epsilon(1e-5));
}

TEST_CASE("period detection failure modes") {
    const Units units;
    // plane-wave paths never return
    CHECK_THROWS_AS(detect_period(PlaneWave{1.0, 1.0}, units, Complex{0.0, 0.3},
                                  IntegratorConfig{}, 30.0),
                    NotClosedError);
    // a stagnation point never leaves
    CHECK_THROWS_AS(detect_period(HarmonicOscillator{1, 1.0}, units, Complex{1.0, 0.0},
                                  IntegratorConfig{}, 30.0),
                    NotClosedError);
    // the packet flow is not stationary, so period detection is refused
    CHECK_THROWS_AS(detect_period(GaussianPacket{1.0, 1.0}, units, Complex{1.0, 0.0},
                                  IntegratorConfig{}, 30.0),
                    NotStationaryError);
}

TEST_CASE("orbit invariants: frozen values") {
    const Units units;
    const InvariantProbe i0 = invariant_value(HarmonicOscillator{0, 1.0}, units,
                                              Complex{2.0, 0.0});
    CHECK(i0.kind == InvariantKind::RadiusN0);
    CHECK(i0.value == doctest::Approx(2.0).epsilon(1e-14));

    const InvariantProbe i1 = invariant_value(HarmonicOscillator{1, 1.0}, units,
                                              Complex{1.55, 0.0});
    CHECK(i1.kind == InvariantKind::NestValueN1);
    CHECK(i1.value == doctest::Approx(1.4025).epsilon(1e-14));

    const InvariantProbe i2 = invariant_value(HarmonicOscillator{2, 1.0}, units,
                                              Complex{2.0, 0.0});
    CHECK(i2.kind == InvariantKind::NestValueN2);
    CHECK(i2.value == doctest::Approx(18.0).epsilon(1e-14));

    CHECK_THROWS_AS(invariant_value(HarmonicOscillator{3, 1.0}, units, Complex{2.0, 0.0}),
                    UnsupportedModelError);
    CHECK_THROWS_AS(invariant_value(PlaneWave{1.0, 1.0}, units, Complex{1.0, 0.0}),
                    UnsupportedModelError);
}

TEST_CASE("orbit invariants are conserved along integrated paths") {
    const Units units;
    struct Case {
        ModelSpec model;
        Complex x0;
    };
    const std::vector<Case> cases = {
        {HarmonicOscillator{0, 1.0}, Complex{1.5, 0.0}},
        {HarmonicOscillator{1, 1.0}, Complex{1.35, 0.0}},
        {HarmonicOscillator{2, 1.0}, Complex{2.05, 0.0}},
    };
    for (const auto& c : cases) {
        const double ref = invariant_value(c.model, units, c.x0).value;
        const Trajectory traj = integrate(c.model, units, c.x0, 0.0, 10.0,
                                          tight(kTwoPi / 256.0));
        REQUIRE(traj.termination == Termination::TimeReached);
        for (const auto& p : traj.points) {
            const double v = invariant_value(c.model, units, p.x).value;
            CHECK(std::abs(v - ref) <= 1e-6 * ref);
        }
    }
}

TEST_CASE("step flow: conserved contour scalar, stagnation point, closed-loop period") {
    const Units units;
    // E = 1/2 and V0 = 6 sqrt(2) - 8 give k = 1, q = 3 - 2 sqrt(2), R = 1/sqrt(2)
    const PotentialStep step = make_step(0.5, 6.0 * std::sqrt(2.0) - 8.0);
    CHECK(step.wavenumber_in(units) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(step.reflection == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-13));
    const ModelSpec model = step;

    const Complex stag = step_stagnation_point(step, units);
    CHECK(std::abs(stag.real()) <= 1e-14);
    CHECK(stag.imag() == doctest::Approx(std::log(2.0) / 4.0).epsilon(1e-13));
    CHECK(std::abs(step_contour_value(step, units, stag)) <= 1e-12);

    // the incident-side limit at the stagnation point has zero velocity
    const VelocitySample vs = complex_velocity(model, units,
                                               Complex{-1e-300, stag.imag()}, 0.0);
    CHECK(std::abs(vs.xdot) <= 1e-12);

    // seed heights reproduce their contour level exactly
    for (double c : {-4.0, -3.0, -2.0, -1.0}) {
        const double xi = step_contour_height(step, units, c, true);
        CHECK(step_contour_value(step, units, Complex{-kPi, xi}) ==
              doctest::Approx(c).epsilon(1e-12));
    }

    // closed loops around a stagnation point all share the period 2 pi / omega_k
    const double xi_top = step_contour_height(step, units, -1.0, true);
    const PeriodResult pr = detect_period(model, units, Complex{-kPi, xi_top}, tight());
    CHECK(pr.period == doctest::Approx(kTwoPi).epsilon(1e-7));

    // the contour scalar is conserved along the loop
    for (const auto& p : pr.orbit.points) {
        CHECK(std::abs(step_contour_value(step, units, p.x) - (-1.0)) <= 1e-6);
    }

    // the conserved scalar is an incident-region notion
    CHECK_THROWS_AS(invariant_value(model, units, Complex{0.5, 0.0}),
                    UnsupportedModelError);
    CHECK_THROWS_AS(step_contour_height(step, units, 1.0, true), std::invalid_argument);
}

TEST_CASE("step flow: paths that reach the interface cross it cleanly") {
    const Units units;
    const PotentialStep step = make_step(0.5, 6.0 * std::sqrt(2.0) - 8.0);
    const ModelSpec model = step;
    const double q = step.wavenumber_out(units);
    const Complex x0{-0.5, 0.2};  // on a loop around the stagnation point at x_r = 0

    SUBCASE("default: continue into the transmitted region") {
        const Trajectory traj = integrate(model, units, x0, 0.0, 10.0, tight());
        REQUIRE(traj.termination == Termination::TimeReached);
        CHECK(traj.crossed_step_boundary);
        CHECK(traj.points.back().x.real() > 0.0);
        // transmitted flow is uniform: xdot = hbar q / m
        CHECK(std::abs(traj.points.back().xdot - Complex{q, 0.0}) <= 1e-10);
        // the height at which the path crossed is preserved downstream
        const double xi_end = traj.points.back().x.imag();
        for (const auto& p : traj.points) {
            if (p.x.real() > 1e-6) CHECK(p.x.imag() == doctest::Approx(xi_end).epsilon(1e-9));
        }
    }

    SUBCASE("opt-in: stop on the interface") {
        IntegratorConfig cfg = tight();
        cfg.stop_at_step_boundary = true;
        const Trajectory traj = integrate(model, units, x0, 0.0, 10.0, cfg);
        REQUIRE(traj.termination == Termination::StepBoundaryCrossed);
        CHECK(traj.crossed_step_boundary);
        CHECK(std::abs(traj.points.back().x.real()) <= 1e-9);
        CHECK(traj.points.back().t < 10.0);
    }
}
