#include <doctest.h>

#include <cmath>
#include <complex>

#include "cqtraj/errors.hpp"
#include "cqtraj/observables.hpp"

using namespace cqtraj;

TEST_CASE("oscillator eigenstates: norm, symmetry, and spectrum") {
    const Units units;
    for (int n = 0; n <= 3; ++n) {
        const ExpectationReport rep = expectation_report(HarmonicOscillator{n, 1.0}, units, 0.0);
        CHECK(rep.norm == doctest::Approx(1.0).epsilon(1e-9));
        CHECK(std::abs(rep.mean_x) <= 1e-9);
        CHECK(std::abs(rep.mean_p) <= 1e-9);
        CHECK(rep.mean_E == doctest::Approx(n + 0.5).epsilon(1e-8));
        CHECK(rep.max_imag_residual <= 1e-9);
    }
}

TEST_CASE("oscillator spectrum scales with non-default units") {
    const Units units{2.0, 1.3};  // hbar = 2, m = 1.3
    const double alpha = 0.7;
    const double omega = units.hbar * alpha * alpha / units.mass;
    const ExpectationReport rep =
        expectation_report(HarmonicOscillator{1, alpha}, units, 0.0);
    CHECK(rep.norm == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(rep.mean_E == doctest::Approx(1.5 * units.hbar * omega).epsilon(1e-8));
}

TEST_CASE("wave packet: norm, drift, momentum, and energy") {
    const Units units;
    const GaussianPacket packet{1.0, 1.0};

    const ExpectationReport r0 = expectation_report(packet, units, 0.0);
    CHECK(r0.norm == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(std::abs(r0.mean_x) <= 1e-9);
    CHECK(r0.mean_p == doctest::Approx(1.0).epsilon(1e-9));
    // <E> = (hbar^2/2m)(kbar^2 + 1/(2 sigma^2)) = 0.75 in these units
    CHECK(r0.mean_E == doctest::Approx(0.75).epsilon(1e-9));

    for (double t : {1.0, 5.0}) {
        const ExpectationReport rt = expectation_report(packet, units, t);
        CHECK(rt.norm == doctest::Approx(1.0).epsilon(1e-8));
        CHECK(rt.mean_x == doctest::Approx(t).epsilon(1e-7));  // group velocity 1
        CHECK(rt.mean_p == doctest::Approx(1.0).epsilon(1e-8));
        CHECK(rt.mean_E == doctest::Approx(0.75).epsilon(1e-8));
        CHECK(rt.max_imag_residual <= 1e-8);
    }
}

TEST_CASE("mean position drifts at the mean momentum over mass") {
    const Units units{1.0, 2.0};  // m = 2 slows the drift
    const GaussianPacket packet{1.0, 1.0};
    const double delta = 1e-3;
    const double t = 0.7;
    const ExpectationReport plus = expectation_report(packet, units, t + delta);
    const ExpectationReport minus = expectation_report(packet, units, t - delta);
    const ExpectationReport mid = expectation_report(packet, units, t);
    const double drift = (plus.mean_x - minus.mean_x) / (2.0 * delta);
    CHECK(drift == doctest::Approx(mid.mean_p / units.mass).epsilon(1e-5));
}

TEST_CASE("results are stable against truncation window and tolerance") {
    const Units units;
    const GaussianPacket packet{1.0, 1.0};
    const ExpectationReport base = expectation_report(packet, units, 1.0);
    const ExpectationReport wide =
        expectation_report(packet, units, 1.0, 1e-10, 1.5 * base.truncation_L);
    CHECK(wide.mean_E == doctest::Approx(base.mean_E).epsilon(1e-9));
    CHECK(wide.norm == doctest::Approx(base.norm).epsilon(1e-9));
    const ExpectationReport loose = expectation_report(packet, units, 1.0, 1e-8);
    CHECK(loose.mean_E == doctest::Approx(base.mean_E).epsilon(1e-6));
}

TEST_CASE("single-observable accessor matches the full report") {
    const Units units;
    const HarmonicOscillator ho{2, 1.0};
    const ExpectationReport rep = expectation_report(ho, units, 0.0);
    CHECK(expectation(ho, units, 0.0, Observable::Norm) ==
          doctest::Approx(rep.norm).epsilon(1e-12));
    CHECK(expectation(ho, units, 0.0, Observable::E) ==
          doctest::Approx(rep.mean_E).epsilon(1e-12));
}

TEST_CASE("scattering states have no normalizable expectation values") {
    const Units units;
    CHECK_THROWS_AS(expectation_report(PlaneWave{1.0, 1.0}, units, 0.0),
                    NonNormalizableError);
    CHECK_THROWS_AS(expectation_report(make_step(2.0, 1.0), units, 0.0),
                    NonNormalizableError);
}
