"""Smoke tests for the Python bindings: one thin check per exposed area."""

import math

import pytest

import cqtraj


TWO_PI = 2.0 * math.pi


def test_version_string():
    assert isinstance(cqtraj.__version__, str) and cqtraj.__version__


def test_hermite_value():
    assert cqtraj.hermite(2, 1.0) == pytest.approx(2.0)  # 4u^2 - 2 at u = 1


def test_ground_state_velocity_is_rotation():
    units = cqtraj.Units()
    model = cqtraj.HarmonicOscillator(0, 1.0)
    v = cqtraj.complex_velocity(model, units, 2.0 + 0.0j, 0.0)
    assert v.xdot == pytest.approx(2.0j, abs=1e-12)
    assert v.xdot_r == pytest.approx(0.0, abs=1e-12)


def test_circle_closes():
    units = cqtraj.Units()
    model = cqtraj.HarmonicOscillator(0, 1.0)
    traj = cqtraj.integrate(model, units, 2.0 + 0.0j, 0.0, TWO_PI)
    assert traj.termination == cqtraj.Termination.TimeReached
    assert abs(traj.points[-1].x - 2.0) < 1e-6


def test_action_quantization_on_outer_nest():
    units = cqtraj.Units()
    model = cqtraj.HarmonicOscillator(1, 1.0)
    cfg = cqtraj.IntegratorConfig()
    cfg.rel_tol = 1e-10
    cfg.abs_tol = 1e-13
    cfg.max_step = TWO_PI / 256.0
    pr = cqtraj.detect_period(model, units, 1.55 + 0.0j, cfg)
    assert pr.period == pytest.approx(TWO_PI, rel=1e-6)
    oa = cqtraj.action_of_orbit(model, units, pr.orbit)
    assert oa.action / TWO_PI == pytest.approx(1.0, abs=1e-6)
    assert oa.winding == 1


def test_expectation_report():
    units = cqtraj.Units()
    rep = cqtraj.expectation_report(cqtraj.GaussianPacket(1.0, 1.0), units, 0.0)
    assert rep.norm == pytest.approx(1.0, abs=1e-8)
    assert rep.mean_p == pytest.approx(1.0, abs=1e-8)
    assert rep.mean_E == pytest.approx(0.75, abs=1e-8)


def test_errors_are_typed():
    units = cqtraj.Units()
    with pytest.raises(cqtraj.NonNormalizable):
        cqtraj.expectation_report(cqtraj.PlaneWave(1.0, 1.0), units, 0.0)
    with pytest.raises(cqtraj.NodeSingularity):
        cqtraj.complex_velocity(
            cqtraj.HarmonicOscillator(1, 1.0), units, 1e-14 + 0.0j, 0.0
        )
