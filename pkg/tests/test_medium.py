import math
from dataclasses import replace

import numpy as np
import pytest

from gainslab.errors import DomainError, InvalidInputError
from gainslab.medium import (
    GainProfile,
    PumpScheme,
    dimensionless_state,
    physical_gain,
    profile_f,
)


def test_construction_rejects_bad_parameters(sample):
    with pytest.raises(InvalidInputError):
        replace(sample, n0=0.9)
    with pytest.raises(InvalidInputError):
        replace(sample, lambda0=-1.0)
    with pytest.raises(InvalidInputError):
        replace(sample, nu=-0.1)
    with pytest.raises(InvalidInputError):
        replace(sample, g_star=250.0)  # above the inversion ceiling
    with pytest.raises(InvalidInputError):
        replace(sample, alpha0=float("nan"))


def test_negative_gain_allowed_for_scans(sample):
    lossy = replace(sample, g_star=-120.0)
    assert lossy.g_hat == pytest.approx(-0.6)


def test_physical_gain_boundary_values(sample, sample_single):
    half = sample.L / 2
    # double pump: both faces at exactly g*
    assert physical_gain(sample, -half) == sample.g_star
    assert physical_gain(sample, half) == sample.g_star
    # single pump: entry face only
    assert physical_gain(sample_single, -half) == sample_single.g_star
    assert physical_gain(sample_single, half) < sample_single.g_star


def test_physical_gain_uniform_limit(sample):
    for pump in (PumpScheme.SINGLE, PumpScheme.DOUBLE):
        medium = replace(sample, pump=pump, nu=0.0)
        for z in np.linspace(-medium.L / 2, medium.L / 2, 7):
            assert physical_gain(medium, z) == medium.g_star


def test_physical_gain_outside_slab(sample):
    with pytest.raises(DomainError):
        physical_gain(sample, sample.L)


def test_gain_maximum_sits_at_pumped_face(sample):
    zs = np.linspace(-sample.L / 2, sample.L / 2, 1001)
    for pump in (PumpScheme.SINGLE, PumpScheme.DOUBLE):
        for nu in (0.0, 0.3, 1.0, 3.0):
            medium = replace(sample, pump=pump, nu=nu)
            values = [physical_gain(medium, z) for z in zs]
            assert max(values) <= medium.g_star + 1e-12
            assert values[0] == pytest.approx(medium.g_star, abs=1e-12)


def test_profile_trivial_values():
    double = GainProfile(PumpScheme.DOUBLE, 0.7)
    assert double.f(0.0) == 0.0
    assert double.f(1.0) == 0.0
    assert double.f(0.5) == pytest.approx(1.0 / math.cosh(0.35) - 1.0, rel=1e-15)

    single = GainProfile(PumpScheme.SINGLE, 1.0)
    assert single.f(0.0) == 0.0
    assert single.f(1.0) == pytest.approx(-0.6321206, abs=1e-7)

    for profile in (GainProfile(PumpScheme.DOUBLE, 0.0), GainProfile(PumpScheme.UNIFORM, 2.0)):
        z = np.linspace(0, 1, 11)
        assert np.all(profile.f(z) == 0.0)
        assert np.all(profile.df(z) == 0.0)


def test_profile_f_operation_and_domain():
    profile = GainProfile(PumpScheme.SINGLE, 2.0)
    f, df = profile_f(profile, 0.25)
    assert f == pytest.approx(math.exp(-0.5) - 1.0, rel=1e-15)
    assert df == pytest.approx(-2.0 * math.exp(-0.5), rel=1e-15)
    with pytest.raises(DomainError):
        profile_f(profile, 1.2)
    with pytest.raises(DomainError):
        profile.d2f(-0.1)


def test_double_profile_symmetric_about_center():
    rng = np.random.default_rng(42)
    z = rng.uniform(0.0, 1.0, size=1000)
    for nu in (0.05, 0.5, 2.0):
        profile = GainProfile(PumpScheme.DOUBLE, nu)
        np.testing.assert_allclose(profile.f(z), profile.f(1.0 - z), rtol=0, atol=1e-15)


def test_profile_derivatives_match_finite_differences():
    h = 1e-6
    for profile in (GainProfile(PumpScheme.DOUBLE, 0.8), GainProfile(PumpScheme.SINGLE, 0.8)):
        for z in (0.2, 0.5, 0.9):
            fd = (profile.f(z + h) - profile.f(z - h)) / (2 * h)
            assert profile.df(z) == pytest.approx(fd, rel=1e-8)
            fd2 = (profile.df(z + h) - profile.df(z - h)) / (2 * h)
            assert profile.d2f(z) == pytest.approx(fd2, rel=1e-8)


def test_dimensionless_state_sample_values(sample):
    state = dimensionless_state(sample, 1.0)
    # resonance wave number 2 pi L / lambda0
    assert state.K == pytest.approx(1256.637, abs=5e-4)
    # at resonance the response is purely imaginary
    assert state.t_hat.real == 0.0
    assert state.t_hat == pytest.approx(1j * sample.lambda0 * sample.alpha0_nm
                                        / (2 * math.pi * sample.n0), rel=1e-14)
    # published smallness bounds for the sample medium
    assert abs(state.s) < 1.8e-3
    assert abs(state.t_hat) < 1.8e-3
    assert abs(state.r - sample.n0) < 6.0e-4


def test_dimensionless_state_round_trip(sample):
    rng = np.random.default_rng(7)
    for _ in range(50):
        omega = rng.uniform(0.9, 1.1)
        g_star = rng.uniform(-100.0, 200.0)
        state = dimensionless_state(sample, omega, g_star=g_star)
        r_back = np.sqrt(1.0 - state.z1 / state.K**2)
        s_back = state.z2 / (state.K**2 - state.z1)
        assert abs(r_back - state.r) <= 1e-12 * abs(state.r)
        assert abs(s_back - state.s) <= 1e-12 * max(abs(state.s), 1e-30)


def test_dimensionless_state_rejects_bad_frequency(sample):
    with pytest.raises(InvalidInputError):
        dimensionless_state(sample, 0.0)
    with pytest.raises(InvalidInputError):
        dimensionless_state(sample, float("nan"))


def test_internal_units_are_consistent(sample):
    assert sample.L_nm == 300_000.0
    assert sample.alpha0_nm == pytest.approx(2e-5, rel=1e-15)
    # lambda0 * alpha0 is dimensionless in any consistent unit system
    assert sample.lambda0 * sample.alpha0_nm == pytest.approx(0.03, rel=1e-14)
    assert sample.K0 == pytest.approx(400.0 * math.pi, rel=1e-15)
