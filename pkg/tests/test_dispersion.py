import math

import numpy as np
import pytest

import cmwave as cw
from cmwave.dispersion import attenuation, curve, dispersion, phase_speed
from cmwave.wavenumber import (
    MeasureMedium,
    attenuation_from_wavenumber,
    dispersion_from_wavenumber,
)

TAU = 1e-13


def test_finite_band_attenuation_exact(finite_band):
    for w in np.logspace(-3, 3, 30):
        exact = w * (math.atan(2.0 / w) - math.atan(1.0 / w))
        assert attenuation(finite_band, w) == pytest.approx(exact, rel=1e-10)


def test_zero_measure():
    z = cw.zero_measure()
    assert attenuation(z, 10.0) == 0.0
    assert dispersion(z, 10.0) == 0.0


def test_powerlaw_attenuation_constant(power_law_half):
    a_coef = 0.5 * math.pi / (2 * math.sin(math.pi / 4))
    for w in np.logspace(-4, 4, 9):
        assert attenuation(power_law_half, w) / math.sqrt(w) == pytest.approx(
            a_coef, rel=1e-10)


def test_finite_band_dispersion_low_frequency(finite_band):
    w = 1e-5
    assert dispersion(finite_band, w) / w == pytest.approx(math.log(2.0),
                                                           rel=1e-8)


def test_cc_dispersion_over_omega_tends_to_D(cc):
    meas = cw.spectral_measure(cc)
    # D(w)/w increases to D as w -> 0, at the (tau w)^alpha rate
    w = 1e-6 / cc.tau
    d_w = dispersion(meas, w) / w
    d_const = cw.measure_D_constant(meas)
    assert d_w < d_const
    assert d_w == pytest.approx(d_const, rel=1e-3)


def test_phase_speed_elastic_limit():
    medium = MeasureMedium(cw.zero_measure(), c_inf=5000.0)
    assert phase_speed(medium, 1.0) == pytest.approx(5000.0, rel=1e-14)


def test_phase_speed_limits(cc):
    assert phase_speed(cc, 1e4 / cc.tau) == pytest.approx(cc.c_inf, rel=5e-3)
    assert phase_speed(cc, 1e-4 / cc.tau) == pytest.approx(cc.c0, rel=5e-3)
    assert phase_speed(cc, 1e-6 / cc.tau) == pytest.approx(cc.c0, rel=1e-3)


def test_phase_speed_requires_positive_omega(cc):
    with pytest.raises(ValueError):
        phase_speed(cc, 0.0)


def test_curve_single_point(cc):
    c = curve(cc, np.array([1.0 / cc.tau]))
    assert len(c.omega) == 1
    assert c.c0 == pytest.approx(cc.c0, rel=1e-14)


def test_curve_grid_validation(cc):
    with pytest.raises(ValueError):
        curve(cc, np.array([2.0, 1.0]))
    with pytest.raises(ValueError):
        curve(cc, np.array([]))


def test_curve_monotone(cc, sls):
    grid = np.logspace(-3, 3, 25) / TAU
    for model in (cc, sls):
        c = curve(model, grid)
        assert np.all(c.attenuation >= 0.0)
        assert np.all(np.diff(c.attenuation) > 0.0)
        assert np.all(np.diff(c.phase_speed) > 0.0)
        assert np.all((c.phase_speed > model.c0)
                      & (c.phase_speed < model.c_inf))


def test_dispersion_odd_and_ratio_monotone(cc):
    meas = cw.spectral_measure(cc)
    w = 1.0 / cc.tau
    assert dispersion(meas, -w) == pytest.approx(-dispersion(meas, w),
                                                 rel=1e-12)
    grid = np.logspace(-2, 2, 15) / cc.tau
    ratio = np.array([dispersion(meas, wi) / wi for wi in grid])
    assert np.all(np.diff(ratio) < 0.0)


def test_attenuation_sublinear_at_infinity(cc):
    meas = cw.spectral_measure(cc)
    grid = np.logspace(0, 6, 13) / cc.tau
    ratio = np.array([attenuation(meas, wi) / wi for wi in grid])
    assert np.all(np.diff(ratio) < 0.0)
    assert ratio[-1] < 0.05 * ratio[0]


@pytest.mark.parametrize("model_name", ["cc", "sls", "hn", "cd"])
def test_engine_matches_wavenumber_path(model_name, request):
    # two independent computation routes: spectral quadrature vs the
    # closed-form wave number on the imaginary axis
    model = request.getfixturevalue(model_name)
    meas = cw.spectral_measure(model)
    for w in np.logspace(-3, 3, 50) / 1e-13:
        a_quad = attenuation(meas, w)
        d_quad = dispersion(meas, w)
        a_kappa = float(attenuation_from_wavenumber(model, w))
        d_kappa = float(dispersion_from_wavenumber(model, w))
        assert abs(a_quad - a_kappa) <= 1e-6 * abs(a_kappa)
        assert abs(d_quad - d_kappa) <= 1e-6 * abs(d_kappa)


def test_quadrature_error_carries_estimate():
    from cmwave._quad import QuadratureError, integrate_density

    with pytest.raises(QuadratureError) as err:
        integrate_density(lambda r: 1.0 / (1.0 + r), 0.0, math.inf,
                          low_exp=0.0, high_exp=1.0)
    assert err.value.achieved == math.inf
