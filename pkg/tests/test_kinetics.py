import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import modeiso as mi
from modeiso.kinetics import (KineticsError, critical_diffusion_ratio,
                              dimensionless_window, dispersion, jacobian,
                              jacobian_at, make_model, steady_state,
                              turing_check, wavenumber_window)

MODELS = [mi.schnakenberg(), mi.gierer_meinhardt(), mi.thomas()]


def test_schnakenberg_steady_state_exact():
    state = steady_state(mi.schnakenberg())
    assert (state.u, state.v) == (1.0, 0.9)


def test_gm_and_thomas_steady_states():
    gm = steady_state(mi.gierer_meinhardt())
    assert gm.u == pytest.approx(0.8395, abs=1e-3)
    assert gm.v == pytest.approx(0.7047, abs=1e-3)
    th = steady_state(mi.thomas())
    assert th.u == pytest.approx(37.74, abs=1e-2)
    assert th.v == pytest.approx(25.16, abs=1e-2)


@pytest.mark.parametrize("model", MODELS, ids=lambda m: m.name)
def test_steady_state_zeroes_kinetics(model):
    s = steady_state(model)
    assert abs(model.f(s.u, s.v)) < 1e-8 * max(1.0, abs(s.u))
    assert abs(model.g(s.u, s.v)) < 1e-8 * max(1.0, abs(s.u))


def _fd_jacobian(model, u, v, h=1e-6):
    return np.array([
        [(model.f(u + h, v) - model.f(u - h, v)) / (2 * h),
         (model.f(u, v + h) - model.f(u, v - h)) / (2 * h)],
        [(model.g(u + h, v) - model.g(u - h, v)) / (2 * h),
         (model.g(u, v + h) - model.g(u, v - h)) / (2 * h)],
    ])


@pytest.mark.parametrize("model", MODELS, ids=lambda m: m.name)
def test_jacobian_matches_finite_differences(model):
    s = steady_state(model)
    J = jacobian(model, s)
    fd = _fd_jacobian(model, s.u, s.v, h=1e-6 * max(1.0, abs(s.u)))
    analytic = np.array([[J.f_u, J.f_v], [J.g_u, J.g_v]])
    scale = np.abs(analytic).max()
    assert np.abs(analytic - fd).max() < 1e-6 * scale


def test_schnakenberg_jacobian_values(schnakenberg_jacobian):
    J = schnakenberg_jacobian
    assert (J.f_u, J.f_v, J.g_u, J.g_v) == pytest.approx((0.8, 1.0, -1.8,
                                                          -1.0))


def test_critical_diffusion_ratio_schnakenberg(schnakenberg_jacobian):
    assert critical_diffusion_ratio(schnakenberg_jacobian) == pytest.approx(
        8.5677, abs=1e-4)


def test_window_values(schnakenberg_jacobian):
    J = schnakenberg_jacobian
    lo, hi = wavenumber_window(J, 10.0, 15.0)
    assert math.sqrt(lo) == pytest.approx(1.7321, abs=1e-4)
    assert math.sqrt(hi) == pytest.approx(2.7386, abs=1e-4)


def test_dispersion_sign_structure(schnakenberg_jacobian):
    J = schnakenberg_jacobian
    d, gamma = 10.0, 15.0
    lo, hi = wavenumber_window(J, d, gamma)
    mid = 0.5 * (lo + hi)
    assert dispersion(J, d, gamma, mid) < 0
    assert dispersion(J, d, gamma, 0.5 * lo) > 0
    assert dispersion(J, d, gamma, 2.0 * hi) > 0
    assert dispersion(J, d, gamma, lo) == pytest.approx(0.0, abs=1e-9)


def test_turing_check_reports(schnakenberg_jacobian):
    J = schnakenberg_jacobian
    below = turing_check(J, 5.0)
    assert below.turing_capable and not below.unstable
    assert below.window is None
    above = turing_check(J, 10.0)
    assert above.unstable
    assert above.window is not None


def test_window_requires_d_above_critical(schnakenberg_jacobian):
    with pytest.raises(KineticsError):
        dimensionless_window(schnakenberg_jacobian, 5.0)


@settings(max_examples=30, deadline=None)
@given(d=st.floats(8.6, 50.0), gamma=st.floats(0.1, 200.0))
def test_window_scales_linearly_with_gamma(d, gamma):
    model = mi.schnakenberg()
    J = jacobian(model, steady_state(model))
    lo1, hi1 = wavenumber_window(J, d, 1.0)
    lo, hi = wavenumber_window(J, d, gamma)
    assert lo == pytest.approx(gamma * lo1, rel=1e-12)
    assert hi == pytest.approx(gamma * hi1, rel=1e-12)


def test_make_model_dispatch_and_errors():
    m = make_model("schnakenberg", a=0.5, b=0.2)
    assert m.params == {"a": 0.5, "b": 0.2}
    with pytest.raises(KineticsError, match="unknown"):
        make_model("brusselator")
    with pytest.raises(KineticsError):
        mi.schnakenberg(a=-1.0)


def test_jacobian_at_arbitrary_point_matches_fd():
    model = mi.thomas()
    J = jacobian_at(model, 20.0, 10.0)
    fd = _fd_jacobian(model, 20.0, 10.0, h=1e-5)
    analytic = np.array([[J.f_u, J.f_v], [J.g_u, J.g_v]])
    assert np.abs(analytic - fd).max() < 1e-5 * np.abs(analytic).max()
