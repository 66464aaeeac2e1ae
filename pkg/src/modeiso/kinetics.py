"""Reaction kinetics, steady states, Turing conditions and the
admissible wavenumber window.

Three classical models are built in: Schnakenberg (activator-depleted),
Gierer-Meinhardt (activator-inhibitor) and Thomas (substrate inhibition).
Note on the Schnakenberg constants: with the standard defaults
a = 0.9, b = 0.1 the uniform state is (1, 0.9), which requires the
constant production `b` in the u-equation and `a` in the v-equation:

    f(u, v) = b - u + u^2 v,     g(u, v) = a - u^2 v.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

STEADY_STATE_TOL = 1e-9


class KineticsError(ValueError):
    """Invalid kinetics parameters or failed steady-state solve."""


@dataclass(frozen=True)
class SteadyState:
    u: float
    v: float


@dataclass(frozen=True)
class Jacobian2x2:
    f_u: float
    f_v: float
    g_u: float
    g_v: float

    @property
    def trace(self) -> float:
        return self.f_u + self.g_v

    @property
    def det(self) -> float:
        return self.f_u * self.g_v - self.f_v * self.g_u


@dataclass(frozen=True)
class TuringReport:
    stable_trace: bool        # f_u + g_v < 0
    stable_det: bool          # f_u g_v - f_v g_u > 0
    diffusive_trace: bool     # d f_u + g_v > 0
    real_roots: bool          # (d f_u + g_v)^2 - 4 d det > 0
    d_c: float
    window: tuple[float, float] | None

    @property
    def turing_capable(self) -> bool:
        return self.stable_trace and self.stable_det

    @property
    def unstable(self) -> bool:
        return (self.stable_trace and self.stable_det
                and self.diffusive_trace and self.real_roots)


@dataclass(frozen=True)
class KineticsModel:
    name: str
    params: dict[str, float]
    f: Callable
    g: Callable


def schnakenberg(a: float = 0.9, b: float = 0.1) -> KineticsModel:
    if a <= 0 or b <= 0:
        raise KineticsError("Schnakenberg parameters must be positive")

    def f(u, v):
        return b - u + u * u * v

    def g(u, v):
        return a - u * u * v

    return KineticsModel("schnakenberg", {"a": a, "b": b}, f, g)


def gierer_meinhardt(a: float = 0.1, b: float = 1.0,
                     k: float = 0.5) -> KineticsModel:
    if a <= 0 or b <= 0 or k < 0:
        raise KineticsError("Gierer-Meinhardt parameters must be positive")

    def f(u, v):
        return a - b * u + u * u / (v * (1.0 + k * u * u))

    def g(u, v):
        return u * u - v

    return KineticsModel("gierer_meinhardt", {"a": a, "b": b, "k": k}, f, g)


def thomas(a: float = 150.0, b: float = 100.0, K: float = 0.05,
           alpha: float = 1.5, rho: float = 13.0) -> KineticsModel:
    if min(a, b, K, alpha, rho) < 0:
        raise KineticsError("Thomas parameters must be non-negative")

    def h(u, v):
        return rho * u * v / (1.0 + u + K * u * u)

    def f(u, v):
        return a - u - h(u, v)

    def g(u, v):
        return alpha * b - alpha * v - h(u, v)

    return KineticsModel("thomas",
                         {"a": a, "b": b, "K": K, "alpha": alpha, "rho": rho},
                         f, g)


MODEL_BUILDERS = {
    "schnakenberg": schnakenberg,
    "gierer_meinhardt": gierer_meinhardt,
    "thomas": thomas,
}


def make_model(name: str, **params: float) -> KineticsModel:
    try:
        builder = MODEL_BUILDERS[name]
    except KeyError:
        raise KineticsError(f"unknown kinetics model {name!r}; choose from "
                            f"{sorted(MODEL_BUILDERS)}")
    return builder(**params)


def _residual(model: KineticsModel, u: float, v: float) -> float:
    scale = max(1.0, abs(u))
    return max(abs(model.f(u, v)), abs(model.g(u, v))) / scale


def _newton_2d(model: KineticsModel, u0: float, v0: float) -> SteadyState:
    """Damped Newton on (f, g) = 0."""
    u, v = u0, v0
    for _ in range(100):
        res = _residual(model, u, v)
        if res < STEADY_STATE_TOL:
            return SteadyState(u, v)
        J = jacobian_at(model, u, v)
        det = J.det
        if det == 0.0:
            raise KineticsError("singular Jacobian in Newton iteration")
        fu, gv = model.f(u, v), model.g(u, v)
        du = -(J.g_v * fu - J.f_v * gv) / det
        dv = -(-J.g_u * fu + J.f_u * gv) / det
        step = 1.0
        for _ in range(40):
            un, vn = u + step * du, v + step * dv
            if un > 0 and vn > 0 and _residual(model, un, vn) < res:
                break
            step *= 0.5
        u, v = u + step * du, v + step * dv
    if _residual(model, u, v) < STEADY_STATE_TOL:
        return SteadyState(u, v)
    raise KineticsError("Newton failed to converge in 100 iterations "
                        f"(residual {_residual(model, u, v):.3e})")


def steady_state(model: KineticsModel) -> SteadyState:
    """Uniform steady state: analytic for Schnakenberg, Newton otherwise."""
    p = model.params
    if model.name == "schnakenberg":
        u = p["a"] + p["b"]
        return SteadyState(u, p["a"] / (u * u))
    if model.name == "gierer_meinhardt":
        return _newton_2d(model, 1.0, 1.0)
    if model.name == "thomas":
        # f - g eliminates the shared inhibition term: u = a - alpha*b + alpha*v
        a, b, alpha = p["a"], p["b"], p["alpha"]

        def u_of_v(v: float) -> float:
            return a - alpha * b + alpha * v

        v = b / 4.0
        for _ in range(100):
            u = u_of_v(v)
            fu = model.f(u, v)
            if abs(fu) / max(1.0, abs(u)) < STEADY_STATE_TOL:
                return SteadyState(u, v)
            J = jacobian_at(model, u, v)
            slope = J.f_u * alpha + J.f_v
            if slope == 0.0:
                raise KineticsError("flat residual in Thomas Newton solve")
            dv = -fu / slope
            step = 1.0
            for _ in range(40):
                vn = v + step * dv
                if vn > 0 and abs(model.f(u_of_v(vn), vn)) < abs(fu):
                    break
                step *= 0.5
            v += step * dv
        raise KineticsError("Thomas Newton failed to converge")
    return _newton_2d(model, 1.0, 1.0)


def jacobian_at(model: KineticsModel, u: float, v: float) -> Jacobian2x2:
    """Analytic partial derivatives of (f, g) at (u, v)."""
    p = model.params
    if model.name == "schnakenberg":
        return Jacobian2x2(f_u=-1.0 + 2.0 * u * v, f_v=u * u,
                           g_u=-2.0 * u * v, g_v=-u * u)
    if model.name == "gierer_meinhardt":
        k = p["k"]
        denom = 1.0 + k * u * u
        return Jacobian2x2(
            f_u=-p["b"] + 2.0 * u / (v * denom * denom),
            f_v=-u * u / (v * v * denom),
            g_u=2.0 * u,
            g_v=-1.0)
    if model.name == "thomas":
        K, alpha, rho = p["K"], p["alpha"], p["rho"]
        denom = 1.0 + u + K * u * u
        h_u = rho * v * (1.0 - K * u * u) / (denom * denom)
        h_v = rho * u / denom
        return Jacobian2x2(f_u=-1.0 - h_u, f_v=-h_v,
                           g_u=-h_u, g_v=-alpha - h_v)
    raise KineticsError(f"no analytic Jacobian for model {model.name!r}")


def jacobian(model: KineticsModel, state: SteadyState) -> Jacobian2x2:
    return jacobian_at(model, state.u, state.v)


def critical_diffusion_ratio(J: Jacobian2x2) -> float:
    """Smallest diffusion ratio at which the dispersion relation acquires
    real roots with d f_u + g_v > 0.

    Root of d^2 f_u^2 + 2 (2 f_v g_u - f_u g_v) d + g_v^2 = 0, selected by
    checking the instability conditions just above each candidate.
    """
    aa = J.f_u ** 2
    bb = 2.0 * (2.0 * J.f_v * J.g_u - J.f_u * J.g_v)
    cc = J.g_v ** 2
    if aa == 0.0:
        raise KineticsError("f_u = 0: no critical diffusion ratio")
    disc = bb * bb - 4.0 * aa * cc
    if disc < 0:
        raise KineticsError("no real critical diffusion ratio")
    sq = math.sqrt(disc)
    candidates = sorted(r for r in ((-bb - sq) / (2 * aa),
                                    (-bb + sq) / (2 * aa)) if r > 0)
    for root in candidates:
        d = root * (1.0 + 1e-9) + 1e-12
        trace_d = d * J.f_u + J.g_v
        if trace_d > 0 and trace_d ** 2 - 4.0 * d * J.det > 0:
            return root
    raise KineticsError("no admissible critical diffusion ratio")


def dispersion(J: Jacobian2x2, d: float, gamma: float, k2: float) -> float:
    """c(k^2); negative exactly when the mode k^2 grows."""
    if k2 < 0 or gamma <= 0:
        raise ValueError("need k2 >= 0 and gamma > 0")
    return (d * k2 * k2 - gamma * (d * J.f_u + J.g_v) * k2
            + gamma * gamma * J.det)


def dimensionless_window(J: Jacobian2x2, d: float) -> tuple[float, float]:
    """(L, R) with k2_- = gamma L and k2_+ = gamma R."""
    trace_d = d * J.f_u + J.g_v
    disc = trace_d ** 2 - 4.0 * d * J.det
    if disc <= 0:
        raise KineticsError("dispersion relation has no real roots "
                            f"(discriminant {disc:.3e})")
    sq = math.sqrt(disc)
    return (trace_d - sq) / (2.0 * d), (trace_d + sq) / (2.0 * d)


def wavenumber_window(J: Jacobian2x2, d: float,
                      gamma: float) -> tuple[float, float]:
    """Root interval (k2_-, k2_+) of the dispersion relation."""
    if gamma <= 0:
        raise ValueError("gamma must be positive")
    L, R = dimensionless_window(J, d)
    return gamma * L, gamma * R


def turing_check(J: Jacobian2x2, d: float) -> TuringReport:
    if d <= 0:
        raise ValueError("d must be positive")
    trace_d = d * J.f_u + J.g_v
    disc = trace_d ** 2 - 4.0 * d * J.det
    cond3 = trace_d > 0
    cond4 = disc > 0
    window = None
    if cond3 and cond4:
        # gamma = 1 window; scales linearly with gamma
        window = dimensionless_window(J, d)
    return TuringReport(stable_trace=J.trace < 0,
                        stable_det=J.det > 0,
                        diffusive_trace=cond3,
                        real_roots=cond4,
                        d_c=critical_diffusion_ratio(J),
                        window=window)
