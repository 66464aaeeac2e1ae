"""Analytic Neumann spectra used as oracles: rectangle, sphere surface,
sphere bulk (spherical Bessel derivative roots) and real spherical
harmonics for pattern comparison."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import lpmv


@dataclass(frozen=True)
class AnalyticEigenvalue:
    value: float
    multiplicity: int
    label: tuple


def eigenvalue_array(entries) -> np.ndarray:
    """Plain array of eigenvalues from analytic entries or a Spectrum."""
    if hasattr(entries, "eigenvalues"):
        return np.asarray(entries.eigenvalues, dtype=float)
    out = []
    for e in entries:
        out.append(e.value if isinstance(e, AnalyticEigenvalue) else float(e))
    return np.asarray(out, dtype=float)


def rectangle_neumann(lx: float, ly: float, count: int
                      ) -> list[AnalyticEigenvalue]:
    """lambda = pi^2 (m^2/lx^2 + n^2/ly^2) for m, n >= 0, sorted."""
    if lx <= 0 or ly <= 0:
        raise ValueError("rectangle sides must be positive")
    # enough index range to cover `count` modes
    bound = count + 2
    entries = []
    for m in range(bound):
        for n in range(bound):
            lam = math.pi ** 2 * (m ** 2 / lx ** 2 + n ** 2 / ly ** 2)
            entries.append(AnalyticEigenvalue(lam, 1, (m, n)))
    entries.sort(key=lambda e: (e.value, e.label))
    return entries[:count]


def sphere_surface_spectrum(count: int) -> list[AnalyticEigenvalue]:
    """lambda = l(l+1), each level expanded to its 2l+1 harmonics."""
    entries = []
    level = 0
    while len(entries) < count:
        lam = float(level * (level + 1))
        for m in range(-level, level + 1):
            entries.append(AnalyticEigenvalue(lam, 2 * level + 1, (level, m)))
        level += 1
    return entries[:count]


_DOUBLE_FACTORIAL = [1.0]
for _k in range(1, 40):
    _DOUBLE_FACTORIAL.append(_DOUBLE_FACTORIAL[-1] * (2 * _k + 1))


def _bessel_series(l: int, x: float) -> float:
    # j_l(x) = x^l / (2l+1)!! * sum_k (-x^2/2)^k / (k! (2l+2k+1)!! / (2l+1)!!)
    term = x ** l / _DOUBLE_FACTORIAL[l]
    total = term
    k = 1
    while True:
        term *= -(x * x / 2.0) / (k * (2 * l + 2 * k + 1))
        total += term
        if abs(term) < 1e-17 * max(abs(total), 1e-300):
            return total
        k += 1


def spherical_bessel_j(l: int, x: float) -> tuple[float, float]:
    """Spherical Bessel j_l and its derivative, l in 0..6.

    Ascending recurrence from the closed forms of j_0, j_1 where stable;
    the power series for small arguments.  The derivative follows the
    recurrence identity j_l'(x) = (l/x) j_l(x) - j_{l+1}(x).
    """
    if not 0 <= l <= 6:
        raise ValueError("l must be in 0..6")
    if x < 0:
        raise ValueError("x must be non-negative")
    if x < max(1e-6, 0.0):
        # series limits at the origin
        jl = 1.0 if l == 0 else _bessel_series(l, x)
        jl1 = _bessel_series(l + 1, x)
        deriv = -jl1 if l == 0 else (l / x * jl - jl1 if x > 0 else
                                     (1.0 / 3.0 if l == 1 else 0.0))
        return jl, deriv
    if x < l + 1:
        # ascending recurrence loses accuracy for x below the turning point
        jl = _bessel_series(l, x)
        jl1 = _bessel_series(l + 1, x)
    else:
        j_prev = math.sin(x) / x
        j_cur = math.sin(x) / x ** 2 - math.cos(x) / x
        if l == 0:
            jl, jl1 = j_prev, j_cur
        else:
            for order in range(1, l + 1):
                j_prev, j_cur = j_cur, (2 * order + 1) / x * j_cur - j_prev
                # after the swap: j_prev = j_order, j_cur = j_{order+1}
            jl, jl1 = j_prev, j_cur
    return jl, l / x * jl - jl1


def _bisect_root(fn, lo: float, hi: float, xtol: float = 1e-10) -> float:
    flo = fn(lo)
    fhi = fn(hi)
    if flo == 0.0:
        return lo
    if fhi == 0.0:
        return hi
    if flo * fhi > 0:
        raise ValueError("no sign change in bracket")
    while hi - lo > xtol:
        mid = 0.5 * (lo + hi)
        fmid = fn(mid)
        if fmid == 0.0:
            return mid
        if flo * fmid < 0:
            hi = mid
        else:
            lo, flo = mid, fmid
    return 0.5 * (lo + hi)


def bessel_derivative_roots(l: int, k_max: float = 20.0,
                            scan_step: float = 0.05) -> list[float]:
    """Positive roots of j_l'(x) on (0, k_max], by bracketing + bisection."""
    def deriv(x: float) -> float:
        return spherical_bessel_j(l, x)[1]

    roots = []
    # start past the origin where j_l' ~ x^(l-1) has a known sign
    x0 = scan_step
    prev_x, prev_f = x0, deriv(x0)
    x = x0 + scan_step
    while x <= k_max + 1e-12:
        f = deriv(x)
        if prev_f == 0.0:
            roots.append(prev_x)
        elif prev_f * f < 0:
            roots.append(_bisect_root(deriv, prev_x, x))
        prev_x, prev_f = x, f
        x += scan_step
    return roots


def sphere_bulk_spectrum(count: int, k_max: float = 20.0,
                         scan_step: float = 0.05) -> list[AnalyticEigenvalue]:
    """Neumann eigenvalues of the unit ball: lambda = k^2 with j_l'(k) = 0.

    Level l contributes multiplicity 2l+1; the constant mode is labelled
    (0, 1) following the convention that k_{0,1} = 0.
    """
    entries = [AnalyticEigenvalue(0.0, 1, (0, 1, 0))]
    for l in range(0, 7):
        roots = bessel_derivative_roots(l, k_max=k_max, scan_step=scan_step)
        n0 = 2 if l == 0 else 1  # the l = 0 count starts after the k = 0 root
        for idx, k in enumerate(roots):
            lam = k * k
            for m in range(-l, l + 1):
                entries.append(
                    AnalyticEigenvalue(lam, 2 * l + 1, (l, n0 + idx, m)))
    entries.sort(key=lambda e: (e.value, e.label))
    if len(entries) < count:
        raise ValueError(f"scan range (0, {k_max}] yields only "
                         f"{len(entries)} modes; increase k_max")
    return entries[:count]


def real_spherical_harmonic(l: int, m: int, point) -> float:
    """Real-form spherical harmonic Y_l^m at a point on the unit sphere."""
    if not 0 <= l <= 4:
        raise ValueError("l must be in 0..4")
    if abs(m) > l:
        raise ValueError("|m| must not exceed l")
    p = np.asarray(point, dtype=float)
    r = float(np.linalg.norm(p))
    if abs(r - 1.0) > 1e-9:
        raise ValueError(f"point must lie on the unit sphere, |p| = {r}")
    x, y, z = p
    theta_cos = z / r
    phi = math.atan2(y, x)
    am = abs(m)
    norm = math.sqrt((2 * l + 1) / (4 * math.pi)
                     * math.factorial(l - am) / math.factorial(l + am))
    leg = float(lpmv(am, l, theta_cos))
    if m == 0:
        return norm * leg
    # (-1)^m cancels the Condon-Shortley phase of lpmv
    angular = math.cos(am * phi) if m > 0 else math.sin(am * phi)
    return (-1.0) ** am * math.sqrt(2.0) * norm * angular * leg
