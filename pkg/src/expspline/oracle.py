"""Exact Burgers solutions for the benchmark problems, and error norms.

Problem (a) is the Cole-Hopf Fourier-Bessel series for a decaying sine wave,
(b) a similarity shock solution, (c) a travelling logistic front and (d) a
tangent-form solution on ``[0.5, 1.5]``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

BESSEL_MAX_ORDER = 500
BESSEL_MAX_ARG = 100.0
SERIES_MAX_TERMS = 200
SERIES_CUTOFF = 1e-30


class OracleDomainError(ValueError):
    """Arguments outside the range where an exact solution is evaluated."""


class SeriesConvergenceError(ArithmeticError):
    pass


class TangentSingularityError(ArithmeticError):
    pass


def bessel_i(n: int, z: float) -> float:
    """Modified Bessel function ``I_n(z)`` by its ascending power series.

    Summation stops once a term drops below ``1e-17`` of the partial sum.
    Valid for integer ``0 <= n <= 500`` and ``0 <= z <= 100``.
    """
    if int(n) != n or not 0 <= n <= BESSEL_MAX_ORDER:
        raise OracleDomainError(f"order must be an integer in [0, {BESSEL_MAX_ORDER}], got {n!r}")
    z = float(z)
    if not 0.0 <= z <= BESSEL_MAX_ARG:
        raise OracleDomainError(f"argument must lie in [0, {BESSEL_MAX_ARG:g}], got {z!r}")
    n = int(n)
    if z == 0.0:
        return 1.0 if n == 0 else 0.0
    half = 0.5 * z
    # Leading term (z/2)^n / n! in log space so that large n cannot overflow.
    term = math.exp(n * math.log(half) - math.lgamma(n + 1))
    if term == 0.0:
        return 0.0
    q = half * half
    total = term
    k = 0
    while True:
        k += 1
        term *= q / (k * (k + n))
        total += term
        if term <= 1e-17 * total:
            return total


@lru_cache(maxsize=64)
def _bessel_ratios(z: float, jmax: int) -> np.ndarray:
    """``I_j(z) / I_0(z)`` for ``j = 0..jmax`` (cached; do not mutate)."""
    out = np.empty(jmax + 1)
    out[0] = 1.0
    if z <= 5.0:
        i0 = bessel_i(0, z)
        for j in range(1, jmax + 1):
            out[j] = bessel_i(j, z) / i0
        return out
    # Backward recurrence for rho_j = I_j / I_{j-1}; the tail start is far
    # enough past max(jmax, z) that the truncation error is below rounding.
    start = jmax + int(z) + 60
    rho = 0.0
    rhos = np.empty(jmax + 1)
    for j in range(start, 0, -1):
        rho = 1.0 / (2.0 * j / z + rho)
        if j <= jmax:
            rhos[j] = rho
    out[1:] = np.cumprod(rhos[1:])
    return out


def exact_a(x, t: float, lam: float):
    """Sine-wave decay solution on ``[0, 1]`` with zero boundaries.

    Numerator and denominator series are both divided by ``I_0(1/(2 pi lam))``
    so that nothing overflows at small viscosity.
    """
    if not lam >= 0.01:
        raise OracleDomainError(f"series solution needs lambda >= 0.01, got {lam!r}")
    if not t > 0.0:
        raise OracleDomainError(f"series solution needs t > 0, got {t!r}")
    x = np.asarray(x, dtype=float)
    z = 1.0 / (2.0 * math.pi * lam)
    ratios = _bessel_ratios(z, SERIES_MAX_TERMS)
    num = np.zeros_like(x)
    den = np.ones_like(x)
    for j in range(1, SERIES_MAX_TERMS + 1):
        decay = math.exp(-j * j * math.pi * math.pi * lam * t)
        weight = ratios[j] * decay
        if decay < SERIES_CUTOFF or weight < SERIES_CUTOFF:
            break
        num += j * weight * np.sin(j * math.pi * x)
        den += 2.0 * weight * np.cos(j * math.pi * x)
    else:
        raise SeriesConvergenceError(
            f"series did not reach cutoff within {SERIES_MAX_TERMS} terms (t={t}, lambda={lam})"
        )
    out = 4.0 * math.pi * lam * num / den
    return float(out) if out.ndim == 0 else out


def _inv_one_plus_exp(e):
    """``1/(1 + exp(e))`` without overflow."""
    e = np.asarray(e, dtype=float)
    out = np.empty_like(e)
    pos = e > 0
    en = np.exp(-e[pos])
    out[pos] = en / (1.0 + en)
    out[~pos] = 1.0 / (1.0 + np.exp(e[~pos]))
    return out


def _shock_exponent(x, t, lam):
    # log of sqrt(t/t0) * exp(x^2/(4 lam t)) with t0 = exp(1/(8 lam))
    return x * x / (4.0 * lam * t) - 1.0 / (16.0 * lam) + 0.5 * math.log(t)


def exact_b(x, t: float, lam: float):
    """Shock-propagation solution, valid for ``t >= 1`` on ``[0, 1]``."""
    if not t >= 1.0:
        raise OracleDomainError(f"shock solution is defined for t >= 1, got {t!r}")
    x = np.asarray(x, dtype=float)
    if np.any(x < -1e-12) or np.any(x > 1.0 + 1e-12):
        raise OracleDomainError("shock solution is defined for 0 <= x <= 1")
    out = (x / t) * _inv_one_plus_exp(_shock_exponent(x, t, lam))
    return float(out) if out.ndim == 0 else out


def exact_b_dx(x, t: float, lam: float):
    x = np.asarray(x, dtype=float)
    sig = _inv_one_plus_exp(_shock_exponent(x, t, lam))
    out = sig / t - (x / t) * (x / (2.0 * lam * t)) * sig * (1.0 - sig)
    return float(out) if out.ndim == 0 else out


@dataclass(frozen=True)
class WaveParams:
    """Travelling-wave constants: front jump ``wave_alpha``, speed ``wave_mu``,
    initial offset ``wave_gamma``."""

    wave_alpha: float
    wave_mu: float
    wave_gamma: float

    def __post_init__(self):
        if self.wave_alpha == 0:
            raise ValueError("wave_alpha must be nonzero")


TABLE6_WAVE = WaveParams(0.4, 0.6, 0.125)


def _wave_eta(x, t, lam, w):
    return w.wave_alpha * (np.asarray(x, dtype=float) - w.wave_mu * t - w.wave_gamma) / lam


def exact_c(x, t: float, lam: float, w: WaveParams = TABLE6_WAVE):
    """Travelling wave between ``mu + alpha`` (left) and ``mu - alpha`` (right)."""
    if not lam > 0:
        raise OracleDomainError(f"lambda must be positive, got {lam!r}")
    eta = _wave_eta(x, t, lam, w)
    out = (w.wave_mu - w.wave_alpha) + 2.0 * w.wave_alpha * _inv_one_plus_exp(eta)
    return float(out) if out.ndim == 0 else out


def exact_c_dx(x, t: float, lam: float, w: WaveParams = TABLE6_WAVE):
    sig = _inv_one_plus_exp(_wave_eta(x, t, lam, w))
    out = -2.0 * w.wave_alpha**2 / lam * sig * (1.0 - sig)
    return float(out) if out.ndim == 0 else out


def _tan_arg(x, t, lam):
    arg = np.asarray(x, dtype=float) / (2.0 * (1.0 + lam * t))
    dist = np.abs(np.remainder(arg - 0.5 * math.pi, math.pi))
    dist = np.minimum(dist, math.pi - dist)
    if np.any(dist < 1e-6):
        raise TangentSingularityError("tangent argument within 1e-6 of a pole")
    return arg


def exact_d(x, t: float, lam: float):
    """``lam/(1 + lam t) * [x + tan(x / (2(1 + lam t)))]``."""
    arg = _tan_arg(x, t, lam)
    out = lam / (1.0 + lam * t) * (np.asarray(x, dtype=float) + np.tan(arg))
    return float(out) if out.ndim == 0 else out


def exact_d_dx(x, t: float, lam: float):
    arg = _tan_arg(x, t, lam)
    g = 1.0 + lam * t
    out = lam / g * (1.0 + 1.0 / (np.cos(arg) ** 2 * 2.0 * g))
    return float(out) if out.ndim == 0 else out


@dataclass(frozen=True)
class ErrorReport:
    """Discrete L2 / L-infinity errors at one time level, with the nodal data."""

    t: float
    l2: float
    linf: float
    x: np.ndarray
    numeric: np.ndarray
    exact: np.ndarray
    abs_error: np.ndarray

    @property
    def per_node(self) -> list[tuple[float, float, float, float]]:
        return list(
            zip(self.x.tolist(), self.numeric.tolist(), self.exact.tolist(), self.abs_error.tolist())
        )


def error_norms(numeric, exact_fn, mesh, t: float) -> ErrorReport:
    """Compare nodal values against ``exact_fn(x, t)``.

    ``numeric`` is either a nodal-state object (its ``u`` is used) or an
    array of nodal values on ``mesh``. ``L2 = sqrt(h * sum(err^2))`` over
    all ``N+1`` nodes and ``Linf = max |err|``.
    """
    u = np.asarray(getattr(numeric, "u", numeric), dtype=float)
    mesh = np.asarray(mesh, dtype=float)
    if u.shape != mesh.shape:
        raise ValueError(f"state has {u.shape} values but mesh has {mesh.shape} nodes")
    h = (mesh[-1] - mesh[0]) / (mesh.size - 1)
    ex = np.asarray(exact_fn(mesh, t), dtype=float)
    err = np.abs(u - ex)
    return ErrorReport(
        t=t,
        l2=float(math.sqrt(h * np.sum(err * err))),
        linf=float(err.max()),
        x=mesh,
        numeric=u,
        exact=ex,
        abs_error=err,
    )
