"""Exponential cubic B-spline basis with a free tension parameter.

Each basis function ``B_i`` lives on ``[x_{i-2}, x_{i+2}]`` over a uniform
knot layout ``x_i = origin + i*h``. It is linear-plus-hyperbolic on every
interval and twice continuously differentiable. As ``p*h -> 0`` it tends to
a scaled polynomial cubic B-spline.

Evaluation uses the equivalent truncated form

    B_i(x) = b2 * [phi(u) - 2(1+c) phi(u-h)_+],   u = 2h - |x - x_i|,

with ``phi(u) = (sinh(pu) - pu)/p``. The form is free of the large
cancelling terms in the textbook piecewise coefficients, so nodal values
come out to full precision even when ``p*h`` is small.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

MIN_PH = 1e-4
MAX_PH = 50.0


class DomainError(ValueError):
    """Raised when basis parameters fall outside the supported range."""


def _sinh_minus_id(z):
    """``sinh(z) - z`` without cancellation for small ``|z|``."""
    z = np.asarray(z, dtype=float)
    shape = z.shape
    z = z.reshape(-1)
    out = np.sinh(z) - z
    small = np.abs(z) < 0.5
    if np.any(small):
        zs = z[small]
        z2 = zs * zs
        term = zs * z2 / 6.0
        acc = term.copy()
        for k in range(2, 10):
            term = term * z2 / ((2 * k) * (2 * k + 1))
            acc += term
        out[small] = acc
    return out.reshape(shape)


def _zcosh_minus_sinh(z: float) -> float:
    # z cosh z - sinh z = sum_{k>=1} 2k z^(2k+1) / (2k+1)!
    if z >= 0.5:
        return z * math.cosh(z) - math.sinh(z)
    z2 = z * z
    term = z  # z^(2k+1)/(2k+1)! at k=0
    acc = 0.0
    for k in range(1, 12):
        term *= z2 / ((2 * k) * (2 * k + 1))
        acc += 2 * k * term
    return acc


@dataclass(frozen=True)
class BasisParams:
    """Tension, spacing and the piecewise coefficients of one basis function.

    ``a1, b1, c1, d1`` are the coefficients of the two central pieces
    ``a1 + b1*r + c1*exp(p*r) + d1*exp(-p*r)`` with ``r = |x - x_i|``;
    ``b2`` scales the two outer pieces. ``denom`` is ``p*h*c - s``, and
    ``s_minus_ph``/``c_minus_1`` are ``s - p*h`` and ``c - 1`` evaluated
    without cancellation.
    """

    p: float
    h: float
    c: float
    s: float
    a1: float
    b1: float
    b2: float
    c1: float
    d1: float
    denom: float
    s_minus_ph: float
    c_minus_1: float


@dataclass(frozen=True)
class BasisStencil:
    """Weights of ``delta_{i-1}, delta_i, delta_{i+1}`` in the knot values at ``x_i``.

    ``U_i = alpha1 delta_{i-1} + delta_i + alpha3 delta_{i+1}`` and likewise
    for ``U_x`` (``beta1, 0, beta2``) and ``U_xx`` (``gamma1..3``). So
    ``beta1 = B_{i-1}'(x_i) < 0``; read geometrically, ``B_i'(x_{i-1}) = beta2``.
    """

    alpha1: float
    alpha2: float
    alpha3: float
    beta1: float
    beta2: float
    gamma1: float
    gamma2: float
    gamma3: float


def make_basis(p: float, h: float) -> BasisParams:
    """Build the basis coefficients for tension ``p`` and knot spacing ``h``.

    Raises
    ------
    DomainError
        If ``p <= 0``, ``h <= 0``, ``p*h > 50`` (cosh overflow guard) or
        ``p*h < 1e-4`` (below this the exponential form is numerically
        indistinguishable from the cubic limit and is rejected).
    """
    p = float(p)
    h = float(h)
    if not (math.isfinite(p) and p > 0.0):
        raise DomainError(f"tension p must be positive and finite, got {p!r}")
    if not (math.isfinite(h) and h > 0.0):
        raise DomainError(f"spacing h must be positive and finite, got {h!r}")
    z = p * h
    if z > MAX_PH:
        raise DomainError(f"p*h = {z:g} exceeds {MAX_PH:g}")
    if z < MIN_PH:
        raise DomainError(f"p*h = {z:g} is below {MIN_PH:g}")

    c = math.cosh(z)
    s = math.sinh(z)
    denom = _zcosh_minus_sinh(z)
    s_minus_ph = float(_sinh_minus_id(np.array([z]))[0])
    c_minus_1 = 2.0 * math.sinh(0.5 * z) ** 2

    # Closed forms with the common (1 - c) factor cancelled analytically.
    a1 = z * c / denom
    b1 = -p * (1.0 + 2.0 * c) / (2.0 * denom)
    b2 = p / (2.0 * denom)
    c1 = (1.0 + 2.0 * c - 2.0 * s) / (4.0 * denom)
    d1 = -(1.0 + 2.0 * c + 2.0 * s) / (4.0 * denom)
    return BasisParams(p, h, c, s, a1, b1, b2, c1, d1, denom, s_minus_ph, c_minus_1)


def stencil(params: BasisParams) -> BasisStencil:
    """Knot values of the basis and its first two derivatives."""
    d2 = 2.0 * params.denom
    alpha = params.s_minus_ph / d2
    beta = params.p * params.c_minus_1 / d2
    gamma = params.p * params.p * params.s / d2
    return BasisStencil(
        alpha1=alpha,
        alpha2=1.0,
        alpha3=alpha,
        beta1=-beta,
        beta2=beta,
        gamma1=gamma,
        gamma2=-2.0 * gamma,
        gamma3=gamma,
    )


def eval_basis(params: BasisParams, i: int, x, deriv: int = 0, origin: float = 0.0):
    """Evaluate ``B_i`` (or its first/second derivative) at ``x``.

    ``x`` may be a scalar or an array; values outside the support are 0.
    Knot ``i`` sits at ``origin + i*h``.
    """
    if deriv not in (0, 1, 2):
        raise ValueError(f"deriv must be 0, 1 or 2, got {deriv!r}")
    p, h = params.p, params.h
    xa = np.asarray(x, dtype=float)
    offset = xa - (origin + i * h)
    u = 2.0 * h - np.abs(offset)
    inside = u > 0.0
    u = np.where(inside, u, 0.0)
    v = np.maximum(u - h, 0.0)  # argument of the inner truncated term
    w = 2.0 * (1.0 + params.c)

    if deriv == 0:
        val = (_sinh_minus_id(p * u) - w * _sinh_minus_id(p * v)) / p
    elif deriv == 1:
        g = 2.0 * np.sinh(0.5 * p * u) ** 2 - w * 2.0 * np.sinh(0.5 * p * v) ** 2
        val = -np.sign(offset) * g
    else:
        val = p * (np.sinh(p * u) - w * np.sinh(p * v))
    out = np.where(inside, params.b2 * val, 0.0)
    if out.ndim == 0:
        return float(out)
    return out
