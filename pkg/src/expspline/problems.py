"""The four benchmark problems as ready-made :class:`ProblemSpec` objects."""

from __future__ import annotations

import math

import numpy as np

from .oracle import (
    TABLE6_WAVE,
    WaveParams,
    exact_a,
    exact_b,
    exact_b_dx,
    exact_c,
    exact_c_dx,
    exact_d,
    exact_d_dx,
)
from .solver import ProblemSpec


def _zero(t):
    return 0.0


def problem_a(lam: float) -> ProblemSpec:
    """``U(x,0) = sin(pi x)`` on ``[0,1]`` with homogeneous boundaries."""

    def exact(x, t):
        if t == 0.0:
            return np.sin(math.pi * np.asarray(x, dtype=float))
        return exact_a(x, t, lam)

    return ProblemSpec(
        a=0.0,
        b=1.0,
        lam=lam,
        initial=lambda x: np.sin(math.pi * np.asarray(x, dtype=float)),
        initial_dx=lambda x: math.pi * np.cos(math.pi * np.asarray(x, dtype=float)),
        bc_left=_zero,
        bc_right=_zero,
        t_start=0.0,
        exact=exact if lam >= 0.01 else None,
        name="a",
    )


def problem_b(lam: float) -> ProblemSpec:
    """Shock propagation on ``[0,1]``, started from the exact profile at ``t=1``."""
    return ProblemSpec(
        a=0.0,
        b=1.0,
        lam=lam,
        initial=lambda x: exact_b(x, 1.0, lam),
        initial_dx=lambda x: exact_b_dx(x, 1.0, lam),
        bc_left=_zero,
        bc_right=_zero,
        t_start=1.0,
        exact=lambda x, t: exact_b(x, t, lam),
        name="b",
    )


def problem_c(lam: float, wave: WaveParams = TABLE6_WAVE, left: float = 1.0, right: float = 0.2) -> ProblemSpec:
    """Travelling front on ``[0,1]`` held at constant Dirichlet values."""
    return ProblemSpec(
        a=0.0,
        b=1.0,
        lam=lam,
        initial=lambda x: exact_c(x, 0.0, lam, wave),
        initial_dx=lambda x: exact_c_dx(x, 0.0, lam, wave),
        bc_left=lambda t: left,
        bc_right=lambda t: right,
        t_start=0.0,
        exact=lambda x, t: exact_c(x, t, lam, wave),
        name="c",
    )


def problem_d(lam: float) -> ProblemSpec:
    """Tangent-form solution on ``[0.5, 1.5]`` with exact, time-dependent ends."""
    return ProblemSpec(
        a=0.5,
        b=1.5,
        lam=lam,
        initial=lambda x: exact_d(x, 0.0, lam),
        initial_dx=lambda x: exact_d_dx(x, 0.0, lam),
        bc_left=lambda t: exact_d(0.5, t, lam),
        bc_right=lambda t: exact_d(1.5, t, lam),
        t_start=0.0,
        exact=lambda x, t: exact_d(x, t, lam),
        name="d",
    )


PROBLEMS = {"a": problem_a, "b": problem_b, "c": problem_c, "d": problem_d}
