"""Collocation / Crank-Nicolson time marching for viscous Burgers.

The approximation is ``U(x, t) = sum_{i=-1}^{N+1} delta_i(t) B_i(x)``,
collocated at the ``N+1`` knots. Each step linearizes the advection term
about the previous level,

    (U U_x)^{n+1} ~ U^{n+1} U_x^n + U^n U_x^{n+1} - U^n U_x^n,

which leaves one tridiagonal solve per step once the exterior coefficients
``delta_{-1}`` and ``delta_{N+1}`` are eliminated with the Dirichlet data.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional, Sequence

import numpy as np

from .basis import BasisParams, BasisStencil, eval_basis, make_basis, stencil
from .linalg import SingularPivotError, TridiagonalSystem, thomas_solve


class SolverError(RuntimeError):
    """A solver stage failed; ``stage`` names it (``"fit"`` or ``"step"``)."""

    def __init__(self, message: str, stage: str):
        super().__init__(message)
        self.stage = stage


class StepError(SolverError):
    def __init__(self, step_index: int, t: float, cause: Exception):
        super().__init__(f"step {step_index} (t={t:.10g}) failed: {cause}", "step")
        self.step_index = step_index
        self.t = t


@dataclass(frozen=True)
class ProblemSpec:
    """Burgers problem ``U_t + U U_x - lam U_xx = 0`` on ``[a, b]``.

    ``initial(x)`` gives ``U(x, t_start)``; ``bc_left(t)``/``bc_right(t)`` are
    the Dirichlet values. ``initial_dx`` optionally supplies the analytic
    slope of the initial profile, used at the two ends of the initial fit.
    ``exact(x, t)`` is optional.
    """

    a: float
    b: float
    lam: float
    initial: Callable
    bc_left: Callable
    bc_right: Callable
    t_start: float = 0.0
    exact: Optional[Callable] = None
    initial_dx: Optional[Callable] = None
    name: str = "custom"

    def __post_init__(self):
        if not self.a < self.b:
            raise ValueError(f"need a < b, got [{self.a}, {self.b}]")
        if not self.lam > 0:
            raise ValueError(f"viscosity must be positive, got {self.lam}")


@dataclass(frozen=True)
class Discretization:
    N: int
    dt: float
    p: float = 1.0

    def __post_init__(self):
        if int(self.N) != self.N or self.N < 4:
            raise ValueError(f"N must be an integer >= 4, got {self.N}")
        if not (self.dt > 0 and math.isfinite(self.dt)):
            raise ValueError(f"dt must be positive, got {self.dt}")
        if not self.p > 0:
            raise ValueError(f"tension p must be positive, got {self.p}")

    def spacing(self, problem: ProblemSpec) -> float:
        return (problem.b - problem.a) / self.N

    def mesh(self, problem: ProblemSpec) -> np.ndarray:
        return problem.a + self.spacing(problem) * np.arange(self.N + 1)

    def basis(self, problem: ProblemSpec) -> BasisParams:
        return make_basis(self.p, self.spacing(problem))


@dataclass(frozen=True)
class CoefficientVector:
    """Spline coefficients ``delta_{-1} .. delta_{N+1}`` at time ``t``."""

    delta: np.ndarray
    t: float

    def __post_init__(self):
        if not np.all(np.isfinite(self.delta)):
            raise ValueError("coefficients must be finite")


@dataclass(frozen=True)
class NodalState:
    """``U``, ``U_x`` and ``U_xx`` at the ``N+1`` knots."""

    u: np.ndarray
    ux: np.ndarray
    uxx: np.ndarray


@dataclass(frozen=True)
class Snapshot:
    time: float
    state: NodalState
    coeffs: CoefficientVector


def nodal_state(delta: CoefficientVector, st: BasisStencil) -> NodalState:
    d = np.asarray(getattr(delta, "delta", delta), dtype=float)
    left, mid, right = d[:-2], d[1:-1], d[2:]
    return NodalState(
        u=st.alpha1 * left + st.alpha2 * mid + st.alpha3 * right,
        ux=st.beta1 * left + st.beta2 * right,
        uxx=st.gamma1 * left + st.gamma2 * mid + st.gamma3 * right,
    )


def _end_slopes(problem: ProblemSpec, h: float) -> tuple[float, float]:
    if problem.initial_dx is not None:
        return float(problem.initial_dx(problem.a)), float(problem.initial_dx(problem.b))
    e = h / 100.0
    f = problem.initial
    left = (float(f(problem.a + e)) - float(f(problem.a - e))) / (2 * e)
    right = (float(f(problem.b + e)) - float(f(problem.b - e))) / (2 * e)
    return left, right


def fit_initial(problem: ProblemSpec, disc: Discretization) -> CoefficientVector:
    """Coefficients that interpolate the initial profile at every knot and
    match its slope at both ends.

    The two slope conditions eliminate ``delta_{-1}`` and ``delta_{N+1}``,
    so the fit is a single tridiagonal solve.
    """
    st = stencil(disc.basis(problem))
    x = disc.mesh(problem)
    try:
        f = np.broadcast_to(np.asarray(problem.initial(x), dtype=float), x.shape).copy()
        fa, fb = _end_slopes(problem, disc.spacing(problem))
    except (ValueError, TypeError, ArithmeticError) as exc:
        raise SolverError(f"initial data could not be evaluated: {exc}", "fit") from exc
    if not (np.all(np.isfinite(f)) and math.isfinite(fa) and math.isfinite(fb)):
        raise SolverError("initial data or its end slopes are not finite", "fit")
    n = disc.N + 1

    # slope rows: delta_{-1} = (fa - beta2 delta_1)/beta1,
    #             delta_{N+1} = (fb - beta1 delta_{N-1})/beta2
    diag = np.full(n, st.alpha2)
    sub = np.full(n - 1, st.alpha1)
    sup = np.full(n - 1, st.alpha3)
    rhs = f.copy()
    sup[0] = st.alpha3 - st.alpha1 * st.beta2 / st.beta1
    rhs[0] -= st.alpha1 * fa / st.beta1
    sub[-1] = st.alpha1 - st.alpha3 * st.beta1 / st.beta2
    rhs[-1] -= st.alpha3 * fb / st.beta2
    try:
        inner = thomas_solve(TridiagonalSystem(sub, diag, sup, rhs))
    except (SingularPivotError, ValueError) as exc:
        raise SolverError(f"initial fit failed: {exc}", "fit") from exc

    delta = np.empty(n + 2)
    delta[1:-1] = inner
    delta[0] = (fa - st.beta2 * inner[1]) / st.beta1
    delta[-1] = (fb - st.beta1 * inner[-2]) / st.beta2
    return CoefficientVector(delta, float(problem.t_start))


def assemble_step(
    delta_n: CoefficientVector,
    state_n: NodalState,
    st: BasisStencil,
    problem: ProblemSpec,
    disc: Discretization,
    t_next: float,
    advection: bool = True,
) -> TridiagonalSystem:
    """Linear system for ``delta_0^{n+1} .. delta_N^{n+1}``.

    Row ``m`` reads, with ``L1 = U_m^n`` and ``L2 = (U_x)_m^n``,

        sum_k [alpha_k + dt/2 (alpha_k L2 + beta_k L1 - lam gamma_k)] delta^{n+1}
          = sum_k [alpha_k + lam dt/2 gamma_k] delta^n

    over the neighbours ``k = m-1, m, m+1``. The end rows absorb the
    Dirichlet identities at ``t_next``. With ``advection=False`` the
    linearized advection terms are dropped (pure Crank-Nicolson diffusion).
    """
    d = delta_n.delta
    half = 0.5 * disc.dt
    lam = problem.lam
    if advection:
        l1, l2 = state_n.u, state_n.ux
    else:
        l1 = l2 = np.zeros_like(state_n.u)

    c_left = st.alpha1 + half * (st.alpha1 * l2 + st.beta1 * l1 - lam * st.gamma1)
    c_mid = st.alpha2 + half * (st.alpha2 * l2 - lam * st.gamma2)
    c_right = st.alpha3 + half * (st.alpha3 * l2 + st.beta2 * l1 - lam * st.gamma3)
    rhs = (
        (st.alpha1 + lam * half * st.gamma1) * d[:-2]
        + (st.alpha2 + lam * half * st.gamma2) * d[1:-1]
        + (st.alpha3 + lam * half * st.gamma3) * d[2:]
    )

    diag = c_mid.copy()
    sub = c_left[1:].copy()
    sup = c_right[:-1].copy()
    s1 = float(problem.bc_left(t_next))
    s2 = float(problem.bc_right(t_next))
    # delta_{-1} = (s1 - alpha2 delta_0 - alpha3 delta_1) / alpha1
    r = c_left[0] / st.alpha1
    diag[0] -= r * st.alpha2
    sup[0] -= r * st.alpha3
    rhs[0] -= r * s1
    # delta_{N+1} = (s2 - alpha1 delta_{N-1} - alpha2 delta_N) / alpha3
    r = c_right[-1] / st.alpha3
    diag[-1] -= r * st.alpha2
    sub[-1] -= r * st.alpha1
    rhs[-1] -= r * s2
    return TridiagonalSystem(sub, diag, sup, rhs)


def _close_boundaries(inner: np.ndarray, st: BasisStencil, s1: float, s2: float) -> np.ndarray:
    delta = np.empty(inner.size + 2)
    delta[1:-1] = inner
    delta[0] = (s1 - st.alpha2 * inner[0] - st.alpha3 * inner[1]) / st.alpha1
    delta[-1] = (s2 - st.alpha1 * inner[-2] - st.alpha2 * inner[-1]) / st.alpha3
    return delta


def step(
    delta_n: CoefficientVector,
    st: BasisStencil,
    problem: ProblemSpec,
    disc: Discretization,
    t_next: Optional[float] = None,
    advection: bool = True,
) -> CoefficientVector:
    """Advance one time step; raises ``SingularPivotError`` on breakdown."""
    if t_next is None:
        t_next = delta_n.t + disc.dt
    state = nodal_state(delta_n, st)
    system = assemble_step(delta_n, state, st, problem, disc, t_next, advection)
    inner = thomas_solve(system)
    delta = _close_boundaries(
        inner, st, float(problem.bc_left(t_next)), float(problem.bc_right(t_next))
    )
    return CoefficientVector(delta, float(t_next))


def steps_to(target: float, t_start: float, dt: float) -> int:
    """Index of the first step whose time ``t_start + n*dt`` is at or after
    ``target`` (a relative slack of 1e-9 steps absorbs rounding)."""
    return max(0, math.ceil((target - t_start) / dt - 1e-9))


def run(
    problem: ProblemSpec,
    disc: Discretization,
    snapshot_times: Sequence[float],
    advection: bool = True,
) -> list[Snapshot]:
    """March from ``t_start`` with fixed ``dt`` and record snapshots.

    Each requested time is served by the first step at or after it; the
    returned ``Snapshot.time`` is that step's actual time.
    """
    times = [float(t) for t in snapshot_times]
    if any(b < a for a, b in zip(times, times[1:])):
        raise ValueError("snapshot times must be ascending")
    if times and times[0] < problem.t_start - 1e-12:
        raise ValueError(f"snapshot time {times[0]} precedes t_start={problem.t_start}")

    st = stencil(disc.basis(problem))
    coeffs = fit_initial(problem, disc)
    targets = [steps_to(t, problem.t_start, disc.dt) for t in times]
    out: list[Snapshot] = []
    n = 0
    for target in targets:
        while n < target:
            t_next = problem.t_start + (n + 1) * disc.dt
            try:
                coeffs = step(coeffs, st, problem, disc, t_next, advection)
            except (SingularPivotError, ValueError) as exc:
                raise StepError(n + 1, t_next, exc) from exc
            n += 1
        out.append(Snapshot(coeffs.t, nodal_state(coeffs, st), coeffs))
    return out


def evaluate(coeffs: CoefficientVector, params: BasisParams, origin: float, x, deriv: int = 0):
    """Value (or derivative) of the spline ``sum delta_i B_i`` at arbitrary ``x``."""
    d = coeffs.delta
    n_int = d.size - 3
    xa = np.atleast_1d(np.asarray(x, dtype=float))
    k = np.clip(np.floor((xa - origin) / params.h).astype(int), 0, n_int - 1)
    out = np.zeros_like(xa)
    for shift in (-1, 0, 1, 2):
        idx = k + shift
        # B_i(x) = B_0(x - i h): shift every point onto the same basis function
        out += d[idx + 1] * eval_basis(params, 0, xa - idx * params.h, deriv, origin)
    return float(out[0]) if np.ndim(x) == 0 else out
