"""Tridiagonal solves: the Thomas sweep and a dense elimination oracle."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

PIVOT_RTOL = 1e-14


class SingularPivotError(ArithmeticError):
    """Forward elimination met a pivot too small to divide by."""

    def __init__(self, row: int, pivot: float):
        super().__init__(f"singular pivot {pivot:.3e} at row {row}")
        self.row = row
        self.pivot = pivot


class SingularMatrixError(ArithmeticError):
    pass


@dataclass(frozen=True)
class TridiagonalSystem:
    """Three-banded system ``A x = rhs``.

    ``sub[k]`` couples row ``k+1`` to unknown ``k``; ``sup[k]`` couples row
    ``k`` to unknown ``k+1``.
    """

    sub: np.ndarray
    diag: np.ndarray
    sup: np.ndarray
    rhs: np.ndarray

    def __post_init__(self):
        for name in ("sub", "diag", "sup", "rhs"):
            object.__setattr__(self, name, np.asarray(getattr(self, name), dtype=float))
        n = self.diag.shape[0]
        if n < 1:
            raise ValueError("system must have at least one row")
        if self.rhs.shape != (n,) or self.sub.shape != (n - 1,) or self.sup.shape != (n - 1,):
            raise ValueError(
                f"inconsistent band lengths: sub={self.sub.shape}, diag={self.diag.shape}, "
                f"sup={self.sup.shape}, rhs={self.rhs.shape}"
            )
        if not np.isfinite(np.concatenate((self.sub, self.diag, self.sup, self.rhs))).all():
            raise ValueError("system bands must be finite")

    @property
    def n(self) -> int:
        return self.diag.shape[0]

    def to_dense(self) -> np.ndarray:
        a = np.diag(self.diag)
        if self.n > 1:
            a += np.diag(self.sub, -1) + np.diag(self.sup, 1)
        return a

    def matvec(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        y = self.diag * x
        y[1:] += self.sub * x[:-1]
        y[:-1] += self.sup * x[1:]
        return y


def thomas_solve(system: TridiagonalSystem, counter: dict | None = None) -> np.ndarray:
    """Solve a tridiagonal system with the classical (unpivoted) Thomas sweep.

    Parameters
    ----------
    system : TridiagonalSystem
    counter : dict, optional
        If given, ``counter["flops"]`` is incremented by the number of
        floating-point multiplies, divides and subtractions performed.

    Raises
    ------
    SingularPivotError
        When a pivot is smaller than ``1e-14`` times the largest magnitude
        in its original row.
    """
    a = system.sub.tolist()
    b = system.diag.tolist()
    c = system.sup.tolist()
    d = system.rhs.tolist()
    n = len(b)
    scale = np.abs(system.diag)
    if n > 1:
        scale[1:] = np.maximum(scale[1:], np.abs(system.sub))
        scale[:-1] = np.maximum(scale[:-1], np.abs(system.sup))
    scale = scale.tolist()

    cp = [0.0] * n
    dp = [0.0] * n
    piv = b[0]
    if not abs(piv) > PIVOT_RTOL * scale[0]:
        raise SingularPivotError(0, piv)
    ops = 1
    if n > 1:
        cp[0] = c[0] / piv
        ops += 1
    dp[0] = d[0] / piv
    for k in range(1, n):
        m = a[k - 1]
        piv = b[k] - m * cp[k - 1]
        if not abs(piv) > PIVOT_RTOL * scale[k]:
            raise SingularPivotError(k, piv)
        if k < n - 1:
            cp[k] = c[k] / piv
            ops += 1
        dp[k] = (d[k] - m * dp[k - 1]) / piv
        ops += 5

    x = dp
    for k in range(n - 2, -1, -1):
        x[k] -= cp[k] * x[k + 1]
        ops += 2

    if counter is not None:
        counter["flops"] = counter.get("flops", 0) + ops
    return np.array(x)


def dense_solve(system: TridiagonalSystem) -> np.ndarray:
    """Gaussian elimination with partial pivoting on the expanded matrix.

    Test oracle for :func:`thomas_solve`; cost is O(n^3).
    """
    a = system.to_dense()
    x = system.rhs.copy()
    n = system.n
    tol = np.finfo(float).eps * n * max(np.abs(a).max(), np.finfo(float).tiny)
    for k in range(n):
        p = k + int(np.argmax(np.abs(a[k:, k])))
        if abs(a[p, k]) <= tol:
            raise SingularMatrixError(f"matrix is singular to working precision at column {k}")
        if p != k:
            a[[k, p]] = a[[p, k]]
            x[[k, p]] = x[[p, k]]
        f = a[k + 1 :, k] / a[k, k]
        a[k + 1 :, k:] -= np.outer(f, a[k, k:])
        x[k + 1 :] -= f * x[k]
    for k in range(n - 1, -1, -1):
        x[k] = (x[k] - a[k, k + 1 :] @ x[k + 1 :]) / a[k, k]
    return x
