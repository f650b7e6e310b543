"""Smoothers, the two-grid method, and the recursive V-/W-cycle.

The cycle follows the classical Galerkin construction: pre-smoothing,
restriction of the residual, recursive coarse solves (s = 1 gives the
V-cycle, s = 2 the W-cycle), prolongated correction, post-smoothing.
Coarse operators are fixed at hierarchy construction time and the
coarsest system is solved by a dense direct factorization.
"""

from __future__ import annotations

import time
import warnings
from dataclasses import dataclass, field

import numpy as np
import scipy.linalg

from .errors import (
    BadDimension,
    DimensionMismatch,
    IncompatibleDimension,
    SingularCoarseMatrix,
    TooFewIterations,
)
from .linalg import GridTransfer, galerkin_coarsen

_SMOOTHER_KINDS = ("gauss_seidel", "jacobi", "richardson")


@dataclass(frozen=True)
class SmootherConfig:
    """Stationary smoother: kind, sweep count, and relaxation weight.

    ``weight`` is ignored by Gauss-Seidel.  ``sweeps = 0`` skips the
    smoother entirely.
    """

    kind: str = "gauss_seidel"
    sweeps: int = 1
    weight: float = 1.0

    def __post_init__(self):
        if self.kind not in _SMOOTHER_KINDS:
            raise ValueError(f"unknown smoother kind {self.kind!r}")
        if self.sweeps < 0:
            raise ValueError("sweep count must be >= 0")
        if self.kind in ("jacobi", "richardson") and not self.weight > 0:
            raise ValueError("relaxation weight must be positive")


GAUSS_SEIDEL = SmootherConfig()


def smooth(A, x, b, config):
    """Apply ``config.sweeps`` sweeps of the configured smoother.

    Gauss-Seidel is forward lexicographic; the weighted variants use the
    residual form ``x + w * M^{-1} (b - A x)``.
    """
    x = np.array(x, dtype=float, copy=True)
    for _ in range(config.sweeps):
        r = b - A.matvec(x)
        if config.kind == "gauss_seidel":
            x += A.lower_solve(r)
        elif config.kind == "jacobi":
            diag = A.diagonal()
            if np.any(diag == 0):
                from .errors import ZeroDiagonal

                raise ZeroDiagonal("operator has zero diagonal entries")
            x += config.weight * r / diag
        else:
            x += config.weight * r
    return x


@dataclass
class MgLevel:
    """One hierarchy level: its operator and the transfer below it."""

    operator: object
    transfer: GridTransfer | None = None


class _CoarseSolver:
    """Dense direct solver for the coarsest operator.

    Cholesky for symmetric matrices, LU otherwise; semi-definite or
    numerically singular matrices fall back to least squares with a
    warning.
    """

    def __init__(self, operator):
        dense = np.asarray(operator.to_dense())
        if np.iscomplexobj(dense) and np.max(np.abs(dense.imag)) < 1e-12:
            dense = dense.real
        if not np.all(np.isfinite(dense)):
            raise SingularCoarseMatrix("coarsest matrix contains non-finite entries")
        self._solve = None
        scale = 1.0 + float(np.max(np.abs(dense)))
        symmetric = np.max(np.abs(dense - dense.T)) <= 1e-12 * scale
        if symmetric:
            try:
                factor = scipy.linalg.cho_factor(dense)
                self._solve = lambda b: scipy.linalg.cho_solve(factor, b)
            except np.linalg.LinAlgError:
                warnings.warn(
                    "coarsest matrix is not positive definite; "
                    "falling back to a least-squares solve",
                    stacklevel=2,
                )
        else:
            lu, piv = scipy.linalg.lu_factor(dense)
            if np.min(np.abs(np.diag(lu))) > 1e-14 * scale:
                self._solve = lambda b: scipy.linalg.lu_solve((lu, piv), b)
            else:
                warnings.warn(
                    "coarsest matrix is numerically singular; "
                    "falling back to a least-squares solve",
                    stacklevel=2,
                )
        if self._solve is None:
            matrix = dense

            def lstsq_solve(b):
                out, *_ = np.linalg.lstsq(matrix, b, rcond=None)
                return out

            self._solve = lstsq_solve

    def __call__(self, b):
        return self._solve(b)


class MgHierarchy:
    """Fixed multigrid hierarchy with Galerkin coarse operators.

    ``cycles`` is the recursion count s of the cycle (1 = V-cycle,
    2 = W-cycle).
    """

    def __init__(self, levels, cutting_size, cycles=1):
        if not levels:
            raise ValueError("hierarchy needs at least one level")
        if cycles < 1:
            raise ValueError("recursion count must be >= 1")
        for i, level in enumerate(levels[:-1]):
            t = level.transfer
            if t is None:
                raise ValueError(f"level {i} is missing its grid transfer")
            if t.fine_dim != level.operator.n or t.coarse_dim != levels[i + 1].operator.n:
                raise DimensionMismatch(f"transfer dims broken at level {i}")
        if levels[-1].transfer is not None:
            raise ValueError("coarsest level must not carry a transfer")
        self.levels = list(levels)
        self.cutting_size = int(cutting_size)
        self.cycles = int(cycles)
        self._coarse_solver = None

    @property
    def dims(self):
        return [level.operator.n for level in self.levels]

    @property
    def depth(self):
        return len(self.levels)

    def coarse_solve(self, b):
        if self._coarse_solver is None:
            self._coarse_solver = _CoarseSolver(self.levels[-1].operator)
        return self._coarse_solver(b)

    def cycle(self, x, b, pre=GAUSS_SEIDEL, post=GAUSS_SEIDEL):
        """Advance the iterate by one full multigrid cycle."""
        return self._cycle(0, np.asarray(x, dtype=float), np.asarray(b, dtype=float), pre, post)

    def _cycle(self, j, x, b, pre, post):
        level = self.levels[j]
        if level.transfer is None:
            return self.coarse_solve(b)
        A = level.operator
        x = smooth(A, x, b, pre)
        residual = b - A.matvec(x)
        coarse_rhs = level.transfer.restrict(residual)
        coarse_x = np.zeros(level.transfer.coarse_dim)
        for _ in range(self.cycles):
            coarse_x = self._cycle(j + 1, coarse_x, coarse_rhs, pre, post)
        x = x + level.transfer.prolong(coarse_x)
        return smooth(A, x, b, post)


@dataclass
class SolveReport:
    """Outcome of an iterative solve.

    ``residual_history`` holds the relative residual 2-norms, one entry
    per outer iteration plus the initial 1.0.  ``conv_rate`` is the
    geometric mean of the overall reduction and is 0.0 for the degenerate
    zero-iteration case.
    """

    iterations: int
    residual_history: list = field(default_factory=list)
    conv_rate: float = 0.0
    converged: bool = False
    wall_time: float = 0.0
    solution: np.ndarray | None = None


def conv_rate(history):
    """Geometric-mean convergence rate of a residual history."""
    if len(history) < 2:
        raise TooFewIterations("need at least two residual entries")
    steps = len(history) - 1
    return float((history[-1] / history[0]) ** (1.0 / steps))


def build_hierarchy(A0, symbol, variant, coarsest_dim, cycles=1):
    """Coarsen A0 with the given mask until the dimension drops to
    ``coarsest_dim`` (or below), Galerkin products throughout.

    Circulant chains stay symbol-represented; Toeplitz chains turn sparse
    banded after the first product.  Raises ``IncompatibleDimension`` when
    the dimension sequence is not divisible all the way down.
    """
    levels = []
    A = A0
    while A.n > coarsest_dim:
        try:
            transfer = GridTransfer(symbol, A.n, variant)
        except BadDimension as exc:
            raise IncompatibleDimension(
                f"cannot coarsen dimension {A.n} by g={symbol.arity} "
                f"({variant.value} cut): {exc}"
            ) from exc
        levels.append(MgLevel(A, transfer))
        A = galerkin_coarsen(A, transfer)
    levels.append(MgLevel(A, None))
    return MgHierarchy(levels, symbol.arity, cycles=cycles)


def mgm_solve(
    hierarchy,
    b,
    pre=GAUSS_SEIDEL,
    post=GAUSS_SEIDEL,
    tol=1e-7,
    max_iter=2000,
    x0=None,
):
    """Run outer multigrid cycles until the relative residual drops
    below ``tol`` or ``max_iter`` is reached.

    The residual is recomputed from scratch every outer iteration.  The
    initial guess defaults to zero; a zero right-hand side returns
    immediately (the 0/0 ratio is treated as converged).
    """
    A = hierarchy.levels[0].operator
    b = np.asarray(b, dtype=float)
    if b.shape != (A.n,):
        raise DimensionMismatch(f"rhs length {b.shape} does not match operator dim {A.n}")
    x = np.zeros(A.n) if x0 is None else np.array(x0, dtype=float, copy=True)
    start = time.perf_counter()
    r0 = float(np.linalg.norm(b - A.matvec(x)))
    history = [1.0]
    if r0 == 0.0:
        return SolveReport(0, history, 0.0, True, time.perf_counter() - start, x)
    converged = False
    iterations = 0
    for iterations in range(1, max_iter + 1):
        x = hierarchy.cycle(x, b, pre, post)
        rel = float(np.linalg.norm(b - A.matvec(x))) / r0
        history.append(rel)
        if rel < tol:
            converged = True
            break
    rate = conv_rate(history) if len(history) > 1 else 0.0
    return SolveReport(
        iterations=iterations,
        residual_history=history,
        conv_rate=rate,
        converged=converged,
        wall_time=time.perf_counter() - start,
        solution=x,
    )


def tgm_solve(A, b, P, pre=GAUSS_SEIDEL, post=GAUSS_SEIDEL, tol=1e-7, max_iter=2000):
    """Two-grid method: the exact two-level special case of the cycle.

    The coarse matrix is the Galerkin product and the coarse system is
    solved exactly, so the iterate sequence coincides with a two-level
    hierarchy run through ``mgm_solve``.
    """
    coarse = galerkin_coarsen(A, P)
    hierarchy = MgHierarchy(
        [MgLevel(A, P), MgLevel(coarse, None)], P.arity, cycles=1
    )
    return mgm_solve(hierarchy, b, pre=pre, post=post, tol=tol, max_iter=max_iter)
