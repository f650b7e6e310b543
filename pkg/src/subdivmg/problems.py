"""Test problems: biharmonic finite differences and an isogeometric
collocation Laplacian, plus the B-spline machinery behind the latter."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .analysis import TrigSymbol
from .errors import BadDimension, IndexOutOfRange, InvalidDegree
from .linalg import DenseOperator, ToeplitzOperator


@dataclass
class ProblemInstance:
    """Linear system with a known exact solution (rhs = A @ exact)."""

    operator: object
    rhs: np.ndarray
    exact_solution: np.ndarray
    symbol: TrigSymbol | None
    description: str


def biharmonic_problem(n):
    """Fourth-order finite-difference system with stencil {1, -4, 6, -4, 1}.

    Homogeneous Dirichlet conditions make the matrix banded Toeplitz with
    symbol (2 - 2 cos x)**2, which has a quadruple zero at the origin.
    The exact solution is x_j = j/n.
    """
    n = int(n)
    if n < 1:
        raise BadDimension(f"dimension must be positive, got {n}")
    symbol = TrigSymbol({0: 6.0, 1: -4.0, 2: 1.0})
    operator = ToeplitzOperator(symbol, n)
    exact = np.arange(1, n + 1) / n
    rhs = operator.matvec(exact)
    return ProblemInstance(operator, rhs, exact, symbol, f"biharmonic n={n}")


class BSplineBasis:
    """Clamped B-spline basis of degree mu on [0, 1] with nu uniform
    breakpoint intervals.

    Knots are 0 and 1 with multiplicity mu + 1 and j / nu in between,
    giving nu + mu basis functions (0-based index).  The Greville
    abscissae are the mu-fold knot averages; the interior ones (all but
    the first and last basis function) serve as collocation points.
    """

    def __init__(self, degree, breakpoints):
        degree, breakpoints = int(degree), int(breakpoints)
        if degree < 1:
            raise InvalidDegree(f"degree must be >= 1, got {degree}")
        if breakpoints < 1:
            raise InvalidDegree(f"breakpoint count must be >= 1, got {breakpoints}")
        self.degree = degree
        self.breakpoints = breakpoints
        interior = np.arange(1, breakpoints) / breakpoints
        self.knots = np.concatenate(
            [np.zeros(degree + 1), interior, np.ones(degree + 1)]
        )
        self.num_functions = breakpoints + degree

    def greville(self, i):
        """Greville abscissa of basis function i (knot average)."""
        if not 0 <= i < self.num_functions:
            raise IndexOutOfRange(f"basis index {i} outside 0..{self.num_functions - 1}")
        return float(self.knots[i + 1 : i + 1 + self.degree].mean())

    @property
    def collocation_points(self):
        """Greville abscissae of the interior basis functions."""
        return np.array([self.greville(i) for i in range(1, self.num_functions - 1)])

    def basis_matrix(self, xs, derivative_order=0):
        """Values (or derivatives) of every basis function at the points.

        Returns an array of shape (num_functions, len(xs)); the recursion
        treats fractions with zero denominators as zero, and the rightmost
        interval is closed so x = 1 evaluates sanely.
        """
        k = int(derivative_order)
        if k < 0 or k > self.degree:
            raise ValueError(f"derivative order {k} outside 0..{self.degree}")
        t = self.knots
        xs = np.atleast_1d(np.asarray(xs, dtype=float))
        rows = len(t) - 1
        values = np.zeros((rows, len(xs)))
        last = t[-1]
        for i in range(rows):
            inside = (t[i] <= xs) & (xs < t[i + 1])
            if t[i] < t[i + 1] == last:
                inside |= xs == last
            values[i, inside] = 1.0
        # raise the degree with value recursion up to degree - k
        for m in range(1, self.degree - k + 1):
            nxt = np.zeros((rows - m, len(xs)))
            for i in range(rows - m):
                den1 = t[i + m] - t[i]
                den2 = t[i + m + 1] - t[i + 1]
                acc = 0.0
                if den1 > 0:
                    acc = (xs - t[i]) / den1 * values[i]
                if den2 > 0:
                    acc = acc + (t[i + m + 1] - xs) / den2 * values[i + 1]
                nxt[i] = acc
            values = nxt
        # then differentiate k times while raising to the full degree
        for step in range(1, k + 1):
            m = self.degree - k + step
            rows_now = values.shape[0] - 1
            nxt = np.zeros((rows_now, len(xs)))
            for i in range(rows_now):
                den1 = t[i + m] - t[i]
                den2 = t[i + m + 1] - t[i + 1]
                acc = 0.0
                if den1 > 0:
                    acc = values[i] / den1
                if den2 > 0:
                    acc = acc - values[i + 1] / den2
                nxt[i] = m * acc
            values = nxt
        return values


def bspline_eval(basis, j, x, derivative_order=0):
    """Value (or first/second derivative) of basis function j at x."""
    if not 0 <= j < basis.num_functions:
        raise IndexOutOfRange(f"basis index {j} outside 0..{basis.num_functions - 1}")
    if derivative_order not in (0, 1, 2):
        raise ValueError("derivative order must be 0, 1 or 2")
    return float(basis.basis_matrix([x], derivative_order)[j, 0])


def iga_laplacian_problem(breakpoints, degree):
    """Isogeometric collocation discretization of -u'' = h on [0, 1]
    with homogeneous Dirichlet conditions.

    Collocation at the interior Greville abscissae of the clamped
    B-spline space of degree mu over nu breakpoint intervals; dimension
    n = nu + mu - 2.  The matrix entries are the negated second
    derivatives of the interior basis functions at those points; it is
    banded with bandwidth <= mu but not symmetric near the boundary.
    """
    breakpoints, degree = int(breakpoints), int(degree)
    if degree < 2:
        raise InvalidDegree(f"collocation needs degree >= 2, got {degree}")
    if breakpoints < 2:
        raise InvalidDegree(f"collocation needs >= 2 breakpoints, got {breakpoints}")
    basis = BSplineBasis(degree, breakpoints)
    n = breakpoints + degree - 2
    tau = basis.collocation_points
    second = basis.basis_matrix(tau, 2)
    matrix = -second[1 : 1 + n, :].T
    idx = np.arange(n)
    exact = np.sin(5 * np.pi * idx / (n - 1)) + np.sin(n * np.pi * idx / (n - 1))
    rhs = matrix @ exact
    return ProblemInstance(
        DenseOperator(matrix),
        rhs,
        exact,
        None,
        f"iga-laplacian nu={breakpoints} mu={degree} (n={n})",
    )


def iga_symbol(degree, x, alpha_max=64):
    """Generating symbol of the collocation matrix interior, evaluated at x.

    ``f(x) = (2 - 2 cos x) * sum_a ((-1)^a 2 sin(x/2) / (x + 2 pi a))**(mu-1)``
    truncated to |a| <= alpha_max; the terms decay like |a|**(1-mu), so the
    default truncation is far below plotting accuracy.  For mu = 3 the sum
    telescopes to 1 and f reduces to the second-difference symbol.
    """
    degree = int(degree)
    if degree < 2:
        raise InvalidDegree(f"symbol defined for degree >= 2, got {degree}")
    scalar = np.ndim(x) == 0
    x = np.atleast_1d(np.asarray(x, dtype=float))
    alphas = np.arange(-alpha_max, alpha_max + 1)
    signs = np.where(alphas % 2 == 0, 1.0, -1.0)
    num = 2.0 * np.sin(x / 2.0)[None, :] * signs[:, None]
    den = x[None, :] + 2.0 * np.pi * alphas[:, None]
    ratio = np.where(den != 0.0, num / np.where(den == 0.0, 1.0, den), 1.0)
    h = np.sum(ratio ** (degree - 1), axis=0)
    out = (2.0 - 2.0 * np.cos(x)) * h
    return float(out[0]) if scalar else out
