"""Structured matrix machinery: circulant and banded-Toeplitz operators,
down/upsampling, grid transfer application, and Galerkin coarsening.

Circulant operators never materialize a matrix: matvecs go through the
FFT diagonalization and Galerkin products stay at the symbol level.
Toeplitz operators use direct banded convolution, which is exact at the
boundaries; their Galerkin products are stored sparse (banded), and dense
operators stay dense.
"""

from __future__ import annotations

import enum

import numpy as np
import scipy.linalg
import scipy.sparse as sp

from .analysis import TrigSymbol, coarse_symbol
from .errors import BadDimension, DimensionMismatch, ZeroDiagonal

TWO_PI = 2.0 * np.pi


class StructuredOperator:
    """Square operator with a uniform matvec/diagonal/dense contract."""

    n = 0
    kind = "abstract"

    def matvec(self, v):
        raise NotImplementedError

    def to_dense(self):
        raise NotImplementedError

    def to_sparse(self):
        return sp.csr_matrix(self.to_dense())

    def diagonal(self):
        return np.diag(self.to_dense()).copy()

    def lower_solve(self, r):
        """Solve (D + L) y = r with the lower triangle of the operator."""
        tril = getattr(self, "_tril_cache", None)
        if tril is None:
            dense = np.asarray(self.to_dense())
            if np.any(np.diag(dense) == 0):
                raise ZeroDiagonal("operator has zero diagonal entries")
            tril = np.tril(dense)
            self._tril_cache = tril
        return scipy.linalg.solve_triangular(tril, r, lower=True)

    def _check_vector(self, v):
        v = np.asarray(v)
        if v.shape != (self.n,):
            raise DimensionMismatch(f"expected vector of length {self.n}, got shape {v.shape}")
        return v


class CirculantOperator(StructuredOperator):
    """Circulant matrix C_n(f) with eigenvalues f(2 pi r / n)."""

    kind = "circulant"

    def __init__(self, symbol: TrigSymbol, n: int):
        n = int(n)
        if n < 1:
            raise BadDimension(f"dimension must be positive, got {n}")
        self.symbol = symbol
        self.n = n
        self._eigs = np.asarray(symbol.eval(TWO_PI * np.arange(n) / n), dtype=float)

    def eigenvalues(self):
        return self._eigs.copy()

    def matvec(self, v):
        v = self._check_vector(v)
        out = np.fft.fft(self._eigs * np.fft.ifft(v))
        if np.isrealobj(v):
            return out.real
        return out

    def to_dense(self):
        col = np.zeros(self.n)
        for j, a in self.symbol.coefficients.items():
            col[j % self.n] += a
        return scipy.linalg.circulant(col)

    def diagonal(self):
        diag = sum(
            a for j, a in self.symbol.coefficients.items() if j % self.n == 0
        )
        return np.full(self.n, diag)


class ToeplitzOperator(StructuredOperator):
    """Banded symmetric Toeplitz matrix T_n(f) with entries a_{r-s}."""

    kind = "toeplitz"

    def __init__(self, symbol: TrigSymbol, n: int):
        n = int(n)
        if n < 1:
            raise BadDimension(f"dimension must be positive, got {n}")
        self.symbol = symbol
        self.n = n
        self.bandwidth = min(symbol.degree, n - 1)
        d = self.bandwidth
        self._kernel = np.array([symbol.coefficient(k) for k in range(-d, d + 1)])
        self._band_cache = None

    def matvec(self, v):
        v = self._check_vector(v)
        d = self.bandwidth
        return np.convolve(v, self._kernel)[d : d + self.n]

    def to_dense(self):
        col = np.array([self.symbol.coefficient(k) for k in range(self.n)])
        return scipy.linalg.toeplitz(col)

    def to_sparse(self):
        d = self.bandwidth
        offsets = range(-d, d + 1)
        return sp.diags(
            [np.full(self.n - abs(k), self.symbol.coefficient(k)) for k in offsets],
            list(offsets),
            shape=(self.n, self.n),
            format="csr",
        )

    def diagonal(self):
        return np.full(self.n, self.symbol.coefficient(0))

    def lower_solve(self, r):
        if self._band_cache is None:
            a0 = self.symbol.coefficient(0)
            if a0 == 0:
                raise ZeroDiagonal("Toeplitz operator has zero diagonal")
            d = self.bandwidth
            ab = np.zeros((d + 1, self.n))
            for k in range(d + 1):
                ab[k, :] = self.symbol.coefficient(k)
            self._band_cache = (d, ab)
        d, ab = self._band_cache
        return scipy.linalg.solve_banded((d, 0), ab, r)


class BandedOperator(StructuredOperator):
    """Sparse-banded operator, the storage form of Galerkin products of
    Toeplitz matrices."""

    kind = "banded"

    def __init__(self, matrix):
        matrix = sp.csr_matrix(matrix)
        if matrix.shape[0] != matrix.shape[1]:
            raise BadDimension(f"operator must be square, got {matrix.shape}")
        self.matrix = matrix
        self.n = matrix.shape[0]
        self._band_cache = None

    def matvec(self, v):
        v = self._check_vector(v)
        return self.matrix @ v

    def to_dense(self):
        return self.matrix.toarray()

    def to_sparse(self):
        return self.matrix

    def diagonal(self):
        return self.matrix.diagonal()

    def lower_solve(self, r):
        if self._band_cache is None:
            diag = self.matrix.diagonal()
            if np.any(diag == 0):
                raise ZeroDiagonal("operator has zero diagonal entries")
            low = sp.tril(self.matrix).tocoo()
            width = int(np.max(low.row - low.col)) if low.nnz else 0
            ab = np.zeros((width + 1, self.n))
            ab[low.row - low.col, low.col] = low.data
            self._band_cache = (width, ab)
        width, ab = self._band_cache
        return scipy.linalg.solve_banded((width, 0), ab, r)


class DenseOperator(StructuredOperator):
    """Explicitly stored matrix."""

    kind = "dense"

    def __init__(self, matrix):
        matrix = np.asarray(matrix)
        if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1]:
            raise BadDimension(f"operator must be a square matrix, got shape {matrix.shape}")
        self.matrix = matrix
        self.n = matrix.shape[0]

    def matvec(self, v):
        v = self._check_vector(v)
        return self.matrix @ v

    def to_dense(self):
        return self.matrix.copy()

    def diagonal(self):
        return np.diag(self.matrix).copy()


class CutVariant(enum.Enum):
    """Downsampling pattern: which fine indices survive coarsening."""

    CIRCULANT = "circulant"  # keep 0, g, 2g, ...   (needs g | n)
    DIRICHLET = "dirichlet"  # keep g-1, 2g-1, ...  (needs g | n+1)


def coarse_dim(n, g, variant):
    """Coarse dimension induced by the cut, or BadDimension."""
    n, g = int(n), int(g)
    if variant is CutVariant.CIRCULANT:
        if n % g:
            raise BadDimension(f"circulant cut needs g | n, got n={n}, g={g}")
        m = n // g
    else:
        if (n + 1) % g:
            raise BadDimension(f"dirichlet cut needs g | n+1, got n={n}, g={g}")
        m = (n + 1) // g - 1
    if m < 1:
        raise BadDimension(f"coarse dimension {m} is empty for n={n}, g={g}")
    return m


def _offset(g, variant):
    return 0 if variant is CutVariant.CIRCULANT else g - 1


def downsample(v, g, variant):
    """Keep every g-th entry according to the cut variant."""
    v = np.asarray(v)
    m = coarse_dim(len(v), g, variant)
    out = v[_offset(g, variant) :: g]
    return out[:m].copy()


def upsample(v, g, variant, target_dim):
    """Exact adjoint of downsample: scatter into every g-th slot."""
    v = np.asarray(v)
    if coarse_dim(target_dim, g, variant) != len(v):
        raise BadDimension(
            f"cannot upsample length {len(v)} to {target_dim} with g={g}"
        )
    out = np.zeros(target_dim, dtype=v.dtype if v.dtype.kind == "c" else float)
    out[_offset(g, variant) :: g][: len(v)] = v
    return out


class GridTransfer:
    """Grid transfer operator built from a subdivision mask.

    Prolongation is one subdivision step: upsample by g, then convolve
    with the mask (circularly for the circulant cut, with boundary
    truncation for the Dirichlet cut).  Restriction is the exact adjoint.
    """

    def __init__(self, symbol, fine_dim, variant):
        self.symbol = symbol
        self.fine_dim = int(fine_dim)
        self.variant = variant
        self.coarse_dim = coarse_dim(self.fine_dim, symbol.arity, variant)
        trig = TrigSymbol.from_subdivision(symbol)
        if variant is CutVariant.CIRCULANT:
            self._conv = CirculantOperator(trig, self.fine_dim)
        else:
            self._conv = ToeplitzOperator(trig, self.fine_dim)

    @property
    def arity(self):
        return self.symbol.arity

    def prolong(self, coarse_vec):
        coarse_vec = np.asarray(coarse_vec)
        if coarse_vec.shape != (self.coarse_dim,):
            raise DimensionMismatch(
                f"expected coarse vector of length {self.coarse_dim}, got {coarse_vec.shape}"
            )
        return self._conv.matvec(upsample(coarse_vec, self.arity, self.variant, self.fine_dim))

    def restrict(self, fine_vec):
        fine_vec = np.asarray(fine_vec)
        if fine_vec.shape != (self.fine_dim,):
            raise DimensionMismatch(
                f"expected fine vector of length {self.fine_dim}, got {fine_vec.shape}"
            )
        return downsample(self._conv.matvec(fine_vec), self.arity, self.variant)

    def kept_indices(self):
        return np.arange(_offset(self.arity, self.variant), self.fine_dim, self.arity)[
            : self.coarse_dim
        ]

    def as_dense(self):
        return self._conv.to_dense()[:, self.kept_indices()]

    def as_sparse(self):
        cols = self._conv.to_sparse().tocsc()[:, self.kept_indices()]
        return cols.tocsr()


def galerkin_coarsen(A, P):
    """Galerkin product P^H A P in the cheapest faithful representation.

    Circulant operators under the circulant cut stay circulant with the
    coarse symbol; Toeplitz/banded operators produce a sparse banded
    result; dense operators stay dense.  Hermitian inputs give Hermitian
    outputs up to rounding.
    """
    if A.n != P.fine_dim:
        raise DimensionMismatch(f"operator dim {A.n} != transfer fine dim {P.fine_dim}")
    if isinstance(A, CirculantOperator) and P.variant is CutVariant.CIRCULANT:
        return CirculantOperator(coarse_symbol(A.symbol, P.symbol), P.coarse_dim)
    if isinstance(A, DenseOperator):
        dense_p = P.as_dense()
        return DenseOperator(dense_p.conj().T @ A.matrix @ dense_p)
    sparse_p = P.as_sparse()
    product = (sparse_p.conj().T @ A.to_sparse() @ sparse_p).tocsr()
    return BandedOperator(product)


def packaging_check(n, g):
    """Max deviation in the packaging identity tying the fine and coarse
    Fourier matrices through the downsampling pattern.

    Builds both sides explicitly (test support only) and returns the
    largest entrywise deviation, which should sit at rounding level.
    """
    n, g = int(n), int(g)
    if n % g:
        raise BadDimension(f"packaging check needs g | n, got n={n}, g={g}")
    m = n // g
    r = np.arange(n)
    fine = np.exp(-2j * np.pi * np.outer(r, r) / n) / np.sqrt(n)
    rc = np.arange(m)
    coarse = np.exp(-2j * np.pi * np.outer(rc, rc) / m) / np.sqrt(m)
    lhs = fine[::g, :]
    rhs = np.hstack([coarse] * g) / np.sqrt(g)
    return float(np.max(np.abs(lhs - rhs)))
