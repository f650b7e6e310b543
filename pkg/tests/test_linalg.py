"""Structured operators, sampling maps, transfers, Galerkin products."""

import numpy as np
import pytest
import scipy.linalg

from subdivmg import (
    BadDimension,
    BandedOperator,
    CirculantOperator,
    CutVariant,
    DenseOperator,
    DimensionMismatch,
    GridTransfer,
    ToeplitzOperator,
    TrigSymbol,
    binary_pseudo_spline,
    downsample,
    galerkin_coarsen,
    packaging_check,
    ternary_pseudo_spline,
    upsample,
)

LAPLACE = TrigSymbol({0: 2.0, 1: -1.0})
BIHARMONIC = TrigSymbol({0: 6.0, 1: -4.0, 2: 1.0})

ALL_SYMBOLS = [binary_pseudo_spline(J, L) for J in range(1, 4) for L in range(J)] + [
    ternary_pseudo_spline(J, L) for (J, L) in [(1, 1), (2, 1), (3, 1), (3, 3), (5, 3), (5, 5)]
]


def test_circulant_matvec_examples():
    identity = CirculantOperator(TrigSymbol({0: 1.0}), 4)
    v = np.array([1.0, 2.0, 3.0, 4.0])
    assert np.allclose(identity.matvec(v), v)
    lap = CirculantOperator(LAPLACE, 4)
    assert np.allclose(lap.matvec(np.array([1.0, 0, 0, 0])), [2, -1, 0, -1])


def test_toeplitz_matvec_example():
    lap = ToeplitzOperator(LAPLACE, 4)
    assert np.allclose(lap.matvec(np.array([1.0, 0, 0, 0])), [2, -1, 0, 0])


@pytest.mark.parametrize("n", [4, 9, 16, 27, 64])
@pytest.mark.parametrize("f", [LAPLACE, BIHARMONIC, TrigSymbol({0: 3.0, 1: 1.0, 3: 0.25})])
def test_matvec_agrees_with_dense(n, f):
    rng = np.random.default_rng(n)
    v = rng.standard_normal(n)
    for op in (CirculantOperator(f, n), ToeplitzOperator(f, n)):
        dense = op.to_dense()
        scale = np.linalg.norm(dense @ v) + 1.0
        assert np.linalg.norm(op.matvec(v) - dense @ v) <= 1e-12 * scale


def test_circulant_wrap_column():
    op = CirculantOperator(BIHARMONIC, 8)
    col = op.to_dense()[:, 0]
    assert np.allclose(col, [6, -4, 1, 0, 0, 0, 1, -4])


def test_downsample_examples():
    assert np.allclose(downsample(np.arange(1.0, 7), 2, CutVariant.CIRCULANT), [1, 3, 5])
    assert np.allclose(downsample(np.arange(1.0, 8), 2, CutVariant.DIRICHLET), [2, 4, 6])
    assert np.allclose(downsample(np.arange(1.0, 9), 3, CutVariant.DIRICHLET), [3, 6])


def test_upsample_examples():
    assert np.allclose(upsample(np.array([1.0, 2]), 2, CutVariant.CIRCULANT, 4), [1, 0, 2, 0])
    assert np.allclose(
        upsample(np.array([1.0, 2, 3]), 2, CutVariant.DIRICHLET, 7), [0, 1, 0, 2, 0, 3, 0]
    )


def test_sampling_dimension_errors():
    with pytest.raises(BadDimension):
        downsample(np.zeros(7), 2, CutVariant.CIRCULANT)
    with pytest.raises(BadDimension):
        downsample(np.zeros(8), 2, CutVariant.DIRICHLET)
    with pytest.raises(BadDimension):
        upsample(np.zeros(3), 2, CutVariant.CIRCULANT, 5)


def test_sampling_adjointness():
    rng = np.random.default_rng(11)
    for g, variant, n in [
        (2, CutVariant.CIRCULANT, 16),
        (3, CutVariant.CIRCULANT, 27),
        (2, CutVariant.DIRICHLET, 15),
        (3, CutVariant.DIRICHLET, 26),
    ]:
        m = len(downsample(np.zeros(n), g, variant))
        for _ in range(10):
            u = rng.standard_normal(n)
            v = rng.standard_normal(m)
            lhs = downsample(u, g, variant) @ v
            rhs = u @ upsample(v, g, variant, n)
            assert abs(lhs - rhs) <= 1e-12


def test_prolong_hat_column_circulant():
    P = GridTransfer(binary_pseudo_spline(1, 0), 8, CutVariant.CIRCULANT)
    e0 = np.zeros(4)
    e0[0] = 1.0
    assert np.allclose(P.prolong(e0), [1, 0.5, 0, 0, 0, 0, 0, 0.5])


def test_prolong_ternary_dirichlet_columns():
    P = GridTransfer(ternary_pseudo_spline(1, 1), 8, CutVariant.DIRICHLET)
    dense = P.as_dense()
    trig = TrigSymbol.from_subdivision(ternary_pseudo_spline(1, 1))
    reference = ToeplitzOperator(trig, 8).to_dense()[:, [2, 5]]
    assert np.allclose(dense, reference, atol=1e-14)
    assert np.allclose(dense[:, 0], np.array([1, 2, 3, 2, 1, 0, 0, 0]) / 3.0)


@pytest.mark.parametrize("p", ALL_SYMBOLS)
def test_transfer_adjointness(p):
    g = p.arity
    n = {2: 31, 3: 26}[g]
    P = GridTransfer(p, n, CutVariant.DIRICHLET)
    rng = np.random.default_rng(5)
    for _ in range(8):
        u = rng.standard_normal(n)
        v = rng.standard_normal(P.coarse_dim)
        assert abs(P.restrict(u) @ v - u @ P.prolong(v)) <= 1e-12 * (1 + n)


def test_transfer_matrix_matches_application():
    for p, variant, n in [
        (binary_pseudo_spline(2, 1), CutVariant.CIRCULANT, 16),
        (ternary_pseudo_spline(3, 3), CutVariant.DIRICHLET, 26),
    ]:
        P = GridTransfer(p, n, variant)
        dense = P.as_dense()
        rng = np.random.default_rng(1)
        v = rng.standard_normal(P.coarse_dim)
        assert np.allclose(P.prolong(v), dense @ v, atol=1e-12)
        u = rng.standard_normal(n)
        assert np.allclose(P.restrict(u), dense.conj().T @ u, atol=1e-12)
        assert np.allclose(P.as_sparse().toarray(), dense, atol=1e-15)


def test_galerkin_circulant_stays_symbolic():
    A = CirculantOperator(LAPLACE, 8)
    P = GridTransfer(binary_pseudo_spline(1, 0), 8, CutVariant.CIRCULANT)
    coarse = galerkin_coarsen(A, P)
    assert isinstance(coarse, CirculantOperator)
    assert coarse.n == 4
    assert coarse.symbol.coefficients == pytest.approx({0: 1.0, 1: -0.5, -1: -0.5}, abs=1e-13)


def test_galerkin_dense_identity():
    P = GridTransfer(binary_pseudo_spline(2, 1), 15, CutVariant.DIRICHLET)
    A = DenseOperator(np.eye(15))
    coarse = galerkin_coarsen(A, P)
    dense_p = P.as_dense()
    assert np.allclose(coarse.matrix, dense_p.T @ dense_p, atol=1e-14)


def test_galerkin_toeplitz_matches_dense_oracle():
    A = ToeplitzOperator(BIHARMONIC, 15)
    P = GridTransfer(binary_pseudo_spline(2, 1), 15, CutVariant.DIRICHLET)
    coarse = galerkin_coarsen(A, P)
    assert coarse.n == 7
    dense_p = P.as_dense()
    reference = dense_p.conj().T @ A.to_dense() @ dense_p
    assert np.max(np.abs(coarse.to_dense() - reference)) <= 1e-12
    assert np.max(np.abs(coarse.to_dense() - coarse.to_dense().T)) <= 1e-12


@pytest.mark.parametrize("n,g", [(8, 2), (16, 2), (27, 3)])
def test_galerkin_circulant_matches_dense_oracle(n, g):
    p = binary_pseudo_spline(2, 0) if g == 2 else ternary_pseudo_spline(3, 1)
    A = CirculantOperator(BIHARMONIC, n)
    P = GridTransfer(p, n, CutVariant.CIRCULANT)
    coarse = galerkin_coarsen(A, P)
    dense_p = P.as_dense()
    reference = dense_p.conj().T @ A.to_dense() @ dense_p
    assert np.max(np.abs(coarse.to_dense() - reference)) <= 1e-10


def test_galerkin_hermitian_preservation():
    A = ToeplitzOperator(BIHARMONIC, 26)
    P = GridTransfer(ternary_pseudo_spline(3, 3), 26, CutVariant.DIRICHLET)
    G = galerkin_coarsen(A, P).to_dense()
    assert np.max(np.abs(G - G.conj().T)) <= 1e-12


def test_galerkin_dimension_mismatch():
    A = ToeplitzOperator(BIHARMONIC, 15)
    P = GridTransfer(binary_pseudo_spline(2, 1), 31, CutVariant.DIRICHLET)
    with pytest.raises(DimensionMismatch):
        galerkin_coarsen(A, P)


@pytest.mark.parametrize("p", ALL_SYMBOLS)
def test_prolongation_full_column_rank(p):
    g = p.arity
    for variant, n in [
        (CutVariant.DIRICHLET, {2: 31, 3: 26}[g]),
        (CutVariant.CIRCULANT, {2: 32, 3: 27}[g]),
    ]:
        P = GridTransfer(p, n, variant)
        smallest = scipy.linalg.svdvals(P.as_dense())[-1]
        assert smallest > 1e-8


@pytest.mark.parametrize("n,g", [(4, 2), (8, 2), (9, 3), (27, 3), (6, 2)])
def test_packaging_property(n, g):
    assert packaging_check(n, g) <= 1e-12


def test_packaging_bad_dimension():
    with pytest.raises(BadDimension):
        packaging_check(10, 3)


def test_matvec_dimension_mismatch():
    with pytest.raises(DimensionMismatch):
        ToeplitzOperator(LAPLACE, 5).matvec(np.zeros(4))


def test_banded_operator_round_trip():
    A = ToeplitzOperator(BIHARMONIC, 9)
    banded = BandedOperator(A.to_sparse())
    rng = np.random.default_rng(2)
    v = rng.standard_normal(9)
    assert np.allclose(banded.matvec(v), A.matvec(v))
    assert np.allclose(banded.diagonal(), A.diagonal())
