"""Zero orders, coarse symbols, and certification verdicts."""

import numpy as np
import pytest

from subdivmg import (
    HypothesisViolated,
    SubdivisionSymbol,
    TrigSymbol,
    binary_pseudo_spline,
    certify_tgm,
    certify_vcycle,
    coarse_symbol,
    cohen_check,
    g_corners,
    generation_degree,
    mirror_points,
    order_of_zero,
    ternary_pseudo_spline,
)

LAPLACE = TrigSymbol({0: 2.0, 1: -1.0})
BIHARMONIC = TrigSymbol({0: 6.0, 1: -4.0, 2: 1.0})

TERNARY_ORDERS = [(1, 1), (2, 1), (3, 1), (3, 3), (4, 1), (4, 3), (5, 1), (5, 3), (5, 5)]


def dense_circulant(f, n):
    col = np.zeros(n)
    for j, a in f.coefficients.items():
        col[j % n] += a
    import scipy.linalg

    return scipy.linalg.circulant(col)


def dense_transfer(p, n):
    """Explicit C_n(p) K^T for the circulant cut."""
    trig = TrigSymbol.from_subdivision(p)
    return dense_circulant(trig, n)[:, :: p.arity]


def test_g_corners_examples():
    assert np.allclose(sorted(g_corners(0.0, 2)), [0.0, np.pi])
    assert np.allclose(sorted(g_corners(0.0, 3)), [0.0, 2 * np.pi / 3, 4 * np.pi / 3])
    assert np.allclose(sorted(g_corners(np.pi / 2, 2)), [np.pi / 2, 3 * np.pi / 2])


def test_mirror_points_examples():
    assert np.allclose(mirror_points(0.0, 2), [np.pi])
    assert np.allclose(mirror_points(0.0, 3), [2 * np.pi / 3, 4 * np.pi / 3])
    assert np.allclose(mirror_points(np.pi, 2), [0.0])


def test_corner_set_invariance():
    rng = np.random.default_rng(3)
    for g in (2, 3, 5):
        for x in rng.uniform(0, 2 * np.pi, 10):
            corners = g_corners(x, g)
            assert len(corners) == g
            shifted = np.mod(corners + 2 * np.pi / g, 2 * np.pi)
            assert np.allclose(sorted(shifted), sorted(corners), atol=1e-12)


def test_order_of_zero_examples():
    assert order_of_zero(LAPLACE, 0.0).order == 2
    assert order_of_zero(BIHARMONIC, 0.0).order == 4
    assert order_of_zero(BIHARMONIC, 0.0).leading_derivative == pytest.approx(24.0)
    p20 = TrigSymbol.from_subdivision(binary_pseudo_spline(2, 0))
    assert order_of_zero(p20, np.pi).order == 4


def test_order_of_zero_not_a_zero():
    report = order_of_zero(LAPLACE, np.pi)
    assert report.order == 0
    assert not report.is_zero
    assert report.leading_derivative == pytest.approx(4.0)


def test_generation_degree_examples():
    assert generation_degree(binary_pseudo_spline(2, 0)) == 3
    assert generation_degree(ternary_pseudo_spline(3, 1)) == 3
    assert generation_degree(binary_pseudo_spline(1, 0)) == 1


@pytest.mark.parametrize("J", range(1, 6))
def test_generation_degree_binary_family(J):
    for L in range(J):
        assert generation_degree(binary_pseudo_spline(J, L)) == 2 * J - 1


@pytest.mark.parametrize("J,L", TERNARY_ORDERS)
def test_generation_degree_ternary_family(J, L):
    assert generation_degree(ternary_pseudo_spline(J, L)) == J


def test_coarse_symbol_laplacian_hat():
    fc = coarse_symbol(LAPLACE, binary_pseudo_spline(1, 0))
    assert fc.coefficients == pytest.approx({0: 1.0, 1: -0.5, -1: -0.5}, abs=1e-13)


def test_coarse_symbol_of_constant():
    one = TrigSymbol({0: 1.0})
    for p in (binary_pseudo_spline(2, 1), ternary_pseudo_spline(3, 3)):
        fc = coarse_symbol(one, p)
        g = p.arity
        xs = np.linspace(0, 2 * np.pi, 64, endpoint=False)
        direct = sum(p.eval(xs / g + 2 * np.pi * j / g) ** 2 for j in range(g)) / g
        assert np.allclose(fc.eval(xs), direct, atol=1e-12)


def test_coarse_symbol_pointwise_identity():
    xs = np.linspace(0, 2 * np.pi, 1024, endpoint=False)
    for f in (LAPLACE, BIHARMONIC):
        for p in (binary_pseudo_spline(2, 1), ternary_pseudo_spline(5, 3)):
            fc = coarse_symbol(f, p)
            g = p.arity
            direct = sum(
                f.eval(xs / g + 2 * np.pi * j / g) * p.eval(xs / g + 2 * np.pi * j / g) ** 2
                for j in range(g)
            ) / g
            assert np.max(np.abs(fc.eval(xs) - direct)) <= 1e-11


@pytest.mark.parametrize("f", [LAPLACE, BIHARMONIC])
@pytest.mark.parametrize(
    "p",
    [
        binary_pseudo_spline(1, 0),
        binary_pseudo_spline(2, 1),
        binary_pseudo_spline(3, 2),
        ternary_pseudo_spline(1, 1),
        ternary_pseudo_spline(3, 3),
        ternary_pseudo_spline(5, 5),
    ],
)
def test_coarse_symbol_matches_dense_galerkin(f, p):
    g = p.arity
    for n in (g**3, g**4):
        P = dense_transfer(p, n)
        reference = P.conj().T @ dense_circulant(f, n) @ P
        fc = coarse_symbol(f, p)
        assert np.max(np.abs(reference - dense_circulant(fc, n // g))) <= 1e-10


def test_coarse_symbol_preserves_zero_order():
    fc = coarse_symbol(BIHARMONIC, binary_pseudo_spline(2, 0))
    assert order_of_zero(fc, 0.0).order == 4
    fc3 = coarse_symbol(BIHARMONIC, ternary_pseudo_spline(3, 3))
    assert order_of_zero(fc3, 0.0).order == 4


def test_certify_tgm_biharmonic():
    # m = 4 needs generation degree >= ceil(4/2) - 1 = 1
    assert certify_tgm(BIHARMONIC, binary_pseudo_spline(2, 1)).tgm_ok
    # degree of p_{1,0} is exactly 1, so the two-grid condition still holds
    report = certify_tgm(BIHARMONIC, binary_pseudo_spline(1, 0))
    assert report.tgm_ok
    assert not report.vcycle_zero_condition_ok
    assert certify_tgm(LAPLACE, binary_pseudo_spline(1, 0)).tgm_ok


def test_certify_tgm_away_from_origin():
    # f = 2 + 2 cos x vanishes only at pi; mirror point of pi is 0
    f = TrigSymbol({0: 2.0, 1: 1.0})
    good = SubdivisionSymbol({-1: -0.5, 0: 1.0, 1: -0.5}, 2)  # 1 - cos x, double zero at 0
    report = certify_tgm(f, good, x0=np.pi)
    assert report.required_order == 2
    assert report.tgm_ok
    bad = binary_pseudo_spline(1, 0)  # vanishes at pi, not at 0
    assert not certify_tgm(f, bad, x0=np.pi).tgm_ok


def test_certify_vcycle_verdicts():
    assert certify_vcycle(BIHARMONIC, binary_pseudo_spline(2, 0)).vcycle_ok
    assert certify_vcycle(BIHARMONIC, ternary_pseudo_spline(3, 3)).vcycle_ok
    report = certify_vcycle(BIHARMONIC, binary_pseudo_spline(1, 0))
    assert not report.vcycle_ok
    assert report.generation_degree == 1
    assert report.required_order == 4


def test_certify_rejects_nonvanishing_f():
    f = TrigSymbol({0: 3.0, 1: -1.0})  # strictly positive
    with pytest.raises(HypothesisViolated):
        certify_vcycle(f, binary_pseudo_spline(2, 0))


def test_certify_rejects_extra_zero():
    # (2 - 2 cos x)(2 + 2 cos x) vanishes at 0 and pi
    f = TrigSymbol({0: 2.0, 2: -1.0})
    with pytest.raises(HypothesisViolated):
        certify_vcycle(f, binary_pseudo_spline(2, 0))


def test_cohen_examples():
    assert cohen_check(ternary_pseudo_spline(3, 3)).ok
    assert cohen_check(binary_pseudo_spline(2, 0)).ok
    # symbol 2 cos x vanishes at the endpoint pi/2 of the binary interval
    boundary_zero = SubdivisionSymbol({-1: 1, 1: 1}, 2)
    result = cohen_check(boundary_zero)
    assert not result.ok
    assert result.min_modulus <= 1e-12
    # symbol 2 cos(2x) vanishes strictly inside, between grid points
    interior_zero = SubdivisionSymbol({-2: 1, 2: 1}, 2)
    result = cohen_check(interior_zero)
    assert not result.ok
    assert abs(abs(result.minimizer) - np.pi / 4) < 1e-6


@pytest.mark.parametrize(
    "p",
    [binary_pseudo_spline(J, L) for J in range(1, 4) for L in range(J)]
    + [ternary_pseudo_spline(J, L) for (J, L) in [(1, 1), (2, 1), (3, 1), (3, 3), (5, 3), (5, 5)]],
)
def test_cohen_holds_for_all_pseudo_splines(p):
    assert cohen_check(p).ok


def test_report_serialization_formats():
    report = certify_vcycle(BIHARMONIC, binary_pseudo_spline(2, 1))
    text = report.to_text()
    assert "generation degree: 3" in text
    assert "vcycle: ok" in text
    kv = dict(line.split("=", 1) for line in report.to_keyvalues().splitlines())
    assert kv["tgm_ok"] == "true"
    assert kv["vcycle_ok"] == "true"
    assert kv["generation_degree"] == "3"
    assert kv["required_order"] == "4"
