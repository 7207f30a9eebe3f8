import numpy as np
import pytest

from bszego import (BiPoly, InsufficientMoments, MomentDivergence, MomentTable,
                    NonPositiveDensity, QuadratureConfig, TrigPoly,
                    ZeroPolynomial, gram, is_positive, moments_from_density,
                    moments_from_trig)

from conftest import geometric_diag_moment, riemann_moment


def test_lebesgue_measure():
    t = moments_from_density(BiPoly([[1.0]]), 2, 2)
    expect = np.zeros((5, 5))
    expect[2, 2] = 1.0
    assert np.max(np.abs(t.c - expect)) < 1e-13


def test_diagonal_moments_2zw(table_2zw):
    for j in range(-3, 4):
        assert abs(table_2zw.at(j, j) - geometric_diag_moment(j, 2.0)) < 1e-12
    # everything off the diagonal is zero
    for j in range(-3, 4):
        for k in range(-3, 4):
            if j != k:
                assert abs(table_2zw.at(j, k)) < 1e-13


def test_univariate_factor_moments():
    t = moments_from_density(BiPoly([[2.0], [-1.0]]), 3, 1)   # 2 - z
    for j in range(-3, 4):
        assert abs(t.at(j, 0) - geometric_diag_moment(j, 2.0)) < 1e-12
        assert abs(t.at(j, 1)) < 1e-13


def test_hermitian_symmetry_exact(table_2zw):
    c = table_2zw.c
    assert np.array_equal(c, np.conj(c[::-1, ::-1]))


def test_real_coefficients_give_real_moments():
    p = BiPoly([[3.0, -1.0], [1.0, 0.5]])
    t = moments_from_density(p, 2, 2)
    assert float(np.max(np.abs(t.c.imag))) < 1e-11


def test_grid_doubling_stability(p_2zw):
    base = moments_from_density(p_2zw, 2, 2)
    finer = moments_from_density(
        p_2zw, 2, 2, QuadratureConfig(initial_grid=256, max_grid=4096))
    assert float(np.max(np.abs(base.c - finer.c))) < 1e-10


def test_divergence_for_torus_zero():
    with pytest.raises(MomentDivergence):
        moments_from_density(BiPoly([[1, 0], [0, -1.0]]), 1, 1)  # 1 - zw


def test_zero_polynomial_rejected():
    with pytest.raises(ZeroPolynomial):
        moments_from_density(BiPoly([[0.0]]), 1, 1)


def test_trig_lebesgue():
    one = TrigPoly(0, 0, np.array([[1.0 + 0j]]))
    t = moments_from_trig(one, 2, 2)
    assert abs(t.at(0, 0) - 1.0) < 1e-12
    assert abs(t.at(1, 2)) < 1e-13


def test_trig_matches_density(p_2zw, table_2zw):
    trig = TrigPoly.from_abs_squared(p_2zw)
    # |2 - zw|^2 = 5 - 2 zw - 2 conj(zw) on the torus
    assert abs(trig.at(0, 0) - 5.0) < 1e-14
    assert abs(trig.at(1, 1) + 2.0) < 1e-14
    t = moments_from_trig(trig, 3, 3)
    assert float(np.max(np.abs(t.c - table_2zw.c))) < 1e-10


def test_trig_riemann_oracle():
    # t = 4 - z conj(w) - conj(z) w, i.e. 4 - 2 cos(theta - phi)
    c = np.zeros((3, 3), dtype=complex)
    c[1, 1] = 4.0
    c[2, 0] = -1.0
    c[0, 2] = -1.0
    trig = TrigPoly(1, 1, c)
    table = moments_from_trig(trig, 1, 1)
    # analytic value 1/sqrt(12); also cross-checked by a dense Riemann sum
    assert abs(table.at(0, 0) - 1.0 / np.sqrt(12.0)) < 1e-10

    def dens(zz, ww):
        return 1.0 / (4.0 - zz * np.conj(ww) - np.conj(zz) * ww).real

    brute = riemann_moment(dens, 0, 0, N=4096)
    assert abs(table.at(0, 0) - brute) < 1e-8


def test_trig_rejects_sign_changing():
    c = np.zeros((3, 3), dtype=complex)
    c[1, 1] = 1.0
    c[2, 2] = 1.0
    c[0, 0] = 1.0
    with pytest.raises(NonPositiveDensity):
        moments_from_trig(TrigPoly(1, 1, c), 1, 1)


def test_gram_lebesgue_identity(lebesgue_table):
    g = gram(lebesgue_table, [(0, 0), (1, 0)], [(0, 0), (1, 0)])
    assert np.allclose(g, np.eye(2))


def test_gram_2zw_window(table_2zw):
    g = gram(table_2zw, [(0, 0), (1, 1)], [(0, 0), (1, 1)])
    assert np.allclose(g, [[1 / 3, 1 / 6], [1 / 6, 1 / 3]], atol=1e-12)


def test_gram_out_of_range(table_2zw):
    with pytest.raises(InsufficientMoments):
        gram(table_2zw, [(0, 0)], [(5, 0)])


def test_is_positive_lebesgue(lebesgue_table):
    ok, lam = is_positive(lebesgue_table, 2, 2)
    assert ok and abs(lam - 1.0) < 1e-12


def test_is_positive_2zw(table_2zw):
    ok, lam = is_positive(table_2zw, 1, 1)
    assert ok and lam > 0


def test_is_positive_degenerate():
    t = MomentTable(1, 1, np.zeros((3, 3), dtype=complex))
    ok, lam = is_positive(t, 1, 1)
    assert not ok


def test_gram_positive_for_bounded_density():
    rng = np.random.default_rng(5)
    p = BiPoly(rng.normal(size=(2, 2)) + np.diag([4.0, 0])[:2, :2])
    t = moments_from_density(p, 2, 2)
    sup = [(j, k) for j in range(3) for k in range(3)]
    g = gram(t, sup, sup)
    assert np.linalg.eigvalsh(0.5 * (g + g.conj().T))[0] > 0


def test_table_window_and_bounds(table_2zw):
    w = table_2zw.window(1, 1)
    assert w.jmax == 1 and abs(w.at(1, 1) - table_2zw.at(1, 1)) < 1e-15
    with pytest.raises(InsufficientMoments):
        table_2zw.at(4, 0)
    with pytest.raises(InsufficientMoments):
        table_2zw.window(4, 4)
