import numpy as np
import pytest

from bszego import (BiPoly, InvalidDegree, RootNearTorus, UniPoly,
                    ZeroPolynomial, gcd_approx, reflect, roots, split_stable)
from bszego.poly import (canonical_phase, divide_bipoly_z, flip_root,
                         reflect_uni, z_content)

from conftest import torus_grid


def test_reflect_constant():
    r = reflect(BiPoly([[1.0]]), (0, 0))
    assert np.allclose(r.coeffs, [[1.0]])


def test_reflect_2_minus_zw():
    # zw (2 - 1/(zw)) = 2 zw - 1
    r = reflect(BiPoly([[2, 0], [0, -1]]), (1, 1))
    assert np.allclose(r.coeffs, [[-1, 0], [0, 2]])


def test_reflect_z_minus_w():
    r = reflect(BiPoly([[0, -1], [1, 0]]), (1, 1))
    assert np.allclose(r.coeffs, [[0, 1], [-1, 0]])


def test_reflect_involution_random():
    rng = np.random.default_rng(0)
    for _ in range(20):
        n, m = rng.integers(0, 4, 2)
        c = rng.normal(size=(n + 1, m + 1)) + 1j * rng.normal(size=(n + 1, m + 1))
        p = BiPoly(c)
        # reflect at a padded degree pair as well as the exact one
        for extra in ((0, 0), (2, 1)):
            at = (n + extra[0], m + extra[1])
            twice = reflect(reflect(p, at), at)
            assert np.allclose(twice.coeffs[: n + 1, : m + 1], c, atol=1e-14)


def test_reflect_preserves_modulus_on_torus():
    rng = np.random.default_rng(1)
    c = rng.normal(size=(3, 2)) + 1j * rng.normal(size=(3, 2))
    p = BiPoly(c)
    r = reflect(p, (2, 1))
    zz, ww = torus_grid(64)
    assert np.max(np.abs(np.abs(p(zz, ww)) - np.abs(r(zz, ww)))) < 1e-12


def test_reflect_rejects_small_degree():
    with pytest.raises(InvalidDegree):
        reflect(BiPoly([[0, 0], [0, 1.0]]), (1, 0))


def test_roots_linear():
    assert np.allclose(roots(UniPoly([1, -2])), [0.5])


def test_roots_quadratic_pair():
    got = sorted(roots(UniPoly([1, 0, 1])), key=lambda v: v.imag)
    assert np.allclose(got, [-1j, 1j])


def test_roots_product_expansion():
    # (1 - 2z)(3 - z) = 3 - 7z + 2z^2 ; companion oracle gives {1/2, 3}
    got = sorted(roots(UniPoly([3, -7, 2])).real)
    assert np.allclose(got, [0.5, 3.0], atol=1e-12)


def test_roots_zero_rejected():
    with pytest.raises(ZeroPolynomial):
        roots(UniPoly([0.0]))


def test_roots_vieta_property():
    rng = np.random.default_rng(2)
    for _ in range(10):
        deg = int(rng.integers(1, 11))
        c = rng.normal(size=deg + 1) + 1j * rng.normal(size=deg + 1)
        c[-1] += 3.0  # keep the leading coefficient well away from zero
        u = UniPoly(c)
        rebuilt = c[-1] * np.polynomial.polynomial.polyfromroots(roots(u))
        assert np.max(np.abs(rebuilt - c)) < 1e-8 * np.max(np.abs(c))


def test_split_stable_constant():
    rs = split_stable(UniPoly([2.0]))
    assert rs.beta == 0
    assert np.allclose(rs.stable.coeffs, [2.0])
    assert np.allclose(rs.unstable.coeffs, [1.0])


def test_split_stable_mixed():
    rs = split_stable(UniPoly([3, -7, 2]))
    assert rs.beta == 1
    # unstable part is monic with the single disk root 1/2
    assert np.allclose(rs.unstable.coeffs, [-0.5, 1.0])
    prod = np.convolve(rs.stable.coeffs, rs.unstable.coeffs)
    assert np.allclose(prod, [3, -7, 2])


def test_split_stable_root_on_circle():
    with pytest.raises(RootNearTorus):
        split_stable(UniPoly([1, -1]))


def test_split_stable_product_property():
    rng = np.random.default_rng(3)
    for _ in range(15):
        deg = int(rng.integers(1, 9))
        mods = np.where(rng.uniform(size=deg) < 0.5,
                        rng.uniform(0.2, 0.9, deg), rng.uniform(1.1, 3.0, deg))
        rts = mods * np.exp(2j * np.pi * rng.uniform(size=deg))
        lead = 1.0 + rng.normal() * 0.2
        u = UniPoly(lead * np.polynomial.polynomial.polyfromroots(rts))
        rs = split_stable(u)
        prod = np.convolve(rs.stable.coeffs, rs.unstable.coeffs)
        prod = np.pad(prod, (0, len(u.coeffs) - len(prod)))
        assert np.max(np.abs(prod - u.coeffs)) < 1e-10 * np.max(np.abs(u.coeffs))
        assert rs.beta == int(np.sum(mods < 1))


def test_gcd_exact_factor():
    a = UniPoly([-2, 1])
    b = UniPoly(np.convolve([-2, 1], [-3, 1]))
    g = gcd_approx([a, b])
    assert np.allclose(g.coeffs, [-2, 1])


def test_gcd_coprime():
    g = gcd_approx([UniPoly([4.0]), UniPoly([0, 2.0])])
    assert np.allclose(g.coeffs, [1.0])


def test_gcd_multiplicity():
    # (z-2)^2 (z+1) and (z-2)(z-5): shared root z=2 with multiplicity 1
    u1 = UniPoly(np.polynomial.polynomial.polyfromroots([2, 2, -1]))
    u2 = UniPoly(np.polynomial.polynomial.polyfromroots([2, 5]))
    g = gcd_approx([u1, u2])
    assert g.degree == 1
    assert np.allclose(g.coeffs, [-2, 1], atol=1e-8)


def test_gcd_all_zero():
    with pytest.raises(ZeroPolynomial):
        gcd_approx([UniPoly([0.0]), UniPoly([0.0, 0.0])])


def test_flip_root_preserves_circle_modulus():
    u = UniPoly(np.polynomial.polynomial.polyfromroots([2.5, -1.7j]))
    flipped = flip_root(u, 2.5)
    z = np.exp(1j * np.linspace(0, 2 * np.pi, 101))
    assert np.max(np.abs(np.abs(u(z)) - np.abs(flipped(z)))) < 1e-12
    assert np.min(np.abs(roots(flipped))) < 1.0


def test_z_content():
    h = UniPoly([-2, 1.0])
    g = BiPoly([[3, 0], [0, -1.0]])
    p = h.to_bipoly() * g
    hh, gg, res = z_content(p)
    assert res < 1e-10
    assert np.allclose(hh.coeffs, [-2, 1])          # monic gcd
    assert np.allclose((hh.to_bipoly() * gg).coeffs, p.coeffs, atol=1e-10)


def test_divide_bipoly_z():
    d = UniPoly([1, 1.0])
    p = d.to_bipoly() * BiPoly([[1, 2], [3, 4.0]])
    q, res = divide_bipoly_z(p, d)
    assert res < 1e-12
    assert np.allclose(q.coeffs, [[1, 2], [3, 4]])


def test_canonical_phase():
    p = BiPoly(np.array([[2j, 0], [0, 1.0]]))
    cp = canonical_phase(p)
    # the largest w^0-row coefficient becomes real positive
    assert abs(cp.coeffs[0, 0] - 2.0) < 1e-14


def test_transpose_swaps_variables():
    rng = np.random.default_rng(8)
    c = rng.normal(size=(3, 2)) + 1j * rng.normal(size=(3, 2))
    p = BiPoly(c)
    q = p.transposed()
    z, w = 0.4 + 0.2j, -1.1 + 0.6j
    assert abs(p(z, w) - q(w, z)) < 1e-12


def test_reflect_uni_padding():
    u = UniPoly([1.0, -2.0])
    r = reflect_uni(u, 3)
    assert np.allclose(r.coeffs, [0, 0, -2, 1])
