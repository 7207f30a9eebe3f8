import numpy as np
import pytest

from bszego import (BiPoly, DNotAdmissible, MatrixConditionFails,
                    MomentDivergence, MomentSpace,
                    build_operators, check_matrix_condition,
                    enumerate_split_polys, gw_check, moments_from_density,
                    moments_from_grid_function, shift_split_from_p,
                    split_poly_from_condition)
from bszego.space import containment_defect, subspace_angle

from conftest import (gram_from_table, gram_schmidt_coeffs, max_modulus_gap,
                      random_corpus_poly)


@pytest.fixture(scope="module")
def space_2zw(table_2zw):
    return MomentSpace(table_2zw.window(1, 1), 1, 1)


def test_operators_2zw_frozen(space_2zw):
    # hand computation on the 4x4 Gram of [1, z, w, zw]:
    # only <1,1>=<z,z>=<w,w>=<zw,zw>=1/3 and <1,zw>=1/6 are nonzero, so
    # A = [[0]], T = [[0]], B = [[3 * conj(c_{1,1})]] = [[1/2]]
    ops = build_operators(space_2zw)
    assert ops.a_mat.shape == (1, 1) and abs(ops.a_mat[0, 0]) < 1e-12
    assert abs(ops.t_mat[0, 0]) < 1e-12
    assert abs(ops.b_mat[0, 0] - 0.5) < 1e-10


def test_operators_product_measure_dense_oracle():
    # p = (1-2z)(2-w): independent dense Gram-Schmidt oracle at (1, 1)
    p = BiPoly([[1], [-2.0]]) * BiPoly([[2.0, -1.0]])
    table = moments_from_density(p, 1, 1)
    sup = [(0, 0), (0, 1), (1, 0), (1, 1)]
    G = gram_from_table(table, sup)
    e = np.eye(4)
    # E1(0,1) = {1, w} minus {w}; E2(1,0) = {1, z} minus {z}; F2 analogous
    def complement(keep, remove):
        removed = gram_schmidt_coeffs(G, [e[i] for i in remove])
        outs = []
        for i in keep:
            v = e[i].astype(complex)
            for q in removed.T:
                v = v - (v @ G @ np.conj(q)) * q
            outs.append(v)
        return gram_schmidt_coeffs(G, outs)

    e1 = complement([0], [1])            # span{1} minus proj onto w
    we2 = complement([1], [3])           # w * (span{1,z} minus z) = {w} minus {zw}
    wf2 = complement([3], [1])           # w * ({1,z} minus 1) = {zw} minus {w}
    # shift by z inside coefficients: index map 1->z is 0->2, w->zw is 1->3
    shift = np.zeros((4, 4))
    shift[2, 0] = shift[3, 1] = 1.0
    ze1 = shift @ e1
    a_oracle = (ze1.T @ G @ np.conj(we2)).T
    t_oracle = (ze1.T @ G @ np.conj(e1)).T
    b_oracle = (wf2.T @ G @ np.conj(e1)).T
    ops = build_operators(MomentSpace(table, 1, 1))
    # compare up to the basis phases: magnitudes of the 1x1 entries
    assert abs(abs(ops.a_mat[0, 0]) - abs(a_oracle[0, 0])) < 1e-9
    assert abs(abs(ops.t_mat[0, 0]) - abs(t_oracle[0, 0])) < 1e-9
    assert abs(abs(ops.b_mat[0, 0]) - abs(b_oracle[0, 0])) < 1e-9
    rep = check_matrix_condition(ops)
    assert rep.holds and abs(ops.a_mat[0, 0]) < 1e-10


def test_condition_2zw(space_2zw):
    rep = check_matrix_condition(build_operators(space_2zw))
    assert rep.holds
    assert rep.dim_a == 0 and rep.dim_b == 1
    assert (rep.d_min, rep.d_max) == (0, 0)


def test_condition_lebesgue(lebesgue_table):
    sp = MomentSpace(lebesgue_table, 2, 1)
    ops = build_operators(sp)
    assert float(np.max(np.abs(ops.a_mat))) < 1e-13
    rep = check_matrix_condition(ops)
    assert rep.holds and rep.dim_a == 0


def test_condition_unstable_content():
    p = BiPoly([[1], [-2.0]]) * BiPoly([[2, 0], [0, -1.0]])
    table = moments_from_density(p, 2, 1)
    rep = check_matrix_condition(build_operators(MomentSpace(table, 2, 1)))
    assert rep.holds
    assert (rep.d_min, rep.d_max) == (0, 1)


def test_condition_fails_generic():
    # a mixture of Bernstein-Szego densities pointing in different
    # directions is not itself Bernstein-Szego; rotation-invariant
    # mixtures can never fail (they extend through one-variable theory),
    # so the blend must break the zw-symmetry
    def dens(zz, ww):
        return 0.5 / np.abs(2.0 - zz * ww) ** 2 + 0.5 / np.abs(2.0 - zz) ** 2

    table = moments_from_grid_function(dens, 2, 1)
    rep = check_matrix_condition(build_operators(MomentSpace(table, 2, 1)))
    assert not rep.holds
    assert rep.max_violation > 1e-4


def test_shift_split_2zw(space_2zw, p_2zw):
    split = shift_split_from_p(space_2zw, p_2zw)
    assert split.k1.dim == 0 and split.k2.dim == 1
    assert subspace_angle(space_2zw, split.k2, space_2zw.e1_basis(0, 1)) < 1e-10
    # split poly proportional to p itself (both unit norm, canonical phase)
    ip = space_2zw.inner(split.split_poly, p_2zw)
    assert abs(abs(ip) - space_2zw.norm(p_2zw)) < 1e-9


def test_shift_split_unstable(space_2zw):
    p = BiPoly([[1], [-2.0]]) * BiPoly([[2, 0], [0, -1.0]])
    table = moments_from_density(p, 2, 1)
    sp = MomentSpace(table, 2, 1)
    split = shift_split_from_p(sp, p)
    assert split.k1.dim == 1 and split.k2.dim == 1
    ip = sp.inner(split.split_poly, p)
    assert abs(abs(ip) - sp.norm(p)) < 1e-8


def test_shift_split_invariants_corpus():
    rng = np.random.default_rng(11)
    for _ in range(8):
        p = random_corpus_poly(rng, allow_unstable_q=True)
        n, m = p.deg
        table = moments_from_density(p, n, m)
        sp = MomentSpace(table, n, m)
        split = shift_split_from_p(sp, p)
        assert split.k1.dim + split.k2.dim == n
        if split.k1.dim and split.k2.dim:
            cross = sp.cross(split.k1, split.k2.shifted(1, 0))
            assert float(np.max(np.abs(cross))) < 1e-8
        e1big = sp.e1_basis(n, m)
        assert containment_defect(sp, split.k1, e1big) < 1e-8
        assert containment_defect(sp, split.k2.shifted(1, 0), e1big) < 1e-8


def test_divergent_density_split(p_2zw):
    with pytest.raises(MomentDivergence):
        moments_from_density(BiPoly([[1, 0], [0, -1.0]]), 1, 1)


def test_split_from_condition_d0(space_2zw, p_2zw):
    split = split_poly_from_condition(space_2zw, 1, 1, 0)
    assert max_modulus_gap(split.split_poly,
                           p_2zw * (1.0 / space_2zw.norm(p_2zw))) < 1e-8


def test_split_from_condition_d1_not_admissible(space_2zw):
    with pytest.raises(DNotAdmissible):
        split_poly_from_condition(space_2zw, 1, 1, 1)


def test_split_from_condition_fails_without_condition():
    def dens(zz, ww):
        return 0.5 / np.abs(2.0 - zz * ww) ** 2 + 0.5 / np.abs(2.0 - zz) ** 2

    table = moments_from_grid_function(dens, 2, 1)
    sp = MomentSpace(table, 2, 1)
    with pytest.raises(MatrixConditionFails):
        split_poly_from_condition(sp, 2, 1, 0)


def test_stratification_all_d():
    p = BiPoly([[1], [-2.0]]) * BiPoly([[2, 0], [0, -1.0]])
    punit = p * (1.0 / np.sqrt(1.0))   # unit norm in its own measure
    table = moments_from_density(p, 2, 1)
    sp = MomentSpace(table, 2, 1)
    for d in (0, 1):
        split = split_poly_from_condition(sp, 2, 1, d)
        from bszego.poly import split_stable
        assert split_stable(split.split_poly.z_slice(0)).beta == d
        assert split.k1.dim == d
        assert max_modulus_gap(split.split_poly,
                               p * (1.0 / sp.norm(p))) < 1e-7
    with pytest.raises(DNotAdmissible):
        split_poly_from_condition(sp, 2, 1, 2)


def test_split_uniqueness_for_fixed_poly():
    # the (K1, K2) attached to a split-poly are unique: rebuild from the
    # returned polynomial and compare spans
    p = BiPoly([[3], [-1.0]]) * BiPoly([[2, 0], [0, -1.0]])
    table = moments_from_density(p, 2, 1)
    sp = MomentSpace(table, 2, 1)
    for d in (0, 1):
        split = split_poly_from_condition(sp, 2, 1, d)
        again = shift_split_from_p(sp, split.split_poly)
        assert subspace_angle(sp, split.k1, again.k1) < 1e-7
        assert subspace_angle(sp, split.k2, again.k2) < 1e-7


def test_enumerate_single():
    p = BiPoly([[2, 0], [0, -1.0]])
    table = moments_from_density(p, 1, 1)
    sp = MomentSpace(table, 1, 1)
    out = enumerate_split_polys(sp, p)
    assert len(out) == 1 and out[0][1] == 0


def test_enumerate_one_stable_factor():
    p = BiPoly([[3], [-1.0]]) * BiPoly([[2, 0], [0, -1.0]])
    table = moments_from_density(p, 2, 1)
    sp = MomentSpace(table, 2, 1)
    out = enumerate_split_polys(sp, p)
    assert [d for _, d in out] == [0, 1]
    for cand, _ in out:
        assert max_modulus_gap(cand, out[0][0]) < 1e-8


def test_enumerate_two_stable_factors():
    p = BiPoly([[3], [-1.0]]) * BiPoly([[2], [-1.0]]) * BiPoly([[2, 0], [0, -1.0]])
    table = moments_from_density(p, 3, 1)
    sp = MomentSpace(table, 3, 1)
    out = enumerate_split_polys(sp, p)
    assert len(out) == 4
    assert sorted(d for _, d in out) == [0, 1, 1, 2]


def test_enumerate_repeated_root_dedupe():
    # a double stable root offers two nominally distinct single flips
    # that give the same polynomial; only one survives
    p = BiPoly([[3], [-1.0]]) * BiPoly([[3], [-1.0]]) * BiPoly([[2, 0], [0, -1.0]])
    table = moments_from_density(p, 3, 1)
    sp = MomentSpace(table, 3, 1)
    out = enumerate_split_polys(sp, p)
    assert [d for _, d in out] == [0, 1, 2]


def test_gw_examples(space_2zw, lebesgue_table):
    assert gw_check(space_2zw)
    assert gw_check(MomentSpace(lebesgue_table, 2, 1))
    # forced-unstable input: z - w/2 has no z-only factor and a disk root
    pf = BiPoly([[0, -0.5], [1, 0]])
    table = moments_from_density(pf, 1, 1)
    spf = MomentSpace(table, 1, 1)
    assert not gw_check(spf)
    rep = check_matrix_condition(build_operators(spf))
    assert rep.holds and rep.dim_a == 1


def test_gw_equals_shift_containment(space_2zw):
    # the d = 0 case is exactly z E1(n-1, m) inside E1(n, m)
    ze1 = space_2zw.e1_basis(0, 1).shifted(1, 0)
    e1big = space_2zw.e1_basis(1, 1)
    assert containment_defect(space_2zw, ze1, e1big) < 1e-8


def test_report_json(space_2zw):
    rep = check_matrix_condition(build_operators(space_2zw))
    doc = rep.to_json()
    assert doc["holds"] is True
    assert set(doc) == {"holds", "max_violation", "dimA", "dimB",
                        "d_min", "d_max"}
