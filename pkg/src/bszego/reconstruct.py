"""Recover the factor polynomial from moments alone.

Pipeline: orthonormal polynomials of the E2 space evaluated against a
reflected argument collapse to p(z1, z2) times the reflection of
p(z1, 0); the z-only content of that product is pulled out with an
approximate gcd, the two-variable factor g falls out by division, and
the remaining one-variable stable factor q is produced by a Toeplitz
inversion against the moments re-weighted by |g|^2.
"""

from __future__ import annotations

import logging

import numpy as np

from .errors import (DegenerateForm, GcdUnstable, MatrixConditionFails,
                     NoConvergence, NotFactorable, NotPositive)
from .moments import (MomentTable, QuadratureConfig, TrigPoly, is_positive,
                      moments_from_trig)
from .poly import (BiPoly, UniPoly, canonical_phase, divide_bipoly_z,
                   gcd_approx, reflect_uni, split_stable)
from .space import MomentSpace
from .splitshift import assert_no_face_zeros, build_operators, \
    check_matrix_condition

GCD_TOL = 1e-6


def kernel_poly(space: MomentSpace, n, m) -> BiPoly:
    """sum_j phi_j(z1, z2) * reflection_n of conj(phi_j)(z1, 0).

    For a Bernstein-Szego form this equals p(z1, z2) z1^n pbar(1/z1, 0),
    the polynomial whose z-only content drives the reconstruction.
    """
    out = BiPoly(np.zeros((2 * n + 1, m + 1)))
    for phi in space.phi_sequence(n, m):
        refl = reflect_uni(phi.z_slice(0), n)
        out = out + phi * refl.to_bipoly()
    return out


def _toeplitz_q(table: MomentTable, g: BiPoly, n0) -> UniPoly:
    """Stable one-variable factor from the |g|^2-weighted moment strip."""
    gc = g.trimmed().coeffs
    n1, m1 = gc.shape[0] - 1, gc.shape[1] - 1
    cp = np.zeros(2 * n0 + 1, dtype=complex)
    for j in range(-n0, n0 + 1):
        acc = 0.0 + 0.0j
        for u1 in range(n1 + 1):
            for u2 in range(m1 + 1):
                gu = gc[u1, u2]
                if gu == 0.0:
                    continue
                for v1 in range(n1 + 1):
                    for v2 in range(m1 + 1):
                        gv = gc[v1, v2]
                        if gv == 0.0:
                            continue
                        acc += gu * np.conj(gv) * table.at(j + v1 - u1, v2 - u2)
        cp[j + n0] = acc
    # Hermitize; FFT moments leave a tiny asymmetry
    herm = 0.5 * (cp + np.conj(cp[::-1]))
    correction = float(np.max(np.abs(herm - cp)))
    if correction > 0:
        logging.getLogger(__name__).debug(
            "Toeplitz hermitization correction %.3e", correction)
    cp = herm
    M = np.empty((n0 + 1, n0 + 1), dtype=complex)
    for j in range(n0 + 1):
        for k in range(n0 + 1):
            M[j, k] = cp[k - j + n0]
    try:
        row = np.linalg.solve(M.T, np.eye(n0 + 1, dtype=complex)[:, 0])
    except np.linalg.LinAlgError as exc:
        raise DegenerateForm("one-variable Toeplitz matrix is singular") from exc
    lead = row[0]
    if not lead.real > 0:
        raise DegenerateForm("Toeplitz inverse has nonpositive diagonal")
    return UniPoly(row / np.sqrt(lead.real))


def reconstruct_p(table: MomentTable, n, m, tol=1e-8,
                  gcd_tol=GCD_TOL) -> BiPoly:
    """The polynomial p with the given Bernstein-Szego moments.

    Requires the matrix condition; the result is the stable-content
    representative, unit-norm under the form, with canonical phase.
    """
    space = MomentSpace(table, n, m)
    ops = build_operators(space, n, m)
    report = check_matrix_condition(ops, tol)
    if not report.holds:
        raise MatrixConditionFails(
            f"max ||A T^j B|| = {report.max_violation:.3e}; "
            "no closed-face Bernstein-Szego representation exists")
    R = kernel_poly(space, n, m).trimmed()
    rscale = float(np.max(np.abs(R.coeffs)))
    columns = [UniPoly(R.coeffs[:, k]) for k in range(R.deg[1] + 1)
               if np.max(np.abs(R.coeffs[:, k])) > 1e-9 * rscale]
    g = None
    for attempt_tol in (gcd_tol, 10.0 * gcd_tol):
        Q = gcd_approx(columns, attempt_tol)
        cand, res = divide_bipoly_z(R, Q)
        if res <= 1e-6:
            g = cand
            break
    if g is None:
        raise GcdUnstable(
            f"z-content gcd division residual {res:.3e} at tolerance "
            f"{10 * gcd_tol}")
    g = g.trimmed()
    n0 = n - g.deg[0]
    if n0 < 0:
        raise DegenerateForm("two-variable factor exceeds the degree bound")
    q = _toeplitz_q(table, g, n0)
    if q.degree > 0:
        rs = split_stable(q, margin=1e-9)
        if rs.beta != 0:
            raise DegenerateForm(
                f"one-variable factor has {rs.beta} roots inside the disk")
    p = q.to_bipoly() * g
    nrm = space.norm(p)
    if nrm == 0.0:
        raise DegenerateForm("reconstructed polynomial vanished")
    return canonical_phase(p * (1.0 / nrm))


def factor_trig(t: TrigPoly, n, m, cfg: QuadratureConfig = QuadratureConfig(),
                tol=1e-7, grid=256):
    """Factor a strictly positive trig polynomial as |p|^2 when possible.

    Builds the moments of dsigma / t, tests the matrix condition, then
    reconstructs and verifies the factor on a torus grid.  Raises
    NotFactorable when no p of degree (n, m) without zeros on the closed
    face exists.
    """
    table = moments_from_trig(t, n, m, cfg)
    ok, lam = is_positive(table, n, m)
    if not ok:
        raise NotPositive(f"moment Gram has eigenvalue {lam:.3e}")
    try:
        p = reconstruct_p(table, n, m)
    except MatrixConditionFails as exc:
        raise NotFactorable(str(exc)) from exc
    tvals = t.values_on_grid(grid)
    pvals = np.abs(_grid_values(p, grid)) ** 2
    resid = float(np.max(np.abs(pvals - tvals)))
    if resid > tol * float(np.max(np.abs(tvals))):
        raise NoConvergence(
            f"|p|^2 mismatches t by {resid:.3e} despite the matrix condition")
    assert_no_face_zeros(p)
    return p


def _grid_values(p: BiPoly, N):
    from .moments import _poly_grid_values
    return _poly_grid_values(p.trimmed(), N)
