"""The finite-dimensional Hilbert space of polynomials under a moment form.

``MomentSpace`` wraps a moment table with degree caps (N, M) and realizes
the inner product <f, g> = sum f_u conj(g_v) c_{v-u} on monomials
z^u w^v with u in [0,N] x [0,M].  A Cholesky factor of the full Gram
matrix embeds coefficient vectors isometrically into C^d, after which
all subspace constructions (orthogonal complements, projected spans,
orthonormalization) are plain dense linear algebra.

Subspace conventions follow the lexicographic support order
(z-power major), and every basis column is phase-normalized so its
first significant coefficient is real positive.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .errors import DegenerateForm, InsufficientMoments
from .moments import MomentTable, gram
from .poly import BiPoly

RANK_TOL = 1e-8  # relative singular-value threshold for numerical rank


@dataclass(frozen=True, eq=False)
class SubspaceBasis:
    """Orthonormal spanning set of a polynomial subspace.

    ``support`` lists monomial exponents (j, k); column i of ``vectors``
    holds the coefficients of the i-th basis polynomial over that
    support.  Orthonormality is with respect to the moment form of the
    space that built the basis.
    """

    support: tuple
    vectors: np.ndarray

    def __post_init__(self):
        v = np.asarray(self.vectors, dtype=complex)
        if v.ndim != 2 or v.shape[0] != len(self.support):
            raise DegenerateForm("basis vectors do not match support")
        v = np.array(v)
        v.setflags(write=False)
        object.__setattr__(self, "support", tuple(map(tuple, self.support)))
        object.__setattr__(self, "vectors", v)

    @property
    def dim(self):
        return self.vectors.shape[1]

    def poly(self, i) -> BiPoly:
        if not self.support:
            return BiPoly(np.zeros((1, 1)))
        n = max(j for j, _ in self.support)
        m = max(k for _, k in self.support)
        out = np.zeros((n + 1, m + 1), dtype=complex)
        for row, (j, k) in enumerate(self.support):
            out[j, k] = self.vectors[row, i]
        return BiPoly(out)

    def polys(self):
        return [self.poly(i) for i in range(self.dim)]

    def evaluate(self, z, w):
        """Values of all basis polynomials at (z, w); trailing axis = index."""
        z = np.asarray(z, dtype=complex)
        w = np.asarray(w, dtype=complex)
        if not self.support:
            return np.zeros(z.shape + (0,), dtype=complex)
        js = np.array([j for j, _ in self.support])
        ks = np.array([k for _, k in self.support])
        mono = z[..., None] ** js * w[..., None] ** ks
        return mono @ self.vectors

    def kernel(self, zw, zeta_eta):
        """Reproducing kernel sum_i b_i(z, w) conj(b_i(zeta, eta))."""
        a = self.evaluate(*zw)
        b = self.evaluate(*zeta_eta)
        return np.sum(a * np.conj(b), axis=-1)

    def shifted(self, dz, dw):
        """Image under multiplication by z^dz w^dw.

        Monomial shifts are isometric within the form's degree caps, so
        the shifted set stays orthonormal there.
        """
        sup = tuple((j + dz, k + dw) for j, k in self.support)
        return SubspaceBasis(sup, self.vectors)

    def reflected(self, at):
        """Image under the anti-unitary reflection at degree ``at``."""
        J, K = at
        for j, k in self.support:
            if j > J or k > K:
                raise InsufficientMoments("reflection degree below support")
        sup = tuple((J - j, K - k) for j, k in self.support)
        return SubspaceBasis(sup, np.conj(self.vectors))


def empty_basis() -> SubspaceBasis:
    return SubspaceBasis((), np.zeros((0, 0)))


@dataclass(frozen=True)
class SpaceSpec:
    """Which structural subspace to build; see MomentSpace.basis."""

    tag: str
    k: int = 0
    l: int = 0
    generators: tuple = field(default=(), compare=False)
    target: Optional[SubspaceBasis] = field(default=None, compare=False)

    @classmethod
    def e1(cls, k, l):
        return cls("E1", k, l)

    @classmethod
    def f1(cls, k, l):
        return cls("F1", k, l)

    @classmethod
    def e2(cls, k, l):
        return cls("E2", k, l)

    @classmethod
    def f2(cls, k, l):
        return cls("F2", k, l)

    @classmethod
    def h(cls, n, M):
        return cls("H", n, M)

    @classmethod
    def projected_span(cls, generators, target):
        return cls("ProjectedSpan", generators=tuple(generators), target=target)


def _rect(j0, j1, k0, k1):
    return [(j, k) for j in range(j0, j1 + 1) for k in range(k0, k1 + 1)]


class MomentSpace:
    """(P_{N,M}, <.,.>_T) for the positive form given by a moment table."""

    def __init__(self, table: MomentTable, nmax, mmax, rank_tol=RANK_TOL):
        if table.jmax < nmax or table.kmax < mmax:
            raise InsufficientMoments(
                f"table window ({table.jmax}, {table.kmax}) below caps "
                f"({nmax}, {mmax})")
        self.table = table
        self.nmax = int(nmax)
        self.mmax = int(mmax)
        self.rank_tol = float(rank_tol)
        self.support = _rect(0, self.nmax, 0, self.mmax)
        self._index = {u: i for i, u in enumerate(self.support)}
        G = gram(table, self.support, self.support)
        G = 0.5 * (G + G.conj().T)
        try:
            L = np.linalg.cholesky(G)
        except np.linalg.LinAlgError as exc:
            raise DegenerateForm("moment Gram matrix is not positive definite") from exc
        self.gram_matrix = G
        self._emb = L.T           # emb(f) = L.T @ f ; columns are monomial embeddings
        self._cache = {}
        self.cond = float(np.linalg.cond(G))

    # -- coefficient plumbing ------------------------------------------------

    def _vec(self, p: BiPoly):
        """Coefficient vector of p over the full support (caps enforced)."""
        t = p.trimmed()
        n, m = t.deg
        if n > self.nmax or m > self.mmax:
            raise InsufficientMoments(
                f"polynomial degree {(n, m)} exceeds caps "
                f"({self.nmax}, {self.mmax})")
        out = np.zeros(len(self.support), dtype=complex)
        for j in range(n + 1):
            base = j * (self.mmax + 1)
            out[base: base + m + 1] = t.coeffs[j]
        return out

    def _vec_basis(self, b: SubspaceBasis):
        """Scatter a SubspaceBasis into full-support coordinate columns."""
        out = np.zeros((len(self.support), b.dim), dtype=complex)
        for row, u in enumerate(b.support):
            out[self._index[u], :] = b.vectors[row, :]
        return out

    def embed(self, p: BiPoly):
        return self._emb @ self._vec(p)

    def embed_basis(self, b: SubspaceBasis):
        return self._emb @ self._vec_basis(b)

    def inner(self, f: BiPoly, g: BiPoly):
        """<f, g> under the moment form (linear in f, conjugate in g)."""
        return complex(np.sum(self.embed(f) * np.conj(self.embed(g))))

    def norm(self, f: BiPoly):
        return float(np.linalg.norm(self.embed(f)))

    def cross(self, a: SubspaceBasis, b: SubspaceBasis):
        """Matrix X[i, j] = <a_i, b_j>."""
        ea = self.embed_basis(a)
        eb = self.embed_basis(b)
        return ea.T @ np.conj(eb)

    # -- subspace construction ----------------------------------------------

    def _coeffs_from_embedded(self, Q, support):
        """Recover coefficient columns over ``support`` from embeddings."""
        if Q.shape[1] == 0:
            return np.zeros((len(support), 0), dtype=complex)
        full = np.linalg.solve(self._emb, Q)
        rows = [self._index[u] for u in support]
        return full[rows, :]

    def _phase_normalize(self, vectors):
        out = np.array(vectors)
        for i in range(out.shape[1]):
            col = out[:, i]
            mags = np.abs(col)
            top = mags.max()
            if top == 0.0:
                continue
            lead = col[np.nonzero(mags > 1e-8 * top)[0][0]]
            out[:, i] = col * (np.abs(lead) / lead)
        return out

    def _orth_columns(self, X, expect=None):
        """Orthonormalize embedded columns, truncating at numerical rank."""
        if X.shape[1] == 0:
            return X[:, :0]
        u, s, _ = np.linalg.svd(X, full_matrices=False)
        if s.size == 0 or s[0] == 0.0:
            return X[:, :0]
        rank = int(np.sum(s > self.rank_tol * s[0]))
        if expect is not None and rank != expect:
            raise DegenerateForm(
                f"subspace rank {rank} differs from expected {expect}")
        return u[:, :rank]

    def _complement(self, ambient, removed):
        """Orthonormal basis of span(ambient) minus span(removed)."""
        ambient = [u for u in ambient]
        removed = [u for u in removed]
        if not ambient:
            return empty_basis()
        removed_set = set(removed)
        gens = [u for u in ambient if u not in removed_set]
        cols_g = [self._index[u] for u in gens]
        X_C = self._emb[:, cols_g]
        if removed:
            cols_r = [self._index[u] for u in removed]
            Q_R, _ = np.linalg.qr(self._emb[:, cols_r])
            X_C = X_C - Q_R @ (Q_R.conj().T @ X_C)
        Q = self._orth_columns(X_C, expect=len(gens))
        vectors = self._phase_normalize(self._coeffs_from_embedded(Q, ambient))
        return SubspaceBasis(tuple(ambient), vectors)

    def basis(self, spec: SpaceSpec) -> SubspaceBasis:
        """Orthonormal basis of the requested structural subspace.

        E1(k,l) = P_{k,l} minus w P_{k,l-1}   (dimension k+1)
        F1(k,l) = P_{k,l} minus P_{k,l-1}     (dimension k+1)
        E2(k,l) = P_{k,l} minus z P_{k-1,l}   (dimension l+1)
        F2(k,l) = P_{k,l} minus P_{k-1,l}     (dimension l+1)
        H(n,M)  = P_{2n,M} minus all monomials except z^n (dimension 1)
        ProjectedSpan = orthonormalized projection of generator
        polynomials onto the span of a target basis.
        """
        key = spec if spec.tag != "ProjectedSpan" else None
        if key is not None and key in self._cache:
            return self._cache[key]
        out = self._build(spec)
        if key is not None:
            self._cache[key] = out
        return out

    def _build(self, spec):
        tag, k, l = spec.tag, spec.k, spec.l
        if tag in ("E1", "F1", "E2", "F2"):
            if k < 0 or l < 0:
                return empty_basis()
            if k > self.nmax or l > self.mmax:
                raise InsufficientMoments(
                    f"{tag}({k},{l}) exceeds caps ({self.nmax}, {self.mmax})")
            ambient = _rect(0, k, 0, l)
            removed = {
                "E1": _rect(0, k, 1, l),
                "F1": _rect(0, k, 0, l - 1),
                "E2": _rect(1, k, 0, l),
                "F2": _rect(0, k - 1, 0, l),
            }[tag]
            return self._complement(ambient, removed)
        if tag == "H":
            n, M = k, l
            if 2 * n > self.nmax or M > self.mmax:
                raise InsufficientMoments("H space exceeds caps")
            ambient = _rect(0, 2 * n, 0, M)
            removed = [u for u in ambient if u != (n, 0)]
            return self._complement(ambient, removed)
        if tag == "ProjectedSpan":
            return self.projected_span(list(spec.generators), spec.target)
        raise ValueError(f"unknown space tag {tag!r}")

    def projected_span(self, generators, target: SubspaceBasis,
                       expect=None) -> SubspaceBasis:
        """Orthonormal basis of P_target(span of generator polynomials)."""
        if target.dim == 0 or not generators:
            return empty_basis()
        emb_t = self.embed_basis(target)
        emb_g = np.column_stack([self.embed(g) for g in generators])
        coords = emb_t.conj().T @ emb_g       # coords[t, i] = <g_i, b_t>
        gen_scale = float(np.max(np.linalg.norm(emb_g, axis=0)))
        u, s, _ = np.linalg.svd(coords, full_matrices=False)
        if s.size == 0 or s[0] <= 1e-12 * gen_scale:
            return empty_basis()
        rank = int(np.sum(s > self.rank_tol * s[0]))
        if expect is not None and rank != expect:
            raise DegenerateForm(
                f"projected span rank {rank}, expected {expect}")
        vectors = self._phase_normalize(target.vectors @ u[:, :rank])
        return SubspaceBasis(target.support, vectors)

    # -- named spaces --------------------------------------------------------

    def e1_basis(self, k, l):
        return self.basis(SpaceSpec.e1(k, l))

    def f1_basis(self, k, l):
        return self.basis(SpaceSpec.f1(k, l))

    def e2_basis(self, k, l):
        return self.basis(SpaceSpec.e2(k, l))

    def f2_basis(self, k, l):
        return self.basis(SpaceSpec.f2(k, l))

    def h_basis(self, n, M):
        return self.basis(SpaceSpec.h(n, M))

    # -- operations ----------------------------------------------------------

    def phi_sequence(self, n, m):
        """Orthonormal basis of E2(n, m) by inverse-moment-matrix rows.

        phi_j is built from the inverse of (c_{v-u}) over the index set
        S_j = [0,n] x [0,m] minus {(0,0), ..., (0,j-1)}; kept as an
        independent construction for cross-validation against basis().
        """
        if n > self.table.jmax or m > self.table.kmax:
            raise InsufficientMoments("phi sequence exceeds the table window")
        order = [(j, k) for j in range(n + 1) for k in range(m + 1)]
        phis = []
        for j in range(m + 1):
            S = order[j:]
            M = gram(self.table, S, S)
            try:
                row = np.linalg.solve(M.T, np.eye(len(S), dtype=complex)[:, 0])
            except np.linalg.LinAlgError as exc:
                raise DegenerateForm(f"moment matrix singular at stage {j}") from exc
            lead = row[0]
            if not (lead.real > 0 and abs(lead.imag) < 1e-8 * lead.real):
                raise DegenerateForm(
                    f"inverse diagonal not positive at stage {j}: {lead}")
            coeffs = np.zeros((n + 1, m + 1), dtype=complex)
            for (u1, u2), val in zip(S, row):
                coeffs[u1, u2] = val
            phis.append(BiPoly(coeffs / np.sqrt(lead.real)))
        return phis

    def project(self, f: BiPoly, onto: SubspaceBasis):
        """Coefficients of f along the basis, plus the residual polynomial."""
        coeffs = np.array([self.inner(f, b) for b in onto.polys()])
        residual = f
        for ci, b in zip(coeffs, onto.polys()):
            residual = residual - ci * b
        return coeffs, residual.trimmed()


def subspace_angle(space: MomentSpace, a: SubspaceBasis, b: SubspaceBasis):
    """Largest principal-angle sine between two subspaces (0 = equal span).

    Computed as the spectral distance of the orthogonal projections,
    which resolves tiny angles down to machine precision.
    """
    if a.dim != b.dim:
        return 1.0
    if a.dim == 0:
        return 0.0
    qa = np.linalg.qr(space.embed_basis(a))[0]
    qb = np.linalg.qr(space.embed_basis(b))[0]
    pa = qa @ qa.conj().T
    pb = qb @ qb.conj().T
    return float(np.linalg.norm(pa - pb, 2))


def containment_defect(space: MomentSpace, inner_b: SubspaceBasis,
                       outer_b: SubspaceBasis):
    """max over basis vectors v of ||v - P_outer v|| (0 = contained)."""
    if inner_b.dim == 0:
        return 0.0
    qi = space.embed_basis(inner_b)
    qo = space.embed_basis(outer_b)
    resid = qi - qo @ (qo.conj().T @ qi)
    return float(np.max(np.linalg.norm(resid, axis=0)))
