"""Dense complex polynomials in one and two variables.

``BiPoly`` stores a coefficient grid ``coeffs[j, k]`` = coefficient of
``z**j * w**k``.  ``UniPoly`` stores ascending coefficients of a single
variable.  Degrees in this artifact stay small (<= ~16 per variable), so
everything is dense and direct.

All values are immutable after construction; operations are pure.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from numpy.polynomial import polynomial as npoly

from .errors import InvalidDegree, RootNearTorus, ZeroPolynomial

TRIM_REL = 1e-12          # drop trailing coefficients below this times max |coeff|
DEFAULT_MARGIN = 1e-6     # width of the forbidden band around |root| = 1
CLUSTER_TOL = 1e-6        # default root-clustering radius for approximate gcd


def _readonly(a):
    a = np.array(a, dtype=complex)
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class BiPoly:
    """Bivariate polynomial p(z, w) = sum coeffs[j, k] z^j w^k."""

    coeffs: np.ndarray

    def __post_init__(self):
        arr = np.atleast_2d(np.asarray(self.coeffs, dtype=complex))
        if arr.ndim != 2:
            raise InvalidDegree("coefficient array must be 2-D")
        object.__setattr__(self, "coeffs", _readonly(arr))

    # -- basic queries ------------------------------------------------------

    @property
    def deg(self):
        """Declared degree pair (n, m) from the stored grid shape."""
        return (self.coeffs.shape[0] - 1, self.coeffs.shape[1] - 1)

    def __call__(self, z, w):
        return npoly.polyval2d(np.asarray(z), np.asarray(w), self.coeffs)

    def is_zero(self, tol=TRIM_REL):
        """Whether every coefficient is below ``tol`` in absolute value."""
        return float(np.max(np.abs(self.coeffs))) < tol

    def trimmed(self, rel=TRIM_REL):
        """Drop trailing rows/columns with all entries < rel * max|coeff|."""
        a = self.coeffs
        mx = np.max(np.abs(a))
        if mx == 0.0:
            return BiPoly(np.zeros((1, 1)))
        keep = np.abs(a) >= rel * mx
        rows = np.nonzero(keep.any(axis=1))[0]
        cols = np.nonzero(keep.any(axis=0))[0]
        n = rows.max() if rows.size else 0
        m = cols.max() if cols.size else 0
        return BiPoly(a[: n + 1, : m + 1])

    # -- arithmetic ---------------------------------------------------------

    def _padded_to(self, shape):
        out = np.zeros(shape, dtype=complex)
        out[: self.coeffs.shape[0], : self.coeffs.shape[1]] = self.coeffs
        return out

    def __add__(self, other):
        other = as_bipoly(other)
        shape = (max(self.coeffs.shape[0], other.coeffs.shape[0]),
                 max(self.coeffs.shape[1], other.coeffs.shape[1]))
        return BiPoly(self._padded_to(shape) + other._padded_to(shape))

    def __sub__(self, other):
        return self + (-as_bipoly(other))

    def __neg__(self):
        return BiPoly(-self.coeffs)

    def __mul__(self, other):
        if np.isscalar(other):
            return BiPoly(self.coeffs * other)
        other = as_bipoly(other)
        a, b = self.coeffs, other.coeffs
        out = np.zeros((a.shape[0] + b.shape[0] - 1,
                        a.shape[1] + b.shape[1] - 1), dtype=complex)
        for j in range(a.shape[0]):
            for k in range(a.shape[1]):
                c = a[j, k]
                if c != 0.0:
                    out[j: j + b.shape[0], k: k + b.shape[1]] += c * b
        return BiPoly(out)

    __rmul__ = __mul__

    def shifted(self, dz, dw):
        """Multiply by z^dz w^dw (monomial shift of the support)."""
        out = np.zeros((self.coeffs.shape[0] + dz, self.coeffs.shape[1] + dw),
                       dtype=complex)
        out[dz:, dw:] = self.coeffs
        return BiPoly(out)

    def w_derivative(self):
        n, m = self.deg
        if m == 0:
            return BiPoly(np.zeros((n + 1, 1)))
        return BiPoly(self.coeffs[:, 1:] * np.arange(1, m + 1))

    def z_slice(self, w_power=0):
        """Coefficient column of w^k as a UniPoly in z."""
        return UniPoly(self.coeffs[:, w_power])

    def w_poly_at(self, z0):
        """Coefficients (ascending in w) of the slice p(z0, w)."""
        return npoly.polyval(z0, self.coeffs)  # contracts the z axis

    def conj_coeffs(self):
        return BiPoly(np.conj(self.coeffs))

    def transposed(self):
        """Swap the roles of z and w (for the mirrored-orientation theory)."""
        return BiPoly(self.coeffs.T)


def as_bipoly(x) -> BiPoly:
    if isinstance(x, BiPoly):
        return x
    if isinstance(x, UniPoly):
        return x.to_bipoly()
    if np.isscalar(x):
        return BiPoly(np.array([[x]], dtype=complex))
    return BiPoly(np.asarray(x, dtype=complex))


@dataclass(frozen=True, eq=False)
class UniPoly:
    """Univariate polynomial with ascending complex coefficients."""

    coeffs: np.ndarray

    def __post_init__(self):
        arr = np.atleast_1d(np.asarray(self.coeffs, dtype=complex))
        object.__setattr__(self, "coeffs", _readonly(arr))

    @property
    def degree(self):
        return self.coeffs.shape[0] - 1

    def __call__(self, z):
        return npoly.polyval(np.asarray(z), self.coeffs)

    def is_zero(self, tol=TRIM_REL):
        """Whether every coefficient is below ``tol`` in absolute value."""
        return float(np.max(np.abs(self.coeffs))) < tol

    def trimmed(self, rel=TRIM_REL):
        a = self.coeffs
        mx = np.max(np.abs(a))
        if mx == 0.0:
            return UniPoly(np.zeros(1))
        nz = np.nonzero(np.abs(a) >= rel * mx)[0]
        return UniPoly(a[: nz.max() + 1])

    def monic(self):
        t = self.trimmed()
        return UniPoly(t.coeffs / t.coeffs[-1])

    def __mul__(self, other):
        if np.isscalar(other):
            return UniPoly(self.coeffs * other)
        return UniPoly(np.convolve(self.coeffs, other.coeffs))

    __rmul__ = __mul__

    def to_bipoly(self, var="z"):
        c = self.coeffs
        if var == "z":
            return BiPoly(c[:, None])
        return BiPoly(c[None, :])


@dataclass(frozen=True)
class RootSplit:
    """Factorization u = stable * unstable with unstable monic.

    ``stable`` has no roots in the closed unit disk, ``unstable`` has all
    roots in the open disk, ``beta`` is the degree of the unstable part.
    """

    stable: UniPoly
    unstable: UniPoly
    beta: int


# ---------------------------------------------------------------------------
# operations
# ---------------------------------------------------------------------------

def reflect(p: BiPoly, at) -> BiPoly:
    """Reflection z^J w^K conj(p)(1/z, 1/w) at the degree pair ``at``.

    Involutive at a fixed degree pair, and |reflect(p)| = |p| on the
    bicircle.  Raises InvalidDegree if ``at`` is below the actual degree.
    """
    J, K = int(at[0]), int(at[1])
    t = p.trimmed()
    if t.is_zero():
        return BiPoly(np.zeros((J + 1, K + 1)))
    n, m = t.deg
    if J < n or K < m:
        raise InvalidDegree(f"reflection degree {(J, K)} below actual {(n, m)}")
    out = np.zeros((J + 1, K + 1), dtype=complex)
    out[J - n:, K - m:] = np.conj(t.coeffs)[::-1, ::-1]
    return BiPoly(out)


def reflect_uni(u: UniPoly, at: int) -> UniPoly:
    """One-variable reflection z^at conj(u)(1/z)."""
    t = u.trimmed()
    if t.is_zero():
        return UniPoly(np.zeros(at + 1))
    d = t.degree
    if at < d:
        raise InvalidDegree(f"reflection degree {at} below actual {d}")
    out = np.zeros(at + 1, dtype=complex)
    out[at - d:] = np.conj(t.coeffs)[::-1]
    return UniPoly(out)


def roots(u: UniPoly):
    """All roots (with multiplicity) via companion-matrix eigenvalues."""
    t = u.trimmed()
    if t.is_zero():
        raise ZeroPolynomial("cannot take roots of the zero polynomial")
    if t.degree == 0:
        return np.zeros(0, dtype=complex)
    return np.roots(t.coeffs[::-1])


def split_stable(u: UniPoly, margin=DEFAULT_MARGIN) -> RootSplit:
    """Split u into a stable and a monic unstable factor by root modulus.

    Raises RootNearTorus if any root lies within ``margin`` of the unit
    circle; the theory requires a clean separation.
    """
    t = u.trimmed()
    if t.is_zero():
        raise ZeroPolynomial("cannot split the zero polynomial")
    rts = roots(t)
    mods = np.abs(rts)
    near = np.abs(mods - 1.0) <= margin
    if np.any(near):
        worst = rts[np.argmin(np.abs(mods - 1.0))]
        raise RootNearTorus(f"root {worst} within {margin} of the unit circle")
    inside = rts[mods < 1.0]
    outside = rts[mods > 1.0]
    unstable = UniPoly(npoly.polyfromroots(inside)) if inside.size else UniPoly([1.0])
    lead = t.coeffs[-1]
    stable = UniPoly(lead * npoly.polyfromroots(outside)) if outside.size \
        else UniPoly([lead])
    prod = np.convolve(stable.coeffs, unstable.coeffs)
    padded = np.pad(t.coeffs, (0, prod.size - t.coeffs.size))
    err = np.max(np.abs(prod - padded)) / max(1.0, np.max(np.abs(t.coeffs)))
    if err > 1e-8:
        raise RootNearTorus(f"stable/unstable refactorization residual {err:.3e}")
    return RootSplit(stable=stable, unstable=unstable, beta=int(inside.size))


def _cluster(values, tol):
    """Greedy clustering of complex values; returns (centers, counts)."""
    centers, members = [], []
    for v in values:
        for i, c in enumerate(centers):
            if abs(v - c) <= tol:
                members[i].append(v)
                centers[i] = np.mean(members[i])
                break
        else:
            centers.append(v)
            members.append([v])
    return centers, [len(ms) for ms in members]


def gcd_approx(us, tol=CLUSTER_TOL) -> UniPoly:
    """Monic approximate gcd of several UniPoly by root clustering.

    Roots shared by every input (within ``tol``) are kept with the
    minimal shared multiplicity.  Raises ZeroPolynomial if every input
    is zero.
    """
    polys = [u.trimmed() for u in us if not u.trimmed().is_zero()]
    if not polys:
        raise ZeroPolynomial("gcd of all-zero inputs")
    if any(p.degree == 0 for p in polys):
        return UniPoly([1.0])
    ref = min(polys, key=lambda p: p.degree)
    centers, counts = _cluster(list(roots(ref)), tol)
    all_roots = [list(roots(p)) for p in polys]
    kept = []
    for center, count in zip(centers, counts):
        mult = count
        for rs in all_roots:
            d = np.abs(np.asarray(rs) - center) if rs else np.zeros(0)
            mult = min(mult, int(np.sum(d <= tol)))
            if mult == 0:
                break
        kept.extend([center] * mult)
    if not kept:
        return UniPoly([1.0])
    return UniPoly(npoly.polyfromroots(np.asarray(kept)))


def divide_uni(u: UniPoly, d: UniPoly):
    """Quotient and relative remainder norm of u / d."""
    dt = d.trimmed()
    if dt.is_zero():
        raise ZeroPolynomial("division by zero polynomial")
    q, r = npoly.polydiv(u.trimmed().coeffs, dt.coeffs)
    scale = max(np.max(np.abs(u.coeffs)), 1e-300)
    return UniPoly(q), float(np.max(np.abs(r)) / scale)


def divide_bipoly_z(p: BiPoly, d: UniPoly):
    """Divide every w-column of p by the z-polynomial d.

    Returns (quotient BiPoly, max relative remainder over columns).
    """
    dt = d.trimmed()
    if dt.is_zero():
        raise ZeroPolynomial("division by zero polynomial")
    n, m = p.deg
    qdeg = n - dt.degree
    if qdeg < 0:
        return BiPoly(np.zeros((1, m + 1))), 1.0
    out = np.zeros((qdeg + 1, m + 1), dtype=complex)
    scale = max(np.max(np.abs(p.coeffs)), 1e-300)
    worst = 0.0
    for k in range(m + 1):
        q, r = npoly.polydiv(p.coeffs[:, k], dt.coeffs)
        out[: q.size, k] = q
        worst = max(worst, float(np.max(np.abs(r))) / scale)
    return BiPoly(out), worst


def flip_root(u: UniPoly, root) -> UniPoly:
    """Replace the factor (z - root) by (1 - conj(root) z).

    The two factors have identical modulus on the unit circle, so the
    flip preserves |u| on the circle while moving the root to
    1/conj(root).
    """
    q, rem = npoly.polydiv(u.trimmed().coeffs, np.array([-root, 1.0]))
    if np.max(np.abs(rem)) > 1e-6 * max(1.0, np.max(np.abs(u.coeffs))):
        raise InvalidDegree(f"{root} is not a root (remainder {np.max(np.abs(rem)):.2e})")
    return UniPoly(np.convolve(q, np.array([1.0, -np.conj(root)])))


def z_content(p: BiPoly, tol=CLUSTER_TOL):
    """Factor p = h(z) g(z, w) with h the z-only content.

    h is the monic approximate gcd of the w-coefficient columns of p;
    g carries everything else.  Returns (h, g, relative residual).
    """
    t = p.trimmed()
    scale = np.max(np.abs(t.coeffs))
    cols = [UniPoly(t.coeffs[:, k]) for k in range(t.deg[1] + 1)
            if np.max(np.abs(t.coeffs[:, k])) > 1e-9 * scale]
    h = gcd_approx(cols, tol)
    if h.degree == 0:
        return UniPoly([1.0]), t, 0.0
    g, res = divide_bipoly_z(t, h)
    return h, g, res


def canonical_phase(p: BiPoly) -> BiPoly:
    """Rotate p by a unimodular constant fixing a canonical phase.

    The coefficient of largest modulus in the w^0 row is made real
    positive; ties broken by the lowest z-power.
    """
    t = p.trimmed()
    row = t.coeffs[:, 0]
    if np.max(np.abs(row)) < TRIM_REL * max(1.0, np.max(np.abs(t.coeffs))):
        row = t.coeffs.ravel()
    idx = int(np.argmax(np.abs(row)))
    pivot = row[idx]
    if pivot == 0.0:
        return p
    return p * (np.abs(pivot) / pivot)
