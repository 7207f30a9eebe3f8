"""Trigonometric moment tables on the bicircle.

The central object is the Hermitian table ``c[j, k]`` of moments of a
positive density on the two-torus, indexed over a centered window
``[-jmax..jmax] x [-kmax..kmax]``.  Moments are computed by FFT
quadrature on uniform torus grids, which is spectrally accurate for the
smooth densities 1/|p|^2 and 1/t handled here; the grid is doubled until
every requested moment stabilizes.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import (InsufficientMoments, MomentDivergence,
                     NonPositiveDensity, ZeroPolynomial)
from .poly import BiPoly


@dataclass(frozen=True)
class QuadratureConfig:
    """Controls the FFT quadrature loop.

    initial_grid / max_grid are points per axis (powers of two);
    tol is the stabilization threshold between successive doublings,
    relative to max(1, c00); pole_margin flags a vanishing denominator,
    relative to its maximum on the grid.
    """

    initial_grid: int = 64
    max_grid: int = 4096
    tol: float = 1e-10
    pole_margin: float = 1e-12

    def __post_init__(self):
        if self.initial_grid > self.max_grid:
            raise ValueError("initial grid exceeds max grid")
        if self.tol <= 0:
            raise ValueError("tolerance must be positive")


def _readonly(a):
    a = np.array(a, dtype=complex)
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class MomentTable:
    """Moments c[j, k] for |j| <= jmax, |k| <= kmax.

    Stored as an array of shape (2*jmax+1, 2*kmax+1) with c_{j,k} at
    index [j + jmax, k + kmax].  Hermitian symmetry
    c_{-j,-k} = conj(c_{j,k}) is enforced at construction.
    """

    jmax: int
    kmax: int
    c: np.ndarray

    def __post_init__(self):
        arr = np.asarray(self.c, dtype=complex)
        if arr.shape != (2 * self.jmax + 1, 2 * self.kmax + 1):
            raise InsufficientMoments(
                f"table shape {arr.shape} does not match window "
                f"({self.jmax}, {self.kmax})")
        sym = 0.5 * (arr + np.conj(arr[::-1, ::-1]))
        object.__setattr__(self, "c", _readonly(sym))

    def at(self, j, k):
        if abs(j) > self.jmax or abs(k) > self.kmax:
            raise InsufficientMoments(
                f"moment ({j}, {k}) outside window ({self.jmax}, {self.kmax})")
        return self.c[j + self.jmax, k + self.kmax]

    def window(self, jmax, kmax):
        """Restriction to a smaller centered window."""
        if jmax > self.jmax or kmax > self.kmax:
            raise InsufficientMoments("requested window exceeds table")
        dj, dk = self.jmax - jmax, self.kmax - kmax
        return MomentTable(jmax, kmax,
                           self.c[dj: dj + 2 * jmax + 1, dk: dk + 2 * kmax + 1])


@dataclass(frozen=True, eq=False)
class TrigPoly:
    """Real-valued Laurent trigonometric polynomial on the bicircle.

    Same centered layout as MomentTable; Hermitian coefficient symmetry
    makes the values on the torus real.
    """

    jmax: int
    kmax: int
    c: np.ndarray

    def __post_init__(self):
        arr = np.asarray(self.c, dtype=complex)
        if arr.shape != (2 * self.jmax + 1, 2 * self.kmax + 1):
            raise InsufficientMoments("trig coefficient array has wrong shape")
        sym = 0.5 * (arr + np.conj(arr[::-1, ::-1]))
        if np.max(np.abs(sym - arr)) > 1e-8 * max(1.0, np.max(np.abs(arr))):
            raise NonPositiveDensity("coefficients are not Hermitian-symmetric")
        object.__setattr__(self, "c", _readonly(sym))

    def at(self, j, k):
        if abs(j) > self.jmax or abs(k) > self.kmax:
            return 0.0 + 0.0j
        return self.c[j + self.jmax, k + self.kmax]

    @classmethod
    def from_abs_squared(cls, p: BiPoly) -> "TrigPoly":
        """Expand |p(z, w)|^2 on the torus into Laurent coefficients."""
        a = p.trimmed().coeffs
        n, m = a.shape[0] - 1, a.shape[1] - 1
        t = np.zeros((2 * n + 1, 2 * m + 1), dtype=complex)
        for j in range(-n, n + 1):
            for k in range(-m, m + 1):
                u0, u1 = max(0, -j), min(n, n - j)
                v0, v1 = max(0, -k), min(m, m - k)
                if u0 > u1 or v0 > v1:
                    continue
                block = a[u0 + j: u1 + j + 1, v0 + k: v1 + k + 1]
                t[j + n, k + m] = np.sum(block * np.conj(a[u0: u1 + 1, v0: v1 + 1]))
        return cls(n, m, t)

    def values_on_grid(self, N):
        """Evaluate on the N x N uniform torus grid (real array)."""
        vals = _laurent_grid_values(self.c, self.jmax, self.kmax, N)
        return vals.real


def _laurent_grid_values(c, jmax, kmax, N):
    """Values of sum c[j,k] z^j w^k on the N x N torus grid via IFFT."""
    if N <= 2 * max(jmax, kmax):
        raise ValueError("grid too small for the coefficient window")
    emb = np.zeros((N, N), dtype=complex)
    js = np.arange(-jmax, jmax + 1) % N
    ks = np.arange(-kmax, kmax + 1) % N
    emb[np.ix_(js, ks)] = c
    return np.fft.ifft2(emb) * (N * N)


def _poly_grid_values(p: BiPoly, N):
    n, m = p.deg
    if N <= max(n, m):
        raise ValueError("grid too small for the polynomial degree")
    emb = np.zeros((N, N), dtype=complex)
    emb[: n + 1, : m + 1] = p.coeffs
    return np.fft.ifft2(emb) * (N * N)


def _moments_of_grid_density(density_at, jmax, kmax, cfg, pole_check):
    """Shared doubling loop: density_at(N) -> N x N positive samples."""
    N = max(cfg.initial_grid, 2 * max(jmax, kmax) + 2)
    N = 1 << int(np.ceil(np.log2(N)))
    prev = None
    js = np.arange(-jmax, jmax + 1)
    ks = np.arange(-kmax, kmax + 1)
    last_diff = np.inf
    while N <= cfg.max_grid:
        dens = density_at(N)
        pole_check(dens)
        chat = np.fft.fft2(dens) / (N * N)
        win = chat[np.ix_(js % N, ks % N)]
        win = 0.5 * (win + np.conj(win[::-1, ::-1]))
        if prev is not None:
            scale = max(1.0, abs(win[jmax, kmax]))
            last_diff = float(np.max(np.abs(win - prev)))
            if last_diff <= cfg.tol * scale:
                return MomentTable(jmax, kmax, win)
        prev = win
        N *= 2
    raise MomentDivergence(
        f"moments did not stabilize at grid {cfg.max_grid}^2 "
        f"(last change {last_diff:.3e})")


def moments_from_density(p: BiPoly, jmax, kmax,
                         cfg: QuadratureConfig = QuadratureConfig()) -> MomentTable:
    """Moments c_{j,k} = int z^-j w^-k / |p|^2 dsigma over the bicircle.

    Raises MomentDivergence when the density has a pole on or near the
    torus (the numerical proxy for p vanishing on T^2).
    """
    pt = p.trimmed()
    if pt.is_zero():
        raise ZeroPolynomial("density 1/|p|^2 needs a nonzero p")

    def density_at(N):
        vals = _poly_grid_values(pt, N)
        a2 = np.abs(vals) ** 2
        lo, hi = float(np.min(a2)), float(np.max(a2))
        if lo <= cfg.pole_margin * hi:
            raise MomentDivergence(
                f"|p|^2 nearly vanishes on the torus (min/max = {lo / hi:.3e})")
        return 1.0 / a2

    def pole_check(dens):
        if not np.isfinite(dens).all():
            raise MomentDivergence("density overflowed on the grid")

    return _moments_of_grid_density(density_at, jmax, kmax, cfg, pole_check)


def moments_from_trig(t: TrigPoly, jmax, kmax,
                      cfg: QuadratureConfig = QuadratureConfig()) -> MomentTable:
    """Moments of dsigma / t for a strictly positive trig polynomial t."""

    def density_at(N):
        vals = t.values_on_grid(N)
        lo, hi = float(np.min(vals)), float(np.max(vals))
        if lo <= cfg.pole_margin * max(hi, 1e-300):
            raise NonPositiveDensity(
                f"t is not strictly positive on the grid (min {lo:.3e})")
        return 1.0 / vals

    def pole_check(dens):
        if not np.isfinite(dens).all():
            raise MomentDivergence("density overflowed on the grid")

    return _moments_of_grid_density(density_at, jmax, kmax, cfg, pole_check)


def moments_from_grid_function(fn, jmax, kmax,
                               cfg: QuadratureConfig = QuadratureConfig()) -> MomentTable:
    """Moments of fn(z, w) dsigma for a smooth positive sample function.

    fn receives meshgrid arrays of unimodular z and w and must return
    real positive values; used for densities that are neither 1/|p|^2
    nor the reciprocal of a trig polynomial.
    """

    def density_at(N):
        theta = 2.0 * np.pi * np.arange(N) / N
        z = np.exp(1j * theta)
        zz, ww = np.meshgrid(z, z, indexing="ij")
        return np.asarray(fn(zz, ww), dtype=float)

    def pole_check(dens):
        if not np.isfinite(dens).all():
            raise MomentDivergence("density overflowed on the grid")

    return _moments_of_grid_density(density_at, jmax, kmax, cfg, pole_check)


def gram(table: MomentTable, rows, cols) -> np.ndarray:
    """Gram-type matrix with entry (r, c) = c_{cols[c] - rows[r]}.

    With rows == cols this is the Hermitian Gram matrix of the monomials
    z^u w^v in the inner product induced by the table.
    """
    rows = list(rows)
    cols = list(cols)
    out = np.zeros((len(rows), len(cols)), dtype=complex)
    for r, (a, b) in enumerate(rows):
        for q, (u, v) in enumerate(cols):
            out[r, q] = table.at(u - a, v - b)
    return out


def is_positive(table: MomentTable, n, m, tol=1e-12):
    """Whether the form is positive definite on monomials [0,n] x [0,m].

    Returns (bool, smallest eigenvalue of the Gram matrix).
    """
    sup = [(j, k) for j in range(n + 1) for k in range(m + 1)]
    g = gram(table, sup, sup)
    g = 0.5 * (g + g.conj().T)
    lam = float(np.linalg.eigvalsh(g)[0])
    return lam > tol, lam
