"""Periodic pseudo-spectral infrastructure on a cubic box.

Conventions (pinned; everything downstream depends on them):

- physical box [-L/2, L/2)^3, n points per axis, spacing h = L/n,
  x_j = -L/2 + j*h;
- frequency lattice xi_m = (2*pi/L)*m with integer m in {-n/2, ..., n/2-1},
  stored in monotone centered order in every array (both domains);
- forward transform approximates the integral \int e^{-i x.xi} u(x) dx, so
  forward(e^{i k.x}) puts the value L^3 on the mode k;
- inverse is its exact discrete inverse.

A plane wave, the round trip, and Parseval are exact to round-off; tests pin
all three.
"""

import os

import numpy as np
import scipy.fft as _fft
from scipy.special import gamma as _gamma_fn


def _fft_workers() -> int:
    """Worker count for scipy.fft, from the thread-count environment knob."""
    try:
        return max(1, int(os.environ.get("FRACHARTREE_THREADS", "1")))
    except ValueError:
        return 1


class Grid:
    """Cubic periodic grid with centered storage in both domains.

    Precomputes the integer frequency lattice once; |xi|^2 is assembled from
    the integer squares so that radial symmetry of every derived multiplier
    is exact in floating point (lattice points related by permutation or sign
    flips of (m1,m2,m3) get bit-identical symbol values).
    """

    def __init__(self, n: int, L: float):
        if n <= 0 or n % 2:
            raise ValueError("n must be a positive even integer")
        if L <= 0:
            raise ValueError("L must be positive")
        self.n = int(n)
        self.L = float(L)
        self.h = self.L / self.n
        self.cell_volume = self.h**3
        self.freq_cell_volume = (2.0 * np.pi / self.L) ** 3
        self.shape = (self.n, self.n, self.n)

        m = np.arange(-self.n // 2, self.n // 2)
        self.m1 = m
        self.x1 = -self.L / 2 + self.h * np.arange(self.n)
        self.xi1 = (2.0 * np.pi / self.L) * m

        M1, M2, M3 = np.meshgrid(m, m, m, indexing="ij")
        self._M = (M1, M2, M3)
        self.m2sum = (M1 * M1 + M2 * M2 + M3 * M3).astype(np.float64)
        self.xi2 = (2.0 * np.pi / self.L) ** 2 * self.m2sum
        self.absxi = np.sqrt(self.xi2)
        # 2/3-rule mask for the quadratic product
        lim = self.n // 3
        self.dealias = (
            (np.abs(M1) <= lim) & (np.abs(M2) <= lim) & (np.abs(M3) <= lim)
        ).astype(np.float64)
        self.zero_index = np.ravel_multi_index(
            (self.n // 2, self.n // 2, self.n // 2), self.shape
        )
        self._coords = None

    # -- transforms --------------------------------------------------------

    def forward(self, u: np.ndarray) -> np.ndarray:
        """Continuum-normalized forward transform (centered in, centered out)."""
        return self.cell_volume * _fft.fftshift(
            _fft.fftn(_fft.ifftshift(u), workers=_fft_workers())
        )

    def inverse(self, U: np.ndarray) -> np.ndarray:
        return (
            _fft.fftshift(_fft.ifftn(_fft.ifftshift(U), workers=_fft_workers()))
            / self.cell_volume
        )

    # -- coordinates -------------------------------------------------------

    @property
    def coords(self):
        """(X1, X2, X3) physical coordinate arrays, built on first use."""
        if self._coords is None:
            self._coords = np.meshgrid(self.x1, self.x1, self.x1, indexing="ij")
        return self._coords

    def radius2(self) -> np.ndarray:
        X1, X2, X3 = self.coords
        return X1 * X1 + X2 * X2 + X3 * X3

    # -- multipliers -------------------------------------------------------

    def frac_symbol(self, alpha: float) -> np.ndarray:
        """|xi|^alpha on the lattice (zero mode: 0)."""
        return self.xi2 ** (alpha / 2.0)

    def riesz_multiplier(self, gam: float) -> np.ndarray:
        """Fourier symbol of the kernel |x|^{-gam}, zero mode dropped.

        The zero mode has no finite value on the torus; dropping it is the
        neutralizing-background gauge and every consumer in this package
        assumes it.
        """
        if not 0.0 < gam < 3.0:
            raise ValueError("kernel exponent must lie in (0, 3)")
        c = riesz_constant(gam)
        with np.errstate(divide="ignore"):
            mult = np.where(
                self.m2sum > 0.0, c * self.absxi ** (gam - 3.0), 0.0
            )
        return mult

    def bracket2(self) -> np.ndarray:
        """1 + |xi|^2."""
        return 1.0 + self.xi2


def riesz_constant(gam: float) -> float:
    """Constant c with  FT(|x|^{-gam}) = c * |xi|^{gam-3}  in 3 dimensions."""
    return float(
        2.0 ** (3.0 - gam)
        * np.pi**1.5
        * _gamma_fn((3.0 - gam) / 2.0)
        / _gamma_fn(gam / 2.0)
    )


# -- smooth cutoffs and dyadic projectors ----------------------------------


def _bump(t: np.ndarray) -> np.ndarray:
    """exp(-1/t) for t > 0, exactly 0 elsewhere."""
    t = np.asarray(t, dtype=np.float64)
    out = np.zeros_like(t)
    pos = t > 0.0
    out[pos] = np.exp(-1.0 / t[pos])
    return out


def smoothstep(t):
    """C^inf monotone step: exactly 0 for t <= 0, exactly 1 for t >= 1."""
    t = np.asarray(t, dtype=np.float64)
    scalar = t.ndim == 0
    t = np.atleast_1d(t)
    out = np.where(t >= 1.0, 1.0, 0.0)
    mid = (t > 0.0) & (t < 1.0)
    if mid.any():
        a = _bump(t[mid])
        b = _bump(1.0 - t[mid])
        out[mid] = a / (a + b)
    return out[0] if scalar else out


def cutoff_chi(r):
    """Radial cutoff: exactly 1 on [0, 1], exactly 0 on [2, inf), smooth between.

    The plateau values are produced by literal constants, not by saturating
    arithmetic, so multiplying by this cutoff inside its plateau is exact.
    """
    return smoothstep(2.0 - np.asarray(r, dtype=np.float64))


def lp_bump(r):
    """Dyadic annulus bump beta(r) = chi(r) - chi(2 r); beta(1) = 1."""
    r = np.asarray(r, dtype=np.float64)
    return cutoff_chi(r) - cutoff_chi(2.0 * r)


def lp_bump_wide(r):
    """Fattened annulus bump, exactly 1 on supp(beta) = [1/2, 2]."""
    r = np.asarray(r, dtype=np.float64)
    return cutoff_chi(0.5 * r) - cutoff_chi(4.0 * r)


def lp_multiplier(grid: Grid, k: int) -> np.ndarray:
    """beta(2^{-k} |xi|) on the lattice (the projector's symbol)."""
    return lp_bump(np.ldexp(grid.absxi, -k))


def lp_multiplier_wide(grid: Grid, k: int) -> np.ndarray:
    return lp_bump_wide(np.ldexp(grid.absxi, -k))


def lp_project(grid: Grid, u: np.ndarray, k: int, wide: bool = False) -> np.ndarray:
    mult = lp_multiplier_wide(grid, k) if wide else lp_multiplier(grid, k)
    return grid.inverse(mult * grid.forward(u))


def lp_shell_range(grid: Grid):
    """All k with supp beta(2^{-k} |.|) intersecting the nonzero lattice."""
    xi_min = 2.0 * np.pi / grid.L
    xi_max = float(grid.absxi.max())
    k_lo = int(np.floor(np.log2(xi_min))) - 1
    k_hi = int(np.ceil(np.log2(xi_max))) + 1
    return range(k_lo, k_hi + 1)
