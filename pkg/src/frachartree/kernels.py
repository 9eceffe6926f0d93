"""Hot kernel for the phase-correction frequency sums, in two lanes.

The kernel computes, for each active target frequency xi, the sum over source
frequencies sigma of  weight(sigma) / |z(xi, sigma)|  where
z = xi/|xi|^{2-alpha} - sigma/|sigma|^{2-alpha} enters through precomputed
vectors p = xi * |xi|^{alpha-2}.

Lanes:
- numba @njit (default), serial loops, fastmath disabled: the accumulation
  order is fixed, so results are bit-stable run to run.
- pure numpy fallback, selected with FRACHARTREE_NUMBA=0. Same arithmetic but
  vectorized summation; agrees with the numba lane to round-off, not bitwise.

Both lanes skip the zero mode and the self term sigma == xi.
"""

import os

import numpy as np

USE_NUMBA = os.environ.get("FRACHARTREE_NUMBA", "1") != "0"

if USE_NUMBA:
    from numba import njit

    @njit(cache=True, fastmath=False, nogil=True)
    def _quad_sums_numba(p1, p2, p3, weights, sig_idx, act_idx, zero_i, out):
        for a in range(act_idx.size):
            ia = act_idx[a]
            a1 = p1[ia]
            a2 = p2[ia]
            a3 = p3[ia]
            acc = 0.0
            for j in range(sig_idx.size):
                js = sig_idx[j]
                if js == ia or js == zero_i:
                    continue
                d1 = a1 - p1[js]
                d2 = a2 - p2[js]
                d3 = a3 - p3[js]
                acc += weights[js] / np.sqrt(d1 * d1 + d2 * d2 + d3 * d3)
            out[a] = acc


def _quad_sums_numpy(p1, p2, p3, weights, sig_idx, act_idx, zero_i, out):
    q1 = p1[sig_idx]
    q2 = p2[sig_idx]
    q3 = p3[sig_idx]
    wts = weights[sig_idx]
    zero_pos = np.searchsorted(sig_idx, zero_i)
    has_zero = zero_pos < sig_idx.size and sig_idx[zero_pos] == zero_i
    for a in range(act_idx.size):
        ia = act_idx[a]
        d1 = p1[ia] - q1
        d2 = p2[ia] - q2
        d3 = p3[ia] - q3
        r = np.sqrt(d1 * d1 + d2 * d2 + d3 * d3)
        contrib = wts / np.where(r > 0.0, r, 1.0)
        contrib[r == 0.0] = 0.0  # self term (and exact p-collisions)
        if has_zero:
            contrib[zero_pos] = 0.0
        out[a] = contrib.sum()


def quad_sums(p1, p2, p3, weights, sig_idx, act_idx, zero_i) -> np.ndarray:
    """Per-target kernel sums over the source set; see module docstring.

    sig_idx must be sorted ascending (np.flatnonzero output is).
    """
    out = np.empty(act_idx.size, dtype=np.float64)
    if act_idx.size == 0:
        return out
    if USE_NUMBA:
        _quad_sums_numba(
            p1, p2, p3, weights,
            sig_idx.astype(np.int64), act_idx.astype(np.int64),
            np.int64(zero_i), out,
        )
    else:
        _quad_sums_numpy(p1, p2, p3, weights, sig_idx, act_idx, zero_i, out)
    return out
