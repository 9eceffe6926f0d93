"""Norms, decay fits, and finite-box fencing for run-time monitoring."""

import numpy as np

from .spectral import Grid, lp_multiplier, lp_shell_range


def mass(grid: Grid, u: np.ndarray) -> float:
    """Discrete L^2 mass, h^3 sum |u|^2."""
    return grid.cell_volume * float(np.sum(u.real**2 + u.imag**2))


def sup_norm(u: np.ndarray) -> float:
    return float(np.abs(u).max())


def sobolev_norm(grid: Grid, u: np.ndarray, s: float) -> float:
    """H^s norm via the frequency side: sqrt(L^{-3} sum <xi>^{2s} |u_hat|^2).

    Normalized so that s = 0 reproduces sqrt(mass).
    """
    uh = grid.forward(u)
    wt = grid.bracket2() ** s if s != 0.0 else 1.0
    return float(
        np.sqrt(np.sum(wt * (uh.real**2 + uh.imag**2)) / grid.L**3)
    )


def xi5_sup(grid: Grid, vhat: np.ndarray, order: float = 5.0) -> float:
    """sup <xi>^order |vhat|."""
    return float((grid.bracket2() ** (order / 2.0) * np.abs(vhat)).max())


def weighted_profile_norms(grid: Grid, vhat: np.ndarray):
    """First and second moment norms of the profile.

    Returns (xv_h3, x2v_h2): the sum over the 3 components of ||x_j v||_{H^3}
    and over the 9 pairs of ||x_i x_j v||_{H^2}, moments taken against the
    centered box coordinate. Meaningful only while the profile's mass stays
    away from the box edge; see edge_mass_fraction.
    """
    v = grid.inverse(vhat)
    X = grid.coords
    xv = 0.0
    for j in range(3):
        xv += sobolev_norm(grid, X[j] * v, 3.0)
    x2v = 0.0
    for i in range(3):
        for j in range(3):
            x2v += sobolev_norm(grid, X[i] * X[j] * v, 2.0)
    return float(xv), float(x2v)


def edge_mass_fraction(grid: Grid, v: np.ndarray, inner: float = 0.9) -> float:
    """Fraction of L^2 mass with max_j |x_j| >= inner * L/2."""
    X1, X2, X3 = grid.coords
    edge = np.maximum(np.abs(X1), np.maximum(np.abs(X2), np.abs(X3))) >= (
        inner * grid.L / 2.0
    )
    rho = v.real**2 + v.imag**2
    total = float(rho.sum())
    if total == 0.0:
        return 0.0
    return float(rho[edge].sum()) / total


def sigma_norm(
    grid: Grid,
    u: np.ndarray,
    alpha: float,
    t: float,
    delta0: float = 1.0 / 36.0,
    N: float = 10.0,
) -> dict:
    """Bootstrap control bracket, returned by component.

    <t>^{-delta0} ||u||_{H^N} + <t>^{-delta0} sum_j ||x_j v||_{H^3}
    + <t>^{-2 delta0} sum_ij ||x_i x_j v||_{H^2} + sup <xi>^5 |v_hat|
    with v the free-flow-undone profile of u.
    """
    uh = grid.forward(u)
    vhat = np.exp(1j * t * grid.frac_symbol(alpha)) * uh
    bracket_t = np.hypot(1.0, t)
    hN = float(
        np.sqrt(np.sum(grid.bracket2() ** N * (uh.real**2 + uh.imag**2)) / grid.L**3)
    )
    xv, x2v = weighted_profile_norms(grid, vhat)
    x5 = xi5_sup(grid, vhat)
    total = (
        bracket_t ** (-delta0) * hN
        + bracket_t ** (-delta0) * xv
        + bracket_t ** (-2.0 * delta0) * x2v
        + x5
    )
    return {
        "hN": hN,
        "xv_h3": xv,
        "x2v_h2": x2v,
        "xi5_sup": x5,
        "sigma_norm": float(total),
    }


def decay_fit(ts, sups, t_min: float = 2.0, t_max: float = np.inf):
    """Least-squares exponent of sup|u| ~ t^p over [t_min, t_max].

    Returns (exponent, points_used); nan exponent when fewer than 3 samples
    fall inside the window.
    """
    ts = np.asarray(ts, dtype=np.float64)
    sups = np.asarray(sups, dtype=np.float64)
    sel = (ts >= t_min) & (ts <= t_max) & (sups > 0.0)
    if sel.sum() < 3:
        return float("nan"), int(sel.sum())
    p = np.polyfit(np.log(ts[sel]), np.log(sups[sel]), 1)[0]
    return float(p), int(sel.sum())


def wrap_horizon(
    grid: Grid, alpha: float, uhat0: np.ndarray, threshold: float = 1e-4
):
    """Earliest time the fastest populated mode crosses the box.

    Group speed of |xi|^alpha is alpha |xi|^{alpha-1}; "populated" means
    |u_hat(0)| >= threshold * max. Returns (t_wrap, xi_eff). Diagnostics past
    t_wrap see periodic images, not dispersion.
    """
    a = np.abs(uhat0)
    active = a >= threshold * a.max()
    xi_eff = float(grid.absxi[active].max())
    if xi_eff == 0.0:
        return float("inf"), 0.0
    return grid.L / (alpha * xi_eff ** (alpha - 1.0)), xi_eff


def wrap_horizon_corner(grid: Grid, alpha: float) -> float:
    """Worst-case horizon from the lattice corner frequency."""
    xi_max = float(grid.absxi.max())
    return grid.L / (alpha * xi_max ** (alpha - 1.0))


def lp_profile(grid: Grid, u: np.ndarray):
    """Dyadic energy profile: rows (k, ||P_k u||_{L2})."""
    uh = grid.forward(u)
    e = uh.real**2 + uh.imag**2
    scale = grid.freq_cell_volume / (2.0 * np.pi) ** 3
    rows = []
    for k in lp_shell_range(grid):
        mult = lp_multiplier(grid, k)
        val = float(np.sqrt(scale * np.sum(mult * mult * e)))
        rows.append((k, val))
    return rows
