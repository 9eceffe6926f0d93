"""End-to-end acceptance gate.

Everything here runs against the reference configuration (the manifest
defaults: n=64, L=32, alpha=1.8, Coulomb interaction, lam=8, Gaussian data
of amplitude 0.05) or against pinned oracle setups. Tolerances are fixed;
they are requirements, not observations.
"""

import numpy as np
import pytest

from _oracles import phase_increment_continuum, torus_coulomb_series
from frachartree.evolution import Evolver, gaussian_initial
from frachartree.lemmas import verify_all
from frachartree.manifest import RunManifest
from frachartree.runner import run_from_manifest, resume_run
from frachartree.scattering import PhaseAccumulator
from frachartree.spectral import Grid, lp_bump, lp_multiplier, lp_multiplier_wide


@pytest.fixture(scope="session")
def reference(tmp_path_factory):
    out = tmp_path_factory.mktemp("reference")
    man = RunManifest()
    res = run_from_manifest(man, outdir=str(out))
    return man, res, out


# -- exact spectral and conservation invariants ------------------------------


def test_exact_spectral_invariants(reference):
    g = Grid(32, 16.0)
    X1, X2, X3 = g.coords
    k = (2 * np.pi / g.L) * np.array([3.0, 1.0, -2.0])
    wave = np.exp(1j * (k[0] * X1 + k[1] * X2 + k[2] * X3))
    wh = g.forward(wave)
    c = g.n // 2
    assert abs(wh[c + 3, c + 1, c - 2] - g.L**3) <= 1e-12 * g.L**3
    assert np.abs(g.inverse(wh) - wave).max() < 1e-12

    for kk in (-1, 0, 1):
        beta = lp_multiplier(g, kk)
        assert np.array_equal(lp_multiplier_wide(g, kk) * beta, beta)

    r = np.exp(np.linspace(np.log(1e-3), np.log(1e3), 20001))
    total = sum(lp_bump(np.ldexp(r, -kk)) ** 2 for kk in range(-24, 26))
    assert total.min() > 0.5 - 1e-12
    assert total.max() < 1.0 + 1e-12


def test_mass_conserved_over_reference_run(reference):
    _, res, _ = reference
    assert res.summary["mass_drift"] < 1e-10


# -- quadrature oracles -------------------------------------------------------


def test_gaussian_fourier_pair_oracle():
    g = Grid(64, 16.0)
    w = 1.0
    u = np.exp(-g.radius2() / (2 * w**2)).astype(np.complex128)
    want = (2 * np.pi * w**2) ** 1.5 * np.exp(-(w**2) * g.xi2 / 2.0)
    assert np.abs(g.forward(u) - want).max() <= 1e-6 * want.max()


def test_coulomb_potential_oracle():
    g = Grid(64, 16.0)
    eps0, width, lam = 1.0, 1.0, 3.0
    ev = Evolver(g, 1.8, 1.0, lam, 0.01)
    V = ev.potential(gaussian_initial(g, eps0, width))
    c = g.n // 2
    idx = [
        (c, c, c), (c + 6, c, c), (c, c + 9, c), (c + 4, c + 4, c + 4),
        (c + 12, c + 2, c - 5), (c - 10, c + 8, c + 3),
    ]
    pts = np.array([[g.x1[i], g.x1[j], g.x1[k]] for (i, j, k) in idx])
    want = torus_coulomb_series(pts, g.L, eps0, width, lam, mmax=20)
    got = np.array([V[i] for i in idx])
    assert np.abs(got - want).max() < 1e-5 * np.abs(V).max()


def test_phase_increment_oracle():
    g = Grid(64, 32.0)
    alpha, lam, eps0, width = 1.8, 8.0, 0.05, 1.0
    vhat = (
        eps0 * (2 * np.pi) ** 1.5 * width**3
        * np.exp(-(width**2) * g.xi2 / 2.0)
    ).astype(np.complex128)
    acc = PhaseAccumulator(g, alpha, lam)
    c = g.n // 2
    for mm, s in [((4, 0, 0), 2.0), ((2, 2, 1), 2.0), ((6, 0, 0), 1.0)]:
        idx = (c + mm[0], c + mm[1], c + mm[2])
        got = acc.increment_at(vhat, s, 0.5, idx)
        want = phase_increment_continuum(
            float(g.absxi[idx]), s, 0.5, alpha, lam, eps0, width, acc.theta
        )
        assert got == pytest.approx(want, rel=0.05)


# -- temporal convergence -----------------------------------------------------


def test_second_order_in_time():
    g = Grid(32, 16.0)
    u0 = gaussian_initial(g, 0.6, 1.0)
    states = {}
    for dt in (0.04, 0.02, 0.01):
        ev = Evolver(g, 1.8, 1.0, 4.0, dt)
        u = u0.copy()
        for _ in range(int(round(0.4 / dt))):
            u = ev.step(u)
        states[dt] = u
    e1 = np.sqrt(g.cell_volume * np.sum(np.abs(states[0.04] - states[0.02]) ** 2))
    e2 = np.sqrt(g.cell_volume * np.sum(np.abs(states[0.02] - states[0.01]) ** 2))
    assert 1.7 < np.log2(e1 / e2) < 2.3

    ev = Evolver(g, 1.8, 1.0, 4.0, 0.01)
    e0 = ev.energy(u0)
    drifts = {dt: abs(Evolver(g, 1.8, 1.0, 4.0, dt).energy(u) - e0)
              for dt, u in states.items()}
    assert drifts[0.04] > drifts[0.02] > drifts[0.01]
    assert 1.6 < np.log2(drifts[0.04] / drifts[0.01]) / 2.0 < 2.4


# -- Monte-Carlo verification of the pointwise bounds -------------------------


def test_pointwise_bounds_monte_carlo():
    reports = verify_all((1.75, 1.8, 1.9), samples=10**6, seed=2024)
    for rep in reports:
        print(
            f"alpha={rep.alpha}: inf ratio {rep.inf_ratio:.6f} "
            f"(sharp {rep.sharp_constant:.6f}), "
            f"sup phase ratio {rep.sup_phase_ratio:.3f}, "
            f"samples {rep.samples}"
        )
        assert rep.inf_ratio > 0.0
        assert rep.inf_ratio >= rep.sharp_constant * (1.0 - 1e-9)
        assert np.isfinite(rep.sup_phase_ratio)
        assert rep.ok()


# -- dispersive decay of the solution sup norm --------------------------------


def test_solution_sup_decay_rate(reference):
    _, res, _ = reference
    expo = res.summary["decay_exponent"]
    print(
        f"decay exponent {expo:.4f} over t in [2, {res.summary['t_wrap']:.3f}] "
        f"({res.summary['decay_points']} samples), xi_eff {res.summary['xi_eff']:.3f}"
    )
    assert res.summary["decay_points"] >= 5
    assert -1.65 <= expo <= -1.35


# -- modified scattering: corrected profile converges, raw does not -----------


def test_corrected_profile_converges_where_raw_does_not(reference):
    _, res, _ = reference
    assert len(res.gaps) >= 3
    print("m   (t1, t2)        gap_w        gap_v     ratio")
    for r in res.gaps:
        print(
            f"{r['m']}  ({r['t1']:4.1f},{r['t2']:5.1f})  {r['gap_w']:.5e}"
            f"  {r['gap_v']:.5e}  {r['ratio']:.4f}"
        )
    delta_fit = res.summary["delta_fit"]
    last_ratio = res.summary["last_ratio"]
    print(f"delta_fit {delta_fit:.4f}, final-block ratio {last_ratio:.4f}")
    assert delta_fit > 0.0
    assert last_ratio < 0.5


# -- auxiliary-norm bootstrap consistency --------------------------------------


def test_auxiliary_norm_stays_bounded(reference):
    _, res, _ = reference
    ratio = res.summary["sigma_ratio_max"]
    print(f"max sigma-norm ratio over the run: {ratio:.4f}")
    assert np.isfinite(ratio)
    assert ratio < 3.0


def test_fields_stay_in_the_box(reference):
    _, res, _ = reference
    assert res.summary["edge_fraction_max"] < 1e-3


# -- determinism and restartability --------------------------------------------


def test_rerun_is_bit_identical(reference, tmp_path):
    man, res, out = reference
    again = run_from_manifest(man, outdir=str(tmp_path))
    assert np.array_equal(again.u, res.u)
    assert np.array_equal(again.B, res.B)
    for ra, rb in zip(again.series, res.series):
        assert ra == rb
    for name in ("series.csv", "gaps.csv", "summary.csv", "state.ckpt"):
        assert (tmp_path / name).read_bytes() == (out / name).read_bytes()


def test_checkpoint_resume_is_bit_identical(reference, tmp_path):
    man, res, _ = reference
    half = man.replace(t_end=8.0)
    out = tmp_path / "half"
    run_from_manifest(half, outdir=str(out))
    resumed = resume_run(str(out / "state.ckpt"), until=16.0)
    assert np.array_equal(resumed.u, res.u)
    assert np.array_equal(resumed.B, res.B)
    tail = [r for r in res.series if r["t"] >= 8.0]
    assert len(resumed.series) == len(tail)
    for ra, rb in zip(resumed.series, tail):
        assert ra == rb
