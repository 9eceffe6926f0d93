"""Run orchestration: schedule, diagnostics, emission, resume.

Determinism rules (the whole point of this module):
- every time coordinate is (absolute step index) * dt, never an accumulated
  float sum, so a resumed run recomputes the same binary64 times;
- accumulation and diagnostics happen at event steps (integer multiples of
  the cadence) in a fixed order: phase accumulation first, then diagnostics,
  then dyadic snapshot capture;
- output floats are printed with %.17g, which round-trips binary64 exactly.
"""

import csv
import os
import tempfile
from dataclasses import dataclass, field

import numpy as np

from .checkpoint import load_checkpoint, save_checkpoint
from .diagnostics import (
    decay_fit,
    edge_mass_fraction,
    mass,
    sigma_norm,
    sup_norm,
    wrap_horizon,
    wrap_horizon_corner,
)
from .evolution import Evolver, apply_low_mode_phases, check_finite, gaussian_initial
from .manifest import RunManifest
from .scattering import PhaseAccumulator, gap_decay_rate, gap_table, profile_hat
from .spectral import Grid

SERIES_COLUMNS = (
    "t", "mass", "energy", "sup_u", "hN", "xv_h3", "x2v_h2", "xi5_sup",
    "sigma_norm", "edge_fraction",
)
GAPS_COLUMNS = ("m", "t1", "t2", "gap_w", "gap_v", "ratio")


@dataclass
class RunResult:
    manifest: RunManifest
    t: float
    u: np.ndarray
    B: np.ndarray
    series: list = field(default_factory=list)
    gaps: list = field(default_factory=list)
    summary: dict = field(default_factory=dict)


def _fmt(x) -> str:
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    return f"{float(x):.17g}"


def _atomic_write_rows(path, header, rows):
    fd, tmp = tempfile.mkstemp(dir=os.path.dirname(os.path.abspath(path)) or ".")
    try:
        with os.fdopen(fd, "w", newline="", encoding="utf-8") as f:
            wr = csv.writer(f)
            wr.writerow(header)
            for row in rows:
                wr.writerow([_fmt(row[c]) for c in header])
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _atomic_write_kv(path, summary: dict):
    fd, tmp = tempfile.mkstemp(dir=os.path.dirname(os.path.abspath(path)) or ".")
    try:
        with os.fdopen(fd, "w", newline="", encoding="utf-8") as f:
            wr = csv.writer(f)
            wr.writerow(("key", "value"))
            for k, v in summary.items():
                wr.writerow((k, _fmt(v) if isinstance(v, (int, float, np.floating, np.integer)) else str(v)))
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def initial_field(grid: Grid, man: RunManifest) -> np.ndarray:
    u = gaussian_initial(grid, man.eps0, man.width)
    if man.random_phases:
        u = apply_low_mode_phases(grid, u, man.seed)
    return u


def _is_dyadic(t: float, dt: float) -> bool:
    if t < 1.0 - 0.25 * dt:
        return False
    m = round(np.log2(max(t, 1e-300)))
    return abs(t - 2.0**m) < 0.25 * dt


def _drive(man, grid, ev, acc, u, k_start, k_end, snapshots, series):
    """Advance from step k_start to k_end, firing events on the cadence grid.

    The event at k_start itself is recorded (it seeds the series on a fresh
    run) but never accumulated: accumulation at time s covers the slice
    (s - cadence, s], which for k_start belongs to the producer of the state.
    """
    spe = man.steps_per_event()

    def fire_event(k, is_start):
        t = k * man.dt
        if not is_start:
            vhat = profile_hat(grid, u, man.alpha, t)
            acc.accumulate(vhat, t, man.cadence)
        else:
            vhat = profile_hat(grid, u, man.alpha, t)
        sup = check_finite(u, man.sup_cap)
        comps = sigma_norm(
            grid, u, man.alpha, t, delta0=man.sigma_delta0, N=man.sigma_N
        )
        row = {
            "t": t,
            "mass": mass(grid, u),
            "energy": ev.energy(u),
            "sup_u": sup,
            "edge_fraction": edge_mass_fraction(grid, grid.inverse(vhat)),
        }
        row.update(comps)
        series.append(row)
        if _is_dyadic(t, man.dt):
            snapshots[int(round(t))] = (vhat.copy(), acc.B.copy())

    if k_start == 0 or not series:
        fire_event(k_start, is_start=True)
    for k in range(k_start + 1, k_end + 1):
        u = ev.step(u)
        if k % spe == 0:
            fire_event(k, is_start=False)
    return u


def _summarize(man, grid, u0hat_abs, series, gaps):
    t_wrap, xi_eff = wrap_horizon(grid, man.alpha, u0hat_abs, man.wrap_threshold)
    ts = [r["t"] for r in series]
    sups = [r["sup_u"] for r in series]
    exponent, npts = decay_fit(ts, sups, 2.0, min(t_wrap, man.t_end))
    masses = [r["mass"] for r in series]
    sigmas = [r["sigma_norm"] for r in series]
    summary = {
        "t_end": series[-1]["t"],
        "t_wrap": t_wrap,
        "t_wrap_corner": wrap_horizon_corner(grid, man.alpha),
        "xi_eff": xi_eff,
        "decay_exponent": exponent,
        "decay_points": npts,
        "mass_drift": abs(masses[-1] / masses[0] - 1.0),
        "sigma_ratio_max": max(sigmas) / sigmas[0],
        "edge_fraction_max": max(r["edge_fraction"] for r in series),
        "delta_fit": gap_decay_rate(gaps),
        "last_ratio": gaps[-1]["ratio"] if gaps else float("nan"),
    }
    return summary


def _emit(outdir, man, result: RunResult):
    os.makedirs(outdir, exist_ok=True)
    _atomic_write_rows(os.path.join(outdir, "series.csv"), SERIES_COLUMNS, result.series)
    _atomic_write_rows(os.path.join(outdir, "gaps.csv"), GAPS_COLUMNS, result.gaps)
    _atomic_write_kv(os.path.join(outdir, "summary.csv"), result.summary)
    man.save(os.path.join(outdir, "manifest.json"))
    save_checkpoint(
        os.path.join(outdir, "state.ckpt"), man, result.t, result.u, result.B
    )


def run_from_manifest(man: RunManifest, outdir=None) -> RunResult:
    man.validate()
    grid = Grid(man.n, man.L)
    ev = Evolver(grid, man.alpha, man.gam, man.lam, man.dt)
    acc = PhaseAccumulator(
        grid, man.alpha, man.lam, theta=man.theta,
        prefactor_scale=man.prefactor_scale, sigma_rel_floor=man.sigma_rel_floor,
    )
    u = initial_field(grid, man)
    u0hat_abs = np.abs(grid.forward(u))
    series, snapshots = [], {}
    u = _drive(man, grid, ev, acc, u, 0, man.total_steps(), snapshots, series)
    gaps = gap_table(grid, snapshots)
    summary = _summarize(man, grid, u0hat_abs, series, gaps)
    result = RunResult(
        manifest=man, t=man.t_end, u=u, B=acc.B, series=series,
        gaps=gaps, summary=summary,
    )
    target = outdir if outdir is not None else man.outdir
    if target:
        _emit(target, man, result)
    return result


def resume_run(ckpt_path, until: float, outdir=None) -> RunResult:
    """Continue a checkpointed run to a later stop time, bit-identically.

    The continued trajectory equals the tail of a single longer run: times
    come from absolute step indices and the phase accumulation schedule is
    unchanged. Series rows start at the checkpoint time (a resume re-records
    that event's diagnostics; it does not re-accumulate it).
    """
    man, t0, u, B = load_checkpoint(ckpt_path)
    if until <= t0:
        raise ValueError(f"resume target {until} is not past the checkpoint time {t0}")
    man = man.replace(t_end=until)
    grid = Grid(man.n, man.L)
    ev = Evolver(grid, man.alpha, man.gam, man.lam, man.dt)
    acc = PhaseAccumulator(
        grid, man.alpha, man.lam, theta=man.theta,
        prefactor_scale=man.prefactor_scale, sigma_rel_floor=man.sigma_rel_floor,
    )
    acc.B[...] = B
    k0 = int(round(t0 / man.dt))
    if abs(k0 * man.dt - t0) > 1e-9:
        raise ValueError("checkpoint time is not on the step grid")
    if k0 % man.steps_per_event():
        raise ValueError("checkpoint time is not on the event grid")
    u0 = initial_field(grid, man)
    u0hat_abs = np.abs(grid.forward(u0))
    series, snapshots = [], {}
    u = _drive(man, grid, ev, acc, u, k0, man.total_steps(), snapshots, series)
    gaps = gap_table(grid, snapshots)
    summary = _summarize(man, grid, u0hat_abs, series, gaps) if series else {}
    result = RunResult(
        manifest=man, t=man.t_end, u=u, B=acc.B, series=series,
        gaps=gaps, summary=summary,
    )
    target = outdir if outdir is not None else man.outdir
    if target:
        _emit(target, man, result)
    return result
