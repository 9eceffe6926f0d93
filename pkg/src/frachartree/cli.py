"""Command line interface.

Subcommands:
    run <manifest.json> [--outdir DIR]
    resume <checkpoint> --until T [--outdir DIR]
    verify-lemmas [--alpha A ...] [--samples N] [--seed S]
    selftest
"""

import argparse
import sys

import numpy as np


def _cmd_run(args) -> int:
    from .manifest import RunManifest
    from .runner import run_from_manifest

    man = RunManifest.load(args.manifest)
    result = run_from_manifest(man, outdir=args.outdir)
    for key, val in result.summary.items():
        print(f"{key} = {val}")
    return 0


def _cmd_resume(args) -> int:
    from .runner import resume_run

    result = resume_run(args.checkpoint, args.until, outdir=args.outdir)
    for key, val in result.summary.items():
        print(f"{key} = {val}")
    return 0


def _cmd_verify_lemmas(args) -> int:
    from .lemmas import verify_all

    reports = verify_all(tuple(args.alpha), samples=args.samples, seed=args.seed)
    ok = True
    for r in reports:
        status = "ok" if r.ok() else "FAIL"
        print(
            f"alpha={r.alpha}: inf ratio {r.inf_ratio:.6f} "
            f"(sharp constant {r.sharp_constant:.6f}), "
            f"sup phase ratio {r.sup_phase_ratio:.6f} "
            f"[{r.samples} samples] {status}"
        )
        ok = ok and r.ok()
    return 0 if ok else 1


def _cmd_selftest(args) -> int:
    from . import diagnostics, evolution, scattering, spectral
    from .kernels import quad_sums

    failures = []

    def check(name, cond):
        print(f"{'ok  ' if cond else 'FAIL'} {name}")
        if not cond:
            failures.append(name)

    g = spectral.Grid(16, 8.0)
    X1, X2, X3 = g.coords
    k = (2 * np.pi / g.L) * np.array([2.0, -1.0, 3.0])
    wave = np.exp(1j * (k[0] * X1 + k[1] * X2 + k[2] * X3))
    wh = g.forward(wave)
    idx = (g.n // 2 + 2, g.n // 2 - 1, g.n // 2 + 3)
    peak = wh[idx]
    rest = np.abs(wh).sum() - np.abs(peak)
    check(
        "plane wave transforms to a single mode of weight L^3",
        abs(peak - g.L**3) < 1e-9 * g.L**3 and rest < 1e-9 * g.L**3,
    )

    rng = np.random.default_rng(7)
    u = rng.standard_normal(g.shape) + 1j * rng.standard_normal(g.shape)
    check(
        "round trip is the identity",
        np.abs(g.inverse(g.forward(u)) - u).max() < 1e-12,
    )

    r = np.exp(np.linspace(np.log(1e-3), np.log(1e3), 2000))
    acc = np.zeros_like(r)
    for kk in range(-24, 26):
        acc += spectral.lp_bump(np.ldexp(r, -kk)) ** 2
    check(
        "dyadic partition of unity stays within [1/2, 1]",
        acc.min() > 0.5 - 1e-12 and acc.max() < 1.0 + 1e-12,
    )

    beta = spectral.lp_multiplier(g, 1)
    beta_wide = spectral.lp_multiplier_wide(g, 1)
    check(
        "wide projector symbol is exactly 1 on the annulus",
        np.array_equal(beta_wide * beta, beta),
    )
    pu = spectral.lp_project(g, u, 1)
    pwide = spectral.lp_project(g, pu, 1, wide=True)
    check(
        "wide projector reproduces the annulus piece to round-off",
        np.abs(pwide - pu).max() <= 1e-12 * max(1.0, np.abs(pu).max()),
    )

    ev = evolution.Evolver(g, 1.8, 1.0, 4.0, 0.02)
    w = evolution.gaussian_initial(g, 0.05, 1.0)
    m0 = diagnostics.mass(g, w)
    for _ in range(50):
        w = ev.step(w)
    check(
        "mass is conserved to round-off",
        abs(diagnostics.mass(g, w) / m0 - 1.0) < 1e-11,
    )

    accum = scattering.PhaseAccumulator(g, 1.8, 4.0)
    vhat = scattering.profile_hat(g, w, 1.8, 1.0)
    accum.accumulate(vhat, 1.0, 0.5)
    inside = g.absxi <= 1.0
    outside = g.absxi >= 2.0
    check(
        "phase correction lives inside the cutoff support",
        np.all(accum.B[outside] == 0.0) and np.all(accum.B[inside] != 0.0),
    )

    p = rng.standard_normal(g.n**3)
    wts = np.abs(rng.standard_normal(g.n**3))
    sig = np.flatnonzero(wts > 0.5)
    act = np.arange(40, dtype=np.int64)
    ref = []
    for ia in act:
        tot = 0.0
        for js in sig:
            if js == ia or js == g.zero_index:
                continue
            d = p[ia] - p[js]
            tot += wts[js] / np.sqrt(3 * d * d)
        ref.append(tot)
    got = quad_sums(p, p, p, wts, sig, act, g.zero_index)
    check(
        "kernel sums match a direct evaluation",
        np.allclose(got, ref, rtol=1e-12),
    )

    if failures:
        print(f"{len(failures)} selftest failure(s)")
        return 1
    print("selftest passed")
    return 0


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="frachartree",
        description="Pseudo-spectral fractional Hartree simulator and "
        "modified-scattering diagnostics",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="execute a run from a JSON manifest")
    p_run.add_argument("manifest")
    p_run.add_argument("--outdir", default=None, help="override the manifest outdir")
    p_run.set_defaults(func=_cmd_run)

    p_res = sub.add_parser("resume", help="continue a checkpointed run")
    p_res.add_argument("checkpoint")
    p_res.add_argument("--until", type=float, required=True)
    p_res.add_argument("--outdir", default=None)
    p_res.set_defaults(func=_cmd_resume)

    p_ver = sub.add_parser(
        "verify-lemmas", help="Monte-Carlo checks of the pointwise inequalities"
    )
    p_ver.add_argument(
        "--alpha", type=float, action="append", default=None,
        help="repeatable; defaults to 1.75 1.8 1.9",
    )
    p_ver.add_argument("--samples", type=int, default=10**6)
    p_ver.add_argument("--seed", type=int, default=2024)
    p_ver.set_defaults(func=_cmd_verify_lemmas)

    p_self = sub.add_parser("selftest", help="fast invariant suite")
    p_self.set_defaults(func=_cmd_selftest)

    args = parser.parse_args(argv)
    if args.command == "verify-lemmas" and args.alpha is None:
        args.alpha = [1.75, 1.8, 1.9]
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
