"""Pseudo-spectral simulator and modified-scattering diagnostics for the 3-d
fractional Hartree equation  i u_t - |grad|^alpha u = lam (|x|^{-gam} * |u|^2) u
on a periodic box."""

from .checkpoint import load_checkpoint, save_checkpoint
from .diagnostics import (
    decay_fit,
    edge_mass_fraction,
    lp_profile,
    mass,
    sigma_norm,
    sobolev_norm,
    sup_norm,
    weighted_profile_norms,
    wrap_horizon,
    wrap_horizon_corner,
    xi5_sup,
)
from .evolution import (
    Evolver,
    apply_low_mode_phases,
    gaussian_initial,
    linear_propagate,
)
from .lemmas import verify, verify_all
from .manifest import RunManifest
from .runner import RunResult, resume_run, run_from_manifest
from .scattering import (
    PhaseAccumulator,
    gap_decay_rate,
    gap_table,
    modified_profile,
    profile_hat,
    theta_default,
    weighted_sup_diff,
    z_vector,
)
from .spectral import Grid, cutoff_chi, lp_bump, lp_project, smoothstep

__version__ = "0.1.0"

__all__ = [
    "Evolver",
    "Grid",
    "PhaseAccumulator",
    "RunManifest",
    "RunResult",
    "apply_low_mode_phases",
    "cutoff_chi",
    "decay_fit",
    "edge_mass_fraction",
    "gap_decay_rate",
    "gap_table",
    "gaussian_initial",
    "linear_propagate",
    "load_checkpoint",
    "lp_bump",
    "lp_profile",
    "lp_project",
    "mass",
    "modified_profile",
    "profile_hat",
    "resume_run",
    "run_from_manifest",
    "save_checkpoint",
    "sigma_norm",
    "smoothstep",
    "sobolev_norm",
    "sup_norm",
    "theta_default",
    "verify",
    "verify_all",
    "weighted_profile_norms",
    "weighted_sup_diff",
    "wrap_horizon",
    "wrap_horizon_corner",
    "xi5_sup",
    "z_vector",
]
