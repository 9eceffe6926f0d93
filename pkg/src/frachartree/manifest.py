"""Run manifest: one JSON document pins one deterministic run."""

import json
from dataclasses import asdict, dataclass, field, fields

from .scattering import resolve_theta


@dataclass(frozen=True)
class RunManifest:
    n: int = 64
    L: float = 32.0
    alpha: float = 1.8
    gam: float = 1.0
    lam: float = 8.0
    eps0: float = 0.05
    width: float = 1.0
    dt: float = 0.01
    t_end: float = 16.0
    cadence: float = 0.5
    theta: float = None
    seed: int = None
    random_phases: bool = False
    wrap_threshold: float = 1e-4
    sigma_delta0: float = 1.0 / 36.0
    sigma_N: float = 10.0
    prefactor_scale: float = 1.0
    sigma_rel_floor: float = 1e-10
    sup_cap: float = 1e3
    outdir: str = field(default=None)

    # -- derived integer schedule ------------------------------------------

    def steps_per_event(self) -> int:
        k = int(round(self.cadence / self.dt))
        if k < 1 or abs(k * self.dt - self.cadence) > 1e-12 * max(1.0, self.cadence):
            raise ValueError("cadence must be a positive integer multiple of dt")
        return k

    def total_steps(self) -> int:
        m = int(round(self.t_end / self.dt))
        if m < 1 or abs(m * self.dt - self.t_end) > 1e-9 * max(1.0, self.t_end):
            raise ValueError("t_end must be a positive integer multiple of dt")
        return m

    def validate(self) -> "RunManifest":
        if self.n <= 0 or self.n % 2:
            raise ValueError("n must be a positive even integer")
        if self.L <= 0:
            raise ValueError("L must be positive")
        if not 1.0 < self.alpha <= 2.0:
            raise ValueError("alpha must lie in (1, 2]")
        if not 0.0 < self.gam < 3.0:
            raise ValueError("gam must lie in (0, 3)")
        if self.eps0 <= 0 or self.width <= 0:
            raise ValueError("eps0 and width must be positive")
        if self.dt <= 0:
            raise ValueError("dt must be positive")
        self.steps_per_event()
        self.total_steps()
        if self.total_steps() % self.steps_per_event():
            raise ValueError("t_end must be an integer number of cadence events")
        resolve_theta(self.alpha, self.theta)  # raises on alpha <= 5/3 w/o theta
        if self.random_phases and self.seed is None:
            raise ValueError("random_phases requires a seed")
        if not 0 < self.wrap_threshold < 1:
            raise ValueError("wrap_threshold must lie in (0, 1)")
        return self

    # -- serialization ------------------------------------------------------

    def to_json(self) -> str:
        return json.dumps(asdict(self), indent=2, sort_keys=True)

    def save(self, path: str) -> None:
        with open(path, "w", encoding="utf-8") as f:
            f.write(self.to_json() + "\n")

    @classmethod
    def from_dict(cls, d: dict) -> "RunManifest":
        known = {f.name for f in fields(cls)}
        unknown = set(d) - known
        if unknown:
            raise ValueError(f"unknown manifest keys: {sorted(unknown)}")
        return cls(**d).validate()

    @classmethod
    def from_json(cls, text: str) -> "RunManifest":
        return cls.from_dict(json.loads(text))

    @classmethod
    def load(cls, path: str) -> "RunManifest":
        with open(path, "r", encoding="utf-8") as f:
            return cls.from_json(f.read())

    def replace(self, **kw) -> "RunManifest":
        d = asdict(self)
        d.update(kw)
        return RunManifest(**d).validate()
