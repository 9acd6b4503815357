"""Run configuration shared by the library pipelines and the CLI."""

from __future__ import annotations

import dataclasses
import json
import os
import time
from dataclasses import dataclass
from typing import Optional

from .errors import PreconditionError
from .numkernel import FactorBudget

CONFIG_ENV = "ARBOREAL_CONFIG"


@dataclass(frozen=True)
class RunConfig:
    #: highest level expanded exactly over Q
    exact_level_cap: int = 12
    #: levels of delta_n re-checked exactly in every finite-index certificate
    exact_levels: int = 8
    #: default level for maximality certificates
    max_level: int = 8
    trial_bound: int = 10**6
    rho_iterations: int = 200_000
    sieve_prime_bound: int = 500
    sieve_clean_below: int = 200
    sample_pmin: int = 1000
    sample_pmax: int = 30000
    sigma_bound: int = 2000
    jobs: int = 1
    out_dir: str = "."
    #: timestamp written into certificates; resolved once per run when unset
    created_at: Optional[str] = None

    def __post_init__(self):
        for f in dataclasses.fields(self):
            v = getattr(self, f.name)
            if isinstance(v, int) and not isinstance(v, bool) and v <= 0:
                raise PreconditionError(f"config value {f.name} must be positive, got {v}")
        if self.exact_levels > self.exact_level_cap or self.max_level > self.exact_level_cap:
            raise PreconditionError("exact_levels and max_level may not exceed exact_level_cap")

    @property
    def budget(self) -> FactorBudget:
        return FactorBudget(trial_bound=self.trial_bound, rho_iterations=self.rho_iterations)

    def stamped(self) -> "RunConfig":
        """Copy with ``created_at`` filled in (SOURCE_DATE_EPOCH wins over the clock)."""
        if self.created_at:
            return self
        epoch = os.environ.get("SOURCE_DATE_EPOCH")
        t = int(epoch) if epoch and epoch.isdigit() else int(time.time())
        return dataclasses.replace(self, created_at=time.strftime("%Y-%m-%dT%H:%M:%SZ", time.gmtime(t)))

    def replace(self, **changes) -> "RunConfig":
        changes = {k: v for k, v in changes.items() if v is not None}
        return dataclasses.replace(self, **changes)

    @classmethod
    def from_file(cls, path: str) -> "RunConfig":
        try:
            with open(path) as fh:
                data = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            raise PreconditionError(f"cannot read config {path}: {exc}") from exc
        known = {f.name for f in dataclasses.fields(cls)}
        unknown = set(data) - known
        if unknown:
            raise PreconditionError(f"unknown config keys: {sorted(unknown)}")
        return cls(**data)

    @classmethod
    def default(cls) -> "RunConfig":
        path = os.environ.get(CONFIG_ENV)
        return cls.from_file(path) if path else cls()
