"""Job configuration shared by the library entry points and the CLI."""
from __future__ import annotations

import os
from dataclasses import asdict, dataclass, replace

from .errors import DomainError
from .polynomial import Budget

ENV_PREFIX = "DDEG_"


@dataclass(frozen=True)
class JobConfig:
    precision_bits: int = 256
    digits: int = 30
    oracle_depth: int = 8
    horizon: int | None = None  # None means 2n + 4
    budget_terms: int = 200_000
    budget_matrices: int = 10**6
    oracle_tolerance: float = 1e-6
    max_routes: int = 16
    seed: int = 0

    def __post_init__(self):
        for name in ("precision_bits", "digits", "oracle_depth", "budget_terms", "budget_matrices",
                     "max_routes"):
            if getattr(self, name) <= 0:
                raise DomainError(f"{name} must be positive")
        if self.horizon is not None and self.horizon <= 0:
            raise DomainError("horizon must be positive")

    def horizon_for(self, n: int) -> int:
        return self.horizon if self.horizon is not None else 2 * n + 4

    @property
    def budget(self) -> Budget:
        return Budget(self.budget_terms)

    def with_(self, **kw) -> "JobConfig":
        return replace(self, **{k: v for k, v in kw.items() if v is not None})

    def to_record(self):
        return asdict(self)

    @classmethod
    def from_env(cls, environ=None) -> "JobConfig":
        """Defaults overridden by DDEG_PRECISION_BITS, DDEG_DIGITS, ... when set."""
        environ = os.environ if environ is None else environ
        kw = {}
        for name in ("precision_bits", "digits", "oracle_depth", "horizon", "budget_terms",
                     "budget_matrices"):
            raw = environ.get(ENV_PREFIX + name.upper())
            if raw is None or raw == "":
                continue
            try:
                kw[name] = int(raw)
            except ValueError:
                raise DomainError(f"{ENV_PREFIX}{name.upper()} must be an integer, got {raw!r}") from None
        return cls(**kw)


DEFAULT = JobConfig()
