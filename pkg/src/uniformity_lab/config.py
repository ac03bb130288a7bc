"""Run configuration: seeds, tolerances, worker count, output format.

All tolerance constants used by the inequality checkers and the oracle
agreement tests live here so they can be overridden in one place (or from
the CLI flags).
"""

from __future__ import annotations

import os
from dataclasses import dataclass, replace

from .errors import PreconditionError

#: Slack added to the right-hand side of inequality checks.
DEFAULT_TOL_INEQ = 1e-9
#: Relative tolerance for agreement between independent evaluation routes.
DEFAULT_TOL_ORACLE = 1e-10

WORKERS_ENV_VAR = "UNIFORMITY_LAB_WORKERS"

_SEED_MAX = 2**64 - 1


@dataclass(frozen=True)
class RunConfig:
    """Shared knobs for every harness run."""

    seed: int = 0
    tol_ineq: float = DEFAULT_TOL_INEQ
    tol_oracle: float = DEFAULT_TOL_ORACLE
    workers: int = 1
    out_format: str = "csv"

    def __post_init__(self) -> None:
        if not (0 <= self.seed <= _SEED_MAX):
            raise PreconditionError(f"seed must fit in 64 bits, got {self.seed}")
        if self.tol_ineq <= 0 or self.tol_oracle <= 0:
            raise PreconditionError("tolerances must be positive")
        if self.workers < 1:
            raise PreconditionError(f"workers must be >= 1, got {self.workers}")
        if self.out_format not in ("csv", "json"):
            raise PreconditionError(f"unknown output format {self.out_format!r}")

    def with_env_workers(self) -> "RunConfig":
        """Return a copy with the worker count overridden by the environment."""
        raw = os.environ.get(WORKERS_ENV_VAR)
        if raw is None:
            return self
        try:
            n = int(raw)
        except ValueError as exc:
            raise PreconditionError(f"{WORKERS_ENV_VAR} must be an integer, got {raw!r}") from exc
        return replace(self, workers=n)

    def provenance(self) -> dict:
        """Snapshot recorded in every report (seed plus tolerances, no timing)."""
        return {
            "seed": self.seed,
            "tol_ineq": self.tol_ineq,
            "tol_oracle": self.tol_oracle,
        }


DEFAULT_CONFIG = RunConfig()
