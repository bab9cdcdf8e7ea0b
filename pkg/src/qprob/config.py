"""Tolerances and caps used across the package."""

from __future__ import annotations

import os
from dataclasses import asdict, dataclass, fields, replace

SEED_ENV_VAR = "QPROB_SEED"


@dataclass(frozen=True)
class LatticeConfig:
    tol_comm: float = 1e-9
    tol_null: float = 1e-8

    def __post_init__(self):
        if self.tol_comm <= 0 or self.tol_null <= 0:
            raise ValueError("lattice tolerances must be positive")


@dataclass(frozen=True)
class SuiteConfig:
    """Every tolerance, cap and the seed for one verification run.

    ``tol_cluster=None`` means the relative default ``1e-9 * max(1, ||x||)``.
    Hypothesis deviations below ``tol_comm``/``tol_indep`` are accepted, those
    below ``tol_hyp_warn`` are accepted with a warning.
    """

    tol_herm: float = 1e-9
    tol_proj: float = 1e-9
    tol_spec: float = 1e-9
    tol_cluster: float | None = None
    tol_comm: float = 1e-8
    tol_indep: float = 1e-8
    tol_hyp_warn: float = 1e-6
    tol_check: float = 1e-9
    tol_null: float = 1e-8
    tol_dist: float = 1e-8
    eps_bnd: float = 1e-9
    dim_cap: int = 256
    enum_cap: int = 1_000_000
    max_word_len: int = 4
    n_words: int = 64
    moment_cap: int = 16
    seed: int = 0

    def __post_init__(self):
        for f in fields(self):
            v = getattr(self, f.name)
            if f.name.startswith(("tol_", "eps_")) and v is not None and v <= 0:
                raise ValueError(f"{f.name} must be positive, got {v}")
        for name in ("dim_cap", "enum_cap", "max_word_len", "n_words", "moment_cap"):
            if getattr(self, name) < 1:
                raise ValueError(f"{name} must be >= 1")

    @property
    def lattice(self) -> LatticeConfig:
        # projection commutators are much tighter than operator commutators
        return LatticeConfig(tol_comm=min(self.tol_comm, 1e-9), tol_null=self.tol_null)

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, data: dict) -> "SuiteConfig":
        known = {f.name for f in fields(cls)}
        unknown = set(data) - known
        if unknown:
            raise ValueError(f"unknown config keys: {sorted(unknown)}")
        return cls(**data)

    def with_env_seed(self) -> "SuiteConfig":
        raw = os.environ.get(SEED_ENV_VAR)
        if raw is None or raw == "":
            return self
        return replace(self, seed=int(raw))


DEFAULT_CONFIG = SuiteConfig()
