"""Tunable limits and tolerances.

Every guard and default tolerance lives here so nothing is a silent limit.
"""
from __future__ import annotations

import json
import os
from dataclasses import asdict, dataclass, field, fields

# sieve tables refuse anything larger than this
SIEVE_MAX = 2**31
# dense exact matrices (Bareiss, sparse products)
DENSE_MAX = 512
# evaluate-and-interpolate characteristic polynomial oracle
ORACLE_MAX = 64

DEFAULT_SEGMENT = 1 << 16
ROOT_TOL = 1e-12
POWER_TOL = 1e-10
POWER_MAX_ITER = 10_000

THREADS_ENV = "UNITARY_REDHEFFER_THREADS"


@dataclass(frozen=True)
class Tolerances:
    root_tol: float = ROOT_TOL
    power_tol: float = POWER_TOL


@dataclass(frozen=True)
class Guards:
    dense_max: int = DENSE_MAX
    oracle_max: int = ORACLE_MAX


@dataclass(frozen=True)
class RunConfig:
    threads: int = 1
    segment_size: int = DEFAULT_SEGMENT
    tolerances: Tolerances = field(default_factory=Tolerances)
    guards: Guards = field(default_factory=Guards)
    output: str = "-"

    def __post_init__(self):
        if self.threads < 1 or self.segment_size < 2:
            raise ValueError("threads must be >= 1 and segment_size >= 2")
        if self.tolerances.root_tol <= 0 or self.tolerances.power_tol <= 0:
            raise ValueError("tolerances must be positive")
        if self.guards.dense_max < 2 or self.guards.oracle_max < 2:
            raise ValueError("guards must be >= 2")

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, data: dict) -> "RunConfig":
        known = {f.name for f in fields(cls)}
        unknown = set(data) - known
        if unknown:
            raise ValueError(f"unknown config keys: {sorted(unknown)}")
        data = dict(data)
        if "tolerances" in data:
            data["tolerances"] = Tolerances(**data["tolerances"])
        if "guards" in data:
            data["guards"] = Guards(**data["guards"])
        return cls(**data)


def load_config(path: str | None = None, **overrides) -> RunConfig:
    """Merge an optional JSON config file, the threads env var and overrides."""
    data: dict = {}
    if path:
        with open(path) as fh:
            data.update(json.load(fh))
    env = os.environ.get(THREADS_ENV)
    if env:
        data["threads"] = int(env)
    data.update({k: v for k, v in overrides.items() if v is not None})
    return RunConfig.from_dict(data)
