from __future__ import annotations

import dataclasses
from dataclasses import dataclass

from .lattice import PRUNE_TOL, term_cap
from .stabilizers import DEFAULT_SEED

SCHEMA_VERSION = 1


@dataclass
class RunConfig:
    command: str
    action: str | None = None
    N: int = 1
    n: int | None = None
    width: int = 4
    height: int = 4
    seed: int = DEFAULT_SEED
    samples: int = 100_000
    exhaustive: bool | None = None
    trials: int = 100
    k: int = 1
    m: int = 1
    op: str | None = None
    emit: str | None = None
    target: str = "z2z2"
    max_k: int = 6
    term_cap: int = dataclasses.field(default_factory=term_cap)
    prune_tol: float = PRUNE_TOL
    equality_tol: float = 1e-10
    out: str | None = None
    fmt: str = "json"
    timestamp: bool = True

    def validate(self) -> None:
        if self.N < 1:
            raise ValueError("N must be >= 1")
        if self.width < 2 or self.height < 2 or self.width % 2 or self.height % 2:
            raise ValueError("patch sides must be even and >= 2")
        if self.fmt not in ("json", "csv", "text"):
            raise ValueError(f"unknown format {self.fmt!r}")

    def echo(self) -> dict:
        d = dataclasses.asdict(self)
        d.pop("out")
        d.pop("timestamp")
        return d
