"""Stabilizer commutator identities: exhaustive where feasible, sampled otherwise."""

import time
from dataclasses import dataclass, field

from _common import parse_into, write
from qudo.stabilizers import verify_commutators


@dataclass
class CommutatorConfig:
    Ns: list = field(default_factory=lambda: [1, 2])
    samples: int = 100_000
    seed: int = 0xD4D4
    out: str = ""


def main(cfg: CommutatorConfig):
    out = {}
    for N in cfg.Ns:
        t = time.perf_counter()
        rep = verify_commutators(N, exhaustive=None if N == 1 else False, samples=cfg.samples, seed=cfg.seed)
        print(f"N={N}: ok={rep.ok} relations={len(rep.results)} ({time.perf_counter() - t:.1f}s)")
        out[str(N)] = rep.as_dict()
    write(out, cfg.out or None)


if __name__ == "__main__":
    main(parse_into(CommutatorConfig))
