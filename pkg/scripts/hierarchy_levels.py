"""Clifford-hierarchy levels of the stabilizer generators and the logical gate for n = 3..5."""

import csv
import sys
import time
from dataclasses import dataclass, field

from _common import parse_into
from qudo.cli import table_rows
from qudo.hierarchy import stabilizer_levels


@dataclass
class LevelsConfig:
    ns: list = field(default_factory=lambda: [3, 4, 5])
    max_k: int = 6
    per_generator: bool = True
    out: str = ""


def main(cfg: LevelsConfig):
    if cfg.per_generator:
        for n in cfg.ns:
            t = time.perf_counter()
            rep = stabilizer_levels(n, cfg.max_k)
            gens = ", ".join(f"{k}={v.level}" for k, v in rep.levels.items())
            print(f"n={n}: {gens} -> max {rep.maximum} ({time.perf_counter() - t:.1f}s)", file=sys.stderr)
    _, t2 = table_rows(tuple(cfg.ns))
    fh = open(cfg.out, "w", newline="") if cfg.out else sys.stdout
    w = csv.DictWriter(fh, fieldnames=list(t2[0]))
    w.writeheader()
    w.writerows(t2)


if __name__ == "__main__":
    main(parse_into(LevelsConfig))
