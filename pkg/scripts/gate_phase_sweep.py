"""Logical phase of the transversal gate across N and patch sizes, with gauge checks."""

import time
from dataclasses import dataclass, field

from _common import parse_into, write
from qudo.logical_gate import extract_logical_phase


@dataclass
class SweepConfig:
    """Sweep N over patches; trials random orbit points per representative."""
    Ns: list = field(default_factory=lambda: [1, 2, 3, 4])
    sizes: list = field(default_factory=lambda: [4, 6])
    trials: int = 20
    seed: int = 0xD4D4
    out: str = ""


def main(cfg: SweepConfig):
    rows = []
    for N in cfg.Ns:
        for w in cfg.sizes:
            t = time.perf_counter()
            rep = extract_logical_phase(N, w, w, trials=cfg.trials, seed=cfg.seed)
            d = rep.as_dict()
            d["seconds"] = round(time.perf_counter() - t, 3)
            rows.append(d)
            print(f"N={N} {w}x{w}: {d['relative_phase']} (expected {d['expected']}) ok={rep.ok}")
    write({"config": vars(cfg), "rows": rows}, cfg.out or None)


if __name__ == "__main__":
    main(parse_into(SweepConfig))
