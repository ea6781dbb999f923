"""Images of the three boundary algebras under both code-switch interfaces."""

from dataclasses import dataclass, field

from _common import parse_into, write
from qudo.anyons import codeswitch_z2, codeswitch_z2z2, lagrangians, map_lagrangian


@dataclass
class ImagesConfig:
    Ns: list = field(default_factory=lambda: [1, 2, 3, 4])
    out: str = ""


def main(cfg: ImagesConfig):
    res = {}
    for N in cfg.Ns:
        for name, fn in (("z2z2", codeswitch_z2z2), ("z2", codeswitch_z2)):
            cmap = fn(N)
            for L in lagrangians(N):
                t = map_lagrangian(L, cmap)
                res[f"N={N} {name} {L.subgroup}"] = {"image": str(t), "confined_dropped": t.confined_count}
                print(f"N={N} {name:4s} {L.subgroup:5s} -> {t}")
    write(res, cfg.out or None)


if __name__ == "__main__":
    main(parse_into(ImagesConfig))
