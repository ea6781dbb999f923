"""Monomial operators: basis permutations with per-configuration phases.

Configurations are integer arrays of shape ``(batch, n_edges)`` holding group
element indices.  An operator is an ordered tuple of factors, applied first to
last.  Every factor either permutes the value of one edge or multiplies by a
diagonal phase ``exp(2*pi*i*k/modulus)`` computed from a few edges.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Iterator, Sequence

import numpy as np

from .phases import Phase


@dataclass(frozen=True, eq=False)
class EdgeMap:
    edge: int
    table: np.ndarray  # new value index for each old value index

    def inverse(self) -> "EdgeMap":
        return EdgeMap(self.edge, np.argsort(self.table))

    def relabel(self, mapping: dict[int, int]) -> "EdgeMap":
        return EdgeMap(mapping[self.edge], self.table)

    @property
    def edges(self) -> tuple[int, ...]:
        return (self.edge,)


@dataclass(frozen=True, eq=False)
class DiagonalPhase:
    edges: tuple[int, ...]
    modulus: int
    fn: Callable[[np.ndarray], np.ndarray]  # (batch, len(edges)) -> (batch,) integers
    sign: int = 1

    def inverse(self) -> "DiagonalPhase":
        return DiagonalPhase(self.edges, self.modulus, self.fn, -self.sign)

    def relabel(self, mapping: dict[int, int]) -> "DiagonalPhase":
        return DiagonalPhase(tuple(mapping[e] for e in self.edges), self.modulus, self.fn, self.sign)

    def evaluate(self, configs: np.ndarray) -> np.ndarray:
        return (self.sign * self.fn(configs[:, list(self.edges)])) % self.modulus


Factor = EdgeMap | DiagonalPhase


class MonomialOperator:
    def __init__(self, factors: Sequence[Factor] = (), name: str = ""):
        self.factors = tuple(factors)
        self.name = name

    @property
    def modulus(self) -> int:
        return math.lcm(1, *(f.modulus for f in self.factors if isinstance(f, DiagonalPhase)))

    @property
    def support(self) -> tuple[int, ...]:
        return tuple(sorted({e for f in self.factors for e in f.edges}))

    @property
    def is_diagonal(self) -> bool:
        return all(isinstance(f, DiagonalPhase) for f in self.factors)

    def apply(self, configs: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        """Return the image configurations and phase numerators modulo ``self.modulus``."""
        c = np.array(configs, dtype=np.int64, copy=True)
        if c.ndim == 1:
            c = c[None, :]
        M = self.modulus
        ph = np.zeros(c.shape[0], dtype=np.int64)
        for f in self.factors:
            if isinstance(f, EdgeMap):
                c[:, f.edge] = f.table[c[:, f.edge]]
            else:
                ph = (ph + f.evaluate(c) * (M // f.modulus)) % M
        return c, ph

    def act(self, config: Sequence[int]) -> tuple[np.ndarray, Phase]:
        c, ph = self.apply(np.asarray(config)[None, :])
        return c[0], Phase.root(int(ph[0]), self.modulus)

    def phase(self, config: Sequence[int]) -> Phase:
        return self.act(config)[1]

    def __matmul__(self, other: "MonomialOperator") -> "MonomialOperator":
        """Operator product: ``(A @ B)`` applies B first."""
        return MonomialOperator(other.factors + self.factors, f"{self.name}*{other.name}")

    def inverse(self) -> "MonomialOperator":
        return MonomialOperator(tuple(f.inverse() for f in reversed(self.factors)), f"({self.name})^-1")

    def dagger(self) -> "MonomialOperator":
        return self.inverse()

    def __pow__(self, k: int) -> "MonomialOperator":
        base = self if k >= 0 else self.inverse()
        return MonomialOperator(base.factors * abs(k), f"({self.name})^{k}")

    def relabel(self, mapping: dict[int, int]) -> "MonomialOperator":
        return MonomialOperator(tuple(f.relabel(mapping) for f in self.factors), self.name)

    def __repr__(self) -> str:
        return f"MonomialOperator({self.name!r}, support={self.support})"


def identity_operator() -> MonomialOperator:
    return MonomialOperator((), "I")


def commutator(a: MonomialOperator, b: MonomialOperator) -> MonomialOperator:
    """Group commutator a^-1 b^-1 a b."""
    out = a.inverse() @ b.inverse() @ a @ b
    out.name = f"[{a.name},{b.name}]"
    return out


# --- streaming equality -------------------------------------------------------

def enumerate_configs(n_edges: int, order: int, chunk: int = 1 << 18) -> Iterator[np.ndarray]:
    total = order ** n_edges
    powers = order ** np.arange(n_edges - 1, -1, -1, dtype=np.int64)
    for start in range(0, total, chunk):
        idx = np.arange(start, min(total, start + chunk), dtype=np.int64)
        yield (idx[:, None] // powers[None, :]) % order


def sample_configs(n_edges: int, order: int, samples: int, rng: np.random.Generator,
                   chunk: int = 1 << 17) -> Iterator[np.ndarray]:
    done = 0
    while done < samples:
        b = min(chunk, samples - done)
        yield rng.integers(0, order, size=(b, n_edges))
        done += b


@dataclass
class EqualityReport:
    ok: bool
    checked: int
    exhaustive: bool
    witness: list[int] | None = None
    support: tuple[int, ...] = ()

    def __bool__(self) -> bool:
        return self.ok


def compare_on_batch(a: MonomialOperator, b: MonomialOperator, configs: np.ndarray) -> np.ndarray:
    """Boolean mask of configurations where a and b agree (image and phase)."""
    ca, pa = a.apply(configs)
    cb, pb = b.apply(configs)
    m = math.lcm(a.modulus, b.modulus)
    same_phase = (pa * (m // a.modulus) - pb * (m // b.modulus)) % m == 0
    return np.all(ca == cb, axis=1) & same_phase


def operators_equal(a: MonomialOperator, b: MonomialOperator, order: int, *,
                    exhaustive: bool | None = None, samples: int = 100_000,
                    rng: np.random.Generator | None = None,
                    exhaustive_limit: int = 20_000_000) -> EqualityReport:
    """Check a == b on every configuration of their joint support (or on random samples)."""
    supp = sorted(set(a.support) | set(b.support))
    mapping = {e: i for i, e in enumerate(supp)}
    la, lb = a.relabel(mapping), b.relabel(mapping)
    k = len(supp)
    if exhaustive is None:
        exhaustive = order ** k <= exhaustive_limit
    if exhaustive:
        stream = enumerate_configs(k, order)
    else:
        stream = sample_configs(k, order, samples, rng or np.random.default_rng(0xD4D4))
    checked = 0
    for batch in stream:
        ok = compare_on_batch(la, lb, batch)
        if not ok.all():
            i = int(np.argmin(ok))
            return EqualityReport(False, checked + i + 1, exhaustive,
                                  [int(x) for x in batch[i]], tuple(supp))
        checked += batch.shape[0]
    return EqualityReport(True, checked, exhaustive, None, tuple(supp))
