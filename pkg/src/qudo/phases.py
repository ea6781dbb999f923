"""Exact root-of-unity arithmetic.

A :class:`Phase` is ``exp(2*pi*i*t)`` for a rational number of turns ``t``
kept reduced into ``[0, 1)``.  A :class:`CyclotomicInteger` is a finite
integer combination of roots of unity; it is used for character values,
which are sums of phases and must be compared exactly.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache


@dataclass(frozen=True, order=True)
class Phase:
    turns: Fraction

    def __init__(self, turns: Fraction | int | str = 0):
        t = Fraction(turns) % 1
        object.__setattr__(self, "turns", t)

    @classmethod
    def root(cls, k: int, m: int) -> "Phase":
        """``exp(2*pi*i*k/m)``."""
        return cls(Fraction(k, m))

    @classmethod
    def from_pi(cls, num: int, den: int = 1) -> "Phase":
        """``exp(i*pi*num/den)``."""
        return cls(Fraction(num, 2 * den))

    def __mul__(self, other: "Phase") -> "Phase":
        if not isinstance(other, Phase):
            return NotImplemented
        return Phase(self.turns + other.turns)

    def __truediv__(self, other: "Phase") -> "Phase":
        if not isinstance(other, Phase):
            return NotImplemented
        return Phase(self.turns - other.turns)

    def __pow__(self, k: int) -> "Phase":
        return Phase(self.turns * k)

    def inverse(self) -> "Phase":
        return Phase(-self.turns)

    conjugate = inverse

    @property
    def order(self) -> int:
        return self.turns.denominator

    def numerator_mod(self, m: int) -> int:
        """Integer ``k`` with ``self = exp(2*pi*i*k/m)``; fails if ``m`` is too coarse."""
        k = self.turns * m
        if k.denominator != 1:
            raise ValueError(f"{self} is not an {m}-th root of unity")
        return int(k) % m

    def __complex__(self) -> complex:
        t = self.turns
        # exact values on the axes avoid 1e-17 noise
        if t == 0:
            return 1 + 0j
        if t == Fraction(1, 2):
            return -1 + 0j
        if t == Fraction(1, 4):
            return 1j
        if t == Fraction(3, 4):
            return -1j
        return cmath.exp(2j * math.pi * float(t))

    def is_one(self) -> bool:
        return self.turns == 0

    def pi_string(self) -> str:
        """Render as ``exp(i*pi*p/q)`` with the angle in ``(-pi, pi]``."""
        t = self.turns
        if t == 0:
            return "1"
        ang = 2 * t if t <= Fraction(1, 2) else 2 * t - 2
        p, q = ang.numerator, ang.denominator
        sign = "-" if p < 0 else ""
        p = abs(p)
        head = f"{sign}i*pi" if p == 1 else f"{sign}{p}i*pi"
        return f"exp({head})" if q == 1 else f"exp({head}/{q})"

    def __repr__(self) -> str:
        return f"Phase({self.turns})"


ONE = Phase(0)


@lru_cache(maxsize=None)
def cyclotomic_poly(m: int) -> tuple[int, ...]:
    """Coefficients (lowest degree first) of the m-th cyclotomic polynomial."""
    num = [-1] + [0] * (m - 1) + [1]
    for d in range(1, m):
        if m % d == 0:
            num = _poly_divexact(num, list(cyclotomic_poly(d)))
    return tuple(num)


def _poly_divexact(num: list[int], den: list[int]) -> list[int]:
    num = list(num)
    out = [0] * (len(num) - len(den) + 1)
    for i in range(len(out) - 1, -1, -1):
        c = num[i + len(den) - 1] // den[-1]
        out[i] = c
        for j, dj in enumerate(den):
            num[i + j] -= c * dj
    assert not any(num), "inexact cyclotomic division"
    return out


class CyclotomicInteger:
    """Integer combination ``sum_k c_k exp(2*pi*i*k/m)`` with canonical form."""

    __slots__ = ("m", "coeffs")

    def __init__(self, m: int, coeffs: dict[int, int] | None = None):
        self.m = m
        self.coeffs = {}
        for k, c in (coeffs or {}).items():
            k %= m
            self.coeffs[k] = self.coeffs.get(k, 0) + c

    @classmethod
    def from_phase(cls, p: Phase, m: int) -> "CyclotomicInteger":
        return cls(m, {p.numerator_mod(m): 1})

    @classmethod
    def integer(cls, n: int, m: int = 1) -> "CyclotomicInteger":
        return cls(m, {0: n})

    def _lift(self, m: int) -> "CyclotomicInteger":
        if m % self.m:
            raise ValueError("incompatible root orders")
        f = m // self.m
        return CyclotomicInteger(m, {k * f: c for k, c in self.coeffs.items()})

    def _common(self, other: "CyclotomicInteger"):
        m = math.lcm(self.m, other.m)
        return self._lift(m), other._lift(m), m

    def __add__(self, other):
        if isinstance(other, int):
            other = CyclotomicInteger.integer(other, self.m)
        a, b, m = self._common(other)
        out = dict(a.coeffs)
        for k, c in b.coeffs.items():
            out[k] = out.get(k, 0) + c
        return CyclotomicInteger(m, out)

    __radd__ = __add__

    def __neg__(self):
        return CyclotomicInteger(self.m, {k: -c for k, c in self.coeffs.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, int):
            return CyclotomicInteger(self.m, {k: c * other for k, c in self.coeffs.items()})
        a, b, m = self._common(other)
        out: dict[int, int] = {}
        for k1, c1 in a.coeffs.items():
            for k2, c2 in b.coeffs.items():
                k = (k1 + k2) % m
                out[k] = out.get(k, 0) + c1 * c2
        return CyclotomicInteger(m, out)

    __rmul__ = __mul__

    def conjugate(self) -> "CyclotomicInteger":
        return CyclotomicInteger(self.m, {-k: c for k, c in self.coeffs.items()})

    def reduced(self) -> tuple[int, tuple[int, ...]]:
        """Canonical form: remainder modulo the m-th cyclotomic polynomial."""
        poly = [0] * self.m
        for k, c in self.coeffs.items():
            poly[k] += c
        phi = cyclotomic_poly(self.m)
        deg = len(phi) - 1
        for i in range(len(poly) - 1, deg - 1, -1):
            c = poly[i]
            if c:
                for j, pj in enumerate(phi):
                    poly[i - deg + j] -= c * pj
        return self.m, tuple(poly[:deg])

    def __eq__(self, other) -> bool:
        if isinstance(other, int):
            other = CyclotomicInteger.integer(other, self.m)
        if not isinstance(other, CyclotomicInteger):
            return NotImplemented
        a, b, _ = self._common(other)
        return (a - b).reduced()[1] == tuple([0] * len(cyclotomic_poly(a.m)[:-1]))

    def __hash__(self):
        return hash(round(complex(self).real, 9)) ^ hash(round(complex(self).imag, 9))

    def __complex__(self) -> complex:
        return complex(sum(c * complex(Phase.root(k, self.m)) for k, c in self.coeffs.items()))

    def __repr__(self) -> str:
        return f"CyclotomicInteger({complex(self):.6g})"
