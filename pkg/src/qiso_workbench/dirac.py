"""The word-length Dirac operator on finitely supported vectors, its spectrum and heat trace."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Mapping

from .cyclotomic import CyclotomicScalar, ScalarLike
from .groups import Element, Group, GroupError

TAIL_CUTOFF = 1e-30
ROUNDING_MARGIN = 1e-12


class BallVector:
    """A finitely supported vector in l2 of a group; zero coefficients are dropped."""

    __slots__ = ("group", "coeffs")

    def __init__(self, group: Group, coeffs: Mapping[Element, ScalarLike] = ()):
        self.group = group
        clean = {}
        for g, c in dict(coeffs).items():
            group._check(g)
            c = CyclotomicScalar.coerce(c)
            if c:
                clean[g] = c
        self.coeffs = clean

    @classmethod
    def delta(cls, group: Group, g: Element, coeff: ScalarLike = 1) -> "BallVector":
        return cls(group, {g: coeff})

    @property
    def radius(self) -> int:
        return max((self.group._len(g) for g in self.coeffs), default=0)

    def __add__(self, other: "BallVector") -> "BallVector":
        data = dict(self.coeffs)
        for g, c in other.coeffs.items():
            data[g] = data[g] + c if g in data else c
        return BallVector(self.group, data)

    def __sub__(self, other: "BallVector") -> "BallVector":
        return self + other.scale(-1)

    def scale(self, x: ScalarLike) -> "BallVector":
        return BallVector(self.group, {g: c * x for g, c in self.coeffs.items()})

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, BallVector):
            return NotImplemented
        return self.coeffs.keys() == other.coeffs.keys() and all(
            c == other.coeffs[g] for g, c in self.coeffs.items()
        )

    __hash__ = None  # type: ignore[assignment]

    def is_zero(self) -> bool:
        return not self.coeffs

    def __repr__(self) -> str:
        fmt = self.group.format
        body = " + ".join(f"({c}) d[{fmt(g)}]" for g, c in self.coeffs.items())
        return f"BallVector({body or '0'})"


def dirac_apply(v: BallVector) -> BallVector:
    return BallVector(v.group, {g: c * v.group._len(g) for g, c in v.coeffs.items()})


@dataclass(frozen=True)
class SpectrumTable:
    entries: tuple[tuple[int, int], ...]

    def __iter__(self):
        return iter(self.entries)


def spectrum(group: Group, max_n: int | None = None) -> SpectrumTable:
    """Eigenvalues of D with multiplicities |W_n|; finite groups default to the diameter."""
    if max_n is None:
        if not group.finite:
            raise GroupError("max_n is required for infinite groups")
        max_n = group.diameter()
    rows = []
    for n in range(max_n + 1):
        k = len(group.sphere(n))
        if k:
            rows.append((n, k))
        elif group.finite:
            break
    return SpectrumTable(tuple(rows))


@dataclass(frozen=True)
class HeatTrace:
    value: float
    tail_bound: float
    terms: tuple[float, ...] = field(default=())


def _tail_bound(gens: int, t: float, start: int) -> float:
    """Upper bound for the sum over n >= start of gens^n exp(-t n^2).

    Terms are summed until they are tiny and decreasing; the rest is bounded
    by a geometric series, since the ratio of consecutive terms
    gens exp(-t (2n + 1)) only shrinks with n.  A relative margin covers
    floating-point rounding.
    """
    log_s = math.log(gens) if gens > 1 else 0.0
    total = 0.0
    n = start
    while True:
        log_term = n * log_s - t * n * n
        if log_term > 700:
            return math.inf
        term = math.exp(log_term)
        total += term
        ratio = math.exp(log_s - t * (2 * n + 1))
        if term < TAIL_CUTOFF and ratio < 0.5:
            remainder = term * ratio / (1 - ratio)
            return (total + remainder) * (1 + ROUNDING_MARGIN) + 4 * math.ulp(total)
        n += 1


def heat_trace(group: Group, t: float, max_n: int) -> HeatTrace:
    """Truncated Tr exp(-t D^2) with a certified bound on the omitted tail."""
    if not t > 0:
        raise ValueError("t must be positive")
    if max_n < 0:
        raise ValueError("max_n must be nonnegative")
    terms = []
    for n in range(max_n + 1):
        k = len(group.sphere(n))
        if group.finite and k == 0:
            break
        terms.append(k * math.exp(-t * n * n))
    value = math.fsum(terms)
    if group.finite and max_n >= group.diameter():
        tail = 0.0
    else:
        tail = _tail_bound(len(group.generators), t, max_n + 1)
    return HeatTrace(value, tail, tuple(terms))
