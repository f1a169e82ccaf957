"""Exact Laplacian coefficients c_gamma and the free-group sphere ratios.

Two families of ratios are provided.  ``ratio_r`` averages the squared length
change over the reduced sphere W_n.  ``ratio_r_formal`` averages over all
|S|^n formal words instead, with two readings of the length of a formal
product:

* ``"junction"``: ``gamma`` (reduced) is concatenated with the formal word and
  only the cancellation across the seam is performed, the formal word itself
  counting as length n.  Free groups only.
* ``"walk"``: both lengths are taken after full reduction, i.e. the average
  over the simple random walk of length n.
"""
from __future__ import annotations

import math
import random
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any

from .groups import Element, FreeGroup, Group, GroupError

READINGS = ("junction", "walk")


class StabilizationError(ArithmeticError):
    pass


def coeff_finite(group: Group, gamma: Element) -> Fraction:
    """Average of |l(gamma k) - l(k)|^2 over the whole finite group."""
    if not group.finite:
        raise GroupError(f"{group.spec} is infinite; use ratio_r or free_R")
    gamma = group._check(gamma)
    elems = group.elements()
    total = 0
    for k in elems:
        d = group._len(group._mul(gamma, k)) - group._len(k)
        total += d * d
    return Fraction(total, len(elems))


def _seam_cancellation(gamma: tuple, kappa: tuple) -> int:
    k = 0
    m = min(len(gamma), len(kappa))
    while k < m and gamma[-1 - k] == -kappa[k]:
        k += 1
    return k


def _free_sphere_size(rank: int, n: int) -> int:
    return 1 if n == 0 else 2 * rank * (2 * rank - 1) ** (n - 1)


def _free_prefixes(rank: int, p: int):
    letters = [s * (i + 1) for i in range(rank) for s in (1, -1)]
    out: list[tuple] = [()]
    for _ in range(p):
        out = [w + (x,) for w in out for x in letters if not w or w[-1] != -x]
    return out


def _free_ratio_sum(group: FreeGroup, gamma: tuple, n: int) -> int:
    """Sum over W_n of (l(gamma k) - l(k))^2, counting only prefixes of length min(n, m+1)."""
    m = len(gamma)
    p = min(n, m + 1)
    weight = (2 * group.rank - 1) ** (n - p)
    total = 0
    for prefix in _free_prefixes(group.rank, p):
        d = m - 2 * _seam_cancellation(gamma, prefix)
        total += d * d
    return total * weight


def sphere_sum(group: Group, gamma: Element, n: int) -> int:
    if isinstance(group, FreeGroup):
        return _free_ratio_sum(group, gamma, n)
    total = 0
    for k in group.sphere(n):
        d = group._len(group._mul(gamma, k)) - group._len(k)
        total += d * d
    return total


def sphere_size(group: Group, n: int) -> int:
    if isinstance(group, FreeGroup):
        group._check_radius(n)
        return _free_sphere_size(group.rank, n)
    return len(group.sphere(n))


def ratio_r(group: Group, gamma: Element, n: int) -> Fraction:
    """r_{n,gamma}: average of |l(gamma k) - l(k)|^2 over the reduced sphere W_n."""
    gamma = group._check(gamma)
    size = sphere_size(group, n)
    if size == 0:
        raise GroupError(f"sphere of radius {n} in {group.spec} is empty")
    return Fraction(sphere_sum(group, gamma, n), size)


def ratio_r_formal(group: Group, gamma: Element, n: int, reading: str = "junction") -> Fraction:
    """Average over all |S|^n formal words; see the module docstring for the readings."""
    gamma = group._check(gamma)
    group._check_radius(n)
    gens = len(group.generators)
    if reading == "junction":
        if not isinstance(group, FreeGroup):
            raise GroupError("the junction reading is defined for free groups only")
        m = len(gamma)
        p = min(n, m)
        letters = [x[0] for x in group.generators]
        total = 0
        for word in group.formal_words(p):
            d = m - 2 * _seam_cancellation(gamma, tuple(letters[i] for i in word))
            total += d * d
        return Fraction(total * gens ** (n - p), gens**n)
    if reading == "walk":
        counts: Counter = Counter({group.identity(): 1})
        for _ in range(n):
            nxt: Counter = Counter()
            for g, c in counts.items():
                for s in group.generators:
                    nxt[group._mul(g, s)] += c
            counts = nxt
        total = 0
        for g, c in counts.items():
            d = group._len(group._mul(gamma, g)) - group._len(g)
            total += c * d * d
        return Fraction(total, gens**n)
    raise ValueError(f"unknown reading {reading!r}; expected one of {READINGS}")


@dataclass
class Stabilization:
    m: int
    value: Fraction | None
    n_range: tuple[int, int]
    stable_in_n: bool
    independent_of_gamma: bool
    representatives: int
    within_bounds: bool
    per_n: dict[int, Fraction] = field(default_factory=dict)
    note: str = ""

    @property
    def ok(self) -> bool:
        return self.stable_in_n and self.independent_of_gamma and self.within_bounds


def free_bounds(rank: int, m: int) -> tuple[Fraction, Fraction]:
    return Fraction(2 * rank - 1, 2 * rank) * m * m, Fraction(m * m)


def _representatives(group: FreeGroup, m: int, seed: int = 0, count: int = 8) -> list[tuple]:
    if m <= 3:
        return group.sphere(m)
    rng = random.Random(seed)
    letters = [x[0] for x in group.generators]
    reps = [group.sphere(m)[0]]
    while len(reps) < count + 1:
        w: list[int] = []
        while len(w) < m:
            x = rng.choice(letters)
            if not w or w[-1] != -x:
                w.append(x)
        if tuple(w) not in reps:
            reps.append(tuple(w))
    return reps


def free_R(
    rank: int,
    m: int,
    probe_depth: int | None = None,
    reading: str = "reduced",
    seed: int = 0,
) -> tuple[Fraction, Stabilization]:
    """The stabilized ratio R_m for free:rank, with the evidence for stabilization.

    ``reading`` is ``"reduced"`` (average over W_n) or one of the formal readings.
    A failure to stabilize raises ``StabilizationError`` for the reduced
    reading; for formal readings it is recorded in the evidence and the value
    at n = m is returned.
    """
    if m < 0:
        raise ValueError("m must be nonnegative")
    if probe_depth is None:
        probe_depth = m + 4
    if probe_depth < m:
        raise ValueError("probe_depth must be at least m")
    group = FreeGroup(rank, cap=max(probe_depth, 12))
    if m == 0:
        ev = Stabilization(0, Fraction(0), (0, probe_depth), True, True, 1, True, {0: Fraction(0)})
        return Fraction(0), ev

    def r(gamma, n):
        if reading == "reduced":
            return ratio_r(group, gamma, n)
        return ratio_r_formal(group, gamma, n, reading)

    reps = _representatives(group, m, seed)
    base = reps[0]
    per_n = {n: r(base, n) for n in range(m, probe_depth + 1)}
    value = per_n[m]
    stable_n = all(v == value for v in per_n.values())
    independent = all(r(g, n) == per_n[n] for g in reps[1:] for n in (m, probe_depth))
    lo, hi = free_bounds(rank, m)
    bounded = all(lo <= v <= hi for v in per_n.values())
    ev = Stabilization(m, value, (m, probe_depth), stable_n, independent, len(reps), bounded, per_n)
    if not stable_n:
        ev.note = "ratio changes with n"
    elif not independent:
        ev.note = "ratio depends on the representative"
    elif not bounded:
        ev.note = f"ratio outside [{lo}, {hi}]"
    if reading == "reduced" and not ev.ok:
        raise StabilizationError(f"free:{rank}, m={m}: {ev.note}")
    return value, ev


def c_t_gamma(group: Group, gamma: Element, t: float, max_n: int) -> float:
    """Heat-weighted average of |l(gamma k) - l(k)|^2, both sums cut at max_n."""
    if not t > 0:
        raise ValueError("t must be positive")
    gamma = group._check(gamma)
    num = []
    den = []
    for n in range(max_n + 1):
        size = sphere_size(group, n)
        if size == 0:
            break
        w = math.exp(-t * n * n)
        num.append(w * sphere_sum(group, gamma, n))
        den.append(w * size)
    return math.fsum(num) / math.fsum(den)


@dataclass
class LaplacianReport:
    group: str
    coefficients: dict[int, Fraction]
    constant_on_spheres: bool
    injective_across_lengths: bool
    kernel_dim_one: bool
    increasing: bool
    within_bounds: bool
    stabilization: list[Stabilization] = field(default_factory=list)
    formal: dict[int, dict[str, Any]] = field(default_factory=dict)
    notes: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return (
            self.constant_on_spheres
            and self.injective_across_lengths
            and self.kernel_dim_one
            and self.increasing
            and self.within_bounds
            and all(s.ok for s in self.stabilization)
        )


def _flags(table: dict[int, Fraction]) -> tuple[bool, bool, bool]:
    values = [table[k] for k in sorted(table)]
    injective = len(set(values)) == len(values)
    kernel_one = all((v == 0) == (k == 0) for k, v in table.items())
    increasing = all(a < b for a, b in zip(values, values[1:]))
    return injective, kernel_one, increasing


def admissibility_report(group: Group, max_length: int, probe_depth: int | None = None) -> LaplacianReport:
    """Coefficient table by length with the admissibility flags.

    Finite groups use the exact finite-group average; free groups use the
    stabilized reduced-sphere ratio, with the formal-word readings reported
    alongside.
    """
    if group.finite:
        top = min(max_length, group.diameter())
        table: dict[int, Fraction] = {}
        constant = True
        bounded = True
        for n in range(top + 1):
            vals = {coeff_finite(group, g) for g in group.sphere(n)}
            constant &= len(vals) == 1
            bounded &= all(0 <= v <= n * n for v in vals)
            table[n] = min(vals)
        injective, kernel_one, increasing = _flags(table)
        return LaplacianReport(group.spec, table, constant, injective, kernel_one, increasing, bounded)

    if not isinstance(group, FreeGroup):
        raise GroupError("admissibility reports cover finite groups and free groups")
    table = {}
    evidence = []
    formal: dict[int, dict[str, Any]] = {}
    notes = []
    for m in range(max_length + 1):
        depth = m + 4 if probe_depth is None else max(probe_depth, m)
        try:
            value, ev = free_R(group.rank, m, depth)
        except StabilizationError as exc:
            notes.append(str(exc))
            value, ev = free_R(group.rank, m, depth, reading="junction")
            ev.note = "reduced reading failed to stabilize: " + str(exc)
            ev.stable_in_n = False
        table[m] = value
        evidence.append(ev)
        if m:
            junction, jev = free_R(group.rank, m, depth, reading="junction")
            gamma = group.sphere(m)[0]
            walk = {n: ratio_r_formal(group, gamma, n, "walk") for n in range(m, min(depth, m + 4) + 1)}
            formal[m] = {
                "junction": junction,
                "junction_stable": jev.ok,
                "walk": walk,
                "walk_stable": len(set(walk.values())) == 1,
                "differs_from_reduced": junction != value,
            }
            if junction != value:
                notes.append(f"R_{m}: reduced reading {value} differs from formal reading {junction}")
    injective, kernel_one, increasing = _flags(table)
    bounded = all(ev.within_bounds for ev in evidence)
    return LaplacianReport(
        group.spec, table, all(ev.independent_of_gamma for ev in evidence), injective, kernel_one,
        increasing, bounded, evidence, formal, notes,
    )
