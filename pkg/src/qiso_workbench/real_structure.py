"""The real structure J, the operators T_{g,h}, and the doubled real-structure extension.

Operators are rules on basis labels: each sends delta_a to a single scaled
basis vector, so composition and commutators are exact with no truncation.
The right regular representation is rho_h delta_a = delta_{a h^-1}, for which
J lambda_h J^-1 = rho_h.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Callable, Optional

import numpy as np

from .cyclotomic import Matrix
from .dirac import BallVector
from .groups import Element, FreeGroup, Group
from .models import MatrixModel, Preset, build_action, direct_sum
from .relations import check, is_unitary

Shift = Optional[tuple[int, Element]]


def j_apply(v: BallVector) -> BallVector:
    """J(c delta_g) = conj(c) delta_{g^-1}."""
    g = v.group
    return BallVector(g, {g._inv(k): c.conj() for k, c in v.coeffs.items()})


class BasisOperator:
    """A weighted shift: ``rule(a)`` is ``(coefficient, target)`` or ``None`` for zero."""

    def __init__(self, group: Group, rule: Callable[[Element], Shift], name: str = "op"):
        self.group = group
        self.rule = rule
        self.name = name

    def __call__(self, a: Element) -> Shift:
        out = self.rule(a)
        if out is None or out[0] == 0:
            return None
        return out

    def compose(self, other: "BasisOperator") -> "BasisOperator":
        """self after other."""

        def rule(a):
            first = other(a)
            if first is None:
                return None
            second = self(first[1])
            if second is None:
                return None
            return first[0] * second[0], second[1]

        return BasisOperator(self.group, rule, f"{self.name}{other.name}")

    def __matmul__(self, other: "BasisOperator") -> "BasisOperator":
        return self.compose(other)

    def __sub__(self, other: "BasisOperator") -> "BasisOperator":
        def rule(a):
            x, y = self(a), other(a)
            if x is None:
                return None if y is None else (-y[0], y[1])
            if y is None:
                return x
            if x[1] != y[1]:
                raise ValueError(
                    f"{self.name} - {other.name} is not a weighted shift at {self.group.format(a)}"
                )
            return x[0] - y[0], x[1]

        return BasisOperator(self.group, rule, f"({self.name} - {other.name})")

    def apply(self, v: BallVector) -> BallVector:
        out: dict[Element, Any] = {}
        for a, c in v.coeffs.items():
            r = self(a)
            if r is not None:
                out[r[1]] = out[r[1]] + c * r[0] if r[1] in out else c * r[0]
        return BallVector(v.group, out)


def commutator(x: BasisOperator, y: BasisOperator) -> BasisOperator:
    op = x @ y - y @ x
    op.name = f"[{x.name},{y.name}]"
    return op


def lambda_op(group: Group, g: Element) -> BasisOperator:
    g = group._check(g)
    return BasisOperator(group, lambda a: (1, group._mul(g, a)), f"lambda({group.format(g)})")


def rho_op(group: Group, h: Element) -> BasisOperator:
    hinv = group._inv(group._check(h))
    return BasisOperator(group, lambda a: (1, group._mul(a, hinv)), f"rho({group.format(h)})")


def dirac_op(group: Group) -> BasisOperator:
    return BasisOperator(group, lambda a: (group._len(a), a), "D")


def t_operator(group: Group, g: Element, h: Element) -> BasisOperator:
    """T_{g,h} = [rho_{g^-1}, [D, lambda_h]]."""
    op = commutator(rho_op(group, group.inverse(g)), commutator(dirac_op(group), lambda_op(group, h)))
    op.name = f"T({group.format(g)},{group.format(h)})"
    return op


def t_coefficient(group: Group, g: Element, h: Element, a: Element) -> int:
    """l(ha) - l(a) - l(hag) + l(ag); T_{g,h} sends delta_a to this multiple of delta_{hag}."""
    L, m = group._len, group._mul
    ha, ag = m(h, a), m(a, g)
    return L(ha) - L(a) - L(m(ha, g)) + L(ag)


# ---------------------------------------------------------------------------
# support certificates


@dataclass
class SupportCertificate:
    group: str
    g: str
    h: str
    r0: int
    r: int
    support: list[tuple[str, int]]
    stable: bool
    bound_ok: bool
    max_support_length: int
    outside: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.stable and self.bound_ok

    def to_dict(self) -> dict:
        return {
            "group": self.group,
            "g": self.g,
            "h": self.h,
            "r0": self.r0,
            "r": self.r,
            "support_size": len(self.support),
            "support": [{"a": a, "coefficient": c} for a, c in self.support],
            "max_support_length": self.max_support_length,
            "stable": self.stable,
            "bound_ok": self.bound_ok,
            "outside_r0": self.outside[:20],
        }


class _FreeBallArray:
    """Ball of a free group as a zero-padded int8 array, rows in enumeration order.

    One array per rank is kept at the largest radius requested so far; smaller
    balls are row prefixes of it.
    """

    _cache: dict[int, "_FreeBallArray"] = {}

    def __init__(self, group: FreeGroup, radius: int):
        elems = group.ball(radius)
        self.radius = radius
        self.elems = elems
        self.lens = np.fromiter((len(w) for w in elems), dtype=np.int64, count=len(elems))
        self.arr = np.zeros((len(elems), radius + 1), dtype=np.int8)
        # a^{-1} written left to right: inv[i, j] = -a[len-1-j]
        self.inv = np.zeros_like(self.arr)
        for i, w in enumerate(elems):
            if w:
                self.arr[i, : len(w)] = w
                self.inv[i, : len(w)] = [-x for x in reversed(w)]
        self.counts = np.searchsorted(self.lens, np.arange(radius + 1), side="right")

    @classmethod
    def get(cls, group: FreeGroup, radius: int) -> tuple[list, np.ndarray, np.ndarray, np.ndarray]:
        ball = cls._cache.get(group.rank)
        if ball is None or ball.radius < radius:
            ball = cls._cache[group.rank] = cls(group, radius)
        n = int(ball.counts[radius])
        return ball.elems[:n], ball.arr[:n], ball.inv[:n], ball.lens[:n]


def _prefix_match(cols: np.ndarray, pattern: list[int]) -> np.ndarray:
    """Length of the longest common prefix of each row with ``pattern``."""
    count = np.zeros(cols.shape[0], dtype=np.int64)
    alive = np.ones(cols.shape[0], dtype=bool)
    for j, x in enumerate(pattern):
        if j >= cols.shape[1]:
            break
        alive &= cols[:, j] == x
        count += alive
    return count


def _free_coefficients(group: FreeGroup, g: tuple, h: tuple, radius: int) -> tuple[list[Element], np.ndarray]:
    """Vectorised T coefficients 2 (c(h, ag) - c(h, a)) over ball(radius).

    c(x, y) is the number of letters cancelled when reducing the product x y.
    """
    elems, arr, inv, lens = _FreeBallArray.get(group, radius)
    n, width = arr.shape
    hinv = [-x for x in reversed(h)]  # c(h, y) counts y[i] == -h[-1-i] == hinv[i]
    c_ha = _prefix_match(arr, hinv)
    # reducing a g cancels k letters: ag = a[:L-k] + g[k:]
    k = _prefix_match(inv, list(g))
    keep = lens - k
    gpad = np.zeros(len(g) + len(h) + width + 1, dtype=np.int8)
    gpad[: len(g)] = g
    prefix = np.zeros((n, len(h)), dtype=np.int8)
    for p in range(len(h)):
        a_col = arr[:, p] if p < width else np.zeros(n, dtype=np.int8)
        g_idx = np.clip(k + p - keep, 0, len(gpad) - 1)
        prefix[:, p] = np.where(p < keep, a_col, gpad[g_idx])
    c_hag = _prefix_match(prefix, hinv)
    return elems, 2 * (c_hag - c_ha)


def t_coefficients(group: Group, g: Element, h: Element, radius: int, fast: bool = True) -> list[tuple[Element, int]]:
    """Nonzero T_{g,h} coefficients on ball(radius), in enumeration order."""
    g, h = group._check(g), group._check(h)
    if fast and isinstance(group, FreeGroup) and group.rank <= 127:
        group._check_radius(radius)
        elems, coefs = _free_coefficients(group, g, h, radius)
        idx = np.nonzero(coefs)[0]
        return [(elems[i], int(coefs[i])) for i in idx]
    out = []
    for a in group.ball(radius):
        c = t_coefficient(group, g, h, a)
        if c:
            out.append((a, c))
    return out


def support_certificate(
    group: Group, g: Element, h: Element, r0: int, r: int, fast: bool = True
) -> SupportCertificate:
    """Enumerate the support of T_{g,h} in ball(r); stable iff nothing lies outside ball(r0)."""
    g, h = group._check(g), group._check(h)
    lg, lh = group._len(g), group._len(h)
    if not r > r0 >= lg + lh:
        raise ValueError(f"need r > r0 >= l(g) + l(h) = {lg + lh}, got r0={r0}, r={r}")
    support = t_coefficients(group, g, h, r, fast)
    bound = 2 * min(lg, lh)
    outside = [a for a, _ in support if group._len(a) > r0]
    return SupportCertificate(
        group.spec,
        group.format(g),
        group.format(h),
        r0,
        r,
        [(group.format(a), c) for a, c in support],
        not outside,
        all(abs(c) <= bound for _, c in support),
        max((group._len(a) for a, _ in support), default=0),
        [group.format(a) for a in outside],
    )


@dataclass
class CommutantReport:
    ok: bool
    checked: int
    counterexample: str | None = None


def commutant_check(group: Group, g: Element, h: Element, radius: int) -> CommutantReport:
    """[lambda_g, rho_h] delta_a = 0 for every a in ball(radius)."""
    op = commutator(lambda_op(group, g), rho_op(group, h))
    count = 0
    for a in group.ball(radius):
        count += 1
        if op(a) is not None:
            return CommutantReport(False, count, group.format(a))
    return CommutantReport(True, count)


# ---------------------------------------------------------------------------
# real extension


@dataclass
class RealExtension:
    model: MatrixModel
    checks: dict[str, bool]

    @property
    def ok(self) -> bool:
        return all(self.checks.values())

    def to_dict(self) -> dict:
        return {"ok": self.ok, "dim": self.model.dim, "checks": dict(self.checks)}


def real_extension(p: Preset, trivial: bool = False, radius: int | None = None) -> RealExtension:
    """Double the model M -> M (+) M and adjoin q = I (+) -I (or q = I when ``trivial``)."""
    d = p.model.dim
    ident = Matrix.identity(d)
    q = direct_sum(ident, ident if trivial else -ident)
    assign = {label: direct_sum(m, m) for label, m in p.model.assign.items()}
    doubled = MatrixModel(p.model.name + "+real", p.model.root_order, 2 * d, dict(assign, q=q), scalar_unit="q")
    checks: dict[str, bool] = {}
    checks["q_self_adjoint"] = q == q.adjoint()
    checks["q_unitary"] = is_unitary(q)
    checks["q_squared_identity"] = q @ q == Matrix.identity(2 * d)
    checks["q_commutes_with_generators"] = all(q.commutes_with(m) for m in assign.values())
    if radius is None:
        radius = p.group.diameter() if p.group.finite else 3
    grid = p.coefficient_grid(doubled)
    table = build_action(p.group, grid, radius)
    checks["q_commutes_with_action"] = all(
        q.commutes_with(m) for row in table.rows.values() for m in row.values()
    )
    checks["relations"] = check(p.presentation, doubled).ok
    return RealExtension(doubled, checks)
