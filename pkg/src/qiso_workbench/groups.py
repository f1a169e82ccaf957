"""Finitely generated groups with a symmetric generating set and word length.

Group elements are plain hashable values in normal form:

* cyclic groups: the residue ``k`` in ``range(n)``
* free groups: a reduced tuple of nonzero ints, ``i+1`` for generator ``t_i``
  and ``-(i+1)`` for its inverse
* free abelian groups: the exponent tuple
* finite table groups: the element index

Generators are addressed by their position in the declared generating set;
a *formal word* is a tuple of such positions.
"""
from __future__ import annotations

import itertools
import os
import re
from collections import deque
from typing import Hashable, Iterator, Sequence

Element = Hashable
FormalWord = tuple[int, ...]

DEFAULT_BALL_CAP = 12
CAP_ENV = "QISO_BALL_CAP"


class GroupError(ValueError):
    pass


class CapExceededError(GroupError):
    pass


def ball_cap() -> int:
    raw = os.environ.get(CAP_ENV)
    if raw is None:
        return DEFAULT_BALL_CAP
    try:
        cap = int(raw)
    except ValueError:
        raise GroupError(f"{CAP_ENV} must be an integer, got {raw!r}") from None
    if cap < 0:
        raise GroupError(f"{CAP_ENV} must be nonnegative")
    return cap


class Group:
    """Base class.  Subclasses implement ``_mul``, ``_inv``, ``_len``, ``contains``."""

    spec: str
    generators: tuple[Element, ...]
    labels: tuple[str, ...]
    finite: bool = False

    def __init__(self, cap: int | None = None):
        self._cap = cap
        self._spheres: list[list[Element]] = []

    # -- subclass hooks -----------------------------------------------
    def _mul(self, g: Element, h: Element) -> Element:
        raise NotImplementedError

    def _inv(self, g: Element) -> Element:
        raise NotImplementedError

    def _len(self, g: Element) -> int:
        raise NotImplementedError

    def contains(self, g: object) -> bool:
        raise NotImplementedError

    def identity(self) -> Element:
        raise NotImplementedError

    def format(self, g: Element) -> str:
        raise NotImplementedError

    # -- public API ---------------------------------------------------
    @property
    def cap(self) -> int:
        return ball_cap() if self._cap is None else self._cap

    def _check(self, g: object) -> Element:
        if not self.contains(g):
            raise GroupError(f"{g!r} is not an element of {self.spec}")
        return g

    def multiply(self, g: Element, h: Element) -> Element:
        return self._mul(self._check(g), self._check(h))

    def inverse(self, g: Element) -> Element:
        return self._inv(self._check(g))

    def length(self, g: Element) -> int:
        return self._len(self._check(g))

    def generator(self, label: str) -> Element:
        try:
            return self.generators[self.labels.index(label)]
        except ValueError:
            raise GroupError(f"{self.spec} has no generator {label!r}") from None

    def generator_inverse_index(self, i: int) -> int:
        return self.generators.index(self._inv(self.generators[i]))

    def _check_radius(self, n: int) -> None:
        if n < 0:
            raise GroupError("radius must be nonnegative")
        if not self.finite and n > self.cap:
            raise CapExceededError(
                f"radius {n} exceeds the ball cap {self.cap} for {self.spec} (set {CAP_ENV} to raise it)"
            )

    def sphere(self, n: int) -> list[Element]:
        """Elements of length exactly ``n`` in length-lex order of their first geodesic word."""
        self._check_radius(n)
        if not self._spheres:
            self._spheres.append([self.identity()])
        while len(self._spheres) <= n:
            seen = set(self._spheres[-1])
            if len(self._spheres) > 1:
                seen.update(self._spheres[-2])
            nxt = []
            for w in self._spheres[-1]:
                for s in self.generators:
                    g = self._mul(w, s)
                    if g not in seen:
                        seen.add(g)
                        nxt.append(g)
            self._spheres.append(nxt)
        return list(self._spheres[n])

    def ball(self, n: int) -> list[Element]:
        out: list[Element] = []
        for k in range(n + 1):
            out.extend(self.sphere(k))
        return out

    def formal_words(self, n: int) -> Iterator[FormalWord]:
        self._check_radius(n)
        return itertools.product(range(len(self.generators)), repeat=n)

    def reduce(self, word: Sequence[int]) -> Element:
        g = self.identity()
        for i in word:
            if not 0 <= i < len(self.generators):
                raise GroupError(f"generator index {i} out of range for {self.spec}")
            g = self._mul(g, self.generators[i])
        return g

    def word_of(self, g: Element) -> FormalWord:
        """Length-lex smallest geodesic word for ``g``."""
        g = self._check(g)
        for w, word in self._geodesics(self._len(g)):
            if w == g:
                return word
        raise GroupError(f"no geodesic found for {self.format(g)}")  # unreachable for valid lengths

    def _geodesics(self, n: int) -> Iterator[tuple[Element, FormalWord]]:
        seen: dict[Element, FormalWord] = {self.identity(): ()}
        layer = [(self.identity(), ())]
        yield layer[0]
        for _ in range(n):
            nxt = []
            for w, word in layer:
                for i, s in enumerate(self.generators):
                    g = self._mul(w, s)
                    if g not in seen:
                        seen[g] = word + (i,)
                        nxt.append((g, seen[g]))
            layer = nxt
            yield from layer

    def diameter(self) -> int | None:
        if not self.finite:
            return None
        n = 0
        while self.sphere(n + 1):
            n += 1
        return n

    def elements(self) -> list[Element]:
        if not self.finite:
            raise GroupError(f"{self.spec} is infinite")
        return self.ball(self.diameter())

    @property
    def size(self) -> int | None:
        return len(self.elements()) if self.finite else None

    def parse(self, text: str) -> Element:
        """Parse an element: ``e``/``1`` for the identity or a word in generator labels."""
        text = text.strip()
        if text in ("e", "1", ""):
            return self.identity()
        g = self.identity()
        for label, power in _word_tokens(text, self.labels):
            s = self.generator(label)
            if power < 0:
                s, power = self._inv(s), -power
            for _ in range(power):
                g = self._mul(g, s)
        return g

    def __repr__(self) -> str:
        return f"<{type(self).__name__} {self.spec}>"


def _word_tokens(text: str, labels: Sequence[str]) -> list[tuple[str, int]]:
    by_len = sorted(labels, key=len, reverse=True)
    out = []
    pos = 0
    while pos < len(text):
        if text[pos] in " .*\t":
            pos += 1
            continue
        for lab in by_len:
            if text.startswith(lab, pos):
                pos += len(lab)
                m = re.compile(r"\^(-?\d+)").match(text, pos)
                power = 1
                if m:
                    power = int(m.group(1))
                    pos = m.end()
                out.append((lab, power))
                break
        else:
            raise GroupError(f"cannot parse group word {text!r} at position {pos}")
    return out


# ---------------------------------------------------------------------------


class CyclicGroup(Group):
    finite = True

    def __init__(self, n: int, generators: Sequence[int] | None = None, spec: str | None = None):
        super().__init__()
        if n < 2:
            raise GroupError("cyclic group order must be at least 2")
        self.n = n
        if generators is None:
            generators = [1] if n == 2 else [1, n - 1]
        gens = tuple(g % n for g in generators)
        if 0 in gens:
            raise GroupError("generating set must exclude the identity")
        if len(set(gens)) != len(gens):
            raise GroupError("duplicate generators")
        if any((-g) % n not in gens for g in gens):
            raise GroupError("generating set must be symmetric")
        self.generators = gens
        self.labels = tuple(str(g) for g in gens)
        self.spec = spec or f"cyclic:{n}"
        self._standard = set(gens) == {1, n - 1}
        self._dist: dict[int, int] | None = None

    def identity(self) -> int:
        return 0

    def contains(self, g: object) -> bool:
        return isinstance(g, int) and not isinstance(g, bool) and 0 <= g < self.n

    def _mul(self, g: int, h: int) -> int:
        return (g + h) % self.n

    def _inv(self, g: int) -> int:
        return (-g) % self.n

    def _len(self, g: int) -> int:
        if self._standard:
            return min(g, self.n - g)
        if self._dist is None:
            self._dist = _bfs_distances(self)
        return self._dist[g]

    def format(self, g: int) -> str:
        return str(g)

    def parse(self, text: str) -> int:
        text = text.strip()
        if text == "e":
            return 0
        try:
            return int(text) % self.n
        except ValueError:
            raise GroupError(f"cannot parse {text!r} as an element of {self.spec}") from None


def _bfs_distances(group: Group) -> dict:
    dist = {group.identity(): 0}
    queue = deque([group.identity()])
    while queue:
        g = queue.popleft()
        for s in group.generators:
            h = group._mul(g, s)
            if h not in dist:
                dist[h] = dist[g] + 1
                queue.append(h)
    return dist


_LETTERS = "abcdefghijklmnopqrstuvwxyz"


def _letter_labels(rank: int) -> tuple[str, ...]:
    if rank > len(_LETTERS):
        raise GroupError(f"rank at most {len(_LETTERS)} is supported")
    out = []
    for i in range(rank):
        out += [_LETTERS[i], _LETTERS[i].upper()]
    return tuple(out)


class FreeGroup(Group):
    def __init__(self, rank: int, cap: int | None = None):
        super().__init__(cap)
        if rank < 1:
            raise GroupError("rank must be positive")
        self.rank = rank
        self.spec = f"free:{rank}"
        self.generators = tuple((s * (i + 1),) for i in range(rank) for s in (1, -1))
        self.labels = _letter_labels(rank)

    def identity(self) -> tuple:
        return ()

    def contains(self, g: object) -> bool:
        if not isinstance(g, tuple):
            return False
        for i, x in enumerate(g):
            if not isinstance(x, int) or x == 0 or abs(x) > self.rank:
                return False
            if i and g[i - 1] == -x:
                return False
        return True

    def _mul(self, g: tuple, h: tuple) -> tuple:
        k = 0
        m = min(len(g), len(h))
        while k < m and g[-1 - k] == -h[k]:
            k += 1
        return g[: len(g) - k] + h[k:]

    def _inv(self, g: tuple) -> tuple:
        return tuple(-x for x in reversed(g))

    def _len(self, g: tuple) -> int:
        return len(g)

    def format(self, g: tuple) -> str:
        if not g:
            return "e"
        return "".join(_LETTERS[x - 1] if x > 0 else _LETTERS[-x - 1].upper() for x in g)

    def sphere(self, n: int) -> list[tuple]:
        # reduced words of length n in length-lex order, generated directly
        self._check_radius(n)
        if n == 0:
            return [()]
        order = [x[0] for x in self.generators]
        out: list[tuple] = [()]
        for _ in range(n):
            out = [w + (x,) for w in out for x in order if not w or w[-1] != -x]
        return out

    def word_of(self, g: tuple) -> FormalWord:
        g = self._check(g)
        order = [x[0] for x in self.generators]
        return tuple(order.index(x) for x in g)


class FreeAbelianGroup(Group):
    def __init__(self, rank: int, cap: int | None = None):
        super().__init__(cap)
        if rank < 1:
            raise GroupError("rank must be positive")
        self.rank = rank
        self.spec = f"freeabelian:{rank}"
        self.generators = tuple(
            tuple(s if j == i else 0 for j in range(rank)) for i in range(rank) for s in (1, -1)
        )
        self.labels = _letter_labels(rank)

    def identity(self) -> tuple:
        return (0,) * self.rank

    def contains(self, g: object) -> bool:
        return (
            isinstance(g, tuple)
            and len(g) == self.rank
            and all(isinstance(x, int) and not isinstance(x, bool) for x in g)
        )

    def _mul(self, g: tuple, h: tuple) -> tuple:
        return tuple(x + y for x, y in zip(g, h))

    def _inv(self, g: tuple) -> tuple:
        return tuple(-x for x in g)

    def _len(self, g: tuple) -> int:
        return sum(abs(x) for x in g)

    def format(self, g: tuple) -> str:
        if not any(g):
            return "e"
        return "".join((_LETTERS[i] if x > 0 else _LETTERS[i].upper()) * abs(x) for i, x in enumerate(g))

    def parse(self, text: str) -> tuple:
        text = text.strip()
        m = re.fullmatch(r"\(\s*(-?\d+(?:\s*,\s*-?\d+)*)\s*\)", text)
        if m:
            vec = tuple(int(x) for x in m.group(1).split(","))
            return self._check(vec)
        return super().parse(text)


class FiniteGroup(Group):
    """A finite group given by names and a multiplication table on indices."""

    finite = True

    def __init__(
        self,
        names: Sequence[str],
        table: Sequence[Sequence[int]],
        generators: Sequence[int],
        labels: Sequence[str],
        spec: str,
    ):
        super().__init__()
        n = len(names)
        if len(table) != n or any(len(row) != n for row in table):
            raise GroupError("multiplication table must be square of size len(names)")
        self.names = tuple(names)
        self.table = tuple(tuple(row) for row in table)
        self.spec = spec
        self._validate_table()
        self.generators = tuple(generators)
        self.labels = tuple(labels)
        if len(self.labels) != len(self.generators):
            raise GroupError("one label per generator required")
        if self._e in self.generators:
            raise GroupError("generating set must exclude the identity")
        if any(self._inv(g) not in self.generators for g in self.generators):
            raise GroupError("generating set must be symmetric")
        self._dist = _bfs_distances(self)
        if len(self._dist) != n:
            raise GroupError("generating set does not generate the group")

    def _validate_table(self) -> None:
        n = len(self.names)
        t = self.table
        ids = [e for e in range(n) if all(t[e][g] == g and t[g][e] == g for g in range(n))]
        if len(ids) != 1:
            raise GroupError("table has no two-sided identity")
        self._e = ids[0]
        self._inverse = []
        for g in range(n):
            inv = [h for h in range(n) if t[g][h] == self._e and t[h][g] == self._e]
            if len(inv) != 1:
                raise GroupError(f"element {self.names[g]} has no inverse")
            self._inverse.append(inv[0])
        for a in range(n):
            for b in range(n):
                ab = t[a][b]
                for c in range(n):
                    if t[ab][c] != t[a][t[b][c]]:
                        raise GroupError("table is not associative")

    def identity(self) -> int:
        return self._e

    def contains(self, g: object) -> bool:
        return isinstance(g, int) and not isinstance(g, bool) and 0 <= g < len(self.names)

    def _mul(self, g: int, h: int) -> int:
        return self.table[g][h]

    def _inv(self, g: int) -> int:
        return self._inverse[g]

    def _len(self, g: int) -> int:
        return self._dist[g]

    def format(self, g: int) -> str:
        return self.names[g]

    def parse(self, text: str) -> int:
        key = " ".join(text.split())
        if key in self.names:
            return self.names.index(key)
        compact = key.replace(" ", "")
        for i, name in enumerate(self.names):
            if name.replace(" ", "") == compact:
                return i
        return super().parse(text)


# ---------------------------------------------------------------------------
# S3 as permutations of {1,2,3}, composed right to left: (g h)(x) = g(h(x))


def _cycle_name(perm: tuple[int, ...]) -> str:
    seen = set()
    cycles = []
    for start in range(1, len(perm) + 1):
        if start in seen or perm[start - 1] == start:
            continue
        cyc = [start]
        seen.add(start)
        x = perm[start - 1]
        while x != start:
            cyc.append(x)
            seen.add(x)
            x = perm[x - 1]
        cycles.append("(" + " ".join(map(str, cyc)) + ")")
    return "".join(cycles) or "e"


def symmetric_group(degree: int = 3) -> tuple[list[tuple[int, ...]], list[str], list[list[int]]]:
    perms = sorted(itertools.permutations(range(1, degree + 1)))
    index = {p: i for i, p in enumerate(perms)}
    table = [[index[tuple(g[h[x] - 1] for x in range(degree))] for h in perms] for g in perms]
    return perms, [_cycle_name(p) for p in perms], table


def s3_group(kind: str) -> FiniteGroup:
    perms, names, table = symmetric_group(3)
    idx = {p: i for i, p in enumerate(perms)}
    if kind == "transpositions":
        s, t = idx[(2, 1, 3)], idx[(1, 3, 2)]
        return FiniteGroup(names, table, [s, t], ["s", "t"], "s3:transpositions")
    if kind == "dihedral":
        s, t = idx[(2, 1, 3)], idx[(2, 3, 1)]
        return FiniteGroup(names, table, [s, t, table[t][t]], ["s", "t", "T"], "s3:dihedral")
    raise GroupError(f"unknown S3 generating set {kind!r}")


def parse_group_spec(spec: str, cap: int | None = None) -> Group:
    parts = spec.strip().split(":")
    try:
        family = parts[0]
        if family == "cyclic" and len(parts) == 2:
            return CyclicGroup(int(parts[1]))
        if family == "cyclic" and len(parts) == 3 and parts[2] == "large":
            if parts[1] != "4":
                raise GroupError("the large generating set is defined for cyclic:4 only")
            return CyclicGroup(4, [1, 2, 3], spec="cyclic:4:large")
        if family == "free" and len(parts) == 2:
            return FreeGroup(int(parts[1]), cap)
        if family == "freeabelian" and len(parts) == 2:
            return FreeAbelianGroup(int(parts[1]), cap)
        if family == "s3" and len(parts) == 2:
            return s3_group(parts[1])
    except ValueError as exc:
        if isinstance(exc, GroupError):
            raise
        raise GroupError(f"malformed group spec {spec!r}") from None
    raise GroupError(f"unknown group spec {spec!r}")
