"""Noncommutative *-polynomials, presentations, and exact checking against matrix models."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Iterable, Mapping, Sequence, Union

from .cyclotomic import CyclotomicScalar, Matrix, ScalarLike, format_scalar

Atom = tuple[str, bool]  # (label, starred)
Word = tuple[Atom, ...]


class EvaluationError(ValueError):
    pass


def _atom_str(atom: Atom) -> str:
    return atom[0] + ("*" if atom[1] else "")


class StarPolynomial:
    """Finite sum of scalar multiples of words in generators and their adjoints."""

    __slots__ = ("terms",)

    def __init__(self, terms: Mapping[Word, ScalarLike] | Iterable[tuple[Word, ScalarLike]] = ()):
        items = terms.items() if isinstance(terms, Mapping) else terms
        acc: dict[Word, CyclotomicScalar] = {}
        for word, c in items:
            word = tuple((str(lab), bool(st)) for lab, st in word)
            c = CyclotomicScalar.coerce(c)
            acc[word] = acc[word] + c if word in acc else c
        self.terms = {w: c for w, c in acc.items() if c}

    @classmethod
    def atom(cls, label: str, starred: bool = False) -> "StarPolynomial":
        return cls({((label, starred),): 1})

    @classmethod
    def constant(cls, c: ScalarLike) -> "StarPolynomial":
        return cls({(): c})

    @classmethod
    def lift(cls, x: Union["StarPolynomial", ScalarLike]) -> "StarPolynomial":
        return x if isinstance(x, StarPolynomial) else cls.constant(x)

    def __add__(self, other) -> "StarPolynomial":
        other = StarPolynomial.lift(other)
        return StarPolynomial(list(self.terms.items()) + list(other.terms.items()))

    __radd__ = __add__

    def __neg__(self) -> "StarPolynomial":
        return StarPolynomial({w: -c for w, c in self.terms.items()})

    def __sub__(self, other) -> "StarPolynomial":
        return self + (-StarPolynomial.lift(other))

    def __rsub__(self, other) -> "StarPolynomial":
        return StarPolynomial.lift(other) - self

    def __mul__(self, other) -> "StarPolynomial":
        other = StarPolynomial.lift(other)
        return StarPolynomial(
            [(w1 + w2, c1 * c2) for w1, c1 in self.terms.items() for w2, c2 in other.terms.items()]
        )

    def __rmul__(self, other) -> "StarPolynomial":
        return StarPolynomial.lift(other) * self

    def __pow__(self, k: int) -> "StarPolynomial":
        if k < 0:
            raise ValueError("negative powers are not supported")
        out = StarPolynomial.constant(1)
        for _ in range(k):
            out = out * self
        return out

    def adjoint(self) -> "StarPolynomial":
        return StarPolynomial(
            {tuple((lab, not st) for lab, st in reversed(w)): c.conj() for w, c in self.terms.items()}
        )

    def labels(self) -> set[str]:
        return {lab for w in self.terms for lab, _ in w}

    def is_zero(self) -> bool:
        return not self.terms

    def __eq__(self, other: object) -> bool:
        if isinstance(other, (int, CyclotomicScalar)):
            other = StarPolynomial.constant(other)
        if not isinstance(other, StarPolynomial):
            return NotImplemented
        return self.terms.keys() == other.terms.keys() and all(
            c == other.terms[w] for w, c in self.terms.items()
        )

    def __hash__(self) -> int:
        return hash(frozenset((w, hash(c)) for w, c in self.terms.items()))

    def sorted_terms(self) -> list[tuple[Word, CyclotomicScalar]]:
        return sorted(self.terms.items(), key=lambda wc: (len(wc[0]), wc[0]))

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts: list[str] = []
        for word, c in self.sorted_terms():
            body = " ".join(_atom_str(a) for a in word)
            if c.is_rational():
                q = c.to_fraction()
                sign = "-" if q < 0 else "+"
                mag = format_scalar(abs(q))
                coeff = "" if (mag == "1" and body) else mag
            else:
                sign = "+"
                coeff = f"({format_scalar(c)})"
            text = " ".join(x for x in (coeff, body) if x)
            if not parts:
                parts.append(("-" if sign == "-" else "") + text)
            else:
                parts.append(f"{sign} {text}")
        return " ".join(parts)

    def __repr__(self) -> str:
        return f"StarPolynomial({str(self)!r})"


@dataclass(frozen=True)
class Relation:
    text: str
    poly: StarPolynomial


@dataclass
class Presentation:
    generators: tuple[str, ...]
    relations: list[Relation]
    corep_grid: list[list[StarPolynomial]] | None = None
    name: str = ""

    def __post_init__(self):
        self.generators = tuple(self.generators)
        if len(set(self.generators)) != len(self.generators):
            raise ValueError("duplicate generator labels")
        known = set(self.generators)
        for rel in self.relations:
            extra = rel.poly.labels() - known
            if extra:
                raise ValueError(f"relation {rel.text!r} uses undeclared generators {sorted(extra)}")
        if self.corep_grid is not None:
            n = len(self.corep_grid)
            if n == 0 or any(len(row) != n for row in self.corep_grid):
                raise ValueError("corep grid must be square and nonempty")
            for row in self.corep_grid:
                for p in row:
                    extra = p.labels() - known
                    if extra:
                        raise ValueError(f"corep grid uses undeclared generators {sorted(extra)}")


# ---------------------------------------------------------------------------
# evaluation


def _assignment(model: Any) -> tuple[Mapping[str, Matrix], int]:
    if isinstance(model, Mapping):
        assign = model
        dims = {m.rows for m in assign.values()}
        if len(dims) > 1:
            raise EvaluationError("assigned matrices have different dimensions")
        dim = dims.pop() if dims else 1
    else:
        assign, dim = model.assign, model.dim
    for label, m in assign.items():
        if m.shape != (dim, dim):
            raise EvaluationError(f"{label} has shape {m.shape}, expected {(dim, dim)}")
    return assign, dim


class Evaluator:
    """Caches atom and word images for one model."""

    def __init__(self, model: Any):
        self.assign, self.dim = _assignment(model)
        self._cache: dict[Word, Matrix] = {(): Matrix.identity(self.dim)}

    def atom(self, atom: Atom) -> Matrix:
        key = (atom,)
        if key not in self._cache:
            label, starred = atom
            if label not in self.assign:
                raise EvaluationError(f"generator {label!r} is not assigned in the model")
            m = self.assign[label]
            self._cache[key] = m.adjoint() if starred else m
        return self._cache[key]

    def word(self, word: Word) -> Matrix:
        if word in self._cache:
            return self._cache[word]
        result = self.word(word[:-1]) @ self.atom(word[-1])
        self._cache[word] = result
        return result

    def __call__(self, p: StarPolynomial) -> Matrix:
        total = Matrix.zeros(self.dim)
        for word, c in p.sorted_terms():
            total = total + self.word(word).scale(c)
        return total


def evaluate(p: StarPolynomial, model: Any) -> Matrix:
    return Evaluator(model)(p)


def assemble_grid(grid: Sequence[Sequence[StarPolynomial]], ev: Evaluator) -> Matrix:
    return Matrix.block([[ev(p) for p in row] for row in grid])


def is_unitary(m: Matrix) -> bool:
    ident = Matrix.identity(m.rows)
    adj = m.adjoint()
    return adj @ m == ident and m @ adj == ident


@dataclass
class RelationResult:
    text: str
    ok: bool
    residual_norm: CyclotomicScalar | None = None

    def to_dict(self) -> dict:
        d: dict[str, Any] = {"relation": self.text, "ok": self.ok}
        if not self.ok:
            d["residual_norm"] = format_scalar(self.residual_norm)
        return d


@dataclass
class CheckReport:
    relations: list[RelationResult]
    corep_unitary: bool | None = None
    extra: dict[str, Any] = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return all(r.ok for r in self.relations) and self.corep_unitary is not False

    @property
    def failures(self) -> list[RelationResult]:
        return [r for r in self.relations if not r.ok]

    def to_dict(self) -> dict:
        d: dict[str, Any] = {
            "ok": self.ok,
            "relations": [r.to_dict() for r in self.relations],
        }
        if self.corep_unitary is not None:
            d["corep_unitary"] = self.corep_unitary
        d.update(self.extra)
        return d


def check(pres: Presentation, model: Any) -> CheckReport:
    """Exact zero test for every relation, plus unitarity of the corep grid if present."""
    ev = Evaluator(model)
    results = []
    for rel in pres.relations:
        value = ev(rel.poly)
        if value.is_zero():
            results.append(RelationResult(rel.text, True))
        else:
            results.append(RelationResult(rel.text, False, value.norm_squared()))
    unitary = None
    if pres.corep_grid is not None:
        unitary = is_unitary(assemble_grid(pres.corep_grid, ev))
    return CheckReport(results, unitary)


def coproduct_images(pres: Presentation, model: Any) -> dict[str, Matrix]:
    """Images u_ij -> sum_k u_ik (x) u_kj for generators sitting alone in a grid cell."""
    if pres.corep_grid is None:
        raise ValueError("presentation has no corep grid")
    ev = Evaluator(model)
    grid = pres.corep_grid
    n = len(grid)
    images: dict[str, Matrix] = {}
    for i in range(n):
        for j in range(n):
            terms = grid[i][j].terms
            if len(terms) != 1:
                continue
            (word, c), = terms.items()
            if len(word) == 1 and not word[0][1] and c == 1 and word[0][0] not in images:
                total = None
                for k in range(n):
                    t = ev(grid[i][k]).kron(ev(grid[k][j]))
                    total = t if total is None else total + t
                images[word[0][0]] = total
    return images


def coproduct_check(pres: Presentation, model: Any) -> CheckReport:
    """Re-check the relations under the coproduct-induced assignment on the doubled tensor space.

    Also checks that every grid cell, not only the generator cells, maps to
    sum_k u_ik (x) u_kj under that assignment.
    """
    images = coproduct_images(pres, model)
    missing = [g for g in pres.generators if g not in images]
    if missing:
        raise ValueError(f"generators {missing} do not appear alone in the corep grid")
    report = check(pres, images)
    ev = Evaluator(model)
    ev2 = Evaluator(images)
    grid = pres.corep_grid
    n = len(grid)
    bad = None
    for i in range(n):
        for j in range(n):
            expected = None
            for k in range(n):
                t = ev(grid[i][k]).kron(ev(grid[k][j]))
                expected = t if expected is None else expected + t
            diff = ev2(grid[i][j]) - expected
            if bad is None and not diff.is_zero():
                bad = (i, j, diff.norm_squared())
    report.extra["grid_consistent"] = bad is None
    if bad:
        i, j, norm = bad
        report.relations.append(RelationResult(f"coproduct of corep cell ({i},{j})", False, norm))
    return report
