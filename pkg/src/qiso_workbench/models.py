"""Matrix models of the quantum isometry groups, the induced action on the group algebra, and its checks.

Coefficient grids are keyed ``(x, z)`` by generator labels with the source
first: ``q[x, z]`` is the coefficient of ``lambda_z`` in ``alpha(lambda_x)``.
An action table row ``rows[w]`` maps ``gamma'`` to the coefficient of
``lambda_{gamma'}`` in ``alpha(lambda_w)``; zero coefficients are omitted.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Callable, Mapping

from .cyclotomic import CyclotomicScalar, Matrix, ShapeError, format_scalar, sqrt2, zeta
from .dsl import parse_polynomial, presentation
from .groups import CyclicGroup, Element, FreeGroup, Group, GroupError, parse_group_spec
from .relations import CheckReport, Evaluator, Presentation, check, coproduct_check, coproduct_images, is_unitary


class PresetError(ValueError):
    pass


@dataclass
class MatrixModel:
    name: str
    root_order: int
    dim: int
    assign: dict[str, Matrix]
    scalar_unit: str | None = None

    def __post_init__(self):
        for label, m in self.assign.items():
            if m.shape != (self.dim, self.dim):
                raise ShapeError(f"{label} has shape {m.shape}, model dimension is {self.dim}")
            if self.root_order % m.order:
                raise ValueError(f"{label} has entries outside Q(zeta_{self.root_order})")

    def __getitem__(self, label: str) -> Matrix:
        return self.assign[label]


def regular_representation(group: Group) -> dict[Element, Matrix]:
    """lambda_g delta_h = delta_{gh}, indexed by the group's enumeration order."""
    if not group.finite:
        raise GroupError(f"{group.spec} is infinite")
    elems = group.elements()
    index = {g: i for i, g in enumerate(elems)}
    return {g: Matrix.permutation([index[group._mul(g, h)] for h in elems]) for g in elems}


def direct_sum(a: Matrix, b: Matrix) -> Matrix:
    return Matrix.block_diag(a, b)


# ---------------------------------------------------------------------------
# presets


@dataclass
class Preset:
    name: str
    group: Group
    presentation: Presentation
    model: MatrixModel
    grid: dict[tuple[str, str], str]
    delta: dict[str, list[tuple[str, str]]] = field(default_factory=dict)
    closed_form: bool = False
    free_magic: bool = False
    witness: str | None = None  # polynomial that must evaluate to a nonzero matrix
    notes: list[str] = field(default_factory=list)

    def coefficient_grid(self, model: MatrixModel | None = None) -> dict[tuple[str, str], Matrix]:
        ev = Evaluator(model or self.model)
        gens = self.presentation.generators
        return {k: ev(parse_polynomial(v, gens)) for k, v in self.grid.items()}

    def check(self) -> CheckReport:
        return check(self.presentation, self.model)

    def action(self, radius: int | None = None) -> "ActionTable":
        if radius is None:
            radius = self.group.diameter() if self.group.finite else 3
        return build_action(self.group, self.coefficient_grid(), radius)


def _grid_2x2(group: Group, a: str, b: str) -> dict[tuple[str, str], str]:
    x, y = group.labels
    return {(x, x): a, (x, y): b, (y, x): f"{b}*", (y, y): f"{a}*"}


def _zn_relations(n: int) -> list[str]:
    rels = [
        "A A* = A* A",
        "B B* = B* B",
        "A A* + B B* = 1",
        "A* A + B* B = 1",
        "A B + B A = 0",
        "A* B + B A* = 0",
        f"A^{n - 1} = A*",
        f"B^{n - 1} = B*",
        "A B = 0",
        "B A = 0",
        "A B* = 0",
        "B A* = 0",
        f"A^{n} + B^{n} = 1",
    ]
    if n > 4:
        rels += ["A^2 B = 0", "B^2 A = 0"]
    return rels


Z4_RELATIONS = [
    "A A* = A* A",
    "B B* = B* B",
    "A B + B A = 0",
    "A B* + B A* = 0",
    "A* B + B A* = 0",
    "A^2 + B^2 = A*^2 + B*^2",
    "A^2 B + B^3 = B*",
    "B^2 A + A^3 = A*",
    "A^4 + B^4 + 2 A^2 B^2 = 1",
    "A A* + B B* = 1",
]

CYCLIC_COREP = [["A", "B"], ["B*", "A*"]]


def _block_shift_model(name: str, n: int) -> MatrixModel:
    group = CyclicGroup(n)
    lam = regular_representation(group)[1]
    zero = Matrix.zeros(n)
    return MatrixModel(name, 1, 2 * n, {"A": direct_sum(lam, zero), "B": direct_sum(zero, lam)})


def preset_zn(n: int) -> Preset:
    if n < 3:
        raise PresetError("zn needs n >= 3")
    if n == 4:
        raise PresetError("n = 4 has its own presets: z4_commutative and z4_pauli")
    group = CyclicGroup(n)
    pres = presentation(["A", "B"], _zn_relations(n), CYCLIC_COREP, name=f"zn:{n}")
    return Preset(f"zn:{n}", group, pres, _block_shift_model(f"zn:{n}", n), _grid_2x2(group, "A", "B"), closed_form=True)


def preset_z4_commutative() -> Preset:
    group = CyclicGroup(4)
    pres = presentation(["A", "B"], Z4_RELATIONS, CYCLIC_COREP, name="z4")
    model = _block_shift_model("z4_commutative", 4)
    return Preset("z4_commutative", group, pres, model, _grid_2x2(group, "A", "B"), closed_form=True)


def preset_z4_pauli() -> Preset:
    group = CyclicGroup(4)
    pres = presentation(["A", "B"], Z4_RELATIONS, CYCLIC_COREP, name="z4")
    i = zeta(4)
    half_root2 = sqrt2() / 2
    sigma1 = Matrix.from_rows([[0, 1], [1, 0]])
    sigma2 = Matrix.from_rows([[0, -i], [i, 0]])
    model = MatrixModel("z4_pauli", 8, 2, {"A": sigma1.scale(half_root2), "B": sigma2.scale(half_root2)})
    return Preset(
        "z4_pauli", group, pres, model, _grid_2x2(group, "A", "B"),
        witness="A B - B A",
        notes=["A = sigma_1/sqrt2 and B = sigma_2/sqrt2 anticommute but do not commute"],
    )


def preset_z_torus(m: int, k: int, p: int = 1) -> Preset:
    if p not in (0, 1):
        raise PresetError("z_torus projection parameter must be 0 or 1")
    group = FreeGroup(1)
    u = zeta(m, k)
    model = MatrixModel(
        f"z_torus:{m}:{k}:{p}", m, 1,
        {"A": Matrix.scalar(u * p), "B": Matrix.scalar(u * (1 - p))},
    )
    rels = ["A A* = A* A", "B B* = B* B", "A B = 0", "B A = 0", "A* A + B* B = 1"]
    pres = presentation(["A", "B"], rels, CYCLIC_COREP, name="z")
    return Preset(model.name, group, pres, model, _grid_2x2(group, "A", "B"))


S3_TRANSPOSITION_RELATIONS = [
    "A^2 + B^2 = 1",
    "A B = 0",
    "B A = 0",
    "C^2 + D^2 = 1",
    "C D = 0",
    "D C = 0",
    "A C + B D = 0",
    "C A + D B = 0",
    "D A C = C B D = 0",
    "A D B = B C A = 0",
    "D A D + C B C = A D A + B C B",
    "A* = A",
    "B* = B",
    "C* = C",
    "D* = D",
    "D A D = A D A",
    "B C B = C B C",
]


def _s3_lambda(group: Group) -> dict[str, Matrix]:
    lam = regular_representation(group)
    return {label: lam[g] for label, g in zip(group.labels, group.generators)}


def preset_s3_transpositions() -> Preset:
    group = parse_group_spec("s3:transpositions")
    lam = _s3_lambda(group)
    zero = Matrix.zeros(6)
    model = MatrixModel(
        "s3_transpositions", 1, 12,
        {
            "A": direct_sum(lam["s"], zero),
            "B": direct_sum(zero, lam["t"]),
            "C": direct_sum(zero, lam["s"]),
            "D": direct_sum(lam["t"], zero),
        },
    )
    pres = presentation("ABCD", S3_TRANSPOSITION_RELATIONS, [["A", "B"], ["C", "D"]], name="s3_transpositions")
    grid = {("s", "s"): "A", ("s", "t"): "B", ("t", "s"): "C", ("t", "t"): "D"}
    delta = {
        "A": [("A", "A"), ("B", "C")],
        "D": [("D", "D"), ("C", "B")],
        "C": [("C", "A"), ("D", "C")],
        "B": [("B", "D"), ("A", "B")],
    }
    return Preset("s3_transpositions", group, pres, model, grid, delta)


S3_DIHEDRAL_RELATIONS = [
    "E E* + F F* = 1",
    "E F + F E = 0",
    "F* F + E* E = 1",
    "E* E + F F* = 1",
    "E* F + F E* = 0",
    "F* E + E F* = 0",
    "F* F + E E* = 1",
    "E^2 F = 0",
    "F^2 E = 0",
    "E^3 + F^3 = 1",
    "E L = L E^2",
    "F L = L F^2",
    "L = L*",
    "E^2 = E*",
    "F^2 = F*",
    "L* L = L L* = 1",
    "L^2 = 1",
]

# the relations satisfied by all six coefficients before G, H, K are shown to vanish
S3_DIHEDRAL_LEMMA_RELATIONS = [
    "H K + K H + L^2 = 1",
    "H^2 = 0",
    "K^2 = 0",
    "H L + L K = 0",
    "K L + L H = 0",
    "E F + F E + G^2 = 0",
    "F G + G E = 0",
    "E G + G F = 0",
    "E^2 F + (E G + G F) G = 0",
    "E^2 G + (E G + G F) F = 0",
    "F^2 E + (F G + G E) G = 0",
    "F^2 G + (F G + G E) E = 0",
    "(F G + G E) F + (E G + G F) E = 0",
    "E^3 + F^3 = 1",
    "E K + F H + G L = H E^2 + K F^2 = 0",
    "F K = K E^2 + L (F G + G E) = 0",
    "H (F G + G E) + K (E G + G F) = 0",
    "E H = H F^2 + L (E G + G F)",
    "E L + G K = K (F G + G E) + L E^2",
    "F L + G H = H (E G + G F) + L F^2",
    "H F + K E + L G = 0",
    "K F = 0",
    "H = K*",
    "L = L*",
    "E^2 = E*",
    "F^2 = F*",
    "G* = 0",
]


def preset_s3_dihedral() -> Preset:
    group = parse_group_spec("s3:dihedral")
    lam = _s3_lambda(group)
    zero = Matrix.zeros(6)
    z12 = Matrix.zeros(12)
    model = MatrixModel(
        "s3_dihedral", 1, 12,
        {
            "E": direct_sum(lam["t"], zero),
            "F": direct_sum(zero, lam["t"]),
            "L": direct_sum(lam["s"], lam["s"]),
            "G": z12,
            "H": z12,
            "K": z12,
        },
    )
    pres = presentation(
        "EFL", S3_DIHEDRAL_RELATIONS, [["E", "F", "0"], ["F^2", "E^2", "0"], ["0", "0", "L"]], name="s3_dihedral"
    )
    grid = {
        ("t", "t"): "E", ("t", "T"): "F", ("t", "s"): "0",
        ("T", "t"): "F*", ("T", "T"): "E*", ("T", "s"): "0",
        ("s", "t"): "0", ("s", "T"): "0", ("s", "s"): "L",
    }
    delta = {
        "E": [("E", "E"), ("F", "F^2")],
        "F": [("E", "F"), ("F", "E^2")],
        "L": [("L", "L")],
    }
    return Preset(
        "s3_dihedral", group, pres, model, grid, delta,
        notes=["G = H = K = 0 in this model; their lemma relations are checked by dihedral_lemma_presentation"],
    )


def dihedral_lemma_presentation() -> Presentation:
    return presentation("EFGHKL", S3_DIHEDRAL_LEMMA_RELATIONS, name="s3_dihedral_lemmas")


F2_LABELS = "ABCDEFGH"
F2_COREP = [
    ["A", "B", "C", "D"],
    ["B*", "A*", "D*", "C*"],
    ["E", "F", "G", "H"],
    ["F*", "E*", "H*", "G*"],
]


def _f2_relations() -> list[str]:
    rels = [f"{x} {x}* {x} = {x}" for x in F2_LABELS]
    P = {x: f"{x} {x}*" for x in F2_LABELS}
    Q = {x: f"{x}* {x}" for x in F2_LABELS}
    rels += [
        f"{P['A']} + {P['B']} + {P['C']} + {P['D']} = 1",
        f"{Q['A']} + {Q['B']} + {Q['C']} + {Q['D']} = 1",
        f"{P['E']} + {P['F']} + {P['G']} + {P['H']} = 1",
        f"{Q['E']} + {Q['F']} + {Q['G']} + {Q['H']} = 1",
        f"{Q['A']} + {P['B']} + {Q['E']} + {P['F']} = 1",
        f"{Q['B']} + {P['A']} + {Q['F']} + {P['E']} = 1",
        f"{Q['C']} + {P['D']} + {Q['G']} + {P['H']} = 1",
        f"{Q['D']} + {P['C']} + {Q['H']} + {P['G']} = 1",
    ]
    for block in ("ABCD", "EFGH"):
        pairs = [(block[i], block[j]) for i in range(4) for j in range(i + 1, 4)]
        rels += [f"{x} {y}* = 0" for x, y in pairs]
        rels += [f"{x}* {y} = 0" for x, y in pairs]
    return rels


def f2_presentation() -> Presentation:
    return presentation(F2_LABELS, _f2_relations(), F2_COREP, name="f2")


def _f2_grid(group: Group) -> dict[tuple[str, str], str]:
    labels = group.labels[:4]
    return {(labels[i], labels[j]): F2_COREP[i][j] for i in range(4) for j in range(4)}


F2_SIGMA_ALIASES = {"swap": "ba", "invert": "Ab", "identity": "ab"}


def preset_f2_classical(sigma: str = "swap") -> Preset:
    """sigma gives the images of a and b as two letters, e.g. ``ba`` (swap) or ``Ab`` (invert a)."""
    images = F2_SIGMA_ALIASES.get(sigma, sigma)
    if len(images) != 2 or any(c not in "aAbB" for c in images) or images[0].lower() == images[1].lower():
        raise PresetError(f"f2_classical needs a signed permutation of a, b such as 'ba' or 'Ab', got {sigma!r}")
    group = FreeGroup(2)
    inv = {"a": "A", "A": "a", "b": "B", "B": "b"}
    sig = {"a": images[0], "b": images[1], "A": inv[images[0]], "B": inv[images[1]]}
    labels = group.labels
    values = {}
    for i, x in enumerate(labels):
        for j, z in enumerate(labels):
            entry = F2_COREP[i][j]
            if not entry.endswith("*"):
                values[entry] = 1 if sig[x] == z else 0
    model = MatrixModel(
        f"f2_classical:{sigma}", 1, 1, {x: Matrix.scalar(values[x]) for x in F2_LABELS}
    )
    return Preset(
        model.name, group, f2_presentation(), model, _f2_grid(group), free_magic=True,
        notes=["commutative model: the action is alpha(lambda_w) = lambda_sigma(w) (x) 1"],
    )


def preset_f2_torus(m: int, j: int, k: int) -> Preset:
    group = FreeGroup(2)
    values = {x: CyclotomicScalar.rational(0, m) for x in F2_LABELS}
    values["A"] = zeta(m, j)
    values["G"] = zeta(m, k)
    model = MatrixModel(f"f2_torus:{m}:{j}:{k}", m, 1, {x: Matrix.scalar(v) for x, v in values.items()})
    return Preset(
        model.name, group, f2_presentation(), model, _f2_grid(group), free_magic=True,
        notes=["commutative torus model: alpha(lambda_a) = lambda_a (x) z^j, alpha(lambda_b) = lambda_b (x) z^k"],
    )


PRESETS: dict[str, tuple[Callable[..., Preset], tuple[str, ...], str]] = {
    "zn": (preset_zn, ("n",), "C*(Z_n) (+) C*(Z_n) model for n >= 3, n != 4"),
    "z4_commutative": (preset_z4_commutative, (), "commutative block model for Z_4"),
    "z4_pauli": (preset_z4_pauli, (), "noncommutative 2x2 model A = sigma_1/sqrt2, B = sigma_2/sqrt2"),
    "z_torus": (preset_z_torus, ("M", "k", "p=1"), "scalar model on Z: U = z(M,k), P = p"),
    "s3_transpositions": (preset_s3_transpositions, (), "S_3 with S = {(1 2), (2 3)}"),
    "s3_dihedral": (preset_s3_dihedral, (), "S_3 with S = {(1 2), (1 2 3), (1 3 2)}"),
    "f2_classical": (preset_f2_classical, ("sigma=swap",), "F_2 classical model; sigma in swap, invert, identity or two letters like 'Ab'"),
    "f2_torus": (preset_f2_torus, ("M", "j", "k"), "F_2 torus model A = z(M,j), G = z(M,k)"),
}


def preset(name: str, *params: Any) -> Preset:
    """Build a preset by name; parameters may also be given as ``name:p1:p2``."""
    if ":" in name and not params:
        name, *params = name.split(":")
    if name not in PRESETS:
        raise PresetError(f"unknown preset {name!r}; known: {', '.join(PRESETS)}")
    factory, signature, _ = PRESETS[name]
    required = [s for s in signature if "=" not in s]
    if not len(required) <= len(params) <= len(signature):
        raise PresetError(f"preset {name} takes parameters ({', '.join(signature)})")
    args: list[Any] = []
    for spec, value in zip(signature, params):
        if spec.startswith("sigma"):
            args.append(str(value))
        else:
            try:
                args.append(int(value))
            except (TypeError, ValueError):
                raise PresetError(f"parameter {spec} of {name} must be an integer, got {value!r}") from None
    try:
        return factory(*args)
    except (ValueError, ShapeError) as exc:
        if isinstance(exc, PresetError):
            raise
        raise PresetError(str(exc)) from None


# ---------------------------------------------------------------------------
# actions

Row = dict[Element, Matrix]


@dataclass
class ActionTable:
    group: Group
    radius: int
    dim: int
    grid: dict[tuple[str, str], Matrix]
    rows: dict[Element, Row]

    def row(self, w: Element) -> Row:
        if w not in self.rows:
            raise GroupError(f"{self.group.format(w)} lies outside the table radius {self.radius}")
        return self.rows[w]

    def coefficient(self, w: Element, target: Element) -> Matrix:
        return self.row(w).get(target, Matrix.zeros(self.dim))


def _grid_by_index(group: Group, grid: Mapping[tuple[str, str], Matrix]) -> tuple[list[list[Matrix]], int]:
    labels = group.labels
    missing = [(x, z) for x in labels for z in labels if (x, z) not in grid]
    if missing:
        raise ValueError(f"coefficient grid is missing entries {missing}")
    dims = {m.rows for m in grid.values()}
    if len(dims) != 1:
        raise ShapeError("coefficient grid entries have different dimensions")
    return [[grid[(x, z)] for z in labels] for x in labels], dims.pop()


def _add(row: Row, key: Element, m: Matrix) -> None:
    if key in row:
        row[key] = row[key] + m
    else:
        row[key] = m


def _clean(row: Row) -> Row:
    return {k: v for k, v in row.items() if not v.is_zero()}


def build_action(group: Group, grid: Mapping[tuple[str, str], Matrix], radius: int) -> ActionTable:
    """alpha(lambda_w) = sum over formal words v of lambda_{iota(v)} (x) prod_i q[w_i, v_i]."""
    q, dim = _grid_by_index(group, grid)
    ident = Matrix.identity(dim)
    n_gens = len(group.generators)
    rows: dict[Element, Row] = {}
    for w in group.ball(radius):
        word = group.word_of(w)
        row: Row = {}

        def walk(depth: int, elem: Element, prod: Matrix) -> None:
            if depth == len(word):
                _add(row, elem, prod)
                return
            for j in range(n_gens):
                coeff = q[word[depth]][j]
                if coeff.is_zero():
                    continue
                nxt = prod @ coeff
                if not nxt.is_zero():
                    walk(depth + 1, group._mul(elem, group.generators[j]), nxt)

        walk(0, group.identity(), ident)
        rows[w] = _clean(row)
    return ActionTable(group, radius, dim, dict(grid), rows)


def multiply_rows(group: Group, r1: Row, r2: Row) -> Row:
    out: Row = {}
    for g, a in r1.items():
        for h, b in r2.items():
            _add(out, group._mul(g, h), a @ b)
    return _clean(out)


def rows_equal(r1: Row, r2: Row) -> bool:
    return r1.keys() == r2.keys() and all(r1[k] == r2[k] for k in r1)


@dataclass
class SubCheck:
    name: str
    ok: bool
    checked: int
    counterexample: str | None = None

    def to_dict(self) -> dict:
        d: dict[str, Any] = {"check": self.name, "ok": self.ok, "cases": self.checked}
        if self.counterexample:
            d["counterexample"] = self.counterexample
        return d


@dataclass
class ActionReport:
    checks: list[SubCheck]

    @property
    def ok(self) -> bool:
        return all(c.ok for c in self.checks)

    def __getitem__(self, name: str) -> SubCheck:
        for c in self.checks:
            if c.name == name:
                return c
        raise KeyError(name)

    def to_dict(self) -> dict:
        return {"ok": self.ok, "checks": [c.to_dict() for c in self.checks]}


def check_action(table: ActionTable, group: Group | None = None) -> ActionReport:
    group = group or table.group
    if table.radius < 2 and not (group.finite and table.radius >= group.diameter()):
        raise ValueError("action checks need a table of radius at least 2")
    fmt = group.format
    elems = list(table.rows)
    e = group.identity()
    ident = Matrix.identity(table.dim)
    checks = []

    # homomorphism
    count, bad = 0, None
    for g in elems:
        for h in elems:
            if not group.finite and group._len(g) + group._len(h) > table.radius:
                continue
            count += 1
            if not rows_equal(multiply_rows(group, table.rows[g], table.rows[h]), table.rows[group._mul(g, h)]):
                bad = bad or f"g={fmt(g)}, h={fmt(h)}"
    checks.append(SubCheck("homomorphism", bad is None, count, bad))

    # star: alpha(lambda_g)^* = alpha(lambda_{g^-1})
    count, bad = 0, None
    for g in elems:
        adj = {group._inv(k): v.adjoint() for k, v in table.rows[g].items()}
        count += 1
        if not rows_equal(adj, table.rows[group._inv(g)]):
            bad = bad or f"w={fmt(g)}"
    checks.append(SubCheck("star", bad is None, count, bad))

    # D-hat commutation: alpha(lambda_w) supported on the sphere of w
    count, bad = 0, None
    for g in elems:
        n = group._len(g)
        for k in table.rows[g]:
            count += 1
            if group._len(k) != n:
                bad = bad or f"w={fmt(g)}, gamma'={fmt(k)}"
    checks.append(SubCheck("dhat_commutation", bad is None, count, bad))

    # trace preservation
    count, bad = 0, None
    for g in elems:
        count += 1
        coeff = table.rows[g].get(e)
        expected = ident if g == e else None
        if (coeff is None) != (expected is None) or (coeff is not None and coeff != expected):
            bad = bad or f"w={fmt(g)}"
    checks.append(SubCheck("trace", bad is None, count, bad))

    # fundamental corepresentation [q_{t,s}]: target-first block matrix
    gens = group.generators
    blocks = [[table.coefficient(s_j, s_i) for s_j in gens] for s_i in gens]
    checks.append(SubCheck("corep_unitary", is_unitary(Matrix.block(blocks)), 1))

    if isinstance(group, FreeGroup):
        q, _ = _grid_by_index(group, table.grid)
        inv = [group.generator_inverse_index(i) for i in range(len(gens))]
        count, bad = 0, None
        for y in range(len(gens)):
            for z in range(len(gens)):
                if y == inv[z]:
                    continue
                count += 1
                total = Matrix.zeros(table.dim)
                for x in range(len(gens)):
                    total = total + q[y][x] @ q[z][inv[x]]
                if not total.is_zero():
                    bad = bad or f"y={group.labels[y]}, z={group.labels[z]}"
        checks.append(SubCheck("cancellation", bad is None, count, bad))
    return ActionReport(checks)


def derive_word_coefficients(table: ActionTable, w: Element) -> Row:
    """Row of w recomputed as (row of its prefix) times (row of its last letter)."""
    group = table.group
    if group._len(w) > table.radius:
        raise GroupError(f"{group.format(w)} is longer than the table radius {table.radius}")
    word = group.word_of(w)
    if not word:
        return {group.identity(): Matrix.identity(table.dim)}
    prefix = group.reduce(word[:-1])
    return multiply_rows(group, table.rows[prefix], table.rows[group.generators[word[-1]]])


def cyclic_closed_form(preset_obj: Preset, k: int) -> Row:
    """lambda_k (x) A^k + lambda_{n-k} (x) B^k, the expected row of k for 1 <= k < n."""
    group = preset_obj.group
    assert isinstance(group, CyclicGroup)
    a, b = preset_obj.model["A"], preset_obj.model["B"]
    row: Row = {}
    _add(row, k % group.n, a**k)
    _add(row, (-k) % group.n, b**k)
    return _clean(row)


def magic_grid(model: MatrixModel) -> list[list[Matrix]]:
    P = {x: model[x] @ model[x].adjoint() for x in F2_LABELS}
    Q = {x: model[x].adjoint() @ model[x] for x in F2_LABELS}
    return [
        [P["A"], P["B"], P["C"], P["D"]],
        [P["E"], P["F"], P["G"], P["H"]],
        [Q["B"], Q["A"], Q["D"], Q["C"]],
        [Q["F"], Q["E"], Q["H"], Q["G"]],
    ]


def delta_formula_check(p: Preset) -> dict[str, bool]:
    """Compare coproduct images of generators with the explicit tensor formulas."""
    images = coproduct_images(p.presentation, p.model)
    ev = Evaluator(p.model)
    gens = p.presentation.generators
    out = {}
    for label, terms in p.delta.items():
        total = None
        for left, right in terms:
            t = ev(parse_polynomial(left, gens)).kron(ev(parse_polynomial(right, gens)))
            total = t if total is None else total + t
        out[label] = images[label] == total
    return out


def coproduct_of(p: Preset, poly: str) -> tuple[Matrix, Matrix]:
    """(Delta(x), x (x) x) for a polynomial x in the generators, evaluated in the model."""
    images = coproduct_images(p.presentation, p.model)
    x_poly = parse_polynomial(poly, p.presentation.generators)
    x = Evaluator(p.model)(x_poly)
    return Evaluator(images)(x_poly), x.kron(x)


def preset_report(p: Preset) -> dict[str, Any]:
    rel = p.check()
    cop = coproduct_check(p.presentation, p.model)
    out: dict[str, Any] = {
        "preset": p.name,
        "group": p.group.spec,
        "root_order": p.model.root_order,
        "dim": p.model.dim,
        "relations": rel.to_dict(),
        "coproduct": cop.to_dict(),
    }
    ok = rel.ok and cop.ok
    if p.delta:
        formulas = delta_formula_check(p)
        out["delta_formulas"] = formulas
        ok &= all(formulas.values())
    if p.witness:
        value = Evaluator(p.model)(parse_polynomial(p.witness, p.presentation.generators))
        out["noncommutativity_witness"] = {
            "polynomial": p.witness,
            "nonzero": not value.is_zero(),
            "norm_squared": format_scalar(value.norm_squared()),
        }
        ok &= not value.is_zero()
    if p.free_magic:
        from .cyclotomic import is_magic_unitary

        magic = is_magic_unitary(magic_grid(p.model))
        out["magic_unitary"] = {"ok": magic.ok, "failure": magic.failure}
        ok &= magic.ok
    if p.notes:
        out["notes"] = list(p.notes)
    out["ok"] = bool(ok)
    return out
