"""Exact arithmetic in cyclotomic fields Q(zeta_N) and sparse matrices over them.

Elements of Q(zeta_N) are stored in the power basis 1, z, ..., z^(phi(N)-1)
modulo the N-th cyclotomic polynomial, so equality of coefficient vectors is
equality of field elements.  No floating point is used anywhere here.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import gcd
from typing import Iterable, Mapping, NamedTuple, Sequence, Union

MAX_ORDER = 360

Rational = Fraction
ScalarLike = Union["CyclotomicScalar", Fraction, int]


class UnsupportedOrderError(ValueError):
    pass


class ShapeError(ValueError):
    pass


def lcm(a: int, b: int) -> int:
    return a * b // gcd(a, b)


def _check_order(n: int) -> None:
    if not isinstance(n, int) or n < 1:
        raise UnsupportedOrderError(f"root-of-unity order must be a positive integer, got {n!r}")
    if n > MAX_ORDER:
        raise UnsupportedOrderError(
            f"root-of-unity order {n} exceeds the supported maximum {MAX_ORDER}"
        )


def _poly_divmod(num: list[int], den: list[int]) -> tuple[list[int], list[int]]:
    # integer polynomials, lowest degree first; den is monic
    num = list(num)
    dd = len(den) - 1
    if len(num) - 1 < dd:
        return [0], num
    quot = [0] * (len(num) - dd)
    for i in range(len(num) - 1, dd - 1, -1):
        c = num[i]
        if c:
            quot[i - dd] = c
            for j, d in enumerate(den):
                num[i - dd + j] -= c * d
    rem = num[:dd] or [0]
    return quot, rem


@lru_cache(maxsize=None)
def cyclotomic_polynomial(n: int) -> tuple[int, ...]:
    """Coefficients of Phi_n, lowest degree first.

    Computed by dividing x^n - 1 by Phi_d for every proper divisor d of n.
    """
    _check_order(n)
    poly = [-1] + [0] * (n - 1) + [1]
    for d in range(1, n):
        if n % d == 0:
            poly, rem = _poly_divmod(poly, list(cyclotomic_polynomial(d)))
            assert not any(rem)
    return tuple(poly)


def degree(n: int) -> int:
    return len(cyclotomic_polynomial(n)) - 1


@lru_cache(maxsize=None)
def _power_table(n: int) -> tuple[tuple[int, ...], ...]:
    # row k = coefficients of x^k mod Phi_n, for 0 <= k < n
    phi = cyclotomic_polynomial(n)
    deg = len(phi) - 1
    rows = []
    cur = [1] + [0] * (deg - 1) if deg else []
    for _ in range(n):
        rows.append(tuple(cur))
        # multiply by x and reduce
        top = cur[-1] if deg else 0
        cur = [0] + cur[:-1] if deg else []
        if top:
            for j in range(deg):
                cur[j] -= top * phi[j]
    return tuple(rows)


def _reduce_exponents(n: int, terms: Iterable[tuple[int, Fraction]]) -> tuple[Fraction, ...]:
    table = _power_table(n)
    deg = degree(n)
    out = [Fraction(0)] * deg
    for k, c in terms:
        if not c:
            continue
        if 0 <= k < deg:
            out[k] += c
        else:
            for j, t in enumerate(table[k % n]):
                if t:
                    out[j] += c * t
    return tuple(out)


@lru_cache(maxsize=None)
def _mobius(n: int) -> int:
    result, p, m = 1, 2, n
    while p * p <= m:
        if m % p == 0:
            m //= p
            if m % p == 0:
                return 0
            result = -result
        p += 1
    if m > 1:
        result = -result
    return result


@lru_cache(maxsize=None)
def _totient(n: int) -> int:
    return sum(1 for k in range(1, n + 1) if gcd(k, n) == 1)


class CyclotomicScalar:
    """An element of Q(zeta_N), immutable.

    Arithmetic between elements of different orders lifts both to the lcm of
    the orders.  Equality and hashing are independent of the order an element
    happens to be stored in.
    """

    __slots__ = ("order", "coeffs", "_hash")

    def __init__(self, order: int, coeffs: Sequence[Fraction]):
        _check_order(order)
        coeffs = tuple(Fraction(c) for c in coeffs)
        if len(coeffs) != degree(order):
            raise ValueError(
                f"Q(zeta_{order}) needs {degree(order)} coefficients, got {len(coeffs)}"
            )
        self.order = order
        self.coeffs = coeffs
        self._hash = None

    @classmethod
    def _new(cls, order: int, coeffs: tuple[Fraction, ...]) -> "CyclotomicScalar":
        # trusted internal constructor: coeffs already validated Fractions
        obj = object.__new__(cls)
        obj.order = order
        obj.coeffs = coeffs
        obj._hash = None
        return obj

    # -- constructors -------------------------------------------------
    @classmethod
    def rational(cls, value: Union[int, Fraction], order: int = 1) -> "CyclotomicScalar":
        deg = degree(order)
        return cls(order, (Fraction(value),) + (Fraction(0),) * (deg - 1))

    @classmethod
    def root(cls, n: int, k: int = 1) -> "CyclotomicScalar":
        """zeta_n ** k."""
        _check_order(n)
        return cls(n, _reduce_exponents(n, [(k % n, Fraction(1))]))

    @classmethod
    def coerce(cls, x: ScalarLike) -> "CyclotomicScalar":
        if isinstance(x, CyclotomicScalar):
            return x
        if isinstance(x, (int, Fraction)):
            return cls.rational(x)
        raise TypeError(f"cannot interpret {x!r} as a cyclotomic scalar")

    # -- order handling -----------------------------------------------
    def lift(self, m: int) -> "CyclotomicScalar":
        if m == self.order:
            return self
        if m % self.order:
            raise ValueError(f"cannot lift Q(zeta_{self.order}) into Q(zeta_{m})")
        _check_order(m)
        step = m // self.order
        return CyclotomicScalar._new(m, _reduce_exponents(m, ((k * step, c) for k, c in enumerate(self.coeffs))))

    def _common(self, other: ScalarLike) -> tuple["CyclotomicScalar", "CyclotomicScalar"]:
        other = CyclotomicScalar.coerce(other)
        if other.order == self.order:
            return self, other
        m = lcm(self.order, other.order)
        _check_order(m)
        return self.lift(m), other.lift(m)

    # -- arithmetic ---------------------------------------------------
    def __add__(self, other: ScalarLike) -> "CyclotomicScalar":
        try:
            a, b = self._common(other)
        except TypeError:
            return NotImplemented
        return CyclotomicScalar._new(a.order, tuple(x + y for x, y in zip(a.coeffs, b.coeffs)))

    __radd__ = __add__

    def __neg__(self) -> "CyclotomicScalar":
        return CyclotomicScalar._new(self.order, tuple(-c for c in self.coeffs))

    def __sub__(self, other: ScalarLike) -> "CyclotomicScalar":
        try:
            a, b = self._common(other)
        except TypeError:
            return NotImplemented
        return CyclotomicScalar._new(a.order, tuple(x - y for x, y in zip(a.coeffs, b.coeffs)))

    def __rsub__(self, other: ScalarLike) -> "CyclotomicScalar":
        return CyclotomicScalar.coerce(other) - self

    def __mul__(self, other: ScalarLike) -> "CyclotomicScalar":
        if isinstance(other, (int, Fraction)):
            return CyclotomicScalar._new(self.order, tuple(c * other for c in self.coeffs))
        try:
            a, b = self._common(other)
        except TypeError:
            return NotImplemented
        if not any(b.coeffs[1:]):
            r = b.coeffs[0]
            return CyclotomicScalar._new(a.order, tuple(c * r for c in a.coeffs))
        if not any(a.coeffs[1:]):
            r = a.coeffs[0]
            return CyclotomicScalar._new(a.order, tuple(c * r for c in b.coeffs))
        prod: dict[int, Fraction] = {}
        for i, x in enumerate(a.coeffs):
            if not x:
                continue
            for j, y in enumerate(b.coeffs):
                if y:
                    prod[i + j] = prod.get(i + j, Fraction(0)) + x * y
        return CyclotomicScalar._new(a.order, _reduce_exponents(a.order, prod.items()))

    __rmul__ = __mul__

    def __truediv__(self, other: Union[int, Fraction]) -> "CyclotomicScalar":
        if not isinstance(other, (int, Fraction)):
            return NotImplemented
        return self * (Fraction(1) / Fraction(other))

    def __pow__(self, k: int) -> "CyclotomicScalar":
        if k < 0:
            raise ValueError("negative powers are not supported")
        result = CyclotomicScalar.rational(1, self.order)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def conj(self) -> "CyclotomicScalar":
        """Complex conjugation, zeta_N -> zeta_N^(N-1)."""
        n = self.order
        return CyclotomicScalar._new(n, _reduce_exponents(n, (((-k) % n, c) for k, c in enumerate(self.coeffs))))

    # -- predicates ---------------------------------------------------
    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def __bool__(self) -> bool:
        return not self.is_zero()

    def is_rational(self) -> bool:
        return not any(self.coeffs[1:])

    def to_fraction(self) -> Fraction:
        if not self.is_rational():
            raise ValueError(f"{self} is not rational")
        return self.coeffs[0]

    def normalized_trace(self) -> Fraction:
        """Tr_{Q(zeta_N)/Q}(x) / phi(N); unchanged by lifting to a larger order."""
        n = self.order
        total = Fraction(0)
        for k, c in enumerate(self.coeffs):
            if c:
                m = n // gcd(k, n)
                total += c * Fraction(_mobius(m), _totient(m))
        return total

    def __eq__(self, other: object) -> bool:
        if isinstance(other, (int, Fraction)):
            return self.is_rational() and self.coeffs[0] == other
        if not isinstance(other, CyclotomicScalar):
            return NotImplemented
        try:
            a, b = self._common(other)
        except UnsupportedOrderError:
            return False
        return a.coeffs == b.coeffs

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(self.normalized_trace())
        return self._hash

    def to_complex(self) -> complex:
        """Floating-point value, for display only."""
        import cmath

        w = cmath.exp(2j * cmath.pi / self.order)
        return sum(float(c) * w**k for k, c in enumerate(self.coeffs))

    # -- text ---------------------------------------------------------
    def __str__(self) -> str:
        return format_scalar(self)

    def __repr__(self) -> str:
        return f"CyclotomicScalar({format_scalar(self)!r})"


def format_rational(q: Fraction) -> str:
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def format_scalar(x: ScalarLike) -> str:
    """Render in the scalar literal syntax, e.g. ``1/2 z(8,1) - 1/2 z(8,3)``."""
    if isinstance(x, (int, Fraction)):
        return format_rational(Fraction(x))
    parts: list[str] = []
    for k, c in enumerate(x.coeffs):
        if not c:
            continue
        mag = abs(c)
        if k == 0:
            body = format_rational(mag)
        elif mag == 1:
            body = f"z({x.order},{k})"
        else:
            body = f"{format_rational(mag)} z({x.order},{k})"
        if not parts:
            parts.append(("-" if c < 0 else "") + body)
        else:
            parts.append(("- " if c < 0 else "+ ") + body)
    return " ".join(parts) if parts else "0"


ZERO = CyclotomicScalar.rational(0)
ONE = CyclotomicScalar.rational(1)


def zeta(n: int, k: int = 1) -> CyclotomicScalar:
    return CyclotomicScalar.root(n, k)


def sqrt2() -> CyclotomicScalar:
    """sqrt(2) = zeta_8 + zeta_8^7."""
    return zeta(8, 1) + zeta(8, 7)


# ---------------------------------------------------------------------------
# matrices


class Matrix:
    """Sparse matrix over a cyclotomic field.

    Only nonzero entries are stored, keyed by ``(row, col)``; every stored
    entry has the matrix's ``order``.  Instances are treated as immutable.
    """

    __slots__ = ("rows", "cols", "order", "data")

    def __init__(self, rows: int, cols: int, data: Mapping[tuple[int, int], ScalarLike] = (), order: int = 1):
        if rows < 1 or cols < 1:
            raise ShapeError(f"matrix dimensions must be positive, got {rows}x{cols}")
        items = dict(data)
        for x in items.values():
            if isinstance(x, CyclotomicScalar):
                order = lcm(order, x.order)
        _check_order(order)
        clean = {}
        for (i, j), x in items.items():
            if not (0 <= i < rows and 0 <= j < cols):
                raise ShapeError(f"entry ({i},{j}) outside a {rows}x{cols} matrix")
            x = CyclotomicScalar.coerce(x).lift(order)
            if x:
                clean[(i, j)] = x
        self.rows = rows
        self.cols = cols
        self.order = order
        self.data = clean

    @classmethod
    def _trusted(cls, rows: int, cols: int, data: dict, order: int) -> "Matrix":
        # internal: entries already CyclotomicScalars of this order, in range
        obj = object.__new__(cls)
        obj.rows, obj.cols, obj.order = rows, cols, order
        obj.data = {k: v for k, v in data.items() if v}
        return obj

    # -- constructors -------------------------------------------------
    @classmethod
    def zeros(cls, rows: int, cols: int | None = None) -> "Matrix":
        return cls(rows, rows if cols is None else cols)

    @classmethod
    def identity(cls, n: int) -> "Matrix":
        return cls(n, n, {(i, i): 1 for i in range(n)})

    @classmethod
    def scalar(cls, x: ScalarLike, n: int = 1) -> "Matrix":
        x = CyclotomicScalar.coerce(x)
        return cls(n, n, {(i, i): x for i in range(n)}, order=x.order)

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[ScalarLike]]) -> "Matrix":
        if not rows or not rows[0]:
            raise ShapeError("empty matrix")
        width = len(rows[0])
        if any(len(r) != width for r in rows):
            raise ShapeError("ragged rows")
        return cls(len(rows), width, {(i, j): x for i, r in enumerate(rows) for j, x in enumerate(r) if x != 0})

    @classmethod
    def diag(cls, values: Sequence[ScalarLike]) -> "Matrix":
        return cls(len(values), len(values), {(i, i): v for i, v in enumerate(values)})

    @classmethod
    def permutation(cls, images: Sequence[int]) -> "Matrix":
        """Matrix sending basis vector j to basis vector images[j]."""
        n = len(images)
        return cls(n, n, {(images[j], j): 1 for j in range(n)})

    @classmethod
    def block(cls, grid: Sequence[Sequence["Matrix"]]) -> "Matrix":
        heights = [row[0].rows for row in grid]
        widths = [m.cols for m in grid[0]]
        data = {}
        order = 1
        r0 = 0
        for bi, row in enumerate(grid):
            if len(row) != len(widths):
                raise ShapeError("ragged block grid")
            c0 = 0
            for bj, m in enumerate(row):
                if m.rows != heights[bi] or m.cols != widths[bj]:
                    raise ShapeError(f"block ({bi},{bj}) has shape {m.shape}")
                order = lcm(order, m.order)
                for (i, j), x in m.data.items():
                    data[(r0 + i, c0 + j)] = x
                c0 += widths[bj]
            r0 += heights[bi]
        return cls(r0, sum(widths), data, order=order)

    @classmethod
    def block_diag(cls, *blocks: "Matrix") -> "Matrix":
        grid = [
            [b if i == j else cls.zeros(b.rows, c.cols) for j, c in enumerate(blocks)]
            for i, b in enumerate(blocks)
        ]
        return cls.block(grid)

    # -- access -------------------------------------------------------
    @property
    def shape(self) -> tuple[int, int]:
        return (self.rows, self.cols)

    def __getitem__(self, key: tuple[int, int]) -> CyclotomicScalar:
        i, j = key
        if not (0 <= i < self.rows and 0 <= j < self.cols):
            raise IndexError(key)
        return self.data.get(key, CyclotomicScalar.rational(0, self.order))

    def to_rows(self) -> list[list[CyclotomicScalar]]:
        return [[self[i, j] for j in range(self.cols)] for i in range(self.rows)]

    def is_zero(self) -> bool:
        return not self.data

    def is_square(self) -> bool:
        return self.rows == self.cols

    # -- arithmetic ---------------------------------------------------
    def _lifted(self, order: int) -> dict[tuple[int, int], CyclotomicScalar]:
        if order == self.order:
            return self.data
        _check_order(order)
        return {k: v.lift(order) for k, v in self.data.items()}

    def __add__(self, other: "Matrix") -> "Matrix":
        if not isinstance(other, Matrix):
            return NotImplemented
        if self.shape != other.shape:
            raise ShapeError(f"cannot add {self.shape} and {other.shape}")
        order = lcm(self.order, other.order)
        data = dict(self._lifted(order))
        for k, v in other._lifted(order).items():
            data[k] = data[k] + v if k in data else v
        return Matrix._trusted(self.rows, self.cols, data, order)

    def __neg__(self) -> "Matrix":
        return Matrix._trusted(self.rows, self.cols, {k: -v for k, v in self.data.items()}, self.order)

    def __sub__(self, other: "Matrix") -> "Matrix":
        if not isinstance(other, Matrix):
            return NotImplemented
        return self + (-other)

    def scale(self, x: ScalarLike) -> "Matrix":
        x = CyclotomicScalar.coerce(x)
        order = lcm(self.order, x.order)
        x = x.lift(order)
        return Matrix._trusted(self.rows, self.cols, {k: v * x for k, v in self._lifted(order).items()}, order)

    def __mul__(self, other: ScalarLike) -> "Matrix":
        if isinstance(other, Matrix):
            return self @ other
        try:
            return self.scale(other)
        except TypeError:
            return NotImplemented

    def __rmul__(self, other: ScalarLike) -> "Matrix":
        try:
            return self.scale(other)
        except TypeError:
            return NotImplemented

    def __matmul__(self, other: "Matrix") -> "Matrix":
        if not isinstance(other, Matrix):
            return NotImplemented
        if self.cols != other.rows:
            raise ShapeError(f"cannot multiply {self.shape} by {other.shape}")
        order = lcm(self.order, other.order)
        by_row: dict[int, list[tuple[int, CyclotomicScalar]]] = {}
        for (k, j), v in other._lifted(order).items():
            by_row.setdefault(k, []).append((j, v))
        acc: dict[tuple[int, int], CyclotomicScalar] = {}
        for (i, k), a in self._lifted(order).items():
            for j, b in by_row.get(k, ()):
                p = a * b
                key = (i, j)
                acc[key] = acc[key] + p if key in acc else p
        return Matrix._trusted(self.rows, other.cols, acc, order)

    def __pow__(self, k: int) -> "Matrix":
        if not self.is_square():
            raise ShapeError("power of a non-square matrix")
        if k < 0:
            raise ValueError("negative matrix powers are not supported")
        result = Matrix.identity(self.rows)
        base = self
        while k:
            if k & 1:
                result = result @ base
            base = base @ base
            k >>= 1
        return result

    def adjoint(self) -> "Matrix":
        return Matrix._trusted(self.cols, self.rows, {(j, i): v.conj() for (i, j), v in self.data.items()}, self.order)

    @property
    def H(self) -> "Matrix":
        return self.adjoint()

    def transpose(self) -> "Matrix":
        return Matrix(self.cols, self.rows, {(j, i): v for (i, j), v in self.data.items()}, self.order)

    def kron(self, other: "Matrix") -> "Matrix":
        order = lcm(self.order, other.order)
        a, b = self._lifted(order), other._lifted(order)
        data = {
            (i * other.rows + k, j * other.cols + l): x * y
            for (i, j), x in a.items()
            for (k, l), y in b.items()
        }
        return Matrix._trusted(self.rows * other.rows, self.cols * other.cols, data, order)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Matrix):
            return NotImplemented
        if self.shape != other.shape or self.data.keys() != other.data.keys():
            return False
        return all(v == other.data[k] for k, v in self.data.items())

    __hash__ = None  # type: ignore[assignment]

    def commutes_with(self, other: "Matrix") -> bool:
        return self @ other == other @ self

    def norm_squared(self) -> CyclotomicScalar:
        """Sum of |entry|^2, as an exact (totally positive) field element."""
        total = CyclotomicScalar.rational(0, self.order)
        for v in self.data.values():
            total = total + v * v.conj()
        return total

    def __repr__(self) -> str:
        return f"Matrix({self.rows}x{self.cols}, order={self.order}, nnz={len(self.data)})"

    def __str__(self) -> str:
        rows = [[format_scalar(x) for x in r] for r in self.to_rows()]
        width = max(len(s) for r in rows for s in r)
        return "\n".join("[ " + "  ".join(s.rjust(width) for s in r) + " ]" for r in rows)


def kron(a: Matrix, b: Matrix) -> Matrix:
    return a.kron(b)


class Classification(NamedTuple):
    is_unitary: bool
    is_projection: bool
    is_partial_isometry: bool
    is_self_adjoint: bool


def classify(m: Matrix) -> Classification:
    adj = m.adjoint()
    mm = m @ adj
    square = m.is_square()
    self_adjoint = square and m == adj
    if square:
        ident = Matrix.identity(m.rows)
        unitary = mm == ident and adj @ m == ident
        projection = self_adjoint and m @ m == m
    else:
        unitary = projection = False
    return Classification(unitary, projection, mm @ m == m, self_adjoint)


@dataclass(frozen=True)
class MagicReport:
    ok: bool
    failure: str | None = None

    def __bool__(self) -> bool:
        return self.ok


def is_magic_unitary(grid: Sequence[Sequence[Matrix]]) -> MagicReport:
    """Every entry an orthogonal projection, every row and column summing to 1."""
    n = len(grid)
    if any(len(row) != n for row in grid):
        raise ShapeError("magic unitary grid must be square")
    dim = grid[0][0].rows
    for i, row in enumerate(grid):
        for j, m in enumerate(row):
            if m.shape != (dim, dim):
                raise ShapeError(f"entry ({i},{j}) has shape {m.shape}, expected {(dim, dim)}")
    for i, row in enumerate(grid):
        for j, m in enumerate(row):
            if not classify(m).is_projection:
                return MagicReport(False, f"entry ({i},{j}) is not a projection")
    ident = Matrix.identity(dim)
    for i in range(n):
        total = grid[i][0]
        for j in range(1, n):
            total = total + grid[i][j]
        if total != ident:
            return MagicReport(False, f"row {i} does not sum to 1")
    for j in range(n):
        total = grid[0][j]
        for i in range(1, n):
            total = total + grid[i][j]
        if total != ident:
            return MagicReport(False, f"column {j} does not sum to 1")
    return MagicReport(True)
