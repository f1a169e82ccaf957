from fractions import Fraction

import pytest

from qiso_workbench.cyclotomic import (
    CyclotomicScalar,
    Matrix,
    ShapeError,
    UnsupportedOrderError,
    classify,
    cyclotomic_polynomial,
    format_scalar,
    is_magic_unitary,
    kron,
    sqrt2,
    zeta,
)

I4 = zeta(4)
SIGMA1 = Matrix.from_rows([[0, 1], [1, 0]])
SIGMA2 = Matrix.from_rows([[0, -I4], [I4, 0]])
SIGMA3 = Matrix.from_rows([[1, 0], [0, -1]])


def test_cyclotomic_polynomials_match_known_coefficients():
    assert cyclotomic_polynomial(1) == (-1, 1)
    assert cyclotomic_polynomial(4) == (1, 0, 1)
    assert cyclotomic_polynomial(8) == (1, 0, 0, 0, 1)
    assert cyclotomic_polynomial(12) == (1, 0, -1, 0, 1)


def test_conjugate_of_i():
    assert I4.conj() == -I4


def test_sqrt2_squares_to_two():
    r = zeta(8, 1) + zeta(8, 7)
    assert r * r == 2
    assert sqrt2() == r


def test_additive_identity():
    assert CyclotomicScalar.rational(1) + CyclotomicScalar.rational(0) == 1


def test_cross_order_operands_lift_to_lcm():
    x = zeta(4) + zeta(6)
    assert x.order == 12
    assert zeta(3) * zeta(3, 2) == 1
    assert zeta(6, 3) == -1


def test_order_limits():
    with pytest.raises(UnsupportedOrderError):
        zeta(361)
    with pytest.raises(UnsupportedOrderError):
        zeta(0)


def test_division_by_rational_only():
    assert zeta(8) / 2 * 2 == zeta(8)
    with pytest.raises(ZeroDivisionError):
        zeta(8) / 0


def test_rational_view():
    half = CyclotomicScalar.rational(Fraction(1, 2), 8)
    assert half.is_rational()
    assert half.to_fraction() == Fraction(1, 2)
    assert not zeta(8).is_rational()


def test_scalar_literal_format():
    assert format_scalar(CyclotomicScalar.rational(Fraction(-3, 4))) == "-3/4"
    assert format_scalar(sqrt2() / 2) == "1/2 z(8,1) - 1/2 z(8,3)"


def test_adjoint_of_identity():
    assert Matrix.identity(2).adjoint() == Matrix.identity(2)


def test_kron_of_identities():
    assert kron(Matrix.identity(2), Matrix.identity(3)) == Matrix.identity(6)


def test_pauli_product():
    assert SIGMA1 @ SIGMA2 == SIGMA3.scale(I4)


def test_shape_mismatch_raises():
    with pytest.raises(ShapeError):
        Matrix.identity(2) @ Matrix.identity(3)
    with pytest.raises(ShapeError):
        Matrix.identity(2) + Matrix.identity(3)


def test_classify_identity():
    flags = classify(Matrix.identity(3))
    assert all(flags)


def test_classify_scaled_pauli():
    m = SIGMA1.scale(sqrt2() / 2)
    flags = classify(m)
    assert not flags.is_partial_isometry
    assert flags.is_self_adjoint
    assert m @ m.adjoint() @ m == m.scale(Fraction(1, 2))


def test_classify_diagonal_projection():
    flags = classify(Matrix.diag([1, 0]))
    assert flags.is_projection
    assert not flags.is_unitary


def _scalar_grid(perm):
    return [[Matrix.scalar(int(perm[i] == j)) for j in range(4)] for i in range(4)]


def test_permutation_grid_is_magic():
    assert is_magic_unitary(_scalar_grid([2, 0, 3, 1])).ok


def test_half_identity_entry_is_not_magic():
    grid = _scalar_grid([0, 1, 2, 3])
    grid[1][2] = Matrix.scalar(Fraction(1, 2))
    report = is_magic_unitary(grid)
    assert not report.ok
    assert "projection" in report.failure


def test_magic_requires_square_grid():
    with pytest.raises(ShapeError):
        is_magic_unitary([[Matrix.scalar(1)] * 2])


def test_norm_squared_is_exact():
    m = Matrix.from_rows([[1, I4], [0, 2]])
    assert m.norm_squared() == 6


def test_permutation_matrix_columns():
    p = Matrix.permutation([1, 2, 0])
    assert p[1, 0] == 1 and p[2, 1] == 1 and p[0, 2] == 1
    assert p @ p @ p == Matrix.identity(3)
