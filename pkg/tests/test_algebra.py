import pytest

from core.algebra import (
    Algebra,
    coassociativity_holds,
    counit_holds,
    dual_comultiplication,
    elements_fp,
    inverse,
    is_invertible,
    is_isomorphic_fp,
    matrix_algebra,
    multiply,
    opposite,
    product_algebra,
    truncated_poly,
    upper_triangular,
    with_unit_adjoined,
)
from core.config import AlgebraSpec
from core.error_handling import ComputationError, ValidationError
from core.presets import algebra_preset


def test_truncated_polynomial_products(qq):
    A = truncated_poly(3, qq)
    e = [0, 1, 0]
    assert multiply(A, e, e) == A.element([0, 0, 1])
    assert A.is_zero(multiply(A, e, [0, 0, 1]))
    assert A.commutative


def test_matrix_units_multiply(qq):
    A = matrix_algebra(2, qq)
    e01, e10 = A.basis(1), A.basis(2)
    assert multiply(A, e01, e10) == A.basis(0)
    assert multiply(A, e10, e01) == A.basis(3)
    assert not A.commutative


def test_non_associative_constants_are_rejected(qq):
    # a * a = b and b * a = a, but a * b = 0
    constants = [
        [[1, 0, 0], [0, 1, 0], [0, 0, 1]],
        [[0, 1, 0], [0, 0, 1], [0, 0, 0]],
        [[0, 0, 1], [0, 1, 0], [0, 0, 0]],
    ]
    with pytest.raises(ValidationError):
        Algebra.from_constants(qq, constants, [1, 0, 0])
    with pytest.raises(ValidationError):
        Algebra.from_constants(qq, [[[1, 0], [0, 0]], [[0, 0], [0, 1]]], [1, 0])


def test_algebra_from_file_model_uses_its_field():
    spec = AlgebraSpec(
        dim=2,
        unit=[1, 0],
        structure_constants=[[[1, 0], [0, 1]], [[0, 1], [0, 0]]],
        field="fp:3",
    )
    A = Algebra.from_spec(spec, name="dual")
    assert A.field.characteristic == 3
    assert A.to_spec().field == "fp:3"


def test_units_and_inverses(qq):
    A = truncated_poly(2, qq)
    assert is_invertible(A, [2, 5])
    assert not is_invertible(A, [0, 1])
    x = inverse(A, [2, 1])
    assert multiply(A, [2, 1], x) == A.unit
    with pytest.raises(ValidationError):
        inverse(A, [0, 3])


def test_noncommutative_inverse(qq):
    A = upper_triangular(2, qq)
    x = [1, 2, 3]
    assert multiply(A, x, inverse(A, x)) == A.unit
    assert multiply(A, inverse(A, x), x) == A.unit


def test_dual_comultiplication_of_idempotents(qq):
    comult = dual_comultiplication(product_algebra(2, qq))
    assert comult == {0: [(0, 0, qq.one)], 1: [(1, 1, qq.one)]}


@pytest.mark.parametrize("name", ["k2", "k3", "dual2", "dual3", "msq", "mat2", "ut2"])
def test_dual_coalgebra_laws(name, f5):
    A = algebra_preset(name, f5)
    assert coassociativity_holds(A)
    assert counit_holds(A)


def test_opposite_and_unit_adjoined(qq):
    A = upper_triangular(2, qq)
    op = opposite(A)
    x, y = A.basis(0), A.basis(1)
    assert multiply(op, x, y) == multiply(A, y, x)
    assert multiply(op, x, y) != multiply(A, x, y)
    bigger = with_unit_adjoined(A)
    assert bigger.dim == 4
    assert bigger.unit == (qq.one, qq.zero, qq.one, qq.one)


def test_element_enumeration_needs_finite_field(qq, f3):
    assert len(list(elements_fp(truncated_poly(2, f3)))) == 9
    with pytest.raises(ValidationError):
        elements_fp(truncated_poly(2, qq))


def test_isomorphism_search(f3):
    k2 = algebra_preset("k2", f3)
    assert is_isomorphic_fp(k2, algebra_preset("k2", f3)) is not None
    assert is_isomorphic_fp(k2, algebra_preset("dual2", f3)) is None
    assert is_isomorphic_fp(algebra_preset("dual3", f3), algebra_preset("msq", f3)) is None


def test_isomorphism_search_needs_small_prime_fields(qq, f5):
    with pytest.raises(ValidationError):
        is_isomorphic_fp(algebra_preset("k2", qq), algebra_preset("k2", qq))
    big = algebra_preset("mat2", f5)
    with pytest.raises(ComputationError):
        is_isomorphic_fp(big, big)
