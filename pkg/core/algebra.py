"""
Finite-dimensional unital algebras given by structure constants.

mu(e_i, e_j) = sum_k c[i][j][k] e_k. Elements are coordinate tuples in the fixed basis.
"""

from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple

from .config import AlgebraSpec
from .constants import PGL_SEARCH_LIMIT
from .error_handling import ComputationError, InternalConsistencyError, ValidationError
from .linalg import RATIONALS, Field, Matrix

Element = Tuple  # coordinates (field elements)
CoproductTerm = Tuple[int, int, object]  # (left index, right index, coefficient)


@dataclass(frozen=True, eq=False)
class Algebra:
    """A finite-dimensional unital algebra; validated on construction."""

    field: Field
    dim: int
    structure: Tuple[Tuple[Tuple, ...], ...]
    unit: Element
    name: str = ""

    def __post_init__(self):
        d = self.dim
        if d < 1:
            raise ValidationError("algebra dimension must be positive")
        if len(self.unit) != d or len(self.structure) != d:
            raise ValidationError(f"structure constants do not match dimension {d}")
        if any(len(row) != d or any(len(entry) != d for entry in row) for row in self.structure):
            raise ValidationError(f"structure constants are not a {d}x{d}x{d} array")
        _check_associative(self)
        _check_unit(self)

    @classmethod
    def from_constants(
        cls, field: Field, constants: Sequence[Sequence[Sequence]], unit: Sequence, name: str = ""
    ) -> "Algebra":
        structure = tuple(tuple(tuple(field(c) for c in entry) for entry in row) for row in constants)
        return cls(field, len(structure), structure, tuple(field(u) for u in unit), name)

    @classmethod
    def from_spec(cls, spec: AlgebraSpec, field: Optional[Field] = None, name: str = "") -> "Algebra":
        """Builds an algebra from a validated file model; the file's field wins over the argument."""
        chosen = Field.from_name(spec.field) if spec.field else (field or RATIONALS)
        return cls.from_constants(chosen, spec.structure_constants, spec.unit, name)

    def over(self, field: Field) -> "Algebra":
        """The same structure constants read in another field."""
        constants = [[[self.field.to_output(c) for c in entry] for entry in row] for row in self.structure]
        return Algebra.from_constants(field, constants, [self.field.to_output(u) for u in self.unit], self.name)

    @property
    def commutative(self) -> bool:
        d = self.dim
        return all(self.structure[i][j] == self.structure[j][i] for i in range(d) for j in range(d))

    def c(self, i: int, j: int, k: int):
        return self.structure[i][j][k]

    def element(self, values: Sequence) -> Element:
        if len(values) != self.dim:
            raise ValidationError(f"element has {len(values)} coordinates, expected {self.dim}")
        return tuple(self.field(v) for v in values)

    def basis(self, i: int) -> Element:
        return tuple(self.field.one if k == i else self.field.zero for k in range(self.dim))

    @property
    def zero(self) -> Element:
        return tuple(self.field.zero for _ in range(self.dim))

    def is_zero(self, x: Element) -> bool:
        return all(v == self.field.zero for v in x)

    def to_output(self, x: Element) -> List:
        return [self.field.to_output(v) for v in x]

    def to_spec(self) -> AlgebraSpec:
        return AlgebraSpec(
            dim=self.dim,
            unit=[str(self.field.to_output(u)) for u in self.unit],
            structure_constants=[
                [[str(self.field.to_output(c)) for c in entry] for entry in row] for row in self.structure
            ],
            field=self.field.name,
        )


def product_of(A: Algebra, x: Element, y: Element) -> Element:
    d = A.dim
    zero = A.field.zero
    result = [zero] * d
    for i, xi in enumerate(x):
        if xi == zero:
            continue
        for j, yj in enumerate(y):
            if yj == zero:
                continue
            s = xi * yj
            row = A.structure[i][j]
            for k in range(d):
                if row[k] != zero:
                    result[k] += s * row[k]
    return tuple(result)


def _check_associative(A: Algebra):
    d = A.dim
    for i, j, k in itertools.product(range(d), repeat=3):
        ei, ej, ek = A.basis(i), A.basis(j), A.basis(k)
        if product_of(A, product_of(A, ei, ej), ek) != product_of(A, ei, product_of(A, ej, ek)):
            raise ValidationError(f"structure constants are not associative at basis triple ({i},{j},{k})")


def _check_unit(A: Algebra):
    for i in range(A.dim):
        e = A.basis(i)
        if product_of(A, A.unit, e) != e or product_of(A, e, A.unit) != e:
            raise ValidationError(f"unit law fails on basis element {i}")


def _check_dims(A: Algebra, *elements: Element):
    for x in elements:
        if len(x) != A.dim:
            raise ValidationError(f"element has {len(x)} coordinates, algebra has dimension {A.dim}")


def multiply(A: Algebra, x: Sequence, y: Sequence) -> Element:
    """The product mu(x, y)."""
    _check_dims(A, x, y)
    return product_of(A, A.element(x), A.element(y))


def left_multiplication(A: Algebra, x: Element) -> Matrix:
    """Matrix of y -> x y; column j is x e_j."""
    columns = [product_of(A, x, A.basis(j)) for j in range(A.dim)]
    return Matrix(A.field, A.dim, A.dim, tuple(tuple(col[k] for col in columns) for k in range(A.dim)))


def right_multiplication(A: Algebra, x: Element) -> Matrix:
    columns = [product_of(A, A.basis(j), x) for j in range(A.dim)]
    return Matrix(A.field, A.dim, A.dim, tuple(tuple(col[k] for col in columns) for k in range(A.dim)))


def is_invertible(A: Algebra, x: Sequence) -> bool:
    """x is a unit iff left multiplication by x has full rank; the right-multiplication rank must agree."""
    _check_dims(A, x)
    element = A.element(x)
    left = left_multiplication(A, element).rank() == A.dim
    right = right_multiplication(A, element).rank() == A.dim
    if left != right:
        raise InternalConsistencyError(f"left and right invertibility disagree for {A.to_output(element)}")
    return left


def inverse(A: Algebra, x: Sequence) -> Element:
    element = A.element(x)
    if not is_invertible(A, element):
        raise ValidationError(f"{A.to_output(element)} is not invertible")
    system = left_multiplication(A, element)
    solution = system.hstack(Matrix(A.field, A.dim, 1, tuple((u,) for u in A.unit))).rref()[0]
    return tuple(solution[k, A.dim] for k in range(A.dim))


# --- Builders ---


def _constants(field: Field, d: int, products: Dict[Tuple[int, int], Dict[int, int]]):
    grid = [[[0] * d for _ in range(d)] for _ in range(d)]
    for (i, j), result in products.items():
        for k, value in result.items():
            grid[i][j][k] = value
    return grid


def product_algebra(n: int, field: Field = RATIONALS) -> Algebra:
    """k^n with orthogonal idempotents."""
    if n < 1:
        raise ValidationError("product_algebra needs n >= 1")
    constants = _constants(field, n, {(i, i): {i: 1} for i in range(n)})
    return Algebra.from_constants(field, constants, [1] * n, f"k{n}")


def truncated_poly(m: int, field: Field = RATIONALS) -> Algebra:
    """k[e]/e^m in the basis 1, e, ..., e^(m-1)."""
    if m < 1:
        raise ValidationError("truncated_poly needs m >= 1")
    products = {(i, j): {i + j: 1} for i in range(m) for j in range(m) if i + j < m}
    return Algebra.from_constants(field, _constants(field, m, products), [1] + [0] * (m - 1), f"dual{m}")


def monomial_square(field: Field = RATIONALS) -> Algebra:
    """k[x,y]/(x^2, xy, y^2) in the basis 1, x, y."""
    products = {(0, 0): {0: 1}, (0, 1): {1: 1}, (1, 0): {1: 1}, (0, 2): {2: 1}, (2, 0): {2: 1}}
    return Algebra.from_constants(field, _constants(field, 3, products), [1, 0, 0], "msq")


def matrix_algebra(m: int, field: Field = RATIONALS) -> Algebra:
    """End(k^m) with matrix units e_ab at index a*m + b."""
    if m < 1:
        raise ValidationError("matrix_algebra needs m >= 1")
    products = {}
    for a, b, c in itertools.product(range(m), repeat=3):
        products[(a * m + b, b * m + c)] = {a * m + c: 1}
    unit = [1 if a == b else 0 for a in range(m) for b in range(m)]
    return Algebra.from_constants(field, _constants(field, m * m, products), unit, f"mat{m}")


def upper_triangular(m: int, field: Field = RATIONALS) -> Algebra:
    """Upper triangular m x m matrices, matrix units e_ab (a <= b) in lexicographic order."""
    if m < 1:
        raise ValidationError("upper_triangular needs m >= 1")
    units = [(a, b) for a in range(m) for b in range(a, m)]
    index = {u: i for i, u in enumerate(units)}
    products = {}
    for (a, b), (c, e) in itertools.product(units, repeat=2):
        if b == c:
            products[(index[(a, b)], index[(c, e)])] = {index[(a, e)]: 1}
    unit = [1 if a == b else 0 for a, b in units]
    return Algebra.from_constants(field, _constants(field, len(units), products), unit, f"ut{m}")


def with_unit_adjoined(A: Algebra) -> Algebra:
    """The product algebra A x k."""
    d = A.dim
    constants = [[[A.field.zero] * (d + 1) for _ in range(d + 1)] for _ in range(d + 1)]
    for i, j, k in itertools.product(range(d), repeat=3):
        constants[i][j][k] = A.c(i, j, k)
    constants[d][d][d] = A.field.one
    return Algebra.from_constants(A.field, constants, [*A.unit, A.field.one], f"{A.name}xk" if A.name else "")


def opposite(A: Algebra) -> Algebra:
    d = A.dim
    constants = [[[A.c(j, i, k) for k in range(d)] for j in range(d)] for i in range(d)]
    return Algebra.from_constants(A.field, constants, A.unit, f"{A.name}op" if A.name else "")


# --- Coalgebra on the dual ---


def dual_comultiplication(A: Algebra) -> Dict[int, List[CoproductTerm]]:
    """Delta(e_k^v) = sum_{i,j} c_ij^k e_i^v (x) e_j^v, as nonzero (i, j, coefficient) terms."""
    d = A.dim
    zero = A.field.zero
    return {
        k: [(i, j, A.c(i, j, k)) for i in range(d) for j in range(d) if A.c(i, j, k) != zero] for k in range(d)
    }


def counit(A: Algebra) -> Tuple:
    """epsilon(e_k^v) = e_k^v(1_A)."""
    return A.unit


def coassociativity_holds(A: Algebra) -> bool:
    """(Delta (x) id) Delta = (id (x) Delta) Delta on every dual basis element."""
    comult = dual_comultiplication(A)
    field = A.field
    for k in range(A.dim):
        left: Dict[Tuple[int, int, int], object] = {}
        right: Dict[Tuple[int, int, int], object] = {}
        for m, l, c in comult[k]:
            for i, j, c2 in comult[m]:
                left[(i, j, l)] = left.get((i, j, l), field.zero) + c * c2
            for i, j, c2 in comult[l]:
                right[(m, i, j)] = right.get((m, i, j), field.zero) + c * c2
        keys = set(left) | set(right)
        if any(left.get(key, field.zero) != right.get(key, field.zero) for key in keys):
            return False
    return True


def counit_holds(A: Algebra) -> bool:
    comult = dual_comultiplication(A)
    eps = counit(A)
    field = A.field
    for k in range(A.dim):
        left = [field.zero] * A.dim
        right = [field.zero] * A.dim
        for i, j, c in comult[k]:
            left[j] += eps[i] * c
            right[i] += eps[j] * c
        expected = list(A.basis(k))
        if left != expected or right != expected:
            return False
    return True


# --- Finite fields ---


def elements_fp(A: Algebra):
    """All elements of A over F_p, in lexicographic coordinate order."""
    if not A.field.is_finite:
        raise ValidationError("element enumeration needs a prime field")
    return itertools.product(A.field.elements(), repeat=A.dim)


def apply_linear(phi: Sequence[Element], x: Element, field: Field) -> Element:
    """Linear map given by basis images phi[i]."""
    result = [field.zero] * len(phi[0])
    for xi, image in zip(x, phi):
        if xi != field.zero:
            for k, v in enumerate(image):
                result[k] += xi * v
    return tuple(result)


def is_isomorphic_fp(A: Algebra, B: Algebra) -> Optional[List[Element]]:
    """
    Searches for a unital algebra isomorphism A -> B over F_p by backtracking over basis images.

    Returns:
        The basis images of an isomorphism, or None.

    Raises:
        ComputationError: If p^(d^2) exceeds PGL_SEARCH_LIMIT.
    """
    if A.field != B.field or not A.field.is_finite:
        raise ValidationError("isomorphism search needs two algebras over the same prime field")
    if A.dim != B.dim:
        return None
    d, p, field = A.dim, A.field.characteristic, A.field
    if p ** (d * d) > PGL_SEARCH_LIMIT:
        raise ComputationError(f"isomorphism search space p^(d^2) = {p ** (d * d)} exceeds {PGL_SEARCH_LIMIT}")
    candidates = [tuple(v) for v in itertools.product(field.elements(), repeat=d)]
    products = {(i, j): product_of(A, A.basis(i), A.basis(j)) for i in range(d) for j in range(d)}

    def consistent(images: List[Element]) -> bool:
        n = len(images)
        for (i, j), value in products.items():
            if max(i, j) >= n:
                continue
            if any(value[k] != field.zero for k in range(n, d)):
                continue
            lhs = apply_linear(images, value[:n], field)
            if lhs != product_of(B, images[i], images[j]):
                return False
        return True

    def search(images: List[Element]) -> Optional[List[Element]]:
        if len(images) == d:
            if Matrix(field, d, d, tuple(zip(*images))).rank() != d:
                return None
            if apply_linear(images, A.unit, field) != B.unit:
                return None
            return list(images)
        for candidate in candidates:
            images.append(candidate)
            if consistent(images):
                found = search(images)
                if found is not None:
                    return found
            images.pop()
        return None

    result = search([])
    logging.debug(f"Isomorphism search {A.name or 'A'} -> {B.name or 'B'}: {'found' if result else 'none'}")
    return result
