"""
Exact linear algebra over the rationals and prime fields.

Scalars are elements of a sympy polynomial domain (QQ or GF(p)); rank, kernels and
row reduction go through DomainMatrix. Complexes use cohomological grading with
differentials d^k: C^k -> C^(k+1) and the shift convention C[n]^k = C^(k+n).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Dict, Iterable, List, Mapping, Sequence, Tuple

from sympy import isprime
from sympy.polys.domains import GF, QQ
from sympy.polys.matrices import DomainMatrix

from .error_handling import FieldMismatchError, InternalConsistencyError, ValidationError
from .types import FieldKind
from .utils import parse_rational

SPARSE_THRESHOLD = 400  # entries; DomainMatrix switches to its sparse format at this size


@lru_cache(maxsize=None)
def _domain(characteristic: int):
    if characteristic == 0:
        return QQ
    return GF(characteristic, symmetric=False)


@dataclass(frozen=True)
class Field:
    """The ground field: the rationals (characteristic 0) or F_p."""

    characteristic: int = 0

    def __post_init__(self):
        if self.characteristic != 0 and not isprime(self.characteristic):
            raise ValidationError(f"field characteristic {self.characteristic} is not prime")

    @classmethod
    def from_name(cls, name: str) -> "Field":
        """Builds a field from 'q' or 'fp:<p>'."""
        text = name.strip().lower()
        kind, _, modulus = text.partition(":")
        if kind == FieldKind.RATIONALS.value and not modulus:
            return cls(0)
        if kind == FieldKind.PRIME.value and modulus.isdigit():
            return cls(int(modulus))
        raise ValidationError(f"unknown field '{name}', expected 'q' or 'fp:<prime>'")

    @property
    def kind(self) -> FieldKind:
        return FieldKind.RATIONALS if self.characteristic == 0 else FieldKind.PRIME

    @property
    def name(self) -> str:
        if self.kind == FieldKind.RATIONALS:
            return FieldKind.RATIONALS.value
        return f"{FieldKind.PRIME.value}:{self.characteristic}"

    @property
    def domain(self):
        return _domain(self.characteristic)

    @property
    def is_finite(self) -> bool:
        return self.characteristic != 0

    @property
    def zero(self):
        return self.domain.zero

    @property
    def one(self):
        return self.domain.one

    def __call__(self, value):
        """Converts an int, Fraction, rational string or field element into this field."""
        K = self.domain
        if not isinstance(value, (int, str, Fraction)):
            # Already a domain element (or a sympy number).
            try:
                return K.convert(value)
            except Exception as e:
                raise FieldMismatchError(f"cannot convert {value!r} into {self.name}") from e
        try:
            q = parse_rational(value)
        except ValueError as e:
            raise ValidationError(str(e)) from e
        if self.characteristic == 0:
            return K(q.numerator, q.denominator)
        if q.denominator % self.characteristic == 0:
            raise ValidationError(f"{value} has no value modulo {self.characteristic}")
        return K(q.numerator) / K(q.denominator)

    def to_output(self, x):
        """Returns an int or a 'p/q' string, suitable for printing and JSON."""
        if self.characteristic == 0:
            q = Fraction(int(x.numerator), int(x.denominator))
            return q.numerator if q.denominator == 1 else f"{q.numerator}/{q.denominator}"
        return int(self.domain.to_int(x))

    def key(self, x):
        """A hashable, canonical stand-in for a field element."""
        if self.characteristic == 0:
            return Fraction(int(x.numerator), int(x.denominator))
        return int(self.domain.to_int(x))

    def elements(self) -> List:
        """All elements of a finite field, in the order 0, 1, ..., p-1."""
        if not self.is_finite:
            raise ValidationError("the rationals cannot be enumerated")
        return [self(i) for i in range(self.characteristic)]

    def random_element(self, rng, bound: int = 3):
        """A random element: residues for F_p, small fractions for Q."""
        if self.is_finite:
            return self(rng.randrange(self.characteristic))
        return self(Fraction(rng.randint(-bound, bound), rng.randint(1, 2)))


RATIONALS = Field(0)


def _check_same_field(*fields: Field):
    first = fields[0]
    for other in fields[1:]:
        if other != first:
            raise FieldMismatchError(f"cannot combine values over {first.name} and {other.name}")


@dataclass(frozen=True, eq=False)
class Matrix:
    """A dense matrix of field elements."""

    field: Field
    rows: int
    cols: int
    entries: Tuple[Tuple, ...]

    def __post_init__(self):
        if len(self.entries) != self.rows or any(len(row) != self.cols for row in self.entries):
            raise InternalConsistencyError(f"matrix entries do not form a {self.rows}x{self.cols} grid")

    # --- Construction ---
    @classmethod
    def from_rows(cls, field: Field, rows: Sequence[Sequence], cols: int | None = None) -> "Matrix":
        """Builds a matrix from nested sequences of ints, rationals, strings or field elements."""
        entries = tuple(tuple(field(x) for x in row) for row in rows)
        ncols = cols if cols is not None else (len(entries[0]) if entries else 0)
        return cls(field, len(entries), ncols, entries)

    @classmethod
    def zeros(cls, field: Field, rows: int, cols: int) -> "Matrix":
        z = field.zero
        return cls(field, rows, cols, tuple(tuple(z for _ in range(cols)) for _ in range(rows)))

    @classmethod
    def identity(cls, field: Field, n: int) -> "Matrix":
        z, o = field.zero, field.one
        return cls(field, n, n, tuple(tuple(o if i == j else z for j in range(n)) for i in range(n)))

    @classmethod
    def column(cls, field: Field, values: Sequence) -> "Matrix":
        return cls(field, len(values), 1, tuple((field(v),) for v in values))

    @classmethod
    def from_columns(cls, field: Field, rows: int, columns: Sequence["Matrix"]) -> "Matrix":
        entries = tuple(tuple(col.entries[i][0] for col in columns) for i in range(rows))
        return cls(field, rows, len(columns), entries)

    @classmethod
    def from_domain_matrix(cls, field: Field, dm: DomainMatrix) -> "Matrix":
        rows, cols = dm.shape
        if rows == 0 or cols == 0:
            return cls.zeros(field, rows, cols)
        return cls(field, rows, cols, tuple(tuple(row) for row in dm.to_dense().to_list()))

    @classmethod
    def block(
        cls, field: Field, row_dims: Sequence[int], col_dims: Sequence[int], blocks: Mapping[Tuple[int, int], "Matrix"]
    ) -> "Matrix":
        """Assembles a block matrix; missing blocks are zero."""
        grid = [[field.zero] * sum(col_dims) for _ in range(sum(row_dims))]
        row_offsets = list(itertools.accumulate([0, *row_dims]))
        col_offsets = list(itertools.accumulate([0, *col_dims]))
        for (bi, bj), m in blocks.items():
            if (m.rows, m.cols) != (row_dims[bi], col_dims[bj]):
                raise InternalConsistencyError(f"block ({bi},{bj}) has shape {m.rows}x{m.cols}")
            r0, c0 = row_offsets[bi], col_offsets[bj]
            for i, row in enumerate(m.entries):
                grid[r0 + i][c0 : c0 + m.cols] = row
        return cls(field, sum(row_dims), sum(col_dims), tuple(tuple(row) for row in grid))

    # --- Conversion ---
    def to_domain_matrix(self, sparse: bool | None = None) -> DomainMatrix:
        """Converts to a DomainMatrix; large matrices use the sparse format unless told otherwise."""
        if sparse is None:
            sparse = self.rows * self.cols >= SPARSE_THRESHOLD
        if not sparse:
            return DomainMatrix([list(row) for row in self.entries], (self.rows, self.cols), self.field.domain)
        z = self.field.zero
        nonzero = {}
        for i, row in enumerate(self.entries):
            kept = {j: x for j, x in enumerate(row) if x != z}
            if kept:
                nonzero[i] = kept
        return DomainMatrix(nonzero, (self.rows, self.cols), self.field.domain)

    def to_output(self) -> List[List]:
        return [[self.field.to_output(x) for x in row] for row in self.entries]

    def column_vector(self, j: int) -> "Matrix":
        return Matrix(self.field, self.rows, 1, tuple((row[j],) for row in self.entries))

    def __getitem__(self, index: Tuple[int, int]):
        i, j = index
        return self.entries[i][j]

    # --- Arithmetic ---
    def __eq__(self, other) -> bool:
        if not isinstance(other, Matrix):
            return NotImplemented
        return (
            self.field == other.field
            and self.rows == other.rows
            and self.cols == other.cols
            and all(a == b for ra, rb in zip(self.entries, other.entries) for a, b in zip(ra, rb))
        )

    def __hash__(self):
        return hash((self.field, self.rows, self.cols, tuple(self.field.key(x) for row in self.entries for x in row)))

    def __add__(self, other: "Matrix") -> "Matrix":
        _check_same_field(self.field, other.field)
        if (self.rows, self.cols) != (other.rows, other.cols):
            raise InternalConsistencyError(f"cannot add {self.rows}x{self.cols} and {other.rows}x{other.cols}")
        entries = tuple(tuple(a + b for a, b in zip(ra, rb)) for ra, rb in zip(self.entries, other.entries))
        return Matrix(self.field, self.rows, self.cols, entries)

    def __neg__(self) -> "Matrix":
        return Matrix(self.field, self.rows, self.cols, tuple(tuple(-a for a in row) for row in self.entries))

    def __sub__(self, other: "Matrix") -> "Matrix":
        return self + (-other)

    def scale(self, scalar) -> "Matrix":
        s = self.field(scalar)
        return Matrix(self.field, self.rows, self.cols, tuple(tuple(s * a for a in row) for row in self.entries))

    def __matmul__(self, other: "Matrix") -> "Matrix":
        _check_same_field(self.field, other.field)
        if self.cols != other.rows:
            raise InternalConsistencyError(f"cannot multiply {self.rows}x{self.cols} by {other.rows}x{other.cols}")
        if self.rows == 0 or other.cols == 0 or self.cols == 0:
            return Matrix.zeros(self.field, self.rows, other.cols)
        sparse = max(self.rows * self.cols, other.rows * other.cols) >= SPARSE_THRESHOLD
        product = self.to_domain_matrix(sparse) * other.to_domain_matrix(sparse)
        return Matrix.from_domain_matrix(self.field, product)

    def transpose(self) -> "Matrix":
        if self.rows == 0:
            return Matrix(self.field, self.cols, 0, tuple(() for _ in range(self.cols)))
        return Matrix(self.field, self.cols, self.rows, tuple(zip(*self.entries)))

    def kron(self, other: "Matrix") -> "Matrix":
        """Kronecker product; row (i, k) is at index i * other.rows + k."""
        _check_same_field(self.field, other.field)
        if not (self.rows and other.rows):
            return Matrix.zeros(self.field, self.rows * other.rows, self.cols * other.cols)
        # Column (j, l) lands at j * other.cols + l.
        entries = tuple(tuple(a * b for a in ra for b in rb) for ra in self.entries for rb in other.entries)
        return Matrix(self.field, self.rows * other.rows, self.cols * other.cols, entries)

    # --- Predicates and reductions ---
    def is_zero(self) -> bool:
        return all(x == self.field.zero for row in self.entries for x in row)

    def rank(self) -> int:
        if self.rows == 0 or self.cols == 0:
            return 0
        return self.to_domain_matrix().rank()

    def det(self):
        if self.rows != self.cols:
            raise InternalConsistencyError(f"determinant of a non-square {self.rows}x{self.cols} matrix")
        if self.rows == 0:
            return self.field.one
        return self.to_domain_matrix(sparse=False).det()

    def inverse(self) -> "Matrix":
        if self.rows != self.cols or self.rank() != self.rows:
            raise InternalConsistencyError("matrix is not invertible")
        n = self.rows
        if n == 0:
            return self
        reduced, _ = self.hstack(Matrix.identity(self.field, n)).rref()
        return reduced.submatrix(range(n), range(n, 2 * n))

    def kernel(self) -> List["Matrix"]:
        """Basis of the kernel, as column vectors."""
        if self.cols == 0:
            return []
        if self.rows == 0:
            return [Matrix.identity(self.field, self.cols).column_vector(j) for j in range(self.cols)]
        basis = self.to_domain_matrix().nullspace().to_dense().to_list()
        return [Matrix.column(self.field, list(row)) for row in basis if any(x != self.field.zero for x in row)]

    def rref(self) -> Tuple["Matrix", Tuple[int, ...]]:
        if self.rows == 0 or self.cols == 0:
            return self, ()
        reduced, pivots = self.to_domain_matrix().rref()
        return Matrix.from_domain_matrix(self.field, reduced), tuple(pivots)

    def hstack(self, other: "Matrix") -> "Matrix":
        _check_same_field(self.field, other.field)
        if self.rows != other.rows:
            raise InternalConsistencyError("hstack needs equal row counts")
        entries = tuple(ra + rb for ra, rb in zip(self.entries, other.entries))
        return Matrix(self.field, self.rows, self.cols + other.cols, entries)

    def submatrix(self, rows: Sequence[int], cols: Sequence[int]) -> "Matrix":
        entries = tuple(tuple(self.entries[i][j] for j in cols) for i in rows)
        return Matrix(self.field, len(rows), len(cols), entries)


def rank_and_kernel(m: Matrix) -> Tuple[int, List[Matrix]]:
    """Rank of m and a basis of its kernel as column vectors; rank + len(kernel) == m.cols."""
    rank = m.rank()
    kernel = m.kernel()
    if rank + len(kernel) != m.cols:
        raise InternalConsistencyError(f"rank-nullity failed: {rank} + {len(kernel)} != {m.cols}")
    return rank, kernel


def solve_in_span(basis: Matrix, targets: Matrix) -> Matrix:
    """
    Returns X with basis @ X == targets, for a basis with independent columns.

    Raises:
        InternalConsistencyError: If some target column is not in the column span.
    """
    k = basis.cols
    if targets.cols == 0:
        return Matrix.zeros(basis.field, k, 0)
    if k == 0:
        if not targets.is_zero():
            raise InternalConsistencyError("vector is not in the span of an empty basis")
        return Matrix.zeros(basis.field, 0, targets.cols)
    reduced, pivots = basis.hstack(targets).rref()
    if pivots[:k] != tuple(range(k)) or any(p >= k for p in pivots):
        raise InternalConsistencyError("vector is not in the span of the basis")
    return reduced.submatrix(range(k), range(k, k + targets.cols))


# --- Complexes ---


@dataclass(frozen=True, eq=False)
class CochainComplex:
    """A bounded cochain complex of finite-dimensional vector spaces."""

    field: Field
    dims: Dict[int, int]
    differentials: Dict[int, Matrix] = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "dims", {d: n for d, n in sorted(self.dims.items()) if n > 0})
        kept = {}
        for d, m in sorted(self.differentials.items()):
            if (m.rows, m.cols) != (self.dim(d + 1), self.dim(d)):
                raise InternalConsistencyError(
                    f"differential in degree {d} has shape {m.rows}x{m.cols}, expected {self.dim(d + 1)}x{self.dim(d)}"
                )
            if m.rows and m.cols:
                _check_same_field(self.field, m.field)
                kept[d] = m
        object.__setattr__(self, "differentials", kept)
        for d in kept:
            if d + 1 in kept and not (kept[d + 1] @ kept[d]).is_zero():
                raise InternalConsistencyError(f"d o d != 0 at degree {d}")

    @classmethod
    def zero(cls, field: Field) -> "CochainComplex":
        return cls(field, {})

    @classmethod
    def concentrated(cls, field: Field, degree: int, dim: int) -> "CochainComplex":
        return cls(field, {degree: dim})

    def dim(self, degree: int) -> int:
        return self.dims.get(degree, 0)

    def differential(self, degree: int) -> Matrix:
        m = self.differentials.get(degree)
        return m if m is not None else Matrix.zeros(self.field, self.dim(degree + 1), self.dim(degree))

    @property
    def degrees(self) -> List[int]:
        return list(self.dims)

    @property
    def total_dim(self) -> int:
        return sum(self.dims.values())

    def euler_characteristic(self) -> int:
        return sum((-1) ** (d % 2) * n for d, n in self.dims.items())

    def shift(self, n: int) -> "CochainComplex":
        """C[n]^k = C^(k+n), with differential (-1)^n d."""
        sign = self.field(-1 if n % 2 else 1)
        return CochainComplex(
            self.field,
            {d - n: k for d, k in self.dims.items()},
            {d - n: m.scale(sign) for d, m in self.differentials.items()},
        )

    def same_as(self, other: "CochainComplex") -> bool:
        if self.field != other.field or self.dims != other.dims:
            return False
        degrees = set(self.differentials) | set(other.differentials)
        return all(self.differential(d) == other.differential(d) for d in degrees)


@dataclass(frozen=True, eq=False)
class ChainMap:
    """A degree-0 chain map; components map source^d to target^d."""

    source: CochainComplex
    target: CochainComplex
    components: Dict[int, Matrix] = field(default_factory=dict)

    def __post_init__(self):
        _check_same_field(self.source.field, self.target.field)
        kept = {}
        for d, m in self.components.items():
            if (m.rows, m.cols) != (self.target.dim(d), self.source.dim(d)):
                raise InternalConsistencyError(
                    f"chain map component in degree {d} has shape {m.rows}x{m.cols}, "
                    f"expected {self.target.dim(d)}x{self.source.dim(d)}"
                )
            if m.rows and m.cols:
                kept[d] = m
        object.__setattr__(self, "components", kept)

    @property
    def field(self) -> Field:
        return self.source.field

    def component(self, degree: int) -> Matrix:
        m = self.components.get(degree)
        return m if m is not None else Matrix.zeros(self.field, self.target.dim(degree), self.source.dim(degree))

    def is_chain_map(self) -> bool:
        degrees = set(self.source.dims) | set(self.target.dims)
        for d in sorted(degrees):
            lhs = self.target.differential(d) @ self.component(d)
            rhs = self.component(d + 1) @ self.source.differential(d)
            if lhs != rhs:
                return False
        return True

    def validate(self) -> "ChainMap":
        if not self.is_chain_map():
            raise InternalConsistencyError("map does not commute with the differentials")
        return self

    def is_zero(self) -> bool:
        return all(m.is_zero() for m in self.components.values())

    def __eq__(self, other) -> bool:
        if not isinstance(other, ChainMap):
            return NotImplemented
        if not (self.source.same_as(other.source) and self.target.same_as(other.target)):
            return False
        degrees = set(self.components) | set(other.components)
        return all(self.component(d) == other.component(d) for d in degrees)

    __hash__ = None

    def __add__(self, other: "ChainMap") -> "ChainMap":
        degrees = set(self.components) | set(other.components)
        return ChainMap(self.source, self.target, {d: self.component(d) + other.component(d) for d in degrees})

    def scale(self, scalar) -> "ChainMap":
        return ChainMap(self.source, self.target, {d: m.scale(scalar) for d, m in self.components.items()})

    def compose(self, first: "ChainMap") -> "ChainMap":
        """self o first."""
        components = {d: self.component(d) @ first.component(d) for d in first.components}
        return ChainMap(first.source, self.target, components)

    def shift(self, n: int) -> "ChainMap":
        return ChainMap(self.source.shift(n), self.target.shift(n), {d - n: m for d, m in self.components.items()})

    @classmethod
    def identity(cls, c: CochainComplex) -> "ChainMap":
        return cls(c, c, {d: Matrix.identity(c.field, n) for d, n in c.dims.items()})

    @classmethod
    def zero(cls, source: CochainComplex, target: CochainComplex) -> "ChainMap":
        return cls(source, target, {})


def cohomology_dims(c: CochainComplex) -> Dict[int, int]:
    """dim H^d = dim ker d^d - rank d^(d-1); only nonzero degrees are returned."""
    ranks = {d: m.rank() for d, m in c.differentials.items()}
    result = {}
    for d, n in c.dims.items():
        h = n - ranks.get(d, 0) - ranks.get(d - 1, 0)
        if h < 0:
            raise InternalConsistencyError(f"negative cohomology in degree {d}")
        if h:
            result[d] = h
    return result


def euler_characteristic(dims: Mapping[int, int]) -> int:
    return sum((-1) ** (d % 2) * n for d, n in dims.items())


def direct_sum(field: Field, summands: Sequence[CochainComplex]) -> CochainComplex:
    """Degreewise direct sum, summands stacked in order."""
    for s in summands:
        _check_same_field(field, s.field)
    degrees = sorted({d for s in summands for d in s.dims})
    dims = {d: sum(s.dim(d) for s in summands) for d in degrees}
    differentials = {}
    for d in degrees:
        if dims.get(d + 1, 0) and dims[d]:
            blocks = {(i, i): s.differential(d) for i, s in enumerate(summands)}
            differentials[d] = Matrix.block(
                field, [s.dim(d + 1) for s in summands], [s.dim(d) for s in summands], blocks
            )
    return CochainComplex(field, dims, differentials)


def direct_sum_maps(field: Field, maps: Sequence[ChainMap]) -> ChainMap:
    source = direct_sum(field, [f.source for f in maps])
    target = direct_sum(field, [f.target for f in maps])
    components = {}
    for d in set(source.dims) | set(target.dims):
        blocks = {(i, i): f.component(d) for i, f in enumerate(maps)}
        components[d] = Matrix.block(
            field, [f.target.dim(d) for f in maps], [f.source.dim(d) for f in maps], blocks
        )
    return ChainMap(source, target, components)


def cone(f: ChainMap) -> CochainComplex:
    """cone(f)^d = source^(d+1) + target^d, with d(a, b) = (-d a, f(a) + d b)."""
    a, b = f.source, f.target
    field = a.field
    degrees = sorted({d - 1 for d in a.dims} | set(b.dims))
    dims = {d: a.dim(d + 1) + b.dim(d) for d in degrees}
    differentials = {}
    for d in degrees:
        row_dims = [a.dim(d + 2), b.dim(d + 1)]
        col_dims = [a.dim(d + 1), b.dim(d)]
        if sum(row_dims) and sum(col_dims):
            blocks = {(0, 0): -a.differential(d + 1), (1, 0): f.component(d + 1), (1, 1): b.differential(d)}
            differentials[d] = Matrix.block(field, row_dims, col_dims, blocks)
    return CochainComplex(field, dims, differentials)


def cone_map(f: ChainMap, g: ChainMap, h_source: ChainMap, h_target: ChainMap) -> ChainMap:
    """
    The map cone(f) -> cone(g) induced by a strictly commuting square g o h_source = h_target o f.
    """
    if g.compose(h_source) != h_target.compose(f):
        raise InternalConsistencyError("square does not commute")
    src, tgt = cone(f), cone(g)
    components = {}
    for d in set(src.dims) | set(tgt.dims):
        blocks = {(0, 0): h_source.component(d + 1), (1, 1): h_target.component(d)}
        components[d] = Matrix.block(
            src.field,
            [g.source.dim(d + 1), g.target.dim(d)],
            [f.source.dim(d + 1), f.target.dim(d)],
            blocks,
        )
    return ChainMap(src, tgt, components)


def _tensor_blocks(a: CochainComplex, b: CochainComplex) -> Dict[int, List[Tuple[int, int]]]:
    """For each total degree, the ordered list of (p, q) blocks with a^p (x) b^q nonzero."""
    blocks: Dict[int, List[Tuple[int, int]]] = {}
    for p in a.dims:
        for q in b.dims:
            blocks.setdefault(p + q, []).append((p, q))
    return {d: sorted(v) for d, v in sorted(blocks.items())}


def tensor(a: CochainComplex, b: CochainComplex) -> CochainComplex:
    """
    Tensor product over the field.

    Degree d is the sum of blocks a^p (x) b^q with p + q = d, ordered by p; inside a block
    basis element (i, j) sits at i * dim b^q + j. The differential is d_a (x) 1 + (-1)^p 1 (x) d_b.
    """
    _check_same_field(a.field, b.field)
    field = a.field
    layout = _tensor_blocks(a, b)
    dims = {d: sum(a.dim(p) * b.dim(q) for p, q in blocks) for d, blocks in layout.items()}
    differentials = {}
    minus_one = field(-1)
    for d, source_blocks in layout.items():
        target_blocks = layout.get(d + 1, [])
        if not target_blocks:
            continue
        target_index = {pq: i for i, pq in enumerate(target_blocks)}
        blocks = {}
        for j, (p, q) in enumerate(source_blocks):
            if (p + 1, q) in target_index:
                blocks[(target_index[(p + 1, q)], j)] = a.differential(p).kron(Matrix.identity(field, b.dim(q)))
            if (p, q + 1) in target_index:
                m = Matrix.identity(field, a.dim(p)).kron(b.differential(q))
                blocks[(target_index[(p, q + 1)], j)] = m.scale(minus_one) if p % 2 else m
        differentials[d] = Matrix.block(
            field,
            [a.dim(p) * b.dim(q) for p, q in target_blocks],
            [a.dim(p) * b.dim(q) for p, q in source_blocks],
            blocks,
        )
    return CochainComplex(field, dims, differentials)


def tensor_maps(f: ChainMap, g: ChainMap) -> ChainMap:
    """f (x) g between the tensor products of sources and targets (no signs in degree 0)."""
    source = tensor(f.source, g.source)
    target = tensor(f.target, g.target)
    src_layout = _tensor_blocks(f.source, g.source)
    tgt_layout = _tensor_blocks(f.target, g.target)
    components = {}
    for d in sorted(set(src_layout) | set(tgt_layout)):
        s_blocks = src_layout.get(d, [])
        t_blocks = tgt_layout.get(d, [])
        t_index = {pq: i for i, pq in enumerate(t_blocks)}
        blocks = {}
        for j, pq in enumerate(s_blocks):
            if pq in t_index:
                p, q = pq
                blocks[(t_index[pq], j)] = f.component(p).kron(g.component(q))
        components[d] = Matrix.block(
            source.field,
            [f.target.dim(p) * g.target.dim(q) for p, q in t_blocks],
            [f.source.dim(p) * g.source.dim(q) for p, q in s_blocks],
            blocks,
        )
    return ChainMap(source, target, components)


def basis_labels(c: CochainComplex) -> Dict[int, List[Tuple]]:
    """Labels (degree, index) for the standard basis of a complex."""
    return {d: [(d, i) for i in range(n)] for d, n in c.dims.items()}


def tensor_labels(labels_a: Dict[int, List], labels_b: Dict[int, List]) -> Dict[int, List[Tuple]]:
    """Basis labels of a tensor product, in the order used by tensor()."""
    result: Dict[int, List[Tuple]] = {}
    for p in sorted(labels_a):
        for q in sorted(labels_b):
            result.setdefault(p + q, [])
    for d in result:
        for p in sorted(labels_a):
            q = d - p
            if q in labels_b:
                result[d].extend((la, lb) for la in labels_a[p] for lb in labels_b[q])
    return dict(sorted(result.items()))


def _label_degree(label) -> int:
    if isinstance(label[0], int):
        return label[0]
    return sum(_label_degree(part) for part in label)


def reindexing_map(
    source: CochainComplex, target: CochainComplex, source_labels, target_labels, relabel, sign=None
) -> ChainMap:
    """
    The signed permutation sending source basis label x to target label relabel(x).
    """
    field = source.field
    components = {}
    for d, labels in source_labels.items():
        position = {label: i for i, label in enumerate(target_labels.get(d, []))}
        grid = [[field.zero] * len(labels) for _ in range(target.dim(d))]
        for j, label in enumerate(labels):
            s = sign(label) if sign else 1
            grid[position[relabel(label)]][j] = field(s)
        components[d] = Matrix(field, target.dim(d), len(labels), tuple(tuple(r) for r in grid))
    return ChainMap(source, target, components)


def associator(a: CochainComplex, b: CochainComplex, c: CochainComplex) -> ChainMap:
    """The canonical isomorphism (a (x) b) (x) c -> a (x) (b (x) c)."""
    la, lb, lc = basis_labels(a), basis_labels(b), basis_labels(c)
    left = tensor(tensor(a, b), c)
    right = tensor(a, tensor(b, c))
    return reindexing_map(
        left,
        right,
        tensor_labels(tensor_labels(la, lb), lc),
        tensor_labels(la, tensor_labels(lb, lc)),
        lambda label: (label[0][0], (label[0][1], label[1])),
    )


def braiding(a: CochainComplex, b: CochainComplex) -> ChainMap:
    """The Koszul-signed swap a (x) b -> b (x) a, x (x) y -> (-1)^(|x||y|) y (x) x."""
    la, lb = basis_labels(a), basis_labels(b)
    return reindexing_map(
        tensor(a, b),
        tensor(b, a),
        tensor_labels(la, lb),
        tensor_labels(lb, la),
        lambda label: (label[1], label[0]),
        sign=lambda label: -1 if (_label_degree(label[0]) * _label_degree(label[1])) % 2 else 1,
    )


# --- Cohomology with bases ---


@dataclass(frozen=True, eq=False)
class CohomologyBasis:
    """Cocycle representatives of H^d and a way to read cohomology coordinates."""

    complex: CochainComplex
    degree: int
    image: Matrix  # independent columns spanning im d^(d-1)
    representatives: Matrix  # columns: cocycles projecting to a basis of H^d

    @property
    def dim(self) -> int:
        return self.representatives.cols

    def coordinates(self, cocycles: Matrix) -> Matrix:
        """Cohomology coordinates of the given cocycle columns."""
        basis = self.image.hstack(self.representatives)
        solved = solve_in_span(basis, cocycles)
        return solved.submatrix(range(self.image.cols, basis.cols), range(cocycles.cols))


def _independent_columns(m: Matrix) -> Matrix:
    if m.cols == 0 or m.rows == 0:
        return Matrix.zeros(m.field, m.rows, 0)
    _, pivots = m.rref()
    return m.submatrix(range(m.rows), pivots)


def cohomology_basis(c: CochainComplex, degree: int) -> CohomologyBasis:
    field = c.field
    n = c.dim(degree)
    image = _independent_columns(c.differential(degree - 1))
    kernel = c.differential(degree).kernel() if n else []
    cycles = Matrix.from_columns(field, n, kernel) if kernel else Matrix.zeros(field, n, 0)
    combined = image.hstack(cycles)
    if combined.cols == 0:
        reps = Matrix.zeros(field, n, 0)
    else:
        _, pivots = combined.rref()
        reps = combined.submatrix(range(n), [p for p in pivots if p >= image.cols])
    return CohomologyBasis(c, degree, image, reps)


def cohomology_complex(c: CochainComplex) -> CochainComplex:
    """The cohomology of c as a complex with zero differentials."""
    return CochainComplex(c.field, cohomology_dims(c))


def induced_map(f: ChainMap, degree: int) -> Matrix:
    """The matrix of H^degree(f) in the bases chosen by cohomology_basis."""
    src = cohomology_basis(f.source, degree)
    tgt = cohomology_basis(f.target, degree)
    if src.dim == 0 or tgt.dim == 0:
        return Matrix.zeros(f.field, tgt.dim, src.dim)
    images = f.component(degree) @ src.representatives
    return tgt.coordinates(images)


def induced_chain_map(f: ChainMap) -> ChainMap:
    """H(f) between the cohomology complexes of source and target, in every degree."""
    source, target = cohomology_complex(f.source), cohomology_complex(f.target)
    degrees = set(source.dims) & set(target.dims)
    return ChainMap(source, target, {d: induced_map(f, d) for d in degrees})


def random_matrix(field: Field, rows: int, cols: int, rng) -> Matrix:
    return Matrix(field, rows, cols, tuple(tuple(field.random_element(rng) for _ in range(cols)) for _ in range(rows)))


def random_invertible(field: Field, n: int, rng) -> Matrix:
    """A random invertible n x n matrix (rejection sampling)."""
    while True:
        m = random_matrix(field, n, n, rng)
        if m.rank() == n:
            return m


def random_complex(field: Field, dims: Mapping[int, int], rng) -> CochainComplex:
    """
    A random complex with the given term dimensions.

    Each differential is a random map factoring through a complement of the previous image,
    so d o d = 0 holds by construction.
    """
    degrees = sorted(d for d, n in dims.items() if n > 0)
    differentials: Dict[int, Matrix] = {}
    for d in degrees:
        if dims.get(d + 1, 0) == 0:
            continue
        previous = differentials.get(d - 1)
        n = dims[d]
        if previous is None:
            differentials[d] = random_matrix(field, dims[d + 1], n, rng)
            continue
        # Kill the image of the previous differential: compose with a projection whose kernel contains it.
        image = _independent_columns(previous)
        annihilator = image.transpose().kernel()  # functionals vanishing on the image
        if not annihilator:
            continue
        functionals = Matrix.from_columns(field, n, annihilator).transpose()
        coefficients = random_matrix(field, dims[d + 1], functionals.rows, rng)
        differentials[d] = coefficients @ functionals
    return CochainComplex(field, dict(dims), differentials)


def vector_from(field: Field, values: Iterable) -> Matrix:
    return Matrix.column(field, list(values))
