"""
Invariants of the extended convolution product on P(A).

The Grothendieck ring in the basis of simples, invertible objects and their counts over F_p, the
Balmer primes, the rescaling of projective monoid homomorphisms and the skyscraper multiplication
tables used to tell algebras apart.
"""

from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

from .algebra import Algebra, apply_linear, is_invertible, product_algebra, product_of
from .constants import PGL_SEARCH_LIMIT, PIC_ENUMERATION_LIMIT
from .error_handling import ComputationError, ProjectiveHomomorphismError, ValidationError
from .linalg import RATIONALS, Field, Matrix, euler_characteristic
from .quiver import (
    QuiverRep,
    WeightQuiver,
    build_algebra_quiver,
    cohomology_rep,
    concentrated_degree,
    hom_space_dim,
    quiver_tensor,
    random_rep,
    simple,
    skyscraper_rep,
    unit_rep,
)
from .sheaves import identify_skyscraper
from .task_service import get_task_service
from .types import CheckResult

Element = Tuple
DECOMPOSABLE = "decomposable"


# --- Grothendieck ring ---


@dataclass(frozen=True)
class K0Class:
    """Coordinates in the basis v_i = [S_i]; the product is coordinatewise."""

    coordinates: Tuple[int, ...]

    def __add__(self, other: "K0Class") -> "K0Class":
        return K0Class(tuple(a + b for a, b in zip(self.coordinates, other.coordinates)))

    def __mul__(self, other: "K0Class") -> "K0Class":
        return K0Class(tuple(a * b for a, b in zip(self.coordinates, other.coordinates)))

    @classmethod
    def basis(cls, d: int, i: int) -> "K0Class":
        return cls(tuple(1 if j == i else 0 for j in range(d)))

    @classmethod
    def unit(cls, d: int) -> "K0Class":
        return cls(tuple(1 for _ in range(d)))


def class_of(V: QuiverRep) -> K0Class:
    """Euler characteristic of the cohomology at each vertex, vertices in quiver order."""
    cohomology = V.cohomology()
    return K0Class(tuple(euler_characteristic(cohomology[v]) for v in V.quiver.vertices))


def k0_multiplication_table(d: int) -> List[List[K0Class]]:
    """table[i][j] = v_i * v_j."""
    if d < 1:
        raise ValidationError("K0 tables need d >= 1")
    return [[K0Class.basis(d, i) * K0Class.basis(d, j) for j in range(d)] for i in range(d)]


def table_is_idempotent_diagonal(table: List[List[K0Class]]) -> bool:
    d = len(table)
    zero = K0Class((0,) * d)
    return all(table[i][j] == (K0Class.basis(d, i) if i == j else zero) for i in range(d) for j in range(d))


def check_k0_multiplicative(q: WeightQuiver, rng, pairs: int) -> CheckResult:
    """class_of(V (x) W) = class_of(V) * class_of(W) on random pairs."""
    for trial in range(pairs):
        V, W = random_rep(q, rng), random_rep(q, rng)
        if class_of(quiver_tensor(V, W, check=False)) != class_of(V) * class_of(W):
            return CheckResult("k0 multiplicative", False, f"pair {trial}")
    return CheckResult("k0 multiplicative", True)


# --- Picard group ---


def _normalized(field_: Field, x: Sequence) -> Element:
    lead = next(v for v in x if v != field_.zero)
    return tuple(v / lead for v in x)


def normalize_pic_arrows(field_: Field, arrows: Sequence[Sequence]) -> Tuple[Element, ...]:
    """Divides every arrow by one common scalar, the first nonzero coordinate of the first arrow."""
    if not arrows:
        return ()
    lead = next(v for v in arrows[0] if v != field_.zero)
    return tuple(tuple(v / lead for v in a) for a in arrows)


@dataclass(frozen=True)
class PicElement:
    """An invertible object V[shift] whose consecutive arrows act by invertible elements of A."""

    shift: int
    arrows: Tuple[Element, ...]

    def multiply(self, A: Algebra, other: "PicElement") -> "PicElement":
        """Shifts add; arrow elements multiply in A, up to one global scalar."""
        products = [product_of(A, a, b) for a, b in zip(self.arrows, other.arrows)]
        return PicElement(self.shift + other.shift, normalize_pic_arrows(A.field, products))

    def to_output(self, field_: Field) -> Dict:
        return {"shift": self.shift, "arrows": [[field_.to_output(x) for x in a] for a in self.arrows]}


def pic_classify(V: QuiverRep) -> Optional[PicElement]:
    """
    Recognizes invertible objects: one-dimensional cohomology at every vertex in a common degree,
    with every consecutive arrow system an invertible element of A. The arrow tuple is stored
    modulo a single global scalar, matching (A^x)^(d-1) / k^x.
    """
    q = V.quiver
    if q.algebra is None:
        raise ValidationError("Picard classification needs an algebra quiver")
    small = cohomology_rep(V)
    if small is None:
        return None
    degree = concentrated_degree(small)
    if any(small.values[v].dim(degree) != 1 for v in q.vertices):
        return None
    A = q.algebra
    vertices = sorted(q.vertices)
    arrows = []
    for a, b in zip(vertices, vertices[1:]):
        if b[0] - a[0] != 1:
            return None
        element = []
        for k in range(q.variables):
            m = tuple(1 if j == k else 0 for j in range(q.variables))
            element.append(small.act(a, b, m).component(degree)[0, 0])
        if not is_invertible(A, element):
            return None
        arrows.append(element)
    return PicElement(-degree, normalize_pic_arrows(A.field, arrows))


def count_units_fp(A: Algebra) -> int:
    """|A^x| by enumerating A over F_p, split by leading coordinate across the task service."""
    p, d = A.field.characteristic, A.dim
    if not A.field.is_finite:
        raise ValidationError("unit counts need an algebra over a prime field")
    if p**d > PIC_ENUMERATION_LIMIT:
        raise ComputationError(f"enumerating {p}^{d} elements exceeds the limit {PIC_ENUMERATION_LIMIT}")
    elements = A.field.elements()

    def count(lead) -> int:
        return sum(1 for rest in itertools.product(elements, repeat=d - 1) if is_invertible(A, (lead, *rest)))

    return sum(get_task_service().map_ordered(count, elements))


@dataclass(frozen=True)
class PicGroupSummary:
    algebra: str
    prime: int
    dim: int
    units: int
    order: int


def pic_group_order_fp(A: Algebra) -> int:
    """|(A^x)^(d-1) / k^x|; the shift factor Z is left out."""
    return pic_group_structure_fp(A).order


def pic_group_structure_fp(A: Algebra) -> PicGroupSummary:
    units = count_units_fp(A)
    p = A.field.characteristic
    order = units ** (A.dim - 1) // (p - 1) if A.dim > 1 else 1
    logging.info(f"Pic of {A.name or 'A'} over F_{p}: |A^x| = {units}, torsion order {order}")
    return PicGroupSummary(A.name, p, A.dim, units, order)


# --- Balmer spectrum ---


@dataclass(frozen=True)
class BalmerPrime:
    """The prime generated by every simple except S_index."""

    index: int
    generators: Tuple[str, ...] = field(default_factory=tuple)


def balmer_primes(d: int) -> List[BalmerPrime]:
    """One prime per simple; there are no specializations between them."""
    if d < 1:
        raise ValidationError("Balmer primes need d >= 1")
    return [BalmerPrime(i, tuple(f"S_{j}" for j in range(d) if j != i)) for i in range(d)]


def verify_balmer_hypotheses(d: int, field_: Field = RATIONALS) -> List[CheckResult]:
    """
    S_i (x) S_i = S_i, S_i (x) S_j = 0 for i != j, End(S_i) = k and Hom(S_i, S_j) = 0, on the
    quiver of P(k^d) (the answer depends only on d).
    """
    q = build_algebra_quiver(product_algebra(d, field_), d)
    simples = [simple(q, (i,)) for i in range(d)]
    results = []
    for i, j in itertools.product(range(d), repeat=2):
        product = quiver_tensor(simples[i], simples[j])
        if i == j:
            ok = product.same_as(simples[i])
            results.append(CheckResult(f"S_{i} (x) S_{i} = S_{i}", ok, None if ok else str(product.cohomology())))
        else:
            ok = all(not dims for dims in product.cohomology().values())
            results.append(CheckResult(f"S_{i} (x) S_{j} = 0", ok, None if ok else str(product.cohomology())))
        hom = hom_space_dim(simples[i], simples[j])
        expected = 1 if i == j else 0
        ok = hom == expected
        results.append(CheckResult(f"dim Hom(S_{i}, S_{j}) = {expected}", ok, None if ok else str(hom)))
    return results


# --- Projective monoid homomorphisms ---


def rescale_monoid_hom(A: Algebra, B: Algebra, phi: Matrix) -> object:
    """
    The scalar c making c*phi multiplicative, given phi (column i = phi(e_i)).

    Solves phi(mu_A(e_i, e_j)) = c mu_B(phi e_i, phi e_j) on the first pair with a nonzero right
    side, then verifies c*phi on every basis pair.

    Raises:
        ValidationError: If phi has the wrong shape, is not invertible or the fields differ.
        ProjectiveHomomorphismError: If no such c exists; carries the failing pair (i, j).
    """
    if A.field != B.field or phi.field != A.field:
        raise ValidationError("algebras and matrix must share the field")
    d = A.dim
    if (phi.rows, phi.cols) != (B.dim, d) or B.dim != d:
        raise ValidationError(f"phi must be a {d}x{d} matrix")
    if phi.rank() != d:
        raise ValidationError("phi is not invertible")
    field_ = A.field
    images = [tuple(phi.column_vector(i).entries[k][0] for k in range(d)) for i in range(d)]
    pairs = list(itertools.product(range(d), repeat=2))
    c = None
    for i, j in pairs:
        lhs = apply_linear(images, product_of(A, A.basis(i), A.basis(j)), field_)
        rhs = product_of(B, images[i], images[j])
        k = next((k for k, x in enumerate(rhs) if x != field_.zero), None)
        if k is None:
            continue
        c = lhs[k] / rhs[k]
        break
    if c is None or c == field_.zero:
        raise ProjectiveHomomorphismError("phi is not a projective monoid homomorphism", (0, 0))
    scaled = [tuple(c * x for x in image) for image in images]
    for i, j in pairs:
        lhs = apply_linear(scaled, product_of(A, A.basis(i), A.basis(j)), field_)
        if lhs != product_of(B, scaled[i], scaled[j]):
            raise ProjectiveHomomorphismError(
                f"c*phi fails to be multiplicative on (e_{i}, e_{j}) for c = {field_.to_output(c)}", (i, j)
            )
    return c


# --- Skyscraper tables ---


def projective_points_fp(field_: Field, d: int) -> List[Element]:
    """Points of P^(d-1)(F_p), scaled so the first nonzero coordinate is 1."""
    points = []
    for x in itertools.product(field_.elements(), repeat=d):
        if any(v != field_.zero for v in x) and next(v for v in x if v != field_.zero) == field_.one:
            points.append(tuple(x))
    return points


@dataclass(frozen=True, eq=False)
class SkyscraperTable:
    """entries[(i, j)] is the point of k(a_i) * k(a_j), or DECOMPOSABLE."""

    algebra: Algebra
    points: List[Element]
    entries: Dict[Tuple[int, int], object]

    def to_output(self) -> Dict:
        out = self.algebra.field.to_output
        return {
            "points": [[out(x) for x in p] for p in self.points],
            "entries": [
                {
                    "left": i,
                    "right": j,
                    "product": value if value == DECOMPOSABLE else [out(x) for x in value],
                }
                for (i, j), value in sorted(self.entries.items())
            ],
        }


def skyscraper_table(A: Algebra, points: Sequence[Sequence]) -> SkyscraperTable:
    """EC products of skyscrapers on P(A), read back through the dictionary."""
    q = build_algebra_quiver(A, A.dim)
    points = [_normalized(A.field, [A.field(x) for x in p]) for p in points]
    reps = [skyscraper_rep(q, p) for p in points]
    pairs = list(itertools.product(range(len(points)), repeat=2))

    def entry(pair):
        point = identify_skyscraper(quiver_tensor(reps[pair[0]], reps[pair[1]], check=False))
        return DECOMPOSABLE if point is None else point

    entries = dict(zip(pairs, get_task_service().map_ordered(entry, pairs)))
    logging.debug(f"Skyscraper table of {A.name or 'A'}: {len(points)} points")
    return SkyscraperTable(A, list(points), entries)


def skyscraper_tables_equivalent(A: Algebra, B: Algebra) -> Optional[Matrix]:
    """
    Searches PGL_d(F_p) for g carrying the full skyscraper table of A onto that of B:
    g(a * b) = g(a) * g(b) as points, with decomposable entries preserved.
    """
    if A.field != B.field or not A.field.is_finite:
        raise ValidationError("table comparison needs two algebras over the same prime field")
    if A.dim != B.dim:
        return None
    field_, d = A.field, A.dim
    p = field_.characteristic
    if p ** (d * d) > PGL_SEARCH_LIMIT:
        raise ComputationError(f"search space p^(d^2) = {p ** (d * d)} exceeds {PGL_SEARCH_LIMIT}")
    points = projective_points_fp(field_, d)
    table_a = skyscraper_table(A, points)
    table_b = skyscraper_table(B, points)
    index = {tuple(field_.key(x) for x in point): i for i, point in enumerate(points)}

    def image(g: Matrix, point: Element) -> int:
        moved = _normalized(field_, [sum((g[r, c] * point[c] for c in range(d)), field_.zero) for r in range(d)])
        return index[tuple(field_.key(x) for x in moved)]

    def carries(g: Matrix) -> bool:
        moved = [image(g, point) for point in points]
        for (i, j), value in table_a.entries.items():
            target = table_b.entries[(moved[i], moved[j])]
            if value == DECOMPOSABLE or target == DECOMPOSABLE:
                if value != target:
                    return False
            elif image(g, value) != index[tuple(field_.key(x) for x in target)]:
                return False
        return True

    for leading in range(d * d):
        # Representatives of PGL: the first nonzero entry (row-major) is 1.
        for rest in itertools.product(field_.elements(), repeat=d * d - leading - 1):
            flat = [field_.zero] * leading + [field_.one, *rest]
            g = Matrix(field_, d, d, tuple(tuple(flat[r * d : (r + 1) * d]) for r in range(d)))
            if g.rank() == d and carries(g):
                return g
    return None


def unit_pic_element(A: Algebra) -> PicElement:
    """The class of the tensor unit k(1_A)."""
    q = build_algebra_quiver(A, A.dim)
    return pic_classify(unit_rep(q))
