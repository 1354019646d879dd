"""
Weight quivers and their derived representations.

A weight quiver is a finite set of weights together with the graded pieces of a polynomial ring
in which every variable has a weight: the Cox ring for toric varieties, or Sym(A^v) graded by
total degree for an algebra A. Morphisms chi1 -> chi2 are the monomials of degree chi2 - chi1,
composition adds exponents, and each variable carries a comultiplication (group-like for
monomials, dual to the product for algebras) extended multiplicatively.

A representation assigns a cochain complex to every vertex and, to a monomial m in
Hom(chi1, chi2), a chain map values[chi2] -> values[chi1]. Relations hold strictly.
"""

from __future__ import annotations

import itertools
import logging
import threading
from dataclasses import dataclass, field
from typing import Callable, Dict, Iterable, List, Mapping, Optional, Sequence, Tuple

from .algebra import Algebra, dual_comultiplication
from .constants import ALGEBRA_QUIVER_MAX_DEPTH, RANDOM_REP_MAX_DIM
from .error_handling import ComputationError, FieldMismatchError, InternalConsistencyError, ValidationError
from .linalg import (
    RATIONALS,
    ChainMap,
    CochainComplex,
    Field,
    Matrix,
    associator,
    braiding,
    cohomology_basis,
    cohomology_dims,
    cone,
    cone_map,
    direct_sum,
    direct_sum_maps,
    induced_map,
    random_complex,
    random_invertible,
    tensor,
    tensor_maps,
)
from .toric import CoxGrading, monomials_of_degree
from .types import Exponent, Flavor, Weight
from .utils import format_weight

Arrow = Tuple[Weight, Weight, Exponent]
Polynomial = Dict[Exponent, object]


def _add(a: Sequence[int], b: Sequence[int]) -> Tuple[int, ...]:
    return tuple(x + y for x, y in zip(a, b))


def _sub(a: Sequence[int], b: Sequence[int]) -> Tuple[int, ...]:
    return tuple(x - y for x, y in zip(a, b))


def exponents_of_total_degree(variables: int, degree: int) -> List[Exponent]:
    """All exponent vectors in `variables` variables with the given total degree, lexicographically sorted."""
    if degree < 0:
        return []
    result = []
    for bars in itertools.combinations(range(degree + variables - 1), variables - 1):
        previous = -1
        exponent = []
        for bar in bars:
            exponent.append(bar - previous - 1)
            previous = bar
        exponent.append(degree + variables - 2 - previous)
        result.append(tuple(exponent))
    return sorted(result)


@dataclass(eq=False)
class WeightQuiver:
    """The category on a finite set of weights with morphisms the graded pieces of a weighted polynomial ring."""

    flavor: Flavor
    field: Field
    vertices: Tuple[Weight, ...]
    variable_degrees: Tuple[Weight, ...]
    comult: Dict[int, Tuple[Tuple[int, int, object], ...]]
    counit: Tuple
    hom_basis: Dict[Tuple[Weight, Weight], Tuple[Exponent, ...]] = field(default_factory=dict)
    grading: Optional[CoxGrading] = None
    algebra: Optional[Algebra] = None
    name: str = ""

    def __post_init__(self):
        self._lock = threading.Lock()
        self._monomials: Dict[Weight, Tuple[Exponent, ...]] = {}
        self._coproducts: Dict[Exponent, Tuple[Tuple[Exponent, Exponent, object], ...]] = {}
        if len(set(self.vertices)) != len(self.vertices):
            raise ValidationError("weight quiver vertices must be distinct")
        for a in self.vertices:
            for b in self.vertices:
                if (a, b) not in self.hom_basis:
                    self.hom_basis[(a, b)] = self.monomials(_sub(b, a))
        zero = tuple(0 for _ in self.variable_degrees)
        for v in self.vertices:
            if self.hom_basis[(v, v)] != (zero,):
                raise ValidationError(f"vertex {format_weight(v)} has non-scalar endomorphisms")

    @property
    def variables(self) -> int:
        return len(self.variable_degrees)

    @property
    def weight_rank(self) -> int:
        return len(self.vertices[0]) if self.vertices else len(self.variable_degrees[0])

    def monomials(self, degree: Weight) -> Tuple[Exponent, ...]:
        """Basis of the graded piece of the given degree (sorted exponents)."""
        degree = tuple(degree)
        with self._lock:
            cached = self._monomials.get(degree)
        if cached is not None:
            return cached
        if self.flavor == Flavor.TORIC:
            found = tuple(monomials_of_degree(self.grading, degree))
        else:
            found = tuple(exponents_of_total_degree(self.variables, degree[0]))
        with self._lock:
            self._monomials[degree] = found
        return found

    def hom(self, source: Weight, target: Weight) -> Tuple[Exponent, ...]:
        if (source, target) in self.hom_basis:
            return self.hom_basis[(source, target)]
        return self.monomials(_sub(target, source))

    def degree_of(self, m: Exponent) -> Weight:
        return tuple(sum(e * d[j] for e, d in zip(m, self.variable_degrees)) for j in range(self.weight_rank))

    @staticmethod
    def compose(first: Exponent, second: Exponent) -> Exponent:
        """The composite chi1 -> chi2 -> chi3 of two monomials is their product."""
        return _add(first, second)

    def arrows(self) -> List[Arrow]:
        """All basis morphisms between distinct vertices."""
        return [(a, b, m) for a in self.vertices for b in self.vertices if a != b for m in self.hom_basis[(a, b)]]

    def generators(self) -> List[Arrow]:
        """Arrows that do not factor through a third vertex."""
        result = []
        for a, b, m in self.arrows():
            factors = any(
                _sub(m, m1) in set(self.hom_basis[(c, b)])
                for c in self.vertices
                if c not in (a, b)
                for m1 in self.hom_basis[(a, c)]
            )
            if not factors:
                result.append((a, b, m))
        return result

    def coproduct(self, m: Exponent) -> Tuple[Tuple[Exponent, Exponent, object], ...]:
        """Delta(x^m) = prod_k Delta(x_k)^(m_k), as (left, right, coefficient) terms."""
        with self._lock:
            cached = self._coproducts.get(m)
        if cached is not None:
            return cached
        zero = tuple(0 for _ in range(self.variables))
        terms: Dict[Tuple[Exponent, Exponent], object] = {(zero, zero): self.field.one}
        for k, power in enumerate(m):
            for _ in range(power):
                expanded: Dict[Tuple[Exponent, Exponent], object] = {}
                for (left, right), c in terms.items():
                    for i, j, coefficient in self.comult[k]:
                        key = (_add(left, _unit(self.variables, i)), _add(right, _unit(self.variables, j)))
                        expanded[key] = expanded.get(key, self.field.zero) + c * coefficient
                terms = {key: c for key, c in expanded.items() if c != self.field.zero}
        result = tuple((left, right, c) for (left, right), c in sorted(terms.items(), key=lambda kv: kv[0]))
        with self._lock:
            self._coproducts[m] = result
        return result

    def restrict(self, subset: Iterable[Weight]) -> "WeightQuiver":
        subset = [tuple(w) for w in subset]
        missing = [w for w in subset if w not in self.vertices]
        if missing:
            raise ValidationError(f"weights {[format_weight(w) for w in missing]} are not vertices of the quiver")
        keep = [v for v in self.vertices if v in set(subset)]
        return WeightQuiver(
            flavor=self.flavor,
            field=self.field,
            vertices=tuple(keep),
            variable_degrees=self.variable_degrees,
            comult=self.comult,
            counit=self.counit,
            hom_basis={(a, b): self.hom_basis[(a, b)] for a in keep for b in keep},
            grading=self.grading,
            algebra=self.algebra,
            name=self.name,
        )

    def same_ring(self, other: "WeightQuiver") -> bool:
        return (
            self.flavor == other.flavor
            and self.field == other.field
            and self.variable_degrees == other.variable_degrees
            and self.grading == other.grading
            and self.algebra is other.algebra
        )

    def compatible(self, other: "WeightQuiver") -> bool:
        return self is other or (self.same_ring(other) and self.vertices == other.vertices)


def _unit(n: int, i: int) -> Exponent:
    return tuple(1 if k == i else 0 for k in range(n))


def build_toric_quiver(g: CoxGrading, weights: Sequence[Sequence[int]], field: Field = RATIONALS) -> WeightQuiver:
    """
    The weight quiver of a Cox grading on a finite set of weights, with group-like comultiplication.
    """
    vertices = tuple(tuple(w) for w in weights)
    if not vertices:
        raise ValidationError("a weight quiver needs at least one vertex")
    for w in vertices:
        if len(w) != g.weight_rank:
            raise ValidationError(f"weight {format_weight(w)} has {len(w)} coordinates, expected {g.weight_rank}")
    comult = {k: ((k, k, field.one),) for k in range(g.n)}
    q = WeightQuiver(
        flavor=Flavor.TORIC,
        field=field,
        vertices=vertices,
        variable_degrees=g.grading,
        comult=comult,
        counit=tuple(field.one for _ in range(g.n)),
        grading=g,
    )
    logging.debug(f"Toric quiver on {[format_weight(v) for v in vertices]}: {len(q.arrows())} arrows")
    return q


def build_algebra_quiver(A: Algebra, depth: int) -> WeightQuiver:
    """
    The quiver with vertices 0..depth-1, Hom(i, j) = Sym^(j-i)(A^v) and comultiplication dual to mu_A.
    """
    if depth < 1:
        raise ValidationError("algebra quiver depth must be at least 1")
    if depth > ALGEBRA_QUIVER_MAX_DEPTH:
        raise ComputationError(f"algebra quiver depth {depth} exceeds the limit of {ALGEBRA_QUIVER_MAX_DEPTH}")
    comult = {k: tuple(terms) for k, terms in dual_comultiplication(A).items()}
    return WeightQuiver(
        flavor=Flavor.ALGEBRA,
        field=A.field,
        vertices=tuple((i,) for i in range(depth)),
        variable_degrees=tuple((1,) for _ in range(A.dim)),
        comult=comult,
        counit=A.unit,
        algebra=A,
        name=A.name,
    )


def comult_is_coassociative(q: WeightQuiver) -> bool:
    """(Delta (x) id) Delta = (id (x) Delta) Delta on every variable."""
    zero = q.field.zero
    for k in range(q.variables):
        left: Dict[Tuple[int, int, int], object] = {}
        right: Dict[Tuple[int, int, int], object] = {}
        for a, b, c in q.comult[k]:
            for i, j, c2 in q.comult[a]:
                left[(i, j, b)] = left.get((i, j, b), zero) + c * c2
            for i, j, c2 in q.comult[b]:
                right[(a, i, j)] = right.get((a, i, j), zero) + c * c2
        if any(left.get(key, zero) != right.get(key, zero) for key in set(left) | set(right)):
            return False
    return True


def comult_is_counital(q: WeightQuiver) -> bool:
    zero = q.field.zero
    for k in range(q.variables):
        left = [zero] * q.variables
        right = [zero] * q.variables
        for i, j, c in q.comult[k]:
            left[j] += q.counit[i] * c
            right[i] += q.counit[j] * c
        expected = [q.field.one if i == k else zero for i in range(q.variables)]
        if left != expected or right != expected:
            return False
    return True


def comult_is_cocommutative(q: WeightQuiver) -> bool:
    for k in range(q.variables):
        terms = {(i, j): c for i, j, c in q.comult[k]}
        if any(terms.get((j, i), q.field.zero) != c for (i, j), c in terms.items()):
            return False
    return True


# --- Representations ---


@dataclass(frozen=True)
class Presentation:
    """
    A complex of representables P_w (w a weight), with maps P_ws -> P_wt given by polynomials of
    degree wt - ws. differentials[k][t][s] maps summand s of degree k to summand t of degree k + 1.
    """

    terms: Dict[int, Tuple[Weight, ...]]
    differentials: Dict[int, Tuple[Tuple[Polynomial, ...], ...]] = field(default_factory=dict)

    def weights(self) -> List[Weight]:
        return sorted({w for ws in self.terms.values() for w in ws})


@dataclass(frozen=True, eq=False)
class QuiverRep:
    """A derived representation: a complex per vertex and a chain map per basis arrow (missing means zero)."""

    quiver: WeightQuiver
    values: Dict[Weight, CochainComplex]
    actions: Dict[Arrow, ChainMap] = field(default_factory=dict)
    presentation: Optional[Presentation] = None

    def __post_init__(self):
        for v in self.quiver.vertices:
            if v not in self.values:
                raise InternalConsistencyError(f"representation has no value at vertex {format_weight(v)}")
            if self.values[v].field != self.quiver.field:
                raise FieldMismatchError("representation values and quiver use different fields")
        kept = {}
        for arrow, f in self.actions.items():
            if not f.is_zero():
                kept[arrow] = f
        object.__setattr__(self, "actions", kept)

    @property
    def field(self) -> Field:
        return self.quiver.field

    def value(self, vertex: Weight) -> CochainComplex:
        return self.values[tuple(vertex)]

    def act(self, source: Weight, target: Weight, m: Exponent) -> ChainMap:
        """The chain map values[target] -> values[source] of the arrow m: source -> target."""
        if source == target:
            return ChainMap.identity(self.values[source])
        f = self.actions.get((source, target, m))
        if f is not None:
            return f
        return ChainMap.zero(self.values[target], self.values[source])

    def dims(self) -> Dict[Weight, Dict[int, int]]:
        return {v: dict(self.values[v].dims) for v in self.quiver.vertices}

    def cohomology(self) -> Dict[Weight, Dict[int, int]]:
        return {v: cohomology_dims(self.values[v]) for v in self.quiver.vertices}

    def is_zero_arrow(self) -> bool:
        return not self.actions

    def relation_failures(self) -> List[str]:
        """Arrows whose composite differs from the action of the product monomial."""
        q = self.quiver
        failures = []
        for arrow, f in self.actions.items():
            if not f.is_chain_map():
                failures.append(f"arrow {arrow} is not a chain map")
        for a, b, c in itertools.permutations(q.vertices, 3):
            for m1 in q.hom_basis[(a, b)]:
                for m2 in q.hom_basis[(b, c)]:
                    composite = self.act(a, b, m1).compose(self.act(b, c, m2))
                    if composite != self.act(a, c, q.compose(m1, m2)):
                        failures.append(
                            f"{format_weight(a)}->{format_weight(b)}->{format_weight(c)} via {m1}, {m2}"
                        )
        return failures

    def validate(self) -> "QuiverRep":
        failures = self.relation_failures()
        if failures:
            raise InternalConsistencyError(f"representation violates relations: {failures[0]}")
        return self

    def same_as(self, other: "QuiverRep") -> bool:
        """Equality of values and of every action matrix."""
        if not self.quiver.compatible(other.quiver):
            return False
        if any(not self.values[v].same_as(other.values[v]) for v in self.quiver.vertices):
            return False
        return all(self.act(*arrow) == other.act(*arrow) for arrow in set(self.actions) | set(other.actions))

    def euler_characteristics(self) -> Dict[Weight, int]:
        return {v: self.values[v].euler_characteristic() for v in self.quiver.vertices}


def _check_same_quiver(*reps: QuiverRep):
    first = reps[0].quiver
    for rep in reps[1:]:
        if not first.compatible(rep.quiver):
            raise ValidationError("representations live on different quivers")


def quiver_tensor(V: QuiverRep, W: QuiverRep, check: bool = True) -> QuiverRep:
    """
    Vertexwise tensor product; the arrow m acts by sum c V(m') (x) W(m'') over Delta(m).
    """
    _check_same_quiver(V, W)
    q = V.quiver
    values = {v: tensor(V.values[v], W.values[v]) for v in q.vertices}
    actions = {}
    for a, b, m in q.arrows():
        total = None
        for left, right, c in q.coproduct(m):
            fv = V.act(a, b, left)
            fw = W.act(a, b, right)
            if fv.is_zero() or fw.is_zero():
                continue
            term = tensor_maps(fv, fw).scale(c)
            total = term if total is None else total + term
        if total is not None:
            actions[(a, b, m)] = ChainMap(values[b], values[a], total.components)
    result = QuiverRep(q, values, actions)
    return result.validate() if check else result


def evaluation_rep(q: WeightQuiver, point: Sequence) -> QuiverRep:
    """k in degree 0 everywhere; the monomial x^m acts by prod_k point_k^(m_k)."""
    if len(point) != q.variables:
        raise ValidationError(f"point has {len(point)} coordinates, expected {q.variables}")
    point = [q.field(x) for x in point]
    line = CochainComplex.concentrated(q.field, 0, 1)
    values = {v: line for v in q.vertices}
    actions = {}
    for a, b, m in q.arrows():
        scalar = q.field.one
        for x, e in zip(point, m):
            scalar *= x**e
        if scalar != q.field.zero:
            actions[(a, b, m)] = ChainMap(line, line, {0: Matrix(q.field, 1, 1, ((scalar,),))})
    return QuiverRep(q, values, actions)


def unit_rep(q: WeightQuiver) -> QuiverRep:
    """Toric: every monomial acts by 1. Algebra: alpha acts by alpha(1_A)."""
    return evaluation_rep(q, q.counit)


def skyscraper_rep(q: WeightQuiver, a: Sequence) -> QuiverRep:
    """The skyscraper at an algebra element: alpha acts by alpha(a)."""
    if q.flavor != Flavor.ALGEBRA:
        raise ValidationError("skyscraper representations are defined for algebra quivers")
    element = q.algebra.element(a)
    if q.algebra.is_zero(element):
        raise ValidationError("skyscraper needs a nonzero algebra element")
    return evaluation_rep(q, element)


def simple(q: WeightQuiver, vertex: Weight, shift: int = 0) -> QuiverRep:
    """k[shift] at one vertex, zero elsewhere."""
    vertex = tuple(vertex)
    if vertex not in q.vertices:
        raise ValidationError(f"{format_weight(vertex)} is not a vertex")
    values = {
        v: CochainComplex.concentrated(q.field, -shift, 1) if v == vertex else CochainComplex.zero(q.field)
        for v in q.vertices
    }
    return QuiverRep(q, values)


def zero_rep(q: WeightQuiver) -> QuiverRep:
    return QuiverRep(q, {v: CochainComplex.zero(q.field) for v in q.vertices})


def _poly_coefficients(q: WeightQuiver, p: Polynomial) -> List[Tuple[Exponent, object]]:
    return [(tuple(e), q.field(c)) for e, c in sorted(p.items())]


def representable_complex_rep(q: WeightQuiver, presentation: Presentation) -> QuiverRep:
    """
    The representation of a complex of representables.

    Vertex chi carries, in degree k, the sum over summands P_w of the graded pieces of degree
    w - chi; differentials multiply by the given polynomials and arrows multiply by monomials.
    """
    field_ = q.field
    for k, rows in presentation.differentials.items():
        sources, targets = presentation.terms.get(k, ()), presentation.terms.get(k + 1, ())
        if len(rows) != len(targets) or any(len(row) != len(sources) for row in rows):
            raise ValidationError(f"presentation differential in degree {k} has the wrong shape")
        for t, row in enumerate(rows):
            for s, p in enumerate(row):
                for e in p:
                    if q.degree_of(e) != _sub(targets[t], sources[s]):
                        raise ValidationError(
                            f"monomial {e} in degree {k} has degree {format_weight(q.degree_of(e))}, "
                            f"expected {format_weight(_sub(targets[t], sources[s]))}"
                        )

    def layout(chi: Weight) -> Dict[int, List[Tuple[Exponent, ...]]]:
        return {k: [q.monomials(_sub(w, chi)) for w in ws] for k, ws in presentation.terms.items()}

    values = {}
    layouts = {}
    for chi in q.vertices:
        blocks = layout(chi)
        layouts[chi] = blocks
        dims = {k: sum(len(b) for b in bs) for k, bs in blocks.items()}
        differentials = {}
        for k, rows in presentation.differentials.items():
            source_blocks, target_blocks = blocks.get(k, []), blocks.get(k + 1, [])
            parts = {}
            for t, row in enumerate(rows):
                index = {e: i for i, e in enumerate(target_blocks[t])}
                for s, p in enumerate(row):
                    if not p:
                        continue
                    grid = [[field_.zero] * len(source_blocks[s]) for _ in target_blocks[t]]
                    for col, n in enumerate(source_blocks[s]):
                        for e, c in _poly_coefficients(q, p):
                            grid[index[_add(n, e)]][col] += c
                    entries = tuple(map(tuple, grid))
                    parts[(t, s)] = Matrix(field_, len(target_blocks[t]), len(source_blocks[s]), entries)
            differentials[k] = Matrix.block(
                field_, [len(b) for b in target_blocks], [len(b) for b in source_blocks], parts
            )
        values[chi] = CochainComplex(field_, dims, differentials)

    actions = {}
    for a, b, m in q.arrows():
        components = {}
        for k in presentation.terms:
            source_blocks, target_blocks = layouts[b][k], layouts[a][k]
            parts = {}
            for s, (src, tgt) in enumerate(zip(source_blocks, target_blocks)):
                if not src or not tgt:
                    continue
                index = {e: i for i, e in enumerate(tgt)}
                grid = [[field_.zero] * len(src) for _ in tgt]
                for col, n in enumerate(src):
                    grid[index[_add(n, m)]][col] = field_.one
                parts[(s, s)] = Matrix(field_, len(tgt), len(src), tuple(map(tuple, grid)))
            components[k] = Matrix.block(
                field_, [len(t) for t in target_blocks], [len(s) for s in source_blocks], parts
            )
        actions[(a, b, m)] = ChainMap(values[b], values[a], components)
    return QuiverRep(q, values, actions, presentation)


def line_bundle_rep(q: WeightQuiver, weight: Weight) -> QuiverRep:
    """The graded-module representation chi -> S_(weight - chi) of a single representable."""
    return representable_complex_rep(q, Presentation({0: (tuple(weight),)}))


def representable(q: WeightQuiver, vertex: Weight) -> QuiverRep:
    vertex = tuple(vertex)
    if vertex not in q.vertices:
        raise ValidationError(f"{format_weight(vertex)} is not a vertex")
    return line_bundle_rep(q, vertex)


def shift(V: QuiverRep, n: int) -> QuiverRep:
    """V[n] vertexwise."""
    values = {v: c.shift(n) for v, c in V.values.items()}
    actions = {
        arrow: ChainMap(values[arrow[1]], values[arrow[0]], f.shift(n).components) for arrow, f in V.actions.items()
    }
    return QuiverRep(V.quiver, values, actions)


def direct_sum_reps(reps: Sequence[QuiverRep]) -> QuiverRep:
    _check_same_quiver(*reps)
    q = reps[0].quiver
    values = {v: direct_sum(q.field, [r.values[v] for r in reps]) for v in q.vertices}
    actions = {}
    arrows = sorted({arrow for r in reps for arrow in r.actions})
    for a, b, m in arrows:
        f = direct_sum_maps(q.field, [r.act(a, b, m) for r in reps])
        actions[(a, b, m)] = ChainMap(values[b], values[a], f.components)
    return QuiverRep(q, values, actions)


@dataclass(frozen=True, eq=False)
class RepMorphism:
    """A morphism of representations: a chain map per vertex, natural in every arrow."""

    source: QuiverRep
    target: QuiverRep
    components: Dict[Weight, ChainMap]

    def component(self, vertex: Weight) -> ChainMap:
        f = self.components.get(vertex)
        if f is None:
            return ChainMap.zero(self.source.values[vertex], self.target.values[vertex])
        return f

    def naturality_failures(self) -> List[Arrow]:
        failures = []
        for a, b, m in self.source.quiver.arrows():
            lhs = self.target.act(a, b, m).compose(self.component(b))
            rhs = self.component(a).compose(self.source.act(a, b, m))
            if lhs != rhs:
                failures.append((a, b, m))
        return failures

    def validate(self) -> "RepMorphism":
        _check_same_quiver(self.source, self.target)
        for v in self.source.quiver.vertices:
            self.component(v).validate()
        failures = self.naturality_failures()
        if failures:
            raise InternalConsistencyError(f"morphism is not natural at arrow {failures[0]}")
        return self

    def compose(self, first: "RepMorphism") -> "RepMorphism":
        """self o first."""
        vertices = first.source.quiver.vertices
        components = {v: self.component(v).compose(first.component(v)) for v in vertices}
        return RepMorphism(first.source, self.target, components)

    @classmethod
    def identity(cls, V: QuiverRep) -> "RepMorphism":
        return cls(V, V, {v: ChainMap.identity(c) for v, c in V.values.items()})

    def is_isomorphism(self) -> bool:
        for v in self.source.quiver.vertices:
            f = self.component(v)
            for d in set(f.source.dims) | set(f.target.dims):
                m = f.component(d)
                if m.rows != m.cols or m.rank() != m.rows:
                    return False
        return True


def cone_rep(f: RepMorphism) -> QuiverRep:
    """Vertexwise cone; arrows act through the maps induced on cones."""
    _check_same_quiver(f.source, f.target)
    q = f.source.quiver
    values = {v: cone(f.component(v)) for v in q.vertices}
    actions = {}
    for a, b, m in q.arrows():
        induced = cone_map(f.component(b), f.component(a), f.source.act(a, b, m), f.target.act(a, b, m))
        actions[(a, b, m)] = ChainMap(values[b], values[a], induced.components)
    return QuiverRep(q, values, actions)


def restrict(V: QuiverRep, subset: Iterable[Weight]) -> QuiverRep:
    """Forgets the vertices outside subset and their arrows."""
    small = V.quiver.restrict(subset)
    keep = set(small.vertices)
    values = {v: V.values[v] for v in small.vertices}
    actions = {arrow: f for arrow, f in V.actions.items() if arrow[0] in keep and arrow[1] in keep}
    presentation = V.presentation if V.presentation and set(V.presentation.weights()) <= keep else None
    return QuiverRep(small, values, actions, presentation)


def kan_extend_representables(V: QuiverRep, larger: WeightQuiver) -> QuiverRep:
    """
    Extends a complex of representables on S to the larger quiver, representable by representable.

    Raises:
        ValidationError: If V carries no presentation by representables at vertices of S, or the
            larger quiver does not contain S.
    """
    if V.presentation is None:
        raise ValidationError("representation is not presented by representables")
    outside = [w for w in V.presentation.weights() if w not in V.quiver.vertices]
    if outside:
        raise ValidationError(f"presentation uses weights {[format_weight(w) for w in outside]} outside the vertex set")
    if not V.quiver.same_ring(larger) or not set(V.quiver.vertices) <= set(larger.vertices):
        raise ValidationError("the larger quiver must share the grading and contain every vertex")
    return representable_complex_rep(larger, V.presentation)


def decompose_zero_arrow(V: QuiverRep) -> List[Tuple[Weight, int]]:
    """
    Reads V as a sum of shifted simples S_v[n]; k in degree d at v contributes (v, -d).

    Raises:
        ValidationError: If some arrow acts nonzero.
    """
    if not V.is_zero_arrow():
        raise ValidationError("representation has a nonzero arrow")
    result = []
    for v in V.quiver.vertices:
        for degree, dim in sorted(cohomology_dims(V.values[v]).items()):
            result.extend([(v, -degree)] * dim)
    return sorted(result)


def hom_space_dim(V: QuiverRep, W: QuiverRep) -> int:
    """Dimension of the space of strict degree-0 morphisms V -> W (chain maps natural in all arrows)."""
    _check_same_quiver(V, W)
    q = V.quiver
    field_ = q.field
    offsets: Dict[Tuple[Weight, int], int] = {}
    count = 0
    for v in q.vertices:
        for d in sorted(set(V.values[v].dims) & set(W.values[v].dims)):
            offsets[(v, d)] = count
            count += W.values[v].dim(d) * V.values[v].dim(d)
    if count == 0:
        return 0

    def variable(v: Weight, d: int, r: int, c: int) -> Optional[int]:
        base = offsets.get((v, d))
        return None if base is None else base + r * V.values[v].dim(d) + c

    equations: List[List] = []

    def add_equation(terms: Dict[int, object]):
        row = [field_.zero] * count
        for index, coefficient in terms.items():
            row[index] += coefficient
        if any(x != field_.zero for x in row):
            equations.append(row)

    for v in q.vertices:
        cv, cw = V.values[v], W.values[v]
        # d_W F^d = F^(d+1) d_V
        for d in sorted(set(cv.dims) | set(cw.dims) | {x - 1 for x in cv.dims}):
            dv, dw = cv.differential(d), cw.differential(d)
            for i in range(cw.dim(d + 1)):
                for j in range(cv.dim(d)):
                    terms: Dict[int, object] = {}
                    for k in range(cw.dim(d)):
                        index = variable(v, d, k, j)
                        if index is not None and dw[i, k] != field_.zero:
                            terms[index] = terms.get(index, field_.zero) + dw[i, k]
                    for k in range(cv.dim(d + 1)):
                        index = variable(v, d + 1, i, k)
                        if index is not None and dv[k, j] != field_.zero:
                            terms[index] = terms.get(index, field_.zero) - dv[k, j]
                    add_equation(terms)
    for a, b, m in q.arrows():
        fv, fw = V.act(a, b, m), W.act(a, b, m)
        # W(m) F_b = F_a V(m)
        for d in set(V.values[b].dims) | set(V.values[a].dims):
            mv, mw = fv.component(d), fw.component(d)
            for i in range(W.values[a].dim(d)):
                for j in range(V.values[b].dim(d)):
                    terms = {}
                    for k in range(W.values[b].dim(d)):
                        index = variable(b, d, k, j)
                        if index is not None and mw[i, k] != field_.zero:
                            terms[index] = terms.get(index, field_.zero) + mw[i, k]
                    for k in range(V.values[a].dim(d)):
                        index = variable(a, d, i, k)
                        if index is not None and mv[k, j] != field_.zero:
                            terms[index] = terms.get(index, field_.zero) - mv[k, j]
                    add_equation(terms)
    if not equations:
        return count
    system = Matrix(field_, len(equations), count, tuple(tuple(row) for row in equations))
    return count - system.rank()


# --- Canonical isomorphisms ---


def _vertexwise_morphism(source: QuiverRep, target: QuiverRep, build: Callable[[Weight], ChainMap]) -> RepMorphism:
    components = {}
    for v in source.quiver.vertices:
        f = build(v)
        components[v] = ChainMap(source.values[v], target.values[v], f.components)
    return RepMorphism(source, target, components)


def associator_morphism(U: QuiverRep, V: QuiverRep, W: QuiverRep) -> RepMorphism:
    """(U (x) V) (x) W -> U (x) (V (x) W), reindexing bases at every vertex."""
    left = quiver_tensor(quiver_tensor(U, V), W)
    right = quiver_tensor(U, quiver_tensor(V, W))
    return _vertexwise_morphism(left, right, lambda v: associator(U.values[v], V.values[v], W.values[v]))


def braiding_morphism(V: QuiverRep, W: QuiverRep) -> RepMorphism:
    """V (x) W -> W (x) V with Koszul signs."""
    return _vertexwise_morphism(
        quiver_tensor(V, W), quiver_tensor(W, V), lambda v: braiding(V.values[v], W.values[v])
    )


def left_unitor(V: QuiverRep) -> RepMorphism:
    """unit (x) V -> V; k (x) C has the basis of C."""
    source = quiver_tensor(unit_rep(V.quiver), V)
    return _vertexwise_morphism(
        source, V, lambda v: ChainMap(source.values[v], V.values[v], ChainMap.identity(V.values[v]).components)
    )


def right_unitor(V: QuiverRep) -> RepMorphism:
    source = quiver_tensor(V, unit_rep(V.quiver))
    return _vertexwise_morphism(
        source, V, lambda v: ChainMap(source.values[v], V.values[v], ChainMap.identity(V.values[v]).components)
    )


# --- Passing to cohomology ---


def concentrated_degree(V: QuiverRep) -> Optional[int]:
    """The common degree holding all cohomology, if there is one (0 for an acyclic representation)."""
    degrees = {d for dims in V.cohomology().values() for d in dims}
    if len(degrees) > 1:
        return None
    return degrees.pop() if degrees else 0


def cohomology_rep(V: QuiverRep) -> Optional[QuiverRep]:
    """
    Replaces every value by its cohomology when all of it sits in one common degree.

    The result is quasi-isomorphic to V through truncations; arrows act by the induced maps.
    Returns None when the cohomology is spread over several degrees.
    """
    degree = concentrated_degree(V)
    if degree is None:
        return None
    q = V.quiver
    bases = {v: cohomology_basis(V.values[v], degree) for v in q.vertices}
    values = {v: CochainComplex.concentrated(q.field, degree, bases[v].dim) for v in q.vertices}
    actions = {}
    for a, b, m in V.actions:
        if bases[a].dim and bases[b].dim:
            matrix = induced_map(V.act(a, b, m), degree)
            actions[(a, b, m)] = ChainMap(values[b], values[a], {degree: matrix})
    return QuiverRep(q, values, actions)


# --- Random representations ---


def random_rep(q: WeightQuiver, rng, max_dim: int = RANDOM_REP_MAX_DIM) -> QuiverRep:
    """
    A random representation with vertex dimensions at most max_dim.

    Sums of evaluation representations tensored with random complexes and of shifted simples,
    conjugated by random base changes at every vertex.
    """
    if max_dim < 1:
        raise ComputationError("random representations need max_dim >= 1")
    budget = {v: max_dim for v in q.vertices}
    summands = []
    while True:
        room = min(budget.values())
        if rng.random() < 0.6 and room >= 1:
            total = rng.randint(1, min(2, room))
            dims: Dict[int, int] = {}
            for _ in range(total):
                d = rng.choice((-1, 0, 0, 1))
                dims[d] = dims.get(d, 0) + 1
            complex_ = random_complex(q.field, dims, rng)
            point = [q.field.random_element(rng) for _ in range(q.variables)]
            summands.append(_scalar_rep(evaluation_rep(q, point), complex_))
            for v in budget:
                budget[v] -= total
        else:
            free = [v for v in q.vertices if budget[v] >= 1]
            if not free:
                break
            v = rng.choice(free)
            summands.append(simple(q, v, rng.choice((-1, 0, 1))))
            budget[v] -= 1
        if min(budget.values()) < 1 or rng.random() < 0.3:
            break
    return _conjugate(direct_sum_reps(summands), rng)


def _scalar_rep(line: QuiverRep, c: CochainComplex) -> QuiverRep:
    """A one-dimensional representation tensored with a fixed complex."""
    q = line.quiver
    values = {v: c for v in q.vertices}
    actions = {}
    for arrow, f in line.actions.items():
        scalar = f.component(0)[0, 0]
        actions[arrow] = ChainMap.identity(c).scale(scalar)
    return QuiverRep(q, values, actions)


def _conjugate(V: QuiverRep, rng) -> QuiverRep:
    q = V.quiver
    bases = {
        v: {d: random_invertible(q.field, n, rng) for d, n in V.values[v].dims.items()} for v in q.vertices
    }
    inverses = {v: {d: m.inverse() for d, m in bases[v].items()} for v in q.vertices}
    values = {}
    for v in q.vertices:
        c = V.values[v]
        values[v] = CochainComplex(
            q.field,
            dict(c.dims),
            {d: bases[v][d + 1] @ m @ inverses[v][d] for d, m in c.differentials.items()},
        )
    actions = {}
    for (a, b, m), f in V.actions.items():
        actions[(a, b, m)] = ChainMap(
            values[b], values[a], {d: bases[a][d] @ x @ inverses[b][d] for d, x in f.components.items()}
        )
    return QuiverRep(q, values, actions)


def weights_to_text(weights: Iterable[Weight]) -> str:
    return "{" + ", ".join(format_weight(w) for w in weights) + "}"


def rep_summary(V: QuiverRep) -> Mapping[str, Dict[int, int]]:
    return {format_weight(v): dims for v, dims in V.cohomology().items()}
