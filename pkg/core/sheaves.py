"""
Sheaves on projective spaces as quiver representations.

Sheaves are symbolic: named leaves (line bundles, the simples Omega^i(i)[i], skyscrapers) combined
by shifts, sums and cones, plus complexes of line bundles on products of projective spaces. The
dictionary sends an expression e to the representation chi -> RGamma(e(-chi)) of the weight quiver
with vertices 0..n; closed forms cover the leaves and a truncated Cech model covers everything else.
"""

from __future__ import annotations

import itertools
import logging
import threading
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Mapping, Optional, Sequence, Tuple, Union

from .constants import CECH_MAX_BOUND, CECH_MAX_DIM
from .error_handling import ComputationError, UnsupportedInputError, ValidationError
from .linalg import (
    RATIONALS,
    ChainMap,
    CochainComplex,
    Field,
    Matrix,
    cohomology_dims,
    cone,
    induced_chain_map,
    tensor,
    tensor_maps,
)
from .quiver import (
    Presentation,
    QuiverRep,
    WeightQuiver,
    cohomology_rep,
    concentrated_degree,
    decompose_zero_arrow,
    direct_sum_reps,
    evaluation_rep,
    exponents_of_total_degree,
    line_bundle_rep,
    quiver_tensor,
    representable_complex_rep,
    shift,
    simple,
    skyscraper_rep,
)
from .task_service import get_task_service
from .types import Exponent, Flavor, Weight

Polynomial = Dict[Exponent, Fraction]


# --- Polynomials ---


def _normalize_poly(p: Mapping[Sequence[int], object]) -> Polynomial:
    result: Polynomial = {}
    for e, c in p.items():
        q = Fraction(c)
        if q:
            key = tuple(e)
            result[key] = result.get(key, Fraction(0)) + q
    return {e: c for e, c in sorted(result.items()) if c}


def poly_mul(p: Polynomial, q: Polynomial) -> Polynomial:
    result: Dict[Exponent, Fraction] = {}
    for e1, c1 in p.items():
        for e2, c2 in q.items():
            e = tuple(a + b for a, b in zip(e1, e2))
            result[e] = result.get(e, Fraction(0)) + c1 * c2
    return {e: c for e, c in sorted(result.items()) if c}


def poly_add(p: Polynomial, q: Polynomial) -> Polynomial:
    result = dict(p)
    for e, c in q.items():
        result[e] = result.get(e, Fraction(0)) + c
    return {e: c for e, c in sorted(result.items()) if c}


def linear_form(variables: int, coefficients: Mapping[int, object], offset: int = 0, total: int = 0) -> Polynomial:
    """sum c_j x_(offset + j) in a ring with `total` variables (defaults to `variables`)."""
    total = total or variables
    p = {}
    for j, c in coefficients.items():
        e = [0] * total
        e[offset + j] = 1
        p[tuple(e)] = c
    return _normalize_poly(p)


# --- Complexes of line bundles ---


@dataclass(frozen=True)
class LineBundleComplex:
    """
    A bounded complex of sums of line bundles on P^(n_1) x ... x P^(n_r).

    terms[k] lists the multidegrees of the summands in degree k. differentials[k][t][s] is the
    polynomial from summand s in degree k to summand t in degree k + 1, in the concatenated
    variables of all factors. Ambient factors are read as graded modules (every integer weight)
    instead of through Cech cohomology.
    """

    factors: Tuple[int, ...]
    terms: Dict[int, Tuple[Weight, ...]]
    differentials: Dict[int, Tuple[Tuple[Polynomial, ...], ...]] = field(default_factory=dict)
    ambient: Tuple[bool, ...] = ()

    def __post_init__(self):
        if not self.factors or any(n < 1 for n in self.factors):
            raise ValidationError("line-bundle complexes need projective factors of dimension at least 1")
        object.__setattr__(self, "ambient", tuple(self.ambient) or tuple(False for _ in self.factors))
        if len(self.ambient) != len(self.factors):
            raise ValidationError("one ambient flag per factor is required")
        terms = {k: tuple(tuple(w) for w in ws) for k, ws in sorted(self.terms.items()) if ws}
        for ws in terms.values():
            for w in ws:
                if len(w) != len(self.factors):
                    raise ValidationError(f"multidegree {w} does not match {len(self.factors)} factors")
        object.__setattr__(self, "terms", terms)
        differentials = {}
        for k, rows in sorted(self.differentials.items()):
            sources, targets = terms.get(k, ()), terms.get(k + 1, ())
            if len(rows) != len(targets) or any(len(row) != len(sources) for row in rows):
                raise ValidationError(f"differential in degree {k} does not match the terms")
            normalized = tuple(tuple(_normalize_poly(p) for p in row) for row in rows)
            for t, row in enumerate(normalized):
                for s, p in enumerate(row):
                    expected = tuple(b - a for a, b in zip(sources[s], targets[t]))
                    for e in p:
                        if len(e) != self.variables or self.degree_of(e) != expected:
                            raise ValidationError(
                                f"entry ({t}, {s}) in degree {k} has a monomial {e} of the wrong degree, "
                                f"expected {expected}"
                            )
            if rows:
                differentials[k] = normalized
        object.__setattr__(self, "differentials", differentials)
        for k in differentials:
            if k + 1 in differentials and not _product_is_zero(differentials[k + 1], differentials[k]):
                raise ValidationError(f"d o d != 0 at degree {k}")

    @property
    def variables(self) -> int:
        return sum(n + 1 for n in self.factors)

    def slices(self) -> List[slice]:
        offsets = list(itertools.accumulate([0, *[n + 1 for n in self.factors]]))
        return [slice(a, b) for a, b in zip(offsets, offsets[1:])]

    def degree_of(self, e: Exponent) -> Weight:
        return tuple(sum(e[s]) for s in self.slices())

    def summands(self) -> List[Tuple[int, int, Weight]]:
        """(degree, index, multidegree) of every summand, by ascending degree."""
        return [(k, s, w) for k, ws in self.terms.items() for s, w in enumerate(ws)]

    def entry(self, k: int, t: int, s: int) -> Polynomial:
        rows = self.differentials.get(k)
        return rows[t][s] if rows else {}

    def shift(self, n: int) -> "LineBundleComplex":
        """C[n]: degree k moves to k - n and the differentials pick up (-1)^n."""
        sign = -1 if n % 2 else 1
        return LineBundleComplex(
            self.factors,
            {k - n: ws for k, ws in self.terms.items()},
            {
                k - n: tuple(tuple({e: sign * c for e, c in p.items()} for p in row) for row in rows)
                for k, rows in self.differentials.items()
            },
            self.ambient,
        )

    def as_presentation(self) -> Presentation:
        """The same complex as a complex of representables on the weight quiver of P^n."""
        if len(self.factors) != 1:
            raise ValidationError("only complexes on a single projective space are presented by representables")
        return Presentation(dict(self.terms), dict(self.differentials))


def _product_is_zero(second, first) -> bool:
    for row in second:
        for s in range(len(first[0]) if first else 0):
            total: Polynomial = {}
            for u, p in enumerate(row):
                total = poly_add(total, poly_mul(p, first[u][s]))
            if total:
                return False
    return True


def direct_sum_complexes(parts: Sequence[LineBundleComplex]) -> LineBundleComplex:
    """Termwise direct sum; summands of each part keep their order."""
    first = parts[0]
    if any(p.factors != first.factors or p.ambient != first.ambient for p in parts):
        raise ValidationError("direct sums need complexes on the same product of projective spaces")
    degrees = sorted({k for p in parts for k in p.terms})
    terms = {k: tuple(w for p in parts for w in p.terms.get(k, ())) for k in degrees}
    differentials = {}
    for k in degrees:
        if k + 1 not in terms:
            continue
        rows = []
        for i, p in enumerate(parts):
            for t in range(len(p.terms.get(k + 1, ()))):
                row = []
                for j, other in enumerate(parts):
                    for s in range(len(other.terms.get(k, ()))):
                        row.append(p.entry(k, t, s) if i == j else {})
                rows.append(tuple(row))
        differentials[k] = tuple(rows)
    return LineBundleComplex(first.factors, terms, differentials, first.ambient)


def single_line_bundle(n: int, degree: int) -> LineBundleComplex:
    return LineBundleComplex((n,), {0: ((degree,),)})


def _contraction_sign(subset: Sequence[int], j: int) -> int:
    return -1 if subset.index(j) % 2 else 1


def twisted_cotangent_complex(n: int, i: int) -> LineBundleComplex:
    """
    The Euler presentation of Omega^i(i) on P^n: wedge^(i-k) V (x) O(k) in degree k = 0..i,
    with differential the contraction by x.
    """
    if not 0 <= i <= n:
        raise ValidationError(f"Omega^{i} does not exist on P^{n}")
    subsets = {k: list(itertools.combinations(range(n + 1), i - k)) for k in range(i + 1)}
    terms = {k: tuple((k,) for _ in subsets[k]) for k in range(i + 1)}
    differentials = {}
    for k in range(i):
        targets = {J: t for t, J in enumerate(subsets[k + 1])}
        rows = [[{} for _ in subsets[k]] for _ in subsets[k + 1]]
        for s, J in enumerate(subsets[k]):
            for j in J:
                rest = tuple(x for x in J if x != j)
                rows[targets[rest]][s] = linear_form(n + 1, {j: _contraction_sign(J, j)})
        differentials[k] = tuple(tuple(row) for row in rows)
    return LineBundleComplex((n,), terms, differentials)


def _vanishing_forms(point: Sequence[Fraction]) -> List[Dict[int, Fraction]]:
    """n linear forms cutting out the point; on P^1 the form is a1 x0 - a0 x1."""
    r = next(j for j, a in enumerate(point) if a)
    forms = []
    for j in range(len(point)):
        if j == r:
            continue
        if j < r:
            forms.append({j: point[r], r: -point[j]})
        else:
            forms.append({r: point[j], j: -point[r]})
    return forms


def koszul_skyscraper(n: int, point: Sequence) -> LineBundleComplex:
    """
    The Koszul resolution of the skyscraper at a point of P^n: wedge^k of n vanishing linear
    forms, twisted by O(-k), in degree -k.
    """
    if n > CECH_MAX_DIM:
        raise UnsupportedInputError(f"skyscraper resolutions are provided for n <= {CECH_MAX_DIM}")
    point = [Fraction(a) for a in point]
    if len(point) != n + 1 or not any(point):
        raise ValidationError(f"a point of P^{n} needs {n + 1} coordinates, not all zero")
    forms = [_normalize_poly(linear_form(n + 1, f)) for f in _vanishing_forms(point)]
    subsets = {k: list(itertools.combinations(range(n), k)) for k in range(n + 1)}
    terms = {-k: tuple((-k,) for _ in subsets[k]) for k in range(n + 1)}
    differentials = {}
    for k in range(1, n + 1):
        targets = {K: t for t, K in enumerate(subsets[k - 1])}
        rows = [[{} for _ in subsets[k]] for _ in subsets[k - 1]]
        for s, K in enumerate(subsets[k]):
            for j in K:
                rest = tuple(x for x in K if x != j)
                rows[targets[rest]][s] = {e: _contraction_sign(K, j) * c for e, c in forms[j].items()}
        differentials[-k] = tuple(tuple(row) for row in rows)
    return LineBundleComplex((n,), terms, differentials)


def beilinson_kernel(n: int, ambient: bool = False) -> LineBundleComplex:
    """
    The Beilinson resolution of the diagonal of P^n x P^n.

    The terms Omega^i(i) (x) O(-i) are expanded through their Euler presentations, so degree -k
    holds wedge^k V (x) O(i - k, -i) for i = k..n. The differential contracts with x (inside one
    Euler presentation) plus contracts with y (between consecutive terms). With ambient set, the
    second factor is read as a graded module.
    """
    if n > CECH_MAX_DIM:
        raise UnsupportedInputError(f"Beilinson kernels are provided for n <= {CECH_MAX_DIM}")
    total = 2 * (n + 1)
    summands = {
        k: [(i, J) for i in range(k, n + 1) for J in itertools.combinations(range(n + 1), k)] for k in range(n + 1)
    }
    terms = {-k: tuple((i - k, -i) for i, _ in summands[k]) for k in range(n + 1)}
    differentials = {}
    for k in range(1, n + 1):
        targets = {label: t for t, label in enumerate(summands[k - 1])}
        rows = [[{} for _ in summands[k]] for _ in summands[k - 1]]
        for s, (i, J) in enumerate(summands[k]):
            for j in J:
                rest = tuple(x for x in J if x != j)
                sign = _contraction_sign(J, j)
                rows[targets[(i, rest)]][s] = linear_form(n + 1, {j: sign}, 0, total)
                rows[targets[(i - 1, rest)]][s] = linear_form(n + 1, {j: sign}, n + 1, total)
        differentials[-k] = tuple(tuple(row) for row in rows)
    return LineBundleComplex((n, n), terms, differentials, (False, ambient))


# --- Cech model ---

_Chart = Tuple[Tuple[int, ...], Exponent]


def _chart_basis(n: int, degree: int, bound: int, ambient: bool) -> Dict[int, List[_Chart]]:
    """
    Laurent monomials of the given degree on the charts U_I of P^n, exponents >= -bound on I and
    >= 0 off I, grouped by Cech degree |I| - 1.
    """
    if ambient:
        monomials = exponents_of_total_degree(n + 1, degree)
        return {0: [((), u) for u in monomials]} if monomials else {}
    basis: Dict[int, List[_Chart]] = {}
    for size in range(1, n + 2):
        for I in itertools.combinations(range(n + 1), size):
            lower = [-bound if j in I else 0 for j in range(n + 1)]
            for v in exponents_of_total_degree(n + 1, degree - sum(lower)):
                basis.setdefault(size - 1, []).append((I, tuple(a + b for a, b in zip(v, lower))))
    return {p: sorted(items) for p, items in basis.items()}


class CechModel:
    """
    Truncated Cech hypercohomology of a line-bundle complex on a product of projective spaces.

    The Cech complex of a line bundle is graded by the exponent vector and only pieces with all
    exponents negative or all nonnegative carry cohomology, so exponents >= -(-a - n) suffice for
    O(a) on P^n. One bound per factor, taken over every twist the model is asked about, keeps
    multiplication by monomials a chain map between the truncated complexes.
    """

    def __init__(self, complex_: LineBundleComplex, field_: Field, twists: Sequence[Sequence[int]]):
        self.complex = complex_
        self.field = field_
        twists = [tuple(t) for t in twists]
        if not twists:
            raise ValidationError("a Cech model needs at least one twist")
        for n in complex_.factors:
            if n > CECH_MAX_DIM:
                raise UnsupportedInputError(f"Cech computations are limited to P^n with n <= {CECH_MAX_DIM}")
        bounds = []
        weights = [w for _, _, w in complex_.summands()]
        for f, n in enumerate(complex_.factors):
            lowest = min((w[f] + t[f] for w in weights for t in twists), default=0)
            bounds.append(0 if complex_.ambient[f] else max(0, -lowest - n))
        required = max(bounds, default=0)
        if required > CECH_MAX_BOUND:
            raise ComputationError(f"Cech truncation needs exponent bound {required}, above the limit {CECH_MAX_BOUND}")
        self.bounds = tuple(bounds)
        self._lock = threading.Lock()
        self._factor_complexes: Dict[Tuple[int, int], Tuple[CochainComplex, Dict[int, Dict[_Chart, int]]]] = {}
        self._term_complexes: Dict[Weight, CochainComplex] = {}
        logging.debug(f"Cech model on factors {complex_.factors} with bounds {self.bounds}")

    # --- One factor ---
    def _factor(self, f: int, degree: int) -> Tuple[CochainComplex, Dict[int, Dict[_Chart, int]]]:
        key = (f, degree)
        with self._lock:
            cached = self._factor_complexes.get(key)
        if cached is not None:
            return cached
        n = self.complex.factors[f]
        basis = _chart_basis(n, degree, self.bounds[f], self.complex.ambient[f])
        index = {p: {item: i for i, item in enumerate(items)} for p, items in basis.items()}
        differentials = {}
        for p, items in basis.items():
            targets = basis.get(p + 1)
            if not targets:
                continue
            grid = [[self.field.zero] * len(items) for _ in targets]
            for row, (J, u) in enumerate(targets):
                for k in range(len(J)):
                    col = index[p].get((J[:k] + J[k + 1 :], u))
                    if col is not None:
                        grid[row][col] = self.field(-1 if k % 2 else 1)
            differentials[p] = Matrix(self.field, len(targets), len(items), tuple(map(tuple, grid)))
        result = (CochainComplex(self.field, {p: len(v) for p, v in basis.items()}, differentials), index)
        with self._lock:
            self._factor_complexes[key] = result
        return result

    def _factor_multiplication(self, f: int, degree: int, exponent: Exponent) -> ChainMap:
        source, source_index = self._factor(f, degree)
        target, target_index = self._factor(f, degree + sum(exponent))
        components = {}
        for p, items in source_index.items():
            grid = [[self.field.zero] * len(items) for _ in range(target.dim(p))]
            for (I, u), col in items.items():
                row = target_index.get(p, {}).get((I, tuple(a + b for a, b in zip(u, exponent))))
                if row is not None:
                    grid[row][col] = self.field.one
            components[p] = Matrix(self.field, target.dim(p), len(items), tuple(map(tuple, grid)))
        return ChainMap(source, target, components)

    # --- Products of factors ---
    def term(self, weight: Weight) -> CochainComplex:
        """The Cech complex of the line bundle O(weight), tensored over the factors."""
        weight = tuple(weight)
        with self._lock:
            cached = self._term_complexes.get(weight)
        if cached is not None:
            return cached
        result = self._factor(0, weight[0])[0]
        for f in range(1, len(self.complex.factors)):
            result = tensor(result, self._factor(f, weight[f])[0])
        with self._lock:
            self._term_complexes[weight] = result
        return result

    def multiplication(self, weight: Weight, exponent: Exponent) -> ChainMap:
        """Multiplication by x^exponent from the Cech complex of O(weight)."""
        slices = self.complex.slices()
        result = self._factor_multiplication(0, weight[0], exponent[slices[0]])
        for f in range(1, len(self.complex.factors)):
            result = tensor_maps(result, self._factor_multiplication(f, weight[f], exponent[slices[f]]))
        return result

    def polynomial_map(self, weight: Weight, p: Polynomial, target: Weight) -> ChainMap:
        result = ChainMap.zero(self.term(weight), self.term(target))
        for e, c in p.items():
            result = result + self.multiplication(weight, e).scale(self.field(c))
        return result

    # --- Totalization ---
    def _layout(self, twist: Weight) -> Dict[int, List[Tuple[int, Weight]]]:
        return {
            k: [(s, tuple(a + b for a, b in zip(w, twist))) for s, w in enumerate(ws)]
            for k, ws in self.complex.terms.items()
        }

    def total(self, twist: Sequence[int]) -> CochainComplex:
        """Tot of the double complex with D = d_complex + (-1)^k d_Cech on the summands of degree k."""
        twist = tuple(twist)
        layout = self._layout(twist)
        pieces = {(k, s): self.term(w) for k, items in layout.items() for s, w in items}
        order = sorted(pieces)
        degrees = sorted({k + p for (k, _), c in pieces.items() for p in c.dims})
        dims = {d: sum(pieces[key].dim(d - key[0]) for key in order) for d in degrees}
        differentials = {}
        for d in degrees:
            if d + 1 not in dims:
                continue
            blocks = {}
            for j, (k, s) in enumerate(order):
                c = pieces[(k, s)]
                if c.dim(d - k):
                    vertical = c.differential(d - k)
                    blocks[(j, j)] = vertical.scale(self.field(-1)) if k % 2 else vertical
                for t, _ in enumerate(self.complex.terms.get(k + 1, ())):
                    p = self.complex.entry(k, t, s)
                    if p:
                        i = order.index((k + 1, t))
                        f = self.polynomial_map(layout[k][s][1], p, layout[k + 1][t][1])
                        blocks[(i, j)] = f.component(d - k)
            differentials[d] = Matrix.block(
                self.field,
                [pieces[key].dim(d + 1 - key[0]) for key in order],
                [pieces[key].dim(d - key[0]) for key in order],
                blocks,
            )
        return CochainComplex(self.field, dims, differentials)

    def total_multiplication(self, twist: Sequence[int], exponent: Exponent) -> ChainMap:
        """x^exponent from Tot at twist to Tot at twist + deg(exponent), summand by summand."""
        twist = tuple(twist)
        shifted = tuple(a + b for a, b in zip(twist, self.complex.degree_of(exponent)))
        source, target = self.total(twist), self.total(shifted)
        layout = self._layout(twist)
        order = sorted((k, s) for k, items in layout.items() for s, _ in items)
        maps = {(k, s): self.multiplication(w, exponent) for k, items in layout.items() for s, w in items}
        components = {}
        for d in source.dims:
            blocks = {(j, j): maps[key].component(d - key[0]) for j, key in enumerate(order)}
            components[d] = Matrix.block(
                self.field,
                [maps[key].target.dim(d - key[0]) for key in order],
                [maps[key].source.dim(d - key[0]) for key in order],
                blocks,
            )
        return ChainMap(source, target, components)


@dataclass(frozen=True, eq=False)
class CechResult:
    """RGamma of a line-bundle complex with the multiplication maps of the variables."""

    complex: CochainComplex
    generators: Dict[int, ChainMap]

    def cohomology(self) -> Dict[int, int]:
        return cohomology_dims(self.complex)


def cech_rgamma(
    n: int, c: Union[LineBundleComplex, int], twist: Union[int, Sequence[int]] = 0, field_: Field = RATIONALS
) -> CechResult:
    """
    Derived global sections of c(twist) on P^n (or on the product of c's factors).

    An integer c stands for the line bundle O(c). generators[k] multiplies by the k-th variable,
    landing in RGamma of the complex twisted once more in that variable's factor.
    """
    if isinstance(c, int):
        c = single_line_bundle(n, c)
    if c.factors[0] != n:
        raise ValidationError(f"complex lives on P^{c.factors[0]}, not P^{n}")
    twist = (twist,) if isinstance(twist, int) else tuple(twist)
    if len(twist) != len(c.factors):
        raise ValidationError("one twist per factor is required")
    units = []
    for k in range(c.variables):
        e = [0] * c.variables
        e[k] = 1
        units.append(tuple(e))
    lifted = [tuple(a + b for a, b in zip(twist, c.degree_of(e))) for e in units]
    model = CechModel(c, field_, [twist, *lifted])
    complex_ = model.total(twist)
    generators = {k: model.total_multiplication(twist, e) for k, e in enumerate(units)}
    logging.debug(f"RGamma on factors {c.factors}, twist {twist}: {cohomology_dims(complex_)}")
    return CechResult(complex_, generators)


# --- Sheaf expressions ---


@dataclass(frozen=True)
class LineBundle:
    degree: int

    def render(self) -> str:
        return f"O({self.degree})"


@dataclass(frozen=True)
class TwistedCotangentSimple:
    """Omega^i(i)[i]."""

    index: int

    def render(self) -> str:
        return f"Omega({self.index})"


@dataclass(frozen=True)
class Skyscraper:
    """The skyscraper at a point [a]; coordinates are stored scaled so the first nonzero one is 1."""

    point: Tuple[Fraction, ...]

    def __post_init__(self):
        coordinates = tuple(Fraction(a) for a in self.point)
        if not any(coordinates):
            raise ValidationError("a skyscraper needs a nonzero point")
        lead = next(a for a in coordinates if a)
        object.__setattr__(self, "point", tuple(a / lead for a in coordinates))

    def render(self) -> str:
        return "sky[" + ",".join(str(a) for a in self.point) + "]"


@dataclass(frozen=True)
class Shift:
    n: int
    expr: "SheafExpr"

    def render(self) -> str:
        return f"shift({self.n},{self.expr.render()})"


@dataclass(frozen=True)
class Sum:
    left: "SheafExpr"
    right: "SheafExpr"

    def render(self) -> str:
        return f"sum({self.left.render()},{self.right.render()})"


@dataclass(frozen=True)
class Cone:
    """A complex of line bundles on P^n given directly, e.g. the cone of a map between line bundles."""

    complex: LineBundleComplex
    name: str = "cone"

    def render(self) -> str:
        return self.name


SheafExpr = Union[LineBundle, TwistedCotangentSimple, Skyscraper, Shift, Sum, Cone]


def cone_of(n: int, source: int, target: int, p: Mapping[Sequence[int], object], name: str = "cone") -> Cone:
    """cone(O(source) -> O(target)) for the polynomial p: O(source) in degree -1, O(target) in degree 0."""
    complex_ = LineBundleComplex((n,), {-1: ((source,),), 0: ((target,),)}, {-1: ((_normalize_poly(p),),)})
    return Cone(complex_, name)


def to_line_bundle_complex(e: SheafExpr, n: int) -> LineBundleComplex:
    """Presents an expression on P^n as a complex of line bundles."""
    if isinstance(e, LineBundle):
        return single_line_bundle(n, e.degree)
    if isinstance(e, TwistedCotangentSimple):
        return twisted_cotangent_complex(n, e.index).shift(e.index)
    if isinstance(e, Skyscraper):
        return koszul_skyscraper(n, e.point)
    if isinstance(e, Shift):
        return to_line_bundle_complex(e.expr, n).shift(e.n)
    if isinstance(e, Sum):
        return direct_sum_complexes([to_line_bundle_complex(e.left, n), to_line_bundle_complex(e.right, n)])
    if isinstance(e, Cone):
        if e.complex.factors != (n,):
            raise ValidationError(f"{e.name} does not live on P^{n}")
        return e.complex
    raise ValidationError(f"not a sheaf expression: {e!r}")


# --- Dictionary ---


def projective_dimension(q: WeightQuiver) -> int:
    """n for the weight quiver of P^n or P(A): one-dimensional weights, every variable of degree 1."""
    if q.weight_rank != 1 or any(d != (1,) for d in q.variable_degrees):
        raise ValidationError("sheaf expressions need the weight quiver of a projective space")
    return q.variables - 1


def _cech_rep(q: WeightQuiver, c: LineBundleComplex) -> QuiverRep:
    """chi -> Tot of the Cech model of c(-chi), arrows by multiplication."""
    twists = [(-v[0],) for v in q.vertices]
    model = CechModel(c, q.field, twists)
    complexes = get_task_service().map_ordered(model.total, twists)
    values = dict(zip(q.vertices, complexes))
    actions = {}
    for a, b, m in q.arrows():
        f = model.total_multiplication((-b[0],), m)
        actions[(a, b, m)] = ChainMap(values[b], values[a], f.components)
    rep = QuiverRep(q, values, actions)
    reduced = cohomology_rep(rep)
    return reduced if reduced is not None else rep


def rep_of_complex(q: WeightQuiver, c: LineBundleComplex) -> QuiverRep:
    """
    The representation chi -> RGamma(c(-chi)).

    When no term has higher cohomology on the vertex set the graded-module representation of the
    complex of representables is exact and keeps its presentation; otherwise Cech.
    """
    n = projective_dimension(q)
    if c.factors != (n,) or c.ambient != (False,):
        raise ValidationError(f"complex does not live on P^{n}")
    top = max(v[0] for v in q.vertices)
    weights = [w[0] for _, _, w in c.summands()]
    if all(w - top >= -n for w in weights):
        return representable_complex_rep(q, c.as_presentation())
    return _cech_rep(q, c)


def rep_of_sheaf(q: WeightQuiver, e: Union[SheafExpr, LineBundleComplex]) -> QuiverRep:
    """The dictionary image of an expression on the quiver's vertex set."""
    n = projective_dimension(q)
    if isinstance(e, LineBundleComplex):
        return rep_of_complex(q, e)
    if isinstance(e, LineBundle):
        if e.degree - max(v[0] for v in q.vertices) >= -n:
            return line_bundle_rep(q, (e.degree,))
        return rep_of_complex(q, single_line_bundle(n, e.degree))
    if isinstance(e, TwistedCotangentSimple):
        if not 0 <= e.index <= n:
            raise ValidationError(f"Omega^{e.index} does not exist on P^{n}")
        if set(q.vertices) == {(i,) for i in range(n + 1)}:
            # Bott: RGamma(Omega^i(i - chi)) is k in degree i exactly at chi = i.
            return simple(q, (e.index,))
        return rep_of_complex(q, to_line_bundle_complex(e, n))
    if isinstance(e, Skyscraper):
        if len(e.point) != n + 1:
            raise ValidationError(f"a point of P^{n} needs {n + 1} coordinates")
        point = [q.field(a) for a in e.point]
        if q.flavor == Flavor.ALGEBRA:
            return skyscraper_rep(q, point)
        return evaluation_rep(q, point)
    if isinstance(e, Shift):
        return shift(rep_of_sheaf(q, e.expr), e.n)
    if isinstance(e, Sum):
        return direct_sum_reps([rep_of_sheaf(q, e.left), rep_of_sheaf(q, e.right)])
    if isinstance(e, Cone):
        return rep_of_complex(q, e.complex)
    raise ValidationError(f"not a sheaf expression: {e!r}")


# --- Recognition ---


def identify_skyscraper(V: QuiverRep) -> Optional[Tuple]:
    """
    The point [a] when V is the image of a skyscraper, up to shift; None otherwise.

    Needs one-dimensional cohomology at every vertex in a common degree and two consecutive
    vertices; the arrows between them give a, and every other arrow must act by a nonzero
    multiple of evaluation at a, with multiples compatible under composition.
    """
    small = cohomology_rep(V)
    if small is None:
        return None
    q = small.quiver
    degree = concentrated_degree(small)
    if any(small.values[v].dim(degree) != 1 for v in q.vertices):
        return None
    field_ = q.field
    vertices = sorted(q.vertices)
    pair = next(((a, b) for a, b in zip(vertices, vertices[1:]) if b[0] - a[0] == 1), None)
    if pair is None:
        return None

    def scalar(a: Weight, b: Weight, m: Exponent):
        return small.act(a, b, m).component(degree)[0, 0]

    units = [tuple(1 if k == j else 0 for k in range(q.variables)) for j in range(q.variables)]
    point = [scalar(pair[0], pair[1], u) for u in units]
    if all(x == field_.zero for x in point):
        return None

    def evaluate(m: Exponent):
        value = field_.one
        for x, power in zip(point, m):
            value *= x**power
        return value

    factors: Dict[Tuple[Weight, Weight], object] = {}
    for a in vertices:
        for b in vertices:
            if b[0] <= a[0]:
                continue
            ratio = None
            for m in q.hom(a, b):
                expected, actual = evaluate(m), scalar(a, b, m)
                if expected == field_.zero:
                    if actual != field_.zero:
                        return None
                    continue
                if ratio is None:
                    ratio = actual / expected
                    if ratio == field_.zero:
                        return None
                elif actual != ratio * expected:
                    return None
            if ratio is not None:
                factors[(a, b)] = ratio
    for (a, b), r1 in factors.items():
        for (b2, c), r2 in factors.items():
            if b2 == b and (a, c) in factors and factors[(a, c)] != r1 * r2:
                return None
    lead = next(x for x in point if x != field_.zero)
    return tuple(x / lead for x in point)


def _suffix(k: int) -> str:
    return f"[{k}]" if k else ""


def render_simple(n: int, vertex: int, shift_: int) -> str:
    """S_i[s] as a sheaf: S_i is Omega^i(i)[i], with Omega^0(0) = O and Omega^n(n) = O(-1)."""
    if vertex == 0:
        return "O" + _suffix(shift_)
    if vertex == n:
        return "O(-1)" + _suffix(n + shift_)
    if 0 < vertex < n:
        return f"Omega^{vertex}({vertex})" + _suffix(vertex + shift_)
    return f"S{vertex}" + _suffix(shift_)


def recognize(V: QuiverRep) -> Optional[str]:
    """Names V as a sum of shifted simples or as a shifted skyscraper when possible."""
    n = projective_dimension(V.quiver)
    small = cohomology_rep(V) or V
    if small.is_zero_arrow():
        parts = decompose_zero_arrow(small)
        if not parts:
            return "0"
        return " + ".join(render_simple(n, v[0], s) for v, s in parts)
    point = identify_skyscraper(V)
    if point is not None:
        degree = concentrated_degree(V) or 0
        text = "sky[" + ",".join(str(V.field.to_output(x)) for x in point) + "]"
        return text + _suffix(-degree)
    return None


@dataclass(frozen=True, eq=False)
class ECProduct:
    rep: QuiverRep
    recognized: Optional[str]


def ec_product(q: WeightQuiver, e1: SheafExpr, e2: SheafExpr) -> ECProduct:
    """The extended convolution product: quiver tensor of the two dictionary images."""
    V, W = rep_of_sheaf(q, e1), rep_of_sheaf(q, e2)
    product = quiver_tensor(V, W, check=False)
    reduced = cohomology_rep(product) or product
    name = recognize(reduced)
    logging.info(f"EC product {e1.render()} * {e2.render()}: {name or 'unrecognized'}")
    return ECProduct(reduced, name)


# --- Geometric oracle on P^1 ---


def _cohomology_model(c: LineBundleComplex, field_: Field, twist: int) -> Tuple[ChainMap, ChainMap]:
    """H(RGamma(c(twist - 1))) -> H(RGamma(c(twist))) for x0 and x1."""
    model = CechModel(c, field_, [(twist - 1,), (twist,)])
    return tuple(
        induced_chain_map(model.total_multiplication((twist - 1,), e)) for e in ((1, 0), (0, 1))
    )


def fm_oracle_p1(e1: SheafExpr, e2: SheafExpr, field_: Field = RATIONALS) -> Dict[Weight, Dict[int, int]]:
    """
    The convolution of e1 and e2 on P^1 pushed through the graph of multiplication.

    At vertex chi this is RGamma of pi1*e1 (x) pi2*e2 (x) pi3*O(-chi) against the divisor
    z0 x1 y1 - z1 x0 y0, i.e. the cone of that section from the (-1,-1,-1) twist. By Kunneth every
    factor is replaced by its cohomology with the induced multiplication maps.
    """
    c1, c2 = to_line_bundle_complex(e1, 1), to_line_bundle_complex(e2, 1)
    x0, x1 = _cohomology_model(c1, field_, 0)
    y0, y1 = _cohomology_model(c2, field_, 0)
    point = single_line_bundle(1, 0)
    result = {}
    for chi in (0, 1):
        z0, z1 = _cohomology_model(point, field_, -chi)
        section = tensor_maps(tensor_maps(x1, y1), z0) + tensor_maps(tensor_maps(x0, y0), z1).scale(field_(-1))
        result[(chi,)] = cohomology_dims(cone(section))
    logging.debug(f"Fourier-Mukai oracle for {e1.render()} * {e2.render()}: {result}")
    return result
