"""
Smooth complete toric varieties: fans, the Cox grading, monomials in a fixed degree and
line bundle cohomology.
"""

from __future__ import annotations

import itertools
import logging
import math
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property, lru_cache
from typing import Dict, FrozenSet, List, Sequence, Tuple

from sympy import Matrix as IntMatrix
from sympy import ZZ
from sympy.matrices.normalforms import smith_normal_form

from .config import FanSpec
from .constants import MONOMIAL_BOX_LIMIT
from .error_handling import ComputationError, UnsupportedInputError, ValidationError
from .linalg import RATIONALS, CochainComplex, Matrix, cohomology_dims
from .task_service import get_task_service
from .types import Exponent, FanReport, Weight


@dataclass(frozen=True)
class Fan:
    """Rays and maximal cones; the first maximal cone fixes the Cox coordinates."""

    lattice_rank: int
    rays: Tuple[Tuple[int, ...], ...]
    max_cones: Tuple[Tuple[int, ...], ...]

    @classmethod
    def from_spec(cls, spec: FanSpec) -> "Fan":
        return cls(spec.lattice_rank, tuple(tuple(r) for r in spec.rays), tuple(tuple(c) for c in spec.max_cones))

    @classmethod
    def from_data(cls, lattice_rank: int, rays: Sequence[Sequence[int]], max_cones: Sequence[Sequence[int]]) -> "Fan":
        spec = FanSpec(lattice_rank=lattice_rank, rays=list(map(list, rays)), max_cones=list(map(list, max_cones)))
        return cls.from_spec(spec)

    @property
    def n_rays(self) -> int:
        return len(self.rays)

    def pairing(self, m: Sequence[int], ray: int) -> int:
        return sum(a * b for a, b in zip(m, self.rays[ray]))

    @cached_property
    def faces(self) -> FrozenSet[FrozenSet[int]]:
        """Every cone of the fan (as a ray-index set), the empty cone included."""
        result = set()
        for cone in self.max_cones:
            for k in range(len(cone) + 1):
                result.update(frozenset(c) for c in itertools.combinations(cone, k))
        return frozenset(result)


def _smith_diagonal(rows: Sequence[Sequence[int]]) -> List[int]:
    m = IntMatrix(rows)
    snf = smith_normal_form(m, domain=ZZ)
    return [int(snf[i, i]) for i in range(min(snf.shape))]


def _rank(rows: Sequence[Sequence[int]]) -> int:
    return IntMatrix(rows).rank() if rows else 0


def validate(f: Fan) -> FanReport:
    """Checks primitivity, smoothness and completeness; offending rays, cones and faces are listed."""
    non_primitive = [i for i, ray in enumerate(f.rays) if math.gcd(*ray) != 1]

    non_smooth = []
    for index, cone in enumerate(f.max_cones):
        diagonal = _smith_diagonal([f.rays[i] for i in cone])
        if len(diagonal) < len(cone) or any(abs(x) != 1 for x in diagonal):
            non_smooth.append(index)

    spans = _rank(f.rays) == f.lattice_rank
    face_count: Counter = Counter()
    unmatched = []
    for cone in f.max_cones:
        if len(cone) != f.lattice_rank:
            unmatched.append(tuple(sorted(cone)))
            continue
        for ray in cone:
            face_count[tuple(sorted(set(cone) - {ray}))] += 1
    unmatched.extend(face for face, count in sorted(face_count.items()) if count != 2)

    report = FanReport(
        smooth=not non_smooth,
        complete=spans and not unmatched,
        primitive=not non_primitive,
        non_primitive_rays=non_primitive,
        non_smooth_cones=non_smooth,
        unmatched_faces=unmatched,
        spans=spans,
    )
    logging.debug(f"Fan validation: {report.describe()}")
    return report


def require_valid(f: Fan) -> FanReport:
    report = validate(f)
    if not report.ok:
        raise ValidationError(f"fan is not a smooth complete fan: {report.describe()}")
    return report


@dataclass(frozen=True)
class CoxGrading:
    """
    The grading Z^n -> Z^r of the Cox ring and the lattice M = ker of it.

    Row rho of `grading` is the weight of the variable x_rho. Column j of `kernel_basis` is the
    image of the j-th basis vector of M, i.e. (<e_j, u_rho>)_rho.
    """

    fan: Fan
    n: int
    weight_rank: int
    grading: Tuple[Weight, ...]
    kernel_basis: Tuple[Tuple[int, ...], ...]
    chart: Tuple[int, ...]

    @property
    def lattice_rank(self) -> int:
        return self.fan.lattice_rank

    def degree(self, u: Sequence[int]) -> Weight:
        """The weight of the monomial x^u (u may have negative entries)."""
        return tuple(sum(u[rho] * self.grading[rho][j] for rho in range(self.n)) for j in range(self.weight_rank))

    def lift(self, chi: Sequence[int]) -> Exponent:
        """A divisor in class chi: zero on the chart rays, chi on the others."""
        if len(chi) != self.weight_rank:
            raise ValidationError(f"weight {tuple(chi)} has {len(chi)} coordinates, expected {self.weight_rank}")
        values = iter(chi)
        chart = set(self.chart)
        return tuple(0 if rho in chart else next(values) for rho in range(self.n))

    def embed(self, m: Sequence[int]) -> Tuple[int, ...]:
        """The image of m in M inside Z^n."""
        return tuple(self.fan.pairing(m, rho) for rho in range(self.n))

    @cached_property
    def box_coefficients(self) -> List[Tuple[Tuple[Fraction, ...], Tuple[Fraction, ...]]]:
        """
        For each coordinate j, the nonnegative ray coefficients of e_j and -e_j in a containing cone.
        """
        fan = self.fan
        inverses = []
        for cone in fan.max_cones:
            rows = IntMatrix([fan.rays[i] for i in cone])
            inverses.append((cone, rows.T.inv()))
        result = []
        for j in range(fan.lattice_rank):
            pair = []
            for sign in (1, -1):
                target = IntMatrix([sign if k == j else 0 for k in range(fan.lattice_rank)])
                for cone, inverse in inverses:
                    coefficients = inverse * target
                    if all(c >= 0 for c in coefficients):
                        full = [Fraction(0)] * self.n
                        for rho, c in zip(cone, coefficients):
                            full[rho] = Fraction(int(c.p), int(c.q))
                        pair.append(tuple(full))
                        break
                else:
                    raise ValidationError(f"direction {'+' if sign > 0 else '-'}e_{j} lies in no maximal cone")
            result.append((pair[0], pair[1]))
        return result


def cox_grading(f: Fan) -> CoxGrading:
    """
    Builds the Cox grading of a smooth complete fan.

    The chart sigma is the first maximal cone. Rays outside sigma get unit weights in order; a ray
    rho in sigma gets minus the vector of pairings of its dual basis element with the other rays.

    Raises:
        UnsupportedInputError: If the rays do not span N or the class group has torsion.
        ValidationError: If the fan is not smooth and complete.
    """
    if _rank(f.rays) != f.lattice_rank:
        raise UnsupportedInputError("rays do not span N (torus factor)")
    diagonal = _smith_diagonal(f.rays)
    if any(abs(x) != 1 for x in diagonal):
        raise UnsupportedInputError(f"class group has torsion (invariant factors {diagonal})")
    require_valid(f)

    chart = tuple(f.max_cones[0])
    others = [rho for rho in range(f.n_rays) if rho not in set(chart)]
    chart_rows = IntMatrix([f.rays[i] for i in chart])
    dual = chart_rows.inv()  # column k is the dual basis element of ray chart[k]
    r = len(others)

    weights: Dict[int, Weight] = {}
    for position, rho in enumerate(others):
        weights[rho] = tuple(1 if j == position else 0 for j in range(r))
    for k, rho in enumerate(chart):
        m_rho = [int(dual[i, k]) for i in range(f.lattice_rank)]
        weights[rho] = tuple(-f.pairing(m_rho, tau) for tau in others)

    grading = tuple(weights[rho] for rho in range(f.n_rays))
    kernel_basis = tuple(tuple(ray) for ray in f.rays)
    g = CoxGrading(f, f.n_rays, r, grading, kernel_basis, chart)
    for j in range(f.lattice_rank):
        column = [kernel_basis[rho][j] for rho in range(g.n)]
        if any(g.degree(column)):
            raise UnsupportedInputError("grading does not annihilate M")
    logging.debug(f"Cox grading: weights {grading}")
    return g


def _integer_range(low: Fraction, high: Fraction) -> range:
    return range(math.ceil(low), math.floor(high) + 1)


def monomials_of_degree(g: CoxGrading, chi: Sequence[int]) -> List[Exponent]:
    """
    All exponent vectors u >= 0 with degree chi, sorted lexicographically.

    Solutions are u = f0 + (pairings with m) for m in M, with f0 the lift of chi; m is bounded by
    writing each +-e_j as a nonnegative combination of the rays of a cone.

    Raises:
        ComputationError: If the search box exceeds MONOMIAL_BOX_LIMIT points.
    """
    f0 = g.lift(tuple(chi))
    bounds = []
    for plus, minus in g.box_coefficients:
        low = -sum(c * f0[rho] for rho, c in enumerate(plus))
        high = sum(c * f0[rho] for rho, c in enumerate(minus))
        bounds.append(_integer_range(low, high))
    size = math.prod(len(b) for b in bounds)
    if size > MONOMIAL_BOX_LIMIT:
        raise ComputationError(f"monomial search box for degree {tuple(chi)} has {size} points")
    found = []
    for m in itertools.product(*bounds):
        u = tuple(a + b for a, b in zip(f0, g.embed(m)))
        if all(x >= 0 for x in u):
            found.append(u)
    return sorted(found)


def count_monomials(g: CoxGrading, chi: Sequence[int]) -> int:
    return len(monomials_of_degree(g, chi))


def divisor_class(g: CoxGrading, divisor: Sequence[int]) -> Weight:
    if len(divisor) != g.n:
        raise ValidationError(f"divisor has {len(divisor)} coefficients, expected {g.n}")
    return g.degree(divisor)


@lru_cache(maxsize=4096)
def _reduced_cohomology(fan: Fan, vertices: FrozenSet[int]) -> Tuple[Tuple[int, int], ...]:
    """Reduced cohomology of the subcomplex of cones with all rays in `vertices`, over Q."""
    faces_by_size: Dict[int, List[Tuple[int, ...]]] = {}
    for face in fan.faces:
        if face <= vertices:
            faces_by_size.setdefault(len(face), []).append(tuple(sorted(face)))
    for faces in faces_by_size.values():
        faces.sort()
    # Augmented cochain complex: degree k holds faces with k + 1 rays.
    dims = {k - 1: len(faces) for k, faces in faces_by_size.items()}
    differentials = {}
    for size, faces in faces_by_size.items():
        larger = faces_by_size.get(size + 1)
        if not larger:
            continue
        index = {face: i for i, face in enumerate(larger)}
        grid = [[0] * len(faces) for _ in larger]
        for j, face in enumerate(faces):
            for v in vertices - set(face):
                bigger = tuple(sorted((*face, v)))
                if bigger in index:
                    grid[index[bigger]][j] = (-1) ** bigger.index(v)
        differentials[size - 1] = Matrix.from_rows(RATIONALS, grid, len(faces))
    return tuple(sorted(cohomology_dims(CochainComplex(RATIONALS, dims, differentials)).items()))


def _cohomology_box(f: Fan, divisor: Sequence[int]) -> List[range]:
    """Bounding box of the vertices of the arrangement <m, u_rho> = -a_rho - 1/2."""
    rank = f.lattice_rank
    lows = [None] * rank
    highs = [None] * rank
    for subset in itertools.combinations(range(f.n_rays), rank):
        rows = IntMatrix([f.rays[i] for i in subset])
        if rows.det() == 0:
            continue
        rhs = IntMatrix([Fraction(-2 * divisor[i] - 1, 2) for i in subset])
        solution = rows.LUsolve(rhs)
        for j in range(rank):
            x = Fraction(int(solution[j].p), int(solution[j].q))
            lows[j] = x if lows[j] is None else min(lows[j], x)
            highs[j] = x if highs[j] is None else max(highs[j], x)
    return [_integer_range(lo, hi) for lo, hi in zip(lows, highs)]


def line_bundle_cohomology(f: Fan, divisor: Sequence[int]) -> Dict[int, int]:
    """
    dim H^p(X, O(D)) for p = 0..dim X, for D = sum a_rho D_rho.

    Sums, over characters m, the reduced cohomology in degree p - 1 of the subcomplex on the rays
    with <m, u_rho> < -a_rho.
    """
    require_valid(f)
    if len(divisor) != f.n_rays:
        raise ValidationError(f"divisor has {len(divisor)} coefficients, expected {f.n_rays}")
    divisor = tuple(int(a) for a in divisor)
    box = _cohomology_box(f, divisor)
    size = math.prod(len(b) for b in box)
    if size > MONOMIAL_BOX_LIMIT:
        raise ComputationError(f"cohomology search box has {size} characters")

    supports: Counter = Counter()
    for m in itertools.product(*box):
        supports[frozenset(rho for rho in range(f.n_rays) if f.pairing(m, rho) < -divisor[rho])] += 1
    ordered = sorted(supports, key=lambda s: tuple(sorted(s)))
    logging.debug(f"Line bundle cohomology of {divisor}: {size} characters, {len(ordered)} distinct supports")
    results = get_task_service().map_ordered(lambda s: _reduced_cohomology(f, s), ordered)

    total = {p: 0 for p in range(f.lattice_rank + 1)}
    for support, reduced in zip(ordered, results):
        for degree, dim in reduced:
            total[degree + 1] += dim * supports[support]
    return total


def cohomology_of_class(g: CoxGrading, chi: Sequence[int]) -> Dict[int, int]:
    return line_bundle_cohomology(g.fan, g.lift(tuple(chi)))
