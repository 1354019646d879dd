"""
The floor map on the torus M_R/M, its image (the Bondal-Thomsen collection), transparency
checks and the stratification of the torus by the level sets of the floor map.

Points of M_R are written B.t with B the kernel basis of the Cox grading, so coordinate rho of
a point is <t, u_rho>. The fundamental domain [0,1]^r is cut by every hyperplane
<t, u_rho> = k; every face of the resulting polyhedral complex, taken up to translation by M,
is one piece of a stratum.
"""

from __future__ import annotations

import functools
import itertools
import logging
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, FrozenSet, Iterable, List, Optional, Sequence, Set, Tuple

import networkx as nx

from .constants import GEOMETRY_MAX_RANK, SAMPLED_DENOMINATOR, SVG_LEGEND_WIDTH_PX, SVG_RANK, SVG_SIZE_PX
from .error_handling import UnsupportedInputError, ValidationError
from .linalg import RATIONALS, Matrix
from .task_service import get_task_service
from .toric import CoxGrading, Fan, count_monomials, cox_grading, line_bundle_cohomology
from .types import BondalRuanReport, CheckResult, TransparencyReport, Weight
from .utils import format_weight

Point = Tuple[Fraction, ...]
Constraint = Tuple[Tuple[int, ...], int]  # <a, t> <= b


@dataclass(frozen=True)
class FloorChart:
    """Coordinates t on M_R through the kernel basis of the grading."""

    grading: CoxGrading

    @property
    def rank(self) -> int:
        return self.grading.lattice_rank

    def coordinates(self, t: Sequence[Fraction]) -> Tuple[Fraction, ...]:
        """The point B.t of M_R inside R^n."""
        rays = self.grading.fan.rays
        return tuple(sum(Fraction(a) * x for a, x in zip(ray, t)) for ray in rays)

    def floor_vector(self, t: Sequence[Fraction]) -> Tuple[int, ...]:
        return tuple(math.floor(x) for x in self.coordinates(t))

    def floor_map(self, t: Sequence[Fraction]) -> Weight:
        """F(t) = grading(floor(B.t))."""
        return self.grading.degree(self.floor_vector(t))


@dataclass(frozen=True)
class ThetaCollection:
    """The image of the floor map, stored with the sign convention that was applied."""

    weights: FrozenSet[Weight]
    convention_sign: int = 1

    def calibrated(self, sign: int) -> "ThetaCollection":
        if sign not in (1, -1):
            raise ValidationError(f"convention sign must be +1 or -1, got {sign}")
        if sign == self.convention_sign:
            return self
        return ThetaCollection(frozenset(tuple(-x for x in w) for w in self.weights), sign)

    def sorted_weights(self) -> List[Weight]:
        return sorted(self.weights, reverse=True)


# --- Exact cell decomposition ---


@dataclass(frozen=True)
class _Cell:
    constraints: Tuple[Constraint, ...]
    vertices: FrozenSet[Point]


def _dot(a: Sequence[int], t: Sequence[Fraction]) -> Fraction:
    return sum((x * y for x, y in zip(a, t)), Fraction(0))


def _unit_cube(r: int) -> _Cell:
    constraints = []
    for i in range(r):
        e = tuple(1 if j == i else 0 for j in range(r))
        constraints.append((tuple(-x for x in e), 0))
        constraints.append((e, 1))
    vertices = frozenset(tuple(Fraction(x) for x in corner) for corner in itertools.product((0, 1), repeat=r))
    return _Cell(tuple(constraints), vertices)


def _tight(constraints: Iterable[Constraint], p: Point) -> List[Tuple[int, ...]]:
    return [a for a, b in constraints if _dot(a, p) == b]


def _is_vertex(constraints: Sequence[Constraint], p: Point, r: int) -> bool:
    tight = _tight(constraints, p)
    return len(tight) >= r and Matrix.from_rows(RATIONALS, tight, r).rank() == r


def _split(cell: _Cell, normal: Tuple[int, ...], level: int, r: int) -> List[_Cell]:
    values = {v: _dot(normal, v) - level for v in cell.vertices}
    negative = [v for v, s in values.items() if s < 0]
    positive = [v for v, s in values.items() if s > 0]
    if not negative or not positive:
        return [cell]
    on_plane = [v for v, s in values.items() if s == 0]
    crossings = []
    for v in negative:
        for w in positive:
            lam = values[v] / (values[v] - values[w])
            crossings.append(tuple(x + lam * (y - x) for x, y in zip(v, w)))
    result = []
    for side, keep in ((1, negative), (-1, positive)):
        constraints = cell.constraints + ((tuple(side * a for a in normal), side * level),)
        candidates = set(keep) | set(on_plane) | set(crossings)
        vertices = frozenset(p for p in candidates if _is_vertex(constraints, p, r))
        result.append(_Cell(constraints, vertices))
    return result


def _hyperplanes(fan: Fan) -> List[Tuple[Tuple[int, ...], int]]:
    planes = []
    for ray in fan.rays:
        low = sum(min(0, a) for a in ray)
        high = sum(max(0, a) for a in ray)
        planes.extend((tuple(ray), k) for k in range(low + 1, high))
    return planes


def _decompose_cube(fan: Fan) -> List[_Cell]:
    r = fan.lattice_rank
    cells = [_unit_cube(r)]
    for normal, level in _hyperplanes(fan):
        cells = [piece for cell in cells for piece in _split(cell, normal, level, r)]
    logging.debug(f"Cube decomposition: {len(cells)} full-dimensional cells")
    return cells


def _affine_dim(points: Sequence[Point], r: int) -> int:
    if len(points) <= 1:
        return 0
    base = points[0]
    rows = [[x - y for x, y in zip(p, base)] for p in points[1:]]
    return Matrix.from_rows(RATIONALS, rows, r).rank()


def _cell_faces(cell: _Cell, r: int) -> Dict[FrozenSet[Point], Tuple[int, Tuple[FrozenSet[Point], ...]]]:
    """Every face of a cell, mapped to (dimension, facets)."""
    faces: Dict[FrozenSet[Point], Tuple[int, Tuple[FrozenSet[Point], ...]]] = {}
    level = [cell.vertices]
    dim = r
    while level:
        next_level: List[FrozenSet[Point]] = []
        for face in level:
            facets = []
            if dim > 0:
                for a, b in cell.constraints:
                    sub = frozenset(v for v in face if _dot(a, v) == b)
                    if sub and sub != face and sub not in facets and _affine_dim(sorted(sub), r) == dim - 1:
                        facets.append(sub)
            facets.sort(key=sorted)
            faces[face] = (dim, tuple(facets))
            for facet in facets:
                if facet not in next_level and facet not in faces:
                    next_level.append(facet)
        level = sorted(next_level, key=sorted)
        dim -= 1
    return faces


def _pulling_simplices(face: FrozenSet[Point], lattice) -> List[Tuple[Point, ...]]:
    """A pulling triangulation of a face; returns simplices as vertex tuples."""
    dim, facets = lattice[face]
    apex = min(face)
    if dim == 0:
        return [(apex,)]
    simplices = []
    for facet in facets:
        if apex in facet:
            continue
        simplices.extend((apex, *s) for s in _pulling_simplices(facet, lattice))
    return simplices


def _volume(face: FrozenSet[Point], lattice, r: int) -> Fraction:
    total = Fraction(0)
    for simplex in _pulling_simplices(face, lattice):
        base = simplex[0]
        rows = [[x - y for x, y in zip(p, base)] for p in simplex[1:]]
        total += abs(RATIONALS.key(Matrix.from_rows(RATIONALS, rows, r).det()))
    return total / math.factorial(r)


def _barycenter(points: Iterable[Point]) -> Point:
    points = list(points)
    return tuple(sum(coords, Fraction(0)) / len(points) for coords in zip(*points))


@dataclass(frozen=True)
class Chamber:
    """A face of the arrangement on the torus: floor vector, interior sample point and its copies in the cube."""

    floor: Tuple[int, ...]
    point: Point
    dim: int
    volume: Fraction
    polytopes: Tuple[Tuple[Point, ...], ...]


def _torus_signature(chart: FloorChart, p: Point) -> Tuple:
    q = tuple(x - math.floor(x) for x in p)
    coords = chart.coordinates(q)
    return (
        tuple(math.floor(x) for x in coords),
        tuple(x.denominator == 1 for x in coords),
        tuple(x == 0 for x in q),
    )


@dataclass
class _Arrangement:
    chambers: Dict[Tuple, Chamber]
    # (face signature, signature of a face containing it)
    incidences: Set[Tuple[Tuple, Tuple]] = field(default_factory=set)


def _arrangement(g: CoxGrading, volumes: bool = True) -> _Arrangement:
    chart = FloorChart(g)
    r = g.lattice_rank
    cells = _decompose_cube(g.fan)
    lattices = get_task_service().map_ordered(lambda c: _cell_faces(c, r), cells)

    lattice: Dict[FrozenSet[Point], Tuple[int, Tuple[FrozenSet[Point], ...]]] = {}
    for cell_lattice in lattices:
        for face, data in cell_lattice.items():
            lattice.setdefault(face, data)

    copies: Dict[Tuple, List[FrozenSet[Point]]] = {}
    signature_of: Dict[FrozenSet[Point], Tuple] = {}
    for face in sorted(lattice, key=lambda f: (lattice[f][0], sorted(f))):
        signature = _torus_signature(chart, _barycenter(face))
        signature_of[face] = signature
        copies.setdefault(signature, []).append(face)

    chambers = {}
    for signature, faces in copies.items():
        first = faces[0]
        dim = lattice[first][0]
        point = tuple(x - math.floor(x) for x in _barycenter(first))
        volume = _volume(first, lattice, r) if volumes and dim == r else Fraction(0)
        chambers[signature] = Chamber(
            floor=chart.floor_vector(point),
            point=point,
            dim=dim,
            volume=volume,
            polytopes=tuple(tuple(sorted(f)) for f in faces),
        )

    incidences = set()
    for face, (_, facets) in lattice.items():
        for facet in facets:
            incidences.add((signature_of[facet], signature_of[face]))
    logging.debug(f"Arrangement on the torus: {len(chambers)} faces from {len(cells)} cells")
    return _Arrangement(chambers, incidences)


def theta_exact(g: CoxGrading) -> ThetaCollection:
    """
    The image of the floor map, by exact enumeration of all faces of the hyperplane arrangement.

    The returned collection uses convention_sign +1: Theta is the image itself, which is
    {-n, ..., 0} on P^n.
    """
    chart = FloorChart(g)
    arrangement = _arrangement(g, volumes=False)
    weights = frozenset(g.degree(c.floor) for c in arrangement.chambers.values())
    if chart.floor_map((Fraction(0),) * g.lattice_rank) not in weights:
        raise ValidationError("floor map image misses the zero weight")
    logging.info(f"Theta: {len(weights)} weights from {len(arrangement.chambers)} faces")
    return ThetaCollection(weights, 1)


def theta_sampled(g: CoxGrading, denominator: int = SAMPLED_DENOMINATOR) -> FrozenSet[Weight]:
    """
    The floor map evaluated on the grid t_i = j / (2D), 0 <= j < 2D.

    The grid holds the cell midpoints j/D + 1/(2D) together with the points j/D, so strata
    through lattice points are sampled as well.
    """
    if denominator < 2:
        raise ValidationError(f"sampling denominator must be at least 2, got {denominator}")
    steps = 2 * denominator
    rays = g.fan.rays
    r = g.lattice_rank

    def slice_image(first: int) -> Set[Tuple[int, ...]]:
        floors = set()
        for rest in itertools.product(range(steps), repeat=r - 1):
            j = (first, *rest)
            floors.add(tuple(sum(a * x for a, x in zip(ray, j)) // steps for ray in rays))
        return floors

    images = get_task_service().map_ordered(slice_image, range(steps))
    return frozenset(g.degree(f) for floors in images for f in floors)


# --- Transparency ---


def _difference(a: Weight, b: Weight) -> Weight:
    return tuple(x - y for x, y in zip(a, b))


def transparency_check(f: Fan, weights: Iterable[Weight]) -> TransparencyReport:
    """
    Strong exceptionality, hom equality with the Cox ring and the cardinality condition for a
    collection of line bundle weights.
    """
    g = cox_grading(f)
    collection = sorted(set(tuple(w) for w in weights), reverse=True)
    for w in collection:
        if len(w) != g.weight_rank:
            raise ValidationError(f"weight {format_weight(w)} has {len(w)} coordinates, expected {g.weight_rank}")

    differences = sorted({_difference(b, a) for a in collection for b in collection}, reverse=True)
    higher_failures = []
    hom_failures = []
    for delta in differences:
        cohomology = line_bundle_cohomology(f, g.lift(delta))
        for p, dim in sorted(cohomology.items()):
            if p > 0 and dim:
                higher_failures.append(f"H^{p}(O({format_weight(delta)})) = {dim}")
        monomials = count_monomials(g, delta)
        if cohomology[0] != monomials:
            hom_failures.append(f"H^0(O({format_weight(delta)})) = {cohomology[0]} but {monomials} monomials")

    cones = len(f.max_cones)
    report = TransparencyReport(
        weights=collection,
        strong_exceptional=CheckResult("strong exceptional", not higher_failures, "; ".join(higher_failures) or None),
        hom_equality=CheckResult("hom equality", not hom_failures, "; ".join(hom_failures) or None),
        cardinality=CheckResult(
            "cardinality",
            len(collection) == cones,
            None if len(collection) == cones else f"{len(collection)} weights for {cones} maximal cones",
        ),
    )
    logging.info(f"Transparency of {[format_weight(w) for w in collection]}: {report.verdict}")
    return report


def is_bondal_ruan_type(f: Fan) -> BondalRuanReport:
    """Runs the transparency checks on Theta and on -Theta."""
    theta = theta_exact(cox_grading(f))
    reports = {sign: transparency_check(f, theta.calibrated(sign).weights) for sign in (1, -1)}
    return BondalRuanReport(bondal_ruan=any(r.passed for r in reports.values()), reports=reports)


# --- Stratification ---


@dataclass(frozen=True)
class Stratification:
    grading: CoxGrading
    strata: Dict[Weight, Tuple[Chamber, ...]]
    order_h0: FrozenSet[Tuple[Weight, Weight]]
    order_closure: FrozenSet[Tuple[Weight, Weight]]
    geometry: bool = True
    violation: Optional[str] = None

    @property
    def labels(self) -> List[Weight]:
        return sorted(self.strata, reverse=True)

    @property
    def consistent(self) -> bool:
        return self.violation is None

    def total_volume(self) -> Fraction:
        return sum((c.volume for chambers in self.strata.values() for c in chambers), Fraction(0))


def _order_graph(labels: Iterable[Weight], relation: Iterable[Tuple[Weight, Weight]]) -> nx.DiGraph:
    graph = nx.DiGraph()
    graph.add_nodes_from(labels)
    graph.add_edges_from(relation)
    return graph


def stratify(g: CoxGrading, geometry: bool = True) -> Stratification:
    """
    Strata of the floor map with both orders.

    order_h0 relates chi1 <= chi2 when monomials of degree chi2 - chi1 exist. order_closure is the
    transitive closure of "a face labelled chi1 lies in the closure of a face labelled chi2".

    Weights-only mode still decomposes the torus, since the closure order is read off face
    incidences, but it skips the volumes and returns the labels without chambers.

    Raises:
        UnsupportedInputError: If chamber geometry is requested for rank M above GEOMETRY_MAX_RANK.
    """
    if geometry and g.lattice_rank > GEOMETRY_MAX_RANK:
        raise UnsupportedInputError(
            f"chamber geometry needs rank M <= {GEOMETRY_MAX_RANK}, got {g.lattice_rank}; use weights-only mode"
        )
    arrangement = _arrangement(g, volumes=geometry)
    strata: Dict[Weight, List[Chamber]] = {}
    for signature in sorted(arrangement.chambers):
        chamber = arrangement.chambers[signature]
        strata.setdefault(g.degree(chamber.floor), []).append(chamber)
    labels = sorted(strata, reverse=True)

    order_h0 = frozenset(
        (a, b) for a in labels for b in labels if a != b and count_monomials(g, _difference(b, a)) > 0
    )
    label_of = {s: g.degree(c.floor) for s, c in arrangement.chambers.items()}
    direct = {(label_of[lower], label_of[upper]) for lower, upper in arrangement.incidences}
    closure_graph = nx.transitive_closure(_order_graph(labels, (e for e in direct if e[0] != e[1])), reflexive=False)
    order_closure = frozenset(closure_graph.edges())

    h0_graph = nx.transitive_closure(_order_graph(labels, order_h0), reflexive=False)
    violation = None
    if set(h0_graph.edges()) != set(closure_graph.reverse(copy=True).edges()):
        only_h0 = sorted(set(h0_graph.edges()) - set(closure_graph.reverse(copy=True).edges()))
        only_closure = sorted(set(closure_graph.reverse(copy=True).edges()) - set(h0_graph.edges()))
        violation = f"H0 order and reversed closure order differ: only H0 {only_h0}, only closure {only_closure}"
        logging.warning(f"Convention violation: {violation}")

    if not geometry:
        strata = {label: [] for label in labels}
    return Stratification(
        grading=g,
        strata={label: tuple(chambers) for label, chambers in strata.items()},
        order_h0=order_h0,
        order_closure=order_closure,
        geometry=geometry,
        violation=violation,
    )


def stratum_poset_graphs(s: Stratification) -> Tuple[nx.DiGraph, nx.DiGraph]:
    """The H0 order and the closure order as directed graphs (edge a -> b meaning a <= b)."""
    return _order_graph(s.labels, s.order_h0), _order_graph(s.labels, s.order_closure)


# --- Drawing ---

PALETTE = (
    "#4e79a7",
    "#f28e2b",
    "#e15759",
    "#76b7b2",
    "#59a14f",
    "#edc948",
    "#b07aa1",
    "#ff9da7",
    "#9c755f",
    "#bab0ac",
)
MARGIN_PX = 20


def _angle_compare(center: Point, a: Point, b: Point) -> int:
    """Counter-clockwise order around center, starting from the positive x direction."""

    def half(p: Point) -> int:
        dx, dy = p[0] - center[0], p[1] - center[1]
        return 0 if (dy > 0 or (dy == 0 and dx > 0)) else 1

    ha, hb = half(a), half(b)
    if ha != hb:
        return ha - hb
    cross = (a[0] - center[0]) * (b[1] - center[1]) - (a[1] - center[1]) * (b[0] - center[0])
    return -1 if cross > 0 else (1 if cross < 0 else 0)


def _svg_xy(p: Point) -> Tuple[str, str]:
    x = MARGIN_PX + float(p[0]) * SVG_SIZE_PX
    y = MARGIN_PX + (1 - float(p[1])) * SVG_SIZE_PX
    return f"{x:.3f}", f"{y:.3f}"


def emit_strata_svg(s: Stratification) -> str:
    """
    Draws the fundamental square with every face colored by its stratum label.

    Raises:
        UnsupportedInputError: If rank M is not 2 or the stratification has no geometry.
    """
    if s.grading.lattice_rank != SVG_RANK or not s.geometry:
        raise UnsupportedInputError(f"strata drawings need rank M = {SVG_RANK} with chamber geometry")
    colors = {label: PALETTE[i % len(PALETTE)] for i, label in enumerate(s.labels)}
    width = SVG_SIZE_PX + 2 * MARGIN_PX + SVG_LEGEND_WIDTH_PX
    height = SVG_SIZE_PX + 2 * MARGIN_PX
    layers: Dict[int, List[str]] = {2: [], 1: [], 0: []}

    for label in s.labels:
        color = colors[label]
        for chamber in s.strata[label]:
            for polytope in chamber.polytopes:
                if chamber.dim == 2:
                    center = _barycenter(polytope)
                    ordered = sorted(polytope, key=functools.cmp_to_key(lambda a, b: _angle_compare(center, a, b)))
                    points = " ".join(",".join(_svg_xy(p)) for p in ordered)
                    layers[2].append(f'<polygon points="{points}" fill="{color}" stroke="none"/>')
                elif chamber.dim == 1:
                    (x1, y1), (x2, y2) = _svg_xy(polytope[0]), _svg_xy(polytope[-1])
                    layers[1].append(
                        f'<line x1="{x1}" y1="{y1}" x2="{x2}" y2="{y2}" stroke="{color}" stroke-width="4"/>'
                    )
                else:
                    x, y = _svg_xy(polytope[0])
                    layers[0].append(f'<circle cx="{x}" cy="{y}" r="6" fill="{color}" stroke="#000000"/>')

    lines = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" viewBox="0 0 {width} {height}">',
        f'<rect x="{MARGIN_PX}" y="{MARGIN_PX}" width="{SVG_SIZE_PX}" height="{SVG_SIZE_PX}"'
        ' fill="#ffffff" stroke="#000000"/>',
        *layers[2],
        *layers[1],
        *layers[0],
    ]
    legend_x = 2 * MARGIN_PX + SVG_SIZE_PX
    for i, label in enumerate(s.labels):
        y = MARGIN_PX + 24 * i
        lines.append(f'<rect x="{legend_x}" y="{y}" width="16" height="16" fill="{colors[label]}"/>')
        lines.append(
            f'<text x="{legend_x + 24}" y="{y + 13}" font-family="monospace" font-size="13">'
            f"{format_weight(label)}</text>"
        )
    lines.append("</svg>")
    return "\n".join(lines) + "\n"
