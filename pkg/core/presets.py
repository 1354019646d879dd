"""Built-in fans and algebras, addressable by name from the command line."""

import itertools
from typing import Callable, Dict, List

from .algebra import (
    Algebra,
    matrix_algebra,
    monomial_square,
    product_algebra,
    truncated_poly,
    upper_triangular,
)
from .error_handling import ValidationError
from .linalg import RATIONALS, Field
from .toric import Fan


def projective_space_fan(n: int) -> Fan:
    """Rays e_1..e_n and -(e_1 + ... + e_n); the first cone is the standard chart."""
    if n < 1:
        raise ValidationError("projective spaces need n >= 1")
    rays = [[1 if j == i else 0 for j in range(n)] for i in range(n)] + [[-1] * n]
    cones = [list(c) for c in itertools.combinations(range(n + 1), n)]
    return Fan.from_data(n, rays, cones)


def _square(rays: List[List[int]]) -> Fan:
    return Fan.from_data(2, rays, [[0, 1], [1, 2], [2, 3], [3, 0]])


FAN_PRESETS: Dict[str, Callable[[], Fan]] = {
    "p1": lambda: projective_space_fan(1),
    "p2": lambda: projective_space_fan(2),
    "p3": lambda: projective_space_fan(3),
    "p4": lambda: projective_space_fan(4),
    "p1xp1": lambda: _square([[1, 0], [0, 1], [-1, 0], [0, -1]]),
    "f2": lambda: _square([[1, 0], [0, 1], [-1, 2], [0, -1]]),
    "blp2": lambda: _square([[1, 0], [1, 1], [0, 1], [-1, -1]]),
}

ALGEBRA_PRESETS: Dict[str, Callable[[Field], Algebra]] = {
    "k2": lambda field: product_algebra(2, field),
    "k3": lambda field: product_algebra(3, field),
    "dual2": lambda field: truncated_poly(2, field),
    "dual3": lambda field: truncated_poly(3, field),
    "msq": lambda field: monomial_square(field),
    "mat2": lambda field: matrix_algebra(2, field),
    "ut2": lambda field: upper_triangular(2, field),
}


def fan_preset(name: str) -> Fan:
    try:
        return FAN_PRESETS[name.lower()]()
    except KeyError:
        raise ValidationError(f"unknown fan preset '{name}', expected one of {sorted(FAN_PRESETS)}") from None


def algebra_preset(name: str, field: Field = RATIONALS) -> Algebra:
    try:
        return ALGEBRA_PRESETS[name.lower()](field)
    except KeyError:
        raise ValidationError(f"unknown algebra preset '{name}', expected one of {sorted(ALGEBRA_PRESETS)}") from None
