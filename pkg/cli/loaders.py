"""Reads fans, algebras and matrices from preset names or UTF-8 JSON files."""

import json
import logging
from pathlib import Path
from typing import Type, TypeVar

import pydantic

from core.algebra import Algebra
from core.config import AlgebraSpec, FanSpec, MatrixSpec
from core.error_handling import ValidationError, validation_error_from_pydantic
from core.linalg import Field, Matrix
from core.presets import ALGEBRA_PRESETS, FAN_PRESETS, algebra_preset, fan_preset
from core.toric import Fan

ALGEBRA_PREFIX = "pA:"

M = TypeVar("M", bound=pydantic.BaseModel)


def _load_model(path: str, model: Type[M]) -> M:
    file_path = Path(path)
    try:
        text = file_path.read_text(encoding="utf-8")
    except OSError as e:
        raise ValidationError(f"{path}: cannot read file: {e.strerror or e}") from e
    try:
        data = json.loads(text)
    except json.JSONDecodeError as e:
        raise ValidationError(f"{path}: invalid JSON at line {e.lineno} column {e.colno}: {e.msg}") from e
    try:
        return model.model_validate(data)
    except pydantic.ValidationError as e:
        raise validation_error_from_pydantic(e, path) from e


def load_fan(source: str) -> Fan:
    """A preset name such as 'p2' or the path of a fan JSON file."""
    if source.lower() in FAN_PRESETS:
        return fan_preset(source)
    fan = Fan.from_spec(_load_model(source, FanSpec))
    logging.debug(f"Loaded fan from {source}: {fan.n_rays} rays, {len(fan.max_cones)} cones")
    return fan


def load_algebra(source: str, field: Field) -> Algebra:
    """A preset name such as 'k2' (read in `field`) or an algebra JSON file, whose own field wins."""
    if source.startswith(ALGEBRA_PREFIX):
        source = source[len(ALGEBRA_PREFIX) :]
    if source.lower() in ALGEBRA_PRESETS:
        return algebra_preset(source, field)
    return Algebra.from_spec(_load_model(source, AlgebraSpec), field, name=Path(source).stem)


def load_matrix(source: str, field: Field) -> Matrix:
    spec = _load_model(source, MatrixSpec)
    return Matrix.from_rows(field, spec.rows)


def is_algebra_target(source: str) -> bool:
    return source.startswith(ALGEBRA_PREFIX)
