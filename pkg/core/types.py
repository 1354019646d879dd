"""
Type definitions for ecquiver.

This module provides the enums and report dataclasses shared by the library
modules and the command-line front end.
"""

from dataclasses import asdict, dataclass, field
from enum import Enum, IntEnum
from typing import Any, Dict, List, Optional, Tuple

Weight = Tuple[int, ...]
Exponent = Tuple[int, ...]


class FieldKind(Enum):
    """Enumeration of supported ground fields."""

    RATIONALS = "q"
    PRIME = "fp"


class OutputFormat(Enum):
    """Enumeration of output formats for command results."""

    TEXT = "text"
    JSON = "json"


class Flavor(Enum):
    """Enumeration of weight quiver flavors."""

    TORIC = "toric"
    ALGEBRA = "algebra"


class StatusType(Enum):
    """Enumeration of status types."""

    OK = "ok"
    VALIDATION_FAILED = "validation_failed"
    ERROR = "error"


class ExitCode(IntEnum):
    """Process exit codes."""

    OK = 0
    VALIDATION = 1
    COMPUTATION = 2


@dataclass
class StatusMessage:
    """Structured status message."""

    status: StatusType = StatusType.ERROR
    message: str = ""
    exit_code: ExitCode = ExitCode.COMPUTATION


@dataclass
class FanReport:
    """Smoothness and completeness flags of a fan, with offending cones."""

    smooth: bool
    complete: bool
    primitive: bool = True
    non_primitive_rays: List[int] = field(default_factory=list)
    non_smooth_cones: List[int] = field(default_factory=list)
    unmatched_faces: List[Tuple[int, ...]] = field(default_factory=list)
    spans: bool = True

    @property
    def ok(self) -> bool:
        return self.smooth and self.complete and self.primitive

    def describe(self) -> str:
        parts = [f"smooth {'yes' if self.smooth else 'no'}", f"complete {'yes' if self.complete else 'no'}"]
        if self.non_primitive_rays:
            parts.append(f"non-primitive rays {self.non_primitive_rays}")
        if self.non_smooth_cones:
            parts.append(f"non-smooth cones {self.non_smooth_cones}")
        if self.unmatched_faces:
            parts.append(f"faces not shared by two cones {[list(f) for f in self.unmatched_faces]}")
        if not self.spans:
            parts.append("rays do not span")
        return ", ".join(parts)


@dataclass
class CheckResult:
    """One named check inside a report, with an optional witness."""

    name: str
    passed: bool
    witness: Optional[str] = None


@dataclass
class TransparencyReport:
    """Outcome of the transparency checks on a weight collection."""

    weights: List[Weight]
    strong_exceptional: CheckResult
    hom_equality: CheckResult
    cardinality: CheckResult

    @property
    def passed(self) -> bool:
        return self.strong_exceptional.passed and self.hom_equality.passed and self.cardinality.passed

    @property
    def verdict(self) -> str:
        return "transparent up to fullness" if self.passed else "not transparent"


@dataclass
class BondalRuanReport:
    """Outcome of the Bondal-Ruan type check for both sign calibrations."""

    bondal_ruan: bool
    reports: Dict[int, TransparencyReport]


def report_to_dict(report: Any) -> Dict[str, Any]:
    """Convert a report dataclass to a dictionary for JSON output."""
    data = asdict(report)
    if isinstance(report, TransparencyReport):
        data["passed"] = report.passed
        data["verdict"] = report.verdict
    if isinstance(report, FanReport):
        data["ok"] = report.ok
    return data
