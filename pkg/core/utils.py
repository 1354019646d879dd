import os
import platform
from fractions import Fraction
from pathlib import Path

from .constants import APP_HOME_ENV, APP_NAME


def get_app_data_dir() -> Path:
    """Gets the platform-specific application data directory for persistent data."""
    override = os.environ.get(APP_HOME_ENV)
    if override:
        return Path(override)
    if platform.system() == "Windows":
        # APPDATA/Roaming
        return Path.home() / "AppData" / "Roaming" / APP_NAME
    elif platform.system() == "Darwin":
        # ~/Library/Application Support
        return Path.home() / "Library" / "Application Support" / APP_NAME
    else:  # Linux and other Unix-like systems
        # ~/.config
        return Path.home() / ".config" / APP_NAME


def parse_rational(value) -> Fraction:
    """
    Parses an integer, a Fraction, or a string such as "3", "-1/2" into an exact rational.

    Raises:
        ValueError: If the value is a float or cannot be read as a rational.
    """
    if isinstance(value, bool) or isinstance(value, float):
        raise ValueError(f"Inexact value {value!r} is not allowed")
    if isinstance(value, (int, Fraction)):
        return Fraction(value)
    if isinstance(value, str):
        text = value.strip()
        if not text or "." in text or "e" in text.lower():
            raise ValueError(f"Cannot read {value!r} as an exact rational")
        return Fraction(text)
    raise ValueError(f"Unsupported scalar {value!r}")


def format_weight(weight: tuple[int, ...]) -> str:
    """Formats a weight as an integer for rank 1 and as a tuple otherwise."""
    if len(weight) == 1:
        return str(weight[0])
    return "(" + ",".join(str(w) for w in weight) + ")"
