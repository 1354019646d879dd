"""
Parsers for the command-line mini-languages.

Weight lists are comma-separated integer tuples, e.g. "(0,0),(1,0),(-2,1)"; rank-one weights may
drop the parentheses ("0,1,2"). Sheaf expressions are built from O(d), Omega(i), sky[a0,...,an],
shift(n, e) and sum(e, e). Every parse error names the character offset it stopped at.
"""

from fractions import Fraction
from typing import Callable, List, Tuple

from core.error_handling import ValidationError
from core.sheaves import LineBundle, SheafExpr, Shift, Skyscraper, Sum, TwistedCotangentSimple
from core.types import Weight


class _Reader:
    """A cursor over the input text; whitespace between tokens is skipped."""

    def __init__(self, text: str, what: str):
        self.text = text
        self.what = what
        self.pos = 0

    def fail(self, message: str) -> ValidationError:
        return ValidationError(f"{self.what}: {message} at offset {self.pos} in {self.text!r}")

    def skip_spaces(self):
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def peek(self) -> str:
        self.skip_spaces()
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def at_end(self) -> bool:
        return self.peek() == ""

    def expect(self, token: str):
        self.skip_spaces()
        if not self.text.startswith(token, self.pos):
            found = self.text[self.pos] if self.pos < len(self.text) else "end of input"
            raise self.fail(f"expected '{token}', found '{found}'")
        self.pos += len(token)

    def accept(self, token: str) -> bool:
        self.skip_spaces()
        if self.text.startswith(token, self.pos):
            self.pos += len(token)
            return True
        return False

    def integer(self) -> int:
        self.skip_spaces()
        start = self.pos
        if self.pos < len(self.text) and self.text[self.pos] in "+-":
            self.pos += 1
        while self.pos < len(self.text) and self.text[self.pos].isdigit():
            self.pos += 1
        token = self.text[start : self.pos]
        if token in ("", "+", "-"):
            self.pos = start
            raise self.fail("expected an integer")
        return int(token)

    def rational(self) -> Fraction:
        numerator = self.integer()
        if self.accept("/"):
            start = self.pos
            denominator = self.integer()
            if denominator <= 0:
                self.pos = start
                raise self.fail("denominator must be positive")
            return Fraction(numerator, denominator)
        return Fraction(numerator)

    def word(self) -> str:
        self.skip_spaces()
        start = self.pos
        while self.pos < len(self.text) and self.text[self.pos].isalpha():
            self.pos += 1
        return self.text[start : self.pos]


def _tuple(reader: _Reader, scalar: Callable[[_Reader], object]) -> Tuple:
    if not reader.accept("("):
        return (scalar(reader),)
    values = [scalar(reader)]
    while reader.accept(","):
        values.append(scalar(reader))
    reader.expect(")")
    return tuple(values)


def _tuples(text: str, what: str, scalar: Callable[[_Reader], object]) -> List[Tuple]:
    reader = _Reader(text, what)
    if reader.at_end():
        raise reader.fail("empty list")
    result = [_tuple(reader, scalar)]
    while reader.accept(","):
        result.append(_tuple(reader, scalar))
    if not reader.at_end():
        raise reader.fail(f"unexpected '{reader.peek()}'")
    lengths = {len(t) for t in result}
    if len(lengths) > 1:
        raise ValidationError(f"{what}: tuples of different lengths {sorted(lengths)} in {text!r}")
    return result


def parse_weights(text: str) -> List[Weight]:
    """'(0,0),(1,0)' -> [(0, 0), (1, 0)]; '0,1' -> [(0,), (1,)]."""
    return _tuples(text, "weights", _Reader.integer)


def parse_points(text: str) -> List[Tuple[Fraction, ...]]:
    """Points with rational coordinates, e.g. '(1,0),(1,-1/2)'."""
    return _tuples(text, "points", _Reader.rational)


def parse_integers(text: str, what: str = "divisor") -> List[int]:
    """A flat comma-separated integer list, optionally in parentheses."""
    reader = _Reader(text, what)
    reader.accept("(")
    values = [reader.integer()]
    while reader.accept(","):
        values.append(reader.integer())
    reader.accept(")")
    if not reader.at_end():
        raise reader.fail(f"unexpected '{reader.peek()}'")
    return values


def _expression(reader: _Reader) -> SheafExpr:
    start = reader.pos
    name = reader.word()
    if name == "O":
        if reader.accept("("):
            degree = reader.integer()
            reader.expect(")")
            return LineBundle(degree)
        return LineBundle(0)
    if name == "Omega":
        reader.expect("(")
        index = reader.integer()
        reader.expect(")")
        return TwistedCotangentSimple(index)
    if name == "sky":
        reader.expect("[")
        point = [reader.rational()]
        while reader.accept(","):
            point.append(reader.rational())
        reader.expect("]")
        if all(x == 0 for x in point):
            raise reader.fail("a skyscraper needs a nonzero point")
        return Skyscraper(tuple(point))
    if name == "shift":
        reader.expect("(")
        n = reader.integer()
        reader.expect(",")
        inner = _expression(reader)
        reader.expect(")")
        return Shift(n, inner)
    if name == "sum":
        reader.expect("(")
        left = _expression(reader)
        reader.expect(",")
        right = _expression(reader)
        reader.expect(")")
        return Sum(left, right)
    reader.pos = start
    raise reader.fail(f"unknown sheaf '{name or reader.peek()}'")


def parse_sheaf(text: str) -> SheafExpr:
    """Reads one sheaf expression, e.g. 'sum(O(1), shift(1, sky[1,0]))'."""
    reader = _Reader(text, "sheaf")
    expr = _expression(reader)
    if not reader.at_end():
        raise reader.fail(f"unexpected '{reader.peek()}'")
    return expr
