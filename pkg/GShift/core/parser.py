# Parser for the map DSL and for presentation files
#
#   piece <cond>: <poly>      cond: all | n>=a | n>a | n<=a | n<a | n==a | a<=n<=b
#   except <a> -> <b>
#   map <name>                presentation files only; opens a generator block
#   param <key> = <value>     presentation files only
#
# Statements end at a newline or ';'. '#' starts a comment.
from __future__ import annotations

import logging
import re
from dataclasses import dataclass, field
from tokenize import TokenError
from typing import Dict, List, Optional, Tuple

import sympy
from sympy.parsing.sympy_parser import convert_xor, parse_expr, standard_transformations
from sympy.polys.polyerrors import PolynomialError

from ..errors import DegreeError, MapSyntaxError, PartitionError, PresentationError
from .index_map import IndexMap, Piece
from .intervals import Interval
from .polynomial import DEFAULT_MAX_DEGREE, IntPoly
from .words import NAME_PATTERN, Presentation

logger = logging.getLogger(__name__)

N = sympy.Symbol("n", integer=True)
TRANSFORMATIONS = standard_transformations + (convert_xor,)

_POLY_CHARS = re.compile(r"[0-9n+\-*^()\s]")
_INT = r"[+-]?\d+"
_ONE_SIDED = re.compile(rf"n(>=|<=|==|>|<)({_INT})\Z")
_TWO_SIDED = re.compile(rf"({_INT})(<=|<)n(<=|<)({_INT})\Z")
_EXCEPT = re.compile(rf"except\s+({_INT})\s*->\s*({_INT})\Z")
_PARAM = re.compile(r"param\s+([A-Za-z_][A-Za-z0-9_]*)\s*=\s*(\S.*)\Z")
# past this degree bound a polynomial is rejected without expanding it
EXPAND_LIMIT = 64


@dataclass(frozen=True)
class Statement:
    text: str
    line: int
    column: int

    def error(self, message: str, offset: int = 0) -> MapSyntaxError:
        return MapSyntaxError(message, self.line, self.column + offset, self.text)


def split_statements(source: str) -> List[Statement]:
    """Split source into non-empty statements with 1-based line and column."""
    statements = []
    for line_no, raw in enumerate(source.splitlines(), start=1):
        line = raw.split("#", 1)[0]
        start = 0
        for chunk in line.split(";"):
            stripped = chunk.strip()
            if stripped:
                column = start + (len(chunk) - len(chunk.lstrip())) + 1
                statements.append(Statement(stripped, line_no, column))
            start += len(chunk) + 1
    return statements


def parse_poly(text: str, max_degree: int = DEFAULT_MAX_DEGREE, where: Optional[Statement] = None,
               offset: int = 0) -> IntPoly:
    """
    Parse an integer polynomial in n written with + - * ^, parentheses and
    integer literals.

    Raises:
        MapSyntaxError: anything outside that grammar, or rational coefficients
        DegreeError: degree above ``max_degree``
    """
    where = where or Statement(text, 1, 1)

    for i, ch in enumerate(text):
        if not _POLY_CHARS.match(ch):
            raise where.error(f"unexpected character {ch!r} in polynomial", offset + i)
    if not text.strip():
        raise where.error("missing polynomial", offset)

    try:
        expr = parse_expr(text, local_dict={"n": N}, transformations=TRANSFORMATIONS, evaluate=True)
    except (SyntaxError, TokenError, TypeError, sympy.SympifyError) as e:
        raise where.error(f"malformed polynomial {text.strip()!r}", offset) from e

    bound = _degree_bound(expr)
    if bound > max(max_degree, EXPAND_LIMIT):
        raise DegreeError(bound, max_degree, f"parsing line {where.line}")

    try:
        poly = sympy.Poly(expr, N)
    except PolynomialError as e:
        raise where.error(f"{text.strip()!r} is not a polynomial in n", offset) from e
    if not poly.get_domain().is_ZZ:
        raise where.error(f"{text.strip()!r} does not have integer coefficients", offset)

    result = IntPoly(tuple(int(c) for c in reversed(poly.all_coeffs())))
    if result.degree > max_degree:
        raise DegreeError(result.degree, max_degree, f"parsing line {where.line}")
    return result


def _degree_bound(expr) -> int:
    """Upper bound on the degree in n, read off the unexpanded expression tree."""
    if expr.is_Symbol:
        return 1
    if expr.is_Add:
        return max(_degree_bound(arg) for arg in expr.args)
    if expr.is_Mul:
        return sum(_degree_bound(arg) for arg in expr.args)
    if expr.is_Pow and expr.exp.is_Integer:
        return _degree_bound(expr.base) * abs(int(expr.exp))
    return 0


def parse_condition(text: str, where: Statement, offset: int = 0) -> Interval:
    compact = re.sub(r"\s+", "", text)
    if compact == "all":
        return Interval.all()

    match = _ONE_SIDED.match(compact)
    if match:
        op, a = match.group(1), int(match.group(2))
        return {
            ">=": Interval(a, None),
            ">": Interval(a + 1, None),
            "<=": Interval(None, a),
            "<": Interval(None, a - 1),
            "==": Interval.point(a),
        }[op]

    match = _TWO_SIDED.match(compact)
    if match:
        lo = int(match.group(1)) + (1 if match.group(2) == "<" else 0)
        hi = int(match.group(4)) - (1 if match.group(3) == "<" else 0)
        interval = Interval(lo, hi)
        if interval.is_empty():
            raise where.error(f"condition {text.strip()!r} holds for no integer", offset)
        return interval

    raise where.error(f"bad condition {text.strip()!r}", offset)


class _MapBuilder:
    """Collects piece and except statements of one map."""

    def __init__(self, max_degree: int):
        self.max_degree = max_degree
        self.pieces: List[Piece] = []
        self.exceptions: Dict[int, int] = {}
        self.first: Optional[Statement] = None

    def add(self, stmt: Statement):
        self.first = self.first or stmt
        if stmt.text.startswith("piece"):
            self._add_piece(stmt)
        elif stmt.text.startswith("except"):
            match = _EXCEPT.match(stmt.text)
            if not match:
                raise stmt.error("expected 'except <a> -> <b>'")
            key, value = int(match.group(1)), int(match.group(2))
            if key in self.exceptions:
                raise stmt.error(f"exception for n={key} given twice")
            self.exceptions[key] = value
        else:
            raise stmt.error(f"expected 'piece' or 'except', got {stmt.text.split()[0]!r}")

    def _add_piece(self, stmt: Statement):
        body = stmt.text[len("piece"):]
        if ":" not in body:
            raise stmt.error("expected ':' after the piece condition", len(stmt.text))
        cond, poly_text = body.split(":", 1)
        cond_offset = len("piece")
        poly_offset = cond_offset + len(cond) + 1
        domain = parse_condition(cond, stmt, cond_offset)
        poly = parse_poly(poly_text, self.max_degree, stmt, poly_offset)
        self.pieces.append(Piece(domain, poly))

    def build(self) -> IndexMap:
        if not self.pieces:
            line = self.first.line if self.first else None
            raise PartitionError("map has no pieces", line)
        try:
            return IndexMap(self.pieces, self.exceptions).normalize()
        except PartitionError as e:
            raise PartitionError(e.message, self.first.line, None, None) from e


def parse_map(text: str, max_degree: int = DEFAULT_MAX_DEGREE) -> IndexMap:
    """
    Parse DSL source into a canonical IndexMap.

    >>> str(parse_map("piece n>=0: n; piece n<0: -n"))
    'piece n<=-1: -n; piece n>=0: n'
    """
    builder = _MapBuilder(max_degree)
    for stmt in split_statements(text):
        builder.add(stmt)
    return builder.build()


def format_map(index_map: IndexMap) -> str:
    return index_map.to_source()


@dataclass
class PresentationSource:
    """A parsed presentation file: generators plus raw `param` values."""

    presentation: Presentation
    params: Dict[str, str] = field(default_factory=dict)
    source: str = ""


def parse_presentation(text: str, max_degree: Optional[int] = None) -> PresentationSource:
    """
    Parse a presentation file. A ``param max_degree`` line in the file
    applies to its maps unless ``max_degree`` is given.

    Raises:
        MapSyntaxError: bad statements, with line and column
        PresentationError: no maps, duplicate names, malformed params
    """
    params: Dict[str, str] = {}
    blocks: List[Tuple[str, Statement, List[Statement]]] = []

    for stmt in split_statements(text):
        head = stmt.text.split(None, 1)[0]
        if head == "map":
            parts = stmt.text.split()
            if len(parts) != 2 or not NAME_PATTERN.match(parts[1]):
                raise stmt.error("expected 'map <name>'")
            if any(name == parts[1] for name, _, _ in blocks):
                raise stmt.error(f"generator {parts[1]!r} is defined twice")
            blocks.append((parts[1], stmt, []))
        elif head == "param":
            match = _PARAM.match(stmt.text)
            if not match:
                raise stmt.error("expected 'param <key> = <value>'")
            params[match.group(1)] = match.group(2).strip()
        elif not blocks:
            raise stmt.error("statement outside a 'map' block")
        else:
            blocks[-1][2].append(stmt)

    if not blocks:
        raise PresentationError("presentation defines no maps")

    if max_degree is None:
        try:
            max_degree = int(params.get("max_degree", DEFAULT_MAX_DEGREE))
        except ValueError as e:
            raise PresentationError(f"bad value for parameter max_degree: {e}") from e

    generators = []
    for name, header, statements in blocks:
        builder = _MapBuilder(max_degree)
        builder.first = header
        for stmt in statements:
            builder.add(stmt)
        generators.append((name, builder.build()))
        logger.debug("parsed generator %s: %s", name, generators[-1][1])

    return PresentationSource(Presentation(generators), params, text)
