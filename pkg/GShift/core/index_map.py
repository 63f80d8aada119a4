# Index maps phi: Z -> Z as finite exception tables over piecewise integer polynomials
from __future__ import annotations

import bisect
import logging
from dataclasses import dataclass
from itertools import islice
from typing import Dict, Iterable, Iterator, List, Optional, Tuple

from ..errors import DegreeError, PartitionError
from .intervals import Interval, coverage_segments, intersect_lists, merge_intervals
from .polynomial import (
    DEFAULT_MAX_DEGREE,
    IntPoly,
    integer_roots,
    monotone_runs,
    sign_segments,
    where_sign,
)
from .verdict import Verdict3

logger = logging.getLogger(__name__)

HASH_POINTS = range(-3, 4)
# finite cells above the degree limit are tabulated point by point up to this size
POINT_CELL_LIMIT = 1024


@dataclass(frozen=True)
class Piece:
    """One polynomial on one interval of the backbone."""

    domain: Interval
    poly: IntPoly

    def condition(self) -> str:
        lo, hi = self.domain.lo, self.domain.hi
        if lo is None and hi is None:
            return "all"
        if hi is None:
            return f"n>={lo}"
        if lo is None:
            return f"n<={hi}"
        if lo == hi:
            return f"n=={lo}"
        return f"{lo}<=n<={hi}"

    def __str__(self) -> str:
        return f"piece {self.condition()}: {self.poly}"


class IndexMap:
    """
    A total map Z -> Z.

    The backbone is an ordered list of pieces partitioning Z; the exceptions
    table overrides the backbone at finitely many points. Instances are
    immutable. Equality is exact equality of the maps as functions.
    """

    __slots__ = ("pieces", "exceptions", "_starts")

    def __init__(self, pieces: Iterable[Piece], exceptions: Optional[Dict[int, int]] = None):
        pieces = tuple(sorted((p for p in pieces if not p.domain.is_empty()),
                              key=lambda p: p.domain.sort_key()))
        self._check_partition(pieces)
        self.pieces: Tuple[Piece, ...] = pieces
        self.exceptions: Dict[int, int] = dict(sorted((exceptions or {}).items()))
        self._starts = [p.domain.lo for p in pieces[1:]]

    @staticmethod
    def _check_partition(pieces):
        if not pieces:
            raise PartitionError("a map needs at least one piece")
        if pieces[0].domain.lo is not None:
            raise PartitionError(f"pieces leave n={pieces[0].domain.lo - 1} uncovered")
        for before, after in zip(pieces, pieces[1:]):
            if before.domain.hi is None or after.domain.lo is None or after.domain.lo <= before.domain.hi:
                where = after.domain.lo if after.domain.lo is not None else before.domain.hi
                raise PartitionError(f"pieces overlap at n={where}")
            if after.domain.lo > before.domain.hi + 1:
                raise PartitionError(f"pieces leave n={before.domain.hi + 1} uncovered")
        if pieces[-1].domain.hi is not None:
            raise PartitionError(f"pieces leave n={pieces[-1].domain.hi + 1} uncovered")

    # -- construction -------------------------------------------------------

    @classmethod
    def from_poly(cls, poly: IntPoly) -> "IndexMap":
        return cls([Piece(Interval.all(), poly)])

    @classmethod
    def identity(cls) -> "IndexMap":
        return cls.from_poly(IntPoly.identity())

    @classmethod
    def with_support(cls, table: Dict[int, int]) -> "IndexMap":
        """Identity outside the finite table; used for finite-support permutations."""
        return cls([Piece(Interval.all(), IntPoly.identity())], table).normalize()

    def normalize(self) -> "IndexMap":
        """
        Canonical form: every single-point piece folds into a neighbouring
        piece, leaving an exception only where that neighbour's polynomial
        misses the value; adjacent pieces with equal polynomials are merged
        and exceptions equal to the backbone are dropped. Idempotent.
        """
        values = dict(self.exceptions)
        pieces: List[Piece] = []
        pending: List[int] = []
        for piece in self.pieces:
            if piece.domain.size() == 1:
                pending.append(piece.domain.lo)
                continue
            if pending:
                # the first and last pieces are unbounded, so a neighbour exists on both sides
                left = pieces[-1]
                points = [(n, self(n)) for n in pending]
                cut = pending[0] + _fold_split(left.poly, piece.poly, points)
                pieces[-1] = Piece(Interval(left.domain.lo, cut - 1), left.poly)
                piece = Piece(Interval(cut, piece.domain.hi), piece.poly)
                values.update(points)
                pending = []
            if pieces and pieces[-1].poly == piece.poly:
                pieces[-1] = Piece(Interval(pieces[-1].domain.lo, piece.domain.hi), piece.poly)
            else:
                pieces.append(piece)
        backbone = IndexMap(pieces)
        exceptions = {k: v for k, v in values.items() if backbone.backbone(k) != v}
        return IndexMap(pieces, exceptions)

    # -- evaluation ---------------------------------------------------------

    def piece_at(self, n: int) -> Piece:
        return self.pieces[bisect.bisect_right(self._starts, n)]

    def backbone(self, n: int) -> int:
        return self.piece_at(n).poly(n)

    def __call__(self, n: int) -> int:
        if n in self.exceptions:
            return self.exceptions[n]
        return self.piece_at(n).poly(n)

    def eval(self, n: int) -> int:
        return self(n)

    @property
    def degree(self) -> int:
        return max(piece.poly.degree for piece in self.pieces)

    def boundary_points(self) -> List[int]:
        """Finite piece endpoints, where orbit behaviour tends to change."""
        points = set()
        for piece in self.pieces:
            if piece.domain.lo is not None:
                points.add(piece.domain.lo)
            if piece.domain.hi is not None:
                points.add(piece.domain.hi)
        return sorted(points)

    # -- equality -----------------------------------------------------------

    def __eq__(self, other) -> bool:
        if not isinstance(other, IndexMap):
            return NotImplemented
        if self.pieces == other.pieces and self.exceptions == other.exceptions:
            return True
        return distinguishing_point(self, other) is None

    def __hash__(self) -> int:
        # only function values and the polynomials at -inf and +inf go in
        values = tuple(self(n) for n in HASH_POINTS)
        return hash((self.pieces[0].poly, self.pieces[-1].poly, values))

    # -- printing -----------------------------------------------------------

    def to_source(self) -> str:
        """DSL text that parses back to this map."""
        lines = [str(piece) for piece in self.pieces]
        lines += [f"except {k} -> {v}" for k, v in self.exceptions.items()]
        return "\n".join(lines)

    def __str__(self) -> str:
        return "; ".join(self.to_source().splitlines())

    def __repr__(self) -> str:
        return f"IndexMap({self})"

    def to_record(self) -> str:
        return str(self)

    # -- preimages ----------------------------------------------------------

    def preimages(self, v: int) -> "PreimageSet":
        """The exact set {n : self(n) = v}."""
        parts: List[Interval] = []
        for piece in self.pieces:
            if piece.poly.is_constant():
                if piece.poly.constant_value() == v:
                    parts.append(piece.domain)
            else:
                parts.extend(where_sign(piece.poly - v, piece.domain, (0,)))
        for key in self.exceptions:
            parts = [rest for part in parts for rest in part.remove(key)]
        parts += [Interval.point(k) for k, value in self.exceptions.items() if value == v]
        return PreimageSet(tuple(merge_intervals(parts)))

    # -- certified properties on intervals ------------------------------------

    def _cells(self, interval: Interval) -> Iterator[Tuple[Interval, Piece]]:
        for piece in self.pieces:
            cell = piece.domain.intersect(interval)
            if not cell.is_empty():
                yield cell, piece

    def _exception_keys_in(self, interval: Interval) -> List[int]:
        return [k for k in self.exceptions if k in interval]

    def _only_exceptions(self, segment: Interval) -> bool:
        size = segment.size()
        if size is None or size > len(self.exceptions):
            return False
        return all(n in self.exceptions for n in segment.points())

    def displacement_sign_holds(self, interval: Interval, sign: int) -> bool:
        """True iff sign(self(n) - n) == sign for every n in ``interval``."""
        for cell, piece in self._cells(interval):
            for segment, s in sign_segments(piece.poly - IntPoly.identity(), cell):
                if s != sign and not self._only_exceptions(segment):
                    return False
        return all(_sign(self(k) - k) == sign for k in self._exception_keys_in(interval))

    def is_nondecreasing_on(self, interval: Interval) -> bool:
        """True iff self(n) <= self(n+1) whenever n and n+1 lie in ``interval``."""
        special = set()
        for cell, piece in self._cells(interval):
            for steps, s in sign_segments(piece.poly.forward_difference(), cell.steps()):
                if s >= 0:
                    continue
                # a decreasing backbone step is harmless only next to an exception
                size = steps.size()
                if size is None or size > 2 * len(self.exceptions):
                    return False
                for i in steps.points():
                    if i not in self.exceptions and i + 1 not in self.exceptions:
                        return False
                    special.add(i)
            if piece.domain.hi is not None and piece.domain.hi + 1 in interval and piece.domain.hi in interval:
                special.add(piece.domain.hi)
        for k in self._exception_keys_in(interval):
            special.update((k - 1, k))
        return all(self(i) <= self(i + 1) for i in special if i in interval and i + 1 in interval)

    def agrees_with_on(self, poly: IntPoly, interval: Interval) -> bool:
        """True iff self(n) == poly(n) for every n in ``interval``."""
        for cell, piece in self._cells(interval):
            if piece.poly == poly:
                continue
            size = cell.size()
            if size is None or size > len(self.exceptions) + piece.poly.degree + poly.degree + 1:
                return False
            if any(self(n) != poly(n) for n in cell.points()):
                return False
        return all(self(k) == poly(k) for k in self._exception_keys_in(interval))


def _sign(value: int) -> int:
    return (value > 0) - (value < 0)


def _fold_split(left: IntPoly, right: IntPoly, points: List[Tuple[int, int]]) -> int:
    """How many of the folded points go to the left neighbour: fewest exceptions, then fewest points."""
    misses = sum(right(n) != v for n, v in points)
    best, best_misses = 0, misses
    for i, (n, v) in enumerate(points, 1):
        misses += (left(n) != v) - (right(n) != v)
        if misses < best_misses:
            best, best_misses = i, misses
    return best


@dataclass(frozen=True)
class PreimageSet:
    """A finite union of disjoint, ordered integer intervals."""

    intervals: Tuple[Interval, ...] = ()

    def is_empty(self) -> bool:
        return not self.intervals

    def is_finite(self) -> bool:
        return all(iv.is_finite() for iv in self.intervals)

    def infinite_part(self) -> Optional[Interval]:
        return next((iv for iv in self.intervals if not iv.is_finite()), None)

    def __contains__(self, n: int) -> bool:
        return any(n in iv for iv in self.intervals)

    def __len__(self) -> int:
        if not self.is_finite():
            raise ValueError("preimage set is infinite")
        return sum(iv.size() for iv in self.intervals)

    def members(self) -> List[int]:
        if not self.is_finite():
            raise ValueError("preimage set is infinite")
        return [n for iv in self.intervals for n in iv.points()]

    def sample(self, limit: int) -> List[int]:
        """Up to ``limit`` members, walking each interval from a finite edge."""
        found = []
        for iv in self.intervals:
            for n in iv.points_from_edge():
                if len(found) >= limit:
                    return found
                found.append(n)
        return found

    def __str__(self) -> str:
        return " u ".join(str(iv) for iv in self.intervals) or "{}"


def compose(outer: IndexMap, inner: IndexMap, max_degree: int = DEFAULT_MAX_DEGREE) -> IndexMap:
    """
    The map outer o inner (apply ``inner`` first).

    Each piece of ``inner`` is split at the integer breakpoints of its
    monotone runs and at the preimages of the piece boundaries of ``outer``;
    on every resulting cell the two polynomials compose. A finite cell
    whose composed polynomial exceeds ``max_degree`` is tabulated as point
    values instead.

    Raises:
        DegreeError: a composed polynomial on an unbounded cell (or on a
            finite cell above POINT_CELL_LIMIT points) exceeds ``max_degree``
    """
    pieces: List[Piece] = []
    for piece in inner.pieces:
        q = piece.poly
        if q.is_constant():
            pieces.append(Piece(piece.domain, IntPoly.constant(outer(q.constant_value()))))
            continue
        for run, _ in monotone_runs(q, piece.domain):
            for outer_piece in outer.pieces:
                for cell in _level_cells(q, run, outer_piece.domain):
                    poly = outer_piece.poly.compose(q)
                    if poly.degree <= max_degree:
                        pieces.append(Piece(cell, poly))
                    elif cell.is_finite() and cell.size() <= POINT_CELL_LIMIT:
                        pieces.extend(Piece(Interval.point(n), IntPoly.constant(poly(n))) for n in cell.points())
                    else:
                        raise DegreeError(poly.degree, max_degree, f"composing {outer} with {inner}")

    exceptions: Dict[int, int] = {}
    for key, value in outer.exceptions.items():
        for piece in inner.pieces:
            if not piece.poly.is_constant():
                for n in integer_roots(piece.poly - key, piece.domain):
                    exceptions[n] = value
    for key, value in inner.exceptions.items():
        exceptions[key] = outer(value)
    return IndexMap(pieces, exceptions).normalize()


def _level_cells(q: IntPoly, run: Interval, target: Interval) -> List[Interval]:
    """Points of ``run`` where q(n) falls in ``target``."""
    cells = [run]
    if target.lo is not None:
        cells = intersect_lists(cells, where_sign(q - target.lo, run, (0, 1)))
    if target.hi is not None:
        cells = intersect_lists(cells, where_sign(q - target.hi, run, (-1, 0)))
    return cells


def equal(f: IndexMap, g: IndexMap) -> bool:
    return f == g


def distinguishing_point(f: IndexMap, g: IndexMap) -> Optional[int]:
    """An integer where f and g differ, or None when they are the same map."""
    excused = set(f.exceptions) | set(g.exceptions)
    for k in sorted(excused):
        if f(k) != g(k):
            return k
    for pf in f.pieces:
        for pg in g.pieces:
            cell = pf.domain.intersect(pg.domain)
            if cell.is_empty() or pf.poly == pg.poly:
                continue
            # at most deg roots plus the excused points can agree
            tries = (pf.poly - pg.poly).degree + len(excused) + 1
            for n in islice(cell.points_from_edge(), tries):
                if n not in excused and pf.poly(n) != pg.poly(n):
                    return n
    return None


# -- bijectivity -------------------------------------------------------------

@dataclass(frozen=True)
class BijectionCertificate:
    """Unit-slope affine pieces whose images tile Z once after exceptions."""

    images: Tuple[Interval, ...]
    adjusted_values: Tuple[int, ...]

    def to_record(self):
        return {
            "type": "bijection",
            "images": [iv.to_record() for iv in self.images],
            "adjusted_values": list(self.adjusted_values),
        }


@dataclass(frozen=True)
class CollisionWitness:
    """Two distinct points with the same image: injectivity fails."""

    a: int
    b: int
    value: int

    def check(self, index_map: IndexMap) -> bool:
        return self.a != self.b and index_map(self.a) == self.value == index_map(self.b)

    def to_record(self):
        return {"type": "collision", "a": self.a, "b": self.b, "value": self.value}


@dataclass(frozen=True)
class MissingValueWitness:
    """A value with empty preimage: surjectivity fails."""

    value: int

    def check(self, index_map: IndexMap) -> bool:
        return index_map.preimages(self.value).is_empty()

    def to_record(self):
        return {"type": "missing_value", "value": self.value}


def _affine_image(domain: Interval, poly: IntPoly) -> Interval:
    offset, slope = poly.coeffs
    if slope == 1:
        lo = None if domain.lo is None else domain.lo + offset
        hi = None if domain.hi is None else domain.hi + offset
    else:
        lo = None if domain.hi is None else offset - domain.hi
        hi = None if domain.lo is None else offset - domain.lo
    return Interval(lo, hi)


def _witness_for_value(index_map: IndexMap, v: int):
    pre = index_map.preimages(v)
    if pre.is_empty():
        return MissingValueWitness(v)
    members = pre.sample(2)
    if len(members) >= 2:
        return CollisionWitness(members[0], members[1], v)
    return None


def bijectivity(index_map: IndexMap, search_window: int = 64) -> Verdict3:
    """
    Decide whether the map is a bijection of Z.

    Yes needs every piece to be n + c or -n + c with images that tile Z once
    after the exception adjustment. Otherwise a collision pair or a value
    with empty preimage is searched for; Unknown if neither turns up.
    """
    if all(piece.poly.is_unit_affine() for piece in index_map.pieces):
        return _affine_bijectivity(index_map)

    # a constant piece with two points collides outright
    for piece in index_map.pieces:
        if piece.poly.is_constant():
            free = [n for n in islice(piece.domain.points_from_edge(), len(index_map.exceptions) + 2)
                    if n not in index_map.exceptions]
            if len(free) >= 2:
                return Verdict3.no(CollisionWitness(free[0], free[1], piece.poly.constant_value()))

    seen: Dict[int, int] = {}
    for n in islice(Interval.all().points_from_edge(), 2 * search_window + 1):
        value = index_map(n)
        if value in seen:
            return Verdict3.no(CollisionWitness(seen[value], n, value))
        seen[value] = n
    for v in range(-search_window, search_window + 1):
        if index_map.preimages(v).is_empty():
            return Verdict3.no(MissingValueWitness(v))
    return Verdict3.unknown(f"no certificate or witness within [-{search_window}, {search_window}]",
                            {"search_window": search_window})


def _affine_bijectivity(index_map: IndexMap) -> Verdict3:
    images = [_affine_image(piece.domain, piece.poly) for piece in index_map.pieces]
    special = {index_map.backbone(k) for k in index_map.exceptions}
    special.update(index_map.exceptions.values())

    for segment, count in coverage_segments(images):
        if count == 1:
            continue
        # values outside the adjusted set keep multiplicity `count`
        for v in islice(segment.points_from_edge(), len(special) + 1):
            if v not in special:
                witness = _witness_for_value(index_map, v)
                if witness is not None:
                    return Verdict3.no(witness)
                break

    for v in sorted(special):
        witness = _witness_for_value(index_map, v)
        if witness is not None:
            return Verdict3.no(witness)
    return Verdict3.yes(BijectionCertificate(tuple(images), tuple(sorted(special))))
