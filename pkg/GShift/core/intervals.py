# Integer intervals with optional infinite endpoints
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator, List, Optional, Tuple


@dataclass(frozen=True, order=False)
class Interval:
    """
    Inclusive integer interval. ``None`` stands for -inf (lo) or +inf (hi).

    An interval with lo > hi (both finite) is empty; ``Interval.empty()``
    returns the canonical empty interval.
    """

    lo: Optional[int] = None
    hi: Optional[int] = None

    @classmethod
    def all(cls) -> "Interval":
        return cls(None, None)

    @classmethod
    def point(cls, n: int) -> "Interval":
        return cls(n, n)

    @classmethod
    def empty(cls) -> "Interval":
        return cls(1, 0)

    @classmethod
    def parse(cls, text: str) -> "Interval":
        """Parse ``LO..HI`` (either side may be empty for an infinite end)."""
        if ".." not in text:
            raise ValueError(f"interval must look like LO..HI, got {text!r}")
        lo_text, hi_text = text.split("..", 1)
        lo = int(lo_text) if lo_text.strip() else None
        hi = int(hi_text) if hi_text.strip() else None
        return cls(lo, hi)

    def is_empty(self) -> bool:
        return self.lo is not None and self.hi is not None and self.lo > self.hi

    def is_finite(self) -> bool:
        return self.lo is not None and self.hi is not None

    def size(self) -> Optional[int]:
        """Number of integers in the interval, or None when infinite."""
        if self.is_empty():
            return 0
        if not self.is_finite():
            return None
        return self.hi - self.lo + 1

    def __contains__(self, n: int) -> bool:
        if self.is_empty():
            return False
        return (self.lo is None or n >= self.lo) and (self.hi is None or n <= self.hi)

    def intersect(self, other: "Interval") -> "Interval":
        lo = _max_lo(self.lo, other.lo)
        hi = _min_hi(self.hi, other.hi)
        result = Interval(lo, hi)
        return Interval.empty() if result.is_empty() else result

    def points(self) -> Iterator[int]:
        """Iterate the points of a finite interval in ascending order."""
        if not self.is_finite():
            raise ValueError(f"cannot enumerate infinite interval {self}")
        return iter(range(self.lo, self.hi + 1))

    def points_from_edge(self) -> Iterator[int]:
        """
        Iterate points starting at a finite edge (lo first, else hi
        descending); for (-inf, +inf) walk 0, 1, -1, 2, -2, ...
        """
        if self.is_empty():
            return
        if self.lo is not None:
            n = self.lo
            while self.hi is None or n <= self.hi:
                yield n
                n += 1
        elif self.hi is not None:
            n = self.hi
            while True:
                yield n
                n -= 1
        else:
            yield 0
            k = 1
            while True:
                yield k
                yield -k
                k += 1

    def steps(self) -> "Interval":
        """Starting points i of the unit steps i -> i+1 inside the interval."""
        if self.is_empty():
            return Interval.empty()
        hi = None if self.hi is None else self.hi - 1
        result = Interval(self.lo, hi)
        return Interval.empty() if result.is_empty() else result

    def remove(self, n: int) -> List["Interval"]:
        """The interval with the point ``n`` removed (zero, one or two parts)."""
        if n not in self:
            return [] if self.is_empty() else [self]
        parts = [Interval(self.lo, n - 1), Interval(n + 1, self.hi)]
        return [part for part in parts if not part.is_empty()]

    def sort_key(self) -> Tuple[float, float]:
        lo = float("-inf") if self.lo is None else self.lo
        hi = float("inf") if self.hi is None else self.hi
        return (lo, hi)

    def __str__(self) -> str:
        if self.is_empty():
            return "{}"
        if self.lo is not None and self.lo == self.hi:
            return f"{{{self.lo}}}"
        lo = "(-inf" if self.lo is None else f"[{self.lo}"
        hi = "+inf)" if self.hi is None else f"{self.hi}]"
        return f"{lo}, {hi}"

    def to_record(self):
        return [self.lo, self.hi]


def _max_lo(a: Optional[int], b: Optional[int]) -> Optional[int]:
    if a is None:
        return b
    if b is None:
        return a
    return max(a, b)


def _min_hi(a: Optional[int], b: Optional[int]) -> Optional[int]:
    if a is None:
        return b
    if b is None:
        return a
    return min(a, b)


def merge_intervals(intervals: Iterable[Interval]) -> List[Interval]:
    """Sort and merge overlapping or adjacent intervals; drops empty ones."""
    items = sorted((iv for iv in intervals if not iv.is_empty()), key=Interval.sort_key)
    merged: List[Interval] = []
    for iv in items:
        if merged:
            last = merged[-1]
            if last.hi is None or iv.lo is None or iv.lo <= last.hi + 1:
                hi = None if last.hi is None or iv.hi is None else max(last.hi, iv.hi)
                merged[-1] = Interval(last.lo, hi)
                continue
        merged.append(iv)
    return merged


def intersect_lists(left: Iterable[Interval], right: Iterable[Interval]) -> List[Interval]:
    """Pairwise intersection of two interval unions, merged."""
    right = list(right)
    parts = [a.intersect(b) for a in left for b in right]
    return merge_intervals(parts)


def coverage_segments(intervals: Iterable[Interval]) -> List[Tuple[Interval, int]]:
    """
    Partition the integers into consecutive segments with a constant number
    of covering intervals. Returns (segment, count) pairs from -inf to +inf.
    """
    events = {}
    starts_at_minus_inf = 0
    for iv in intervals:
        if iv.is_empty():
            continue
        if iv.lo is None:
            starts_at_minus_inf += 1
        else:
            events[iv.lo] = events.get(iv.lo, 0) + 1
        if iv.hi is not None:
            events[iv.hi + 1] = events.get(iv.hi + 1, 0) - 1

    segments: List[Tuple[Interval, int]] = []
    count = starts_at_minus_inf
    cursor: Optional[int] = None
    for at in sorted(events):
        delta = events[at]
        if delta == 0:
            continue
        segment = Interval(cursor, at - 1)
        if not segment.is_empty():
            segments.append((segment, count))
        count += delta
        cursor = at
    segments.append((Interval(cursor, None), count))
    return segments
