# Integer polynomials in one variable n, and exact sign analysis on integer intervals
#
# A polynomial is a tuple of coefficients, lowest degree first, e.g.
# (1, 0, 3) is 1 + 3*n^2. Trailing zeros are stripped by the constructor, so
# the zero polynomial is ().
from __future__ import annotations

from dataclasses import dataclass
from typing import List, Tuple

from .intervals import Interval


DEFAULT_MAX_DEGREE = 4


def _strip(coeffs):
    n = len(coeffs)
    while n and coeffs[n - 1] == 0:
        n -= 1
    return tuple(int(c) for c in coeffs[:n])


def _sign(value: int) -> int:
    return (value > 0) - (value < 0)


@dataclass(frozen=True)
class IntPoly:
    """Integer-coefficient polynomial in n, canonical (no trailing zeros)."""

    coeffs: Tuple[int, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "coeffs", _strip(tuple(self.coeffs)))

    @classmethod
    def constant(cls, c: int) -> "IntPoly":
        return cls((c,))

    @classmethod
    def linear(cls, slope: int, offset: int) -> "IntPoly":
        return cls((offset, slope))

    @classmethod
    def identity(cls) -> "IntPoly":
        return cls((0, 1))

    @property
    def degree(self) -> int:
        """Degree, with the zero polynomial counted as degree 0."""
        return max(len(self.coeffs) - 1, 0)

    @property
    def leading(self) -> int:
        return self.coeffs[-1] if self.coeffs else 0

    def is_constant(self) -> bool:
        return len(self.coeffs) <= 1

    def constant_value(self) -> int:
        return self.coeffs[0] if self.coeffs else 0

    def is_unit_affine(self) -> bool:
        """True for n + c and -n + c."""
        return len(self.coeffs) == 2 and abs(self.coeffs[1]) == 1

    def __call__(self, n: int) -> int:
        result = 0
        for c in reversed(self.coeffs):
            result = result * n + c
        return result

    def __add__(self, other) -> "IntPoly":
        if isinstance(other, int):
            other = IntPoly.constant(other)
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        res = list(a)
        for i, c in enumerate(b):
            res[i] += c
        return IntPoly(res)

    def __neg__(self) -> "IntPoly":
        return IntPoly(tuple(-c for c in self.coeffs))

    def __sub__(self, other) -> "IntPoly":
        if isinstance(other, int):
            other = IntPoly.constant(other)
        return self + (-other)

    def __mul__(self, other) -> "IntPoly":
        if isinstance(other, int):
            other = IntPoly.constant(other)
        if not self.coeffs or not other.coeffs:
            return IntPoly()
        res = [0] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            for j, b in enumerate(other.coeffs):
                res[i + j] += a * b
        return IntPoly(res)

    def compose(self, inner: "IntPoly") -> "IntPoly":
        """The polynomial n -> self(inner(n)), by Horner's scheme."""
        result = IntPoly()
        for c in reversed(self.coeffs):
            result = result * inner + c
        return result

    def forward_difference(self) -> "IntPoly":
        """p(n+1) - p(n); governs monotonicity on the integers."""
        return self.compose(IntPoly((1, 1))) - self

    def reflect(self) -> "IntPoly":
        """p(-n)."""
        return IntPoly(tuple(c if i % 2 == 0 else -c for i, c in enumerate(self.coeffs)))

    def cauchy_bound(self) -> int:
        """
        Integer C with every real root r satisfying |r| < C:
        C = 1 + ceil(max |a_i| / |a_d|) over the non-leading coefficients.
        """
        if self.is_constant():
            return 0
        lead = abs(self.leading)
        biggest = max((abs(c) for c in self.coeffs[:-1]), default=0)
        return 1 + -(-biggest // lead)

    def sign_toward(self, direction: int) -> int:
        """Sign of p(n) as n -> +inf (direction=1) or -inf (direction=-1)."""
        if self.is_constant():
            return _sign(self.constant_value())
        sign = _sign(self.leading)
        if direction < 0 and self.degree % 2 == 1:
            sign = -sign
        return sign

    def __str__(self) -> str:
        if not self.coeffs:
            return "0"
        terms = []
        for power in range(len(self.coeffs) - 1, -1, -1):
            c = self.coeffs[power]
            if c == 0:
                continue
            magnitude = abs(c)
            if power == 0:
                body = str(magnitude)
            else:
                var = "n" if power == 1 else f"n^{power}"
                body = var if magnitude == 1 else f"{magnitude}*{var}"
            if not terms:
                terms.append(body if c > 0 else f"-{body}")
            else:
                terms.append(f"+ {body}" if c > 0 else f"- {body}")
        return " ".join(terms)

    def __repr__(self) -> str:
        return f"IntPoly({self})"


def sign_segments(poly: IntPoly, interval: Interval) -> List[Tuple[Interval, int]]:
    """
    Partition ``interval`` into maximal segments on which sign(poly(n)) is
    constant over the integers. Returns (segment, sign) pairs in order.

    Outside the Cauchy bound the sign is that of the polynomial at infinity;
    inside, the polynomial is split into monotone runs and each run is cut at
    its zero crossings by bisection.
    """
    if interval.is_empty():
        return []
    if poly.is_constant():
        return [(interval, _sign(poly.constant_value()))]

    bound = poly.cauchy_bound()
    segments: List[Tuple[Interval, int]] = []

    left = interval.intersect(Interval(None, -bound))
    if not left.is_empty():
        segments.append((left, poly.sign_toward(-1)))

    core = interval.intersect(Interval(-bound + 1, bound - 1))
    if not core.is_empty():
        for run, direction in monotone_runs(poly, core):
            segments.extend(_split_run(poly, run, direction))

    right = interval.intersect(Interval(bound, None))
    if not right.is_empty():
        segments.append((right, poly.sign_toward(1)))

    return _merge_signed(segments)


def monotone_runs(poly: IntPoly, interval: Interval) -> List[Tuple[Interval, int]]:
    """
    Partition ``interval`` into runs on which poly is monotone over the
    integers. Each run is paired with its direction (+1 nondecreasing,
    -1 nonincreasing, 0 constant or a single point). The unit step between
    two consecutive runs belongs to neither.
    """
    if interval.is_empty():
        return []
    if poly.degree <= 1:
        return [(interval, _sign(poly.leading) if poly.degree == 1 else 0)]

    runs: List[Tuple[Interval, int]] = []
    run_lo = interval.lo
    direction = 0
    for steps, sign in sign_segments(poly.forward_difference(), interval.steps()):
        if sign == 0 or direction in (0, sign):
            direction = direction or sign
            continue
        # the step starting at steps.lo reverses direction
        runs.append((Interval(run_lo, steps.lo), direction))
        run_lo = steps.lo + 1
        direction = sign
    runs.append((Interval(run_lo, interval.hi), direction))
    return [(run, d) for run, d in runs if not run.is_empty()]


def first_true(predicate, lo: int, hi: int) -> int:
    """
    Smallest n in [lo, hi] with predicate(n), for a predicate that is False
    then True along the interval; hi + 1 when it never holds.

    ``bisect`` needs a sized sequence, and ranges past sys.maxsize have no
    len(), so the search is done on the integers directly.
    """
    while lo <= hi:
        mid = (lo + hi) // 2
        if predicate(mid):
            hi = mid - 1
        else:
            lo = mid + 1
    return lo


def _split_run(poly: IntPoly, run: Interval, direction: int) -> List[Tuple[Interval, int]]:
    # run is finite; poly is monotone on it
    if direction >= 0:
        first_zero = first_true(lambda n: poly(n) >= 0, run.lo, run.hi)
        first_past = first_true(lambda n: poly(n) > 0, run.lo, run.hi)
        signs = (-1, 0, 1)
    else:
        first_zero = first_true(lambda n: poly(n) <= 0, run.lo, run.hi)
        first_past = first_true(lambda n: poly(n) < 0, run.lo, run.hi)
        signs = (1, 0, -1)
    cuts = [run.lo, first_zero, first_past, run.hi + 1]
    pieces = []
    for (start, stop), sign in zip(zip(cuts, cuts[1:]), signs):
        if start < stop:
            pieces.append((Interval(start, stop - 1), sign))
    return pieces


def _merge_signed(segments):
    merged: List[Tuple[Interval, int]] = []
    for segment, sign in segments:
        if merged and merged[-1][1] == sign:
            merged[-1] = (Interval(merged[-1][0].lo, segment.hi), sign)
        else:
            merged.append((segment, sign))
    return merged


def integer_roots(poly: IntPoly, interval: Interval) -> List[int]:
    """Integer roots of a nonconstant polynomial inside ``interval``."""
    if poly.is_constant():
        raise ValueError("integer_roots needs a nonconstant polynomial")
    roots = []
    for segment, sign in sign_segments(poly, interval):
        if sign == 0:
            roots.extend(segment.points())
    return roots


def where_sign(poly: IntPoly, interval: Interval, accepted) -> List[Interval]:
    """Segments of ``interval`` where sign(poly) is one of ``accepted``."""
    return [segment for segment, sign in sign_segments(poly, interval) if sign in accepted]
