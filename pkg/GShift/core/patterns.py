# Eventually constant configurations x in X^Z and their images under generalized shifts
from __future__ import annotations

from typing import Callable, Dict, Iterable, Mapping, Optional

from .index_map import IndexMap
from .words import Presentation, Word


class _PointOfShift:
    """Shared behaviour of a point of X^Z given by ``value_at``."""

    k: int

    def value_at(self, alpha: int) -> int:
        raise NotImplementedError

    def shift(self, index_map: IndexMap) -> "ShiftedPattern":
        """sigma_phi(x): the point whose coordinate alpha is x[phi(alpha)]."""
        return ShiftedPattern(self, index_map)

    def shift_by_word(self, word: Word, presentation: Presentation) -> "ShiftedPattern":
        return ShiftedPattern(self, lambda alpha: word.evaluate(presentation, alpha))

    def agrees_on(self, other: "_PointOfShift", H: Iterable[int]) -> bool:
        return all(self.value_at(h) == other.value_at(h) for h in H)

    def values_on(self, H: Iterable[int]) -> Dict[int, int]:
        return {h: self.value_at(h) for h in H}


class Pattern(_PointOfShift):
    """
    A finite table coordinate -> symbol over a constant background.

    Args:
        assignments: Coordinates whose symbol differs from the background
        default: Symbol everywhere else
        k: Alphabet size, symbols are 0..k-1
    """

    __slots__ = ("assignments", "default", "k")

    def __init__(self, assignments: Optional[Mapping[int, int]] = None, default: int = 0, k: int = 2):
        if k < 2:
            raise ValueError(f"alphabet needs at least two symbols, got k={k}")
        assignments = dict(assignments or {})
        for coord, symbol in [(None, default)] + list(assignments.items()):
            if not 0 <= symbol < k:
                where = "default" if coord is None else f"coordinate {coord}"
                raise ValueError(f"symbol {symbol} at {where} is outside 0..{k - 1}")
        self.assignments = {c: s for c, s in sorted(assignments.items()) if s != default}
        self.default = default
        self.k = k

    @classmethod
    def constant(cls, symbol: int = 0, k: int = 2) -> "Pattern":
        return cls({}, symbol, k)

    @classmethod
    def parse(cls, text: str) -> "Pattern":
        """Read ``k=2 default=0 5:1 -3:1``; every token is optional."""
        k, default, table = 2, 0, {}
        for token in text.replace(",", " ").split():
            if token.startswith("k="):
                k = int(token[2:])
            elif token.startswith("default="):
                default = int(token[len("default="):])
            elif ":" in token:
                coord, symbol = token.split(":", 1)
                table[int(coord)] = int(symbol)
            else:
                raise ValueError(f"bad pattern token {token!r}")
        return cls(table, default, k)

    def value_at(self, alpha: int) -> int:
        return self.assignments.get(alpha, self.default)

    def flip(self, beta: int) -> "Pattern":
        """Same point with coordinate beta moved to the next symbol mod k."""
        table = dict(self.assignments)
        table[beta] = (self.value_at(beta) + 1) % self.k
        return Pattern(table, self.default, self.k)

    def differing_coordinate(self, other: "Pattern") -> Optional[int]:
        """A coordinate where the two points differ, None if they are equal."""
        for coord in sorted(set(self.assignments) | set(other.assignments), key=lambda c: (abs(c), c)):
            if self.value_at(coord) != other.value_at(coord):
                return coord
        if self.default != other.default:
            coord = 0
            while coord in self.assignments or coord in other.assignments:
                coord = -coord if coord > 0 else -coord + 1
            return coord
        return None

    def __eq__(self, other) -> bool:
        if not isinstance(other, Pattern):
            return NotImplemented
        return (self.k, self.default, self.assignments) == (other.k, other.default, other.assignments)

    def __hash__(self) -> int:
        return hash((self.k, self.default, tuple(self.assignments.items())))

    def __str__(self) -> str:
        cells = " ".join(f"{c}:{s}" for c, s in self.assignments.items())
        return f"k={self.k} default={self.default}" + (f" {cells}" if cells else "")

    def __repr__(self) -> str:
        return f"Pattern({self})"

    def to_record(self) -> dict:
        return {"k": self.k, "default": self.default, "assignments": [[c, s] for c, s in self.assignments.items()]}


class ShiftedPattern(_PointOfShift):
    """Lazy image of a point under the generalized shift of an index map."""

    __slots__ = ("base", "index", "k")

    def __init__(self, base: _PointOfShift, index: Callable[[int], int]):
        self.base = base
        self.index = index
        self.k = base.k

    def value_at(self, alpha: int) -> int:
        return self.base.value_at(self.index(alpha))
