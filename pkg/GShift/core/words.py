# Words over named generators, and presentations that name the generators
from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Dict, Iterable, Iterator, List, Tuple

from ..errors import PresentationError, UnknownGeneratorError
from .index_map import IndexMap, compose
from .polynomial import DEFAULT_MAX_DEGREE

NAME_PATTERN = re.compile(r"[A-Za-z_][A-Za-z0-9_]*\Z")
_POWER = re.compile(r"([A-Za-z_][A-Za-z0-9_]*)(?:\^(\d+))?\Z")


@dataclass(frozen=True)
class Word:
    """
    A composition word. Letters are listed in the order they are applied,
    so Word(("f", "g")) denotes g o f. The empty word is the identity.
    """

    letters: Tuple[str, ...] = ()

    @classmethod
    def of(cls, *letters: str) -> "Word":
        return cls(tuple(letters))

    @classmethod
    def power(cls, letter: str, times: int) -> "Word":
        return cls((letter,) * times)

    @classmethod
    def parse(cls, text: str) -> "Word":
        """Read the printed form: ``id``, ``phi^4``, ``phi psi^2``."""
        text = text.strip()
        if text in ("", "id"):
            return cls()
        letters: List[str] = []
        for token in text.replace(".", " ").split():
            match = _POWER.match(token)
            if not match:
                raise ValueError(f"bad word token {token!r}")
            letters.extend([match.group(1)] * int(match.group(2) or 1))
        return cls(tuple(letters))

    def then(self, letter: str) -> "Word":
        return Word(self.letters + (letter,))

    def __len__(self) -> int:
        return len(self.letters)

    def is_empty(self) -> bool:
        return not self.letters

    def evaluate(self, presentation: "Presentation", n: int) -> int:
        for letter in self.letters:
            n = presentation[letter](n)
        return n

    def as_map(self, presentation: "Presentation", max_degree: int = DEFAULT_MAX_DEGREE) -> IndexMap:
        result = IndexMap.identity()
        for letter in self.letters:
            result = compose(presentation[letter], result, max_degree)
        return result

    def __str__(self) -> str:
        if not self.letters:
            return "id"
        parts = []
        i = 0
        while i < len(self.letters):
            j = i
            while j < len(self.letters) and self.letters[j] == self.letters[i]:
                j += 1
            run = j - i
            parts.append(self.letters[i] if run == 1 else f"{self.letters[i]}^{run}")
            i = j
        return " ".join(parts)

    def to_record(self) -> List[str]:
        return list(self.letters)


class Presentation:
    """Ordered named generators of the index semigroup; the identity is implicit."""

    def __init__(self, generators: Iterable[Tuple[str, IndexMap]] = ()):
        self._maps: Dict[str, IndexMap] = {}
        for name, index_map in generators:
            if not NAME_PATTERN.match(name):
                raise PresentationError(f"bad generator name {name!r}")
            if name in self._maps:
                raise PresentationError(f"generator {name!r} is defined twice")
            self._maps[name] = index_map

    @property
    def names(self) -> List[str]:
        return list(self._maps)

    def __getitem__(self, name: str) -> IndexMap:
        try:
            return self._maps[name]
        except KeyError:
            raise UnknownGeneratorError(f"no generator named {name!r}") from None

    def __contains__(self, name: str) -> bool:
        return name in self._maps

    def __iter__(self) -> Iterator[str]:
        return iter(self._maps)

    def __len__(self) -> int:
        return len(self._maps)

    def items(self):
        return self._maps.items()

    def maps(self) -> List[IndexMap]:
        return list(self._maps.values())

    def validate(self, word: Word) -> Word:
        for letter in word.letters:
            self[letter]
        return word

    def extended(self, name: str, index_map: IndexMap) -> "Presentation":
        return Presentation(list(self._maps.items()) + [(name, index_map)])

    def to_source(self) -> str:
        blocks = []
        for name, index_map in self._maps.items():
            body = "\n".join(f"  {line}" for line in index_map.to_source().splitlines())
            blocks.append(f"map {name}\n{body}")
        return "\n".join(blocks)

    def __repr__(self) -> str:
        return f"Presentation({', '.join(self._maps)})"


@dataclass(frozen=True)
class Reach:
    """How a point was reached: ``word`` applied to ``origin``."""

    origin: int
    word: Word

    def to_record(self):
        return [self.origin, self.word.to_record()]
