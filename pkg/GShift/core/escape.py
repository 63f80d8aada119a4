# Certificates that an orbit or inverse orbit is infinite, and their checkers
from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Dict, Iterable, List, Optional, Sequence

from ..errors import DegreeError
from .index_map import IndexMap
from .intervals import Interval
from .polynomial import DEFAULT_MAX_DEGREE, first_true
from .words import Presentation, Reach, Word

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class EscapeCertificate:
    """
    Proof that the orbit of ``base`` is infinite.

    ``seed`` is reached from ``base`` by ``seed_word``. On the ray
    [bound, +inf) (direction +1) or (-inf, bound] (direction -1) the map of
    ``word`` moves every point strictly in ``direction`` and is
    nondecreasing, so its iterates from the seed never repeat.
    """

    base: int
    seed_word: Word
    seed: int
    word: Word
    bound: int
    direction: int = 1

    @property
    def ray(self) -> Interval:
        return Interval(self.bound, None) if self.direction > 0 else Interval(None, self.bound)

    def iterates(self, presentation: Presentation, count: int, max_bits: Optional[int] = None) -> List[int]:
        """Up to ``count`` iterates from the seed, stopping early past ``max_bits``."""
        points = [self.seed]
        for _ in range(count - 1):
            if max_bits is not None and points[-1].bit_length() > max_bits:
                break
            points.append(self.word.evaluate(presentation, points[-1]))
        return points

    def to_record(self):
        return {
            "type": "escape",
            "base": self.base,
            "seed_word": self.seed_word.to_record(),
            "seed": self.seed,
            "word": self.word.to_record(),
            "bound": self.bound,
            "direction": self.direction,
        }


@dataclass(frozen=True)
class PreimageCertificate:
    """
    Proof that an inverse orbit is infinite: ``generator`` is constant
    ``value`` on the infinite ``interval``, and ``value_word`` maps ``value``
    to the base point.
    """

    base: int
    generator: str
    value: int
    interval: Interval
    value_word: Word

    def to_record(self):
        return {
            "type": "preimage",
            "base": self.base,
            "generator": self.generator,
            "value": self.value,
            "interval": self.interval.to_record(),
            "value_word": self.value_word.to_record(),
        }


@dataclass(frozen=True)
class EscapeCheck:
    valid: bool
    failed: str = ""

    def __bool__(self) -> bool:
        return self.valid


def check_escape(cert: EscapeCertificate, presentation: Presentation,
                 max_degree: int = DEFAULT_MAX_DEGREE) -> EscapeCheck:
    """Re-verify an escape certificate, naming the first failed condition."""
    if cert.direction not in (1, -1):
        return EscapeCheck(False, f"direction must be +1 or -1, got {cert.direction}")
    if cert.word.is_empty():
        return EscapeCheck(False, "escape word is empty")
    if cert.seed_word.evaluate(presentation, cert.base) != cert.seed:
        return EscapeCheck(False, f"seed word {cert.seed_word} does not reach {cert.seed} from {cert.base}")
    try:
        psi = cert.word.as_map(presentation, max_degree)
    except DegreeError as e:
        return EscapeCheck(False, f"escape word map is not representable: {e}")
    ray = cert.ray
    if not psi.displacement_sign_holds(ray, cert.direction):
        return EscapeCheck(False, f"{cert.word}(n) - n is not {'positive' if cert.direction > 0 else 'negative'} on {ray}")
    if not psi.is_nondecreasing_on(ray):
        return EscapeCheck(False, f"{cert.word} is not nondecreasing on {ray}")
    if cert.seed not in ray:
        return EscapeCheck(False, f"seed {cert.seed} lies outside {ray}")
    return EscapeCheck(True)


def check_preimage(cert: PreimageCertificate, presentation: Presentation) -> EscapeCheck:
    if cert.interval.is_finite():
        return EscapeCheck(False, f"interval {cert.interval} is finite")
    if cert.value_word.evaluate(presentation, cert.value) != cert.base:
        return EscapeCheck(False, f"{cert.value_word} does not map {cert.value} to {cert.base}")
    pre = presentation[cert.generator].preimages(cert.value)
    if not any(part.intersect(cert.interval) == cert.interval for part in pre.intervals):
        return EscapeCheck(False, f"{cert.generator} is not constant {cert.value} on {cert.interval}")
    return EscapeCheck(True)


def ray_holds(psi: IndexMap, ray: Interval, direction: int) -> bool:
    return psi.displacement_sign_holds(ray, direction) and psi.is_nondecreasing_on(ray)


def find_escape(reached: Dict[int, Reach], candidates: Sequence, directions: Iterable[int] = (1, -1)
                ) -> Optional[EscapeCertificate]:
    """
    Look for an escape certificate among reached points.

    ``candidates`` holds (word, map) pairs tried in order. For each candidate
    and direction the smallest usable seed is found by bisection over the
    sorted reached points: the ray property only gets easier further out.
    """
    for direction in directions:
        points = sorted(reached, reverse=direction < 0)
        if not points:
            continue
        for word, psi in candidates:
            def holds(i):
                return ray_holds(psi, _ray(points[i], direction), direction)

            if not holds(len(points) - 1):
                continue
            seed = points[first_true(holds, 0, len(points) - 1)]
            how = reached[seed]
            logger.debug("escape from %s via %s at seed %s (direction %+d)", how.origin, word, seed, direction)
            return EscapeCertificate(how.origin, how.word, seed, word, seed, direction)
    return None


def _ray(bound: int, direction: int) -> Interval:
    return Interval(bound, None) if direction > 0 else Interval(None, bound)
