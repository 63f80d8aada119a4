# Budgeted orbit, inverse orbit, closure and reachability computations over a presentation
from __future__ import annotations

import enum
import logging
from collections import deque
from dataclasses import dataclass, field
from functools import cached_property
from itertools import product
from typing import Dict, Iterable, Iterator, List, Optional, Tuple, Union

from ..config import AnalysisConfig
from ..errors import BudgetExhaustedError, DegreeError
from .escape import EscapeCertificate, PreimageCertificate, find_escape
from .index_map import IndexMap, compose
from .intervals import Interval
from .words import Presentation, Reach, Word

logger = logging.getLogger(__name__)

# visited-point counts at which an escape certificate is attempted
FIRST_CHECKPOINT = 8


class OrbitStatus(enum.Enum):
    FINITE = "finite"
    INFINITE = "infinite_certified"
    UNKNOWN = "unknown"


@dataclass
class OrbitResult:
    """
    Tw or its inverse: either the exact finite set with one reaching word
    per point, a certified infinite set, or an inconclusive partial search.
    """

    status: OrbitStatus
    reach: Dict[int, Reach]
    certificate: Optional[Union[EscapeCertificate, PreimageCertificate]] = None
    budget_used: int = 0
    frontier_size: int = 0
    reason: str = ""
    direction: str = "forward"

    @property
    def is_finite(self) -> bool:
        return self.status is OrbitStatus.FINITE

    @property
    def is_infinite(self) -> bool:
        return self.status is OrbitStatus.INFINITE

    @property
    def is_unknown(self) -> bool:
        return self.status is OrbitStatus.UNKNOWN

    def points(self) -> List[int]:
        return sorted(self.reach)

    def word_for(self, t: int) -> Word:
        return self.reach[t].word

    def to_record(self) -> dict:
        return {
            "direction": self.direction,
            "status": self.status.value,
            "points": [[t, how.origin, how.word.to_record()] for t, how in sorted(self.reach.items())],
            "certificate": None if self.certificate is None else self.certificate.to_record(),
            "budget_used": self.budget_used,
            "frontier_size": self.frontier_size,
            "reason": self.reason,
        }


@dataclass
class ClosureResult:
    """The maps of T with witness words, or the partial set when the budget ran out."""

    finite: bool
    elements: List[Tuple[Word, IndexMap]]
    frontier_size: int = 0
    reason: str = ""

    def __len__(self) -> int:
        return len(self.elements)

    def maps(self) -> List[IndexMap]:
        return [index_map for _, index_map in self.elements]

    def to_record(self) -> dict:
        return {
            "type": "closure",
            "finite": self.finite,
            "size": len(self.elements),
            "elements": [[word.to_record(), str(index_map)] for word, index_map in self.elements],
            "frontier_size": self.frontier_size,
            "reason": self.reason,
        }


@dataclass
class CoverageReport:
    H: Tuple[int, ...]
    window: Interval
    covered: bool
    missing: List[int]
    reach_words: Dict[int, Reach] = field(default_factory=dict)
    budget_used: int = 0

    def to_record(self) -> dict:
        return {
            "type": "coverage",
            "H": list(self.H),
            "window": self.window.to_record(),
            "covered": self.covered,
            "missing": list(self.missing),
            "reach_words": [[t, how.origin, how.word.to_record()] for t, how in sorted(self.reach_words.items())],
        }


class DynamicsKind(enum.Enum):
    PERIODIC = "periodic"
    QUASI_PERIODIC = "quasi_periodic"
    ESCAPING = "escaping"
    UNKNOWN = "unknown"


@dataclass
class PointDynamics:
    """Fate of a point under iteration of one generator."""

    kind: DynamicsKind
    preperiod: int = 0
    period: int = 0
    certificate: Optional[EscapeCertificate] = None
    iterates: List[int] = field(default_factory=list)
    reason: str = ""


class SemigroupEngine:
    """
    Orbit machinery for one presentation.

    Every search is breadth-first: generators are applied in declaration
    order, the frontier is first-in first-out and the first word reaching a
    point is the one kept.
    """

    def __init__(self, presentation: Presentation, config: Optional[AnalysisConfig] = None):
        self.presentation = presentation
        self.config = config or AnalysisConfig()
        self._generators = list(presentation.items())

    @cached_property
    def candidates(self) -> List[Tuple[Word, IndexMap]]:
        """Nonempty words up to ``escape_word_length``, shortest first, with their maps."""
        found = []
        names = self.presentation.names
        for length in range(1, self.config.escape_word_length + 1):
            for letters in product(names, repeat=length):
                word = Word(letters)
                try:
                    found.append((word, word.as_map(self.presentation, self.config.max_degree)))
                except DegreeError:
                    logger.debug("candidate %s exceeds the degree limit", word)
        return found

    # -- closure ------------------------------------------------------------

    def closure(self, budget: Optional[int] = None) -> ClosureResult:
        """Enumerate T, identity included, up to ``budget`` maps."""
        budget = budget or self.config.budget_closure
        seen: Dict[IndexMap, Word] = {IndexMap.identity(): Word()}
        elements = [(Word(), IndexMap.identity())]
        queue = deque(elements)
        while queue:
            word, element = queue.popleft()
            for name, generator in self._generators:
                try:
                    product_map = compose(generator, element, self.config.max_degree)
                except DegreeError as e:
                    logger.debug("closure stopped: %s", e)
                    return ClosureResult(False, elements, len(queue) + 1, f"degree limit: {e}")
                if product_map in seen:
                    continue
                if len(elements) >= budget:
                    return ClosureResult(False, elements, len(queue) + 1,
                                         f"closure budget of {budget} maps exhausted")
                new_word = word.then(name)
                seen[product_map] = new_word
                elements.append((new_word, product_map))
                queue.append((new_word, product_map))
        logger.debug("closure finite with %d maps", len(elements))
        return ClosureResult(True, elements)

    # -- forward orbits -----------------------------------------------------

    def orbit(self, w: int, budget: Optional[int] = None) -> OrbitResult:
        return self._forward([w], budget)

    def orbit_set(self, H: Iterable[int], budget: Optional[int] = None) -> OrbitResult:
        """Union of the orbits of H under one shared budget."""
        H = sorted(set(H))
        if not H:
            raise ValueError("orbit_set needs a nonempty H")
        return self._forward(H, budget)

    def _forward(self, bases: List[int], budget: Optional[int]) -> OrbitResult:
        budget = budget or self.config.budget_orbit
        reach = {b: Reach(b, Word()) for b in bases}
        queue = deque(reach)
        checkpoint = FIRST_CHECKPOINT
        guard_hit = False
        while queue and len(reach) <= budget:
            t = queue.popleft()
            how = reach[t]
            for name, generator in self._generators:
                u = generator(t)
                if u in reach:
                    continue
                reach[u] = Reach(how.origin, how.word.then(name))
                queue.append(u)
                if u.bit_length() > self.config.max_bits:
                    guard_hit = True
            if guard_hit:
                break
            if len(reach) >= checkpoint:
                checkpoint *= 2
                cert = find_escape(reach, self.candidates)
                if cert is not None:
                    return OrbitResult(OrbitStatus.INFINITE, reach, cert, len(reach), len(queue))

        if not queue:
            return OrbitResult(OrbitStatus.FINITE, reach, None, len(reach), 0)

        cert = find_escape(reach, self.candidates)
        if cert is not None:
            return OrbitResult(OrbitStatus.INFINITE, reach, cert, len(reach), len(queue))
        if guard_hit:
            reason = f"orbit of {bases} passed {self.config.max_bits} bits without an escape certificate"
            logger.warning(reason)
        else:
            reason = f"orbit budget of {budget} points exhausted"
        return OrbitResult(OrbitStatus.UNKNOWN, reach, None, len(reach), len(queue), reason)

    # -- inverse orbits -----------------------------------------------------

    def inverse_orbit(self, w: int, budget: Optional[int] = None) -> OrbitResult:
        """
        The set of points mapped to ``w`` by some element of T. Each reach
        word maps its point to ``w``. Hitting a constant piece on an infinite
        interval certifies the set infinite at once.
        """
        budget = budget or self.config.budget_orbit
        reach = {w: Reach(w, Word())}
        queue = deque([w])
        while queue and len(reach) <= budget:
            t = queue.popleft()
            how = reach[t]
            for name, generator in self._generators:
                pre = generator.preimages(t)
                infinite = pre.infinite_part()
                if infinite is not None:
                    cert = PreimageCertificate(w, name, t, infinite, how.word)
                    return OrbitResult(OrbitStatus.INFINITE, reach, cert, len(reach), len(queue), direction="inverse")
                for s in pre.members():
                    if s not in reach:
                        reach[s] = Reach(w, Word((name,) + how.word.letters))
                        queue.append(s)
        if not queue:
            return OrbitResult(OrbitStatus.FINITE, reach, None, len(reach), 0, direction="inverse")
        return OrbitResult(OrbitStatus.UNKNOWN, reach, None, len(reach), len(queue),
                           f"orbit budget of {budget} points exhausted", direction="inverse")

    # -- reachability -------------------------------------------------------

    def walk(self, H: Iterable[int], budget: Optional[int] = None) -> Iterator[Tuple[int, Reach]]:
        """
        Yield the points of TH in breadth-first order with their reach,
        H itself first. Points past ``max_bits`` are yielded but not expanded.
        """
        budget = budget or self.config.budget_orbit
        reach = {h: Reach(h, Word()) for h in sorted(set(H))}
        yield from list(reach.items())
        queue = deque(reach)
        while queue and len(reach) < budget:
            t = queue.popleft()
            how = reach[t]
            for name, generator in self._generators:
                u = generator(t)
                if u in reach:
                    continue
                reach[u] = Reach(how.origin, how.word.then(name))
                yield u, reach[u]
                if u.bit_length() <= self.config.max_bits:
                    queue.append(u)

    def _search(self, H: Iterable[int], budget: Optional[int], targets: set) -> Dict[int, Reach]:
        """Walk from H until every target is reached or the budget runs out."""
        reach: Dict[int, Reach] = {}
        remaining = set(targets)
        for t, how in self.walk(H, budget):
            reach[t] = how
            remaining.discard(t)
            if not remaining:
                break
        return reach

    def reach(self, H: Iterable[int], target: int, budget: Optional[int] = None) -> Optional[Reach]:
        """First (origin, word) reaching ``target`` from H, or None within budget."""
        return self._search(H, budget, {target}).get(target)

    def coverage(self, H: Iterable[int], window: Interval, budget: Optional[int] = None) -> CoverageReport:
        if not window.is_finite():
            raise ValueError(f"coverage needs a finite window, got {window}")
        H = tuple(sorted(set(H)))
        if not H:
            raise ValueError("coverage needs a nonempty H")
        targets = set(window.points())
        reach = self._search(H, budget, targets)
        missing = sorted(targets - set(reach))
        words = {t: reach[t] for t in targets if t in reach}
        return CoverageReport(H, window, not missing, missing, words, len(reach))

    # -- single-generator dynamics -------------------------------------------

    def point_dynamics(self, name: str, a: int, budget: Optional[int] = None) -> PointDynamics:
        """
        Iterate generator ``name`` from ``a``: periodic, eventually periodic
        (h^n(a) = h^m(a) with n > m >= 1), certified escaping, or unknown.
        """
        budget = budget or self.config.budget_orbit
        generator = self.presentation[name]
        single = [(word, psi) for word, psi in self.candidates if set(word.letters) == {name}]
        seen = {a: 0}
        iterates = [a]
        checkpoint = FIRST_CHECKPOINT
        while len(iterates) <= budget:
            t = generator(iterates[-1])
            if t in seen:
                m = seen[t]
                n = len(iterates)
                if m == 0:
                    return PointDynamics(DynamicsKind.PERIODIC, 0, n, iterates=iterates)
                return PointDynamics(DynamicsKind.QUASI_PERIODIC, m, n - m, iterates=iterates)
            seen[t] = len(iterates)
            iterates.append(t)
            if len(iterates) >= checkpoint or t.bit_length() > self.config.max_bits:
                checkpoint *= 2
                reach = {p: Reach(a, Word.power(name, i)) for p, i in seen.items()}
                cert = find_escape(reach, single)
                if cert is not None:
                    return PointDynamics(DynamicsKind.ESCAPING, certificate=cert, iterates=iterates)
                if t.bit_length() > self.config.max_bits:
                    return PointDynamics(DynamicsKind.UNKNOWN, iterates=iterates,
                                         reason=f"iterates passed {self.config.max_bits} bits")
        return PointDynamics(DynamicsKind.UNKNOWN, iterates=iterates, reason=f"budget of {budget} iterates exhausted")

    def periodic_inverse(self, name: str, w: int, budget: Optional[int] = None) -> Tuple[int, Word]:
        """
        For ``w`` periodic with period p under generator ``name``, the
        preimage of ``w`` inside its cycle: the point phi^(p-1)(w).

        Raises:
            BudgetExhaustedError: ``w`` was not found to be periodic
        """
        dynamics = self.point_dynamics(name, w, budget)
        if dynamics.kind is not DynamicsKind.PERIODIC:
            raise BudgetExhaustedError(f"{w} is not periodic under {name} ({dynamics.kind.value})")
        word = Word.power(name, dynamics.period - 1)
        return word.evaluate(self.presentation, w), word


def closure(presentation: Presentation, budget: Optional[int] = None,
            config: Optional[AnalysisConfig] = None) -> ClosureResult:
    return SemigroupEngine(presentation, config).closure(budget)


def orbit(presentation: Presentation, w: int, budget: Optional[int] = None,
          config: Optional[AnalysisConfig] = None) -> OrbitResult:
    return SemigroupEngine(presentation, config).orbit(w, budget)


def inverse_orbit(presentation: Presentation, w: int, budget: Optional[int] = None,
                  config: Optional[AnalysisConfig] = None) -> OrbitResult:
    return SemigroupEngine(presentation, config).inverse_orbit(w, budget)


def orbit_set(presentation: Presentation, H: Iterable[int], budget: Optional[int] = None,
              config: Optional[AnalysisConfig] = None) -> OrbitResult:
    return SemigroupEngine(presentation, config).orbit_set(H, budget)


def coverage(presentation: Presentation, H: Iterable[int], window: Interval, budget: Optional[int] = None,
             config: Optional[AnalysisConfig] = None) -> CoverageReport:
    return SemigroupEngine(presentation, config).coverage(H, window, budget)
