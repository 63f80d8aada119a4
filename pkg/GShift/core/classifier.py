# Equicontinuity, sensitivity, distality and expansivity verdicts with their evidence
from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from functools import cached_property
from typing import Dict, Iterable, List, Optional, Tuple

from ..config import AnalysisConfig
from ..errors import BudgetExhaustedError
from .engine import ClosureResult, CoverageReport, SemigroupEngine
from .index_map import IndexMap, bijectivity
from .intervals import Interval
from .patterns import Pattern
from .polynomial import IntPoly
from .verdict import Verdict3
from .words import Presentation, Reach, Word

logger = logging.getLogger(__name__)

PROPERTIES = ("equicontinuous", "sensitive", "distal", "expansive")
SUCCESSOR = IntPoly.linear(1, 1)
PREDECESSOR = IntPoly.linear(1, -1)
# gap values listed in an image-gap certificate, and how far to look for them
GAP_SAMPLES = 3
GAP_SCAN = 10_000


# ----------------------------------------------------------------------------
# Evidence
# ----------------------------------------------------------------------------

@dataclass(frozen=True)
class NotBijective:
    generator: str
    witness: object

    def to_record(self):
        return {"type": "not_bijective", "generator": self.generator, "witness": self.witness.to_record()}


@dataclass(frozen=True)
class DistalCertificate:
    closure: ClosureResult
    bijections: Tuple[Tuple[str, object], ...]

    def to_record(self):
        return {
            "type": "distal",
            "closure": self.closure.to_record(),
            "bijections": {name: cert.to_record() for name, cert in self.bijections},
        }


@dataclass(frozen=True)
class MarchCertificate:
    """
    Gamma = TH: the window is covered from H, ``plus_word`` acts as n+1 on
    [bound, +inf), ``minus_word`` acts as n-1 on (-inf, -bound], and
    [-bound, bound] lies inside the window.
    """

    H: Tuple[int, ...]
    window: Interval
    bound: int
    plus_word: Word
    minus_word: Word
    coverage: CoverageReport

    def to_record(self):
        return {
            "type": "march",
            "H": list(self.H),
            "window": self.window.to_record(),
            "bound": self.bound,
            "plus_word": self.plus_word.to_record(),
            "minus_word": self.minus_word.to_record(),
            "reach_words": [[t, how.origin, how.word.to_record()]
                            for t, how in sorted(self.coverage.reach_words.items())],
        }


@dataclass(frozen=True)
class ImageGapCertificate:
    """
    Values congruent to ``residue`` mod ``modulus`` toward ``direction``
    escape every affine image, and the remaining images there have density
    zero, so infinitely many values lie outside every generator image.
    """

    direction: int
    modulus: int
    residue: int
    classes: Tuple[Tuple[str, int, int], ...]
    samples: Tuple[int, ...]

    def to_record(self):
        return {
            "type": "image_gap",
            "direction": self.direction,
            "modulus": self.modulus,
            "residue": self.residue,
            "classes": [list(c) for c in self.classes],
            "samples": list(self.samples),
        }


@dataclass(frozen=True)
class ModulusCertificate:
    H0: Tuple[int, ...]
    H: Tuple[int, ...]
    reach: Tuple[Tuple[int, Reach], ...] = ()

    def to_record(self):
        return {
            "type": "modulus",
            "H0": list(self.H0),
            "H": list(self.H),
            "reach_words": [[t, how.origin, how.word.to_record()] for t, how in self.reach],
        }


# ----------------------------------------------------------------------------
# Witnesses
# ----------------------------------------------------------------------------

@dataclass(frozen=True)
class SensitivityWitness:
    """
    y agrees with x on ``protected`` but the shift of ``word`` separates
    them at coordinate v, because word(v) = beta is where they differ.
    """

    v: int
    word: Word
    flipped_coord: int
    x: Pattern
    y: Pattern
    protected: Tuple[int, ...] = ()

    def check(self, presentation: Presentation) -> List[str]:
        failures = []
        if self.word.evaluate(presentation, self.v) != self.flipped_coord:
            failures.append(f"{self.word} does not map {self.v} to {self.flipped_coord}")
        if self.flipped_coord in self.protected:
            failures.append(f"flipped coordinate {self.flipped_coord} is protected")
        if not self.x.agrees_on(self.y, self.protected):
            failures.append("y leaves the neighbourhood of x")
        if self.x.flip(self.flipped_coord) != self.y:
            failures.append(f"y is not x flipped at {self.flipped_coord}")
        sx = self.x.shift_by_word(self.word, presentation)
        sy = self.y.shift_by_word(self.word, presentation)
        if sx.value_at(self.v) == sy.value_at(self.v):
            failures.append(f"shifted points agree at {self.v}")
        return failures

    def to_record(self):
        return {
            "type": "sensitivity",
            "v": self.v,
            "word": self.word.to_record(),
            "flipped_coord": self.flipped_coord,
            "x": self.x.to_record(),
            "y": self.y.to_record(),
            "protected": list(self.protected),
        }


@dataclass(frozen=True)
class ExpansivityWitness:
    """word(h) = w with h in H and x, y differing at w."""

    word: Word
    h: int
    w: int
    H: Tuple[int, ...]
    x: Pattern
    y: Pattern

    def check(self, presentation: Presentation) -> List[str]:
        failures = []
        if self.h not in self.H:
            failures.append(f"{self.h} is not in H")
        if self.word.evaluate(presentation, self.h) != self.w:
            failures.append(f"{self.word} does not map {self.h} to {self.w}")
        sx = self.x.shift_by_word(self.word, presentation)
        sy = self.y.shift_by_word(self.word, presentation)
        if sx.value_at(self.h) == sy.value_at(self.h):
            failures.append(f"shifted points agree at {self.h}")
        return failures

    def to_record(self):
        return {
            "type": "expansivity",
            "word": self.word.to_record(),
            "h": self.h,
            "w": self.w,
            "H": list(self.H),
            "x": self.x.to_record(),
            "y": self.y.to_record(),
        }


@dataclass
class Classification:
    verdicts: Dict[str, Verdict3] = field(default_factory=dict)
    diagram: str = "undetermined"

    @property
    def is_decisive(self) -> bool:
        return not any(v.is_unknown for v in self.verdicts.values())


def diagram_position(equicontinuous: Verdict3, distal: Verdict3, expansive: Verdict3) -> str:
    """Place the system in the nesting distal < equicontinuous, expansive < sensitive."""
    if equicontinuous.is_yes:
        if distal.is_yes:
            return "distal"
        if distal.is_no:
            return "equicontinuous, not distal"
    elif equicontinuous.is_no:
        if expansive.is_yes:
            return "expansive"
        if expansive.is_no:
            return "sensitive, not expansive"
    return "undetermined"


# ----------------------------------------------------------------------------
# Classifier
# ----------------------------------------------------------------------------

class Classifier:
    """
    Decides the four properties of the shift semigroup generated by a
    presentation's index maps. Results with default arguments are cached.
    """

    def __init__(self, presentation: Presentation, config: Optional[AnalysisConfig] = None,
                 engine: Optional[SemigroupEngine] = None):
        self.presentation = presentation
        self.config = config or AnalysisConfig()
        self.engine = engine or SemigroupEngine(presentation, self.config)
        self._cache: Dict[str, Verdict3] = {}

    @cached_property
    def closure(self) -> ClosureResult:
        return self.engine.closure()

    def probe_points(self) -> List[int]:
        points = set(self.config.probes.points())
        for index_map in self.presentation.maps():
            points.update(index_map.boundary_points())
            points.update(index_map.exceptions)
        return sorted(points)

    # -- equicontinuity / sensitivity ------------------------------------------

    def check_equicontinuous(self, probes: Optional[Iterable[int]] = None) -> Verdict3:
        """
        Yes needs the whole of T to be finite; one certified infinite probe
        orbit gives No; anything else is Unknown.
        """
        if probes is None and "equicontinuous" in self._cache:
            return self._cache["equicontinuous"]
        probes = self.probe_points() if probes is None else sorted(set(probes))
        if not probes:
            raise ValueError("check_equicontinuous needs at least one probe")

        closure = self.closure
        used = {"closure_maps": len(closure)}
        if closure.finite:
            verdict = Verdict3.yes(closure, used, f"T is finite with {len(closure)} maps")
        else:
            verdict = self._probe_orbits(probes, used, closure.reason)
        if probes == self.probe_points():
            self._cache["equicontinuous"] = verdict
        return verdict

    def _probe_orbits(self, probes: List[int], used: dict, closure_reason: str) -> Verdict3:
        inconclusive = []
        spent = 0
        for p in probes:
            result = self.engine.orbit(p)
            spent += result.budget_used
            if result.is_infinite:
                used.update(orbit_points=spent, probes=probes.index(p) + 1)
                return Verdict3.no(result.certificate, used, f"orbit of {p} is infinite")
            if result.is_unknown:
                inconclusive.append(p)
        used.update(orbit_points=spent, probes=len(probes))
        if inconclusive:
            reason = f"{closure_reason}; inconclusive probes {inconclusive}"
        else:
            reason = f"{closure_reason}; every probe orbit is finite"
        logger.debug("equicontinuity undecided: %s", reason)
        return Verdict3.unknown(reason, used)

    def check_sensitive(self, probes: Optional[Iterable[int]] = None) -> Verdict3:
        return self.check_equicontinuous(probes).negated()

    # -- distality ------------------------------------------------------------

    def check_distal(self, probes: Optional[Iterable[int]] = None) -> Verdict3:
        equicontinuous = self.check_equicontinuous(probes)
        if equicontinuous.is_no:
            return Verdict3.no(equicontinuous.evidence, equicontinuous.budgets_used, "not equicontinuous")

        certificates = []
        undecided = []
        for name, index_map in self.presentation.items():
            result = bijectivity(index_map, self.config.search_window)
            if result.is_no:
                return Verdict3.no(NotBijective(name, result.evidence), equicontinuous.budgets_used,
                                   f"generator {name} is not bijective")
            if result.is_yes:
                certificates.append((name, result.evidence))
            else:
                undecided.append(name)

        if equicontinuous.is_yes and not undecided:
            return Verdict3.yes(DistalCertificate(equicontinuous.evidence, tuple(certificates)),
                                equicontinuous.budgets_used, "T is finite and every generator is bijective")
        reasons = []
        if equicontinuous.is_unknown:
            reasons.append(f"equicontinuity unknown ({equicontinuous.reason})")
        if undecided:
            reasons.append(f"bijectivity unknown for {', '.join(undecided)}")
        return Verdict3.unknown("; ".join(reasons), equicontinuous.budgets_used)

    # -- expansivity ----------------------------------------------------------

    def check_expansive(self, max_h: Optional[int] = None, window: Optional[Interval] = None) -> Verdict3:
        """
        Yes with a march certificate for some H in [-max_h, max_h]. No when T
        is finite, or when infinitely many values avoid every generator image.
        """
        defaults = max_h is None and window is None
        if defaults and "expansive" in self._cache:
            return self._cache["expansive"]
        max_h = self.config.max_h if max_h is None else max_h
        window = window or self.config.window
        if max_h < 0 or not window.is_finite():
            raise ValueError("check_expansive needs max_h >= 0 and a finite window")

        equicontinuous = self.check_equicontinuous()
        if equicontinuous.is_yes:
            verdict = Verdict3.no(equicontinuous.evidence, equicontinuous.budgets_used,
                                  "T is finite, so TH is finite for every finite H")
        else:
            verdict = self._expansive_from_certificates(max_h, window)
        if defaults:
            self._cache["expansive"] = verdict
        return verdict

    def _expansive_from_certificates(self, max_h: int, window: Interval) -> Verdict3:
        march = self.march_certificate(max_h, window)
        if march is not None:
            return Verdict3.yes(march, {"coverage_points": march.coverage.budget_used},
                                f"Gamma = TH for H = {list(march.H)}")
        gap = self.image_gap_certificate()
        if gap is not None:
            return Verdict3.no(gap, {}, "infinitely many values lie outside every generator image")
        return Verdict3.unknown(f"no march certificate with max_h={max_h} on {window} and no image gap")

    def march_certificate(self, max_h: int, window: Interval) -> Optional[MarchCertificate]:
        rays = self._ray_words()
        if rays is None:
            return None
        (plus_word, plus_bound), (minus_word, minus_bound) = rays
        bound = max(plus_bound, minus_bound, 0)
        if -bound not in window or bound not in window:
            logger.debug("ray bound %d falls outside %s", bound, window)
            return None

        H = list(range(-max_h, max_h + 1))
        report = self.engine.coverage(H, window)
        if not report.covered:
            return None
        for h in sorted(H, key=lambda c: (-abs(c), -c)):
            trial = [c for c in H if c != h]
            if not trial:
                continue
            smaller = self.engine.coverage(trial, window)
            if smaller.covered:
                H, report = trial, smaller
        return MarchCertificate(tuple(H), window, bound, plus_word, minus_word, report)

    def _ray_words(self):
        plus = minus = None
        for word, psi in self.engine.candidates:
            if plus is None:
                b = _ray_start(psi, SUCCESSOR, 1)
                if b is not None:
                    plus = (word, b)
            if minus is None:
                b = _ray_start(psi, PREDECESSOR, -1)
                if b is not None:
                    minus = (word, -b)
        if plus is None or minus is None:
            return None
        return plus, minus

    def image_gap_certificate(self) -> Optional[ImageGapCertificate]:
        for direction in (1, -1):
            classes = []
            blocked = False
            for name, index_map in self.presentation.items():
                for piece in index_map.pieces:
                    if not _unbounded_toward(piece.domain, piece.poly, direction):
                        continue
                    if piece.poly.degree == 1:
                        slope = abs(piece.poly.leading)
                        if slope == 1:
                            blocked = True
                        classes.append((name, slope, piece.poly.constant_value() % slope))
            if blocked:
                continue
            modulus = math.lcm(*(slope for _, slope, _ in classes)) if classes else 1
            residue = next((r for r in range(modulus)
                            if all(r % slope != offset for _, slope, offset in classes)), None)
            if residue is None:
                continue
            samples = self._gap_samples(direction, modulus, residue)
            if len(samples) == GAP_SAMPLES:
                return ImageGapCertificate(direction, modulus, residue, tuple(classes), tuple(samples))
        return None

    def _gap_samples(self, direction: int, modulus: int, residue: int) -> List[int]:
        samples = []
        maps = self.presentation.maps()
        for j in range(GAP_SCAN):
            v = residue + direction * modulus * j
            if all(m.preimages(v).is_empty() for m in maps):
                samples.append(v)
                if len(samples) == GAP_SAMPLES:
                    break
        return samples

    # -- constructive consequences -----------------------------------------------

    def equicontinuity_modulus(self, H0: Iterable[int], budget: Optional[int] = None) -> Verdict3:
        """H = T.H0: points agreeing on H keep agreeing on H0 under every shift."""
        H0 = tuple(sorted(set(H0)))
        if not H0:
            raise ValueError("equicontinuity_modulus needs a nonempty H0")
        result = self.engine.orbit_set(H0, budget)
        used = {"orbit_points": result.budget_used}
        if result.is_finite:
            certificate = ModulusCertificate(H0, tuple(result.points()), tuple(sorted(result.reach.items())))
            return Verdict3.yes(certificate, used)
        if result.is_infinite:
            return Verdict3.unknown(f"T.{list(H0)} is infinite", used, result.certificate)
        return Verdict3.unknown(result.reason, used)

    def sensitivity_witness(self, v: int, x: Pattern, protected: Iterable[int] = (),
                            budget: Optional[int] = None) -> SensitivityWitness:
        """
        First point beta of the orbit of v outside ``protected``, reached by a
        nonempty word when one exists, and x flipped at beta.

        Raises:
            BudgetExhaustedError: no such beta within budget
        """
        protected = tuple(sorted(set(protected)))
        found = None
        for beta, how in self.engine.walk([v], budget):
            if beta in protected:
                continue
            if not how.word.is_empty():
                found = (beta, how.word)
                break
            found = found or (beta, how.word)
        if found is None:
            raise BudgetExhaustedError(f"orbit of {v} stays inside the protected set within budget")
        beta, word = found
        return SensitivityWitness(v, word, beta, x, x.flip(beta), protected)

    def expansivity_witness(self, H: Iterable[int], x: Pattern, y: Pattern,
                            budget: Optional[int] = None) -> ExpansivityWitness:
        """
        Raises:
            ValueError: x and y are the same point
            BudgetExhaustedError: the differing coordinate is not reached from H
        """
        H = tuple(sorted(set(H)))
        w = x.differing_coordinate(y)
        if w is None:
            raise ValueError("x and y are the same point")
        how = self.engine.reach(H, w, budget)
        if how is None:
            raise BudgetExhaustedError(f"{w} is not reached from H={list(H)} within budget")
        return ExpansivityWitness(how.word, how.origin, w, H, x, y)

    # -- everything ------------------------------------------------------------

    def classify(self) -> Classification:
        equicontinuous = self.check_equicontinuous()
        verdicts = {
            "equicontinuous": equicontinuous,
            "sensitive": equicontinuous.negated(),
            "distal": self.check_distal(),
            "expansive": self.check_expansive(),
        }
        diagram = diagram_position(verdicts["equicontinuous"], verdicts["distal"], verdicts["expansive"])
        logger.debug("classified as %s", diagram)
        return Classification(verdicts, diagram)


def _ray_start(psi: IndexMap, poly: IntPoly, direction: int) -> Optional[int]:
    """Smallest b (direction +1) or largest b (-1) with psi == poly on the ray from b."""
    piece = psi.pieces[-1] if direction > 0 else psi.pieces[0]
    if piece.poly != poly:
        return None
    edge = piece.domain.lo if direction > 0 else piece.domain.hi
    keys = [k for k in psi.exceptions if k in piece.domain]
    if direction > 0:
        b = max([edge if edge is not None else 0] + [k + 1 for k in keys])
        ray = Interval(b, None)
    else:
        b = min([edge if edge is not None else 0] + [k - 1 for k in keys])
        ray = Interval(None, b)
    return b if psi.agrees_with_on(poly, ray) else None


def _unbounded_toward(domain: Interval, poly: IntPoly, direction: int) -> bool:
    if poly.is_constant():
        return False
    if domain.hi is None and poly.sign_toward(1) == direction:
        return True
    return domain.lo is None and poly.sign_toward(-1) == direction


def check_equicontinuous(presentation, probes=None, config=None) -> Verdict3:
    return Classifier(presentation, config).check_equicontinuous(probes)


def check_sensitive(presentation, probes=None, config=None) -> Verdict3:
    return Classifier(presentation, config).check_sensitive(probes)


def check_distal(presentation, probes=None, config=None) -> Verdict3:
    return Classifier(presentation, config).check_distal(probes)


def check_expansive(presentation, max_h=None, window=None, config=None) -> Verdict3:
    return Classifier(presentation, config).check_expansive(max_h, window)
