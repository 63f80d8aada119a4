# Offline re-checking of emitted certificates and witnesses using evaluation-level primitives
import logging
from functools import singledispatch
from typing import Any, Iterable, List, Optional, Tuple

from ..config import AnalysisConfig
from ..core.classifier import (
    DistalCertificate,
    ExpansivityWitness,
    ImageGapCertificate,
    MarchCertificate,
    ModulusCertificate,
    NotBijective,
    SensitivityWitness,
)
from ..core.engine import ClosureResult
from ..core.escape import EscapeCertificate, PreimageCertificate, check_escape, check_preimage
from ..core.index_map import BijectionCertificate, IndexMap, compose
from ..core.intervals import Interval, coverage_segments
from ..core.polynomial import IntPoly
from ..core.words import Presentation
from ..errors import DegreeError

logger = logging.getLogger(__name__)

# iterates of an escape certificate that must be pairwise distinct
ESCAPE_ITERATES = 20
# iterates are evaluated while they stay below this many bits; past it the
# re-checked ray certificate already orders the remaining ones strictly
VERIFY_BITS = 1 << 21


@singledispatch
def verify_evidence(evidence: Any, presentation: Presentation, config: Optional[AnalysisConfig] = None) -> List[str]:
    """
    Re-check one piece of evidence against the presentation.

    Returns:
        list: Failure messages, empty when the evidence holds
    """
    return [f"no checker for evidence of type {type(evidence).__name__}"]


@verify_evidence.register(type(None))
def _(evidence: None, presentation: Presentation, config: Optional[AnalysisConfig] = None) -> List[str]:
    return []


@verify_evidence.register
def _(evidence: EscapeCertificate, presentation: Presentation,
      config: Optional[AnalysisConfig] = None) -> List[str]:
    config = config or AnalysisConfig()
    result = check_escape(evidence, presentation, config.max_degree)
    if not result:
        return [f"escape certificate: {result.failed}"]
    points = evidence.iterates(presentation, ESCAPE_ITERATES, VERIFY_BITS)
    steps = [evidence.direction * (b - a) for a, b in zip(points, points[1:])]
    if len(set(points)) != len(points) or any(step <= 0 for step in steps):
        return [f"escape certificate: iterates from {evidence.seed} do not move strictly outward"]
    if len(points) < ESCAPE_ITERATES:
        logger.debug("escape iterates past %d bits after %d steps", VERIFY_BITS, len(points))
    return []


@verify_evidence.register
def _(evidence: PreimageCertificate, presentation: Presentation,
      config: Optional[AnalysisConfig] = None) -> List[str]:
    result = check_preimage(evidence, presentation)
    return [] if result else [f"preimage certificate: {result.failed}"]


@verify_evidence.register
def _(evidence: ClosureResult, presentation: Presentation,
      config: Optional[AnalysisConfig] = None) -> List[str]:
    config = config or AnalysisConfig()
    if not evidence.finite:
        return ["closure certificate is not finite"]
    failures = []
    points = list(config.probes.points())
    maps = evidence.maps()
    for word, index_map in evidence.elements:
        for n in points:
            if word.evaluate(presentation, n) != index_map(n):
                failures.append(f"closure element {word} disagrees with its word at {n}")
                break
        for name, generator in presentation.items():
            try:
                product_map = compose(generator, index_map, config.max_degree)
            except DegreeError as e:
                failures.append(f"closure element {word} followed by {name}: {e}")
                continue
            if product_map not in maps:
                failures.append(f"closure is not closed: {word} followed by {name} is missing")
    return failures


def _bijective_on_window(name: str, index_map: IndexMap, radius: int) -> List[str]:
    for v in range(-radius, radius + 1):
        pre = index_map.preimages(v)
        if not pre.is_finite() or len(pre) != 1:
            return [f"{name} does not have exactly one preimage of {v}"]
        if index_map(pre.members()[0]) != v:
            return [f"{name} preimage of {v} does not evaluate back"]
    return []


def _tiling_failures(name: str, index_map: IndexMap, cert: BijectionCertificate) -> List[str]:
    """Piece images recomputed from endpoint values must cover Z once outside the adjusted values."""
    images = []
    for piece in index_map.pieces:
        if not piece.poly.is_unit_affine():
            return [f"{name} piece {piece} is not n + c or -n + c"]
        lo, hi = piece.domain.lo, piece.domain.hi
        at_lo = None if lo is None else piece.poly(lo)
        at_hi = None if hi is None else piece.poly(hi)
        images.append(Interval(at_lo, at_hi) if piece.poly.leading == 1 else Interval(at_hi, at_lo))
    if tuple(images) != tuple(cert.images):
        return [f"{name} piece images {[str(iv) for iv in images]} differ from the certificate"]

    adjusted = set(cert.adjusted_values)
    failures = []
    for segment, count in coverage_segments(images):
        if count == 1:
            continue
        if not segment.is_finite() or any(v not in adjusted for v in segment.points()):
            failures.append(f"{name} piece images cover {segment} {count} times")
    for v in sorted(adjusted):
        pre = index_map.preimages(v)
        if not pre.is_finite() or len(pre) != 1:
            failures.append(f"{name} does not have exactly one preimage of adjusted value {v}")
    return failures


@verify_evidence.register
def _(evidence: DistalCertificate, presentation: Presentation,
      config: Optional[AnalysisConfig] = None) -> List[str]:
    config = config or AnalysisConfig()
    failures = verify_evidence(evidence.closure, presentation, config)
    for name, cert in evidence.bijections:
        failures += _bijective_on_window(name, presentation[name], config.search_window)
        if isinstance(cert, BijectionCertificate):
            failures += _tiling_failures(name, presentation[name], cert)
        else:
            failures.append(f"{name} carries no bijection certificate")
    return failures


@verify_evidence.register
def _(evidence: NotBijective, presentation: Presentation,
      config: Optional[AnalysisConfig] = None) -> List[str]:
    if evidence.witness.check(presentation[evidence.generator]):
        return []
    return [f"bijectivity witness for {evidence.generator} does not hold"]


@verify_evidence.register
def _(evidence: MarchCertificate, presentation: Presentation,
      config: Optional[AnalysisConfig] = None) -> List[str]:
    config = config or AnalysisConfig()
    failures = []
    for t in evidence.window.points():
        how = evidence.coverage.reach_words.get(t)
        if how is None:
            failures.append(f"window point {t} has no reach word")
        elif how.origin not in evidence.H or how.word.evaluate(presentation, how.origin) != t:
            failures.append(f"reach word for {t} is wrong")
    if -evidence.bound not in evidence.window or evidence.bound not in evidence.window:
        failures.append(f"bound {evidence.bound} lies outside the window")
    for word, start, step in ((evidence.plus_word, evidence.bound, 1), (evidence.minus_word, -evidence.bound, -1)):
        try:
            psi = word.as_map(presentation, config.max_degree)
        except DegreeError as e:
            failures.append(f"ray word {word}: {e}")
            continue
        ray = Interval(start, None) if step > 0 else Interval(None, start)
        if not psi.agrees_with_on(IntPoly.linear(1, step), ray):
            failures.append(f"ray word {word} is not n{step:+d} on {ray}")
        for i in range(config.search_window):
            n = start + step * i
            if word.evaluate(presentation, n) != n + step:
                failures.append(f"ray word {word} does not move {n} to {n + step}")
                break
    return failures


@verify_evidence.register
def _(evidence: ImageGapCertificate, presentation: Presentation,
      config: Optional[AnalysisConfig] = None) -> List[str]:
    failures = []
    for name, slope, offset in evidence.classes:
        if slope == 1 or evidence.residue % slope == offset % slope:
            failures.append(f"class of {name} covers residue {evidence.residue}")
    for v in evidence.samples:
        if v % evidence.modulus != evidence.residue % evidence.modulus:
            failures.append(f"sample {v} is not in the residue class")
        for name, index_map in presentation.items():
            if not index_map.preimages(v).is_empty():
                failures.append(f"sample {v} is in the image of {name}")
    return failures


@verify_evidence.register
def _(evidence: ModulusCertificate, presentation: Presentation,
      config: Optional[AnalysisConfig] = None) -> List[str]:
    H = set(evidence.H)
    failures = [f"{h} is in H0 but not in H" for h in evidence.H0 if h not in H]
    for h in evidence.H:
        for name, generator in presentation.items():
            if generator(h) not in H:
                failures.append(f"H is not closed: {name}({h}) = {generator(h)}")
    for t, how in evidence.reach:
        if how.word.evaluate(presentation, how.origin) != t:
            failures.append(f"reach word for {t} is wrong")
    return failures


@verify_evidence.register
def _(evidence: SensitivityWitness, presentation: Presentation,
      config: Optional[AnalysisConfig] = None) -> List[str]:
    return [f"sensitivity witness: {f}" for f in evidence.check(presentation)]


@verify_evidence.register
def _(evidence: ExpansivityWitness, presentation: Presentation,
      config: Optional[AnalysisConfig] = None) -> List[str]:
    return [f"expansivity witness: {f}" for f in evidence.check(presentation)]


def verify_all(items: Iterable[Any], presentation: Presentation,
               config: Optional[AnalysisConfig] = None) -> Tuple[int, List[str]]:
    """
    Args:
        items: Evidence objects; None entries and repeats are skipped

    Returns:
        tuple: (number checked, list of failure messages)
    """
    checked = 0
    failures = []
    seen = set()
    for evidence in items:
        # one evidence object can back several verdicts
        if evidence is None or id(evidence) in seen:
            continue
        seen.add(id(evidence))
        checked += 1
        failures += verify_evidence(evidence, presentation, config)
    logger.debug("verified %d item(s), %d failure(s)", checked, len(failures))
    return checked, failures
