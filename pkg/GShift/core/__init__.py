from .intervals import Interval
from .polynomial import IntPoly
from .index_map import IndexMap, PreimageSet, bijectivity, compose, distinguishing_point, equal
from .words import Presentation, Reach, Word
from .parser import parse_map, parse_presentation
from .escape import EscapeCertificate, PreimageCertificate, check_escape
from .engine import OrbitResult, OrbitStatus, SemigroupEngine, closure, coverage, inverse_orbit, orbit, orbit_set
from .verdict import Outcome, Verdict3
from .patterns import Pattern
from .classifier import (
    Classifier,
    check_distal,
    check_equicontinuous,
    check_expansive,
    check_sensitive,
)

__all__ = [
    "Interval",
    "IntPoly",
    "IndexMap",
    "PreimageSet",
    "bijectivity",
    "compose",
    "distinguishing_point",
    "equal",
    "Presentation",
    "Reach",
    "Word",
    "parse_map",
    "parse_presentation",
    "EscapeCertificate",
    "PreimageCertificate",
    "check_escape",
    "OrbitResult",
    "OrbitStatus",
    "SemigroupEngine",
    "closure",
    "coverage",
    "inverse_orbit",
    "orbit",
    "orbit_set",
    "Outcome",
    "Verdict3",
    "Pattern",
    "Classifier",
    "check_distal",
    "check_equicontinuous",
    "check_expansive",
    "check_sensitive",
]
