__version__ = "0.1.0"

from .core.index_map import IndexMap, compose, equal
from .core.words import Presentation, Word
from .core.parser import parse_map, parse_presentation
from .core.engine import SemigroupEngine
from .core.classifier import Classifier
from .config import AnalysisConfig

from .main.api import classify_presentation, load_presentation

__all__ = [
    "__version__",
    "IndexMap",
    "compose",
    "equal",
    "Presentation",
    "Word",
    "parse_map",
    "parse_presentation",
    "SemigroupEngine",
    "Classifier",
    "AnalysisConfig",
    "classify_presentation",
    "load_presentation",
]
