# Contains the in-process entry points
from typing import Mapping, Optional

from ..config import AnalysisConfig, resolve_config
from ..core.classifier import Classification, Classifier
from ..core.engine import OrbitResult, SemigroupEngine
from ..core.parser import PresentationSource, parse_presentation


def load_presentation(path: str) -> PresentationSource:
    """Read and parse a presentation file."""
    with open(path, "r", encoding="utf-8") as f:
        return parse_presentation(f.read())


def effective_config(source: PresentationSource, overrides: Optional[dict] = None,
                     environ: Optional[Mapping[str, str]] = None) -> AnalysisConfig:
    """Config for a parsed presentation: its `param` lines, then ``overrides``, then the environment."""
    return resolve_config(source.params, overrides, environ)


def classify_presentation(text: str, config: Optional[AnalysisConfig] = None,
                          overrides: Optional[dict] = None) -> Classification:
    """
    Classifies the shift semigroup described by presentation source text.

    Args:
        text: Presentation file contents
        config: Complete AnalysisConfig to use; when given, `param` lines and
            ``overrides`` are ignored
        overrides: Field values taking precedence over the file's `param` lines

    Returns:
        Classification: The four verdicts and the diagram position
    """
    source = parse_presentation(text)
    config = config or effective_config(source, overrides)
    return Classifier(source.presentation, config).classify()


def orbit_of(text: str, w: int, direction: str = "forward",
             config: Optional[AnalysisConfig] = None) -> OrbitResult:
    """Forward or inverse orbit of ``w`` under the presentation in ``text``."""
    source = parse_presentation(text)
    engine = SemigroupEngine(source.presentation, config or effective_config(source))
    if direction == "inverse":
        return engine.inverse_orbit(w)
    return engine.orbit(w)
