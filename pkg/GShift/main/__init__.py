from .api import classify_presentation, load_presentation
from .verify import verify_all, verify_evidence

__all__ = [
    "classify_presentation",
    "load_presentation",
    "verify_all",
    "verify_evidence",
]
