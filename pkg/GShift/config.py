# Analysis parameters: defaults < presentation `param` lines < CLI flags < GSHIFT_BUDGET_SCALE
from __future__ import annotations

import dataclasses
import logging
import os
from dataclasses import dataclass
from typing import Mapping, Optional

from .core.intervals import Interval
from .errors import PresentationError

logger = logging.getLogger(__name__)

BUDGET_SCALE_ENV = "GSHIFT_BUDGET_SCALE"

# keys a presentation file may set with `param key = value`
FILE_KEYS = ("budget_orbit", "budget_closure", "probes", "max_h", "window", "seed", "max_degree")
INTERVAL_KEYS = ("probes", "window")


@dataclass(frozen=True)
class AnalysisConfig:
    """
    Every tunable of the engine, classifier and oracle.

    Args:
        budget_orbit: Points visited per orbit query
        budget_closure: Maps enumerated per semigroup closure
        probes: Coordinates probed by the equicontinuity check
        max_h: Half-width of the coordinate box searched for an expansivity set H
        window: Finite window that coverage must fill
        seed: Seed of the oracle's random instances
        max_degree: Largest polynomial degree accepted by parsing and composition
        search_window: Half-width scanned for bijectivity witnesses
        max_bits: Orbit points larger than this many bits stop the search
        escape_word_length: Longest word tried as an escape or ray candidate
        exhaustive_limit: Largest k^m the oracle enumerates exhaustively
    """

    budget_orbit: int = 10_000
    budget_closure: int = 1_000
    probes: Interval = Interval(-8, 8)
    max_h: int = 4
    window: Interval = Interval(-20, 20)
    seed: int = 0
    max_degree: int = 4
    search_window: int = 64
    max_bits: int = 512
    escape_word_length: int = 2
    exhaustive_limit: int = 4096

    def __post_init__(self):
        for name in ("budget_orbit", "budget_closure", "max_degree", "search_window",
                     "max_bits", "escape_word_length", "exhaustive_limit"):
            if getattr(self, name) < 1:
                raise PresentationError(f"{name} must be positive, got {getattr(self, name)}")
        if self.max_h < 0:
            raise PresentationError(f"max_h must be non-negative, got {self.max_h}")
        for name in INTERVAL_KEYS:
            interval = getattr(self, name)
            if not interval.is_finite() or interval.is_empty():
                raise PresentationError(f"{name} must be a finite nonempty interval, got {interval}")

    def replace(self, **changes) -> "AnalysisConfig":
        """New config with the given fields changed; None values are ignored."""
        changes = {key: value for key, value in changes.items() if value is not None}
        return dataclasses.replace(self, **changes)

    def scaled(self, factor: float) -> "AnalysisConfig":
        """Orbit and closure budgets multiplied by ``factor`` (at least 1 each)."""
        if factor <= 0:
            raise PresentationError(f"budget scale must be positive, got {factor}")
        return dataclasses.replace(
            self,
            budget_orbit=max(1, int(self.budget_orbit * factor)),
            budget_closure=max(1, int(self.budget_closure * factor)),
        )

    def with_params(self, params: Mapping[str, str]) -> "AnalysisConfig":
        """Apply `param` values read from a presentation file."""
        changes = {}
        for key, text in params.items():
            if key not in FILE_KEYS:
                raise PresentationError(f"unknown parameter {key!r}; expected one of {', '.join(FILE_KEYS)}")
            try:
                changes[key] = Interval.parse(text) if key in INTERVAL_KEYS else int(text)
            except ValueError as e:
                raise PresentationError(f"bad value for parameter {key}: {e}") from e
        return self.replace(**changes)

    def budgets(self) -> dict:
        return {"budget_orbit": self.budget_orbit, "budget_closure": self.budget_closure}

    def to_record(self) -> dict:
        record = dataclasses.asdict(self)
        for key in INTERVAL_KEYS:
            record[key] = getattr(self, key).to_record()
        return dict(sorted(record.items()))


def budget_scale(environ: Optional[Mapping[str, str]] = None) -> float:
    """Value of GSHIFT_BUDGET_SCALE, 1.0 when unset."""
    environ = os.environ if environ is None else environ
    raw = environ.get(BUDGET_SCALE_ENV)
    if raw is None or raw.strip() == "":
        return 1.0
    try:
        value = float(raw)
    except ValueError as e:
        raise PresentationError(f"{BUDGET_SCALE_ENV} must be a number, got {raw!r}") from e
    if value <= 0:
        raise PresentationError(f"{BUDGET_SCALE_ENV} must be positive, got {raw!r}")
    return value


def resolve_config(params: Optional[Mapping[str, str]] = None, overrides: Optional[dict] = None,
                   environ: Optional[Mapping[str, str]] = None) -> AnalysisConfig:
    """Build the effective config from file params, CLI overrides and the environment."""
    config = AnalysisConfig().with_params(params or {}).replace(**(overrides or {}))
    scale = budget_scale(environ)
    if scale != 1.0:
        logger.debug("scaling budgets by %s", scale)
        config = config.scaled(scale)
    return config
