from .finite import FiniteInstance, apply_shift, enumerate_semigroup, expansive_definition, random_instance
from .crosscheck import distal_crosscheck, expansivity_crosscheck, run_sweep, standard_sweeps

__all__ = [
    "FiniteInstance",
    "apply_shift",
    "enumerate_semigroup",
    "expansive_definition",
    "random_instance",
    "distal_crosscheck",
    "expansivity_crosscheck",
    "run_sweep",
    "standard_sweeps",
]
