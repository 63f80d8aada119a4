# Cross-checks between definition-level answers and the combinatorial criteria, and sweeps over instances
from __future__ import annotations

import logging
from dataclasses import dataclass, field
from itertools import combinations, product
from typing import Iterable, Iterator, List, Optional

from .finite import (
    DEFAULT_EXHAUSTIVE_LIMIT,
    FiniteInstance,
    covers_everything,
    entourage_modulus_check,
    expansive_definition,
    is_group,
    is_permutation,
    random_instance,
    sensitive_definition,
)

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Crosscheck:
    definition_verdict: bool
    combinatorial_verdict: bool

    @property
    def agree(self) -> bool:
        return self.definition_verdict == self.combinatorial_verdict


@dataclass(frozen=True)
class DistalCrosscheck:
    group_verdict: bool
    bijective_verdict: bool

    @property
    def agree(self) -> bool:
        return self.group_verdict == self.bijective_verdict


def expansivity_crosscheck(inst: FiniteInstance, H: Iterable[int],
                           limit: int = DEFAULT_EXHAUSTIVE_LIMIT) -> Crosscheck:
    """Expansive with modulus alpha_H by definition, against T.H == Gamma."""
    H = sorted(set(H))
    definition = expansive_definition(inst, H, limit)
    return Crosscheck(bool(definition), covers_everything(inst, H))


def distal_crosscheck(inst: FiniteInstance) -> DistalCrosscheck:
    """T is a group, against every generator being a permutation."""
    return DistalCrosscheck(is_group(inst), all(is_permutation(t) for t in inst.tables))


def subsets(m: int) -> Iterator[List[int]]:
    for size in range(m + 1):
        for subset in combinations(range(m), size):
            yield list(subset)


def exhaustive_instances(max_m: int = 3, k: int = 2, max_g: int = 2) -> Iterator[FiniteInstance]:
    """Every instance with m <= max_m and at most max_g generators (repeats allowed)."""
    for m in range(1, max_m + 1):
        all_tables = list(product(range(m), repeat=m))
        for g in range(max_g + 1):
            for tables in product(all_tables, repeat=g):
                yield FiniteInstance(m, k, tables)


def random_instances(count: int = 1000, m: int = 4, k: int = 2, g: int = 2, seed: int = 0
                     ) -> Iterator[FiniteInstance]:
    for i in range(count):
        yield random_instance(seed + i, m, k, g)


@dataclass
class SweepReport:
    name: str
    instances: int = 0
    checks: int = 0
    disagreements: List[dict] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.disagreements

    def to_record(self) -> dict:
        return {
            "name": self.name,
            "instances": self.instances,
            "checks": self.checks,
            "disagreements": list(self.disagreements),
        }


def run_sweep(name: str, instances: Iterable[FiniteInstance], limit: int = DEFAULT_EXHAUSTIVE_LIMIT,
              sensitivity_max_m: int = 3, report: Optional[SweepReport] = None) -> SweepReport:
    """
    For every instance and every subset H of its coordinates: the
    expansivity cross-check and the modulus check; once per instance the
    distal cross-check and, on small instances, the sensitivity sanity check.
    """
    report = report or SweepReport(name)
    for inst in instances:
        report.instances += 1
        for H in subsets(inst.m):
            check = expansivity_crosscheck(inst, H, limit)
            report.checks += 1
            if not check.agree:
                report.disagreements.append({"check": "expansive", "instance": inst.to_record(), "H": H,
                                             "definition": check.definition_verdict,
                                             "combinatorial": check.combinatorial_verdict})
            modulus = entourage_modulus_check(inst, H, limit)
            report.checks += 1
            if not modulus:
                report.disagreements.append({"check": "modulus", "instance": inst.to_record(), "H0": H,
                                             "H": list(modulus.H)})
        distal = distal_crosscheck(inst)
        report.checks += 1
        if not distal.agree:
            report.disagreements.append({"check": "distal", "instance": inst.to_record(),
                                         "group": distal.group_verdict, "bijective": distal.bijective_verdict})
        if inst.m <= sensitivity_max_m:
            report.checks += 1
            if sensitive_definition(inst, limit):
                report.disagreements.append({"check": "sensitive", "instance": inst.to_record()})
    logger.debug("sweep %s: %d instances, %d checks, %d disagreements",
                 name, report.instances, report.checks, len(report.disagreements))
    return report


def standard_sweeps(seed: int = 0, random_count: int = 1000, max_m: int = 3, random_m: int = 4,
                    limit: int = DEFAULT_EXHAUSTIVE_LIMIT) -> List[SweepReport]:
    """The exhaustive small-instance sweep and the seeded random sweep."""
    return [
        run_sweep(f"exhaustive m<={max_m} k=2 g<=2", exhaustive_instances(max_m, 2, 2), limit),
        run_sweep(f"random m={random_m} k=2 g=2 seed={seed}", random_instances(random_count, random_m, 2, 2, seed),
                  limit),
    ]
