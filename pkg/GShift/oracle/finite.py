# Finite models of shift semigroups, checked straight from the topological definitions
#
# Coordinates are 0..m-1 and symbols 0..k-1. A table t of length m is the
# index map i -> t[i]; the shift of t sends cfg to cfg[t].
from __future__ import annotations

import logging
from dataclasses import dataclass
from functools import cached_property
from itertools import combinations, product
from typing import Iterable, List, Optional, Sequence, Tuple

import numpy as np

from ..errors import BudgetExhaustedError

logger = logging.getLogger(__name__)

DEFAULT_EXHAUSTIVE_LIMIT = 4096

# Knuth's MMIX constants
LCG_MULTIPLIER = 6364136223846793005
LCG_INCREMENT = 1442695040888963407
LCG_MASK = (1 << 64) - 1


class Lcg64:
    """
    64-bit linear congruential generator:
    state <- (6364136223846793005 * state + 1442695040888963407) mod 2^64,
    output = state >> 33. Instances built from the same seed match everywhere.
    """

    def __init__(self, seed: int):
        self.state = seed & LCG_MASK

    def next(self) -> int:
        self.state = (LCG_MULTIPLIER * self.state + LCG_INCREMENT) & LCG_MASK
        return self.state >> 33

    def below(self, n: int) -> int:
        return self.next() % n


@dataclass(frozen=True)
class FiniteInstance:
    """
    Args:
        m: Number of coordinates
        k: Number of symbols, at least 2
        tables: Generator index maps as length-m tuples
    """

    m: int
    k: int
    tables: Tuple[Tuple[int, ...], ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "tables", tuple(tuple(int(v) for v in t) for t in self.tables))
        if self.m < 1:
            raise ValueError(f"need at least one coordinate, got m={self.m}")
        if self.k < 2:
            raise ValueError(f"need at least two symbols, got k={self.k}")
        for table in self.tables:
            if len(table) != self.m or any(not 0 <= v < self.m for v in table):
                raise ValueError(f"table {table} is not a map on 0..{self.m - 1}")

    @cached_property
    def semigroup(self) -> np.ndarray:
        """Every element of T as a row, identity first."""
        return np.array(enumerate_semigroup(self), dtype=np.int64)

    @property
    def config_count(self) -> int:
        return self.k ** self.m

    def configs(self, limit: int = DEFAULT_EXHAUSTIVE_LIMIT) -> np.ndarray:
        """All k^m configurations as rows."""
        if self.config_count > limit:
            raise BudgetExhaustedError(f"{self.config_count} configurations exceed the exhaustive limit {limit}")
        return self._all_configs

    @cached_property
    def _all_configs(self) -> np.ndarray:
        return np.array(list(product(range(self.k), repeat=self.m)), dtype=np.int64)

    @cached_property
    def shifted(self) -> np.ndarray:
        """shifted[s, c] is configuration c moved by semigroup element s."""
        return self._all_configs[:, self.semigroup].transpose(1, 0, 2)

    def __str__(self) -> str:
        return f"m={self.m} k={self.k} tables={[list(t) for t in self.tables]}"

    def to_record(self) -> dict:
        return {"m": self.m, "k": self.k, "tables": [list(t) for t in self.tables]}


@dataclass(frozen=True)
class DefinitionResult:
    holds: bool
    exhaustive: bool = True
    pairs_checked: int = 0

    def __bool__(self) -> bool:
        return self.holds


def identity_table(m: int) -> Tuple[int, ...]:
    return tuple(range(m))


def apply_shift(table: Sequence[int], cfg: Sequence[int]) -> np.ndarray:
    """result[i] = cfg[table[i]]."""
    return np.asarray(cfg)[np.asarray(table, dtype=np.int64)]


def compose_tables(f: Sequence[int], g: Sequence[int]) -> Tuple[int, ...]:
    """f o g as a table: apply g first."""
    return tuple(int(v) for v in np.asarray(f)[np.asarray(g, dtype=np.int64)])


def enumerate_semigroup(inst: FiniteInstance) -> List[Tuple[int, ...]]:
    """Closure of the generator tables under composition, identity included."""
    identity = identity_table(inst.m)
    elements = [identity]
    seen = {identity}
    i = 0
    while i < len(elements):
        element = elements[i]
        for table in inst.tables:
            new = compose_tables(table, element)
            if new not in seen:
                seen.add(new)
                elements.append(new)
        i += 1
    return elements


def orbit_of_set(inst: FiniteInstance, H: Iterable[int]) -> List[int]:
    """T.H as a sorted list."""
    H = sorted(set(H))
    if not H:
        return []
    return sorted(set(np.unique(inst.semigroup[:, H]).tolist()))


def _encode(rows: np.ndarray, k: int) -> np.ndarray:
    """Pack the last axis of symbol rows into one integer per row."""
    weights = k ** np.arange(rows.shape[-1], dtype=np.int64)
    return (rows * weights).sum(axis=-1)


def expansive_definition(inst: FiniteInstance, H: Iterable[int], limit: int = DEFAULT_EXHAUSTIVE_LIMIT,
                         sample_pairs: Optional[int] = None, seed: int = 0) -> DefinitionResult:
    """
    Whether every pair of distinct configurations is pulled apart on H by
    some element of S.

    Exhaustively, two configurations are never separated exactly when their
    columns of H-codes (one code per semigroup element) coincide. Above
    ``limit`` configurations, ``sample_pairs`` random pairs are checked
    instead and the result is marked non-exhaustive.

    Raises:
        BudgetExhaustedError: too many configurations and no sampling asked for
    """
    H = sorted(set(H))
    if inst.config_count <= limit:
        if not H:
            return DefinitionResult(inst.config_count < 2, True, 0)
        codes = _encode(inst.shifted[:, :, H], inst.k)
        distinct = np.unique(codes.T, axis=0).shape[0]
        pairs = inst.config_count * (inst.config_count - 1) // 2
        return DefinitionResult(distinct == inst.config_count, True, pairs)

    if sample_pairs is None:
        raise BudgetExhaustedError(f"{inst.config_count} configurations exceed the exhaustive limit {limit}")
    logger.debug("sampling %d pairs for %s", sample_pairs, inst)
    rng = Lcg64(seed)
    semigroup = inst.semigroup
    checked = 0
    for _ in range(sample_pairs):
        x = np.array([rng.below(inst.k) for _ in range(inst.m)], dtype=np.int64)
        y = np.array([rng.below(inst.k) for _ in range(inst.m)], dtype=np.int64)
        if np.array_equal(x, y):
            continue
        checked += 1
        if not H or not (x[semigroup][:, H] != y[semigroup][:, H]).any():
            return DefinitionResult(False, False, checked)
    return DefinitionResult(True, False, checked)


def covers_everything(inst: FiniteInstance, H: Iterable[int]) -> bool:
    """T.H == all coordinates."""
    return len(orbit_of_set(inst, H)) == inst.m


@dataclass(frozen=True)
class ModulusCheck:
    holds: bool
    H: Tuple[int, ...]

    def __bool__(self) -> bool:
        return self.holds


def entourage_modulus_check(inst: FiniteInstance, H0: Iterable[int],
                            limit: int = DEFAULT_EXHAUSTIVE_LIMIT) -> ModulusCheck:
    """
    With H = T.H0: any two configurations agreeing on H keep agreeing on H0
    after every element of S. Holds when, inside each class of equal
    H-codes, every element's H0-code is constant.
    """
    H0 = sorted(set(H0))
    H = orbit_of_set(inst, H0)
    configs = inst.configs(limit)
    if not H0:
        return ModulusCheck(True, tuple(H))
    key_h = _encode(configs[:, H], inst.k)
    key_h0 = _encode(inst.shifted[:, :, H0], inst.k)
    joint = np.vstack([key_h[None, :], key_h0]).T
    holds = np.unique(joint, axis=0).shape[0] == np.unique(key_h).shape[0]
    return ModulusCheck(bool(holds), tuple(H))


def is_permutation(table: Sequence[int]) -> bool:
    return sorted(table) == list(range(len(table)))


def is_group(inst: FiniteInstance) -> bool:
    """
    Every element of T has a two-sided inverse inside T. A table with a
    left inverse is injective, so only one candidate per element is tried.
    """
    present = {tuple(int(v) for v in row) for row in inst.semigroup}
    identity = identity_table(inst.m)
    for row in inst.semigroup:
        candidate = tuple(int(v) for v in np.argsort(row, kind="stable"))
        element = tuple(int(v) for v in row)
        if candidate not in present:
            return False
        if not compose_tables(element, candidate) == identity == compose_tables(candidate, element):
            return False
    return True


def sensitive_definition(inst: FiniteInstance, limit: int = DEFAULT_EXHAUSTIVE_LIMIT) -> bool:
    """
    Some entourage alpha_E is left from inside every neighbourhood of every
    point. On a finite index set the neighbourhood alpha_Gamma[x] is {x}, so
    the only candidate y is x itself.
    """
    configs = inst.configs(limit)
    coords = list(range(inst.m))
    for size in range(inst.m + 1):
        for E in _subsets(coords, size):
            if _escapes_everywhere(inst, configs, E):
                return True
    return False


def _escapes_everywhere(inst: FiniteInstance, configs: np.ndarray, E: List[int]) -> bool:
    shifted = inst.shifted
    for x in range(len(configs)):
        # y ranges over the smallest neighbourhood of x
        neighbours = np.flatnonzero((configs == configs[x]).all(axis=1))
        if not any((shifted[:, x, E] != shifted[:, y, E]).any() for y in neighbours):
            return False
    return True


def _subsets(items: List[int], size: int):
    return (list(c) for c in combinations(items, size))


def random_instance(seed: int, m: int, k: int, g: int) -> FiniteInstance:
    """Generator tables drawn from Lcg64(seed), table by table, entry by entry."""
    if min(m, k, g) < 1:
        raise ValueError("m, k and g must be positive")
    rng = Lcg64(seed)
    tables = tuple(tuple(rng.below(m) for _ in range(m)) for _ in range(g))
    return FiniteInstance(m, k, tables)
