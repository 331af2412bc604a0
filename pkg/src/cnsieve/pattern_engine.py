"""Generic witness-rule sieve over an integer progression.

A pattern is a set of rules.  An additive rule with offset w removes every
m = n*p - w (n >= 2), so a survivor has m + w free of small prime factors.
A scaled rule with factor s keeps only multiples of s and removes every
m = s*n*p (n >= 2), so a survivor has m/s free of small prime factors.
After sieving with p_1..p_k every survivor up to the effective limit
(a function of p_{k+1}) satisfies its witness conditions exactly.
"""
from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .base_primes import PrimeTable
from .errors import PreconditionError, RangeError, ValidationError

ADDITIVE = "additive"
SCALED = "scaled"


@dataclass(frozen=True, order=True)
class WitnessRule:
    kind: str
    value: int

    def __post_init__(self):
        if self.kind == ADDITIVE:
            if self.value == 0:
                raise ValidationError("additive offset must be nonzero")
        elif self.kind == SCALED:
            if self.value < 2:
                raise ValidationError("scale factor must be >= 2")
        else:
            raise ValidationError(f"unknown rule kind {self.kind!r}")

    @classmethod
    def additive(cls, w: int) -> "WitnessRule":
        return cls(ADDITIVE, int(w))

    @classmethod
    def scaled(cls, s: int) -> "WitnessRule":
        return cls(SCALED, int(s))

    def __str__(self):
        return f"{self.value:+d}" if self.kind == ADDITIVE else f"*{self.value}"


@dataclass(frozen=True)
class SievePattern:
    name: str
    rules: tuple[WitnessRule, ...]
    start: int
    description: str = ""

    @property
    def offsets(self) -> tuple[int, ...]:
        return tuple(r.value for r in self.rules if r.kind == ADDITIVE)

    @property
    def scales(self) -> tuple[int, ...]:
        return tuple(r.value for r in self.rules if r.kind == SCALED)

    @property
    def max_offset(self) -> int:
        return max((w for w in self.offsets), default=0)

    def rule_set(self) -> frozenset:
        return frozenset(self.rules)


def make_pattern(name: str, rules, start: int, description: str = "") -> SievePattern:
    rules = tuple(rules)
    if not rules:
        raise ValidationError("a pattern needs at least one rule")
    if len(set(rules)) != len(rules):
        raise ValidationError("duplicate rules")
    if start < 2:
        raise ValidationError("progression start must be >= 2")
    for r in rules:
        if r.kind == ADDITIVE and start + r.value < 2:
            raise ValidationError(f"start {start} puts witness m{r} below 2")
        if r.kind == SCALED and start < 2 * r.value:
            raise ValidationError(f"start {start} puts witness m/{r.value} below 2")
    return SievePattern(name, rules, int(start), description)


def effective_limit(pattern: SievePattern, p_next: int) -> int:
    """Largest m whose survivor status is exact after sieving with all primes < p_next."""
    sq = p_next * p_next - 1
    bounds = []
    for r in pattern.rules:
        if r.kind == ADDITIVE:
            bounds.append(sq - r.value)
        else:
            bounds.append(r.value * sq)
    return min(bounds)


@dataclass(frozen=True, eq=False)
class SurvivorSet:
    pattern: SievePattern
    bound: int
    effective_limit: int
    survivors: np.ndarray = field(repr=False)
    sieving_prime_max: int

    @property
    def exact_bound(self) -> int:
        return min(self.bound, self.effective_limit)

    @property
    def provisional(self) -> np.ndarray:
        """Survivors above the effective limit; not certified."""
        return self.survivors[self.survivors > self.effective_limit]

    def count_below(self, x: int, provisional: bool = False) -> int:
        _check_regime(self, x, provisional)
        return int(np.searchsorted(self.survivors, x, side="right"))

    def __len__(self):
        return len(self.survivors)


def _check_regime(sset: SurvivorSet, x: int, provisional: bool) -> None:
    if x > sset.effective_limit and not provisional:
        raise RangeError(
            f"x={x} is above the effective limit {sset.effective_limit} of this run"
        )
    if x > sset.bound:
        raise RangeError(f"x={x} is above the sieve bound {sset.bound}")


def survivors_below(sset: SurvivorSet, x: int, provisional: bool = False) -> list[int]:
    n = sset.count_below(x, provisional)
    return sset.survivors[:n].tolist()


def _first_at_least(lo: int, first: int, step: int) -> int:
    if first >= lo:
        return first
    return first + -(-(lo - first) // step) * step


def _mark_span(alive: np.ndarray, base: int, lo: int, hi: int, pattern: SievePattern, primes) -> None:
    """Apply every (rule, prime) removal to alive[lo-base : hi-base + 1]."""
    seg = alive[lo - base : hi - base + 1]
    for s in pattern.scales:
        keep = np.zeros(len(seg), dtype=bool)
        keep[(-lo) % s :: s] = True
        seg &= keep
    for r in pattern.rules:
        for p in primes:
            if r.kind == ADDITIVE:
                m0 = _first_at_least(lo, 2 * p - r.value, p)
                step = p
            else:
                step = r.value * p
                m0 = _first_at_least(lo, 2 * step, step)
            if m0 <= hi:
                seg[m0 - lo :: step] = False


def sieving_primes_for(pattern: SievePattern, bound: int, table: PrimeTable) -> tuple[list[int], int]:
    """Primes p_1..p_k with k minimal such that the effective limit covers bound, plus p_{k+1}."""
    used: list[int] = []
    for p in table.primes:
        p = int(p)
        if effective_limit(pattern, p) >= bound:
            return used, p
        used.append(p)
    raise PreconditionError("prime table too small to choose sieving primes")


def run_sieve(
    pattern: SievePattern,
    bound: int,
    table: PrimeTable,
    *,
    max_sieving_prime: int | None = None,
    workers: int = 1,
    span_size: int = 1 << 22,
) -> SurvivorSet:
    """Sieve [pattern.start, bound] with the pattern's rules.

    By default the sieving primes are chosen so the whole range is exact.
    `max_sieving_prime` stops early; survivors above the resulting effective
    limit are then provisional.
    """
    bound = int(bound)
    if bound < pattern.start:
        raise PreconditionError(f"bound {bound} is below the progression start {pattern.start}")
    need = bound + max(abs(w) for w in pattern.offsets) if pattern.offsets else bound
    if table.limit < need:
        raise PreconditionError(f"prime table limit {table.limit} < required {need}")

    if max_sieving_prime is None:
        primes, p_next = sieving_primes_for(pattern, bound, table)
    else:
        primes = [int(p) for p in table.primes_up_to(max_sieving_prime)]
        p_next = table.next_prime(max_sieving_prime)

    start = pattern.start
    alive = np.ones(bound - start + 1, dtype=bool)
    spans = [(lo, min(lo + span_size - 1, bound)) for lo in range(start, bound + 1, span_size)]
    if workers > 1 and len(spans) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            list(pool.map(lambda sp: _mark_span(alive, start, sp[0], sp[1], pattern, primes), spans))
    else:
        for lo, hi in spans:
            _mark_span(alive, start, lo, hi, pattern, primes)

    survivors = np.flatnonzero(alive).astype(np.int64) + start
    return SurvivorSet(
        pattern=pattern,
        bound=bound,
        effective_limit=effective_limit(pattern, p_next),
        survivors=survivors,
        sieving_prime_max=primes[-1] if primes else 0,
    )


def contamination_stats(sset: SurvivorSet, table: PrimeTable) -> tuple[int, int]:
    """(total survivors, survivors that are themselves prime)."""
    if table.limit < sset.bound:
        raise PreconditionError("table does not cover the sieve bound")
    s = sset.survivors
    return len(s), int(np.count_nonzero(table.is_prime_array(s)))
