"""Catalog of concrete constellation sieves and their counting conventions."""
from __future__ import annotations

import math
from dataclasses import dataclass

from .base_primes import PrimeTable
from .errors import RangeError, ValidationError
from .pattern_engine import (
    SievePattern,
    SurvivorSet,
    WitnessRule,
    make_pattern,
    run_sieve,
)

A = WitnessRule.additive
S = WitnessRule.scaled

TAGS = ("twin", "gap", "sophie_germain", "triplet", "quadruplet", "general")


@dataclass(frozen=True)
class ConstellationKind:
    tag: str
    d: int = 0
    s: int = 0
    t: int = 0

    def __post_init__(self):
        if self.tag not in TAGS:
            raise ValidationError(f"unknown constellation {self.tag!r}")
        if self.tag == "gap" and self.d < 1:
            raise ValidationError("gap needs d >= 1")
        if self.tag == "general":
            if self.s < 1 or self.t == 0:
                raise ValidationError("general needs s >= 1 and t != 0")
            if math.gcd(self.s, self.t) != 1 or (self.s * self.t) % 2:
                raise ValidationError("general needs gcd(s, t) = 1 and s*t even")

    @property
    def name(self) -> str:
        if self.tag == "gap":
            return f"gap:{self.d}"
        if self.tag == "general":
            return f"general:{self.s}:{self.t}"
        return {"sophie_germain": "sg", "quadruplet": "quad"}.get(self.tag, self.tag)

    @property
    def half_gap(self) -> int | None:
        """d for pair-type kinds (twin is d=1), else None."""
        if self.tag == "twin":
            return 1
        if self.tag == "gap":
            return self.d
        if self.tag == "general" and self.s == 1:
            return abs(self.t) // 2
        return None

    def __str__(self):
        return self.name


TWIN = ConstellationKind("twin")
SOPHIE_GERMAIN = ConstellationKind("sophie_germain")
TRIPLET = ConstellationKind("triplet")
QUADRUPLET = ConstellationKind("quadruplet")


def gap(d: int) -> ConstellationKind:
    return ConstellationKind("gap", d=d)


def general(s: int, t: int) -> ConstellationKind:
    return ConstellationKind("general", s=s, t=t)


def parse_kind(text: str) -> ConstellationKind:
    """Parse the CLI syntax twin | gap:<d> | sg | triplet | quad | general:<s>:<t>."""
    parts = text.strip().split(":")
    head = parts[0]
    try:
        if head == "twin" and len(parts) == 1:
            return TWIN
        if head == "sg" and len(parts) == 1:
            return SOPHIE_GERMAIN
        if head == "triplet" and len(parts) == 1:
            return TRIPLET
        if head == "quad" and len(parts) == 1:
            return QUADRUPLET
        if head == "gap" and len(parts) == 2:
            return gap(int(parts[1]))
        if head == "general" and len(parts) == 3:
            return general(int(parts[1]), int(parts[2]))
    except ValueError as e:
        raise ValidationError(f"bad pattern {text!r}: {e}") from None
    raise ValidationError(f"bad pattern {text!r}")


def _gap_pattern(d: int, name: str) -> SievePattern:
    return make_pattern(name, [A(d), A(-d)], 2 + d, f"centers of prime pairs (m-{d}, m+{d})")


def pattern_for(kind: ConstellationKind) -> tuple[SievePattern, ...]:
    if kind.tag in ("twin", "gap"):
        return (_gap_pattern(kind.half_gap, kind.name),)
    if kind.tag == "sophie_germain":
        return (make_pattern("sg", [S(2), A(1)], 4, "2q with q and 2q+1 prime"),)
    if kind.tag == "triplet":
        return (
            make_pattern("triplet-A", [A(1), A(3), A(-3)], 5, "centers of (p, p+4, p+6)"),
            make_pattern("triplet-B", [A(-1), A(3), A(-3)], 5, "centers of (p, p+2, p+6)"),
        )
    if kind.tag == "quadruplet":
        return (make_pattern("quad", [A(2), A(-2), A(4), A(-4)], 6, "centers of (p, p+2, p+6, p+8)"),)
    # general
    s, t = kind.s, kind.t
    if s == 1:
        # (p, p+t) is a pair with gap |t|; sieve its centers
        return (_gap_pattern(abs(t) // 2, kind.name),)
    start = max(2 * s, 2 - t)
    return (make_pattern(kind.name, [S(s), A(t)], start, f"{s}q with q and {s}q{t:+d} prime"),)


def sieve_bound(kind: ConstellationKind, x: int) -> int:
    """Largest survivor value that can contribute to a count up to x."""
    if kind.tag == "sophie_germain":
        return 2 * x
    if kind.tag == "general":
        if kind.s == 1:
            d = abs(kind.t) // 2
            return x + d if kind.t > 0 else x - d
        return kind.s * x
    return x


def sieve_kind(kind: ConstellationKind, x: int, table: PrimeTable, workers: int = 1) -> tuple[SurvivorSet, ...]:
    """Run every pattern of `kind` far enough that counts up to x are exact."""
    bound = sieve_bound(kind, x)
    out = []
    for pat in pattern_for(kind):
        out.append(run_sieve(pat, max(bound, pat.start), table, workers=workers))
    return tuple(out)


def count_from_sets(kind: ConstellationKind, sets: tuple[SurvivorSet, ...], x: int) -> int:
    bound = sieve_bound(kind, x)
    total = 0
    for sset in sets:
        if bound > sset.exact_bound:
            raise RangeError(f"x={x} is outside the exact regime of the sieve run")
        if bound < sset.pattern.start:
            continue
        total += sset.count_below(bound)
    return total


def count_constellations(kind: ConstellationKind, x: int, table: PrimeTable, workers: int = 1) -> int:
    """Number of constellations counted up to x.

    Pairs and constellations are counted by center <= x; Sophie Germain by
    q <= x; general(s, t) by the smaller-index prime p <= x.  Triplets add
    both forms (no center satisfies both).
    """
    return count_from_sets(kind, sieve_kind(kind, x, table, workers), x)


def _members(kind: ConstellationKind, c: int) -> list[tuple[int, ...]]:
    """Candidate member tuples for a center; more than one only for triplets."""
    if kind.tag in ("twin", "gap"):
        d = kind.half_gap
        return [(c - d, c + d)]
    if kind.tag == "sophie_germain":
        return [(c // 2, c + 1)] if c % 2 == 0 else []
    if kind.tag == "triplet":
        return [(c - 3, c + 1, c + 3), (c - 3, c - 1, c + 3)]
    if kind.tag == "quadruplet":
        return [(c - 4, c - 2, c + 2, c + 4)]
    s, t = kind.s, kind.t
    if s == 1:
        d = abs(t) // 2
        return [(c - d, c + d) if t > 0 else (c + d, c - d)]
    return [(c // s, c + t)] if c % s == 0 else []


def members_of(kind: ConstellationKind, center: int, table: PrimeTable | None = None) -> tuple[int, ...]:
    """Constellation members for a survivor; ValidationError if center is not one."""
    if table is None:
        from .oracle import trial_is_prime as check
    else:
        check = table.is_prime
    for cand in _members(kind, int(center)):
        if all(m >= 2 and check(m) for m in cand):
            return cand
    raise ValidationError(f"{center} is not a {kind.name} center")
