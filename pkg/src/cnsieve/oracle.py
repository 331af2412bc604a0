"""Deliberately naive reference implementations.

Nothing here touches the sieve engines: primality is by trial division and
counting is by explicit inclusion-exclusion, so agreement with the fast
paths is evidence rather than tautology.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

from .errors import PreconditionError, ValidationError

MAX_DIRECT_TERMS = 25


@dataclass(frozen=True)
class OracleVerdict:
    matched: bool
    first_mismatch: int | None
    lhs_count: int
    rhs_count: int


def compare_lists(lhs, rhs) -> OracleVerdict:
    """Compare two ascending integer sequences; report the smallest differing value."""
    lhs = [int(v) for v in lhs]
    rhs = [int(v) for v in rhs]
    diff = set(lhs).symmetric_difference(rhs)
    first = min(diff) if diff else None
    return OracleVerdict(first is None and len(lhs) == len(rhs), first, len(lhs), len(rhs))


def trial_is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n < 4:
        return True
    if n % 2 == 0 or n % 3 == 0:
        return False
    f = 5
    r = math.isqrt(n)
    while f <= r:
        if n % f == 0 or n % (f + 2) == 0:
            return False
        f += 6
    return True


def bruteforce_survivors(pattern, bound: int) -> list[int]:
    """Every m in [start, bound] meeting the pattern's witness conditions."""
    offsets = [r.value for r in pattern.rules if r.kind == "additive"]
    scales = [r.value for r in pattern.rules if r.kind == "scaled"]
    memo: dict[int, bool] = {}

    def prime(n):
        v = memo.get(n)
        if v is None:
            v = memo[n] = trial_is_prime(n)
        return v

    out = []
    for m in range(pattern.start, bound + 1):
        if all(m % s == 0 and prime(m // s) for s in scales) and all(prime(m + w) for w in offsets):
            out.append(m)
    return out


def coprime_count(x: int, moduli) -> int:
    """Integers in [1, x] divisible by none of the moduli, by the alternating floor sum.

    For prime moduli this is the count of integers coprime to all of them.
    """
    moduli = [int(n) for n in moduli]
    if len(moduli) > MAX_DIRECT_TERMS:
        raise ValidationError(f"at most {MAX_DIRECT_TERMS} moduli")
    for i, a in enumerate(moduli):
        if a < 2:
            raise ValidationError("moduli must be >= 2")
        for b in moduli[i + 1 :]:
            if math.gcd(a, b) != 1:
                raise ValidationError(f"moduli {a} and {b} are not coprime")
    if x <= 0:
        return 0
    return _alternating_sum(int(x), sorted(moduli))


def _alternating_sum(x: int, moduli: list[int]) -> int:
    # sum over subsets T of (-1)^|T| floor(x / prod T); subsets whose product
    # exceeds x contribute 0 and are pruned along with all their supersets
    total = 0

    def walk(i, prod, sign):
        nonlocal total
        total += sign * (x // prod)
        for j in range(i, len(moduli)):
            nxt = prod * moduli[j]
            if nxt > x:
                break
            walk(j + 1, nxt, -sign)

    walk(0, 1, 1)
    return total


def legendre_pi(N: int, table=None, allow_recursion: bool = True) -> int:
    """pi(N) = phi(N, r) + r - 1 with r = pi(sqrt N).

    Small r uses the explicit alternating sum over subsets of the primes up
    to sqrt N; larger r falls back to a memoised recursion on phi.
    """
    N = int(N)
    if N < 2:
        return 0
    root = math.isqrt(N)
    if table is not None:
        if table.limit < root:
            raise PreconditionError("table does not cover sqrt(N)")
        primes = [int(p) for p in table.primes_up_to(root)] if root >= 2 else []
    else:
        primes = [p for p in range(2, root + 1) if trial_is_prime(p)]
    r = len(primes)
    if r <= MAX_DIRECT_TERMS:
        return _alternating_sum(N, primes) + r - 1
    if not allow_recursion:
        raise PreconditionError(f"{r} sieving primes needs 2^{r} terms; recursion disabled")
    return _legendre_phi(N, tuple(primes)) + r - 1


def _legendre_phi(x: int, primes: tuple[int, ...]) -> int:
    # unrolled form phi(y, a) = y - sum_{i <= a} phi(y // p_i, i - 1) keeps the
    # recursion depth at log2(x) rather than a
    @lru_cache(maxsize=None)
    def phi(y, a):
        if a == 0 or y == 0:
            return y
        if primes[a - 1] >= y:
            # only 1 survives once every prime <= y is a sieving prime
            return 1
        total = y
        for i in range(a):
            q = y // primes[i]
            if q == 0:
                break
            total -= phi(q, i)
        return total

    return phi(x, len(primes))


def primes_in_ap_count(a: int, b: int, x: int, table=None) -> int:
    """#{p <= x prime, p = a (mod b)}."""
    if math.gcd(a, b) != 1:
        raise ValidationError(f"gcd({a}, {b}) != 1")
    if table is not None:
        if table.limit < x:
            raise PreconditionError("table does not cover x")
        ps = table.primes_up_to(x) if x >= 2 else []
        return int(sum(1 for p in ps if int(p) % b == a % b))
    return sum(1 for p in range(2, x + 1) if p % b == a % b and trial_is_prime(p))
