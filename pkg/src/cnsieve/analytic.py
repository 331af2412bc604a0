"""Euler products, constants, densities and asymptotic predictions.

Partial products and sums come back as `Truncated` values: the partial
value at a prime cutoff together with a rigorous bound on what the
untruncated tail can contribute.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np
from scipy import integrate, special

from .base_primes import PrimeTable, build_prime_table
from .errors import PreconditionError, RangeError, ValidationError
from .variants import ConstellationKind

EULER_GAMMA = 0.57721566490153286
DEFAULT_CUTOFF = 10**7

PAPER = "paper"
INTEGRAL = "integral"
MODES = (PAPER, INTEGRAL)

# leading factors of the printed triplet / quadruplet constants
_CONSTELLATION = {"triplet": (3, 9.0), "quadruplet": (4, 13.5)}


@dataclass(frozen=True)
class Truncated:
    """A partial product or sum truncated at primes <= cutoff."""

    value: float
    cutoff: int
    tail_bound: float

    def __float__(self):
        return self.value


@dataclass(frozen=True)
class ConstantBundle:
    euler_gamma: float
    twin_product: float
    meissel_mertens: float
    triplet: float
    quadruplet: float
    cutoff_P: int
    tail_bound: float
    triplet_tail: float
    quadruplet_tail: float

    @property
    def twin_constant(self) -> float:
        """C_2 itself (half of the 2*C_2 prefactor)."""
        return self.twin_product / 2


def _primes(table: PrimeTable, P: int) -> np.ndarray:
    if table.limit < P:
        raise PreconditionError(f"prime table limit {table.limit} < cutoff {P}")
    return table.primes_up_to(P).astype(np.float64)


# -- elementary ------------------------------------------------------------

def euler_totient(b: int) -> int:
    if b < 1:
        raise ValidationError("totient needs b >= 1")
    result, n, f = b, b, 2
    while f * f <= n:
        if n % f == 0:
            while n % f == 0:
                n //= f
            result -= result // f
        f += 1
    if n > 1:
        result -= result // n
    return result


def log_power_integral(x: float, k: int) -> float:
    """Integral of dt / (log t)^k over [2, x]; k = 1 gives Li(x)."""
    if x < 2:
        raise RangeError("x must be >= 2")
    if k < 1:
        raise ValidationError("k must be >= 1")
    if x == 2:
        return 0.0
    # t = e^u turns the integrand into e^u / u^k, which is smooth on [log 2, log x]
    lo, hi = math.log(2.0), math.log(x)
    val, err = integrate.quad(
        lambda u: math.exp(u - k * math.log(u)), lo, hi, epsabs=0.0, epsrel=1e-12, limit=200
    )
    return val


def sg_integral(x: float) -> float:
    """Integral of dt / (log t * log 2t) over [2, x]."""
    if x < 2:
        raise RangeError("x must be >= 2")
    if x == 2:
        return 0.0
    ln2 = math.log(2.0)
    val, _ = integrate.quad(
        lambda u: math.exp(u) / (u * (u + ln2)), ln2, math.log(x), epsabs=0.0, epsrel=1e-12, limit=200
    )
    return val


def dirichlet_estimate(a: int, b: int, x: float) -> float:
    """Three-term estimate of #{p <= x : p = a mod b}; independent of a."""
    if math.gcd(a, b) != 1:
        raise ValidationError(f"gcd({a}, {b}) != 1")
    if x < 2:
        raise RangeError("x must be >= 2")
    L = math.log(x)
    return (x / L + x / L**2 + 2 * x / L**3) / euler_totient(b)


# -- Mertens layer ---------------------------------------------------------

def mertens_cutoff(x: float) -> float:
    """X(x) = x^(e^-gamma); primes up to X(x) give prod(1 - 1/p) ~ 1/log x."""
    if x < 4:
        raise RangeError("x must be >= 4")
    return x ** math.exp(-EULER_GAMMA)


def _cutoff_int(y: float) -> int:
    # guard against x**e^-gamma landing a hair below an integer
    n = math.floor(y)
    return n + 1 if y - n > 1 - 1e-12 else n


def mertens_product(x: float, table: PrimeTable) -> float:
    """prod over p <= X(x) of (1 - 1/p)."""
    X = _cutoff_int(mertens_cutoff(x))
    ps = _primes(table, X)
    return float(np.exp(np.sum(np.log1p(-1.0 / ps))))


def calibration_constant(N: int, table: PrimeTable) -> float:
    """c(N) = (pi(N) - pi(sqrt N) + 1) / (N * prod_{p <= sqrt N} (1 - 1/p))."""
    if N < 16:
        raise RangeError("N must be >= 16")
    if table.limit < N:
        raise PreconditionError("table does not cover N")
    r = math.isqrt(N)
    prod = float(np.prod(1.0 - 1.0 / table.primes_up_to(r).astype(np.float64)))
    return (table.prime_count(N) - table.prime_count(r) + 1) / (N * prod)


def meissel_mertens(P: int, table: PrimeTable) -> Truncated:
    """gamma + sum_{p <= P} [log(1 - 1/p) + 1/p]."""
    if P < 100:
        raise RangeError("cutoff must be >= 100")
    ps = _primes(table, P)
    terms = np.log1p(-1.0 / ps) + 1.0 / ps
    value = EULER_GAMMA + math.fsum(terms.tolist())
    # |log(1-y) + y| <= y^2 / (2(1-y)) = 1/(2p(p-1)); summing over all n > P telescopes to 1/(2P)
    return Truncated(value, P, 1.0 / (2 * P))


# -- Hardy-Littlewood constants ---------------------------------------------

def log_tail_bound(r: int, P: int) -> float:
    """Bound on sum_{p > P} |log((1 - r/p) / (1 - 1/p)^r)|.

    With y = 1/p the log is -sum_{j>=2} (r^j - r) y^j / j, so each term is
    at most r(r-1) y^2 / 2 + (r y)^3 / (3(1 - r y)).  Summing over all
    integers n > P uses sum 1/n^2 <= 1/P and sum 1/n^3 <= 1/(2 P^2).
    """
    if P <= 2 * r:
        raise RangeError("cutoff too small for the tail estimate")
    return r * (r - 1) / (2 * P) + r**3 / (6 * P**2 * (1 - r / P))


def _hl_log_product(r: int, ps: np.ndarray) -> float:
    terms = np.log1p(-r / ps) - r * np.log1p(-1.0 / ps)
    return math.fsum(terms.tolist())


def _truncated_product(lead: float, r: int, P: int, ps: np.ndarray) -> Truncated:
    value = lead * math.exp(_hl_log_product(r, ps))
    # every factor is < 1, so the limit lies in [value * e^-tail, value]
    return Truncated(value, P, value * -math.expm1(-log_tail_bound(r, P)))


def hl_pair_constant(P: int, table: PrimeTable) -> Truncated:
    """2 * prod_{3 <= p <= P} (1 - 2/p) / (1 - 1/p)^2, i.e. 2*C_2."""
    if P < 10**5:
        raise RangeError("cutoff must be >= 10^5")
    ps = _primes(table, P)
    return _truncated_product(2.0, 2, P, ps[ps >= 3])


def polignac_factor(d: int) -> Fraction:
    """prod over odd primes p | d of (p - 1) / (p - 2)."""
    if d < 1:
        raise ValidationError("d must be >= 1")
    out = Fraction(1)
    n = d
    while n % 2 == 0:
        n //= 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            out *= Fraction(f - 1, f - 2)
            while n % f == 0:
                n //= f
        f += 2
    if n > 1:
        out *= Fraction(n - 1, n - 2)
    return out


def constellation_constant(kind: ConstellationKind, P: int, table: PrimeTable) -> Truncated:
    """Leading constant of the Hardy-Littlewood prediction for kind."""
    if kind.tag in ("twin", "gap"):
        pair = hl_pair_constant(P, table)
        f = float(polignac_factor(kind.half_gap))
        return Truncated(pair.value * f, P, pair.tail_bound * f)
    if kind.tag in _CONSTELLATION:
        r, lead = _CONSTELLATION[kind.tag]
        ps = _primes(table, P)
        return _truncated_product(lead, r, P, ps[ps >= 5])
    raise ValidationError(f"no constellation constant for {kind.name}")


def compute_constants(P: int = DEFAULT_CUTOFF, table: PrimeTable | None = None) -> ConstantBundle:
    if table is None:
        table = build_prime_table(P)
    from .variants import QUADRUPLET, TRIPLET

    pair = hl_pair_constant(P, table)
    trip = constellation_constant(TRIPLET, P, table)
    quad = constellation_constant(QUADRUPLET, P, table)
    return ConstantBundle(
        euler_gamma=EULER_GAMMA,
        twin_product=pair.value,
        meissel_mertens=meissel_mertens(P, table).value,
        triplet=trip.value,
        quadruplet=quad.value,
        cutoff_P=P,
        tail_bound=pair.tail_bound,
        triplet_tail=trip.tail_bound,
        quadruplet_tail=quad.tail_bound,
    )


@lru_cache(maxsize=4)
def default_constants(P: int = DEFAULT_CUTOFF) -> ConstantBundle:
    return compute_constants(P)


# -- densities ---------------------------------------------------------------

def density_product(kind: ConstellationKind, table: PrimeTable, *, k: int | None = None, x: float | None = None) -> float:
    """Fraction of the progression left by the sieve.

    Triplet and quadruplet use the first k primes; pairs and Sophie Germain
    use primes up to the Mertens cutoff X(x).
    """
    if kind.tag in _CONSTELLATION:
        if k is None or k < 3:
            raise ValidationError("k >= 3 required")
        ps = table.primes[2:k].astype(np.float64)
        if len(ps) != k - 2:
            raise PreconditionError("table holds fewer than k primes")
        r, _ = _CONSTELLATION[kind.tag]
        head = 2 * (1 / 2) * (1 / 3) if kind.tag == "triplet" else (1 / 2) * (1 / 3)
        return head * float(np.prod(1.0 - r / ps))
    if x is None:
        raise ValidationError("x required for pair and Sophie Germain densities")
    if kind.tag in ("twin", "gap"):
        # p = 2 leaves one residue class of two; an odd p leaves p - 2 classes,
        # or p - 1 when p | d because then m - d = m + d (mod p)
        d = kind.half_gap
        ps = table.primes_up_to(_cutoff_int(mertens_cutoff(x)))
        odd = np.array([int(p) for p in ps if p > 2], dtype=np.float64)
        divides = np.array([d % int(p) == 0 for p in odd], dtype=bool)
        factors = np.where(divides, 1.0 - 1.0 / odd, 1.0 - 2.0 / odd)
        return 0.5 * float(np.prod(factors))
    if kind.tag == "sophie_germain":
        a = table.primes_up_to(_cutoff_int(mertens_cutoff(x))).astype(np.float64)
        b = table.primes_up_to(_cutoff_int(mertens_cutoff(2 * x))).astype(np.float64)
        return 0.25 * float(np.prod(1.0 - 1.0 / a[a >= 3])) * float(np.prod(1.0 - 1.0 / b[b >= 3]))
    raise ValidationError(f"no density for {kind.name}")


# -- predictions -------------------------------------------------------------

def predict(kind: ConstellationKind, x: float, mode: str = PAPER, constants: ConstantBundle | None = None) -> float:
    """Predicted count up to x.

    PAPER mode keeps closed-form 1/log x expansions; INTEGRAL mode swaps
    x/(log x)^k for the matching integral from 2 to x.
    """
    if x < 4:
        raise RangeError("x must be >= 4")
    if mode not in MODES:
        raise ValidationError(f"unknown mode {mode!r}")
    c = constants or default_constants()
    L = math.log(x)
    if kind.tag in ("twin", "gap") or (kind.tag == "general" and kind.s == 1):
        lead = c.twin_product * float(polignac_factor(kind.half_gap))
        if mode == PAPER:
            return lead * (x / L**2 + 2 * x / L**3)
        return lead * log_power_integral(x, 2)
    if kind.tag == "sophie_germain":
        if mode == PAPER:
            return predict(ConstellationKind("twin"), x, PAPER, c) * L / math.log(2 * x)
        return c.twin_product * sg_integral(x)
    if kind.tag in _CONSTELLATION:
        r, _ = _CONSTELLATION[kind.tag]
        lead = c.triplet if kind.tag == "triplet" else c.quadruplet
        if mode == PAPER:
            return lead * x / L**r
        return lead * log_power_integral(x, r)
    raise ValidationError(f"no prediction for {kind.name}")


def delta_twin_estimate(n: int, constants: ConstantBundle | None = None) -> float:
    """Expected twin count in (n^2, (n+1)^2]: C_2 (2n + 1) / (2 log^2 n)."""
    if n < 2:
        raise RangeError("n must be >= 2")
    c = constants or default_constants()
    return c.twin_constant * (2 * n + 1) / (2 * math.log(n) ** 2)


def brun_partial_sum(x: int, table: PrimeTable) -> float:
    """Sum of 1/p + 1/(p+2) over twin pairs with p + 2 <= x."""
    if table.limit < x + 2:
        raise PreconditionError("table must cover x + 2")
    if x < 5:
        return 0.0
    ps = table.primes_up_to(x)
    lo = ps[:-1][np.diff(ps) == 2].astype(np.float64)
    return math.fsum((1.0 / lo + 1.0 / (lo + 2)).tolist())
