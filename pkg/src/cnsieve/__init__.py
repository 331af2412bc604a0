"""Central-number sieves for prime pairs, Sophie Germain primes and prime constellations."""

__version__ = "0.1.0"

from .errors import PreconditionError, RangeError, ValidationError
from .base_primes import PrimeTable, build_prime_table, is_prime, load_or_build, nth_prime, prime_count
from .pattern_engine import (
    SievePattern,
    SurvivorSet,
    WitnessRule,
    contamination_stats,
    effective_limit,
    make_pattern,
    run_sieve,
    survivors_below,
)
from .variants import (
    QUADRUPLET,
    SOPHIE_GERMAIN,
    TRIPLET,
    TWIN,
    ConstellationKind,
    count_constellations,
    gap,
    general,
    members_of,
    parse_kind,
    pattern_for,
)
