"""Segmented, odd-only sieve of Eratosthenes with an on-disk cache.

Composite marks are kept packed, one bit per odd number 3, 5, 7, ...
(bit set = composite), LSB-first within each byte.  That is also the
cache file layout, so saving a table is a header plus a raw dump.
"""
from __future__ import annotations

import logging
import math
import os
import struct
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from functools import cached_property
from pathlib import Path

import numpy as np

from .errors import PreconditionError, RangeError

log = logging.getLogger(__name__)

MAX_LIMIT = 2**64 - 1
DEFAULT_SEGMENT_SIZE = 1 << 18
MIN_SEGMENT_SIZE = 64

CACHE_MAGIC = b"CNSIEVE1"
CACHE_VERSION = 1
CACHE_ENV = "CNSIEVE_CACHE"
_HEADER = struct.Struct("<8sIQ")
_SPOT_CHECK = 1 << 16


def _odd_count(limit: int) -> int:
    # number of odd integers in [3, limit]
    return max(0, (limit - 1) // 2)


def bitmap_nbytes(limit: int) -> int:
    return -(-(limit - 1) // 16)


def small_odd_primes(n: int) -> np.ndarray:
    """Odd primes <= n by a plain (unsegmented) sieve; used for base primes."""
    if n < 3:
        return np.zeros(0, dtype=np.int64)
    is_p = np.ones(n + 1, dtype=bool)
    is_p[:3] = False
    is_p[4::2] = False
    for p in range(3, math.isqrt(n) + 1, 2):
        if is_p[p]:
            is_p[p * p :: 2 * p] = False
    return np.flatnonzero(is_p).astype(np.int64)


def _mark_segment(comp: np.ndarray, lo: int, hi: int, base: np.ndarray) -> None:
    """Mark odd composites with index in [lo, hi); index j is the odd number 2j+3."""
    vlo = 2 * lo + 3
    vhi = 2 * (hi - 1) + 3
    seg = comp[lo:hi]
    for p in base:
        p = int(p)
        pp = p * p
        if pp > vhi:
            break
        start = max(pp, -(-vlo // p) * p)
        if start % 2 == 0:
            start += p
        if start > vhi:
            continue
        seg[(start - vlo) // 2 :: p] = True


def odd_composite_marks(
    limit: int,
    segment_size: int = DEFAULT_SEGMENT_SIZE,
    workers: int = 1,
    max_sieving_prime: int | None = None,
) -> np.ndarray:
    """Boolean composite marks over the odd numbers in [3, limit].

    `max_sieving_prime` stops the sieve early (only odd primes <= it are
    used), which is how the partial-sieve behaviour is inspected.
    """
    n = _odd_count(limit)
    comp = np.zeros(n, dtype=bool)
    if n == 0:
        return comp
    base = small_odd_primes(math.isqrt(limit))
    if max_sieving_prime is not None:
        base = base[base <= max_sieving_prime]
    spans = [(lo, min(lo + segment_size, n)) for lo in range(0, n, segment_size)]
    if workers > 1 and len(spans) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            list(pool.map(lambda s: _mark_segment(comp, s[0], s[1], base), spans))
    else:
        for lo, hi in spans:
            _mark_segment(comp, lo, hi, base)
    return comp


@dataclass(frozen=True, eq=False)
class PrimeTable:
    """Primality verdicts for every integer in [2, limit]."""

    limit: int
    segment_size: int
    marks: np.ndarray = field(repr=False)

    def _check(self, m: int, what: str = "m") -> None:
        if m > self.limit:
            raise RangeError(f"{what}={m} exceeds table limit {self.limit}")

    def is_prime(self, m: int) -> bool:
        m = int(m)
        if m < 2:
            raise RangeError(f"m={m} below 2 has no verdict")
        self._check(m)
        if m == 2:
            return True
        if m % 2 == 0:
            return False
        j = (m - 3) // 2
        return not (self.marks[j >> 3] >> (j & 7)) & 1

    @cached_property
    def composite_odd(self) -> np.ndarray:
        """Unpacked boolean view: index j <-> odd number 2j+3."""
        n = _odd_count(self.limit)
        return np.unpackbits(self.marks, bitorder="little", count=n).astype(bool)

    @cached_property
    def primes(self) -> np.ndarray:
        odd = 2 * np.flatnonzero(~self.composite_odd).astype(np.int64) + 3
        return np.concatenate([np.array([2], dtype=np.int64), odd])

    def is_prime_array(self, ms) -> np.ndarray:
        """Vectorised is_prime over an integer array (all entries in [2, limit])."""
        ms = np.asarray(ms, dtype=np.int64)
        if ms.size == 0:
            return np.zeros(0, dtype=bool)
        if ms.min() < 2 or ms.max() > self.limit:
            raise RangeError("values outside [2, limit]")
        odd = ms % 2 == 1
        out = ms == 2
        idx = (ms[odd & (ms > 2)] - 3) // 2
        out[odd & (ms > 2)] = ~self.composite_odd[idx]
        return out

    def prime_count(self, x: int) -> int:
        """pi(x)."""
        x = int(x)
        self._check(x, "x")
        return int(np.searchsorted(self.primes, x, side="right"))

    def nth_prime(self, k: int) -> int:
        """k-th prime with p_1 = 2."""
        if k < 1:
            raise RangeError("k must be positive")
        if k > len(self.primes):
            raise RangeError(f"the {k}-th prime exceeds table limit {self.limit}")
        return int(self.primes[k - 1])

    def primes_up_to(self, x: int) -> np.ndarray:
        self._check(int(x), "x")
        return self.primes[: self.prime_count(x)]

    def next_prime(self, p: int) -> int:
        """Smallest prime strictly greater than p, if the table holds one."""
        i = int(np.searchsorted(self.primes, p, side="right"))
        if i >= len(self.primes):
            raise PreconditionError(f"no prime above {p} within table limit {self.limit}")
        return int(self.primes[i])


def build_prime_table(
    limit: int, segment_size: int = DEFAULT_SEGMENT_SIZE, workers: int = 1
) -> PrimeTable:
    limit = int(limit)
    if limit > MAX_LIMIT:
        raise RangeError(f"limit {limit} exceeds the 64-bit range")
    if limit < 2:
        raise RangeError("limit must be at least 2")
    if segment_size < MIN_SEGMENT_SIZE:
        raise RangeError(f"segment_size must be >= {MIN_SEGMENT_SIZE}")
    comp = odd_composite_marks(limit, segment_size, workers)
    packed = np.zeros(bitmap_nbytes(limit), dtype=np.uint8)
    bits = np.packbits(comp, bitorder="little")
    packed[: len(bits)] = bits
    return PrimeTable(limit, segment_size, packed)


is_prime = PrimeTable.is_prime
prime_count = PrimeTable.prime_count
nth_prime = PrimeTable.nth_prime


# -- cache -----------------------------------------------------------------

def cache_path(cache_dir: str | os.PathLike, limit: int) -> Path:
    return Path(cache_dir) / f"cnsieve-{limit}.bin"


def save_cache(table: PrimeTable, path: str | os.PathLike) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    tmp = path.with_suffix(path.suffix + ".tmp")
    with open(tmp, "wb") as f:
        f.write(_HEADER.pack(CACHE_MAGIC, CACHE_VERSION, table.limit))
        f.write(table.marks.tobytes())
    os.replace(tmp, path)


def load_cache(path: str | os.PathLike, segment_size: int = DEFAULT_SEGMENT_SIZE) -> PrimeTable | None:
    """Read a cache file; None if it is missing, malformed, or fails the spot check."""
    try:
        data = Path(path).read_bytes()
    except OSError:
        return None
    if len(data) < _HEADER.size:
        return None
    magic, version, limit = _HEADER.unpack_from(data)
    if magic != CACHE_MAGIC or version != CACHE_VERSION or limit < 2:
        return None
    body = data[_HEADER.size :]
    if len(body) != bitmap_nbytes(limit):
        return None
    marks = np.frombuffer(body, dtype=np.uint8).copy()
    n = _odd_count(limit)
    bits = np.unpackbits(marks, bitorder="little")
    if bits[n:].any():
        return None
    # recompute a prefix independently; a flipped bit there means the file is junk
    check_limit = min(limit, _SPOT_CHECK)
    expect = odd_composite_marks(check_limit)
    if not np.array_equal(bits[: len(expect)].astype(bool), expect):
        return None
    return PrimeTable(limit, segment_size, marks)


def resolve_cache_dir(cache_dir: str | os.PathLike | None = None) -> Path | None:
    if cache_dir:
        return Path(cache_dir)
    env = os.environ.get(CACHE_ENV)
    return Path(env) if env else None


def load_or_build(
    limit: int,
    cache_dir: str | os.PathLike | None = None,
    segment_size: int = DEFAULT_SEGMENT_SIZE,
    workers: int = 1,
) -> PrimeTable:
    """Build a table, going through the cache directory when one is configured."""
    directory = resolve_cache_dir(cache_dir)
    if directory is None:
        return build_prime_table(limit, segment_size, workers)
    path = cache_path(directory, limit)
    table = load_cache(path, segment_size)
    if table is not None:
        return table
    if path.exists():
        log.warning("discarding invalid prime cache %s", path)
    table = build_prime_table(limit, segment_size, workers)
    save_cache(table, path)
    return table
