import math
from fractions import Fraction

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from cnsieve.analytic import (
    EULER_GAMMA,
    INTEGRAL,
    PAPER,
    brun_partial_sum,
    calibration_constant,
    constellation_constant,
    delta_twin_estimate,
    density_product,
    dirichlet_estimate,
    euler_totient,
    hl_pair_constant,
    log_power_integral,
    meissel_mertens,
    mertens_cutoff,
    mertens_product,
    polignac_factor,
    predict,
    sg_integral,
)
from cnsieve.base_primes import build_prime_table
from cnsieve.errors import RangeError, ValidationError
from cnsieve.oracle import primes_in_ap_count, trial_is_prime
from cnsieve.variants import QUADRUPLET, SOPHIE_GERMAIN, TRIPLET, TWIN, gap, general

# 2*C_2 to 20 digits (OEIS A114907); used only as a containment check
TWIN_2C2 = 1.32032363169373914785


def test_euler_gamma_against_harmonic_sums():
    n = 10**8
    h = 0.0
    for lo in range(1, n + 1, 10**7):
        h += float(np.sum(1.0 / np.arange(lo, min(lo + 10**7, n + 1), dtype=np.float64)))
    # H_n - log n - gamma ~ 1/(2n) = 5e-9
    assert abs(h - math.log(n) - EULER_GAMMA) < 1e-8


@settings(max_examples=100)
@given(st.integers(1, 3000))
def test_totient_by_definition(b):
    assert euler_totient(b) == sum(1 for a in range(1, b + 1) if math.gcd(a, b) == 1)


def test_totient_examples():
    assert euler_totient(1) == 1
    assert euler_totient(12) == 4
    assert euler_totient(97) == 96


def _ei_recurrence(x, k):
    # I_k = (I_{k-1} - [t / log^{k-1} t]_2^x) / (k - 1), I_1 = Ei(log x) - Ei(log 2)
    with mpmath.workdps(40):
        val = mpmath.ei(mpmath.log(x)) - mpmath.ei(mpmath.log(2))
        for j in range(2, k + 1):
            edge = x / mpmath.log(x) ** (j - 1) - 2 / mpmath.log(2) ** (j - 1)
            val = (val - edge) / (j - 1)
        return float(val)


def test_log_power_integral_examples():
    assert log_power_integral(2, 1) == 0.0
    assert log_power_integral(2, 3) == 0.0
    assert abs(log_power_integral(1e6, 1) - 78626.5) <= 0.5
    with pytest.raises(RangeError):
        log_power_integral(1.5, 1)


@pytest.mark.parametrize("x", [2.5, 10.0, 1e4, 1e6, 1e7, 1e9])
@pytest.mark.parametrize("k", [1, 2, 3, 4])
def test_log_power_integral_against_independent_oracles(x, k):
    got = log_power_integral(x, k)
    with mpmath.workdps(30):
        quad = float(mpmath.quad(lambda t: 1 / mpmath.log(t) ** k, [2, math.sqrt(2 * x), x]))
    assert got == pytest.approx(quad, rel=1e-9)
    assert got == pytest.approx(_ei_recurrence(x, k), rel=1e-9)


def test_sg_integral_against_mpmath():
    x = 1e7
    with mpmath.workdps(30):
        ref = float(mpmath.quad(lambda t: 1 / (mpmath.log(t) * mpmath.log(2 * t)), [2, 1e3, x]))
    assert sg_integral(x) == pytest.approx(ref, rel=1e-9)


def test_dirichlet_estimate(small_table):
    x = 1e4
    L = math.log(x)
    assert dirichlet_estimate(1, 1, x) == pytest.approx(x / L + x / L**2 + 2 * x / L**3, rel=1e-15)
    assert dirichlet_estimate(1, 4, x) == dirichlet_estimate(1, 1, x) / 2
    for b in (3, 4, 10, 30):
        vals = {dirichlet_estimate(a, b, x) for a in range(1, b) if math.gcd(a, b) == 1}
        assert len(vals) == 1
    with pytest.raises(ValidationError):
        dirichlet_estimate(2, 4, x)
    ratio = primes_in_ap_count(1, 4, 10**6, small_table) / dirichlet_estimate(1, 4, 1e6)
    assert 0.95 <= ratio <= 1.05


def test_mertens_cutoff():
    assert mertens_cutoff(4) == pytest.approx(4 ** math.exp(-EULER_GAMMA), rel=1e-15)
    assert mertens_cutoff(4) == pytest.approx(2.1779, abs=1e-4)
    x = math.exp(math.exp(EULER_GAMMA))
    assert mertens_cutoff(x) == pytest.approx(math.e, rel=1e-12)
    assert mertens_cutoff(1e6) > mertens_cutoff(1e4)
    with pytest.raises(RangeError):
        mertens_cutoff(3.9)


def test_mertens_product(big_table):
    # X(x) in [2, 3) keeps only p = 2
    assert mertens_product(5.0, big_table) == 0.5
    dev4 = abs(mertens_product(1e4, big_table) * math.log(1e4) - 1)
    dev8 = abs(mertens_product(1e8, big_table) * math.log(1e8) - 1)
    assert dev4 < 0.1
    assert dev8 < dev4
    with pytest.raises(Exception):
        mertens_product(1e8, build_prime_table(1000))


def test_calibration_constant(small_table):
    expect = (25 - 4 + 1) / (100 * (1 / 2) * (2 / 3) * (4 / 5) * (6 / 7))
    assert calibration_constant(100, small_table) == pytest.approx(expect, rel=1e-14)
    assert calibration_constant(100, small_table) == pytest.approx(0.9625, abs=1e-12)
    assert 0.8 <= calibration_constant(10**6, small_table) <= 1.0
    assert math.isfinite(calibration_constant(16, small_table))
    with pytest.raises(RangeError):
        calibration_constant(15, small_table)


def test_meissel_mertens(big_table):
    m6 = meissel_mertens(10**6, big_table)
    assert m6.value == pytest.approx(0.261497, abs=5e-6)
    assert m6.tail_bound <= 1 / (2 * (10**6 - 1))
    a, b = meissel_mertens(100, big_table), meissel_mertens(1000, big_table)
    assert abs(a.value - b.value) <= 1 / (2 * 99)
    # terms are negative: partial sums decrease, and never by more than the tail bound
    prev = None
    for P in (100, 1000, 10**4, 10**5, 10**6, 10**7):
        cur = meissel_mertens(P, big_table)
        if prev is not None:
            assert prev.value - prev.tail_bound <= cur.value <= prev.value
        prev = cur


def test_hl_pair_constant(big_table, constants):
    c = hl_pair_constant(10**7, big_table)
    assert c.value == pytest.approx(1.3203236, abs=1e-6)
    assert c.value - c.tail_bound <= TWIN_2C2 <= c.value
    assert constants.twin_product == c.value
    # the p = 3 factor
    assert (1 - 2 / 3) / (1 - 1 / 3) ** 2 == pytest.approx(3 / 4)
    with pytest.raises(RangeError):
        hl_pair_constant(1000, big_table)


@pytest.mark.parametrize("kind", [TWIN, TRIPLET, QUADRUPLET], ids=str)
def test_cutoff_doubling_stays_in_tail_envelope(big_table, kind):
    P = 10**5
    prev = constellation_constant(kind, P, big_table)
    while 2 * P <= 10**7:
        P *= 2
        cur = constellation_constant(kind, P, big_table)
        assert prev.value - prev.tail_bound <= cur.value <= prev.value
        assert cur.tail_bound < prev.tail_bound
        prev = cur


def test_polignac_examples():
    assert polignac_factor(1) == 1
    assert polignac_factor(2) == 1
    assert polignac_factor(3) == Fraction(2, 1)
    assert polignac_factor(6) == 2
    assert polignac_factor(15) == Fraction(2) * Fraction(4, 3)


def test_polignac_invariant_under_doubling():
    for d in range(1, 10**4 + 1):
        assert polignac_factor(d) == polignac_factor(2 * d)


@settings(max_examples=200)
@given(st.integers(1, 10**4), st.integers(1, 10**4))
def test_polignac_multiplicative_on_coprime(a, b):
    if math.gcd(a, b) == 1:
        assert polignac_factor(a * b) == polignac_factor(a) * polignac_factor(b)


def test_constellation_constants(big_table):
    assert constellation_constant(TRIPLET, 10**7, big_table).value == pytest.approx(5.716497, abs=1e-5)
    assert constellation_constant(QUADRUPLET, 10**7, big_table).value == pytest.approx(4.151181, abs=1e-5)
    for P in (10**5, 10**6):
        assert constellation_constant(gap(2), P, big_table).value == hl_pair_constant(P, big_table).value
    assert constellation_constant(gap(3), 10**5, big_table).value == 2 * hl_pair_constant(10**5, big_table).value
    with pytest.raises(ValidationError):
        constellation_constant(SOPHIE_GERMAIN, 10**5, big_table)


def test_density_products(small_table):
    assert density_product(TRIPLET, small_table, k=3) == pytest.approx(2 / 15, rel=1e-15)
    assert density_product(QUADRUPLET, small_table, k=3) == pytest.approx(1 / 30, rel=1e-15)
    for kind in (TRIPLET, QUADRUPLET):
        vals = [density_product(kind, small_table, k=k) for k in range(3, 40)]
        assert all(b < a for a, b in zip(vals, vals[1:]))
    with pytest.raises(ValidationError):
        density_product(TRIPLET, small_table, k=2)


def test_pair_density_tracks_mertens_square(big_table, constants):
    # (1/2) prod (1 - 2/p) over 3 <= p <= X(x) equals 2C_2 prod (1 - 1/p)^2 up to the
    # truncated part of the constant's product
    for x in (1e5, 1e7):
        lhs = density_product(TWIN, big_table, x=x)
        rhs = constants.twin_product * mertens_product(x, big_table) ** 2
        assert lhs == pytest.approx(rhs, rel=2e-3)
    # p | d raises the density by (p - 1)/(p - 2)
    assert density_product(gap(3), big_table, x=1e6) == pytest.approx(2 * density_product(TWIN, big_table, x=1e6))


def test_sophie_germain_density_formula(small_table):
    x = 1e5
    a = [p for p in range(3, int(mertens_cutoff(x)) + 1) if trial_is_prime(p)]
    b = [p for p in range(3, int(mertens_cutoff(2 * x)) + 1) if trial_is_prime(p)]
    expect = 0.25 * math.prod(1 - 1 / p for p in a) * math.prod(1 - 1 / p for p in b)
    assert density_product(SOPHIE_GERMAIN, small_table, x=x) == pytest.approx(expect, rel=1e-12)


def test_predict_examples(constants):
    x = 1e7
    L = math.log(x)
    expect = constants.twin_product * (x / L**2 + 2 * x / L**3)
    assert predict(TWIN, x, PAPER, constants) == pytest.approx(expect, rel=1e-14)
    assert predict(TWIN, x, PAPER, constants) == pytest.approx(5.71e4, rel=2e-3)
    with mpmath.workdps(30):
        i4 = float(mpmath.quad(lambda t: 1 / mpmath.log(t) ** 4, [2, 1e3, x]))
    assert predict(QUADRUPLET, x, INTEGRAL, constants) == pytest.approx(constants.quadruplet * i4, rel=1e-9)
    assert predict(QUADRUPLET, x, INTEGRAL, constants) == pytest.approx(4.151181 * i4, rel=1e-6)
    for mode in (PAPER, INTEGRAL):
        assert predict(gap(1), x, mode, constants) == predict(TWIN, x, mode, constants)
        assert predict(general(1, 2), x, mode, constants) == predict(TWIN, x, mode, constants)
        assert predict(gap(3), x, mode, constants) == pytest.approx(2 * predict(TWIN, x, mode, constants))
        for xx in (10.0, 1e4, 1e9):
            assert predict(SOPHIE_GERMAIN, xx, mode, constants) < predict(TWIN, xx, mode, constants)
    assert predict(SOPHIE_GERMAIN, x, PAPER, constants) == pytest.approx(
        predict(TWIN, x, PAPER, constants) * L / math.log(2 * x), rel=1e-14
    )
    assert predict(TRIPLET, x, PAPER, constants) == pytest.approx(constants.triplet * x / L**3, rel=1e-14)
    with pytest.raises(RangeError):
        predict(TWIN, 3.0, PAPER, constants)
    with pytest.raises(ValidationError):
        predict(TWIN, 10.0, "exact", constants)


def test_delta_twin_estimate(constants):
    assert delta_twin_estimate(100, constants) == pytest.approx(
        constants.twin_constant * 201 / (2 * math.log(100) ** 2), rel=1e-15
    )
    assert delta_twin_estimate(100, constants) == pytest.approx(3.13, abs=0.01)
    v = delta_twin_estimate(2, constants)
    assert math.isfinite(v) and v > 0
    r = [delta_twin_estimate(2 * n, constants) / delta_twin_estimate(n, constants) for n in (10**3, 10**6, 10**12)]
    assert abs(r[2] - 2) < abs(r[1] - 2) < abs(r[0] - 2)
    assert abs(r[2] - 2) < 0.1


def test_brun_partial_sum(small_table):
    assert brun_partial_sum(7, small_table) == pytest.approx(1 / 3 + 1 / 5 + 1 / 5 + 1 / 7, rel=1e-15)
    assert brun_partial_sum(7, small_table) == pytest.approx(0.87619, abs=1e-5)
    assert brun_partial_sum(4, small_table) == 0
    assert brun_partial_sum(5, small_table) == pytest.approx(1 / 3 + 1 / 5)
    x = 10**4
    brute = math.fsum(1 / p + 1 / (p + 2) for p in range(3, x - 1) if trial_is_prime(p) and trial_is_prime(p + 2))
    assert brun_partial_sum(x, small_table) == pytest.approx(brute, rel=1e-13)
    vals = [brun_partial_sum(v, small_table) for v in range(2, 3000, 37)]
    assert all(b >= a for a, b in zip(vals, vals[1:]))
