"""Partial Euler products for the pair/triplet/quadruplet constants and M
at growing prime cutoffs, with their tail bounds."""
import sys

from cnsieve.analytic import constellation_constant, meissel_mertens
from cnsieve.base_primes import build_prime_table
from cnsieve.variants import QUADRUPLET, TRIPLET, TWIN

P_MAX = int(float(sys.argv[1])) if len(sys.argv) > 1 else 10**7

table = build_prime_table(P_MAX)
print("cutoff,twin_2C2,twin_tail,triplet,triplet_tail,quadruplet,quadruplet_tail,M,M_tail")
P = 10**5
while P <= P_MAX:
    tw, tr, qu = (constellation_constant(k, P, table) for k in (TWIN, TRIPLET, QUADRUPLET))
    m = meissel_mertens(P, table)
    print(f"{P},{tw.value:.10f},{tw.tail_bound:.2e},{tr.value:.10f},{tr.tail_bound:.2e},"
          f"{qu.value:.10f},{qu.tail_bound:.2e},{m.value:.10f},{m.tail_bound:.2e}")
    P *= 10
