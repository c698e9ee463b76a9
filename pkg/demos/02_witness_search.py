"""Searching for close pairs of squares.

The sum has zero measure in dimension d_lambda + d_gamma exactly when every
eps admits two distinct eps-squares that are eps-close.  The search below
looks for such a pair down to a scale floor and verifies it exactly.

Run: python demos/02_witness_search.py
"""
import time
from fractions import Fraction

from cantorsum import (
    NotFound,
    SumSystem,
    certify_zero,
    find_witness,
    homogeneous_corner_witness,
    homogeneous_system,
    middle_set,
)

third = middle_set(Fraction(1, 3))
pair = SumSystem(third, third)

# Self-sums always have the swap witness: (u, v) against (v, u).
w = find_witness(pair, Fraction(1, 10), scale_floor=1e-4)
print("middle third + middle third:", w.first.key, w.second.key, "verified:", w.verified_exact)
print("verdict", w.verdict)

# Homogeneous pairs: balance lambda^n against gamma^m and use the two corner squares.
print("corner (n, m) for 0.3, 0.25 at 0.05:", homogeneous_corner_witness(0.3, 0.25, 0.05))
h = SumSystem(homogeneous_system(Fraction(3, 10)), homogeneous_system(Fraction(1, 4)))
for cert in certify_zero(h, [Fraction(1, 2), Fraction(1, 10), Fraction(1, 20)]):
    r = cert.result
    print(f"eps={float(cert.epsilon):g}: {cert.method}, depths {len(r.first.u)} x {len(r.first.v)}")

# A well separated pair at a generic eta: no witness to depth 6.  That is evidence
# of positive measure, not a proof.
sep = SumSystem(middle_set(Fraction(1, 20)), middle_set(Fraction(1, 20)), Fraction(137, 100))
t0 = time.perf_counter()
res = find_witness(sep, Fraction(1, 50), scale_floor=Fraction(1, 20**6))
print("separated pair:", res, f"({time.perf_counter() - t0:.2f}s)")
assert isinstance(res, NotFound)

# Worker threads only change wall time.
assert find_witness(sep, Fraction(1, 50), Fraction(1, 20**6), workers=8) == res
