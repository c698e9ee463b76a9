"""Covering sums, densities and the counting bound.

Run: python demos/04_measure_diagnostics.py
"""
from fractions import Fraction

from cantorsum import (
    SumSystem,
    covering_sum,
    cylinder_measure,
    density_estimate,
    homogeneous_system,
    middle_set,
    pigeonhole_bound,
    r_square_decomposition,
)
from cantorsum.measure import pigeonhole_M

third = middle_set(Fraction(1, 3))
pair = SumSystem(third, third)
print("mass of [12 x 2]:", cylinder_measure(pair, (1, 2), (2,)))

squares = r_square_decomposition(pair, Fraction(3, 10))
print(len(squares), "squares at r = 0.3, total mass", sum(cylinder_measure(pair, q.u, q.v) for q in squares))

# lambda = gamma = 1/4 sums to dimension 1 and has zero length; the covering
# sums fall with the scale.
quarter = SumSystem(homogeneous_system(Fraction(1, 4)), homogeneous_system(Fraction(1, 4)))
for k in range(1, 9):
    r = Fraction(1, 4**k) * (1 + Fraction(1, 10**12))
    print(f"k={k}: covering sum {covering_sum(quarter, r):.6f}")

# A separated pair keeps a covering sum of order one.
sep = SumSystem(middle_set(Fraction(1, 20)), middle_set(Fraction(1, 20)), Fraction(137, 100))
print("separated:", [round(covering_sum(sep, Fraction(1, 20**k) * (1 + Fraction(1, 10**12))), 4) for k in range(1, 6)])

# Density at the left corner of the middle-third sum stays away from 0.
for k in range(2, 9):
    print(f"density at 0, r=3^-{k}: {density_estimate(pair, 0, Fraction(1, 3**k)):.4f}")

# The counting bound under both readings of M.
for reading in ("literal", "corrected"):
    print(reading, "M =", pigeonhole_M(0.1, 0.01, reading), "bound =", pigeonhole_bound(pair, 0.1, 0.01, reading))
