"""Affine Cantor systems, words and the sum map.

Run: python demos/01_systems_and_words.py
"""
import math
from fractions import Fraction

from cantorsum import SumSystem, middle_set, sum_endpoint, validate_system, word_stats

# A system is a list of maps x -> o * r * x + b.  Strings and Fractions are read exactly.
third = validate_system([(1, "1/3", 0), (1, "1/3", "2/3")])
print("middle third: dimension", third.dimension, "vs log2/log3 =", math.log(2) / math.log(3))
print("hull", third.hull)

# Orientation-reversing maps are fine; the hull is found by iterating the interval map
# and then solved exactly.
flip = validate_system([(-1, "1/3", 1), (-1, "1/3", "1/3")])
print("reversing system hull", flip.hull)

# Unequal ratios: (1/2)^d + (1/4)^d = 1 has the golden-ratio root.
golden = validate_system([(1, "1/2", 0), (1, "1/4", "3/4")])
print("{1/2, 1/4} dimension", golden.dimension)

# Words are tuples of 1-based digits.  The endpoint of u is F_u applied to the fixed
# point of map 1, i.e. the address u followed by 1 1 1 ...
for w in [(), (2,), (2, 1), (1, 2, 2)]:
    st = word_stats(third, w)
    print(f"word {w}: ratio {st.ratio_product}, orientation {st.orientation_product:+d}, endpoint {st.endpoint}")

# The sum C_lambda + eta C_gamma is addressed by pairs of words.
pair = SumSystem(third, third)
print("L(2, 1) =", sum_endpoint(pair, (2,), (1,)))
print("L(1, 2) at eta = 2:", sum_endpoint(pair.with_eta(2), (1,), (2,)))

# Any system can be moved onto [0, 1] without changing ratios or orientations.
wide = validate_system([(1, Fraction(1, 5), 3), (-1, Fraction(1, 4), 7)])
print("before", wide.hull, "after", wide.normalized().hull)
print("middle set with ratio 1/20:", middle_set(Fraction(1, 20)).maps)
