"""Building new close pairs from old ones.

Run: python demos/03_constructions.py
"""
from fractions import Fraction
from itertools import combinations

from cantorsum import (
    SumSystem,
    amplify,
    concat_left,
    concat_right,
    find_padding,
    make_square,
    make_witness,
    middle_set,
    refine_to_squares,
    relative_closeness,
    transitivity_bound,
)

third = middle_set(Fraction(1, 3))
pair = SumSystem(third, third)
a = make_square(pair, (2,), (1,))
b = make_square(pair, (1,), (2,))
w = make_witness(a, b, Fraction(1, 5))

# Prepending a square to both members costs a bounded loss in eps.
left = concat_left(make_square(pair, (1, 2), (2, 1)), w)
print("prepend: eps", float(left.epsilon), "squares", left.first.key, left.second.key)
right = concat_right(w, make_square(pair, (2,), (2,)))
print("append:  eps", float(right.epsilon))

# Chaining two pairs through a shared square gives 4 eps.
chain = transitivity_bound(make_witness(a, b, Fraction(1, 20)), make_witness(b, a, Fraction(1, 20)))
print("chain: eps", chain.epsilon)

# Padding balances a square whose sides have different sizes.
fifth = middle_set(Fraction(1, 5))
mixed = SumSystem(third, fifth)
alpha, beta, k = find_padding(mixed, (1,), (1,), 0.1, 0.1)
sq = make_square(mixed, (1,) + alpha, (1,) + beta)
print("padding:", alpha, beta, "size ratio", sq.size_ratio)

# Doubling: 8 squares, every pair close.
squares = amplify(pair, Fraction(1, 2), Fraction(1, 2), 8)
print("amplified:", [q.key for q in squares])
print("all 28 pairs close:", all(relative_closeness(x, y, Fraction(1, 2)).close for x, y in combinations(squares, 2)))

# From close 1-squares to close eps0-squares.
out = refine_to_squares(pair, Fraction(1, 20))
print("refined:", out.first.key, out.second.key, out.verified_exact)
