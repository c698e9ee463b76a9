import math
from fractions import Fraction as F

import pytest

from cantorsum import (
    EpsilonTooLarge,
    NoSharedSquare,
    OrientationMismatch,
    SumSystem,
    amplify,
    concat_left,
    concat_left_bound,
    concat_right,
    concat_right_bound,
    find_padding,
    find_witness,
    homogeneous_system,
    is_delta_square,
    make_square,
    make_witness,
    middle_set,
    refine_to_squares,
    relative_closeness,
    transitivity_bound,
    validate_system,
)
from cantorsum.errors import SearchExhausted
from cantorsum.lemmas import tight_delta

THIRD = middle_set(F(1, 3))
M3 = SumSystem(THIRD, THIRD)


def swap_pair(eps=F(1, 5)):
    return make_witness(make_square(M3, (2,), (1,)), make_square(M3, (1,), (2,)), eps)


def test_degenerate_prefix_bound_is_eps():
    prefix = make_square(M3, (1, 2), (2, 2))
    w = concat_left(prefix, swap_pair(), prefix_delta=F(1, 10**9))
    assert float(w.epsilon) == pytest.approx(0.2, rel=1e-7)
    assert w.verified_exact


def test_concat_left_formula():
    fifth = middle_set(F(1, 5))
    s = SumSystem(fifth, fifth)
    pair = make_witness(make_square(s, (2,), (1,)), make_square(s, (1,), (2,)), F(1, 5), F(3, 10))
    prefix = make_square(s, (1,), (2,))
    w = concat_left(prefix, pair, prefix_delta=F(1, 10))
    expected = 0.2 * math.exp(0.1) + 2 * (math.exp(0.1) - 1) * math.exp(0.6) / 0.2
    assert float(w.epsilon) == pytest.approx(expected, rel=1e-12)
    assert w.first.u == (1, 2) and w.second.v == (2, 2)
    assert w.delta == F(4, 10)


def test_identity_suffix():
    pair = swap_pair()
    w = concat_right(pair, make_square(M3, (), ()), suffix_delta=F(1, 10**12))
    # the swap squares are exact, so the pair's tight delta is essentially 0
    base = 0.2 + 2 * math.exp(0.2) * (math.exp(0.2) - 1)
    assert float(w.epsilon) == pytest.approx(base, rel=1e-9)
    assert float(w.epsilon) >= 0.2
    assert w.verified_exact


def test_bounds_match_closed_forms():
    assert float(concat_left_bound(0.2, 0.3, 0.1, 0.5)) == pytest.approx(
        0.2 * math.exp(0.1) + 2 * math.expm1(0.1) * math.exp(0.6) / 0.5, rel=1e-14
    )
    assert float(concat_right_bound(0.2, 0.3, 0.1, 0.5)) == pytest.approx(
        math.exp(0.1) / 0.5 * (0.2 + 2 * math.exp(0.5) * math.expm1(0.2)), rel=1e-14
    )


def test_orientation_mismatch():
    flip = validate_system([(1, "1/3", 0), (-1, "1/3", 1)])
    s = SumSystem(flip, flip)
    pair = make_witness(make_square(s, (1,), (1,)), make_square(s, (1, 1), (1, 1)), F(1, 2), F(1, 2))
    bad = make_square(s, (2,), (1,))
    with pytest.raises(OrientationMismatch):
        concat_left(bad, pair)
    with pytest.raises(OrientationMismatch):
        concat_right(pair, bad)


def test_transitivity():
    a = make_square(M3, (2,), (1,))
    b = make_square(M3, (1,), (2,))
    p = make_witness(a, b, F(1, 20))
    q = make_witness(b, a, F(1, 20))
    out = transitivity_bound(p, q)
    assert out.epsilon == F(1, 5) and out.verdict.close
    with pytest.raises(EpsilonTooLarge):
        transitivity_bound(make_witness(a, b, F(4, 5)), make_witness(b, a, F(4, 5)))
    c = make_square(M3, (1, 1), (2, 2))
    d = make_square(M3, (2, 2), (1, 1))
    with pytest.raises(NoSharedSquare):
        transitivity_bound(p, make_witness(c, d, F(1, 20)))


def test_padding_already_balanced():
    assert find_padding(M3, (1,), (2,), 0.1, 0.5) == ((), (), 0)


def brute_padding(eps):
    """Smallest (a, b) by a + b then a with |(1 + a) ln 3 - (1 + b) ln 5| < eps."""
    best = None
    for a in range(41):
        for b in range(41):
            if abs((1 + a) * math.log(3) - (1 + b) * math.log(5)) < eps:
                if best is None or (a + b, a) < (sum(best), best[0]):
                    best = (a, b)
    return best


def test_padding_third_vs_fifth():
    s = SumSystem(THIRD, middle_set(F(1, 5)))
    assert brute_padding(0.1) == (2, 1)
    alpha, beta, k = find_padding(s, (1,), (1,), 0.1, 0.1)
    assert (len(alpha), len(beta)) == (2, 1) and k == 2
    sq = make_square(s, (1,) + alpha, (1,) + beta)
    assert is_delta_square(sq, 0.1) and sq.o_lambda == sq.o_gamma


def test_padding_flips_parity():
    flip = validate_system([(1, "1/3", 0), (-1, "1/3", 1)])
    s = SumSystem(flip, THIRD)
    alpha, beta, _ = find_padding(s, (2,), (1,), 0.1, 0.5)
    sq = make_square(s, (2,) + alpha, (1,) + beta)
    assert sq.o_lambda == sq.o_gamma and is_delta_square(sq, 0.1)


def test_padding_cap():
    s = SumSystem(THIRD, middle_set(F(1, 5)))
    with pytest.raises(SearchExhausted):
        find_padding(s, (1,), (1,), 1e-6, 0.1, max_len=3)


def test_amplify_two_is_a_witness():
    sq = amplify(M3, F(1, 2), F(1, 2), 2)
    assert len(sq) == 2 and relative_closeness(sq[0], sq[1], F(1, 2)).close


def test_amplify_four_squares():
    sq = amplify(M3, F(1, 2), F(1, 2), 4)
    assert len({s.key for s in sq}) == 4
    assert all(is_delta_square(s, F(1, 2)) for s in sq)


def test_amplify_four_on_homogeneous_pair():
    s = SumSystem(homogeneous_system(F(1, 4)), homogeneous_system(F(1, 4)))
    sq = amplify(s, F(1, 2), F(1, 2), 4)
    # corner-type shape: each square's lambda side mirrors its gamma side
    assert all(len(q.u) == len(q.v) for q in sq)


def test_refine_pipeline():
    for s in (M3, SumSystem(homogeneous_system(F(1, 4)), homogeneous_system(F(1, 2)))):
        w = refine_to_squares(s, F(1, 20))
        assert w.verified_exact
        assert is_delta_square(w.first, F(1, 20)) and is_delta_square(w.second, F(1, 20))


def test_tight_delta_accepts_square():
    sq = make_square(M3, (1, 1), (2,))
    d = tight_delta(sq)
    assert is_delta_square(sq, d)
    assert float(d) == pytest.approx(math.log(3), rel=1e-6)


def test_find_witness_balanced_orientations():
    flip = validate_system([(1, "1/3", 0), (-1, "1/3", 1)])
    s = SumSystem(flip, flip)
    w = find_witness(s, F(1, 5), 1e-3, balanced=True)
    assert w.first.o_lambda == w.first.o_gamma and w.second.o_lambda == w.second.o_gamma
