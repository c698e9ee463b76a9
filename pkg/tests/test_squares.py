import math
import random
from fractions import Fraction as F

import pytest

from cantorsum import (
    BudgetExceeded,
    DomainError,
    NotFound,
    SearchBudget,
    SumSystem,
    WitnessPair,
    find_witness,
    homogeneous_corner_witness,
    homogeneous_system,
    is_delta_square,
    make_square,
    make_witness,
    middle_set,
    relative_closeness,
    validate_system,
    verify_witness,
)
from cantorsum.squares import certify_zero, corner_applicable, corner_squares, corner_witness
from conftest import random_system

THIRD = middle_set(F(1, 3))
M3 = SumSystem(THIRD, THIRD)
IC = SumSystem(middle_set(F(1, 20)), middle_set(F(1, 20)))


def test_square_fields_match_recomputation():
    sq = make_square(M3, (2, 1), (1,))
    assert (sq.lambda_u, sq.gamma_v, sq.o_lambda, sq.o_gamma) == (F(1, 9), F(1, 3), 1, 1)
    assert sq.endpoint == F(2, 3)
    assert sq.depth == 2


def test_delta_square_examples():
    fifth = middle_set(F(1, 5))
    s = SumSystem(THIRD, fifth)
    sq = make_square(s, (1, 1), (1,))
    assert math.log(F(5, 9)) == pytest.approx(-0.5878, abs=1e-4)
    assert not is_delta_square(sq, 0.5)
    assert is_delta_square(sq, 0.6)
    assert is_delta_square(make_square(M3, (1,), (2,)), 1e-30)
    quarter = SumSystem(homogeneous_system(F(1, 4)), homogeneous_system(F(1, 2)))
    assert not is_delta_square(make_square(quarter, (1,), (1,)), 0.5)
    assert is_delta_square(make_square(quarter, (1,), (1, 2)), 1e-30)
    with pytest.raises(DomainError):
        is_delta_square(sq, 0)


def test_physical_size_convention():
    wide = validate_system([(1, "1/3", 0), (1, "1/3", 4)])  # diameter 6
    s = SumSystem(THIRD, wide, F(1, 6))
    assert s.size_factor == 1
    assert is_delta_square(make_square(s, (1,), (2,)), 1e-30)
    s2 = SumSystem(THIRD, THIRD, 2)
    assert not is_delta_square(make_square(s2, (1,), (1,)), 0.5)
    assert is_delta_square(make_square(s2, (1,), (1,)), 0.7)


def test_closeness_examples():
    a = make_square(M3, (2,), (1,))
    b = make_square(M3, (1,), (2,))
    v = relative_closeness(a, a, 0.1)
    assert v.close and v.margin == 1
    assert not make_witness(a, a, 0.1).verified_exact
    for eps in (1e-6, 0.1, 1):
        assert relative_closeness(a, b, eps).close
    flip = validate_system([(1, "1/3", 0), (-1, "1/3", 1)])
    s = SumSystem(flip, THIRD)
    v = relative_closeness(make_square(s, (2,), (1,)), make_square(s, (1,), (2,)), 0.1)
    assert not v.orientation_ok and not v.close


def test_middle_third_witness():
    w = find_witness(M3, F(1, 10), 1e-4)
    assert isinstance(w, WitnessPair) and w.verified_exact
    assert {w.first.key, w.second.key} == {((1,), (2,)), ((2,), (1,))}
    assert verify_witness(w)


def test_witness_json_shape():
    d = find_witness(M3, F(1, 10), 1e-4).to_dict()
    assert set(d) == {"epsilon", "square1", "square2", "verdict", "verified_exact"}
    assert set(d["verdict"]) == {"ratio_ok", "orientation_ok", "endpoint_ok", "margin"}
    assert d["square1"]["u"] == [1] and d["verified_exact"] is True


def test_self_sum_equal_ratios_depth_one():
    rng = random.Random(11)
    for _ in range(20):
        r = F(rng.randint(50, 300), 1000)
        c = homogeneous_system(r, rng.randint(2, 4))
        w = find_witness(SumSystem(c, c), F(1, 20), 1e-4)
        assert isinstance(w, WitnessPair) and w.depth == 1


def test_self_sum_unequal_ratios_depth_two():
    # with lam_1 != lam_2 the one-digit swap fails the ratio test; (12, 21) vs (21, 12) does not
    c = validate_system([(1, "1/5", 0), (1, "2/5", "3/5")])
    s = SumSystem(c, c)
    assert not relative_closeness(make_square(s, (1,), (2,)), make_square(s, (2,), (1,)), 0.05).ratio_ok
    w = find_witness(s, F(1, 20), 1e-4)
    assert isinstance(w, WitnessPair) and w.depth <= 2


def test_separated_pair_not_found_snapshot():
    res = find_witness(IC.with_eta(F(137, 100)), F(1, 50), F(1, 20**6))
    assert isinstance(res, NotFound)
    assert res.depth_reached == 6


def test_not_found_monotone_in_floor():
    s = IC.with_eta(F(137, 100))
    floors = [F(1, 20**k) for k in (6, 5, 4, 3)]
    assert all(isinstance(find_witness(s, F(1, 50), f), NotFound) for f in floors)


def test_budget_exceeded():
    s = SumSystem(middle_set(F(1, 3)), middle_set(F(1, 5)), F(137, 100))
    with pytest.raises(BudgetExceeded):
        find_witness(s, F(1, 1000), 1e-9, SearchBudget(max_squares=50, max_words=50))


def test_workers_do_not_change_results():
    rng = random.Random(5)
    for _ in range(6):
        a, b = random_system(rng), random_system(rng)
        s = SumSystem(a, b, F(rng.randint(500, 2000), 1000))
        one = find_witness(s, F(1, 5), 1e-3)
        many = find_witness(s, F(1, 5), 1e-3, workers=8)
        if isinstance(one, NotFound):
            assert one == many
        else:
            assert (one.first.key, one.second.key) == (many.first.key, many.second.key)


def test_search_rejects_bad_arguments():
    with pytest.raises(DomainError):
        find_witness(M3, 0)
    with pytest.raises(DomainError):
        find_witness(M3, 0.1, scale_floor=1)


def brute_corner(lam, gam, eps, limit=100):
    best = None
    for n in range(1, limit + 1):
        for m in range(1, limit + 1):
            if abs(n * math.log(lam) - m * math.log(gam)) < eps:
                if best is None or (n + m, n) < (sum(best), best[0]):
                    best = (n, m)
    return best


def test_corner_examples():
    assert homogeneous_corner_witness(0.3, 0.25, 0.05) == (15, 13) == brute_corner(0.3, 0.25, 0.05)
    assert homogeneous_corner_witness(F(1, 4), F(1, 2), 0.01) == (1, 2)
    assert homogeneous_corner_witness(0.37, 0.37, 1e-9) == (1, 1)
    with pytest.raises(DomainError):
        homogeneous_corner_witness(1.5, 0.3, 0.1)


def test_corner_squares_form_witness():
    s = SumSystem(homogeneous_system(F(3, 10)), homogeneous_system(F(1, 4)))
    assert corner_applicable(s)
    a, b = corner_squares(s, 15, 13)
    assert a.u == (2,) * 15 and a.v == (1,) * 13
    assert b.u == (1,) * 15 and b.v == (2,) * 13
    w = corner_witness(s, F(1, 20))
    assert w is not None and w.verified_exact


def test_corner_not_applicable_with_eta():
    s = SumSystem(homogeneous_system(F(3, 10)), homogeneous_system(F(1, 4)), F(3, 2))
    assert not corner_applicable(s)
    assert corner_witness(s, 0.1) is None


def test_certify_zero_reports_method():
    s = SumSystem(homogeneous_system(F(3, 10)), homogeneous_system(F(1, 4)))
    certs = certify_zero(s, [F(1, 2), F(1, 10)])
    assert all(c.found and c.method == "corner" for c in certs)
    certs = certify_zero(IC.with_eta(F(137, 100)), [F(1, 50)], F(1, 20**4))
    assert not certs[0].found and certs[0].method == "search"
