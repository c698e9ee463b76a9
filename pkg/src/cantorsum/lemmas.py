"""Constructions on witness pairs: concatenation, chaining, padding, doubling.

Each construction returns a new :class:`WitnessPair` whose epsilon is the
closed-form bound for that construction (rounded up by at most 2^-280
relative), and checks the result exactly before returning it.
"""

from __future__ import annotations

import math
from collections import deque
from fractions import Fraction
from itertools import combinations
from typing import Sequence

from ._exact import abs_log, exp_bounds, mp, mp_exp, round_up, to_fraction
from .errors import (
    CertificateError,
    DomainError,
    EpsilonTooLarge,
    NoSharedSquare,
    OrientationMismatch,
    SearchExhausted,
    WitnessUnavailable,
)
from .ifs import SumSystem, Word
from .squares import (
    CylinderSquare,
    NotFound,
    SearchBudget,
    WitnessPair,
    find_witness,
    is_delta_square,
    make_square,
    make_witness,
    relative_closeness,
)


def tight_delta(sq: CylinderSquare) -> Fraction:
    """A delta slightly above |log size ratio|, so that ``sq`` is a delta-square."""
    d = to_fraction(abs_log(sq.size_ratio)) * (1 + Fraction(1, 2**30)) + Fraction(1, 2**60)
    while not is_delta_square(sq, d):
        d *= 2
    return d


def _pair_delta(pair: WitnessPair) -> Fraction:
    if pair.delta is not None:
        return pair.delta
    return max(tight_delta(pair.first), tight_delta(pair.second))


def _require_close(pair: WitnessPair):
    if not relative_closeness(pair.first, pair.second, pair.epsilon).close:
        raise DomainError("input pair is not relatively close at its epsilon")


def _check(pair: WitnessPair) -> WitnessPair:
    if not pair.verdict.close:
        raise CertificateError(f"constructed pair failed closeness at {float(pair.epsilon):.6g}")
    return pair


def concat_left_bound(eps, delta, delta_prefix, lambda_u1):
    """eps e^{d'} + 2 |e^{d'} - 1| e^{d' + d + eps} / lambda_u1, as an mpf."""
    e, d, dp = mp(eps), mp(delta), mp(delta_prefix)
    edp = mp_exp(dp)
    return e * edp + 2 * abs(edp - 1) * mp_exp(dp + d + e) / mp(lambda_u1)


def concat_right_bound(eps, delta, delta_suffix, lambda_s):
    """e^{d'} / lambda_s * (eps + 2 e^{eps + d} |e^eps - 1|), as an mpf."""
    e, d, dp = mp(eps), mp(delta), mp(delta_suffix)
    return mp_exp(dp) / mp(lambda_s) * (e + 2 * mp_exp(e + d) * abs(mp_exp(e) - 1))


def concat_left(prefix: CylinderSquare, pair: WitnessPair, prefix_delta=None, pair_delta=None) -> WitnessPair:
    """Prepend ``s x t`` to both squares of an eps-close pair of delta-squares."""
    if prefix.o_lambda != prefix.o_gamma:
        raise OrientationMismatch("prefix needs equal orientation products on both sides")
    _require_close(pair)
    dp = tight_delta(prefix) if prefix_delta is None else to_fraction(prefix_delta)
    d = _pair_delta(pair) if pair_delta is None else to_fraction(pair_delta)
    if not is_delta_square(prefix, dp):
        raise DomainError("prefix is not a square at the given delta")
    bound = round_up(concat_left_bound(pair.epsilon, d, dp, pair.first.lambda_u))
    sys_ = prefix.system
    a = make_square(sys_, prefix.u + pair.first.u, prefix.v + pair.first.v)
    b = make_square(sys_, prefix.u + pair.second.u, prefix.v + pair.second.v)
    return _check(make_witness(a, b, bound, d + dp))


def concat_right(pair: WitnessPair, suffix: CylinderSquare, suffix_delta=None, pair_delta=None) -> WitnessPair:
    """Append ``s x t`` to both squares of an eps-close pair of delta-squares."""
    if suffix.o_lambda != suffix.o_gamma:
        raise OrientationMismatch("suffix needs equal orientation products on both sides")
    _require_close(pair)
    dp = tight_delta(suffix) if suffix_delta is None else to_fraction(suffix_delta)
    d = _pair_delta(pair) if pair_delta is None else to_fraction(pair_delta)
    if not is_delta_square(suffix, dp):
        raise DomainError("suffix is not a square at the given delta")
    bound = round_up(concat_right_bound(pair.epsilon, d, dp, suffix.lambda_u))
    sys_ = suffix.system
    a = make_square(sys_, pair.first.u + suffix.u, pair.first.v + suffix.v)
    b = make_square(sys_, pair.second.u + suffix.u, pair.second.v + suffix.v)
    return _check(make_witness(a, b, bound, d + dp))


def transitivity_bound(p1: WitnessPair, p2: WitnessPair) -> WitnessPair:
    """From A~B and B~C at a common eps < log 2, the pair (A, C) at 4 eps."""
    s1 = [p1.first, p1.second]
    s2 = [p2.first, p2.second]
    shared = None
    for i, x in enumerate(s1):
        for j, y in enumerate(s2):
            if x.key == y.key:
                shared = (i, j)
                break
        if shared:
            break
    if shared is None:
        raise NoSharedSquare("the two pairs have no square in common")
    a = s1[1 - shared[0]]
    c = s2[1 - shared[1]]
    eps = max(p1.epsilon, p2.epsilon)
    if not exp_bounds(eps)[1] < 2:
        raise EpsilonTooLarge(f"chaining needs eps < log 2, got {float(eps):.6g}")
    for p in (p1, p2):
        if not relative_closeness(p.first, p.second, eps).close:
            raise DomainError("input pair is not relatively close at the common epsilon")
    deltas = [p.delta for p in (p1, p2) if p.delta is not None]
    return _check(make_witness(a, c, 4 * eps, max(deltas) if deltas else None))


def find_padding(
    system: SumSystem,
    s: Sequence[int],
    t: Sequence[int],
    delta,
    r,
    max_len: int = 64,
    max_states: int = 200_000,
) -> tuple[Word, Word, int]:
    """Words alpha, beta balancing ``s alpha x t beta`` in size and orientation.

    Breadth-first over (log size ratio, orientation parity) states.  Each
    step appends one digit to the currently larger side; both sides are
    tried once the ratio is within delta but the orientations disagree.
    States are merged on a grid of delta/4.
    """
    lsys, gsys = system.lambda_system, system.gamma_system
    s = lsys.check_word(s)
    t = gsys.check_word(t)
    d = to_fraction(delta)
    rr = to_fraction(r)
    if d <= 0 or not 0 < rr < 1:
        raise DomainError("need delta > 0 and r in (0, 1)")
    start = make_square(system, s, t)
    q = start.size_ratio
    if not rr <= q <= 1 / rr:
        raise DomainError("size ratio of s x t lies outside [r, 1/r]")
    lam_logs = [math.log(m.ratio) for m in lsys.maps]
    gam_logs = [math.log(m.ratio) for m in gsys.maps]
    lam_o = [m.orientation for m in lsys.maps]
    gam_o = [m.orientation for m in gsys.maps]
    df = float(d)
    grid = df / 4

    def goal(alpha, beta):
        sq = make_square(system, s + alpha, t + beta)
        return sq.o_lambda == sq.o_gamma and is_delta_square(sq, d)

    z0 = math.log(q.numerator) - math.log(q.denominator)
    p0 = start.o_lambda * start.o_gamma
    if p0 == 1 and abs(z0) < df and goal((), ()):
        return (), (), 0
    queue = deque([(z0, p0, (), ())])
    seen = {(round(z0 / grid), p0)}
    while queue:
        z, p, alpha, beta = queue.popleft()
        moves = []
        if z >= 0 or abs(z) < df:
            moves += [(z + lg, p * o, alpha + (i,), beta) for i, (lg, o) in enumerate(zip(lam_logs, lam_o), 1)]
        if z <= 0 or abs(z) < df:
            moves += [(z - lg, p * o, alpha, beta + (j,)) for j, (lg, o) in enumerate(zip(gam_logs, gam_o), 1)]
        for nz, np_, na, nb in moves:
            if max(len(na), len(nb)) > max_len:
                continue
            if np_ == 1 and abs(nz) < df * (1 + 1e-9) and goal(na, nb):
                return na, nb, max(len(na), len(nb))
            key = (round(nz / grid), np_)
            if key in seen:
                continue
            seen.add(key)
            if len(seen) > max_states:
                raise SearchExhausted(f"padding search exceeded {max_states} states")
            queue.append((nz, np_, na, nb))
    raise SearchExhausted("padding search closed without a solution under the length cap")


# ---------------------------------------------------------------------------
# doubling
# ---------------------------------------------------------------------------


def _witness_or_raise(system, eps, delta, floor, budget, workers):
    w = find_witness(system, eps, floor, budget, delta=delta, balanced=True, workers=workers)
    if isinstance(w, NotFound):
        raise WitnessUnavailable(
            f"no balanced witness at eps={float(eps):.3g}, delta={float(delta):.3g} to depth {w.depth_reached}"
        )
    return w


def _choice1(eps1, delta1, delta2, lam_min):
    return eps1 * math.exp(delta2) + 2 * abs(math.expm1(delta2)) * math.exp(delta2 + delta1 + eps1) / lam_min


def _choice2(eps1, delta1, eps2, delta2, lam_min):
    return math.exp(delta1) / lam_min * math.exp(eps1) * (eps2 + 2 * math.exp(eps2 + delta2) * abs(math.expm1(eps2)))


def _amplify(system, eps: Fraction, delta: Fraction, rounds: int, floor, budget, workers) -> list[CylinderSquare]:
    if rounds == 1:
        w = _witness_or_raise(system, eps, delta, floor, budget, workers)
        return [w.first, w.second]
    eps1, delta1 = eps / 8, delta / 2
    inner = _amplify(system, eps1, delta1, rounds - 1, floor, budget, workers)
    lam_min = float(min(sq.lambda_u for sq in inner))
    e, e1, d1 = float(eps), float(eps1), float(delta1)
    delta2 = float(delta - delta1) / 2
    while _choice1(e1, d1, delta2, lam_min) >= 0.75 * e / 4:
        delta2 /= 2
    eps2 = e / 8
    while _choice2(e1, d1, eps2, delta2, lam_min) >= e / 8:
        eps2 /= 2
    pair = _witness_or_raise(system, to_fraction(eps2), to_fraction(delta2), floor, budget, workers)
    return [
        make_square(system, p.u + q.u, p.v + q.v)
        for p in (pair.first, pair.second)
        for q in inner
    ]


def amplify(
    system: SumSystem,
    eps,
    delta,
    n_target: int,
    scale_floor=1e-6,
    budget: SearchBudget | None = None,
    workers: int = 1,
) -> list[CylinderSquare]:
    """``n_target`` distinct squares, pairwise eps-close delta-squares.

    Doubling: N close squares at (eps/8, delta/2) are prefixed by each of two
    squares that are close at a much smaller scale; the prefix scale is
    shrunk until the concatenation and chaining bounds stay below eps/4.
    Rounds beyond a power of two are truncated.  All pairs are verified
    exactly before returning.
    """
    if n_target < 2:
        raise DomainError("n_target must be at least 2")
    e, d = to_fraction(eps), to_fraction(delta)
    if e <= 0 or d <= 0:
        raise DomainError("eps and delta must be positive")
    if n_target > 2 and not exp_bounds(e)[1] < 2:
        raise EpsilonTooLarge("doubling chains pairs and needs eps < log 2")
    rounds = max(1, math.ceil(math.log2(n_target)))
    squares = _amplify(system, e, d, rounds, scale_floor, budget, workers)[:n_target]
    if len({sq.key for sq in squares}) != len(squares):
        raise CertificateError("doubling produced repeated squares")
    for sq in squares:
        if not is_delta_square(sq, d):
            raise CertificateError("doubling produced a square outside the delta tolerance")
    for a, b in combinations(squares, 2):
        if not relative_closeness(a, b, e).close:
            raise CertificateError("doubling produced a pair that is not eps-close")
    return squares


def refine_to_squares(
    system: SumSystem,
    eps0,
    scale_floor=1e-6,
    budget: SearchBudget | None = None,
    max_tries: int = 8,
) -> WitnessPair:
    """Turn eps-close 1-squares into eps0-close eps0-squares.

    A witness among 1-squares is found at a much smaller eps, then the same
    balancing words alpha, beta are appended to both squares.  eps is cut by
    4 until the padded pair checks out.
    """
    e0 = to_fraction(eps0)
    eps = e0 / 4
    for _ in range(max_tries):
        w = _witness_or_raise(system, eps, Fraction(1), scale_floor, budget, 1)
        alpha, beta, _ = find_padding(system, w.first.u, w.first.v, e0 / 2, system.r_min ** 2 / 4)
        a = make_square(system, w.first.u + alpha, w.first.v + beta)
        b = make_square(system, w.second.u + alpha, w.second.v + beta)
        out = make_witness(a, b, e0)
        if out.verified_exact:
            return out
        eps /= 4
    raise WitnessUnavailable("padding did not yield an eps0-close pair of eps0-squares")
