"""Cylinder squares, relative closeness and the witness search.

A square ``u x v`` pairs a word of the lambda-system with a word of the
gamma-system.  Two distinct squares that are eps-relatively close
eps-squares, found for every eps > 0, certify that the sum of the two
attractors is null for Hausdorff measure in the sum of the similarity
dimensions.  The search here is exhaustive down to a scale floor; a
negative answer is evidence only.

Screening runs in binary64 with deliberately loose inequalities, so the
screened set is a superset of the true witnesses.  Every reported pair is
then checked in rational arithmetic (exp enclosures for e^{+-eps}), so a
reported witness cannot be a rounding artefact.
"""

from __future__ import annotations

import bisect
import math
from collections import defaultdict
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Sequence

import mpmath

from ._exact import strictly_inside_exp, to_fraction
from .errors import BudgetExceeded, DomainError
from .ifs import SumSystem, Word, word_stats

SCREEN_REL = 1e-9
SCREEN_ABS = 1e-13


@dataclass(frozen=True, eq=False)
class CylinderSquare:
    system: SumSystem = field(repr=False)
    u: Word
    v: Word

    def __post_init__(self):
        object.__setattr__(self, "u", self.system.lambda_system.check_word(self.u))
        object.__setattr__(self, "v", self.system.gamma_system.check_word(self.v))

    @property
    def key(self) -> tuple[Word, Word]:
        return (self.u, self.v)

    @cached_property
    def _lam(self):
        return word_stats(self.system.lambda_system, self.u)

    @cached_property
    def _gam(self):
        return word_stats(self.system.gamma_system, self.v)

    @property
    def lambda_u(self) -> Fraction:
        return self._lam.ratio_product

    @property
    def gamma_v(self) -> Fraction:
        return self._gam.ratio_product

    @property
    def o_lambda(self) -> int:
        return self._lam.orientation_product

    @property
    def o_gamma(self) -> int:
        return self._gam.orientation_product

    @cached_property
    def endpoint(self) -> Fraction:
        return self._lam.endpoint + self.system.eta * self._gam.endpoint

    @property
    def depth(self) -> int:
        return max(len(self.u), len(self.v))

    @property
    def size_ratio(self) -> Fraction:
        """lambda_u / (k * gamma_v) with k the system's physical size factor."""
        return self.lambda_u / (self.system.size_factor * self.gamma_v)

    def __eq__(self, other):
        if not isinstance(other, CylinderSquare):
            return NotImplemented
        return self.key == other.key and (self.system is other.system or self.system == other.system)

    def __hash__(self):
        return hash(self.key)

    def to_dict(self) -> dict:
        return {
            "u": list(self.u),
            "v": list(self.v),
            "lambda_u": str(self.lambda_u),
            "gamma_v": str(self.gamma_v),
            "o_lambda": self.o_lambda,
            "o_gamma": self.o_gamma,
            "endpoint": str(self.endpoint),
        }


def make_square(system: SumSystem, u: Sequence[int] = (), v: Sequence[int] = ()) -> CylinderSquare:
    return CylinderSquare(system, tuple(u), tuple(v))


@dataclass(frozen=True)
class ClosenessVerdict:
    ratio_ok: bool
    orientation_ok: bool
    endpoint_ok: bool
    margin: float

    @property
    def close(self) -> bool:
        return self.ratio_ok and self.orientation_ok and self.endpoint_ok

    def to_dict(self) -> dict:
        return {
            "ratio_ok": self.ratio_ok,
            "orientation_ok": self.orientation_ok,
            "endpoint_ok": self.endpoint_ok,
            "margin": self.margin,
        }


@dataclass(frozen=True)
class WitnessPair:
    """Two squares with the closeness audit at ``epsilon``.

    ``verified_exact`` is true when, in exact arithmetic, the squares are
    literally distinct, both are ``delta``-squares (``delta`` defaults to
    ``epsilon``) and all three closeness conditions hold.
    """

    first: CylinderSquare
    second: CylinderSquare
    epsilon: Fraction
    verdict: ClosenessVerdict
    verified_exact: bool
    delta: Fraction | None = None

    @property
    def square_tolerance(self) -> Fraction:
        return self.epsilon if self.delta is None else self.delta

    @property
    def depth(self) -> int:
        return max(self.first.depth, self.second.depth)

    def to_dict(self) -> dict:
        out = {
            "epsilon": str(self.epsilon),
            "square1": self.first.to_dict(),
            "square2": self.second.to_dict(),
            "verdict": self.verdict.to_dict(),
            "verified_exact": self.verified_exact,
        }
        if self.delta is not None:
            out["delta"] = str(self.delta)
        return out


@dataclass(frozen=True)
class NotFound:
    """Exhaustive search to the scale floor found no qualifying pair."""

    depth_reached: int
    squares_examined: int = 0


@dataclass(frozen=True)
class SearchBudget:
    max_squares: int = 3_000_000
    max_words: int = 3_000_000


def is_delta_square(sq: CylinderSquare, delta) -> bool:
    """lambda_u / gamma_v in (e^-delta, e^delta), sizes taken physically."""
    d = to_fraction(delta)
    if d <= 0:
        raise DomainError("delta must be positive")
    return strictly_inside_exp(sq.size_ratio, d)


def relative_closeness(a: CylinderSquare, b: CylinderSquare, eps) -> ClosenessVerdict:
    """The three closeness conditions, each evaluated exactly."""
    e = to_fraction(eps)
    if e <= 0:
        raise DomainError("eps must be positive")
    ratio_ok = strictly_inside_exp(a.lambda_u / b.lambda_u, e) and strictly_inside_exp(a.gamma_v / b.gamma_v, e)
    orientation_ok = a.o_lambda == b.o_lambda and a.o_gamma == b.o_gamma
    threshold = e * a.system.big_D * min(a.lambda_u, b.lambda_u, a.gamma_v, b.gamma_v)
    gap = abs(a.endpoint - b.endpoint)
    endpoint_ok = gap < threshold
    margin = float((threshold - gap) / threshold) if threshold > 0 else -math.inf
    return ClosenessVerdict(ratio_ok, orientation_ok, endpoint_ok, margin)


def make_witness(a: CylinderSquare, b: CylinderSquare, eps, delta=None) -> WitnessPair:
    e = to_fraction(eps)
    d = None if delta is None else to_fraction(delta)
    verdict = relative_closeness(a, b, e)
    tol = e if d is None else d
    ok = verdict.close and a.key != b.key and is_delta_square(a, tol) and is_delta_square(b, tol)
    return WitnessPair(a, b, e, verdict, ok, d)


def verify_witness(pair: WitnessPair) -> bool:
    """Recompute every condition of a witness from its words alone."""
    sys_ = pair.first.system
    a = make_square(sys_, pair.first.u, pair.first.v)
    b = make_square(sys_, pair.second.u, pair.second.v)
    return make_witness(a, b, pair.epsilon, pair.delta).verified_exact


# ---------------------------------------------------------------------------
# banded enumeration (float screening)
# ---------------------------------------------------------------------------


@dataclass(slots=True)
class _WordRec:
    word: Word
    logsize: float  # log of ratio product times the side's scale
    lograw: float  # log of the bare ratio product
    orient: int
    slope: float
    intercept: float


class _BandWalker:
    """Generates one side's words band by band, band k = sizes in (e^{-(k+1)R}, e^{-kR}]."""

    def __init__(self, system, log_scale: float, band_width: float, log_floor: float, budget: SearchBudget):
        self.maps = [(math.log(m.ratio), m.orientation, float(m.slope), float(m.offset)) for m in system.maps]
        self.R = band_width
        self.log_floor = log_floor
        self.budget = budget
        self.count = 0
        self.max_len = 0
        root = _WordRec((), log_scale, 0.0, 1, 1.0, 0.0)
        self.first_band = self.band_of(log_scale)
        self.pending: dict[int, list[_WordRec]] = defaultdict(list)
        self.pending[self.first_band].append(root)
        self.bands: dict[int, list[_WordRec]] = {}
        self.next_band = self.first_band

    def band_of(self, logsize: float) -> int:
        return math.floor(-logsize / self.R + 1e-9)

    def _generate(self, k: int):
        stack = self.pending.pop(k, [])
        out = []
        while stack:
            rec = stack.pop()
            out.append(rec)
            self.max_len = max(self.max_len, len(rec.word))
            for i, (lg, o, s, t) in enumerate(self.maps, start=1):
                raw = rec.lograw + lg
                if raw < self.log_floor:
                    continue
                child = _WordRec(
                    rec.word + (i,),
                    rec.logsize + lg,
                    raw,
                    rec.orient * o,
                    rec.slope * s,
                    rec.slope * t + rec.intercept,
                )
                b = self.band_of(child.logsize)
                if b <= k:
                    stack.append(child)
                else:
                    self.pending[b].append(child)
        self.count += len(out)
        if self.count > self.budget.max_words:
            raise BudgetExceeded(f"word budget {self.budget.max_words} exceeded", self.max_len)
        out.sort(key=lambda r: (r.logsize, r.word))
        self.bands[k] = out

    def get(self, k: int) -> list[_WordRec]:
        if k < self.first_band:
            return []
        while self.next_band <= k:
            self._generate(self.next_band)
            self.next_band += 1
        return self.bands.get(k, [])

    def exhausted_after(self, k: int) -> bool:
        return not any(b > k and v for b, v in self.pending.items())

    def forget_below(self, k: int):
        for b in [b for b in self.bands if b < k]:
            del self.bands[b]


@dataclass(slots=True)
class _Sq:
    key: tuple
    loglam: float
    loggam: float
    ol: int
    og: int
    L: float
    lam: float
    gam: float


def _screen_pairs(new, cells, eps, D):
    """Loose float test of every pair (new square, indexed square)."""
    out = set()
    for q in new:
        cl = math.floor(q.loglam / eps)
        cg = math.floor(q.loggam / eps)
        base = eps * D * min(q.lam, q.gam) * (1 + SCREEN_REL)
        for dl in (-1, 0, 1):
            for dg in (-1, 0, 1):
                cell = cells.get((q.ol, q.og, cl + dl, cg + dg))
                if not cell:
                    continue
                Ls, items = cell
                slack = SCREEN_ABS * (1 + 2 * abs(q.L))
                lo = bisect.bisect_left(Ls, q.L - base - slack)
                hi = bisect.bisect_right(Ls, q.L + base + slack)
                for c in items[lo:hi]:
                    if c.key == q.key:
                        continue
                    if abs(c.loglam - q.loglam) >= eps + SCREEN_REL:
                        continue
                    if abs(c.loggam - q.loggam) >= eps + SCREEN_REL:
                        continue
                    thr = eps * D * min(q.lam, q.gam, c.lam, c.gam) * (1 + SCREEN_REL)
                    if abs(c.L - q.L) < thr + SCREEN_ABS * (1 + abs(q.L) + abs(c.L)):
                        out.add((q.key, c.key) if q.key < c.key else (c.key, q.key))
    return out


def find_witness(
    system: SumSystem,
    eps,
    scale_floor=1e-6,
    budget: SearchBudget | None = None,
    *,
    delta=None,
    balanced: bool = False,
    workers: int = 1,
) -> WitnessPair | NotFound:
    """Search squares band by band for two distinct eps-close delta-squares.

    Squares with both side ratios at least ``scale_floor`` are enumerated in
    bands of width |log r_min| on the lambda side.  The first band holding a
    qualifying pair wins, and within it the pair with the smallest
    ``((u, v), (u', v'))`` keys is reported, so the answer does not depend
    on ``workers``.  ``balanced`` restricts to squares with equal
    orientation products on both sides (needed for use as prefixes).

    Returns NotFound when the enumeration to the floor was exhaustive.
    Raises BudgetExceeded when it was not.
    """
    budget = budget or SearchBudget()
    e = to_fraction(eps)
    if e <= 0:
        raise DomainError("eps must be positive")
    d = e if delta is None else to_fraction(delta)
    if d <= 0:
        raise DomainError("delta must be positive")
    floor = float(scale_floor)
    if not 0 < floor < 1:
        raise DomainError("scale_floor must lie in (0, 1)")
    ef, df = float(e), float(d)
    R = -math.log(system.r_min)
    D = float(system.big_D)
    log_floor = math.log(floor) - 1e-12
    kappa = system.size_factor
    lam = _BandWalker(system.lambda_system, 0.0, R, log_floor, budget)
    gam = _BandWalker(system.gamma_system, math.log(kappa), R, log_floor, budget)
    pl = float(system.lambda_system.base_point)
    pg = float(system.gamma_system.base_point)
    eta = float(system.eta)
    lookback = math.ceil(ef / R) + 1
    gspread = math.ceil(df / R) + 1

    window: list[tuple[int, list[_Sq]]] = []
    examined = 0
    k = lam.first_band
    while True:
        U = lam.get(k)
        if not U:
            break
        V = []
        for j in range(k - gspread, k + gspread + 1):
            V.extend(gam.get(j))
        V.sort(key=lambda r: (r.logsize, r.word))
        vlogs = [r.logsize for r in V]
        new: list[_Sq] = []
        for ur in U:
            lo = bisect.bisect_left(vlogs, ur.logsize - df - SCREEN_REL)
            hi = bisect.bisect_right(vlogs, ur.logsize + df + SCREEN_REL)
            Lu = ur.slope * pl + ur.intercept
            for vr in V[lo:hi]:
                if balanced and ur.orient != vr.orient:
                    continue
                Lv = vr.slope * pg + vr.intercept
                new.append(
                    _Sq(
                        (ur.word, vr.word),
                        ur.lograw,
                        vr.lograw,
                        ur.orient,
                        vr.orient,
                        Lu + eta * Lv,
                        math.exp(ur.lograw),
                        math.exp(vr.lograw),
                    )
                )
        examined += len(new)
        if examined > budget.max_squares:
            raise BudgetExceeded(f"square budget {budget.max_squares} exceeded", max(lam.max_len, gam.max_len))
        window = [(b, sqs) for b, sqs in window if b >= k - lookback]
        window.append((k, new))
        cells: dict = {}
        for _, sqs in window:
            for s in sqs:
                cells.setdefault((s.ol, s.og, math.floor(s.loglam / ef), math.floor(s.loggam / ef)), []).append(s)
        for key, items in cells.items():
            items.sort(key=lambda s: (s.L, s.key))
            cells[key] = ([s.L for s in items], items)

        if workers > 1 and len(new) > 64:
            chunks = [new[i::workers] for i in range(workers)]
            with ThreadPoolExecutor(max_workers=workers) as ex:
                parts = list(ex.map(lambda c: _screen_pairs(c, cells, ef, D), chunks))
            candidates = set().union(*parts)
        else:
            candidates = _screen_pairs(new, cells, ef, D)

        for ka, kb in sorted(candidates):
            a = make_square(system, *ka)
            b = make_square(system, *kb)
            if balanced and (a.o_lambda != a.o_gamma or b.o_lambda != b.o_gamma):
                continue
            w = make_witness(a, b, e, None if delta is None else d)
            if w.verified_exact:
                return w
        gam.forget_below(k - 2 * gspread - lookback - 1)
        k += 1
    return NotFound(max(lam.max_len, gam.max_len), examined)


# ---------------------------------------------------------------------------
# homogeneous corner family
# ---------------------------------------------------------------------------

_MP = mpmath.MPContext()
_MP.prec = 200


def homogeneous_corner_witness(lam, gam, eps, max_n: int = 10_000_000) -> tuple[int, int]:
    """Smallest n + m (then smallest n) with |n log lam - m log gam| < eps."""
    lf, gf, ef = to_fraction(lam), to_fraction(gam), to_fraction(eps)
    if not (0 < lf < 1 and 0 < gf < 1):
        raise DomainError("ratios must lie in (0, 1)")
    if ef <= 0:
        raise DomainError("eps must be positive")
    a = -_MP.log(_MP.mpf(lf.numerator) / lf.denominator)
    b = -_MP.log(_MP.mpf(gf.numerator) / gf.denominator)
    tol = _MP.mpf(ef.numerator) / ef.denominator
    best = None
    n = 1
    while n <= max_n:
        if best is not None and n + 1 >= best[0] + best[1]:
            break
        m = max(1, int(_MP.floor((n * a - tol) / b)) + 1)
        if abs(n * a - m * b) < tol:
            if best is None or n + m < best[0] + best[1]:
                best = (n, m)
        n += 1
    if best is None:
        raise DomainError("no pair found within the search limit")
    return best


def _corner_maps(system):
    """(left, right) map digits of a homogeneous orientation-preserving system."""
    if not system.is_homogeneous or len(system) < 2:
        return None
    if any(m.orientation != 1 for m in system.maps):
        return None
    lo, hi = system.hull
    left = right = None
    for i, m in enumerate(system.maps, start=1):
        if m.fixed_point == lo and left is None:
            left = i
        if m.fixed_point == hi and right is None:
            right = i
    if left is None or right is None or left == right:
        return None
    return left, right


def corner_applicable(system: SumSystem) -> bool:
    return (
        _corner_maps(system.lambda_system) is not None
        and _corner_maps(system.gamma_system) is not None
        and system.lambda_system.diameter == system.eta * system.gamma_system.diameter
    )


def corner_squares(system: SumSystem, n: int, m: int) -> tuple[CylinderSquare, CylinderSquare]:
    """The upper-left and lower-right corner copies R^n x L^m and L^n x R^m."""
    li, ri = _corner_maps(system.lambda_system)
    lj, rj = _corner_maps(system.gamma_system)
    return (
        make_square(system, (ri,) * n, (lj,) * m),
        make_square(system, (li,) * n, (rj,) * m),
    )


def corner_tolerance(eps) -> Fraction:
    """Log tolerance under which the corner pair is eps-close: log(1 + eps), rounded down."""
    e = to_fraction(eps)
    v = _MP.log1p(_MP.mpf(e.numerator) / e.denominator)
    return to_fraction(v) * (1 - Fraction(1, 2**150))


def corner_witness(system: SumSystem, eps) -> WitnessPair | None:
    """Closed-form witness for homogeneous systems of equal physical diameter."""
    if not corner_applicable(system):
        return None
    li = system.lambda_system.ratios[0]
    gi = system.gamma_system.ratios[0]
    n, m = homogeneous_corner_witness(li, gi, corner_tolerance(eps))
    a, b = corner_squares(system, n, m)
    w = make_witness(a, b, eps)
    return w if w.verified_exact else None


@dataclass(frozen=True)
class Certification:
    epsilon: Fraction
    result: WitnessPair | NotFound
    method: str  # "corner" or "search"

    @property
    def found(self) -> bool:
        return isinstance(self.result, WitnessPair)


def certify_zero(
    system: SumSystem,
    eps_schedule: Sequence,
    scale_floor=1e-6,
    budget: SearchBudget | None = None,
    workers: int = 1,
) -> list[Certification]:
    """Witness (or exhaustive non-witness) at every eps of the schedule.

    Homogeneous systems of equal physical diameter get the corner family
    first; everything else goes through :func:`find_witness`.
    """
    out = []
    for eps in eps_schedule:
        e = to_fraction(eps)
        w = corner_witness(system, e)
        if w is not None:
            out.append(Certification(e, w, "corner"))
            continue
        out.append(Certification(e, find_witness(system, e, scale_floor, budget, workers=workers), "search"))
    return out
