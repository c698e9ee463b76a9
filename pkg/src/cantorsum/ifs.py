"""Affine iterated function systems on the line.

A system is an ordered tuple of maps ``x -> o*r*x + b`` with ``o`` in
{+1, -1} and ``0 < r < 1``.  Parameters are held as exact rationals, so
word products, orientations and endpoints are exact.  Words are tuples of
1-based map indices; the empty tuple is the identity.

The endpoint of a word ``u`` is the image under ``F_u`` of the fixed point
of map 1, i.e. the point with address ``u`` followed by an infinite tail of
1s.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Iterable, Sequence

from ._exact import to_fraction
from .errors import (
    EmptySystem,
    InvalidDigit,
    InvalidOrientation,
    NoConvergence,
    NonpositiveEta,
    RatioOutOfRange,
)

Word = tuple[int, ...]

DIMENSION_TOL = 1e-12
HULL_TOL = 1e-14


@dataclass(frozen=True)
class ContractionMap:
    orientation: int
    ratio: Fraction
    offset: Fraction

    def __post_init__(self):
        o = self.orientation
        if isinstance(o, bool) or o not in (1, -1):
            raise InvalidOrientation(f"orientation must be +1 or -1, got {o!r}")
        r = to_fraction(self.ratio)
        if not 0 < r < 1:
            raise RatioOutOfRange(f"ratio must lie in (0, 1), got {r}")
        object.__setattr__(self, "orientation", int(o))
        object.__setattr__(self, "ratio", r)
        object.__setattr__(self, "offset", to_fraction(self.offset))

    @property
    def slope(self) -> Fraction:
        return self.orientation * self.ratio

    @property
    def fixed_point(self) -> Fraction:
        return self.offset / (1 - self.slope)

    def __call__(self, x):
        return self.slope * x + self.offset


@dataclass(frozen=True)
class WordStats:
    ratio_product: Fraction
    orientation_product: int
    endpoint: Fraction


@dataclass(frozen=True)
class AffineCantorSystem:
    maps: tuple[ContractionMap, ...]
    dimension: float
    hull: tuple[Fraction, Fraction]
    _affine_cache: dict = field(default_factory=dict, compare=False, hash=False, repr=False)

    @property
    def diameter(self) -> Fraction:
        return self.hull[1] - self.hull[0]

    @property
    def ratios(self) -> tuple[Fraction, ...]:
        return tuple(m.ratio for m in self.maps)

    @property
    def base_point(self) -> Fraction:
        """Fixed point of map 1, the image of the all-ones address."""
        return self.maps[0].fixed_point

    @property
    def is_homogeneous(self) -> bool:
        return len(set(self.ratios)) == 1

    def __len__(self):
        return len(self.maps)

    def check_word(self, word: Sequence[int]) -> Word:
        n = len(self.maps)
        w = tuple(word)
        for d in w:
            if isinstance(d, bool) or not isinstance(d, int) or not 1 <= d <= n:
                raise InvalidDigit(f"digit {d!r} is not a map index in 1..{n}")
        return w

    def affine(self, word: Sequence[int]) -> tuple[Fraction, Fraction]:
        """Coefficients (slope, intercept) of F_u = F_{u1} o ... o F_{un}."""
        w = self.check_word(word)
        return self._affine(w)

    def _affine(self, w: Word) -> tuple[Fraction, Fraction]:
        cache = self._affine_cache
        hit = cache.get(w)
        if hit is not None:
            return hit
        if not w:
            out = (Fraction(1), Fraction(0))
        else:
            a, c = self._affine(w[:-1])
            m = self.maps[w[-1] - 1]
            out = (a * m.slope, a * m.offset + c)
        if len(cache) > 500_000:
            cache.clear()
        cache[w] = out
        return out

    def normalized(self) -> "AffineCantorSystem":
        """The conjugate system whose hull is [0, 1]."""
        lo, hi = self.hull
        d = hi - lo
        if d == 0:
            return self
        maps = [
            ContractionMap(m.orientation, m.ratio, (m.slope * lo + m.offset - lo) / d)
            for m in self.maps
        ]
        return validate_system(maps)


def similarity_dimension(ratios: Iterable, tol: float = DIMENSION_TOL, max_iter: int = 400) -> float:
    """Unique root d of sum(r_i**d) = 1, by bisection then Newton polish.

    >>> round(similarity_dimension([0.25, 0.25]), 12)
    0.5
    """
    rs = [float(r) for r in ratios]
    if not rs:
        raise EmptySystem("no ratios given")
    if tol <= 0:
        raise ValueError("tol must be positive")
    if any(not 0 < r < 1 for r in rs):
        raise RatioOutOfRange("ratios must lie in (0, 1)")
    logs = [math.log(r) for r in rs]

    def f(d):
        return math.fsum(math.exp(d * lg) for lg in logs) - 1.0

    lo, hi = 0.0, math.log(len(rs)) / -max(logs)
    if hi == 0.0:
        return 0.0
    for _ in range(max_iter):
        if hi - lo < 1e-9 * max(1.0, hi):
            break
        mid = 0.5 * (lo + hi)
        if f(mid) > 0:
            lo = mid
        else:
            hi = mid
    d = 0.5 * (lo + hi)
    for _ in range(50):
        val = f(d)
        if abs(val) < tol * 1e-3:
            break
        deriv = math.fsum(lg * math.exp(d * lg) for lg in logs)
        step = val / deriv
        nd = d - step
        if not lo - 1e-9 <= nd <= hi + 1e-9:
            break
        d = nd
        if abs(step) < 1e-17:
            break
    if abs(f(d)) >= tol:
        raise NoConvergence(f"dimension residual {f(d):.3e} above tolerance {tol:.1e}")
    return d


def _interval_image(maps, a, b):
    lo = min(min(m(a), m(b)) for m in maps)
    hi = max(max(m(a), m(b)) for m in maps)
    return lo, hi


def _exact_hull_candidate(maps, ia, ea, ib, eb):
    """Solve a = F_ia(end ea), b = F_ib(end eb) exactly; ends are 'a' or 'b'."""
    # unknowns (a, b): a = s_a * X_a + t_a where X_a is a or b, same for b
    sa, ta = maps[ia].slope, maps[ia].offset
    sb, tb = maps[ib].slope, maps[ib].offset
    # rows: coefficients of (a, b) and rhs
    r1 = [Fraction(1), Fraction(0), ta]
    r2 = [Fraction(0), Fraction(1), tb]
    r1[0 if ea == "a" else 1] -= sa
    r2[0 if eb == "a" else 1] -= sb
    det = r1[0] * r2[1] - r1[1] * r2[0]
    if det == 0:
        return None
    a = (r1[2] * r2[1] - r1[1] * r2[2]) / det
    b = (r1[0] * r2[2] - r1[2] * r2[0]) / det
    return a, b


def convex_hull(maps: Sequence[ContractionMap], tol: float = HULL_TOL, max_iter: int = 10_000) -> tuple[Fraction, Fraction]:
    """Smallest closed interval mapped into itself by every map, exactly.

    The interval map is iterated in floating point until both ends move by
    less than ``tol*(1 + |end|)``; the maps attaining each end are then read
    off and the two linear end equations are solved in rationals.
    """
    if not maps:
        raise EmptySystem("a system needs at least one map")
    fmaps = [(float(m.slope), float(m.offset)) for m in maps]

    def fimage(a, b):
        vals = [(s * a + t, s * b + t) for s, t in fmaps]
        return min(min(p) for p in vals), max(max(p) for p in vals)

    fps = [float(m.fixed_point) for m in maps]
    a, b = min(fps), max(fps)
    for _ in range(max_iter):
        na, nb = fimage(a, b)
        done = abs(na - a) < tol * (1 + abs(a)) and abs(nb - b) < tol * (1 + abs(b))
        a, b = na, nb
        if done:
            break
    else:
        raise NoConvergence("hull iteration did not settle")

    def attainers(target, pick):
        out = []
        for i, (s, t) in enumerate(fmaps):
            for end, x in (("a", a), ("b", b)):
                v = s * x + t
                if abs(v - target) <= 1e-9 * (1 + abs(target)):
                    out.append((i, end))
        return out

    cands_a = attainers(a, min) or [(i, e) for i in range(len(maps)) for e in "ab"]
    cands_b = attainers(b, max) or [(i, e) for i in range(len(maps)) for e in "ab"]
    full = [(i, e) for i in range(len(maps)) for e in "ab"]
    for pool_a, pool_b in ((cands_a, cands_b), (full, full)):
        for ia, ea in pool_a:
            for ib, eb in pool_b:
                sol = _exact_hull_candidate(maps, ia, ea, ib, eb)
                if sol is None:
                    continue
                lo, hi = sol
                if lo > hi:
                    continue
                if _interval_image(maps, lo, hi) == (lo, hi):
                    return lo, hi
    raise NoConvergence("could not certify the hull exactly")


def validate_system(maps: Iterable, dim_tol: float = DIMENSION_TOL, hull_tol: float = HULL_TOL) -> AffineCantorSystem:
    """Build an AffineCantorSystem, computing dimension and hull.

    Maps may be ContractionMap instances or (orientation, ratio, offset)
    triples.
    """
    built = []
    for m in maps:
        if not isinstance(m, ContractionMap):
            o, r, b = m
            m = ContractionMap(o, r, b)
        built.append(m)
    if not built:
        raise EmptySystem("a system needs at least one map")
    dim = similarity_dimension([m.ratio for m in built], tol=dim_tol)
    hull = convex_hull(built, tol=hull_tol)
    return AffineCantorSystem(tuple(built), dim, hull)


def homogeneous_system(ratio, n_maps: int = 2, hull=(0, 1)) -> AffineCantorSystem:
    """Evenly spread orientation-preserving maps of one ratio with the given hull."""
    r = to_fraction(ratio)
    lo, hi = to_fraction(hull[0]), to_fraction(hull[1])
    if n_maps < 1:
        raise EmptySystem("need at least one map")
    if n_maps == 1:
        return validate_system([(1, r, lo * (1 - r))])
    d = hi - lo
    step = (d - d * r) / (n_maps - 1)
    return validate_system([(1, r, lo * (1 - r) + k * step) for k in range(n_maps)])


def middle_set(lam) -> AffineCantorSystem:
    """The middle-(1 - 2*lam) set on [0, 1]."""
    return homogeneous_system(lam, 2)


def word_stats(system: AffineCantorSystem, word: Sequence[int]) -> WordStats:
    slope, intercept = system.affine(word)
    return WordStats(abs(slope), 1 if slope > 0 else -1, slope * system.base_point + intercept)


@dataclass(frozen=True)
class SumSystem:
    """Two systems whose attractors are summed, the second scaled by ``eta``."""

    lambda_system: AffineCantorSystem
    gamma_system: AffineCantorSystem
    eta: Fraction = Fraction(1)

    def __post_init__(self):
        e = to_fraction(self.eta)
        if e <= 0:
            raise NonpositiveEta(f"eta must be positive, got {e}")
        object.__setattr__(self, "eta", e)

    @property
    def r_min(self) -> Fraction:
        return min(self.lambda_system.ratios + self.gamma_system.ratios)

    @property
    def big_D(self) -> Fraction:
        return max(self.lambda_system.diameter, self.eta * self.gamma_system.diameter)

    @property
    def sum_dimension(self) -> float:
        return self.lambda_system.dimension + self.gamma_system.dimension

    @property
    def size_factor(self) -> Fraction:
        """Multiplier k with square test on lambda_u / (k * gamma_v).

        Equals eta * D_gamma / D_lambda, i.e. squares compare physical
        extents; reduces to 1 for eta = 1 and equal diameters.
        """
        dl, dg = self.lambda_system.diameter, self.gamma_system.diameter
        if dl == 0 or dg == 0:
            return self.eta
        return self.eta * dg / dl

    @property
    def hull(self) -> tuple[Fraction, Fraction]:
        (a, b), (c, d) = self.lambda_system.hull, self.gamma_system.hull
        return a + self.eta * c, b + self.eta * d

    def with_eta(self, eta) -> "SumSystem":
        return replace(self, eta=to_fraction(eta))


def sum_endpoint(sum_system: SumSystem, u: Sequence[int], v: Sequence[int]) -> Fraction:
    """L_eta(u 1..., v 1...) = endpoint_lambda(u) + eta * endpoint_gamma(v)."""
    a = word_stats(sum_system.lambda_system, u).endpoint
    b = word_stats(sum_system.gamma_system, v).endpoint
    return a + sum_system.eta * b
