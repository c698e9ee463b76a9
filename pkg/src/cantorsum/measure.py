"""Natural measure on cylinders, scale decompositions and covering diagnostics.

The product measure gives ``[u x v]`` mass ``lambda_u^{d_lambda} *
gamma_v^{d_gamma}``.  For homogeneous systems each digit weighs exactly
1/A, and masses are returned as exact rationals.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Literal, Sequence

import numpy as np

from ._exact import to_fraction
from .errors import DegenerateSystem, DomainError
from .ifs import AffineCantorSystem, SumSystem, Word
from .squares import CylinderSquare, make_square


def map_weights(system: AffineCantorSystem) -> list:
    """Per-digit masses r_i^d; exact 1/A for homogeneous systems."""
    if system.is_homogeneous:
        return [Fraction(1, len(system))] * len(system)
    return [float(r) ** system.dimension for r in system.ratios]


def _word_mass(weights, word) -> Fraction | float:
    out = Fraction(1) if all(isinstance(w, Fraction) for w in weights) else 1.0
    for d in word:
        out *= weights[d - 1]
    return out


def cylinder_measure(system: SumSystem, u: Sequence[int] = (), v: Sequence[int] = ()):
    """Mass of [u x v]; a Fraction when both systems are homogeneous."""
    u = system.lambda_system.check_word(u)
    v = system.gamma_system.check_word(v)
    return _word_mass(map_weights(system.lambda_system), u) * _word_mass(map_weights(system.gamma_system), v)


@dataclass(frozen=True)
class CylinderMeasure:
    square: CylinderSquare
    mass: Fraction | float


@dataclass
class _Side:
    words: list
    ratio: np.ndarray
    lo: np.ndarray  # image of the hull under F_u
    hi: np.ndarray
    mass: np.ndarray


def _side_partition(system: AffineCantorSystem, r: Fraction) -> _Side:
    """Shortest words with ratio product < r, in lexicographic order."""
    rf = float(r)
    maps = [(float(m.ratio), float(m.slope), float(m.offset)) for m in system.maps]
    weights = [float(w) for w in map_weights(system)]
    hlo, hhi = float(system.hull[0]), float(system.hull[1])
    words, ratios, los, his, masses = [], [], [], [], []
    # stack items: word, ratio, slope, intercept, mass
    stack = [((), 1.0, 1.0, 0.0, 1.0)]
    while stack:
        w, rho, s, c, mass = stack.pop()
        below = rho < rf
        if abs(rho - rf) <= 1e-9 * rf:
            below = abs(system.affine(w)[0]) < r
        if below:
            words.append(w)
            ratios.append(rho)
            a, b = s * hlo + c, s * hhi + c
            los.append(min(a, b))
            his.append(max(a, b))
            masses.append(mass)
            continue
        for i in range(len(maps), 0, -1):
            ri, si, ti = maps[i - 1]
            stack.append((w + (i,), rho * ri, s * si, s * ti + c, mass * weights[i - 1]))
    return _Side(words, np.array(ratios), np.array(los), np.array(his), np.array(masses))


def _check_scale(r) -> Fraction:
    rr = to_fraction(r)
    if not 0 < rr < 1:
        raise DomainError("r must lie in (0, 1)")
    return rr


def r_square_decomposition(system: SumSystem, r) -> list[CylinderSquare]:
    """Disjoint squares covering the address space with r*r_min <= lambda_u, gamma_v < r.

    The shortest words below ``r`` on each side form a partition of that
    side, and their products partition the whole space.
    """
    rr = _check_scale(r)
    U = _side_partition(system.lambda_system, rr)
    V = _side_partition(system.gamma_system, rr)
    return [make_square(system, u, v) for u in U.words for v in V.words]


def decomposition_masses(system: SumSystem, r) -> np.ndarray:
    """Masses of the r-decomposition squares, in the same order."""
    rr = _check_scale(r)
    U = _side_partition(system.lambda_system, rr)
    V = _side_partition(system.gamma_system, rr)
    return np.outer(U.mass, V.mass).ravel()


def measured_decomposition(system: SumSystem, r) -> list[CylinderMeasure]:
    return [CylinderMeasure(sq, cylinder_measure(system, sq.u, sq.v)) for sq in r_square_decomposition(system, r)]


def _require_cantor(system: SumSystem):
    if len(system.lambda_system) < 2 or len(system.gamma_system) < 2:
        raise DegenerateSystem("both systems need at least two maps")


def _image_intervals(system: SumSystem, rr: Fraction):
    U = _side_partition(system.lambda_system, rr)
    V = _side_partition(system.gamma_system, rr)
    eta = float(system.eta)
    lo = (U.lo[:, None] + eta * V.lo[None, :]).ravel()
    hi = (U.hi[:, None] + eta * V.hi[None, :]).ravel()
    return lo, hi


def covering_sum(system: SumSystem, r) -> float:
    """Cost of covering the sum set by the r-decomposition images.

    Each square contributes the hull ``I_uv`` of its image.  Overlapping
    hulls are grouped into connected components, and each component is
    charged the cheaper of covering it whole or piece by piece, with cost
    ``diam ** (d_lambda + d_gamma)``.
    """
    _require_cantor(system)
    rr = _check_scale(r)
    s = system.sum_dimension
    lo, hi = _image_intervals(system, rr)
    order = np.lexsort((hi, lo))
    lo, hi = lo[order], hi[order]
    lengths = (hi - lo) ** s
    run_hi = np.maximum.accumulate(hi)
    starts = np.ones(len(lo), dtype=bool)
    starts[1:] = lo[1:] > run_hi[:-1]
    comp = np.cumsum(starts) - 1
    n = comp[-1] + 1
    comp_lo = lo[starts]
    comp_hi = np.zeros(n)
    np.maximum.at(comp_hi, comp, hi)
    pieces = np.zeros(n)
    np.add.at(pieces, comp, lengths)
    whole = (comp_hi - comp_lo) ** s
    return float(math.fsum(np.minimum(whole, pieces)))


def _ball_squares(system: SumSystem, a: float, r: float):
    """(u, v, mass) for decomposition squares whose image meets [a - r, a + r]."""
    lsys, gsys = system.lambda_system, system.gamma_system
    lmaps = [(float(m.ratio), float(m.slope), float(m.offset)) for m in lsys.maps]
    gmaps = [(float(m.ratio), float(m.slope), float(m.offset)) for m in gsys.maps]
    lw = [float(w) for w in map_weights(lsys)]
    gw = [float(w) for w in map_weights(gsys)]
    lh = (float(lsys.hull[0]), float(lsys.hull[1]))
    gh = (float(gsys.hull[0]), float(gsys.hull[1]))
    eta = float(system.eta)
    left, right = a - r, a + r

    def image(h, s, c):
        x, y = s * h[0] + c, s * h[1] + c
        return (x, y) if x <= y else (y, x)

    out = []
    # word, ratio, slope, intercept for each side, and mass
    stack = [((), 1.0, 1.0, 0.0, (), 1.0, 1.0, 0.0, 1.0)]
    while stack:
        u, ru, su, cu, v, rv, sv, cv, mass = stack.pop()
        ilo, ihi = image(lh, su, cu)
        jlo, jhi = image(gh, sv, cv)
        lo, hi = ilo + eta * jlo, ihi + eta * jhi
        pad = 1e-12 * (1 + abs(lo) + abs(hi))
        if hi + pad < left or lo - pad > right:
            continue
        if ru >= r:
            for i, (ri, si, ti) in enumerate(lmaps, 1):
                stack.append((u + (i,), ru * ri, su * si, su * ti + cu, v, rv, sv, cv, mass * lw[i - 1]))
        elif rv >= r:
            for j, (rj, sj, tj) in enumerate(gmaps, 1):
                stack.append((u, ru, su, cu, v + (j,), rv * rj, sv * sj, sv * tj + cv, mass * gw[j - 1]))
        else:
            out.append((u, v, mass))
    return out


def density_estimate(system: SumSystem, a, r) -> float:
    """Upper estimate of nu(B(a, r)) / r^(d_lambda + d_gamma).

    Sums the masses of r-decomposition squares whose image hull meets the
    closed ball; hulls over-cover images, so this never underestimates.
    """
    _require_cantor(system)
    rf = float(r)
    if rf <= 0:
        raise DomainError("r must be positive")
    found = _ball_squares(system, float(a), rf)
    return math.fsum(m for _, _, m in found) / rf ** system.sum_dimension


def ball_count(system: SumSystem, a, r) -> int:
    """Number of r-decomposition squares whose image meets B(a, r)."""
    _require_cantor(system)
    return len(_ball_squares(system, float(a), float(r)))


Reading = Literal["literal", "corrected"]


def pigeonhole_M(eps, eta_const, reading: Reading = "corrected") -> int:
    """Number of e^{-eps} steps between eta*r and r, under either reading.

    ``literal`` divides log(eta) by log(eps); ``corrected`` divides |log eta|
    by eps, which is what the spacing e^{-k eps} calls for.
    """
    e, h = float(eps), float(eta_const)
    if not (0 < e < 1 and 0 < h < 1):
        raise DomainError("eps and eta_const must lie in (0, 1)")
    if reading == "literal":
        x = math.log(h) / math.log(e)
    elif reading == "corrected":
        x = -math.log(h) / e
    else:
        raise DomainError(f"unknown reading {reading!r}")
    nearest = round(x)
    if abs(x - nearest) < 1e-12 * max(1.0, abs(x)):
        x = nearest
    return math.floor(x) + 1


def pigeonhole_count(M: int, eps, eta_const) -> float:
    """(M + 1)^2 * 20 / (eta * eps)."""
    return (M + 1) ** 2 * 20 / (float(eta_const) * float(eps))


def pigeonhole_bound(system: SumSystem | None, eps, eta_const, reading: Reading = "corrected") -> float:
    """Upper bound on the number of decomposition squares meeting a ball."""
    return pigeonhole_count(pigeonhole_M(eps, eta_const, reading), eps, eta_const)


def cluster_density(system: SumSystem, squares: Sequence[CylinderSquare], s: Word, t: Word, h: float):
    """Centre, radius and lower density bound for prefixed close squares.

    With a = L(s u_1 1..., t v_1 1...) and radius h * lambda_{s u_1}, every
    prefixed cylinder ``[s u_i x t v_i]`` maps into the ball, so their
    total mass over radius^(d_lambda + d_gamma) bounds the density from
    below.
    """
    pref = [make_square(system, s + q.u, t + q.v) for q in squares]
    a = float(pref[0].endpoint)
    radius = h * float(pref[0].lambda_u)
    mass = math.fsum(float(cylinder_measure(system, p.u, p.v)) for p in pref)
    return a, radius, mass / radius ** system.sum_dimension
