"""Projection scans and the middle-set region map.

Projecting the product of two Cantor sets along direction (1, eta) gives,
up to scaling, the sum C_lambda + eta C_gamma.  A scan samples eta on a
uniform grid and runs the witness engine at each point.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable

from ._exact import to_fraction
from .errors import BudgetExceeded, DomainError, NonpositiveEta
from .ifs import SumSystem
from .squares import SearchBudget, WitnessPair, certify_zero

LOG2 = math.log(2)


def scale_gamma(system: SumSystem, eta) -> SumSystem:
    """The sum system for C_lambda + eta C_gamma; gamma ratios are untouched."""
    e = to_fraction(eta)
    if e <= 0:
        raise NonpositiveEta("eta must be positive")
    return system.with_eta(e)


@dataclass(frozen=True)
class AtlasRecord:
    index: int
    eta: float
    theta: float
    eps: float
    witness_found: bool
    witness: WitnessPair | None
    depth_reached: int
    budget_exceeded: bool = False
    method: str = "search"
    eta_exact: Fraction | None = None


def eta_grid(eta_lo, eta_hi, grid_n: int) -> list[Fraction]:
    """grid_n evenly spaced exact values from eta_lo to eta_hi inclusive."""
    lo, hi = to_fraction(eta_lo), to_fraction(eta_hi)
    if not 0 < lo < hi:
        raise DomainError("need 0 < eta_lo < eta_hi")
    if grid_n < 2:
        raise DomainError("grid_n must be at least 2")
    return [lo + (hi - lo) * Fraction(i, grid_n - 1) for i in range(grid_n)]


def _scan_point(system, i, eta, eps, scale_floor, budget) -> AtlasRecord:
    scaled = scale_gamma(system, eta)
    ef = float(eps)
    theta = math.atan(float(eta))
    try:
        (cert,) = certify_zero(scaled, [eps], scale_floor, budget)
    except BudgetExceeded as exc:
        return AtlasRecord(i, float(eta), theta, ef, False, None, exc.depth_reached, True, "search", eta)
    res = cert.result
    if cert.found:
        return AtlasRecord(i, float(eta), theta, ef, True, res, res.depth, False, cert.method, eta)
    return AtlasRecord(i, float(eta), theta, ef, False, None, res.depth_reached, False, cert.method, eta)


def scan_projections(
    system: SumSystem,
    eta_lo,
    eta_hi,
    grid_n: int,
    eps,
    scale_floor=1e-6,
    budget: SearchBudget | None = None,
    workers: int = 1,
) -> list[AtlasRecord]:
    """One record per grid point, in grid order.

    A budget overrun marks that record and the scan carries on.  Grid
    points are independent, so ``workers`` only changes wall time.
    """
    grid = eta_grid(eta_lo, eta_hi, grid_n)
    e = to_fraction(eps)
    if e <= 0:
        raise DomainError("eps must be positive")
    budget = budget or SearchBudget()
    args = [(system, i, eta, e, scale_floor, budget) for i, eta in enumerate(grid)]
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as ex:
            return list(ex.map(lambda a: _scan_point(*a), args))
    return [_scan_point(*a) for a in args]


def witness_fraction(records: Iterable[AtlasRecord]) -> float:
    recs = list(records)
    return sum(r.witness_found for r in recs) / len(recs)


# ---------------------------------------------------------------------------
# middle-set regions
# ---------------------------------------------------------------------------


def thickness(lam) -> float:
    """Newhouse thickness lam / (1 - 2 lam) of the middle set with ratio lam."""
    x = float(lam)
    if not 0 < x < 0.5:
        raise DomainError("thickness needs 0 < lam < 1/2")
    return x / (1 - 2 * x)


def difference_thickness(lam) -> float:
    """Thickness 2 lam / (1 - 3 lam) of C_lam - C_lam."""
    x = float(lam)
    if not 0 < x < 1 / 3:
        raise DomainError("difference thickness needs 0 < lam < 1/3")
    return 2 * x / (1 - 3 * x)


def middle_dimension(lam) -> float:
    return LOG2 / math.log(1 / float(lam))


REGIONS = ("III", "II", "Ia", "Ib", "Ic")


@dataclass(frozen=True)
class RegionLabel:
    label: str
    # thickness product - 1, dimension sum - 1, difference-thickness product - 1, dimension sum - 1/2
    margins: tuple[float, float, float | None, float]
    region: str  # the region the rules select even when flagged as boundary

    def __str__(self):
        return self.label


def middle_set_classify(lam, gam, boundary_tol: float = 1e-12) -> RegionLabel:
    """Region of (lam, gam) in the middle-set parameter square.

    Rules apply in the order III, II, Ia, Ic, Ib; Ia is only tried when
    both ratios are below 1/3.  The label is "boundary" when any margin
    consulted on the way has absolute value at most ``boundary_tol``.
    """
    x, y = float(lam), float(gam)
    if not (0 < x < 0.5 and 0 < y < 0.5):
        raise DomainError("lam and gam must lie in (0, 1/2)")
    m3 = thickness(x) * thickness(y) - 1
    dsum = middle_dimension(x) + middle_dimension(y)
    m2 = dsum - 1
    m1a = difference_thickness(x) * difference_thickness(y) - 1 if x < 1 / 3 and y < 1 / 3 else None
    m1c = dsum - 0.5
    consulted = [m3]
    if m3 > 0:
        region = "III"
    else:
        consulted.append(m2)
        if m2 > 0:
            region = "II"
        else:
            if m1a is not None:
                consulted.append(m1a)
            if m1a is not None and m1a > 0:
                region = "Ia"
            else:
                consulted.append(m1c)
                region = "Ic" if m1c < 0 else "Ib"
    edge = any(abs(m) <= boundary_tol for m in consulted)
    return RegionLabel("boundary" if edge else region, (m3, m2, m1a, m1c), region)


def region_grid(n: int, boundary_tol: float = 1e-12) -> list[tuple[float, float, str]]:
    """Labels at the n x n cell centres of (0, 1/2)^2."""
    if n < 1:
        raise DomainError("grid size must be positive")
    pts = [(i + 0.5) / (2 * n) for i in range(n)]
    return [(x, y, middle_set_classify(x, y, boundary_tol).label) for x in pts for y in pts]


def _curve(fn, xs):
    pts = []
    for x in xs:
        y = fn(x)
        if y is not None and 0 < y < 0.5:
            pts.append((x, y))
    return pts


def boundary_curves(samples: int = 400) -> dict[str, list[tuple[float, float]]]:
    """The four region boundaries as (lam, gam) polylines."""
    xs = [0.5 * (i + 0.5) / samples for i in range(samples)]

    def thick(x):
        return (1 - 2 * x) / (2 - 3 * x)

    def dim(sumd):
        def f(x):
            dg = sumd - middle_dimension(x)
            return math.exp(-LOG2 / dg) if dg > 0 else None

        return f

    def diff(x):
        if x >= 1 / 3:
            return None
        q = 1 / difference_thickness(x)
        return q / (2 + 3 * q)

    return {
        "thickness": _curve(thick, xs),
        "dimension-one": _curve(dim(1.0), xs),
        "difference-thickness": _curve(diff, xs),
        "dimension-half": _curve(dim(0.5), xs),
    }


_FILL = {"III": "#d62728", "II": "#ff9896", "Ia": "#1f77b4", "Ib": "#aec7e8", "Ic": "#2ca02c", "boundary": "#000000"}
_CURVE_LABEL = {
    "thickness": "τ(λ)τ(γ) = 1",
    "dimension-one": "d_λ + d_γ = 1",
    "difference-thickness": "τ'(λ)τ'(γ) = 1",
    "dimension-half": "d_λ + d_γ = 1/2",
}


def region_svg(n: int = 200, size: int = 500, boundary_tol: float = 1e-12) -> str:
    """Static SVG of the five regions with the four boundary curves."""
    margin = 50
    cell = size / n

    def px(x, y):
        return margin + x / 0.5 * size, margin + size - y / 0.5 * size

    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{size + 2 * margin}" height="{size + 2 * margin}" '
        f'viewBox="0 0 {size + 2 * margin} {size + 2 * margin}">',
        '<g id="regions" shape-rendering="crispEdges">',
    ]
    pts = [(i + 0.5) / (2 * n) for i in range(n)]
    for j, y in enumerate(pts):
        row = [middle_set_classify(x, y, boundary_tol).region for x in pts]
        start = 0
        for i in range(1, n + 1):
            if i == n or row[i] != row[start]:
                x0 = margin + start * cell
                y0 = margin + size - (j + 1) * cell
                out.append(
                    f'<rect x="{x0:.3f}" y="{y0:.3f}" width="{(i - start) * cell:.3f}" '
                    f'height="{cell:.3f}" fill="{_FILL[row[start]]}" class="region-{row[start]}"/>'
                )
                start = i
    out.append("</g>")
    for name, poly in boundary_curves().items():
        coords = " ".join("{:.2f},{:.2f}".format(*px(x, y)) for x, y in poly)
        out.append(
            f'<polyline id="curve-{name}" points="{coords}" fill="none" stroke="black" stroke-width="1.5">'
            f"<title>{_CURVE_LABEL[name]}</title></polyline>"
        )
    out.append(f'<rect x="{margin}" y="{margin}" width="{size}" height="{size}" fill="none" stroke="black"/>')
    for t in (0.1, 0.2, 0.3, 0.4, 0.5):
        xx, _ = px(t, 0)
        _, yy = px(0, t)
        out.append(f'<text x="{xx:.1f}" y="{margin + size + 16}" font-size="11" text-anchor="middle">{t:g}</text>')
        out.append(f'<text x="{margin - 6}" y="{yy + 4:.1f}" font-size="11" text-anchor="end">{t:g}</text>')
    out.append(
        f'<text id="axis-lambda" x="{margin + size / 2}" y="{margin + size + 38}" font-size="16" '
        f'text-anchor="middle">λ</text>'
    )
    out.append(
        f'<text id="axis-gamma" x="{margin - 34}" y="{margin + size / 2}" font-size="16" text-anchor="middle">γ</text>'
    )
    for k, (name, colour) in enumerate(_FILL.items()):
        if name == "boundary":
            continue
        out.append(f'<text x="{margin + size + 4}" y="{margin + 14 + 16 * k}" font-size="12" fill="{colour}">{name}</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"
