import random
from fractions import Fraction

import pytest

from cantorsum import validate_system

# (criterion number, passed, detail) rows recorded by the acceptance suite
ACCEPTANCE_LINES: list[tuple[int, bool, str]] = []


def record(criterion: int, ok: bool, detail: str):
    ACCEPTANCE_LINES.append((criterion, ok, detail))
    print(f"{'PASS' if ok else 'FAIL'} criterion {criterion}: {detail}")


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for n, ok, detail in sorted(ACCEPTANCE_LINES, key=lambda t: t[0]):
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'} criterion {n}: {detail}")


def rational(rng: random.Random, lo: float, hi: float, denom: int = 1000) -> Fraction:
    return Fraction(rng.randint(round(lo * denom) + 1, round(hi * denom) - 1), denom)


def random_maps(rng: random.Random, n_maps: int, reversing: bool = False):
    """Random maps whose images of [0, 1] are disjoint and ordered, hull [0, 1]."""
    total = rng.uniform(0.3, 0.9)
    weights = [rng.uniform(0.2, 1.0) for _ in range(n_maps)]
    ratios = [Fraction(round(total * w / sum(weights) * 1000) or 1, 1000) for w in weights]
    gap = (1 - sum(ratios)) / max(n_maps - 1, 1)
    maps, x = [], Fraction(0)
    for i, r in enumerate(ratios):
        o = -1 if reversing and rng.random() < 0.4 else 1
        b = x if o == 1 else x + r
        maps.append((o, r, b))
        x += r + gap
    return maps


def random_system(rng: random.Random, n_maps: int | None = None, reversing: bool = False):
    n = n_maps or rng.randint(2, 3)
    return validate_system(random_maps(rng, n, reversing)).normalized()


@pytest.fixture
def rng():
    return random.Random(20240607)
