"""Independent reference implementations the tests check against.

These deliberately take a different route than the library code: the
segmentation oracle classifies every sample in place instead of walking
monotone runs, and the encoding oracles work on exact integers / decimals
instead of floats.
"""

from __future__ import annotations

from decimal import ROUND_HALF_UP, Decimal


def brute_force_variations(rates) -> list[tuple[int, int, int]]:
    """Local-extrema scan over the raw samples; returns (start, peak, end)
    index triples.

    Conventions: an extremum is anchored at the first sample of its plateau;
    the series boundaries are minima (index 0 opens the first variation and
    doubles as its peak when the series opens on a fall; the last index
    closes the final variation).  A flat series has no variation.
    """
    n = len(rates)
    if all(r == rates[0] for r in rates):
        return []

    points: list[tuple[int, str]] = []
    for i in range(n):
        if i > 0 and rates[i] == rates[i - 1]:
            continue  # not the first sample of its plateau
        value = rates[i]
        left = next((rates[j] for j in range(i - 1, -1, -1) if rates[j] != value), None)
        right = next((rates[j] for j in range(i + 1, n) if rates[j] != value), None)
        if (left is None or left < value) and (right is None or right < value):
            points.append((i, "max"))
        if (left is None or left > value) and (right is None or right > value):
            points.append((n - 1 if right is None else i, "min"))
    if points[0] == (0, "max"):
        points.insert(0, (0, "min"))
    if points[-1][1] == "max":
        points.append((n - 1, "min"))

    triples = []
    for k in range(0, len(points) - 2, 2):
        assert points[k][1] == "min" and points[k + 1][1] == "max"
        triples.append((points[k][0], points[k + 1][0], points[k + 2][0]))
    return triples


def relative_position_from_thousandths(k: int) -> int:
    """The peak-relative bin table on the exact ratio k/1000."""
    assert 0 <= k <= 1000
    if k == 1000:
        return 10
    if k <= 100:
        return 0
    if k <= 200:
        return 3
    if k <= 500:
        return 4
    if k <= 800:
        return 5
    if k <= 900:
        return 6
    return 7


def absolute_position_from_percent(k: int) -> int:
    """Half-up rounding of (k/100)*10 done in exact decimal arithmetic."""
    scaled = Decimal(k) / Decimal(10)
    return int(scaled.quantize(Decimal(1), rounding=ROUND_HALF_UP))


def six_step_from_percent(k: int) -> int:
    """Enumerated thresholds of the six-position unfurl scale."""
    for step, threshold in enumerate((0, 20, 40, 60, 80, 100)):
        if k <= threshold:
            return step
    raise AssertionError(f"percent {k} out of range")
