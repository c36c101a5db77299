"""Shared test helpers: seeded random measures and recovery-error metrics."""

from __future__ import annotations

import numpy as np

from momentkit import AtomicMeasure


def random_measure(
    rng: np.random.Generator,
    dim: int,
    n_atoms: int,
    min_sep: float = 0.5,
    box: float = 10.0,
    weight_low: float = 0.2,
    weight_high: float = 2.0,
) -> AtomicMeasure:
    """Random atoms in ``[0, box]^dim``, pairwise at least ``min_sep`` apart."""
    points: list[tuple[float, ...]] = []
    while len(points) < n_atoms:
        cand = rng.uniform(0.0, box, size=dim)
        if all(
            float(np.linalg.norm(cand - np.asarray(p))) >= min_sep for p in points
        ):
            points.append(tuple(float(v) for v in cand))
    weights = rng.uniform(weight_low, weight_high, size=n_atoms)
    return AtomicMeasure(dim, [(p, float(w)) for p, w in zip(points, weights)])


def measure_errors(
    expected: AtomicMeasure, recovered: AtomicMeasure
) -> tuple[float, float]:
    """Worst coordinate error and worst weight error after sorting atoms.

    Returns ``(inf, inf)`` when the atom counts differ, so callers can
    assert against tolerances without special-casing.
    """
    a = expected.sorted_atoms()
    b = recovered.sorted_atoms()
    if len(a) != len(b):
        return float("inf"), float("inf")
    pos = 0.0
    wt = 0.0
    for (p, w1), (q, w2) in zip(a, b):
        pos = max(pos, max(abs(x - y) for x, y in zip(p, q)))
        wt = max(wt, abs(w1 - w2))
    return pos, wt
