"""One-dimensional Earth Mover's Distance between unit-mass histograms."""

from __future__ import annotations

from collections.abc import Sequence

import numpy as np

from ctt.errors import LengthMismatch, UnnormalizedInput

_MASS_TOL = 1e-9


def emd_1d(h1: Sequence[float], h2: Sequence[float]) -> float:
    """EMD with unit adjacent-bin ground distance.

    For 1-D histograms of equal mass this reduces to the L1 distance
    between the cumulative distributions: sum_k |CDF1(k) - CDF2(k)|.
    """
    if len(h1) != len(h2):
        raise LengthMismatch(f"{len(h1)} bins vs {len(h2)} bins")
    a = np.asarray(h1, dtype=np.float64)
    b = np.asarray(h2, dtype=np.float64)
    s1, s2 = float(a.sum()), float(b.sum())
    if abs(s1 - 1.0) > _MASS_TOL or abs(s2 - 1.0) > _MASS_TOL:
        raise UnnormalizedInput(f"masses {s1!r}, {s2!r} are not 1 +- 1e-9")
    return float(np.abs(np.cumsum(a) - np.cumsum(b)).sum())
