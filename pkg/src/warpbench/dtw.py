"""The four alignment engines: DTW, DDTW, WDTW and WDDTW.

All variants minimise the aggregate local cost along a monotone warping
path from (0, 0) to (m-1, n-1) over the m x n cost matrix.  The local cost
is ``|x_i - y_j|`` for DTW, the same on derivative-transformed signals for
DDTW, and either multiplied by a logistic weight of the phase difference
``|i - j|`` for the weighted variants.  An optional band constraint
restricts admissible cells to a corridor around the (slope-corrected)
diagonal; an infeasible band is widened to the minimum feasible width and
flagged on the result.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from . import _kernels
from .errors import ContractViolation, ParameterError
from .series import Series, as_values

__all__ = [
    "DtwVariant",
    "WeightParams",
    "BandConstraint",
    "Alignment",
    "derivative_transform",
    "weight_vector",
    "align",
    "alignment_cost",
]


class DtwVariant(str, enum.Enum):
    DTW = "dtw"
    DDTW = "ddtw"
    WDTW = "wdtw"
    WDDTW = "wddtw"

    @property
    def weighted(self) -> bool:
        return self in (DtwVariant.WDTW, DtwVariant.WDDTW)

    @property
    def derivative(self) -> bool:
        return self in (DtwVariant.DDTW, DtwVariant.WDDTW)


@dataclass(frozen=True)
class WeightParams:
    """Logistic phase-difference weight ``w_max / (1 + exp(-g*(d - m_c)))``.

    ``g`` controls the steepness: large values force the warping path onto
    the diagonal, tiny values approach a flat 0.5 weight everywhere.  The
    crossover ``m_c`` defaults to half the longer series length.
    """

    g: float
    w_max: float = 1.0
    m_c: float | None = None

    def __post_init__(self):
        if self.g <= 0:
            raise ParameterError("weight steepness g must be positive")
        if self.w_max <= 0:
            raise ParameterError("w_max must be positive")


@dataclass(frozen=True)
class BandConstraint:
    """Corridor half-width ``width``: cell (i, j) is admissible iff
    ``|i - j * (m - 1) / (n - 1)| <= width``."""

    width: int

    def __post_init__(self):
        if self.width < 0:
            raise ParameterError("band width must be non-negative")


@dataclass(frozen=True)
class Alignment:
    """A warping path with its accumulated cost and provenance."""

    path: np.ndarray
    cost: float
    variant: DtwVariant
    g: float | None = None
    band: int | None = None
    band_widened: bool = False

    def __post_init__(self):
        path = np.asarray(self.path, dtype=np.int64)
        if path.ndim != 2 or path.shape[1] != 2 or len(path) == 0:
            raise ParameterError("path must be a non-empty (k, 2) index array")
        steps = np.diff(path, axis=0)
        ok = (steps >= 0).all() and (steps <= 1).all() and (steps.sum(axis=1) >= 1).all()
        if not ok:
            raise ContractViolation("path steps must be (+1,0), (0,+1) or (+1,+1)")
        if path[0, 0] != 0 or path[0, 1] != 0:
            raise ContractViolation("path must start at (0, 0)")
        path.setflags(write=False)
        object.__setattr__(self, "path", path)

    @property
    def m(self) -> int:
        return int(self.path[-1, 0]) + 1

    @property
    def n(self) -> int:
        return int(self.path[-1, 1]) + 1


def derivative_transform(x) -> Series:
    """Estimated first derivative: interior
    ``d[i] = ((x[i] - x[i-1]) + (x[i+1] - x[i-1]) / 2) / 2`` with the
    endpoints replicating their nearest interior value."""
    values = as_values(x, min_len=3)
    d = np.empty_like(values)
    d[1:-1] = ((values[1:-1] - values[:-2]) + (values[2:] - values[:-2]) / 2.0) / 2.0
    d[0] = d[1]
    d[-1] = d[-2]
    return Series(d)


def weight_vector(d_max: int, params: WeightParams) -> np.ndarray:
    """Logistic weights for phase differences 0 .. d_max.

    When ``params.m_c`` is unset the crossover is ``(d_max + 1) / 2``, i.e.
    half the longer series length for a full alignment.
    """
    if d_max < 0:
        raise ParameterError("d_max must be non-negative")
    m_c = params.m_c if params.m_c is not None else (d_max + 1) / 2.0
    d = np.arange(d_max + 1, dtype=np.float64)
    return params.w_max / (1.0 + np.exp(-params.g * (d - m_c)))


# ---------------------------------------------------------------------------
# band geometry
# ---------------------------------------------------------------------------


def _band_rows(m: int, n: int, width: int) -> tuple[np.ndarray, np.ndarray]:
    """Per-row admissible column ranges [lo[i], hi[i]] for the banded matrix."""
    slope = (m - 1) / (n - 1)
    i = np.arange(m, dtype=np.float64)
    lo = np.maximum(0, np.ceil((i - width) / slope)).astype(np.int64)
    hi = np.minimum(n - 1, np.floor((i + width) / slope)).astype(np.int64)
    return lo, hi


def _band_feasible(lo: np.ndarray, hi: np.ndarray) -> bool:
    reach = 0
    for i in range(len(lo)):
        if lo[i] > hi[i]:
            return False
        if i > 0 and lo[i] > hi[i - 1] + 1:
            return False
        reach = max(reach, lo[i])
        if reach > hi[i]:
            return False
    return True


def _resolve_band(m: int, n: int, constraint: BandConstraint) -> tuple[np.ndarray, np.ndarray, int, bool]:
    width = constraint.width
    lo, hi = _band_rows(m, n, width)
    widened = False
    while not _band_feasible(lo, hi):
        width += 1
        widened = True
        lo, hi = _band_rows(m, n, width)
    return lo, hi, width, widened


# ---------------------------------------------------------------------------
# alignment
# ---------------------------------------------------------------------------


def _prepare(x, y, variant: DtwVariant, weights: WeightParams | None):
    variant = DtwVariant(variant)
    min_len = 3 if variant.derivative else 2
    xv = as_values(x, min_len=min_len, what="x")
    yv = as_values(y, min_len=min_len, what="y")
    if variant.weighted and weights is None:
        raise ParameterError(f"{variant.value} requires weight parameters")
    if not variant.weighted and weights is not None:
        raise ParameterError(f"{variant.value} does not take weight parameters")
    if variant.derivative:
        xv = derivative_transform(xv).values
        yv = derivative_transform(yv).values
    m, n = len(xv), len(yv)
    if variant.weighted:
        params = weights
        if params.m_c is None:
            params = WeightParams(g=params.g, w_max=params.w_max, m_c=max(m, n) / 2.0)
        wvec = weight_vector(max(m, n) - 1, params)
    else:
        wvec = np.ones(max(m, n), dtype=np.float64)
    return variant, xv, yv, wvec


def align(
    x,
    y,
    variant: DtwVariant = DtwVariant.DTW,
    weights: WeightParams | None = None,
    constraint: BandConstraint | None = None,
) -> Alignment:
    """Find the minimum-cost monotone warping path between ``x`` and ``y``.

    Cost ties during backtracking prefer the diagonal move, then the move
    advancing the longer series, so paths are fully deterministic.
    """
    variant, xv, yv, wvec = _prepare(x, y, variant, weights)
    m, n = len(xv), len(yv)
    if constraint is not None:
        lo, hi, band_used, widened = _resolve_band(m, n, constraint)
    else:
        lo = np.zeros(m, dtype=np.int64)
        hi = np.full(m, n - 1, dtype=np.int64)
        band_used, widened = None, False

    acc, direction = _kernels.dp_fill(xv, yv, wvec, lo, hi, m >= n)
    cost = float(acc[m - 1, n - 1])
    if not np.isfinite(cost):
        raise ContractViolation("no admissible warping path (band resolution failed)")
    path = _kernels.backtrack(direction)
    if len(path) == 0:
        raise ContractViolation("backtracking failed")

    check = float(np.sum(np.abs(xv[path[:, 0]] - yv[path[:, 1]]) * wvec[np.abs(path[:, 0] - path[:, 1])]))
    if abs(check - cost) > 1e-9 * max(1.0, abs(cost)):
        raise ContractViolation(f"path cost {check!r} does not match DP cost {cost!r}")

    return Alignment(
        path=path,
        cost=cost,
        variant=variant,
        g=weights.g if weights is not None else None,
        band=band_used,
        band_widened=widened,
    )


def alignment_cost(
    x,
    y,
    variant: DtwVariant = DtwVariant.DTW,
    weights: WeightParams | None = None,
    constraint: BandConstraint | None = None,
) -> float:
    """Accumulated cost of the optimal path, skipping path recovery.

    Roughly halves the memory traffic of :func:`align`; used by the
    nearest-neighbour classifier and the sliding-window search where only
    the distance matters.
    """
    variant, xv, yv, wvec = _prepare(x, y, variant, weights)
    m, n = len(xv), len(yv)
    if constraint is not None:
        lo, hi, _, _ = _resolve_band(m, n, constraint)
    else:
        lo = np.zeros(m, dtype=np.int64)
        hi = np.full(m, n - 1, dtype=np.int64)
    cost = float(_kernels.dp_cost(xv, yv, wvec, lo, hi))
    if not np.isfinite(cost):
        raise ContractViolation("no admissible warping path (band resolution failed)")
    return cost
