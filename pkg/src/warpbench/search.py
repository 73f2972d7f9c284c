"""Sliding-window pattern search over curvature/torsion profiles.

3-D polylines (streamlines) are reduced to per-sample curvature and torsion
profiles; a reference profile pair is then slid across target profiles at
several window sizes, scoring each window by the alignment distances of the
two profiles combined as ``sqrt(d_c**2 + d_t**2)``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .dtw import BandConstraint, DtwVariant, WeightParams, alignment_cost
from .errors import ContractViolation, ParameterError
from .metrics import euclidean
from .series import Series

__all__ = ["ProfilePair", "MatchResult", "as_polyline", "curvature_torsion", "sliding_search"]

_CROSS_TOL = 1e-10  # |r' x r''| below this counts as locally straight


@dataclass(frozen=True)
class ProfilePair:
    """Curvature and torsion profiles of one polyline (equal lengths)."""

    curvature: Series
    torsion: Series

    def __post_init__(self):
        if len(self.curvature) != len(self.torsion):
            raise ParameterError("curvature and torsion profiles must have equal length")
        if np.any(self.curvature.values < 0):
            raise ParameterError("curvature must be non-negative")

    def __len__(self) -> int:
        return len(self.curvature)

    def window(self, start: int, stop: int) -> "ProfilePair":
        return ProfilePair(
            curvature=Series(self.curvature.values[start:stop]),
            torsion=Series(self.torsion.values[start:stop]),
        )


@dataclass(frozen=True)
class MatchResult:
    """A window on a target whose combined profile distance beat the threshold."""

    target: int
    start: int
    end: int
    d_c: float
    d_t: float
    combined: float

    def __post_init__(self):
        expected = math.hypot(self.d_c, self.d_t)
        if abs(self.combined - expected) > 1e-9 * max(1.0, expected):
            raise ContractViolation("combined distance must equal hypot(d_c, d_t)")


def as_polyline(points) -> np.ndarray:
    """Validate an (k, 3) point array: k >= 5, finite, no repeated neighbours."""
    pts = np.asarray(points, dtype=np.float64)
    if pts.ndim != 2 or pts.shape[1] != 3:
        raise ParameterError(f"polyline must have shape (k, 3), got {pts.shape}")
    if len(pts) < 5:
        raise ParameterError("polyline needs at least 5 points")
    if not np.all(np.isfinite(pts)):
        raise ParameterError("polyline contains non-finite coordinates")
    if np.any(np.linalg.norm(np.diff(pts, axis=0), axis=1) == 0.0):
        raise ParameterError("polyline has repeated consecutive points")
    return pts


def curvature_torsion(points) -> ProfilePair:
    """Discrete curvature and torsion of a 3-D polyline.

    Central finite differences estimate the first three derivatives;
    ``kappa = |r' x r''| / |r'|**3`` and
    ``tau = ((r' x r'') . r''') / |r' x r''|**2`` (zero where the curve is
    locally straight).  Ends replicate the nearest interior value.
    """
    pts = as_polyline(points)
    n = len(pts)

    r1 = (pts[2:] - pts[:-2]) / 2.0           # at 1 .. n-2
    r2 = pts[2:] - 2.0 * pts[1:-1] + pts[:-2]  # at 1 .. n-2
    cross = np.cross(r1, r2)
    cross_norm = np.linalg.norm(cross, axis=1)
    speed = np.linalg.norm(r1, axis=1)

    kappa = np.empty(n)
    kappa[1:-1] = cross_norm / speed**3
    kappa[0] = kappa[1]
    kappa[-1] = kappa[-2]

    # r''' needs two neighbours on each side
    r3 = (pts[4:] - 2.0 * pts[3:-1] + 2.0 * pts[1:-3] - pts[:-4]) / 2.0  # at 2 .. n-3
    tau = np.zeros(n)
    inner_cross = cross[1:-1]
    inner_norm = cross_norm[1:-1]
    safe = inner_norm > _CROSS_TOL
    tau_inner = np.zeros(n - 4)
    tau_inner[safe] = np.einsum("ij,ij->i", inner_cross[safe], r3[safe]) / inner_norm[safe] ** 2
    tau[2:-2] = tau_inner
    tau[:2] = tau[2]
    tau[-2:] = tau[-3]

    return ProfilePair(curvature=Series(kappa), torsion=Series(tau))


def window_lengths(ref_len: int, factor_range: tuple[float, float] = (0.5, 2.0), steps: int = 8) -> list[int]:
    """Geometric sweep of window lengths covering the factor range inclusively.

    The reference's own length is always part of the sweep when it lies in
    the range, so a verbatim occurrence is checked at its exact size.
    """
    lo, hi = factor_range
    if not (0 < lo <= hi):
        raise ParameterError("factor range must be positive")
    lengths = np.round(np.geomspace(lo * ref_len, hi * ref_len, steps)).astype(int)
    lengths[0] = int(round(lo * ref_len))
    lengths[-1] = int(round(hi * ref_len))
    if lo <= 1.0 <= hi:
        lengths = np.append(lengths, ref_len)
    lengths = np.unique(np.maximum(lengths, 2))
    return [int(v) for v in lengths]


def _profile_distance(ref: Series, win: Series, variant, weights, constraint, pointwise: bool) -> float:
    if pointwise:
        grid = np.linspace(0.0, len(win) - 1.0, len(ref))
        resampled = np.interp(grid, np.arange(len(win), dtype=np.float64), win.values)
        return euclidean(ref.values, resampled)
    return alignment_cost(ref, win, variant, weights, constraint)


def sliding_search(
    reference: ProfilePair,
    targets: list[ProfilePair],
    variant: DtwVariant = DtwVariant.DTW,
    weights: WeightParams | None = None,
    constraint: BandConstraint | None = None,
    factor_range: tuple[float, float] = (0.5, 2.0),
    stride: int | None = None,
    threshold: float = math.inf,
    pointwise: bool = False,
) -> list[MatchResult]:
    """Search every target for windows whose profiles match the reference.

    Window sizes sweep geometrically over ``factor_range`` times the
    reference length; window starts advance by ``stride`` (default one
    eighth of the reference).  A window is emitted when
    ``sqrt(d_c**2 + d_t**2) < threshold``; overlapping hits on the same
    target are merged keeping the smallest distance.  With ``pointwise``
    the profile distances are plain Euclidean on the length-resampled
    window instead of alignment costs.
    """
    ref_len = len(reference)
    if ref_len < 4:
        raise ParameterError("reference profile must have at least 4 samples")
    stride = stride if stride is not None else max(1, ref_len // 8)
    if stride < 1:
        raise ParameterError("stride must be at least 1")

    candidates: list[MatchResult] = []
    for t_idx, target in enumerate(targets):
        n = len(target)
        for wlen in window_lengths(ref_len, factor_range):
            if wlen > n:
                continue
            for start in range(0, n - wlen + 1, stride):
                win = target.window(start, start + wlen)
                d_c = _profile_distance(reference.curvature, win.curvature, variant, weights, constraint, pointwise)
                d_t = _profile_distance(reference.torsion, win.torsion, variant, weights, constraint, pointwise)
                combined = math.hypot(d_c, d_t)
                if combined < threshold:
                    candidates.append(
                        MatchResult(target=t_idx, start=start, end=start + wlen, d_c=d_c, d_t=d_t, combined=combined)
                    )

    # keep best non-overlapping windows per target
    results: list[MatchResult] = []
    for candidate in sorted(candidates, key=lambda r: (r.combined, r.target, r.start, r.end)):
        overlaps = any(
            r.target == candidate.target and candidate.start < r.end and r.start < candidate.end for r in results
        )
        if not overlaps:
            results.append(candidate)
    results.sort(key=lambda r: (r.target, r.start))
    return results
