"""Alignment quality measures.

``adm`` scores how well magnitudes agree along a warping path; ``adt``
scores how close the path is to the known time correspondence; ``aadft``
scores how accurately marked events propagate through the alignment.
Smaller is better for all three.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .dtw import Alignment
from .errors import ContractViolation, ParameterError
from .series import GroundTruthMapping, as_values

__all__ = ["EventMarks", "adm", "adt", "aadft", "euclidean"]


@dataclass(frozen=True)
class EventMarks:
    """Paired event annotations: indices on the reference and the true
    matching indices on the target."""

    reference_marks: tuple[int, ...]
    true_target_marks: tuple[int, ...]

    def __post_init__(self):
        ref = tuple(int(v) for v in self.reference_marks)
        tgt = tuple(int(v) for v in self.true_target_marks)
        if len(ref) != len(tgt):
            raise ParameterError("mark lists must have equal length")
        if any(b <= a for a, b in zip(ref, ref[1:])) or any(b <= a for a, b in zip(tgt, tgt[1:])):
            raise ParameterError("marks must be strictly increasing")
        object.__setattr__(self, "reference_marks", ref)
        object.__setattr__(self, "true_target_marks", tgt)


def adm(alignment: Alignment, x, y) -> float:
    """Aggregate magnitude distance: sum of |x_i - y_j| along the path.

    Always computed on the raw magnitudes, whatever variant produced the
    alignment.
    """
    xv = as_values(x, what="x")
    yv = as_values(y, what="y")
    path = alignment.path
    if path[-1, 0] != len(xv) - 1 or path[-1, 1] != len(yv) - 1:
        raise ContractViolation("alignment path does not match the series lengths")
    return float(np.sum(np.abs(xv[path[:, 0]] - yv[path[:, 1]])))


def adt(alignment: Alignment, gt: GroundTruthMapping, use_rounded: bool = False) -> float:
    """Aggregate time distance: sum of |i - true source position of j|.

    Uses the fractional ground-truth positions unless ``use_rounded``.
    """
    if gt.tgt_len != alignment.n:
        raise ParameterError(f"ground truth covers {gt.tgt_len} targets, path ends at {alignment.n}")
    if gt.src_len != alignment.m:
        raise ParameterError(f"ground truth expects {gt.src_len} sources, path ends at {alignment.m}")
    pos = gt.rounded().astype(np.float64) if use_rounded else gt.src_pos
    path = alignment.path
    return float(np.sum(np.abs(path[:, 0] - pos[path[:, 1]])))


def aadft(alignment: Alignment, marks: EventMarks) -> float:
    """Aggregate absolute difference between alignment-propagated and true
    event positions.

    Each reference mark propagates to the mean of the target indices the
    path matches it with.
    """
    path = alignment.path
    m, n = alignment.m, alignment.n
    total = 0.0
    for ref_mark, true_mark in zip(marks.reference_marks, marks.true_target_marks):
        if not (0 <= ref_mark < m and 0 <= true_mark < n):
            raise ParameterError("marks out of bounds for the aligned series")
        matched = path[path[:, 0] == ref_mark, 1]
        if len(matched) == 0:
            raise ContractViolation(f"reference mark {ref_mark} not touched by the path")
        total += abs(float(np.mean(matched)) - true_mark)
    return total


def euclidean(x, y) -> float:
    """Plain Euclidean distance between equal-length signals."""
    xv = as_values(x, what="x")
    yv = as_values(y, what="y")
    if len(xv) != len(yv):
        raise ParameterError(f"length mismatch: {len(xv)} vs {len(yv)}")
    return math.sqrt(float(np.sum((xv - yv) ** 2)))
