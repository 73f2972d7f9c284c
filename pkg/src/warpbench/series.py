"""Core value types: uniformly sampled 1-D signals and time correspondences.

A :class:`Series` is the unit every other module works on.  A
:class:`GroundTruthMapping` records, for each sample of a deformed (target)
signal, the real-valued position on the source signal it was taken from; it
is the reference answer that alignment quality is scored against.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import ParameterError

__all__ = [
    "Series",
    "GroundTruthMapping",
    "as_values",
    "round_half_away",
]


def as_values(x, min_len: int = 1, what: str = "series") -> np.ndarray:
    """Coerce a Series or array-like to a validated 1-D float64 array."""
    if isinstance(x, Series):
        values = x.values
    else:
        values = np.asarray(x, dtype=np.float64)
    if values.ndim != 1:
        raise ParameterError(f"{what} must be one-dimensional, got shape {values.shape}")
    if len(values) < min_len:
        raise ParameterError(f"{what} must have at least {min_len} samples, got {len(values)}")
    if not np.all(np.isfinite(values)):
        raise ParameterError(f"{what} contains non-finite values")
    return values


def round_half_away(x) -> np.ndarray:
    """Round to the nearest integer with halves going away from zero."""
    x = np.asarray(x, dtype=np.float64)
    return (np.sign(x) * np.floor(np.abs(x) + 0.5)).astype(np.int64)


@dataclass(frozen=True)
class Series:
    """A uniformly sampled 1-D signal.

    Values are stored as an immutable float64 array; ``name`` is an optional
    label carried through file round-trips.
    """

    values: np.ndarray
    name: str | None = None

    def __post_init__(self):
        values = np.asarray(self.values, dtype=np.float64)
        if values.ndim != 1:
            raise ParameterError(f"series values must be 1-D, got shape {values.shape}")
        if not np.all(np.isfinite(values)):
            raise ParameterError("series values must be finite")
        values = values.copy()
        values.setflags(write=False)
        object.__setattr__(self, "values", values)

    def __len__(self) -> int:
        return len(self.values)

    def __array__(self, dtype=None, copy=None):
        return np.asarray(self.values, dtype=dtype)


@dataclass(frozen=True)
class GroundTruthMapping:
    """True source position for every target index of a deformed signal.

    ``src_pos[j]`` is the (possibly fractional) position on the source that
    target sample ``j`` was taken from.  Positions are monotone
    non-decreasing and stay within ``[0, src_len - 1]``.
    """

    src_pos: np.ndarray
    src_len: int
    tgt_len: int = field(default=-1)

    def __post_init__(self):
        pos = np.asarray(self.src_pos, dtype=np.float64)
        if pos.ndim != 1:
            raise ParameterError("src_pos must be 1-D")
        tgt_len = self.tgt_len if self.tgt_len >= 0 else len(pos)
        if len(pos) != tgt_len:
            raise ParameterError(f"src_pos has {len(pos)} entries but tgt_len is {tgt_len}")
        if tgt_len < 1:
            raise ParameterError("mapping must cover at least one target sample")
        if self.src_len < 1:
            raise ParameterError("src_len must be positive")
        if np.any(np.diff(pos) < -1e-9):
            raise ParameterError("src_pos must be monotone non-decreasing")
        if pos.min() < -1e-9 or pos.max() > self.src_len - 1 + 1e-9:
            raise ParameterError("src_pos must lie within [0, src_len - 1]")
        pos = np.clip(pos, 0.0, float(self.src_len - 1))
        pos.setflags(write=False)
        object.__setattr__(self, "src_pos", pos)
        object.__setattr__(self, "tgt_len", tgt_len)

    @classmethod
    def identity(cls, n: int) -> "GroundTruthMapping":
        return cls(src_pos=np.arange(n, dtype=np.float64), src_len=n, tgt_len=n)

    def rounded(self) -> np.ndarray:
        """Integer source indices under half-away-from-zero rounding."""
        return np.clip(round_half_away(self.src_pos), 0, self.src_len - 1)

    def max_displacement(self) -> float:
        """Largest |j - src_pos[j]|, the worst time shift the deformation caused."""
        return float(np.max(np.abs(np.arange(self.tgt_len) - self.src_pos)))
