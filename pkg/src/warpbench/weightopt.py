"""Monte-Carlo search for the weight steepness of the weighted variants.

Samples candidate steepness values uniformly, scores each by aligning a
batch of signal pairs and averaging the chosen quality measure, and keeps
the argmin.  Ties go to the smaller steepness so results are reproducible.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from . import metrics
from .dtw import DtwVariant, WeightParams, align
from .errors import ParameterError
from .synthesis import SignalPair

__all__ = ["WeightObjective", "WeightSearchConfig", "optimize_g"]


class WeightObjective(str, enum.Enum):
    ADM = "adm"
    ADT = "adt"


@dataclass(frozen=True)
class WeightSearchConfig:
    samples: int = 100
    g_range: tuple[float, float] = (0.01, 1.0)
    objective: WeightObjective = WeightObjective.ADM
    seed: int = 0

    def __post_init__(self):
        if self.samples < 1:
            raise ParameterError("need at least one sample")
        lo, hi = self.g_range
        if not (0 < lo <= hi):
            raise ParameterError("g_range must be positive")


def _batch_objective(pairs, variant, g, objective) -> float:
    total = 0.0
    for pair in pairs:
        alignment = align(pair.reference, pair.target, variant, weights=WeightParams(g=g))
        if objective is WeightObjective.ADM:
            total += metrics.adm(alignment, pair.reference, pair.target)
        else:
            total += metrics.adt(alignment, pair.ground_truth)
    return total / len(pairs)


def sample_g(cfg: WeightSearchConfig) -> np.ndarray:
    """The candidate steepness sequence for a config (prefix-stable in K)."""
    rng = np.random.default_rng(cfg.seed)
    lo, hi = cfg.g_range
    return np.array([rng.uniform(lo, hi) for _ in range(cfg.samples)])


def optimize_g(
    pairs: list[SignalPair],
    variant: DtwVariant,
    cfg: WeightSearchConfig | None = None,
) -> tuple[float, float]:
    """Return the best steepness and its average objective over ``pairs``."""
    cfg = cfg or WeightSearchConfig()
    variant = DtwVariant(variant)
    if not variant.weighted:
        raise ParameterError("weight optimization only applies to wdtw / wddtw")
    if not pairs:
        raise ParameterError("need at least one signal pair")

    best_g = None
    best_value = np.inf
    for g in sample_g(cfg):
        value = _batch_objective(pairs, variant, float(g), cfg.objective)
        if value < best_value or (value == best_value and g < best_g):
            best_g, best_value = float(g), value
    return best_g, best_value
