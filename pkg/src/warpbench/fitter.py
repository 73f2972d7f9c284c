"""Simulated-annealing transformation of one signal into another.

The pipeline mirrors the deformation vocabulary of :mod:`warpbench.synthesis`:
first a single window scaling resizes the source to the target's length
(only the window location is searched; the width is pinned to half the
source and the factor follows from the length difference), then Gaussian
bumps are added one at a time, each found by its own annealing run, until
the Euclidean distance drops under the threshold
``T = (x / 100) * amplitude(target) * len(target)`` or the bump budget
(half the source sample count) is exhausted.

:func:`quantify_effects` turns a fit into percentages that flag whether the
pair differs by significant scaling and/or significant peaks (at 5%).
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import ParameterError
from .metrics import euclidean
from .series import Series, as_values, round_half_away
from .synthesis import PeakMode, add_gaussian_peak, scale_window_interpolated

__all__ = [
    "SAParams",
    "AcceptanceRecord",
    "ScalingRecord",
    "PeakRecord",
    "FitReport",
    "VariationProfile",
    "fit_scaling",
    "fit_peaks",
    "fit",
    "apply_fit_report",
    "quantify_effects",
]


@dataclass(frozen=True)
class SAParams:
    """Annealing schedule and proposal step sizes.

    The temperature follows ``T_k = T0 * cooling**k``; ``T0`` defaults to
    the initial objective value.  Step sizes are relative: location moves up
    to ``location_step`` of the signal length, widths by ``width_step`` of
    the current width, magnitudes by ``magnitude_step`` of the target
    amplitude.
    """

    initial_temperature: float | None = None
    cooling: float = 0.95
    iterations: int = 200
    location_step: float = 0.10
    width_step: float = 0.25
    magnitude_step: float = 0.20
    seed: int = 0

    def __post_init__(self):
        if not (0.0 < self.cooling < 1.0):
            raise ParameterError("cooling factor must be in (0, 1)")
        if self.iterations < 1:
            raise ParameterError("need at least one iteration per run")


@dataclass(frozen=True)
class AcceptanceRecord:
    """One annealing decision, kept so the acceptance rule can be replayed."""

    delta: float
    temperature: float
    u: float
    accepted: bool


@dataclass(frozen=True)
class ScalingRecord:
    location: int
    width: int
    s: float


@dataclass(frozen=True)
class PeakRecord:
    location: int
    width: int
    magnitude: float


@dataclass(frozen=True)
class VariationProfile:
    peak_effect: float
    scaling_effect: float
    significant_peaks: bool
    significant_scaling: bool


@dataclass(frozen=True)
class FitReport:
    """The ordered deformation operations discovered by the fitter."""

    scaling: ScalingRecord
    peaks: tuple[PeakRecord, ...]
    distance: float
    threshold: float
    converged: bool
    src_len: int
    tgt_len: int
    seed: int
    peak_mode: PeakMode = PeakMode.NORMALIZED
    acceptance_log: tuple[AcceptanceRecord, ...] = field(default=(), repr=False)


def _anneal(initial, objective, propose, params: SAParams, rng, log: list | None = None):
    """Minimise ``objective`` from ``initial`` under a geometric schedule.

    Returns the best state and value seen.  Worsening moves are accepted
    with probability ``exp(-delta / T_k)``.
    """
    current = initial
    current_val = objective(current)
    best, best_val = current, current_val
    t0 = params.initial_temperature if params.initial_temperature is not None else max(current_val, 1e-12)
    for k in range(params.iterations):
        temperature = max(t0 * params.cooling**k, 1e-300)
        candidate = propose(current, rng)
        value = objective(candidate)
        delta = value - current_val
        if delta <= 0:
            accepted, u = True, 0.0
        else:
            u = float(rng.uniform())
            accepted = u < math.exp(-delta / temperature)
        if log is not None:
            log.append(AcceptanceRecord(delta=delta, temperature=temperature, u=u, accepted=accepted))
        if accepted:
            current, current_val = candidate, value
            if current_val < best_val:
                best, best_val = current, current_val
    return best, best_val


def _fit_scaling(source_values, target_values, params, rng, log):
    n_src = len(source_values)
    n_tgt = len(target_values)
    width = int(round_half_away(0.5 * n_src))
    s = 1.0 + (n_tgt - n_src) / width
    if s <= 0:
        raise ParameterError("target is too short for the pinned scaling window")
    max_loc = n_src - 1 - width
    if max_loc < 0:
        raise ParameterError("source is too short to place the scaling window")

    def objective(loc):
        scaled = scale_window_interpolated(source_values, loc, width, s, n_tgt)
        return euclidean(scaled, target_values)

    step = max(1, int(round(params.location_step * n_src)))

    def propose(loc, rng):
        return int(np.clip(loc + rng.integers(-step, step + 1), 0, max_loc))

    initial = int(rng.integers(0, max_loc + 1))
    best_loc, _ = _anneal(initial, objective, propose, params, rng, log)
    scaled = scale_window_interpolated(source_values, best_loc, width, s, n_tgt)
    return scaled, ScalingRecord(location=best_loc, width=width, s=s)


def fit_scaling(source, target, sa: SAParams | None = None) -> tuple[Series, ScalingRecord]:
    """Resize ``source`` to the target's length with one window scaling.

    The window width is half the source length and the factor is forced by
    the length difference, so annealing only searches the window location.
    """
    sa = sa or SAParams()
    source_values = as_values(source, min_len=4, what="source")
    target_values = as_values(target, min_len=4, what="target")
    rng = np.random.default_rng(sa.seed)
    scaled, record = _fit_scaling(source_values, target_values, sa, rng, None)
    return Series(scaled), record


def _apply_peak(values, loc, width, magnitude, mode):
    peaked, _ = add_gaussian_peak(values, float(loc), int(width), float(magnitude), mode)
    return peaked.values


def _fit_peaks(current, target_values, threshold, params, rng, log, mode, budget=None):
    n = len(current)
    budget = budget if budget is not None else math.ceil(n / 2)
    amplitude = float(np.max(target_values) - np.min(target_values))
    if amplitude <= 0:
        raise ParameterError("target signal has zero amplitude")
    max_width = max(3, n // 4)
    loc_step = max(1, int(round(params.location_step * n)))
    mag_step = params.magnitude_step * amplitude

    def objective(peak):
        loc, width, mag = peak
        return euclidean(_apply_peak(current, loc, width, mag, mode), target_values)

    def propose(peak, rng):
        loc, width, mag = peak
        loc = int(np.clip(loc + rng.integers(-loc_step, loc_step + 1), 0, n - 1))
        w_step = max(1, int(round(params.width_step * width)))
        width = int(np.clip(width + rng.integers(-w_step, w_step + 1), 2, n))
        mag = float(mag + rng.uniform(-mag_step, mag_step))
        return (loc, width, mag)

    records: list[PeakRecord] = []
    distance = euclidean(current, target_values)
    runs = 0
    while distance >= threshold and runs < budget:
        runs += 1
        initial = (
            int(rng.integers(0, n)),
            int(rng.integers(2, max_width + 1)),
            float(rng.uniform(-amplitude, amplitude)),
        )
        best, best_val = _anneal(initial, objective, propose, params, rng, log)
        if best_val < distance:
            loc, width, mag = best
            current = _apply_peak(current, loc, width, mag, mode)
            distance = best_val
            records.append(PeakRecord(location=int(loc), width=int(width), magnitude=float(mag)))
    return current, records, distance


def fit_peaks(
    source,
    target,
    threshold: float,
    sa: SAParams | None = None,
    mode: PeakMode = PeakMode.NORMALIZED,
) -> tuple[Series, tuple[PeakRecord, ...], bool]:
    """Add annealed Gaussian bumps to ``source`` until it is within
    ``threshold`` of ``target`` (or the bump budget runs out).

    Returns the fitted series, the applied bump records in order, and a
    convergence flag.  The distance after each applied bump is
    non-increasing: a run whose best bump does not improve applies nothing.
    """
    sa = sa or SAParams()
    source_values = as_values(source, min_len=4, what="source")
    target_values = as_values(target, min_len=4, what="target")
    if len(source_values) != len(target_values):
        raise ParameterError("peak fitting requires equal lengths (scale first)")
    if threshold <= 0:
        raise ParameterError("threshold must be positive")
    rng = np.random.default_rng(sa.seed)
    fitted, records, distance = _fit_peaks(source_values, target_values, threshold, sa, rng, None, mode)
    return Series(fitted), tuple(records), distance < threshold


def fit(
    source,
    target,
    x: float = 1.0,
    sa: SAParams | None = None,
    mode: PeakMode = PeakMode.NORMALIZED,
    keep_log: bool = False,
) -> FitReport:
    """Two-step fit: scaling then peak addition, with threshold
    ``T = (x / 100) * (max(target) - min(target)) * len(target)``."""
    if x <= 0:
        raise ParameterError("accuracy percentage x must be positive")
    sa = sa or SAParams()
    source_values = as_values(source, min_len=4, what="source")
    target_values = as_values(target, min_len=4, what="target")
    amplitude = float(np.max(target_values) - np.min(target_values))
    if amplitude <= 0:
        raise ParameterError("target signal has zero amplitude")
    threshold = (x / 100.0) * amplitude * len(target_values)

    rng = np.random.default_rng(sa.seed)
    log: list | None = [] if keep_log else None
    scaled, scaling_record = _fit_scaling(source_values, target_values, sa, rng, log)
    fitted, peak_records, distance = _fit_peaks(
        scaled, target_values, threshold, sa, rng, log, mode,
        budget=math.ceil(len(source_values) / 2),
    )
    return FitReport(
        scaling=scaling_record,
        peaks=tuple(peak_records),
        distance=distance,
        threshold=threshold,
        converged=distance < threshold,
        src_len=len(source_values),
        tgt_len=len(target_values),
        seed=sa.seed,
        peak_mode=mode,
        acceptance_log=tuple(log) if log else (),
    )


def apply_fit_report(source, report: FitReport) -> Series:
    """Replay a fit's operations on the source; reproduces the fitted series
    bit-exactly."""
    values = as_values(source, min_len=4, what="source")
    rec = report.scaling
    out_len = len(values) + int(round_half_away(rec.width * (rec.s - 1.0)))
    current = scale_window_interpolated(values, rec.location, rec.width, rec.s, out_len)
    for peak in report.peaks:
        current = _apply_peak(current, peak.location, peak.width, peak.magnitude, report.peak_mode)
    return Series(current)


def quantify_effects(report: FitReport, target) -> VariationProfile:
    """Percentage effect of the fitted peaks and scaling, flagged at 5%.

    Peak effect sums ``|magnitude| * width`` over all bumps, normalised by
    the target amplitude times its length; scaling effect is the absolute
    window length change relative to the source length.
    """
    target_values = as_values(target, what="target")
    amplitude = float(np.max(target_values) - np.min(target_values))
    if amplitude <= 0:
        raise ParameterError("target signal has zero amplitude")
    length = len(target_values)
    peak_effect = 100.0 * sum(abs(p.magnitude) * p.width for p in report.peaks) / (amplitude * length)
    scaling_effect = 100.0 * abs(report.scaling.width * (report.scaling.s - 1.0)) / report.src_len
    return VariationProfile(
        peak_effect=peak_effect,
        scaling_effect=scaling_effect,
        significant_peaks=peak_effect >= 5.0,
        significant_scaling=scaling_effect >= 5.0,
    )
