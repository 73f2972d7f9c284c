"""Synthetic signal generation and controllable deformations.

Two halves:

* :func:`generate_signal` builds a realistic reference signal by placing
  peak/valley anchors at random spacings and interpolating between them with
  random two-term power curves ``y = c1*t**a + c2*t**b``, then adding
  uniform noise.
* The deformation operations (:func:`scale_window`,
  :func:`scale_window_length_preserving`, :func:`add_gaussian_peak`,
  :func:`compose_variation`) turn a reference into a target while recording
  the exact time correspondence as a :class:`~warpbench.series.GroundTruthMapping`.

Every operation is a pure function of its inputs and seed.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .errors import ParameterError
from .series import GroundTruthMapping, Series, as_values, round_half_away

__all__ = [
    "GeneratorSpec",
    "PeakMode",
    "VariationClass",
    "ScaleStep",
    "PeakStep",
    "DeformationPlan",
    "VariationParams",
    "SignalPair",
    "generate_signal",
    "generate_signal_details",
    "scale_window",
    "scale_window_length_preserving",
    "scale_window_interpolated",
    "gaussian_profile",
    "add_gaussian_peak",
    "compose_mappings",
    "compose_variation",
    "apply_plan",
]


@dataclass(frozen=True)
class GeneratorSpec:
    """Parameters of the anchor-and-interpolate signal generator.

    ``length`` samples are produced with magnitudes anchored in
    ``[min_value, max_value]``, successive anchors spaced by an integer drawn
    uniformly from ``[spacing_min, spacing_max]``, segments interpolated by
    ``y = c1*t**a + c2*t**b`` with exponents drawn from ``exponent_range``,
    and per-sample uniform noise of amplitude
    ``noise_fraction * (max_value - min_value)``.
    """

    length: int
    min_value: float
    max_value: float
    spacing_min: int
    spacing_max: int
    exponent_range: tuple[float, float] = (0.1, 2.0)
    noise_fraction: float = 0.2
    seed: int = 0

    def __post_init__(self):
        if self.length < 2:
            raise ParameterError("length must be at least 2")
        if not self.max_value > self.min_value:
            raise ParameterError("max_value must exceed min_value")
        if not (1 <= self.spacing_min <= self.spacing_max < self.length):
            raise ParameterError("need 1 <= spacing_min <= spacing_max < length")
        lo, hi = self.exponent_range
        if not (0.0 < lo <= hi <= 3.0):
            raise ParameterError("exponent_range must lie within (0, 3]")
        if not (0.0 <= self.noise_fraction <= 0.5):
            raise ParameterError("noise_fraction must be in [0, 0.5]")


class PeakMode(str, enum.Enum):
    """Shape of an added Gaussian bump.

    ``BROAD`` uses ``h * exp(-((j - i) / (2 n))**2)``, which keeps about 94%
    of the height at the window edges.  ``NORMALIZED`` uses a standard
    Gaussian with sigma = width / 6, decaying below 2% of the height at the
    edges; it is the default because the bump then stays visually local to
    its window.
    """

    BROAD = "broad"
    NORMALIZED = "normalized"


class VariationClass(str, enum.Enum):
    SCALED = "scaled"
    SCALED_SAME_SIZE = "scaled_same_size"
    RGP = "rgp"
    MRGP = "mrgp"
    SCALED_RGP = "scaled_rgp"
    SCALED_MRGP = "scaled_mrgp"


@dataclass(frozen=True)
class ScaleStep:
    """Scale the window [w0, w1] by factor s (length-preserving rescales the rest)."""

    w0: int
    w1: int
    s: float
    length_preserving: bool = False


@dataclass(frozen=True)
class PeakStep:
    """Add a Gaussian bump of height ``height`` and width ``width`` at ``center``."""

    center: float
    width: int
    height: float
    mode: PeakMode = PeakMode.NORMALIZED


@dataclass(frozen=True)
class DeformationPlan:
    """Concrete, replayable sequence of deformation steps."""

    steps: tuple = ()
    seed: int | None = None


@dataclass(frozen=True)
class VariationParams:
    """Ranges the composer draws concrete deformation parameters from.

    Fractions are relative to the signal length (windows, peak widths) or to
    the signal amplitude range (peak heights).  ``s_dead_zone`` is resampled
    away so a "scaled" pair always carries a non-trivial scaling.
    """

    window_frac: tuple[float, float] = (0.2, 0.5)
    s_range: tuple[float, float] = (0.5, 1.5)
    s_dead_zone: tuple[float, float] | None = (0.95, 1.05)
    peak_height_frac: tuple[float, float] = (0.2, 0.5)
    peak_width_frac: tuple[float, float] = (0.05, 0.2)
    peak_count: tuple[int, int] = (2, 4)
    peak_mode: PeakMode = PeakMode.NORMALIZED


@dataclass(frozen=True)
class SignalPair:
    """A reference/target pair with known correspondence and provenance."""

    reference: Series
    target: Series
    ground_truth: GroundTruthMapping
    plan: DeformationPlan
    variation_class: VariationClass

    def __post_init__(self):
        if self.ground_truth.src_len != len(self.reference):
            raise ParameterError("ground truth src_len does not match reference length")
        if self.ground_truth.tgt_len != len(self.target):
            raise ParameterError("ground truth tgt_len does not match target length")


# ---------------------------------------------------------------------------
# signal generation
# ---------------------------------------------------------------------------

_EXPONENT_SEPARATION = 0.05  # keep the 2x2 endpoint system well-conditioned
_SEGMENT_TRIES = 30  # exponent redraws before settling for the least-bowing curve
_OVERSHOOT_MARGIN = 0.25  # allowed segment excursion outside (min, max), in range units


def _power_segment(x0: int, y0: float, x1: int, y1: float, a: float, b: float) -> np.ndarray:
    """Evaluate y = c1*t**a + c2*t**b through (x0, y0) and (x1, y1).

    Abscissae are the global sample positions shifted by one so fractional
    exponents never see t = 0; anchors far from the origin keep the curve
    close to the straight chord, anchors near it bow more.  Returns the
    values at x0+1 .. x1 (left endpoint excluded, right included).
    """
    t0, t1 = 1.0 + x0, 1.0 + x1
    # c1*t0**a + c2*t0**b = y0 ;  c1*t1**a + c2*t1**b = y1
    det = t0**a * t1**b - t0**b * t1**a
    c1 = (y0 * t1**b - y1 * t0**b) / det
    c2 = (y1 * t0**a - y0 * t1**a) / det
    t = np.arange(x0 + 2, x1 + 2, dtype=np.float64)
    return c1 * t**a + c2 * t**b


def generate_signal_details(spec: GeneratorSpec) -> tuple[Series, np.ndarray]:
    """Like :func:`generate_signal`, also returning the anchor list.

    The second element is an ``(n_anchors, 2)`` array of (position, value)
    rows; successive positions differ by draws from
    ``[spacing_min, spacing_max]``.  The final anchor may sit past the end of
    the series, in which case its segment is truncated at the last sample.
    """
    rng = np.random.default_rng(spec.seed)
    length = spec.length
    lo, hi = spec.min_value, spec.max_value
    exp_lo, exp_hi = spec.exponent_range

    margin = _OVERSHOOT_MARGIN * (hi - lo)
    bound_lo, bound_hi = lo - margin, hi + margin

    anchors = [(0, rng.uniform(lo, hi))]
    values = [anchors[0][1]]
    while len(values) < length:
        prev_x, prev_y = anchors[-1]
        dx = int(rng.integers(spec.spacing_min, spec.spacing_max + 1))
        y = rng.uniform(lo, hi)
        # power curves through two points can bow far outside the endpoint
        # interval (worst near the origin); redraw exponents until the
        # segment respects the magnitude range, keeping the best attempt
        segment, best_excess = None, np.inf
        for _ in range(_SEGMENT_TRIES):
            a = rng.uniform(exp_lo, exp_hi)
            b = rng.uniform(exp_lo, exp_hi)
            while abs(a - b) <= _EXPONENT_SEPARATION:
                b = rng.uniform(exp_lo, exp_hi)
            candidate = _power_segment(int(prev_x), prev_y, int(prev_x) + dx, y, a, b)
            excess = max(0.0, bound_lo - candidate.min(), candidate.max() - bound_hi)
            if excess < best_excess:
                segment, best_excess = candidate, excess
            if excess == 0.0:
                break
        values.extend(segment.tolist())
        anchors.append((prev_x + dx, y))

    signal = np.asarray(values[:length], dtype=np.float64)
    amplitude = hi - lo
    noise = rng.uniform(-spec.noise_fraction * amplitude, spec.noise_fraction * amplitude, size=length)
    signal = signal + noise
    return Series(signal, name=f"gen-{spec.seed}"), np.asarray(anchors, dtype=np.float64)


def generate_signal(spec: GeneratorSpec) -> Series:
    """Generate a realistic synthetic signal of exactly ``spec.length`` samples."""
    series, _ = generate_signal_details(spec)
    return series


# ---------------------------------------------------------------------------
# window scaling
# ---------------------------------------------------------------------------


def _check_window(n: int, w0: int, w1: int, s: float) -> None:
    if not (0 <= w0 < w1 <= n - 1):
        raise ParameterError(f"window [{w0}, {w1}] out of bounds for length {n}")
    if s <= 0:
        raise ParameterError("scaling factor must be positive")
    if (w1 - w0) * s < 1.0:
        raise ParameterError("scaling collapses the window below 2 samples")


def scale_window(x, w0: int, w1: int, s: float) -> tuple[Series, GroundTruthMapping]:
    """Scale the window ``[w0, w1]`` of ``x`` by ``s``, shifting the tail.

    The target length becomes ``len(x) + round((w1 - w0) * (s - 1))``.  Each
    target sample ``j`` is copied from the source position::

        i = j                          for j < w0
        i = w0 + (j - w0) / s          for w0 <= j <= w0 + (w1 - w0) * s
        i = j - (w1 - w0) * (s - 1)    otherwise

    rounded half-away-from-zero when picking the sample; the returned
    mapping keeps the unrounded positions.
    """
    values = as_values(x, min_len=2)
    n = len(values)
    _check_window(n, w0, w1, s)
    width = w1 - w0
    delta = int(round_half_away(width * (s - 1.0)))
    out_len = n + delta
    if out_len < 2:
        raise ParameterError("scaling collapses the signal below 2 samples")

    j = np.arange(out_len, dtype=np.float64)
    mid_end = w0 + width * s
    src = np.where(
        j < w0,
        j,
        np.where(j <= mid_end, w0 + (j - w0) / s, j - width * (s - 1.0)),
    )
    src = np.clip(src, 0.0, n - 1.0)
    mapping = GroundTruthMapping(src_pos=src, src_len=n, tgt_len=out_len)
    target = values[mapping.rounded()]
    return Series(target), mapping


def scale_window_length_preserving(x, w0: int, w1: int, s: float) -> tuple[Series, GroundTruthMapping]:
    """Scale ``[w0, w1]`` by ``s`` and the remaining sections by the
    compensating factor ``s' = (L - W*s) / (L - W)`` so the length stays L.

    Target sample ``j`` is copied from::

        i = j / s'                             for j < w0 * s'
        i = w0 + (j - w0 * s') / s             for w0 * s' <= j < w0 * s' + W * s
        i = w1 + (j - w0 * s' - W * s) / s'    otherwise
    """
    values = as_values(x, min_len=2)
    n = len(values)
    _check_window(n, w0, w1, s)
    width = w1 - w0
    s_rest = (n - width * s) / (n - width)
    if s_rest <= 0:
        raise ParameterError("scaling factor leaves no room for the remaining sections")

    j = np.arange(n, dtype=np.float64)
    b0 = w0 * s_rest
    b1 = b0 + width * s
    src = np.where(
        j < b0,
        j / s_rest,
        np.where(j < b1, w0 + (j - b0) / s, w1 + (j - b1) / s_rest),
    )
    src = np.clip(src, 0.0, n - 1.0)
    mapping = GroundTruthMapping(src_pos=src, src_len=n, tgt_len=n)
    target = values[mapping.rounded()]
    return Series(target), mapping


def scale_window_interpolated(x, start: int, width: int, s: float, out_len: int) -> np.ndarray:
    """Interpolating variant of window scaling used by the fitting pipeline.

    The window ``[start, start + width]`` is resampled by linear
    interpolation to ``round(width * s)`` spacings, the flanks are kept, and
    the concatenation is linearly resampled to exactly ``out_len`` samples.
    """
    values = as_values(x, min_len=2)
    n = len(values)
    if width < 1 or start < 0 or start + width > n - 1:
        raise ParameterError(f"window [{start}, {start + width}] out of bounds for length {n}")
    if s <= 0:
        raise ParameterError("scaling factor must be positive")
    new_width = max(1, int(round_half_away(width * s)))
    window = values[start : start + width + 1]
    scaled = np.interp(
        np.linspace(0.0, width, new_width + 1),
        np.arange(width + 1, dtype=np.float64),
        window,
    )
    stitched = np.concatenate([values[:start], scaled, values[start + width + 1 :]])
    if len(stitched) == out_len:
        return stitched
    return np.interp(
        np.linspace(0.0, len(stitched) - 1.0, out_len),
        np.arange(len(stitched), dtype=np.float64),
        stitched,
    )


# ---------------------------------------------------------------------------
# Gaussian peaks
# ---------------------------------------------------------------------------


def gaussian_profile(j, center: float, width: float, height: float, mode: PeakMode = PeakMode.NORMALIZED) -> np.ndarray:
    """Evaluate the bump profile at positions ``j``."""
    j = np.asarray(j, dtype=np.float64)
    if mode == PeakMode.BROAD:
        return height * np.exp(-(((j - center) / (2.0 * width)) ** 2))
    return height * np.exp(-0.5 * ((j - center) / (width / 6.0)) ** 2)


def add_gaussian_peak(x, center: float, width: int, height: float, mode: PeakMode = PeakMode.NORMALIZED) -> tuple[Series, GroundTruthMapping]:
    """Add a Gaussian bump centred at ``center`` over the window
    ``[center - width/2, center + width/2]`` (clipped to the series).

    Negative ``height`` subtracts a bump.  Time is not distorted, so the
    returned mapping is the identity.
    """
    values = as_values(x, min_len=2)
    n = len(values)
    if width < 2:
        raise ParameterError("peak width must be at least 2")
    w0 = center - width / 2.0
    w1 = center + width / 2.0
    j_lo = max(0, int(math.ceil(w0)))
    j_hi = min(n - 1, int(math.floor(w1)))
    target = values.copy()
    if j_lo <= j_hi and height != 0.0:
        j = np.arange(j_lo, j_hi + 1, dtype=np.float64)
        target[j_lo : j_hi + 1] += gaussian_profile(j, center, width, height, mode)
    return Series(target), GroundTruthMapping.identity(n)


# ---------------------------------------------------------------------------
# composition
# ---------------------------------------------------------------------------


def compose_mappings(outer: GroundTruthMapping, inner: GroundTruthMapping) -> GroundTruthMapping:
    """Compose two correspondences: first deform by ``outer``, then ``inner``.

    ``result[j] = outer.src_pos`` evaluated (with linear interpolation) at
    the fractional position ``inner.src_pos[j]``.
    """
    if outer.tgt_len != inner.src_len:
        raise ParameterError(
            f"cannot compose: outer covers {outer.tgt_len} targets, inner expects {inner.src_len} sources"
        )
    grid = np.arange(outer.tgt_len, dtype=np.float64)
    src = np.interp(inner.src_pos, grid, outer.src_pos)
    return GroundTruthMapping(src_pos=src, src_len=outer.src_len, tgt_len=inner.tgt_len)


def apply_plan(x, plan: DeformationPlan) -> tuple[Series, GroundTruthMapping]:
    """Replay a concrete deformation plan, composing the ground truth."""
    current = Series(as_values(x, min_len=2))
    mapping = GroundTruthMapping.identity(len(current))
    for step in plan.steps:
        if isinstance(step, ScaleStep):
            if step.length_preserving:
                current, step_map = scale_window_length_preserving(current, step.w0, step.w1, step.s)
            else:
                current, step_map = scale_window(current, step.w0, step.w1, step.s)
        elif isinstance(step, PeakStep):
            current, step_map = add_gaussian_peak(current, step.center, step.width, step.height, step.mode)
        else:
            raise ParameterError(f"unknown deformation step {step!r}")
        mapping = compose_mappings(mapping, step_map)
    return current, mapping


def _draw_scale_step(rng: np.random.Generator, n: int, params: VariationParams, length_preserving: bool) -> ScaleStep:
    frac = rng.uniform(*params.window_frac)
    width = max(2, int(round(frac * n)))
    width = min(width, n - 2)
    w0 = int(rng.integers(0, n - width))

    def admissible(s):
        if params.s_dead_zone is not None and params.s_dead_zone[0] < s < params.s_dead_zone[1]:
            return False
        return not (length_preserving and n - width * s <= 0)

    s = rng.uniform(*params.s_range)
    for _ in range(100):
        if admissible(s):
            break
        s = rng.uniform(*params.s_range)
    else:
        raise ParameterError("no admissible scaling factor in the configured range")
    return ScaleStep(w0=w0, w1=w0 + width, s=float(s), length_preserving=length_preserving)


def _draw_peak_step(rng: np.random.Generator, n: int, amplitude: float, params: VariationParams) -> PeakStep:
    frac = rng.uniform(*params.peak_width_frac)
    width = max(2, int(round(frac * n)))
    center = int(rng.integers(width // 2, max(width // 2 + 1, n - width // 2)))
    height = rng.uniform(*params.peak_height_frac) * amplitude
    if rng.uniform() < 0.5:
        height = -height
    return PeakStep(center=float(center), width=width, height=float(height), mode=params.peak_mode)


def compose_variation(
    x,
    variation: VariationClass,
    params: VariationParams | None = None,
    seed: int = 0,
) -> SignalPair:
    """Deform ``x`` according to a named variation class.

    Scaling classes apply one window scaling (length-preserving only for
    ``SCALED_SAME_SIZE``); peak classes add one (RGP) or ``peak_count``
    (MRGP) Gaussian bumps at random admissible locations; the combined
    classes scale first and then add peaks.  Deterministic given ``seed``.
    """
    params = params or VariationParams()
    reference = Series(as_values(x, min_len=4), name=getattr(x, "name", None))
    rng = np.random.default_rng(seed)
    n = len(reference)
    amplitude = float(np.max(reference.values) - np.min(reference.values))
    if amplitude <= 0:
        raise ParameterError("reference signal has zero amplitude")

    variation = VariationClass(variation)
    steps: list = []
    if variation in (VariationClass.SCALED, VariationClass.SCALED_RGP, VariationClass.SCALED_MRGP):
        steps.append(_draw_scale_step(rng, n, params, length_preserving=False))
    elif variation is VariationClass.SCALED_SAME_SIZE:
        steps.append(_draw_scale_step(rng, n, params, length_preserving=True))

    if variation in (VariationClass.RGP, VariationClass.SCALED_RGP):
        n_peaks = 1
    elif variation in (VariationClass.MRGP, VariationClass.SCALED_MRGP):
        lo, hi = params.peak_count
        if lo < 2:
            raise ParameterError("MRGP classes need at least 2 peaks")
        n_peaks = int(rng.integers(lo, hi + 1))
    else:
        n_peaks = 0

    # peaks land on the (possibly scaled) signal, so draw against its length
    scaled_len = n
    if steps and not steps[0].length_preserving:
        scaled_len = n + int(round_half_away((steps[0].w1 - steps[0].w0) * (steps[0].s - 1.0)))
    for _ in range(n_peaks):
        steps.append(_draw_peak_step(rng, scaled_len, amplitude, params))

    plan = DeformationPlan(steps=tuple(steps), seed=seed)
    target, mapping = apply_plan(reference, plan)
    return SignalPair(
        reference=reference,
        target=Series(target.values, name=None if reference.name is None else f"{reference.name}-{variation.value}"),
        ground_truth=mapping,
        plan=plan,
        variation_class=variation,
    )
