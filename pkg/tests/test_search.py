import math

import numpy as np
import pytest

from warpbench.errors import ContractViolation, ParameterError
from warpbench.search import (
    MatchResult,
    ProfilePair,
    as_polyline,
    curvature_torsion,
    sliding_search,
    window_lengths,
)
from warpbench.series import Series


def helix(radius=2.0, pitch=0.5, n=200, turns=2.0):
    t = np.linspace(0, 2 * math.pi * turns, n)
    return np.stack([radius * np.cos(t), radius * np.sin(t), pitch * t], axis=1)


class TestCurvatureTorsion:
    def test_straight_line_is_flat(self):
        t = np.linspace(0, 1, 50)
        line = np.stack([t, 2 * t, 3 * t], axis=1)
        profile = curvature_torsion(line)
        assert np.allclose(profile.curvature.values, 0.0, atol=1e-12)
        assert np.allclose(profile.torsion.values, 0.0, atol=1e-12)

    def test_circle_curvature_matches_radius(self):
        r = 3.0
        t = np.linspace(0, 2 * math.pi, 200)
        circle = np.stack([r * np.cos(t), r * np.sin(t), np.zeros_like(t)], axis=1)
        profile = curvature_torsion(circle[:-1])
        interior = profile.curvature.values[5:-5]
        assert np.allclose(interior, 1.0 / r, rtol=0.02)
        assert np.allclose(profile.torsion.values[5:-5], 0.0, atol=1e-6)

    def test_helix_curvature_and_torsion(self):
        r, c = 2.0, 0.5
        profile = curvature_torsion(helix(radius=r, pitch=c, n=200))
        interior = slice(5, -5)
        assert np.allclose(profile.curvature.values[interior], r / (r**2 + c**2), rtol=0.02)
        assert np.allclose(profile.torsion.values[interior], c / (r**2 + c**2), rtol=0.02)

    def test_degenerate_polylines_rejected(self):
        with pytest.raises(ParameterError):
            as_polyline(np.zeros((4, 3)))
        with pytest.raises(ParameterError):
            as_polyline(np.array([[0, 0, 0], [0, 0, 0], [1, 1, 1], [2, 2, 2], [3, 3, 3]], dtype=float))
        with pytest.raises(ParameterError):
            as_polyline(np.zeros((10, 2)))


class TestMatchResult:
    def test_three_four_five_combined(self):
        m = MatchResult(target=0, start=0, end=10, d_c=3.0, d_t=4.0, combined=5.0)
        assert m.combined == 5.0

    def test_inconsistent_combined_rejected(self):
        with pytest.raises(ContractViolation):
            MatchResult(target=0, start=0, end=10, d_c=3.0, d_t=4.0, combined=6.0)


class TestWindowLengths:
    def test_sweep_covers_inclusive_endpoints(self):
        for ref_len in (16, 40, 100, 127):
            lengths = window_lengths(ref_len)
            assert lengths[0] == round(0.5 * ref_len)
            assert lengths[-1] == 2 * ref_len
            assert ref_len in lengths
            assert all(a < b for a, b in zip(lengths, lengths[1:]))
            assert len(lengths) <= 9


class TestSlidingSearch:
    def make_profiles(self, seed=0, n=320):
        rng = np.random.default_rng(seed)
        return ProfilePair(
            curvature=Series(np.abs(rng.uniform(0.1, 2.0, n))),
            torsion=Series(rng.uniform(-1.0, 1.0, n)),
        )

    def test_verbatim_embedding_found_at_zero_distance(self):
        target = self.make_profiles(seed=1)
        ref = target.window(96, 128)  # 32 samples embedded at offset 96
        matches = sliding_search(ref, [target], stride=4, threshold=1e-9)
        assert any(m.start == 96 and m.combined == 0.0 for m in matches)

    def test_shrinking_threshold_never_adds_matches(self):
        target = self.make_profiles(seed=2)
        ref = self.make_profiles(seed=3, n=32)
        loose = sliding_search(ref, [target], stride=8, threshold=50.0)
        tight = sliding_search(ref, [target], stride=8, threshold=10.0)
        loose_keys = {(m.target, m.start, m.end) for m in loose}
        tight_candidates = {(m.target, m.start, m.end) for m in tight}
        # every window passing the tight threshold also passes the loose one
        # (merging picks per-overlap minima, which are threshold-independent)
        assert tight_candidates <= loose_keys

    def test_merging_keeps_minimum_distance_window(self):
        target = self.make_profiles(seed=4)
        ref = target.window(100, 132)
        matches = sliding_search(ref, [target], stride=2, threshold=100.0)
        starts = [m.start for m in matches]
        assert len(starts) == len(set(starts))
        for a in matches:
            for b in matches:
                if a is not b and a.target == b.target:
                    assert a.end <= b.start or b.end <= a.start  # non-overlapping

    def test_pointwise_mode(self):
        target = self.make_profiles(seed=5)
        ref = target.window(50, 82)
        matches = sliding_search(ref, [target], stride=2, threshold=1e-9, pointwise=True)
        assert any(m.start == 50 and m.combined == 0.0 for m in matches)

    def test_combined_is_hypot(self):
        target = self.make_profiles(seed=6)
        ref = self.make_profiles(seed=7, n=24)
        for m in sliding_search(ref, [target], stride=16, threshold=math.inf):
            assert m.combined == pytest.approx(math.hypot(m.d_c, m.d_t), rel=1e-12)
