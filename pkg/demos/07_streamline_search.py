"""Sliding-window pattern search over curvature/torsion profiles.

A synthetic "streamline" embeds two swirl segments (tight helices) in a
gentler carrier curve.  Reducing the 3-D polylines to curvature/torsion
profiles and sliding a reference swirl over them finds both occurrences.
"""
import math

import numpy as np

from warpbench import curvature_torsion, sliding_search


def helix(n, radius, pitch, turns, origin=(0.0, 0.0, 0.0)):
    t = np.linspace(0, 2 * math.pi * turns, n)
    return np.stack(
        [origin[0] + radius * np.cos(t), origin[1] + radius * np.sin(t), origin[2] + pitch * t], axis=1
    )


def gentle_arc(n, radius=20.0, z_slope=0.05):
    t = np.linspace(0, math.pi / 3, n)
    return np.stack([radius * np.cos(t), radius * np.sin(t), z_slope * np.arange(n)], axis=1)


# target streamline: arc + swirl + arc + swirl + arc
swirl_a = helix(60, radius=1.0, pitch=0.3, turns=3)
swirl_b = helix(60, radius=1.1, pitch=0.28, turns=3)
segments = [gentle_arc(80), swirl_a, gentle_arc(70), swirl_b, gentle_arc(60)]
offset = np.zeros(3)
placed = []
for seg in segments:
    seg = seg - seg[0] + offset
    placed.append(seg)
    offset = seg[-1] + (seg[-1] - seg[-2])  # continue in the leaving direction
target_line = np.concatenate(placed)
print(f"target streamline: {len(target_line)} points (swirls at ~80-140 and ~210-270)")

reference_profiles = curvature_torsion(helix(60, radius=1.0, pitch=0.3, turns=3))
target_profiles = curvature_torsion(target_line)

matches = sliding_search(
    reference_profiles,
    [target_profiles],
    stride=8,
    threshold=65.0,
)
print(f"\n{len(matches)} matching window(s) under the distance threshold:")
for m in matches:
    print(f"  target {m.target}: window [{m.start:3d}, {m.end:3d})  d_c={m.d_c:7.2f}  d_t={m.d_t:7.2f}  combined={m.combined:7.2f}")
