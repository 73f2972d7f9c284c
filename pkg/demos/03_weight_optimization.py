"""Monte-Carlo optimization of the weight steepness.

A randomly chosen steepness can make the weighted variants warp far worse
than plain DTW on scaled signals; a handful of Monte-Carlo samples scored
by the magnitude measure recovers most of the gap.
"""
from dataclasses import replace

import numpy as np

from warpbench import (
    DtwVariant,
    GeneratorSpec,
    VariationClass,
    WeightParams,
    WeightSearchConfig,
    adm,
    adt,
    align,
    compose_variation,
    generate_signal,
    optimize_g,
)

spec = GeneratorSpec(length=300, min_value=0, max_value=100, spacing_min=10, spacing_max=50)
rng = np.random.default_rng(0)
pairs = []
for _ in range(10):
    reference = generate_signal(replace(spec, seed=int(rng.integers(2**63))))
    pairs.append(compose_variation(reference, VariationClass.SCALED, seed=int(rng.integers(2**63))))
print(f"batch: {len(pairs)} scaled pairs of length ~{len(pairs[0].reference)}")


def batch_scores(variant, g):
    adms, adts = [], []
    for p in pairs:
        a = align(p.reference, p.target, variant, weights=WeightParams(g=g))
        adms.append(adm(a, p.reference, p.target))
        adts.append(adt(a, p.ground_truth))
    return np.mean(adms), np.mean(adts)


g_random = 0.4
for variant in (DtwVariant.WDTW, DtwVariant.WDDTW):
    g_opt, value = optimize_g(pairs, variant, WeightSearchConfig(samples=20, seed=1))
    adm_rand, adt_rand = batch_scores(variant, g_random)
    adm_opt, adt_opt = batch_scores(variant, g_opt)
    print(f"\n{variant.value}:")
    print(f"  random    g={g_random:.3f}: mean adm={adm_rand:9.1f}  mean adt={adt_rand:9.1f}")
    print(f"  optimized g={g_opt:.3f}: mean adm={adm_opt:9.1f}  mean adt={adt_opt:9.1f}")

dtw_adm, dtw_adt = [], []
for p in pairs:
    a = align(p.reference, p.target)
    dtw_adm.append(adm(a, p.reference, p.target))
    dtw_adt.append(adt(a, p.ground_truth))
print(f"\nplain dtw reference: mean adm={np.mean(dtw_adm):9.1f}  mean adt={np.mean(dtw_adt):9.1f}")
