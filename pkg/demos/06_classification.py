"""1-NN classification of parent/offspring datasets under each variant.

Offspring concatenate random proportions of their parents and suffer a
few random deformations; the label is the dominant parent.  Nearest
neighbour on the alignment cost classifies the held-out half.
"""
from warpbench import (
    DtwVariant,
    GeneratorSpec,
    WeightParams,
    knn_classify,
    make_dataset,
)

spec = GeneratorSpec(length=150, min_value=0, max_value=100, spacing_min=10, spacing_max=40)
dataset = make_dataset(n_classes=4, per_class=12, spec=spec, seed=8)
print(
    f"dataset: {dataset.n_classes} classes x 12 offspring, "
    f"{len(dataset.train_idx)} train / {len(dataset.test_idx)} test"
)

# classification compares costs across neighbours of different lengths, so
# the weighted variants run at mild steepness (see the suite defaults)
weights = {DtwVariant.WDTW: WeightParams(g=0.02), DtwVariant.WDDTW: WeightParams(g=0.002)}
for variant in DtwVariant:
    result = knn_classify(dataset, variant, weights=weights.get(variant))
    errors = [
        (i, t, p)
        for i, (t, p) in enumerate(zip(result.true_labels, result.predicted))
        if t != p
    ]
    print(f"{variant.value:8s} accuracy {100 * result.accuracy:5.1f}%  ({len(errors)} errors)")
