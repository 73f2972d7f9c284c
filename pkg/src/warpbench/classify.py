"""Synthetic classification datasets and 1-NN classification.

Each dataset starts from ``n`` generated parent signals.  An offspring
concatenates a prefix of every parent, with prefix lengths proportional to
a random proportions vector, then suffers a few random deformations; its
label is the parent contributing the most.  Classification assigns each
test sample the label of its lowest-alignment-cost training neighbour.
"""
from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from .dtw import BandConstraint, DtwVariant, WeightParams, alignment_cost
from .errors import ParameterError
from .series import Series
from .synthesis import (
    GeneratorSpec,
    VariationParams,
    DeformationPlan,
    _draw_peak_step,
    _draw_scale_step,
    apply_plan,
    generate_signal,
)

__all__ = ["LabeledSample", "Dataset", "ClassificationResult", "make_dataset", "knn_classify"]


@dataclass(frozen=True)
class LabeledSample:
    series: Series
    label: int
    proportions: tuple[float, ...]

    def __post_init__(self):
        if int(np.argmax(self.proportions)) != self.label:
            raise ParameterError("label must be the argmax of the proportions")
        if abs(sum(self.proportions) - 1.0) > 1e-9:
            raise ParameterError("proportions must sum to 1")


@dataclass(frozen=True)
class Dataset:
    n_classes: int
    parents: tuple[Series, ...]
    samples: tuple[LabeledSample, ...]
    train_idx: tuple[int, ...]
    test_idx: tuple[int, ...]
    seed: int


@dataclass(frozen=True)
class ClassificationResult:
    accuracy: float
    predicted: tuple[int, ...]
    true_labels: tuple[int, ...]
    neighbor_idx: tuple[int, ...]
    distances: tuple[float, ...]


def _draw_proportions(rng, n_classes: int, wanted_label: int) -> np.ndarray:
    """Uniform proportions conditioned on the desired argmax (rejection)."""
    while True:
        p = rng.uniform(0.0, 1.0, n_classes)
        p /= p.sum()
        if int(np.argmax(p)) == wanted_label:
            return p


def make_dataset(
    n_classes: int,
    per_class: int,
    spec: GeneratorSpec,
    deform_ops_range: tuple[int, int] = (1, 3),
    params: VariationParams | None = None,
    seed: int = 0,
) -> Dataset:
    """Build a balanced parent/offspring dataset, split 50/50 per class."""
    if n_classes < 2:
        raise ParameterError("need at least two classes")
    if per_class < 1:
        raise ParameterError("need at least one sample per class")
    params = params or VariationParams()
    rng = np.random.default_rng(seed)

    parents = tuple(
        generate_signal(replace(spec, seed=int(rng.integers(0, 2**63)))) for _ in range(n_classes)
    )

    samples: list[LabeledSample] = []
    for label in range(n_classes):
        for _ in range(per_class):
            proportions = _draw_proportions(rng, n_classes, label)
            pieces = []
            for parent, p in zip(parents, proportions):
                seg = int(round(p * len(parent)))
                if seg > 0:
                    pieces.append(parent.values[:seg])
            base = Series(np.concatenate(pieces))

            n_ops = int(rng.integers(deform_ops_range[0], deform_ops_range[1] + 1))
            steps = []
            length = len(base)
            amplitude = float(np.max(base.values) - np.min(base.values))
            for _ in range(n_ops):
                kind = int(rng.integers(0, 3))
                if kind == 0:
                    step = _draw_scale_step(rng, length, params, length_preserving=False)
                    length = length + int(round((step.w1 - step.w0) * (step.s - 1.0)))
                elif kind == 1:
                    step = _draw_scale_step(rng, length, params, length_preserving=True)
                else:
                    step = _draw_peak_step(rng, length, amplitude, params)
                steps.append(step)
            deformed, _ = apply_plan(base, DeformationPlan(steps=tuple(steps)))
            samples.append(
                LabeledSample(series=deformed, label=label, proportions=tuple(float(v) for v in proportions))
            )

    train_idx: list[int] = []
    test_idx: list[int] = []
    for label in range(n_classes):
        class_idx = range(label * per_class, (label + 1) * per_class)
        for rank, idx in enumerate(class_idx):
            (train_idx if rank % 2 == 0 else test_idx).append(idx)

    return Dataset(
        n_classes=n_classes,
        parents=parents,
        samples=tuple(samples),
        train_idx=tuple(train_idx),
        test_idx=tuple(test_idx),
        seed=seed,
    )


def knn_classify(
    dataset: Dataset,
    variant: DtwVariant = DtwVariant.DTW,
    weights: WeightParams | None = None,
    constraint: BandConstraint | None = None,
) -> ClassificationResult:
    """1-NN classification of the test split against the training split.

    Ties in alignment cost go to the first training index.
    """
    if not dataset.train_idx or not dataset.test_idx:
        raise ParameterError("both splits must be non-empty")
    train = [dataset.samples[i] for i in dataset.train_idx]
    predicted, true_labels, neighbors, distances = [], [], [], []
    for idx in dataset.test_idx:
        sample = dataset.samples[idx]
        costs = np.array(
            [alignment_cost(sample.series, t.series, variant, weights, constraint) for t in train]
        )
        best = int(np.argmin(costs))
        predicted.append(train[best].label)
        true_labels.append(sample.label)
        neighbors.append(dataset.train_idx[best])
        distances.append(float(costs[best]))
    accuracy = float(np.mean(np.array(predicted) == np.array(true_labels)))
    return ClassificationResult(
        accuracy=accuracy,
        predicted=tuple(predicted),
        true_labels=tuple(true_labels),
        neighbor_idx=tuple(neighbors),
        distances=tuple(distances),
    )
