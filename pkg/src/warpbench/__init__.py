"""warpbench: a time-series alignment laboratory.

Generate realistic synthetic signals, deform them with controllable and
fully recorded variations, align the resulting pairs with four dynamic
time warping variants (plain, derivative, weighted, weighted-derivative)
under optional warping-window constraints, and score the alignments
against the known correspondence.
"""

from .bench import (
    BandPolicy,
    ClassificationReport,
    ExperimentReport,
    SuiteConfig,
    WeightPolicy,
    run_alignment_suite,
    run_classification_suite,
    run_windowing_suite,
)
from .classify import ClassificationResult, Dataset, knn_classify, make_dataset
from .dtw import (
    Alignment,
    BandConstraint,
    DtwVariant,
    WeightParams,
    align,
    alignment_cost,
    derivative_transform,
    weight_vector,
)
from .errors import ContractViolation, ParameterError
from .fitter import (
    FitReport,
    SAParams,
    VariationProfile,
    apply_fit_report,
    fit,
    fit_peaks,
    fit_scaling,
    quantify_effects,
)
from .metrics import EventMarks, aadft, adm, adt, euclidean
from .search import MatchResult, ProfilePair, curvature_torsion, sliding_search
from .series import GroundTruthMapping, Series
from .synthesis import (
    DeformationPlan,
    GeneratorSpec,
    PeakMode,
    SignalPair,
    VariationClass,
    VariationParams,
    add_gaussian_peak,
    compose_mappings,
    compose_variation,
    generate_signal,
    scale_window,
    scale_window_length_preserving,
)
from .weightopt import WeightObjective, WeightSearchConfig, optimize_g

__version__ = "0.1.0"
