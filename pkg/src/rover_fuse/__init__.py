"""Weighted ROVER-style fusion of per-frame text recognition results."""

from ._accel import USE_NUMBA
from .combiner import Alignment, TransitionNetwork, align, combine, merge, vote
from .core import (
    Alphabet,
    AlphabetMismatch,
    AlternativesMatrix,
    Clip,
    FrameSample,
    argmax_string,
    canonicalize,
)
from .evaluation import (
    Dataset,
    PerformanceProfile,
    build_profiles,
    evaluate_prefix,
    normalize_clip_length,
)
from .focus import GrayImage, focus_estimate, gradients, quantile095, read_pgm, write_pgm
from .metrics import MetricConfig, cell_distance, gld, ngld
from .synth import SynthConfig, generate_synthetic
from .weighting import (
    Base,
    ThresholdRule,
    WeightingStrategy,
    apply_weighting_model,
    base_weight,
    confidence,
    resolve_threshold,
)

__version__ = "0.1.0"
