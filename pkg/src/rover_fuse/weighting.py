"""Base weighting functions and the top-t threshold weighting model."""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .core import AlternativesMatrix, FrameSample
from .focus import focus_estimate


class MissingImage(ValueError):
    """Focus weighting was requested for a frame without an image or cache."""


class Base(enum.Enum):
    NONE = "none"
    FOCUS = "focus"
    CONFIDENCE = "confidence"


class Rule(enum.Enum):
    ALL = "all"
    BEST_ONE = "best1"
    BEST_K = "k"
    BEST_FRACTION = "frac"


@dataclass(frozen=True)
class ThresholdRule:
    kind: Rule
    value: float | int | None = None

    def __post_init__(self):
        if self.kind is Rule.BEST_K:
            if not isinstance(self.value, int) or self.value < 1:
                raise ValueError("BEST_K needs a positive integer k")
        elif self.kind is Rule.BEST_FRACTION:
            if self.value is None or not 0 < self.value <= 1:
                raise ValueError("BEST_FRACTION needs f in (0, 1]")
        elif self.value is not None:
            raise ValueError(f"{self.kind.name} takes no parameter")

    @classmethod
    def all(cls) -> "ThresholdRule":
        return cls(Rule.ALL)

    @classmethod
    def best_one(cls) -> "ThresholdRule":
        return cls(Rule.BEST_ONE)

    @classmethod
    def best_k(cls, k: int) -> "ThresholdRule":
        return cls(Rule.BEST_K, int(k))

    @classmethod
    def best_fraction(cls, f: float) -> "ThresholdRule":
        return cls(Rule.BEST_FRACTION, float(f))

    @classmethod
    def parse(cls, text: str) -> "ThresholdRule":
        """Parse ``all``, ``best1``, ``k=K`` or ``frac=F``."""
        text = text.strip().lower()
        if text == "all":
            return cls.all()
        if text == "best1":
            return cls.best_one()
        key, sep, val = text.partition("=")
        if sep:
            try:
                if key == "k":
                    return cls.best_k(int(val))
                if key == "frac":
                    return cls.best_fraction(float(val))
            except ValueError as exc:
                raise ValueError(f"bad threshold rule {text!r}: {exc}") from None
        raise ValueError(f"unknown threshold rule {text!r}")

    @property
    def label(self) -> str:
        if self.kind is Rule.BEST_K:
            return f"k={self.value}"
        if self.kind is Rule.BEST_FRACTION:
            return f"frac={self.value:g}"
        return self.kind.value


@dataclass(frozen=True)
class WeightingStrategy:
    base: Base
    rule: ThresholdRule

    @classmethod
    def parse(cls, text: str) -> "WeightingStrategy":
        """Parse ``base/rule``, e.g. ``focus/frac=0.5`` (``:`` also accepted)."""
        sep = "/" if "/" in text else ":"
        base, _, rule = text.strip().partition(sep)
        try:
            b = Base(base.strip().lower())
        except ValueError:
            raise ValueError(f"unknown weighting base {base!r}") from None
        return cls(b, ThresholdRule.parse(rule or "all"))

    @property
    def label(self) -> str:
        return f"{self.base.value}/{self.rule.label}"


NO_WEIGHTING = WeightingStrategy(Base.NONE, ThresholdRule.all())


def standard_strategies(base: Base) -> list[WeightingStrategy]:
    """Unweighted combination plus the four threshold rules over ``base``."""
    rules = [
        ThresholdRule.best_one(),
        ThresholdRule.best_k(3),
        ThresholdRule.best_fraction(0.5),
        ThresholdRule.all(),
    ]
    return [NO_WEIGHTING] + [WeightingStrategy(base, r) for r in rules]


def confidence(x: AlternativesMatrix) -> float:
    """Smallest per-column maximum over non-EMPTY symbols; 0 for an empty result."""
    if len(x) == 0:
        return 0.0
    return float(x.masses[:, :-1].max(axis=1).min())


def base_weight(frame: FrameSample, strategy: WeightingStrategy) -> float:
    if strategy.base is Base.NONE:
        return 1.0
    if strategy.base is Base.FOCUS:
        if frame.cached_focus is not None:
            return float(frame.cached_focus)
        if frame.image is None:
            raise MissingImage(f"frame {frame.frame_index} has no image for focus weighting")
        return focus_estimate(frame.image)
    if frame.cached_confidence is not None:
        return float(frame.cached_confidence)
    return confidence(frame.result)


def resolve_threshold(rule: ThresholdRule, n: int) -> int:
    if n < 1:
        raise ValueError("need at least one frame")
    if rule.kind is Rule.ALL:
        return n
    if rule.kind is Rule.BEST_ONE:
        return 1
    if rule.kind is Rule.BEST_K:
        return min(rule.value, n)
    # round half up; the small slack absorbs binary error in f * n
    return min(n, max(1, math.floor(rule.value * n + 0.5 + 1e-12)))


def threshold_weights(base_weights: Sequence[float], t: int) -> np.ndarray:
    """Keep the ``t`` largest base weights, zero the rest.

    The ordering is stable, so among equal weights earlier frames rank first.
    Kept weights that are all zero are replaced by 1.
    """
    w = np.asarray(base_weights, dtype=np.float64)
    order = np.argsort(-w, kind="stable")
    out = np.zeros_like(w)
    kept = order[:t]
    out[kept] = w[kept]
    if not np.any(out[kept] > 0):
        out[kept] = 1.0
    return out


def apply_weighting_model(frames: Sequence[FrameSample], strategy: WeightingStrategy) -> np.ndarray:
    """Weight vector for ``frames`` (in the given order) under ``strategy``."""
    if len(frames) < 1:
        raise ValueError("need at least one frame")
    base = [base_weight(f, strategy) for f in frames]
    t = resolve_threshold(strategy.rule, len(frames))
    # sort by weight, then by frame_index for ties
    idx = np.array([f.frame_index for f in frames])
    by_index = np.argsort(idx, kind="stable")
    reordered = threshold_weights(np.asarray(base)[by_index], t)
    out = np.empty_like(reordered)
    out[by_index] = reordered
    return out
