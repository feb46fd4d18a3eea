"""String distances and the per-cell distance used for alignment."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import kernels
from .core import AlphabetMismatch, canonicalize


@dataclass(frozen=True)
class MetricConfig:
    insertion_cost: float = 1.0
    deletion_cost: float = 1.0
    substitution_cost: float = 1.0

    def __post_init__(self):
        for name in ("insertion_cost", "deletion_cost", "substitution_cost"):
            if not getattr(self, name) > 0:
                raise ValueError(f"{name} must be positive")

    @property
    def alpha(self) -> float:
        """Largest elementary edit cost."""
        return max(self.insertion_cost, self.deletion_cost, self.substitution_cost)


UNIT = MetricConfig()


def _codes(s: str) -> np.ndarray:
    return np.fromiter((ord(c) for c in s), dtype=np.int64, count=len(s))


def gld(a: str, b: str, cfg: MetricConfig = UNIT) -> float:
    """Generalized Levenshtein distance turning ``a`` into ``b``."""
    return float(
        kernels.edit_distance(
            _codes(a),
            _codes(b),
            float(cfg.insertion_cost),
            float(cfg.deletion_cost),
            float(cfg.substitution_cost),
        )
    )


def ngld(a: str, b: str, cfg: MetricConfig = UNIT) -> float:
    """Normalized GLD of the canonicalized strings, in [0, 1].

    ``2 * GLD / (alpha * (|a| + |b|) + GLD)``; two empty strings are at distance 0.
    """
    a = canonicalize(a)
    b = canonicalize(b)
    if not a and not b:
        return 0.0
    d = gld(a, b, cfg)
    return 2.0 * d / (cfg.alpha * (len(a) + len(b)) + d)


def cell_distance(p, q) -> float:
    """Total variation distance between two membership distributions."""
    p = np.asarray(p, dtype=float)
    q = np.asarray(q, dtype=float)
    if p.shape != q.shape:
        raise AlphabetMismatch(f"distribution sizes differ: {p.shape} vs {q.shape}")
    return 0.5 * float(np.abs(p - q).sum())
