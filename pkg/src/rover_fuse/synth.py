"""Seeded synthetic clips whose recognition noise grows with image blur."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.ndimage import uniform_filter

from .core import Alphabet, AlternativesMatrix, Clip, FrameSample
from .focus import GrayImage

DEFAULT_ALPHABET = "0123456789ABCDEFGHIJKLMNOPQRSTUVWXYZ"


@dataclass(frozen=True)
class SynthConfig:
    seed: int = 0
    clip_count: int = 200
    frames_per_clip: int = 30
    alphabet: str = DEFAULT_ALPHABET
    truth_length_range: tuple[int, int] = (6, 12)
    blur_radius_range: tuple[int, int] = (0, 7)
    base_error_rate: float = 0.15
    segmentation_error_rate: float = 0.2
    image_size: tuple[int, int] = (64, 24)
    # probability that a misread uses the position's per-clip confusion partner
    # rather than a fresh random symbol
    confusion_consistency: float = 0.8
    field_group: str = "synthetic"
    target_length: int = 30

    def __post_init__(self):
        if self.seed < 0:
            raise ValueError("seed must be non-negative")
        if self.clip_count < 1 or self.frames_per_clip < 1:
            raise ValueError("clip_count and frames_per_clip must be positive")
        Alphabet(self.alphabet)
        if len(self.alphabet) < 2:
            raise ValueError("synthetic noise needs at least two symbols")
        lo, hi = self.truth_length_range
        if not 1 <= lo <= hi:
            raise ValueError("truth_length_range must satisfy 1 <= lo <= hi")
        lo, hi = self.blur_radius_range
        if not 0 <= lo <= hi:
            raise ValueError("blur_radius_range must satisfy 0 <= lo <= hi")
        if not 0 < self.base_error_rate < 1:
            raise ValueError("base_error_rate must lie in (0, 1)")
        if not 0 <= self.segmentation_error_rate < 1:
            raise ValueError("segmentation_error_rate must lie in [0, 1)")
        if not 0 <= self.confusion_consistency <= 1:
            raise ValueError("confusion_consistency must lie in [0, 1]")
        w, h = self.image_size
        if w < 2 or h < 2:
            raise ValueError("image_size must be at least 2x2")


def box_blur(pixels: np.ndarray, radius: int) -> np.ndarray:
    """Mean filter over a (2r+1)^2 window with reflected borders, rounded to uint8."""
    if radius <= 0:
        return np.asarray(pixels, dtype=np.uint8).copy()
    out = uniform_filter(np.asarray(pixels, dtype=np.float64), size=2 * radius + 1, mode="reflect")
    return np.clip(np.rint(out), 0, 255).astype(np.uint8)


def noise_image(rng: np.random.Generator, width: int, height: int, radius: int) -> GrayImage:
    return GrayImage(box_blur(rng.integers(0, 256, size=(height, width)), radius))


def error_probability(cfg: SynthConfig, radius: int) -> float:
    return min(0.95, cfg.base_error_rate * (1 + radius))


def _other_symbol(rng, k: int, exclude: int) -> int:
    s = int(rng.integers(0, k - 1))
    return s + 1 if s >= exclude else s


def _clean_column(rng, k: int, symbol: int) -> np.ndarray:
    col = np.zeros(k + 1)
    top = rng.uniform(0.6, 1.0)
    col[symbol] = top
    n_others = int(rng.integers(1, min(3, k - 1) + 1))
    others = rng.choice(np.delete(np.arange(k), symbol), size=n_others, replace=False)
    split = rng.dirichlet(np.ones(n_others))
    col[others] += (1.0 - top) * split
    col[symbol] = 1.0 - col[:symbol].sum() - col[symbol + 1 :].sum()
    return col


def _frame_matrix(rng, cfg: SynthConfig, truth: np.ndarray, partners: np.ndarray, radius: int):
    k = len(cfg.alphabet)
    p = error_probability(cfg, radius)
    cols = []
    for pos, symbol in enumerate(truth):
        if rng.random() < p:
            if rng.random() < cfg.confusion_consistency:
                wrong = int(partners[pos])
            else:
                wrong = _other_symbol(rng, k, int(symbol))
            e = rng.uniform(0.5, 0.9)
            col = np.zeros(k + 1)
            col[wrong] = e
            col[symbol] = 1.0 - e
        else:
            col = _clean_column(rng, k, int(symbol))
        cols.append(col)
    if rng.random() < cfg.segmentation_error_rate:
        where = int(rng.integers(0, len(cols) + 1))
        if rng.random() < 0.5 and cols:
            del cols[min(where, len(cols) - 1)]
        else:
            cols.insert(where, _clean_column(rng, k, int(rng.integers(0, k))))
    alphabet = Alphabet(cfg.alphabet)
    if not cols:
        return AlternativesMatrix.empty_result(alphabet)
    return AlternativesMatrix(alphabet, np.array(cols))


def generate_clip(rng: np.random.Generator, cfg: SynthConfig) -> tuple[Clip, list[int]]:
    """One clip plus the blur radius drawn for each of its frames."""
    k = len(cfg.alphabet)
    lo, hi = cfg.truth_length_range
    length = int(rng.integers(lo, hi + 1))
    truth = rng.integers(0, k, size=length)
    partners = np.array([_other_symbol(rng, k, int(s)) for s in truth], dtype=np.int64)
    width, height = cfg.image_size
    frames = []
    radii = []
    for i in range(cfg.frames_per_clip):
        radius = int(rng.integers(cfg.blur_radius_range[0], cfg.blur_radius_range[1] + 1))
        image = noise_image(rng, width, height, radius)
        result = _frame_matrix(rng, cfg, truth, partners, radius)
        frames.append(FrameSample(result=result, image=image, frame_index=i))
        radii.append(radius)
    return Clip(tuple(frames), "".join(cfg.alphabet[s] for s in truth)), radii


def iter_clips(cfg: SynthConfig):
    """Yield ``(clip, radii)``; clip ``i`` depends only on (seed, i)."""
    for ss in np.random.SeedSequence(cfg.seed).spawn(cfg.clip_count):
        yield generate_clip(np.random.default_rng(ss), cfg)


def generate_synthetic(cfg: SynthConfig):
    """Deterministic dataset for ``cfg``."""
    from .evaluation import Dataset

    clips = [clip for clip, _ in iter_clips(cfg)]
    return Dataset(clips=clips, field_group=cfg.field_group, target_length=cfg.target_length)
