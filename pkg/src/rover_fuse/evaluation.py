"""Anytime evaluation: expected performance profiles over clip prefixes."""

from __future__ import annotations

import io
import json
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, replace
from pathlib import Path
from typing import Optional, Sequence

import numpy as np

from .combiner import combine
from .core import AlternativesMatrix, Clip, FrameSample, argmax_string
from .focus import focus_estimate, read_pgm
from .metrics import ngld
from .weighting import WeightingStrategy, apply_weighting_model, confidence

DEFAULT_TARGET_LENGTH = 30


@dataclass
class Dataset:
    clips: list[Clip]
    field_group: str = "unknown"
    target_length: int = DEFAULT_TARGET_LENGTH

    def __len__(self) -> int:
        return len(self.clips)


@dataclass(frozen=True)
class PerformanceProfile:
    strategy: str
    points: tuple[tuple[int, float], ...]

    def value_at(self, n: int) -> float:
        return self.points[n - 1][1]


def normalize_clip_length(clip: Clip, target: int = DEFAULT_TARGET_LENGTH) -> Clip:
    """Truncate to ``target`` frames, or repeat the frames cyclically up to it."""
    if target < 1:
        raise ValueError("target length must be positive")
    n = len(clip.frames)
    frames = tuple(replace(clip.frames[i % n], frame_index=i) for i in range(target))
    return Clip(frames, clip.ground_truth)


def prime_cache(clip: Clip) -> Clip:
    """Fill cached focus/confidence once so per-prefix evaluation does not redo them."""
    frames = []
    for f in clip.frames:
        foc = f.cached_focus
        if foc is None and f.image is not None:
            foc = focus_estimate(f.image)
        conf = f.cached_confidence
        if conf is None:
            conf = confidence(f.result)
        frames.append(replace(f, cached_focus=foc, cached_confidence=conf))
    return Clip(tuple(frames), clip.ground_truth)


def evaluate_prefix(clip: Clip, strategy: WeightingStrategy, n: int) -> float:
    """NGLD to ground truth of the result integrated from the first ``n`` frames."""
    if clip.ground_truth is None:
        raise ValueError("clip has no ground truth")
    if not 1 <= n <= len(clip.frames):
        raise ValueError(f"prefix length {n} outside 1..{len(clip.frames)}")
    frames = clip.frames[:n]
    weights = apply_weighting_model(frames, strategy)
    readout = argmax_string(combine(frames, weights))
    return ngld(readout, clip.ground_truth)


def clip_profile(clip: Clip, strategies: Sequence[WeightingStrategy]) -> np.ndarray:
    """Per-strategy, per-prefix distances for one clip, shape ``(S, N)``."""
    clip = prime_cache(clip)
    n_frames = len(clip.frames)
    out = np.empty((len(strategies), n_frames))
    # identical weight vectors give identical results; no need to recombine
    seen: dict[tuple[int, bytes], float] = {}
    for s, strategy in enumerate(strategies):
        for n in range(1, n_frames + 1):
            frames = clip.frames[:n]
            weights = apply_weighting_model(frames, strategy)
            key = (n, weights.tobytes())
            if key not in seen:
                readout = argmax_string(combine(frames, weights))
                seen[key] = ngld(readout, clip.ground_truth)
            out[s, n - 1] = seen[key]
    return out


def _clip_profile_job(args):
    return clip_profile(*args)


def default_jobs() -> int:
    try:
        return len(os.sched_getaffinity(0))
    except AttributeError:  # pragma: no cover - non-Linux
        return os.cpu_count() or 1


def build_profiles(
    ds: Dataset,
    strategies: Sequence[WeightingStrategy],
    jobs: Optional[int] = 1,
) -> list[PerformanceProfile]:
    """Mean NGLD per prefix length for every strategy.

    Clips are length-normalized to ``ds.target_length`` first. Results do not
    depend on ``jobs``: per-clip values are reduced in dataset order.
    """
    if not ds.clips:
        raise ValueError("dataset is empty")
    if any(c.ground_truth is None for c in ds.clips):
        raise ValueError("every clip needs a ground truth for evaluation")
    strategies = list(strategies)
    clips = [normalize_clip_length(c, ds.target_length) for c in ds.clips]
    jobs = default_jobs() if jobs is None else max(1, int(jobs))
    tasks = [(c, strategies) for c in clips]
    if jobs == 1 or len(clips) == 1:
        per_clip = [_clip_profile_job(t) for t in tasks]
    else:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            per_clip = list(pool.map(_clip_profile_job, tasks, chunksize=max(1, len(tasks) // (4 * jobs))))
    total = np.zeros_like(per_clip[0])
    for values in per_clip:
        total += values
    mean = total / len(per_clip)
    return [
        PerformanceProfile(
            strategy.label,
            tuple((n + 1, float(mean[s, n])) for n in range(mean.shape[1])),
        )
        for s, strategy in enumerate(strategies)
    ]


def order_sensitivity(
    ds: Dataset, strategy: WeightingStrategy, permutations: int = 5, seed: int = 0
) -> float:
    """Mean absolute change of the full-clip distance under random frame reorderings."""
    rng = np.random.default_rng(seed)
    diffs = []
    for clip in ds.clips:
        clip = prime_cache(normalize_clip_length(clip, ds.target_length))
        n = len(clip.frames)
        base = evaluate_prefix(clip, strategy, n)
        for _ in range(permutations):
            order = rng.permutation(n)
            shuffled = Clip(tuple(clip.frames[i] for i in order), clip.ground_truth)
            diffs.append(abs(evaluate_prefix(shuffled, strategy, n) - base))
    return float(np.mean(diffs))


def profiles_to_csv(profiles: Sequence[PerformanceProfile]) -> str:
    buf = io.StringIO(newline="")
    buf.write("strategy,prefix_len,mean_ngld\n")
    for prof in profiles:
        for n, value in prof.points:
            buf.write(f"{prof.strategy},{n},{value:.6f}\n")
    return buf.getvalue()


def write_profiles_csv(path, profiles: Sequence[PerformanceProfile]) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(profiles_to_csv(profiles))


# -- manifests ---------------------------------------------------------------


def load_clip_obj(obj: dict, root: Path) -> Clip:
    frames = []
    for i, fobj in enumerate(obj["frames"]):
        result = AlternativesMatrix.load(root / fobj["result"])
        image = read_pgm(root / fobj["image"]) if fobj.get("image") else None
        frames.append(FrameSample(result=result, image=image, frame_index=i))
    return Clip(tuple(frames), obj.get("ground_truth"))


def load_clip_manifest(path) -> Clip:
    """Clip manifest: ``{"ground_truth": optional str, "frames": [...]}``."""
    path = Path(path)
    obj = json.loads(path.read_text(encoding="utf-8"))
    return load_clip_obj(obj, path.parent)


def load_dataset(path) -> Dataset:
    path = Path(path)
    obj = json.loads(path.read_text(encoding="utf-8"))
    clips = [load_clip_obj(c, path.parent) for c in obj["clips"]]
    return Dataset(
        clips=clips,
        field_group=obj.get("field_group", "unknown"),
        target_length=int(obj.get("target_length", DEFAULT_TARGET_LENGTH)),
    )


def save_dataset(ds: Dataset, out_dir) -> Path:
    """Write matrices, PGM images and ``manifest.json`` under ``out_dir``."""
    from .focus import write_pgm

    out_dir = Path(out_dir)
    (out_dir / "frames").mkdir(parents=True, exist_ok=True)
    clips = []
    for ci, clip in enumerate(ds.clips):
        frames = []
        for fi, frame in enumerate(clip.frames):
            stem = f"frames/c{ci:04d}_f{fi:03d}"
            frame.result.save(out_dir / f"{stem}.json")
            entry = {"result": f"{stem}.json"}
            if frame.image is not None:
                write_pgm(out_dir / f"{stem}.pgm", frame.image)
                entry["image"] = f"{stem}.pgm"
            frames.append(entry)
        clips.append({"ground_truth": clip.ground_truth, "frames": frames})
    manifest = {"field_group": ds.field_group, "target_length": ds.target_length, "clips": clips}
    path = out_dir / "manifest.json"
    path.write_text(json.dumps(manifest, indent=1) + "\n", encoding="utf-8")
    return path
