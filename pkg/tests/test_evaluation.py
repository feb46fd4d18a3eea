import numpy as np
import pytest

from oracles import weighted_plurality
from rover_fuse.core import Alphabet, AlternativesMatrix, Clip, FrameSample
from rover_fuse.evaluation import (
    Dataset,
    build_profiles,
    evaluate_prefix,
    load_dataset,
    normalize_clip_length,
    order_sensitivity,
    profiles_to_csv,
    save_dataset,
)
from rover_fuse.synth import SynthConfig, generate_synthetic
from rover_fuse.weighting import NO_WEIGHTING, Base, WeightingStrategy, standard_strategies

A = Alphabet("X79")


def clip_of(*strings, truth=None):
    frames = [FrameSample(AlternativesMatrix.from_string(s, A), frame_index=i) for i, s in enumerate(strings)]
    return Clip(tuple(frames), truth)


def test_normalize_cycles_and_truncates():
    c = clip_of("X", "7", truth="X")
    out = normalize_clip_length(c, 5)
    assert [f.result for f in out.frames] == [c.frames[i % 2].result for i in range(5)]
    assert [f.frame_index for f in out.frames] == list(range(5))
    assert len(normalize_clip_length(clip_of(*["X"] * 40), 30)) == 30
    one = normalize_clip_length(clip_of("9"), 3)
    assert all(f.result == one.frames[0].result for f in one.frames)
    same = clip_of(*["X7"] * 30)
    assert [f.result for f in normalize_clip_length(same, 30).frames] == [f.result for f in same.frames]


def test_evaluate_prefix_examples():
    assert evaluate_prefix(clip_of("X7", truth="X7"), NO_WEIGHTING, 1) == 0
    c = clip_of("X9", "X7", "X7", "X7", "X7", truth="X7")
    assert weighted_plurality(["X9"] + ["X7"] * 4, [1] * 5, "X79") == "X7"
    assert evaluate_prefix(c, NO_WEIGHTING, 5) == 0
    assert evaluate_prefix(c, NO_WEIGHTING, 1) > 0
    same = clip_of(*["X9"] * 6, truth="X7")
    assert evaluate_prefix(same, NO_WEIGHTING, 1) == evaluate_prefix(same, NO_WEIGHTING, 6)


def test_evaluate_prefix_errors():
    with pytest.raises(ValueError):
        evaluate_prefix(clip_of("X"), NO_WEIGHTING, 1)
    with pytest.raises(ValueError):
        evaluate_prefix(clip_of("X", truth="X"), NO_WEIGHTING, 2)


def test_profile_all_correct_is_zero():
    ds = Dataset([clip_of(*["X7"] * 4, truth="x7")], target_length=4)
    (prof,) = build_profiles(ds, [NO_WEIGHTING])
    assert prof.points == tuple((n, 0.0) for n in range(1, 5))


def test_empty_dataset():
    with pytest.raises(ValueError):
        build_profiles(Dataset([]), [NO_WEIGHTING])


@pytest.fixture(scope="module")
def small_ds():
    return generate_synthetic(SynthConfig(seed=5, clip_count=8, frames_per_clip=10, target_length=10))


def test_profiles_cover_every_prefix_and_agree_at_one(small_ds):
    strategies = standard_strategies(Base.FOCUS) + standard_strategies(Base.CONFIDENCE)[1:]
    profiles = build_profiles(small_ds, strategies)
    for p in profiles:
        assert [n for n, _ in p.points] == list(range(1, 11))
        assert all(0 <= v <= 1 for _, v in p.points)
    assert len({p.value_at(1) for p in profiles}) == 1


def test_parallel_matches_serial(small_ds):
    strategies = standard_strategies(Base.FOCUS)
    serial = build_profiles(small_ds, strategies, jobs=1)
    parallel = build_profiles(small_ds, strategies, jobs=3)
    assert profiles_to_csv(serial) == profiles_to_csv(parallel)


def test_noiseless_profile_ends_at_zero():
    cfg = SynthConfig(seed=2, clip_count=6, frames_per_clip=6, target_length=6,
                      base_error_rate=1e-12, segmentation_error_rate=0.0)
    (prof,) = build_profiles(generate_synthetic(cfg), [NO_WEIGHTING])
    assert prof.value_at(6) == 0.0


def test_permutation_invariance_on_unambiguous_clips():
    rng = np.random.default_rng(9)
    clips = []
    for _ in range(10):
        base = list("X7X9")
        strings = []
        for _ in range(5):
            s = list(base)
            s[int(rng.integers(4))] = "X79"[int(rng.integers(3))]
            strings.append("".join(s))
        clips.append(clip_of(*strings, truth="X7X9"))
    ds = Dataset(clips, target_length=5)
    shuffled = Dataset(
        [Clip(tuple(c.frames[i] for i in rng.permutation(5)), c.ground_truth) for c in clips],
        target_length=5,
    )
    a = build_profiles(ds, [NO_WEIGHTING])[0]
    b = build_profiles(shuffled, [NO_WEIGHTING])[0]
    assert a.value_at(5) == b.value_at(5)


def test_order_sensitivity_runs(small_ds):
    value = order_sensitivity(small_ds, NO_WEIGHTING, permutations=2)
    assert 0 <= value <= 1


def test_csv_format():
    ds = Dataset([clip_of("X7", "X9", truth="X7")], target_length=2)
    text = profiles_to_csv(build_profiles(ds, [NO_WEIGHTING, WeightingStrategy.parse("confidence/best1")]))
    lines = text.split("\n")
    assert lines[0] == "strategy,prefix_len,mean_ngld"
    assert lines[1] == "none/all,1,0.000000"
    assert len(lines) == 6 and lines[-1] == "" and "\r" not in text


def test_manifest_roundtrip(tmp_path, small_ds):
    path = save_dataset(small_ds, tmp_path / "ds")
    loaded = load_dataset(path)
    assert loaded.target_length == 10 and loaded.field_group == "synthetic"
    for a, b in zip(small_ds.clips, loaded.clips):
        assert a.ground_truth == b.ground_truth
        for fa, fb in zip(a.frames, b.frames):
            assert np.max(np.abs(fa.result.masses - fb.result.masses), initial=0) <= 1e-12
            assert fa.image == fb.image
