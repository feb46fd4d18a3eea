import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import best_alignment_cost, optimal_alignments, random_distribution_matrix, weighted_plurality
from rover_fuse.combiner import TransitionNetwork, align, combine, merge, vote
from rover_fuse.core import Alphabet, AlphabetMismatch, AlternativesMatrix, FrameSample, argmax_string
from rover_fuse.metrics import gld, ngld

AB8 = Alphabet("ABCD8")


def crisp(s, a=AB8):
    return AlternativesMatrix.from_string(s, a)


def net_of(s, w=1.0, a=AB8):
    return TransitionNetwork.from_result(crisp(s, a), w)


def test_align_identical():
    al = align(net_of("AB"), crisp("AB"))
    assert al.pairs == [(0, 0), (1, 1)] and al.cost == 0


def test_align_insertion_matches_oracle():
    net = net_of("AB")
    cost, best = optimal_alignments(net.normalized(), crisp("ACB").masses)
    assert best == [("M", "N", "M")] and cost == 1
    al = align(net, crisp("ACB"))
    assert al.pairs == [(0, 0), (None, 1), (1, 2)]
    assert al.cost == cost


def test_align_against_empty_result():
    al = align(net_of("A"), AlternativesMatrix.empty_result(AB8))
    assert al.pairs == [(0, None)] and al.cost == 1


def test_tie_preference_match_first():
    # "AB" vs "BA": diagonal and shifted traces both cost 2
    assert align(net_of("AB"), crisp("BA")).pairs == [(0, 0), (1, 1)]


def test_alphabet_mismatch():
    with pytest.raises(AlphabetMismatch):
        align(net_of("A"), crisp("A", Alphabet("AZ")))


def test_merge_identical():
    net = merge(net_of("AB"), crisp("AB"), 1.0)
    assert net.total_weight == 2 and net.merged_count == 2
    assert argmax_string(vote(net)) == "AB"


def test_merge_weighted_substitution():
    net = net_of("AB")
    _, best = optimal_alignments(net.normalized(), crisp("CD").masses)
    assert ("M", "M") in best
    net = merge(net, crisp("CD"), 3.0)
    cells = vote(net).masses
    assert cells[0, AB8.index("C")] == pytest.approx(0.75)
    assert cells[1, AB8.index("D")] == pytest.approx(0.75)
    assert cells[0, AB8.index("A")] == pytest.approx(0.25)


def test_merge_empty_result():
    net = merge(net_of("A"), AlternativesMatrix.empty_result(AB8), 1.0)
    expected = 0.5 * AB8.crisp("A") + 0.5 * AB8.empty()
    assert np.allclose(vote(net).masses, [expected])


def test_merge_inserted_cell_backfills_empty():
    net = merge(net_of("AB", 2.0), crisp("ACB"), 1.0)
    cells = net.cells
    assert cells.shape[0] == 3
    assert np.allclose(cells[1], 2.0 * AB8.empty() + AB8.crisp("C"))
    assert np.allclose(cells.sum(axis=1), net.total_weight)


def test_merge_rejects_bad_weight():
    with pytest.raises(ValueError):
        merge(net_of("A"), crisp("A"), 0.0)


def test_vote_on_empty_network():
    with pytest.raises(ValueError):
        vote(TransitionNetwork(AB8))


def test_vote_single_frame_identity():
    rng = np.random.default_rng(0)
    x = AlternativesMatrix(AB8, random_distribution_matrix(rng, 4, 5))
    assert vote(TransitionNetwork.from_result(x, 2.5)).masses == pytest.approx(x.masses)


@pytest.mark.parametrize(
    "strings, weights, expected",
    [(["AB", "AB", "A8"], [1, 1, 1], "AB"), (["AB", "CD"], [1, 3], "CD")],
)
def test_vote_examples(crisp, strings, weights, expected):
    frames = crisp(*strings)
    assert argmax_string(combine(frames, weights)) == expected


def test_combine_hello(crisp):
    a = Alphabet("EHLOX0")
    frames = crisp("HELLO", "HELL0", "HXLLO", alphabet=a)
    readout = argmax_string(combine(frames, [1, 1, 1]))
    assert readout == "HELLO"
    assert ngld(readout, "hello") == 0


def test_combine_errors(crisp):
    frames = crisp("A", "B")
    with pytest.raises(ValueError):
        combine(frames, [0, 0])
    with pytest.raises(ValueError):
        combine(frames, [1])


def _random_frames(rng, n):
    frames = []
    for i in range(n):
        m = int(rng.integers(0, 6))
        frames.append(FrameSample(AlternativesMatrix(AB8, random_distribution_matrix(rng, m, 5)), frame_index=i))
    return frames


@settings(max_examples=60)
@given(st.integers(0, 10_000))
def test_identity(seed):
    frame = _random_frames(np.random.default_rng(seed), 1)[0]
    if len(frame.result) == 0:
        return
    assert argmax_string(combine([frame], [1.0])) == argmax_string(frame.result)


@given(st.text(alphabet="ABCD8", max_size=6), st.lists(st.floats(0.01, 10), min_size=1, max_size=6))
def test_unanimity(s, ws):
    frames = [FrameSample(crisp(s), frame_index=i) for i in range(len(ws))]
    assert argmax_string(combine(frames, ws)) == s


@settings(max_examples=60)
@given(st.integers(0, 10_000))
def test_zero_weight_exclusion(seed):
    rng = np.random.default_rng(seed)
    frames = _random_frames(rng, 6)
    w = rng.uniform(0.1, 2, size=6) * (rng.random(6) < 0.6)
    if not w.any():
        w[0] = 1.0
    keep = w > 0
    a = combine(frames, w)
    b = combine([f for f, k in zip(frames, keep) if k], w[keep])
    assert np.array_equal(a.masses, b.masses)


@settings(max_examples=60)
@given(st.integers(0, 10_000), st.floats(1e-3, 1e3))
def test_weight_scale_invariance(seed, c):
    rng = np.random.default_rng(seed)
    frames = _random_frames(rng, 5)
    w = rng.uniform(0.1, 2, size=5)
    a = combine(frames, w).masses
    b = combine(frames, w * c).masses
    assert a.shape == b.shape
    assert np.max(np.abs(a - b), initial=0) <= 1e-9


def test_cell_sum_invariant():
    rng = np.random.default_rng(5)
    net = TransitionNetwork(AB8)
    for f in _random_frames(rng, 8):
        net.merge(f.result, float(rng.uniform(0.1, 3)))
        assert np.allclose(net.cells.sum(axis=1), net.total_weight, rtol=1e-6)


def diagonal_safe_case(rng, alphabet="ABCD8"):
    """Equal-length crisp frames whose progressive alignment is provably diagonal.

    Length <= 2 is always safe. Longer strings stay within one substitution of
    a base string, which bounds every diagonal merge cost by 2, the minimum
    cost of any trace containing gaps.
    """
    n_frames = int(rng.integers(1, 5))
    length = int(rng.integers(1, 5))
    pick = lambda: alphabet[int(rng.integers(len(alphabet)))]
    if length <= 2:
        strings = ["".join(pick() for _ in range(length)) for _ in range(n_frames)]
    else:
        base = [pick() for _ in range(length)]
        strings = []
        for _ in range(n_frames):
            s = list(base)
            s[int(rng.integers(length))] = pick()
            strings.append("".join(s))
    weights = [float(w) for w in rng.integers(1, 4, size=n_frames)]
    return strings, weights


def test_crisp_majority_small():
    rng = np.random.default_rng(11)
    for _ in range(100):
        strings, weights = diagonal_safe_case(rng)
        frames = [FrameSample(crisp(s), frame_index=i) for i, s in enumerate(strings)]
        assert argmax_string(combine(frames, weights)) == weighted_plurality(strings, weights, "ABCD8")


def test_progressive_cost_matches_exhaustive_search():
    alphabet = "AB8"
    a = Alphabet(alphabet)
    words = ["".join(p) for n in range(1, 4) for p in itertools.product(alphabet, repeat=n)]
    rng = np.random.default_rng(2)
    for _ in range(150):
        picks = [words[int(rng.integers(len(words)))] for _ in range(int(rng.integers(2, 4)))]
        net = TransitionNetwork.from_result(AlternativesMatrix.from_string(picks[0], a))
        for s in picks[1:]:
            x = AlternativesMatrix.from_string(s, a)
            expected = best_alignment_cost(net.normalized(), x.masses)
            al = net.merge(x, 1.0)
            assert al.cost == pytest.approx(expected, abs=1e-12)


def test_crisp_alignment_cost_is_levenshtein():
    rng = np.random.default_rng(4)
    for _ in range(200):
        s, t = ("".join("ABCD"[k] for k in rng.integers(0, 4, size=rng.integers(0, 7))) for _ in range(2))
        if not s:
            continue
        assert align(net_of(s), crisp(t)).cost == gld(s, t)
