"""ROVER-style combination of weighted recognition results.

Frames are aligned one at a time into a transition network whose cells hold
weighted sums of membership distributions (EMPTY fills alignment gaps). Voting
normalizes every cell by the total merged weight.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from . import kernels
from .core import Alphabet, AlphabetMismatch, AlternativesMatrix, FrameSample
from .kernels import GAP_IN_NET, GAP_IN_X, MATCH


@dataclass(frozen=True)
class Alignment:
    """Optimal pairing of network cells with result columns.

    ``pairs`` lists ``(cell, column)`` tuples in order; ``None`` marks the gap
    side (``(i, None)`` is a gap in the result, ``(None, j)`` a gap in the net).
    """

    cost: float
    ops: np.ndarray

    @property
    def pairs(self) -> list[tuple[Optional[int], Optional[int]]]:
        out = []
        i = j = 0
        for op in self.ops:
            if op == MATCH:
                out.append((i, j))
                i += 1
                j += 1
            elif op == GAP_IN_X:
                out.append((i, None))
                i += 1
            else:
                out.append((None, j))
                j += 1
        return out


class TransitionNetwork:
    """Accumulated, unnormalized cells of a progressive alignment."""

    def __init__(self, alphabet: Alphabet):
        self.alphabet = alphabet
        self.cells = np.zeros((0, alphabet.size + 1))
        self.total_weight = 0.0
        self.merged_count = 0

    @classmethod
    def from_result(cls, x: AlternativesMatrix, w: float = 1.0) -> "TransitionNetwork":
        net = cls(x.alphabet)
        net.merge(x, w)
        return net

    def __len__(self) -> int:
        return self.cells.shape[0]

    def normalized(self) -> np.ndarray:
        if self.total_weight <= 0:
            return self.cells.copy()
        return self.cells / self.total_weight

    def _check(self, x: AlternativesMatrix) -> None:
        if x.alphabet != self.alphabet:
            raise AlphabetMismatch(
                f"network alphabet {self.alphabet.symbols!r} != result alphabet {x.alphabet.symbols!r}"
            )

    def align(self, x: AlternativesMatrix) -> Alignment:
        self._check(x)
        cost, ops = kernels.align_arrays(
            np.ascontiguousarray(self.normalized()), np.ascontiguousarray(x.masses)
        )
        return Alignment(float(cost), ops)

    def merge(self, x: AlternativesMatrix, w: float) -> Alignment:
        """Fold ``x`` with weight ``w`` into the network; returns the alignment used."""
        if not w > 0:
            raise ValueError(f"merge weight must be positive, got {w}")
        self._check(x)
        w = float(w)
        if self.merged_count == 0:
            self.cells = w * x.masses
            self.total_weight = w
            self.merged_count = 1
            return Alignment(0.0, np.full(len(x), GAP_IN_NET, dtype=np.int8))

        al = self.align(x)
        empty = self.alphabet.empty()
        out = np.empty((len(al.ops), self.cells.shape[1]))
        i = j = 0
        for k, op in enumerate(al.ops):
            if op == MATCH:
                out[k] = self.cells[i] + w * x.masses[j]
                i += 1
                j += 1
            elif op == GAP_IN_X:
                out[k] = self.cells[i] + w * empty
                i += 1
            else:
                out[k] = self.total_weight * empty + w * x.masses[j]
                j += 1
        self.cells = out
        self.total_weight += w
        self.merged_count += 1
        return al

    def vote(self) -> AlternativesMatrix:
        if self.merged_count < 1:
            raise ValueError("cannot vote on an empty network")
        return AlternativesMatrix(self.alphabet, self.normalized())


def align(net: TransitionNetwork, x: AlternativesMatrix) -> Alignment:
    return net.align(x)


def merge(net: TransitionNetwork, x: AlternativesMatrix, w: float) -> TransitionNetwork:
    net.merge(x, w)
    return net


def vote(net: TransitionNetwork) -> AlternativesMatrix:
    return net.vote()


def combine(frames: Sequence[FrameSample], weights) -> AlternativesMatrix:
    """Integrate frame results in order; zero-weight frames are skipped entirely."""
    weights = np.asarray(weights, dtype=np.float64)
    if len(frames) != weights.shape[0]:
        raise ValueError(f"{len(frames)} frames but {weights.shape[0]} weights")
    if np.any(weights < 0):
        raise ValueError("weights must be non-negative")
    net = None
    for frame, w in zip(frames, weights):
        if w <= 0:
            continue
        if net is None:
            net = TransitionNetwork(frame.result.alphabet)
        net.merge(frame.result, w)
    if net is None:
        raise ValueError("at least one weight must be positive")
    return net.vote()
