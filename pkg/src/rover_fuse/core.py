"""Domain types: alphabets, alternatives matrices, frames and clips."""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path
from typing import TYPE_CHECKING, Optional

import numpy as np

if TYPE_CHECKING:
    from .focus import GrayImage

NORM_TOL = 1e-9


class AlphabetMismatch(ValueError):
    """Two objects were built over different alphabets."""


@dataclass(frozen=True)
class Alphabet:
    """Ordered character classes. EMPTY is the implicit extra index ``size``."""

    symbols: str

    def __post_init__(self):
        if len(self.symbols) < 1:
            raise ValueError("alphabet must contain at least one symbol")
        if len(set(self.symbols)) != len(self.symbols):
            raise ValueError(f"alphabet symbols are not unique: {self.symbols!r}")

    @property
    def size(self) -> int:
        return len(self.symbols)

    @property
    def empty_index(self) -> int:
        return len(self.symbols)

    def index(self, symbol: str) -> int:
        """Index of ``symbol``; the empty string maps to EMPTY."""
        if symbol == "":
            return self.empty_index
        pos = self.symbols.find(symbol)
        if pos < 0 or len(symbol) != 1:
            raise KeyError(f"symbol {symbol!r} not in alphabet")
        return pos

    def crisp(self, symbol: str) -> np.ndarray:
        out = np.zeros(self.size + 1)
        out[self.index(symbol)] = 1.0
        return out

    def empty(self) -> np.ndarray:
        return self.crisp("")


def check_distribution(masses: np.ndarray, tol: float = NORM_TOL) -> None:
    """Raise ValueError unless every row of ``masses`` lies on the simplex."""
    masses = np.asarray(masses, dtype=float)
    if masses.size == 0:
        return
    if np.any(masses < -tol) or np.any(masses > 1 + tol):
        raise ValueError("membership masses must lie in [0, 1]")
    sums = masses.sum(axis=-1)
    if np.any(np.abs(sums - 1.0) > tol):
        raise ValueError(f"membership masses must sum to 1, got {sums}")


@dataclass(frozen=True, eq=False)
class AlternativesMatrix:
    """A string recognition result: one distribution per character position.

    ``masses`` has shape ``(M, K + 1)``; the last column is EMPTY mass, which is
    zero for raw recognizer output and may be positive after voting.
    """

    alphabet: Alphabet
    masses: np.ndarray

    def __post_init__(self):
        arr = np.array(self.masses, dtype=np.float64, copy=True)
        if arr.ndim == 1 and arr.size == 0:
            arr = arr.reshape(0, self.alphabet.size + 1)
        if arr.ndim != 2 or arr.shape[1] != self.alphabet.size + 1:
            raise AlphabetMismatch(
                f"expected columns of width {self.alphabet.size + 1}, got shape {arr.shape}"
            )
        check_distribution(arr)
        arr.setflags(write=False)
        object.__setattr__(self, "masses", arr)

    def __len__(self) -> int:
        return self.masses.shape[0]

    @property
    def columns(self) -> list[np.ndarray]:
        return list(self.masses)

    @classmethod
    def from_string(cls, text: str, alphabet: Alphabet) -> "AlternativesMatrix":
        """Crisp matrix: every column puts mass 1 on the corresponding symbol."""
        masses = np.zeros((len(text), alphabet.size + 1))
        for i, ch in enumerate(text):
            masses[i, alphabet.index(ch)] = 1.0
        return cls(alphabet, masses)

    @classmethod
    def empty_result(cls, alphabet: Alphabet) -> "AlternativesMatrix":
        return cls(alphabet, np.zeros((0, alphabet.size + 1)))

    def __eq__(self, other):
        if not isinstance(other, AlternativesMatrix):
            return NotImplemented
        return self.alphabet == other.alphabet and np.array_equal(self.masses, other.masses)

    __hash__ = None

    # JSON: {"alphabet": "...", "columns": [[{"c": "A", "q": 0.9}, ...], ...]}
    def to_json_obj(self) -> dict:
        cols = []
        for row in self.masses:
            cells = []
            for k in np.flatnonzero(row):
                sym = "" if k == self.alphabet.empty_index else self.alphabet.symbols[k]
                cells.append({"c": sym, "q": float(row[k])})
            cols.append(cells)
        return {"alphabet": self.alphabet.symbols, "columns": cols}

    @classmethod
    def from_json_obj(cls, obj: dict) -> "AlternativesMatrix":
        alphabet = Alphabet(obj["alphabet"])
        masses = np.zeros((len(obj["columns"]), alphabet.size + 1))
        for i, cells in enumerate(obj["columns"]):
            for cell in cells:
                masses[i, alphabet.index(cell["c"])] += float(cell["q"])
        return cls(alphabet, masses)

    def dumps(self) -> str:
        return json.dumps(self.to_json_obj(), separators=(",", ":"))

    @classmethod
    def loads(cls, text: str) -> "AlternativesMatrix":
        return cls.from_json_obj(json.loads(text))

    def save(self, path) -> None:
        Path(path).write_text(self.dumps() + "\n", encoding="utf-8")

    @classmethod
    def load(cls, path) -> "AlternativesMatrix":
        return cls.loads(Path(path).read_text(encoding="utf-8"))


@dataclass(frozen=True)
class FrameSample:
    result: AlternativesMatrix
    image: Optional[GrayImage] = None
    frame_index: int = 0
    cached_focus: Optional[float] = None
    cached_confidence: Optional[float] = None


@dataclass(frozen=True)
class Clip:
    frames: tuple[FrameSample, ...]
    ground_truth: Optional[str] = None

    def __post_init__(self):
        frames = tuple(self.frames)
        if not frames:
            raise ValueError("a clip needs at least one frame")
        indices = [f.frame_index for f in frames]
        if len(set(indices)) != len(indices):
            raise ValueError("frame_index values must be unique within a clip")
        object.__setattr__(self, "frames", frames)

    def __len__(self) -> int:
        return len(self.frames)


def canonicalize(s: str) -> str:
    """Upper-case and identify the letter O with the digit 0."""
    return s.upper().replace("O", "0")


def argmax_string(x: AlternativesMatrix, alphabet: Optional[Alphabet] = None) -> str:
    """Read out the best symbol per column, dropping columns won by EMPTY.

    Ties go to the lowest index, so a symbol beats EMPTY on a tie.
    """
    alphabet = alphabet or x.alphabet
    if alphabet != x.alphabet:
        raise AlphabetMismatch("matrix and alphabet differ")
    if len(x) == 0:
        return ""
    best = np.argmax(x.masses, axis=1)
    return "".join(alphabet.symbols[k] for k in best if k != alphabet.empty_index)
