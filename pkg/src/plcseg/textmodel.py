"""Domain types shared by the whole toolkit.

Characters are classified into six types; a model holds integer weights for
character n-grams, character-type n-grams and dictionary words, and scoring
produces a :class:`SegmentationResult`.
"""

from __future__ import annotations

import bisect
import enum
import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable, Mapping, NamedTuple, Sequence

import numpy as np

QUANT_LIMIT = 2**15 - 1


class CharType(enum.IntEnum):
    """Character category; the integer value is the 3-bit code (0 is padding)."""

    H = 1  # hiragana
    T = 2  # katakana
    K = 3  # kanji
    D = 4  # digit
    R = 5  # roman letter
    O = 6  # other

    @property
    def letter(self) -> str:
        return self.name


PADDING_CODE = 0
TYPE_LETTERS = "".join(t.name for t in CharType)
CODE_TABLE: dict[str, int] = {t.name: t.value for t in CharType}

# (first, last, type) inclusive ranges, sorted by first code point
_RANGES: list[tuple[int, int, CharType]] = sorted(
    [
        (0x0030, 0x0039, CharType.D),
        (0x0041, 0x005A, CharType.R),
        (0x0061, 0x007A, CharType.R),
        (0x3040, 0x309F, CharType.H),
        (0x30A0, 0x30FF, CharType.T),
        (0x31F0, 0x31FF, CharType.T),
        (0x3400, 0x4DBF, CharType.K),
        (0x4E00, 0x9FFF, CharType.K),
        (0xFF10, 0xFF19, CharType.D),
        (0xFF21, 0xFF3A, CharType.R),
        (0xFF41, 0xFF5A, CharType.R),
        (0xFF66, 0xFF9F, CharType.T),
        (0x20000, 0x2A6DF, CharType.K),
        (0x2A700, 0x2EBEF, CharType.K),
        (0x30000, 0x323AF, CharType.K),
    ]
)
_RANGE_STARTS = [r[0] for r in _RANGES]


@lru_cache(maxsize=1 << 16)
def classify_char(ch: str) -> CharType:
    cp = ord(ch)
    idx = bisect.bisect_right(_RANGE_STARTS, cp) - 1
    if idx >= 0:
        first, last, ctype = _RANGES[idx]
        if first <= cp <= last:
            return ctype
    return CharType.O


def type_sequence(text: str) -> list[CharType]:
    return [classify_char(ch) for ch in text]


def type_string(text: str) -> str:
    """Type letters of ``text`` as a string, e.g. ``"世界の" -> "KKH"``."""
    return "".join([classify_char(ch).name for ch in text])


def type_codes(text: str) -> list[int]:
    return [classify_char(ch).value for ch in text]


class FeatureKind(enum.Enum):
    CHAR_NGRAM = "c"
    TYPE_NGRAM = "t"
    DICT_L = "L"
    DICT_I = "I"
    DICT_R = "R"


class BoundaryFeature(NamedTuple):
    """A feature active at one boundary.

    ``rel_pos`` is the start of the n-gram relative to the boundary (the
    boundary ``i`` sits between characters ``i-1`` and ``i``), so an n-gram
    of length ``n`` in window ``W`` has ``rel_pos`` in ``[-W, W-n]``.
    Dictionary features carry ``rel_pos=None``.
    """

    kind: FeatureKind
    pattern: str
    rel_pos: int | None = None


class DictEntry(NamedTuple):
    word: str
    left: int
    inside: int
    right: int

    def score_array(self) -> tuple[int, ...]:
        """Weights at boundaries ``k-l .. k`` for an occurrence ending at ``k``."""
        return (self.left,) + (self.inside,) * (len(self.word) - 1) + (self.right,)


class ModelError(ValueError):
    """A model violates a structural invariant."""


@dataclass(frozen=True)
class RawModel:
    """Quantized weights of a pointwise boundary classifier.

    Weight arrays are stored in score-array order: entry ``idx`` of the array
    for an n-gram of length ``n`` is the weight at ``rel_pos = W - n - idx``.
    Dictionary entries are kept sorted by word.
    """

    window: int
    n_max: int
    char_ngram_weights: Mapping[str, tuple[int, ...]] = field(default_factory=dict)
    type_ngram_weights: Mapping[str, tuple[int, ...]] = field(default_factory=dict)
    dict_entries: tuple[DictEntry, ...] = ()
    bias: int = 0
    quant_scale: float = 1.0

    def __post_init__(self) -> None:
        object.__setattr__(
            self, "char_ngram_weights",
            {k: tuple(int(x) for x in v) for k, v in self.char_ngram_weights.items()},
        )
        object.__setattr__(
            self, "type_ngram_weights",
            {k: tuple(int(x) for x in v) for k, v in self.type_ngram_weights.items()},
        )
        object.__setattr__(
            self, "dict_entries",
            tuple(sorted(DictEntry(e[0], int(e[1]), int(e[2]), int(e[3])) for e in self.dict_entries)),
        )
        object.__setattr__(self, "bias", int(self.bias))
        self.validate()

    def validate(self) -> None:
        W = self.window
        if not isinstance(W, int) or W < 1:
            raise ModelError(f"window must be a positive integer, got {W!r}")
        if not isinstance(self.n_max, int) or self.n_max < 1:
            raise ModelError(f"n_max must be a positive integer, got {self.n_max!r}")
        if not (self.quant_scale > 0 and math.isfinite(self.quant_scale)):
            raise ModelError(f"quant_scale must be positive, got {self.quant_scale!r}")
        for label, table in (("char", self.char_ngram_weights), ("type", self.type_ngram_weights)):
            for pattern, weights in table.items():
                n = len(pattern)
                if n == 0:
                    raise ModelError(f"empty {label} n-gram")
                if n > self.n_max or n > 2 * W:
                    raise ModelError(f"{label} n-gram {pattern!r} longer than n_max/window allow")
                if len(weights) != 2 * W - n + 1:
                    raise ModelError(
                        f"{label} n-gram {pattern!r}: expected {2 * W - n + 1} weights, got {len(weights)}"
                    )
        for pattern in self.type_ngram_weights:
            if any(ch not in CODE_TABLE for ch in pattern):
                raise ModelError(f"type n-gram {pattern!r} has unknown type letters")
        seen: set[str] = set()
        for entry in self.dict_entries:
            if not entry.word:
                raise ModelError("empty dictionary word")
            if entry.word in seen:
                raise ModelError(f"duplicate dictionary word {entry.word!r}")
            seen.add(entry.word)

    @property
    def dictionary(self) -> dict[str, DictEntry]:
        return {e.word: e for e in self.dict_entries}

    def num_features(self) -> int:
        """Number of nonzero scalar weights (bias excluded)."""
        n = sum(1 for arr in self.char_ngram_weights.values() for w in arr if w)
        n += sum(1 for arr in self.type_ngram_weights.values() for w in arr if w)
        n += sum((e.left != 0) + (e.inside != 0) + (e.right != 0) for e in self.dict_entries)
        return n

    def pruned(self) -> "RawModel":
        """Drop patterns and words whose weights are all zero."""
        return RawModel(
            window=self.window,
            n_max=self.n_max,
            char_ngram_weights={k: v for k, v in self.char_ngram_weights.items() if any(v)},
            type_ngram_weights={k: v for k, v in self.type_ngram_weights.items() if any(v)},
            dict_entries=tuple(e for e in self.dict_entries if e.left or e.inside or e.right),
            bias=self.bias,
            quant_scale=self.quant_scale,
        )


def quantization_scale(float_weights: Iterable[float]) -> float:
    peak = max((abs(w) for w in float_weights), default=0.0)
    if peak == 0.0:
        return 1.0
    return float(QUANT_LIMIT / peak)


def quantize(values: Sequence[float] | np.ndarray, scale: float) -> np.ndarray:
    """Round-half-to-even of ``values * scale`` as int64."""
    return np.rint(np.asarray(values, dtype=np.float64) * scale).astype(np.int64)


@dataclass
class WorkCounters:
    char_arrays_summed: int = 0
    dict_arrays_summed: int = 0
    type_arrays_summed: int = 0
    type_cache_lookups: int = 0

    def __iadd__(self, other: "WorkCounters") -> "WorkCounters":
        self.char_arrays_summed += other.char_arrays_summed
        self.dict_arrays_summed += other.dict_arrays_summed
        self.type_arrays_summed += other.type_arrays_summed
        self.type_cache_lookups += other.type_cache_lookups
        return self

    def as_dict(self) -> dict[str, int]:
        return {
            "char_arrays_summed": self.char_arrays_summed,
            "dict_arrays_summed": self.dict_arrays_summed,
            "type_arrays_summed": self.type_arrays_summed,
            "type_cache_lookups": self.type_cache_lookups,
        }


def spans_from_boundaries(boundaries: Sequence[bool]) -> list[tuple[int, int]]:
    n = len(boundaries) + 1
    spans = []
    start = 0
    for i, is_boundary in enumerate(boundaries, 1):
        if is_boundary:
            spans.append((start, i))
            start = i
    spans.append((start, n))
    return spans


@dataclass
class SegmentationResult:
    """Scores ``y_1 .. y_{N-1}`` and derived segmentation of ``text``.

    ``scores[i - 1]`` is the score of boundary ``i``.
    """

    text: str
    scores: list[int]
    counters: WorkCounters = field(default_factory=WorkCounters)

    @property
    def boundaries(self) -> list[bool]:
        return [y > 0 for y in self.scores]

    @property
    def tokens(self) -> list[tuple[int, int]]:
        if not self.text:
            return []
        return spans_from_boundaries(self.boundaries)

    @property
    def words(self) -> list[str]:
        return [self.text[a:b] for a, b in self.tokens]
