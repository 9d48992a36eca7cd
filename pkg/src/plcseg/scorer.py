"""Boundary scoring engines.

``score_naive`` evaluates the linear model feature by feature and is the
reference every compiled engine must reproduce exactly.  ``compile_engine``
turns a :class:`RawModel` into a :class:`CompiledEngine` for one of the
configurations below; all precomputation happens at compile time.

==========  ===========  =========  ==========
config      merge char   dict mode  type cache
==========  ===========  =========  ==========
a           no           separate   no
b           yes          separate   no
c           no           all        no
d           no           separate   yes
e           yes          all        yes
==========  ===========  =========  ==========
"""

from __future__ import annotations

import array
import enum
from dataclasses import dataclass
from operator import add
from typing import Mapping, Sequence

import numpy as np

from .features import extract_all
from .pma import (
    ROOT,
    PatternAutomaton,
    Payload,
    add_clipped,
    build_automaton,
    run_with_payload,
)
from .textmodel import (
    CODE_TABLE,
    BoundaryFeature,
    DictEntry,
    FeatureKind,
    RawModel,
    SegmentationResult,
    WorkCounters,
    type_string,
)

MAX_CACHE_WINDOW = 4
SCORE_LIMIT = 2**31 - 1


class CacheTooLargeError(ValueError):
    """The type-score cache would need more than 2**24 entries."""


class ScoreOverflowError(ValueError):
    """Worst-case accumulation at one boundary does not fit in 32 bits."""


class DictMode(enum.Enum):
    SEPARATE = "separate"
    SHORT = "short"
    ALL = "all"


@dataclass(frozen=True)
class EngineConfig:
    merge_char_scores: bool = False
    dict_mode: DictMode = DictMode.SEPARATE
    type_cache: bool = False

    @classmethod
    def named(cls, name: str) -> "EngineConfig":
        try:
            return CONFIGS[name]
        except KeyError:
            raise ValueError(f"unknown engine {name!r}; expected one of {', '.join(CONFIGS)}") from None

    @property
    def label(self) -> str:
        for name, cfg in CONFIGS.items():
            if cfg == self:
                return name
        parts = ["merge" if self.merge_char_scores else "nomerge", self.dict_mode.value]
        if self.type_cache:
            parts.append("cache")
        return "+".join(parts)


CONFIGS: dict[str, EngineConfig] = {
    "a": EngineConfig(False, DictMode.SEPARATE, False),
    "b": EngineConfig(True, DictMode.SEPARATE, False),
    "c": EngineConfig(False, DictMode.ALL, False),
    "d": EngineConfig(False, DictMode.SEPARATE, True),
    "e": EngineConfig(True, DictMode.ALL, True),
}


# --------------------------------------------------------------------------
# reference scorer


def feature_weight(model: RawModel, feature: BoundaryFeature, dictionary: Mapping[str, DictEntry] | None = None) -> int:
    kind = feature.kind
    if kind is FeatureKind.CHAR_NGRAM or kind is FeatureKind.TYPE_NGRAM:
        table = model.char_ngram_weights if kind is FeatureKind.CHAR_NGRAM else model.type_ngram_weights
        weights = table.get(feature.pattern)
        if weights is None:
            return 0
        return weights[model.window - len(feature.pattern) - feature.rel_pos]
    if dictionary is None:
        dictionary = model.dictionary
    entry = dictionary.get(feature.pattern)
    if entry is None:
        return 0
    if kind is FeatureKind.DICT_L:
        return entry.left
    if kind is FeatureKind.DICT_R:
        return entry.right
    return entry.inside


def score_naive(model: RawModel, text: str) -> SegmentationResult:
    dictionary = model.dictionary
    scores = []
    for feats in extract_all(text, model.window, model.n_max, dictionary.keys()):
        y = model.bias
        for f, count in feats.items():
            y += count * feature_weight(model, f, dictionary)
        scores.append(y)
    return SegmentationResult(text, scores)


# --------------------------------------------------------------------------
# compile-time precomputation


def char_score_arrays(model: RawModel) -> dict[str, Payload]:
    """Character n-gram score arrays, placed at ``k - W`` for a match ending at ``k``."""
    W = model.window
    return {q: Payload(w, -W) for q, w in model.char_ngram_weights.items()}


def dict_score_arrays(entries: Sequence[DictEntry]) -> dict[str, Payload]:
    """Dictionary L/I/R arrays, placed at ``k - l`` for a word of length ``l`` ending at ``k``."""
    return {e.word: Payload(e.score_array(), -len(e.word)) for e in entries}


def sum_payloads(parts: Sequence[Payload], min_start: int | None = None) -> Payload:
    """Elementwise sum of arrays aligned on their start offsets (relative to ``k``)."""
    start = min(p.start_offset for p in parts)
    if min_start is not None and min_start < start:
        start = min_start
    end = max(p.start_offset + len(p.weights) for p in parts)
    acc = [0] * (end - start)
    for weights, offset in parts:
        lo = offset - start
        acc[lo : lo + len(weights)] = map(add, acc[lo : lo + len(weights)], weights)
    return Payload(tuple(acc), start)


def integrate_dict_short(model: RawModel) -> tuple[dict[str, Payload], list[DictEntry]]:
    """Split the dictionary: words with ``l <= W`` are folded into the char side.

    Returns the char-side arrays of the short words and the long entries that
    stay in a separate automaton.
    """
    W = model.window
    short = [e for e in model.dict_entries if len(e.word) <= W]
    long = [e for e in model.dict_entries if len(e.word) > W]
    return dict_score_arrays(short), long


def integrate_dict_all(model: RawModel) -> tuple[dict[str, Payload], list[DictEntry]]:
    return dict_score_arrays(model.dict_entries), []


def combine_pattern_arrays(char_arrays: Mapping[str, Payload], dict_arrays: Mapping[str, Payload]) -> dict[str, Payload]:
    """Per-pattern arrays for the char automaton.

    A word missing from the n-gram table enters with a zero n-gram array, so
    its array is just the dictionary part.
    """
    combined = dict(char_arrays)
    for word, arr in dict_arrays.items():
        if word in combined:
            combined[word] = sum_payloads([combined[word], arr])
        else:
            combined[word] = arr
    return combined


def merge_char_scores(pma: PatternAutomaton, pattern_arrays: Sequence[Payload], window: int) -> list[Payload | None]:
    """Partial sum per state of the arrays of every pattern it reports.

    Payloads start at ``k - max(W, l)`` where ``l`` is the longest dictionary
    word reaching further left than the window.  States whose sum is all
    zero carry no payload.
    """
    payload: list[Payload | None] = [None] * pma.size
    for s in pma.states():
        outs = pma.outputs[s]
        if not outs:
            continue
        merged = sum_payloads([pattern_arrays[pid] for pid, _ in outs], min_start=-window)
        if any(merged.weights):
            payload[s] = merged
    return payload


def build_type_cache(model: RawModel) -> np.ndarray:
    """Total type n-gram score for every padded window of ``2W`` type codes.

    Entry ``id`` encodes window slot ``k`` (0 = leftmost) in bits
    ``3*(2W-1-k) .. 3*(2W-1-k)+2``.  Slots outside the text hold code 0,
    which no pattern contains, so out-of-text n-grams never match.
    """
    W = model.window
    if W > MAX_CACHE_WINDOW:
        raise CacheTooLargeError(
            f"type cache needs 2**{6 * W} entries for window {W}; limit is window {MAX_CACHE_WINDOW}"
        )
    table = np.zeros((8,) * (2 * W), dtype=np.int64)
    for pattern, weights in model.type_ngram_weights.items():
        n = len(pattern)
        codes = [CODE_TABLE[ch] for ch in pattern]
        for idx, w in enumerate(weights):
            if not w:
                continue
            slot0 = (W - n - idx) + W
            index: list = [slice(None)] * (2 * W)
            index[slot0 : slot0 + n] = codes
            table[tuple(index)] += w
    return table.reshape(-1)


def sequence_id_init() -> int:
    return 0


def sequence_id_step(seq_id: int, code: int, window: int) -> int:
    """Slide the window by one character whose type code is ``code`` (0 = padding)."""
    return ((seq_id << 3) + code) % (1 << (6 * window))


def sequence_ids(codes: Sequence[int], window: int) -> list[int]:
    """Ids of the windows of boundaries ``1 .. N-1`` for a text with type ``codes``."""
    n = len(codes)
    padded = list(codes) + [0] * (window + 1)
    sid = sequence_id_init()
    for j in range(window + 1):
        sid = sequence_id_step(sid, padded[j], window)
    out = []
    for i in range(1, n):
        out.append(sid)
        sid = sequence_id_step(sid, padded[i + window], window)
    return out


def worst_case_score(model: RawModel) -> int:
    """Upper bound on ``|y_i|`` for any text and boundary."""
    bound = abs(model.bias)
    for table in (model.char_ngram_weights, model.type_ngram_weights):
        slot_max: dict[tuple[int, int], int] = {}
        for pattern, weights in table.items():
            n = len(pattern)
            for idx, w in enumerate(weights):
                key = (n, idx)
                slot_max[key] = max(slot_max.get(key, 0), abs(w))
        bound += sum(slot_max.values())
    by_len: dict[int, list[int]] = {}
    for e in model.dict_entries:
        m = by_len.setdefault(len(e.word), [0, 0, 0])
        m[0] = max(m[0], abs(e.left))
        m[1] = max(m[1], abs(e.inside))
        m[2] = max(m[2], abs(e.right))
    for length, (ml, mi, mr) in by_len.items():
        bound += ml + mr + (length - 1) * mi
    return bound


# --------------------------------------------------------------------------
# engine


ALL_PARTS = frozenset({"char", "dict", "type"})


def _state_arrays(pma: PatternAutomaton, pattern_arrays: Sequence[Payload]) -> list[tuple[Payload, ...]]:
    return [tuple(pattern_arrays[pid] for pid, _ in outs) for outs in pma.outputs]


def _run_pattern_arrays(pma: PatternAutomaton, state_arrays: list[tuple[Payload, ...]], seq, y: list[int]) -> int:
    """Algorithm-1 style accumulation: one array per reported occurrence."""
    base, check, fail, codes = pma.base, pma.check, pma.fail, pma.code_table
    size = len(check)
    n = len(seq)
    added = 0
    s = ROOT
    for k, sym in enumerate(seq, 1):
        c = codes.get(sym, 0)
        if c:
            while True:
                t = base[s] ^ c
                if t < size and check[t] == s:
                    s = t
                    break
                if s == ROOT:
                    break
                s = fail[s]
        else:
            s = ROOT
        arrays = state_arrays[s]
        if arrays:
            for weights, offset in arrays:
                p = k + offset
                hi = p + len(weights)
                if p >= 1 and hi <= n:
                    y[p:hi] = map(add, y[p:hi], weights)
                else:
                    add_clipped(y, n, p, weights)
            added += len(arrays)
    return added


@dataclass(frozen=True, eq=False)
class CompiledEngine:
    config: EngineConfig
    window: int
    bias: int
    char_pma: PatternAutomaton | None
    char_arrays: tuple[Payload, ...]
    dict_pma: PatternAutomaton | None
    dict_arrays: tuple[Payload, ...]
    type_pma: PatternAutomaton | None
    type_arrays: tuple[Payload, ...]
    type_cache_table: array.array | None

    def __post_init__(self) -> None:
        # per-state array lists for the unmerged paths
        object.__setattr__(
            self, "_char_states",
            _state_arrays(self.char_pma, self.char_arrays)
            if self.char_pma is not None and not self.config.merge_char_scores else None,
        )
        object.__setattr__(
            self, "_dict_states",
            _state_arrays(self.dict_pma, self.dict_arrays) if self.dict_pma is not None else None,
        )
        object.__setattr__(
            self, "_type_states",
            _state_arrays(self.type_pma, self.type_arrays) if self.type_pma is not None else None,
        )

    @property
    def state_scores(self) -> list[Payload | None] | None:
        return self.char_pma.payload if self.char_pma is not None else None

    def score(self, text: str, parts: frozenset[str] = ALL_PARTS) -> SegmentationResult:
        n = len(text)
        counters = WorkCounters()
        if n == 0:
            return SegmentationResult(text, [], counters)
        y = [self.bias] * (n + 1)
        if self.char_pma is not None and "char" in parts:
            if self.config.merge_char_scores:
                counters.char_arrays_summed = run_with_payload(self.char_pma, text, y)
            else:
                counters.char_arrays_summed = _run_pattern_arrays(self.char_pma, self._char_states, text, y)
        if self.dict_pma is not None and "dict" in parts:
            counters.dict_arrays_summed = _run_pattern_arrays(self.dict_pma, self._dict_states, text, y)
        if "type" in parts:
            if self.type_cache_table is not None:
                table = self.type_cache_table
                W = self.window
                mask = (1 << (6 * W)) - 1
                codes = [CODE_TABLE[ch] for ch in type_string(text)]
                codes.extend([0] * (W + 1))
                sid = 0
                for j in range(W + 1):
                    sid = ((sid << 3) | codes[j]) & mask
                for i in range(1, n):
                    y[i] += table[sid]
                    sid = ((sid << 3) | codes[i + W]) & mask
                counters.type_cache_lookups = n - 1
            elif self.type_pma is not None:
                counters.type_arrays_summed = _run_pattern_arrays(
                    self.type_pma, self._type_states, type_string(text), y
                )
        return SegmentationResult(text, y[1:n], counters)


def compile_engine(model: RawModel, config: EngineConfig | str = "e") -> CompiledEngine:
    if isinstance(config, str):
        config = EngineConfig.named(config)
    W = model.window
    if config.type_cache and W > MAX_CACHE_WINDOW:
        raise CacheTooLargeError(
            f"type cache needs 2**{6 * W} entries for window {W}; limit is window {MAX_CACHE_WINDOW}"
        )
    bound = worst_case_score(model)
    if bound > SCORE_LIMIT:
        raise ScoreOverflowError(f"worst-case boundary score {bound} exceeds {SCORE_LIMIT}")

    if config.dict_mode is DictMode.SEPARATE:
        integrated: dict[str, Payload] = {}
        separate = list(model.dict_entries)
    elif config.dict_mode is DictMode.SHORT:
        integrated, separate = integrate_dict_short(model)
    else:
        integrated, separate = integrate_dict_all(model)

    combined = combine_pattern_arrays(char_score_arrays(model), integrated)
    char_pma = None
    char_arrays: tuple[Payload, ...] = ()
    if combined:
        char_pma = build_automaton(list(combined))
        char_arrays = tuple(combined[q] for q in char_pma.patterns)
        if config.merge_char_scores:
            char_pma = char_pma.with_payload(merge_char_scores(char_pma, char_arrays, W))

    dict_pma = None
    dict_arrays: tuple[Payload, ...] = ()
    if separate:
        arrays = dict_score_arrays(separate)
        dict_pma = build_automaton(list(arrays))
        dict_arrays = tuple(arrays[w] for w in dict_pma.patterns)

    type_pma = None
    type_arrays: tuple[Payload, ...] = ()
    cache = None
    if config.type_cache:
        cache = array.array("q", build_type_cache(model).tobytes())
    elif model.type_ngram_weights:
        type_pma = build_automaton(list(model.type_ngram_weights))
        type_arrays = tuple(Payload(model.type_ngram_weights[q], -W) for q in type_pma.patterns)

    return CompiledEngine(
        config=config,
        window=W,
        bias=model.bias,
        char_pma=char_pma,
        char_arrays=char_arrays,
        dict_pma=dict_pma,
        dict_arrays=dict_arrays,
        type_pma=type_pma,
        type_arrays=type_arrays,
        type_cache_table=cache,
    )


def score_with(engine: CompiledEngine, text: str) -> SegmentationResult:
    return engine.score(text)


def tokenize(engine: CompiledEngine, text: str) -> SegmentationResult:
    """Score ``text``; the result's ``tokens``/``words`` give the segmentation."""
    return engine.score(text)
