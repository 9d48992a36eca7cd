"""Boundary feature extraction.

This is the single feature enumerator used both when training and by the
naive scorer, so train-time and inference-time features cannot drift apart.
"""

from __future__ import annotations

from collections import Counter
from typing import Collection, Iterable, NamedTuple

from .textmodel import BoundaryFeature, FeatureKind, type_string

C = FeatureKind.CHAR_NGRAM
T = FeatureKind.TYPE_NGRAM


class DictMatch(NamedTuple):
    word: str
    start: int
    end: int


def find_dict_matches(text: str, words: Collection[str], max_len: int | None = None) -> list[DictMatch]:
    """Every occurrence of every word, by direct substring lookup."""
    if not words:
        return []
    if max_len is None:
        max_len = max(len(w) for w in words)
    n = len(text)
    out = []
    for j in range(n):
        for k in range(j + 1, min(n, j + max_len) + 1):
            if text[j:k] in words:
                out.append(DictMatch(text[j:k], j, k))
    return out


def extract_features(
    text: str,
    i: int,
    window: int,
    n_max: int,
    dict_matches: Iterable[DictMatch] = (),
    types: str | None = None,
) -> Counter:
    """Multiset of features active at boundary ``i`` (between ``text[i-1]`` and ``text[i]``).

    N-grams must lie fully inside both the text and the ``2*window``
    characters around the boundary.  Every dictionary occurrence touching
    the boundary contributes once: L if it starts at ``i``, R if it ends at
    ``i``, I if ``i`` is strictly inside it.
    """
    if types is None:
        types = type_string(text)
    n_text = len(text)
    feats: Counter = Counter()
    lo_edge = max(0, i - window)
    hi_edge = min(n_text, i + window)
    for n in range(1, n_max + 1):
        for j in range(lo_edge, hi_edge - n + 1):
            rel = j - i
            feats[BoundaryFeature(C, text[j : j + n], rel)] += 1
            feats[BoundaryFeature(T, types[j : j + n], rel)] += 1
    for word, start, end in dict_matches:
        if start == i:
            feats[BoundaryFeature(FeatureKind.DICT_L, word)] += 1
        elif end == i:
            feats[BoundaryFeature(FeatureKind.DICT_R, word)] += 1
        elif start < i < end:
            feats[BoundaryFeature(FeatureKind.DICT_I, word)] += 1
    return feats


def extract_all(
    text: str,
    window: int,
    n_max: int,
    dictionary: Collection[str] = (),
) -> list[Counter]:
    """Features for boundaries ``1 .. N-1`` of ``text``."""
    types = type_string(text)
    matches = find_dict_matches(text, dictionary) if dictionary else []
    return [
        extract_features(text, i, window, n_max, matches, types)
        for i in range(1, len(text))
    ]
