import random
from collections import Counter

from plcseg.features import DictMatch, extract_features, find_dict_matches
from plcseg.textmodel import BoundaryFeature, FeatureKind, classify_char

from conftest import ALPHABET

C, T = FeatureKind.CHAR_NGRAM, FeatureKind.TYPE_NGRAM


def enumerate_features(text, i, W, n_max, words):
    """Position-by-position enumeration: every (start, length) in the text."""
    out = Counter()
    for start in range(len(text)):
        for n in range(1, n_max + 1):
            end = start + n
            if end > len(text):
                continue
            if start >= i - W and end <= i + W:
                out[BoundaryFeature(C, text[start:end], start - i)] += 1
                types = "".join(classify_char(ch).name for ch in text[start:end])
                out[BoundaryFeature(T, types, start - i)] += 1
    for start in range(len(text)):
        for end in range(start + 1, len(text) + 1):
            w = text[start:end]
            if w not in words:
                continue
            if start == i:
                out[BoundaryFeature(FeatureKind.DICT_L, w)] += 1
            if end == i:
                out[BoundaryFeature(FeatureKind.DICT_R, w)] += 1
            if start < i < end:
                out[BoundaryFeature(FeatureKind.DICT_I, w)] += 1
    return out


def test_window_char_ngrams_example():
    text = "全世界の人々"
    feats = extract_features(text, 3, 3, 3)
    chars = {(f.pattern, f.rel_pos) for f in feats if f.kind is C}
    assert chars == {
        ("全", -3), ("世", -2), ("界", -1), ("の", 0), ("人", 1), ("々", 2),
        ("全世", -3), ("世界", -2), ("界の", -1), ("の人", 0), ("人々", 1),
        ("全世界", -3), ("世界の", -2), ("界の人", -1), ("の人々", 0),
    }


def test_window_truncated_at_text_start():
    feats = extract_features("abcdef", 1, 3, 2)
    chars = {(f.pattern, f.rel_pos) for f in feats if f.kind is C}
    assert chars == {("a", -1), ("b", 0), ("c", 1), ("d", 2), ("ab", -1), ("bc", 0), ("cd", 1)}


def test_rel_pos_bounds():
    rng = random.Random(2)
    for _ in range(50):
        text = "".join(rng.choices(ALPHABET, k=rng.randint(2, 20)))
        W, n_max = rng.randint(1, 4), rng.randint(1, 4)
        for i in range(1, len(text)):
            for f in extract_features(text, i, W, n_max):
                n = len(f.pattern)
                assert -W <= f.rel_pos <= W - n


def test_dict_matches_frequency_semantics():
    matches = find_dict_matches("abab", {"ab", "b", "aba"})
    assert matches == [
        DictMatch("ab", 0, 2), DictMatch("aba", 0, 3), DictMatch("b", 1, 2), DictMatch("ab", 2, 4), DictMatch("b", 3, 4)
    ]
    feats = extract_features("abab", 2, 1, 1, matches)
    L, I, R = FeatureKind.DICT_L, FeatureKind.DICT_I, FeatureKind.DICT_R
    assert feats[BoundaryFeature(L, "ab")] == 1
    assert feats[BoundaryFeature(R, "ab")] == 1
    assert feats[BoundaryFeature(R, "b")] == 1
    assert feats[BoundaryFeature(I, "aba")] == 1


def test_random_texts_equal_enumerator():
    rng = random.Random(8)
    for _ in range(200):
        text = "".join(rng.choices("あア世0A!", k=rng.randint(2, 15)))
        words = {"".join(rng.choices("あア世0A!", k=rng.randint(1, 4))) for _ in range(5)}
        W, n_max = rng.randint(1, 4), rng.randint(1, 4)
        matches = find_dict_matches(text, words)
        for i in range(1, len(text)):
            assert extract_features(text, i, W, n_max, matches) == enumerate_features(text, i, W, n_max, words)
