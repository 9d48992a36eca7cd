"""Rule-generated corpora and random models for tests and benchmarks.

Sentences alternate content phrases with hiragana function words drawn from
fixed lists.  Content phrases are kanji compounds (adjacent kanji words and
suffixes), katakana loanwords, digit runs, or hiragana words, so most but
not all boundaries coincide with a change of character type.
"""

from __future__ import annotations

import random

from .textmodel import TYPE_LETTERS, DictEntry, RawModel, type_string

HIRAGANA = [chr(c) for c in range(0x3041, 0x3094)]
KATAKANA = [chr(c) for c in range(0x30A1, 0x30F5)]
KANJI = [chr(c) for c in range(0x4E00, 0x4E00 + 400)]
DIGITS = list("0123456789")

PARTICLES = ["の", "は", "が", "を", "に", "で", "と", "へ", "から", "まで", "より", "も"]
SUFFIXES = ["的", "者", "性", "化", "中"]
ENDINGS = ["です", "ます", "した", "する", "ない"]


class CorpusGenerator:
    def __init__(self, seed: int = 0, vocab_size: int = 80) -> None:
        self.rng = random.Random(seed)
        rng = self.rng
        self.kanji_words = sorted({"".join(rng.sample(KANJI, rng.randint(1, 3))) for _ in range(vocab_size)})
        self.hiragana_words = sorted({"".join(rng.choices(HIRAGANA, k=rng.randint(2, 4))) for _ in range(vocab_size // 4)})
        self.katakana_words = sorted(
            {"".join(rng.choices(KATAKANA, k=rng.randint(2, 5))) + rng.choice(["", "ー"]) for _ in range(vocab_size // 3)}
        )

    def content_phrase(self) -> list[str]:
        rng = self.rng
        r = rng.random()
        if r < 0.6:
            words = [rng.choice(self.kanji_words)]
            while rng.random() < 0.2:
                words.append(rng.choice(self.kanji_words))
            if rng.random() < 0.2:
                words.append(rng.choice(SUFFIXES))
            return words
        if r < 0.8:
            return [rng.choice(self.katakana_words)]
        if r < 0.9:
            return [rng.choice(self.hiragana_words)]
        return ["".join(rng.choices(DIGITS, k=rng.randint(1, 4)))]

    def sentence(self, min_phrases: int = 2, max_phrases: int = 6) -> list[str]:
        tokens: list[str] = []
        for _ in range(self.rng.randint(min_phrases, max_phrases)):
            tokens.extend(self.content_phrase())
            tokens.append(self.rng.choice(PARTICLES))
            if self.rng.random() < 0.15:
                tokens.append(self.rng.choice(["は", "も"]))
        tokens.extend(self.content_phrase())
        tokens.append(self.rng.choice(ENDINGS))
        tokens.append("。")
        return tokens

    def corpus(self, n: int, **kwargs) -> list[list[str]]:
        return [self.sentence(**kwargs) for _ in range(n)]

    def dictionary(self) -> list[str]:
        return sorted(set(self.kanji_words + self.katakana_words + self.hiragana_words + PARTICLES + SUFFIXES + ENDINGS))


def random_model(
    rng: random.Random,
    alphabet: str,
    window: int,
    n_max: int,
    n_char: int,
    n_type: int = 0,
    n_dict: int = 0,
    max_word_len: int | None = None,
    weight: int = 50,
) -> RawModel:
    """Random model with nonzero weights; patterns drawn from ``alphabet``."""
    top = min(n_max, 2 * window)

    def arr(n: int) -> tuple[int, ...]:
        while True:
            a = tuple(rng.randint(-weight, weight) for _ in range(2 * window - n + 1))
            if any(a):
                return a

    char_w = {}
    for _ in range(n_char):
        n = rng.randint(1, top)
        char_w["".join(rng.choices(alphabet, k=n))] = arr(n)
    type_w = {}
    for _ in range(n_type):
        n = rng.randint(1, top)
        type_w["".join(rng.choices(TYPE_LETTERS, k=n))] = arr(n)
    words = {}
    for _ in range(n_dict):
        w = "".join(rng.choices(alphabet, k=rng.randint(1, max_word_len or 2 * window)))
        words[w] = DictEntry(w, rng.randint(-weight, weight), rng.randint(-weight, weight), rng.randint(-weight, weight))
    return RawModel(
        window=window,
        n_max=n_max,
        char_ngram_weights=char_w,
        type_ngram_weights=type_w,
        dict_entries=tuple(words.values()),
        bias=rng.randint(-weight, weight),
    )


def corpus_model(
    rng: random.Random,
    texts: list[str],
    window: int,
    n_max: int,
    n_char: int,
    dictionary: list[str] = (),
    weight: int = 50,
) -> RawModel:
    """Random weights over n-grams that actually occur in ``texts``.

    Char n-grams are sampled from the observed ones, every observed type
    n-gram gets a weight, and every dictionary word gets an entry.
    """
    top = min(n_max, 2 * window)
    seen: set[str] = set()
    seen_types: set[str] = set()
    for t in texts:
        types = type_string(t)
        for n in range(1, top + 1):
            for j in range(len(t) - n + 1):
                seen.add(t[j : j + n])
                seen_types.add(types[j : j + n])

    def arr(n: int) -> tuple[int, ...]:
        return tuple(rng.randint(-weight, weight) for _ in range(2 * window - n + 1))

    chosen = rng.sample(sorted(seen), min(n_char, len(seen)))
    w = lambda: rng.randint(-weight, weight)
    return RawModel(
        window=window,
        n_max=n_max,
        char_ngram_weights={p: arr(len(p)) for p in chosen},
        type_ngram_weights={p: arr(len(p)) for p in sorted(seen_types)},
        dict_entries=tuple(DictEntry(d, w(), w(), w()) for d in dictionary),
        bias=w(),
    ).pruned()
