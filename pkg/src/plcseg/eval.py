"""Segmentation accuracy: boundary error rate and word-level F1.

Both metrics are micro-averaged over a corpus.  A corpus is a list of
sentences and each sentence is a list of tokens.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

Sentence = Sequence[str]


class TextMismatchError(ValueError):
    def __init__(self, index: int, gold: str, pred: str) -> None:
        super().__init__(f"sentence {index}: gold text {gold!r} differs from predicted text {pred!r}")
        self.index = index


def _spans(tokens: Sentence) -> list[tuple[int, int]]:
    out = []
    pos = 0
    for tok in tokens:
        out.append((pos, pos + len(tok)))
        pos += len(tok)
    return out


def boundary_vector(tokens: Sentence) -> list[bool]:
    """Decisions for boundaries ``1 .. N-1``."""
    n = sum(len(t) for t in tokens)
    ends = {end for _, end in _spans(tokens)}
    return [i in ends for i in range(1, n)]


def _check(gold: Sequence[Sentence], pred: Sequence[Sentence]) -> None:
    if len(gold) != len(pred):
        raise ValueError(f"{len(gold)} gold sentences but {len(pred)} predicted")
    for idx, (g, p) in enumerate(zip(gold, pred)):
        gt, pt = "".join(g), "".join(p)
        if gt != pt:
            raise TextMismatchError(idx, gt, pt)


@dataclass
class Scores:
    boundary_errors: int = 0
    boundaries: int = 0
    correct_words: int = 0
    gold_words: int = 0
    pred_words: int = 0

    @property
    def error_rate(self) -> float:
        return self.boundary_errors / self.boundaries if self.boundaries else 0.0

    @property
    def precision(self) -> float:
        return self.correct_words / self.pred_words if self.pred_words else 0.0

    @property
    def recall(self) -> float:
        return self.correct_words / self.gold_words if self.gold_words else 0.0

    @property
    def f1(self) -> float:
        p, r = self.precision, self.recall
        return 2 * p * r / (p + r) if p + r else 0.0


def count(gold: Sequence[Sentence], pred: Sequence[Sentence]) -> Scores:
    _check(gold, pred)
    s = Scores()
    for g, p in zip(gold, pred):
        gb, pb = boundary_vector(g), boundary_vector(p)
        s.boundaries += len(gb)
        s.boundary_errors += sum(a != b for a, b in zip(gb, pb))
        gs, ps = set(_spans(g)), _spans(p)
        s.gold_words += len(gs)
        s.pred_words += len(ps)
        s.correct_words += sum(1 for span in ps if span in gs)
    return s


def boundary_error_rate(gold: Sequence[Sentence], pred: Sequence[Sentence]) -> float:
    return count(gold, pred).error_rate


def word_f1(gold: Sequence[Sentence], pred: Sequence[Sentence]) -> tuple[float, float, float]:
    """(precision, recall, F1); a word counts only if its span matches a gold word exactly."""
    s = count(gold, pred)
    return s.precision, s.recall, s.f1
