"""Training a boundary classifier from a segmented corpus."""

from __future__ import annotations

import logging
import warnings
from dataclasses import dataclass
from typing import Sequence

import numpy as np
import scipy.sparse as sp
from sklearn.exceptions import ConvergenceWarning
from sklearn.linear_model import LogisticRegression

from .features import extract_all
from .textmodel import (
    BoundaryFeature,
    DictEntry,
    FeatureKind,
    RawModel,
    quantization_scale,
    quantize,
)

log = logging.getLogger(__name__)


class EmptyCorpusError(ValueError):
    pass


@dataclass(frozen=True)
class TrainConfig:
    window: int = 3
    n_max: int = 3
    C: float = 1.0
    epochs: int = 1000
    seed: int = 0
    tol: float = 1e-4
    dictionary: tuple[str, ...] = ()

    def __post_init__(self) -> None:
        if self.window < 1 or self.n_max < 1:
            raise ValueError("window and n_max must be >= 1")
        if not self.C > 0:
            raise ValueError("C must be positive")


@dataclass
class TrainingExample:
    label: int  # +1 boundary, -1 not
    features: dict[BoundaryFeature, int]


def gold_labels(tokens: Sequence[str]) -> list[int]:
    """Labels of boundaries ``1 .. N-1`` for a tokenized sentence."""
    ends = set()
    pos = 0
    for tok in tokens:
        pos += len(tok)
        ends.add(pos)
    n = pos
    return [1 if i in ends else -1 for i in range(1, n)]


def training_examples(corpus: Sequence[Sequence[str]], config: TrainConfig) -> list[TrainingExample]:
    words = frozenset(config.dictionary)
    out = []
    for tokens in corpus:
        text = "".join(tokens)
        labels = gold_labels(tokens)
        for label, feats in zip(labels, extract_all(text, config.window, config.n_max, words)):
            out.append(TrainingExample(label, dict(feats)))
    return out


def _design_matrix(examples: Sequence[TrainingExample]) -> tuple[sp.csr_matrix, np.ndarray, list[BoundaryFeature]]:
    index: dict[BoundaryFeature, int] = {}
    indptr = [0]
    indices: list[int] = []
    data: list[int] = []
    for ex in examples:
        for f, count in ex.features.items():
            col = index.get(f)
            if col is None:
                col = index[f] = len(index)
            indices.append(col)
            data.append(count)
        indptr.append(len(indices))
    X = sp.csr_matrix(
        (np.asarray(data, dtype=np.float64), np.asarray(indices), np.asarray(indptr)),
        shape=(len(examples), len(index)),
    )
    y = np.asarray([ex.label for ex in examples])
    return X, y, list(index)


def train(corpus: Sequence[Sequence[str]], config: TrainConfig = TrainConfig()) -> RawModel:
    """Fit an L1-regularized logistic regression and quantize it.

    ``corpus`` is a list of sentences, each a list of tokens.  Features whose
    quantized weight is zero are dropped.
    """
    corpus = [list(tokens) for tokens in corpus if "".join(tokens)]
    if not corpus:
        raise EmptyCorpusError("corpus has no non-empty sentences")
    examples = training_examples(corpus, config)
    W = config.window
    if not examples:
        return RawModel(W, config.n_max)
    X, y, features = _design_matrix(examples)

    if len(set(y.tolist())) < 2:
        # single class: bias alone decides
        coef = np.zeros(len(features))
        intercept = 1.0 if y[0] > 0 else -1.0
    else:
        clf = LogisticRegression(
            penalty="l1",
            solver="liblinear",
            C=config.C,
            max_iter=config.epochs,
            tol=config.tol,
            random_state=config.seed,
        )
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", ConvergenceWarning)
            clf.fit(X, y)
        coef = clf.coef_[0]
        intercept = float(clf.intercept_[0])

    scale = quantization_scale(np.append(np.abs(coef), abs(intercept)))
    qcoef = quantize(coef, scale)
    bias = int(quantize([intercept], scale)[0])

    char_w: dict[str, list[int]] = {}
    type_w: dict[str, list[int]] = {}
    dict_w: dict[str, list[int]] = {}
    for f, w in zip(features, qcoef.tolist()):
        if w == 0:
            continue
        if f.kind is FeatureKind.CHAR_NGRAM or f.kind is FeatureKind.TYPE_NGRAM:
            table = char_w if f.kind is FeatureKind.CHAR_NGRAM else type_w
            n = len(f.pattern)
            arr = table.setdefault(f.pattern, [0] * (2 * W - n + 1))
            arr[W - n - f.rel_pos] = w
        else:
            slot = {FeatureKind.DICT_L: 0, FeatureKind.DICT_I: 1, FeatureKind.DICT_R: 2}[f.kind]
            dict_w.setdefault(f.pattern, [0, 0, 0])[slot] = w

    log.info("trained %d features, %d nonzero after quantization", len(features), int(np.count_nonzero(qcoef)))
    return RawModel(
        window=W,
        n_max=config.n_max,
        char_ngram_weights={k: tuple(v) for k, v in sorted(char_w.items())},
        type_ngram_weights={k: tuple(v) for k, v in sorted(type_w.items())},
        dict_entries=tuple(DictEntry(w, *v) for w, v in sorted(dict_w.items())),
        bias=bias,
        quant_scale=scale,
    )
