"""Command line interface: ``plcseg {train,tokenize,evaluate,bench}``.

Exit status is 0 on success, 1 on usage errors and 2 on data errors
(unreadable files, malformed corpora, invalid models).
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from concurrent.futures import ThreadPoolExecutor
from typing import Iterable, TextIO

from . import eval as seg_eval
from .bench import ENGINE_NAMES, run_benchmark
from .model_io import ModelFormatError, load_file, save_file
from .scorer import (
    CONFIGS,
    CacheTooLargeError,
    DictMode,
    EngineConfig,
    ScoreOverflowError,
    compile_engine,
    score_naive,
)
from .textmodel import ModelError, RawModel
from .trainer import EmptyCorpusError, TrainConfig, train

EXIT_OK, EXIT_USAGE, EXIT_DATA = 0, 1, 2


class DataError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def read_corpus(path: str) -> list[list[str]]:
    """Tokenized sentences, one per line, tokens separated by single spaces."""
    corpus = []
    try:
        with open(path, encoding="utf-8") as f:
            for lineno, line in enumerate(f, 1):
                line = line.rstrip("\r\n")
                if not line.strip():
                    continue
                tokens = line.split(" ")
                if any(not t for t in tokens):
                    raise DataError(f"{path}:{lineno}: empty token (leading, trailing or repeated space)")
                if any(ch.isspace() for t in tokens for ch in t):
                    raise DataError(f"{path}:{lineno}: tokens must be separated by single spaces")
                corpus.append(tokens)
    except (OSError, UnicodeDecodeError) as exc:
        raise DataError(f"{path}: {exc}") from exc
    return corpus


def read_words(path: str) -> list[str]:
    try:
        with open(path, encoding="utf-8") as f:
            words = [w.strip() for w in f]
    except (OSError, UnicodeDecodeError) as exc:
        raise DataError(f"{path}: {exc}") from exc
    return sorted({w for w in words if w})


def read_lines(path: str | None) -> list[str]:
    try:
        if path is None or path == "-":
            return [line.rstrip("\r\n") for line in sys.stdin]
        with open(path, encoding="utf-8") as f:
            return [line.rstrip("\r\n") for line in f]
    except (OSError, UnicodeDecodeError) as exc:
        raise DataError(f"{path}: {exc}") from exc


def load_model(path: str) -> RawModel:
    try:
        return load_file(path)
    except OSError as exc:
        raise DataError(f"{path}: {exc}") from exc
    except ModelFormatError as exc:
        raise DataError(f"{path}: {exc}") from exc


def engine_config(args: argparse.Namespace) -> EngineConfig | None:
    """``None`` selects the naive scorer."""
    if args.engine == "naive":
        return None
    if args.engine is not None:
        return CONFIGS[args.engine]
    if args.merge or args.dict_mode or args.type_cache:
        return EngineConfig(args.merge, DictMode(args.dict_mode or "separate"), args.type_cache)
    return CONFIGS["e"]


def _scorer(model: RawModel, config: EngineConfig | None):
    if config is None:
        return lambda text: score_naive(model, text)
    try:
        return compile_engine(model, config).score
    except (CacheTooLargeError, ScoreOverflowError) as exc:
        raise DataError(str(exc)) from exc


def cmd_train(args: argparse.Namespace, stdout: TextIO) -> int:
    corpus = read_corpus(args.corpus)
    words = read_words(args.dict) if args.dict else []
    config = TrainConfig(
        window=args.window, n_max=args.n_max, C=args.C, epochs=args.epochs, seed=args.seed, dictionary=tuple(words)
    )
    try:
        model = train(corpus, config)
    except EmptyCorpusError as exc:
        raise DataError(f"{args.corpus}: {exc}") from exc
    try:
        save_file(model, args.output)
    except OSError as exc:
        raise DataError(f"{args.output}: {exc}") from exc
    n_weights = sum(len(v) for v in model.char_ngram_weights.values())
    n_weights += sum(len(v) for v in model.type_ngram_weights.values()) + 3 * len(model.dict_entries)
    stdout.write(f"sentences={len(corpus)}\n")
    stdout.write(f"char_ngrams={len(model.char_ngram_weights)}\n")
    stdout.write(f"type_ngrams={len(model.type_ngram_weights)}\n")
    stdout.write(f"dict_words={len(model.dict_entries)}\n")
    stdout.write(f"weights={n_weights}\n")
    stdout.write(f"nonzero_weights={model.num_features()}\n")
    stdout.write(f"quant_scale={model.quant_scale!r}\n")
    return EXIT_OK


def _format(result, scores: bool) -> str:
    if scores:
        return " ".join(map(str, result.scores))
    return " ".join(result.words)


def cmd_tokenize(args: argparse.Namespace, stdout: TextIO) -> int:
    model = load_model(args.model)
    score = _scorer(model, engine_config(args))
    lines = read_lines(args.input)
    if args.threads > 1:
        with ThreadPoolExecutor(args.threads) as pool:
            results: Iterable = pool.map(score, lines, chunksize=64)
            out = [_format(r, args.scores) for r in results]
    else:
        out = [_format(score(line), args.scores) for line in lines]
    for line in out:
        stdout.write(line + "\n")
    return EXIT_OK


def cmd_evaluate(args: argparse.Namespace, stdout: TextIO) -> int:
    model = load_model(args.model)
    score = _scorer(model, engine_config(args))
    gold = read_corpus(args.gold)
    pred = [score("".join(tokens)).words for tokens in gold]
    try:
        s = seg_eval.count(gold, pred)
    except seg_eval.TextMismatchError as exc:
        raise DataError(f"{args.gold}: {exc}") from exc
    report = {
        "sentences": len(gold),
        "boundaries": s.boundaries,
        "boundary_errors": s.boundary_errors,
        "boundary_error_rate": s.error_rate,
        "precision": s.precision,
        "recall": s.recall,
        "f1": s.f1,
    }
    for k, v in report.items():
        stdout.write(f"{k}={v:.6f}\n" if isinstance(v, float) else f"{k}={v}\n")
    if args.json:
        with open(args.json, "w", encoding="utf-8") as f:
            json.dump(report, f, indent=2, sort_keys=True)
    return EXIT_OK


def cmd_bench(args: argparse.Namespace, stdout: TextIO) -> int:
    model = load_model(args.model)
    engines = [e.strip() for e in args.engines.split(",") if e.strip()]
    for e in engines:
        if e not in ENGINE_NAMES:
            raise _UsageError(f"unknown engine {e!r}; choose from {', '.join(ENGINE_NAMES)}")
    sentences = [line.replace(" ", "") for line in read_lines(args.corpus)]
    sentences = [s for s in sentences if s]
    try:
        results = run_benchmark(model, sentences, engines, args.repetitions, args.breakdown)
    except (CacheTooLargeError, ScoreOverflowError) as exc:
        raise DataError(str(exc)) from exc
    for r in results:
        stdout.write(r.line() + "\n")
    if args.json:
        with open(args.json, "w", encoding="utf-8") as f:
            json.dump({"results": [r.as_dict() for r in results]}, f, indent=2, sort_keys=True)
    return EXIT_OK


class _UsageError(Exception):
    pass


def _add_engine_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--engine", choices=ENGINE_NAMES, help="engine configuration a-e, or naive (default: e)")
    p.add_argument("--merge", action="store_true", help="merge char n-gram arrays per automaton state")
    p.add_argument("--dict-mode", choices=[m.value for m in DictMode], help="dictionary integration mode")
    p.add_argument("--type-cache", action="store_true", help="look up type n-gram scores in a cache")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="plcseg", description="Pointwise linear word segmentation")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("train", help="train a model from a tokenized corpus")
    p.add_argument("corpus")
    p.add_argument("-o", "--output", required=True, help="model file to write")
    p.add_argument("--dict", help="dictionary file, one word per line")
    p.add_argument("-W", "--window", type=int, default=3)
    p.add_argument("-n", "--n-max", type=int, default=3)
    p.add_argument("-C", type=float, default=1.0, help="inverse L1 regularization strength")
    p.add_argument("--epochs", type=int, default=1000, help="solver iteration budget")
    p.add_argument("--seed", type=int, default=0)

    p = sub.add_parser("tokenize", help="segment raw text, one sentence per line")
    p.add_argument("model")
    p.add_argument("-i", "--input", help="input file (default: stdin)")
    p.add_argument("--scores", action="store_true", help="print boundary scores instead of tokens")
    p.add_argument("--threads", type=int, default=1)
    _add_engine_args(p)

    p = sub.add_parser("evaluate", help="score a model against a tokenized gold corpus")
    p.add_argument("model")
    p.add_argument("gold")
    p.add_argument("--json", help="also write the report as JSON")
    _add_engine_args(p)

    p = sub.add_parser("bench", help="time engines over a corpus")
    p.add_argument("model")
    p.add_argument("corpus", help="raw or tokenized sentences, one per line")
    p.add_argument("--engines", default="a,e", help="comma-separated list of naive,a,b,c,d,e")
    p.add_argument("-r", "--repetitions", type=int, default=10)
    p.add_argument("--breakdown", action="store_true", help="also time char/dict/type subroutines alone")
    p.add_argument("--json", help="also write the report as JSON")
    return parser


def main(argv: list[str] | None = None, stdout: TextIO | None = None) -> int:
    stdout = stdout or sys.stdout
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(message)s")
    if getattr(args, "threads", 1) < 1 or getattr(args, "repetitions", 1) < 1:
        parser.error("--threads and --repetitions must be >= 1")
    try:
        if args.command == "train":
            if args.window < 1 or args.n_max < 1 or not args.C > 0:
                parser.error("window and n-max must be >= 1 and C > 0")
            return cmd_train(args, stdout)
        if args.command == "tokenize":
            return cmd_tokenize(args, stdout)
        if args.command == "evaluate":
            return cmd_evaluate(args, stdout)
        return cmd_bench(args, stdout)
    except _UsageError as exc:
        parser.error(str(exc))
    except (DataError, ModelError) as exc:
        print(f"plcseg: {exc}", file=sys.stderr)
        return EXIT_DATA
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
