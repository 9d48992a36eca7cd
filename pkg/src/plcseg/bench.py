"""Throughput benchmark over preloaded sentences.

Engines are compiled before timing starts and the sentences are already in
memory, so only boundary scoring is measured.
"""

from __future__ import annotations

import statistics
import time
from dataclasses import dataclass, field
from typing import Callable, Sequence

from .scorer import ALL_PARTS, CONFIGS, compile_engine, score_naive
from .textmodel import RawModel, WorkCounters

ENGINE_NAMES = ("naive",) + tuple(CONFIGS)


@dataclass
class BenchResult:
    engine: str
    times: list[float]
    counters: WorkCounters
    sentences: int
    characters: int
    part_times: dict[str, float] = field(default_factory=dict)

    @property
    def mean(self) -> float:
        return statistics.fmean(self.times)

    @property
    def median(self) -> float:
        return statistics.median(self.times)

    @property
    def sd(self) -> float:
        return statistics.stdev(self.times) if len(self.times) > 1 else 0.0

    def as_dict(self) -> dict:
        out = {
            "engine": self.engine,
            "repetitions": len(self.times),
            "sentences": self.sentences,
            "characters": self.characters,
            "mean_ms": self.mean * 1e3,
            "median_ms": self.median * 1e3,
            "sd_ms": self.sd * 1e3,
            **self.counters.as_dict(),
        }
        for part, t in sorted(self.part_times.items()):
            out[f"{part}_ms"] = t * 1e3
        return out

    def line(self) -> str:
        items = []
        for k, v in self.as_dict().items():
            items.append(f"{k}={v:.3f}" if isinstance(v, float) else f"{k}={v}")
        return " ".join(items)


def _time_pass(fn: Callable[[str], object], sentences: Sequence[str]) -> float:
    t0 = time.perf_counter()
    for s in sentences:
        fn(s)
    return time.perf_counter() - t0


def run_benchmark(
    model: RawModel,
    sentences: Sequence[str],
    engines: Sequence[str] = ("a", "e"),
    repetitions: int = 10,
    breakdown: bool = False,
) -> list[BenchResult]:
    """Time each engine over ``sentences``; ``repetitions`` full passes per engine.

    With ``breakdown`` each compiled engine is also timed with only one of
    its char/dict/type subroutines enabled.
    """
    if repetitions < 1:
        raise ValueError("repetitions must be >= 1")
    chars = sum(len(s) for s in sentences)
    results = []
    for name in engines:
        if name == "naive":
            fn: Callable[[str], object] = lambda s: score_naive(model, s)
            counters = WorkCounters()
            engine = None
        else:
            engine = compile_engine(model, name)
            fn = engine.score
            counters = WorkCounters()
            for s in sentences:
                counters += engine.score(s).counters
        times = [_time_pass(fn, sentences) for _ in range(repetitions)]
        part_times = {}
        if breakdown and engine is not None:
            for part in sorted(ALL_PARTS):
                only = frozenset({part})
                part_times[part] = statistics.median(
                    _time_pass(lambda s: engine.score(s, only), sentences) for _ in range(repetitions)
                )
        results.append(BenchResult(name, times, counters, len(sentences), chars, part_times))
    return results
