"""Pointwise linear word segmentation with compiled scoring engines."""

from .model_io import load, load_file, save, save_file
from .pma import MatchEvent, PatternAutomaton, build_automaton, find_overlapping, run_with_payload
from .scorer import (
    CONFIGS,
    CompiledEngine,
    DictMode,
    EngineConfig,
    compile_engine,
    score_naive,
    score_with,
    tokenize,
)
from .textmodel import CharType, DictEntry, RawModel, SegmentationResult, WorkCounters, classify_char, type_sequence
from .trainer import TrainConfig, train

__version__ = "0.1.0"
