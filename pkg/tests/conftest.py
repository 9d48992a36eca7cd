import random

import pytest

from plcseg.scorer import CONFIGS, DictMode, EngineConfig
from plcseg.synth import random_model

# 20 symbols covering all six character types
ALPHABET = "あいうのアイウー世界人全01２AbＺ!。"

ALL_CONFIGS = {
    **CONFIGS,
    "a+short": EngineConfig(False, DictMode.SHORT, False),
    "b+short": EngineConfig(True, DictMode.SHORT, False),
    "e+short": EngineConfig(True, DictMode.SHORT, True),
    "b+all": EngineConfig(True, DictMode.ALL, False),
}

_acceptance_lines: list[str] = []


def random_text(rng: random.Random, max_len: int = 30, alphabet: str = ALPHABET) -> str:
    return "".join(rng.choices(alphabet, k=rng.randint(1, max_len)))


def make_model(rng: random.Random, window: int = 3, n_max: int = 3, **kw):
    kw.setdefault("n_char", rng.randint(0, 40))
    kw.setdefault("n_type", rng.randint(0, 15))
    kw.setdefault("n_dict", rng.randint(0, 12))
    return random_model(rng, ALPHABET, window, n_max, **kw)


@pytest.fixture
def acceptance_report():
    def record(number: int, name: str, passed: bool, detail: str = "") -> None:
        status = "PASS" if passed else "FAIL"
        _acceptance_lines.append(f"[{status}] criterion {number}: {name}" + (f" ({detail})" if detail else ""))

    return record


def pytest_terminal_summary(terminalreporter):
    if _acceptance_lines:
        terminalreporter.section("acceptance criteria")
        for line in sorted(_acceptance_lines, key=lambda s: int(s.split("criterion ")[1].split(":")[0])):
            terminalreporter.write_line(line)
