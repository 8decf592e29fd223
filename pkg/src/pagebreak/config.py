"""Run configuration shared by the CLI commands.

``PAGINATOR_CONFIG`` may point at a key-value file (``key = value`` per
line, ``#`` comments); command-line flags override file values.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, fields
from pathlib import Path

CONFIG_ENV_VAR = "PAGINATOR_CONFIG"


@dataclass
class RunConfig:
    method: str | None = None
    subject_dir: str | None = None
    corpus: str | None = None
    min_articles: int = 50
    svd_k: int = 4
    keyword_cap: int = 500
    twenty_percent_fraction: float = 0.20
    jump_sigma: float = 2.0
    seed: int = 0
    out: str | None = None

    def validate(self) -> None:
        if self.min_articles < 1:
            raise ValueError("min-articles must be a positive integer")
        if self.svd_k < 1:
            raise ValueError("svd-k must be a positive integer")
        if self.keyword_cap < 1:
            raise ValueError("keyword-cap must be a positive integer")
        if not 0.0 < self.twenty_percent_fraction <= 1.0:
            raise ValueError("twenty-percent-fraction must be in (0, 1]")
        if self.jump_sigma <= 0.0:
            raise ValueError("jump-sigma must be positive")


_FIELD_TYPES = {f.name: f.type for f in fields(RunConfig)}


def _parse_value(key: str, raw: str):
    kind = _FIELD_TYPES[key]
    if kind == "int":
        return int(raw)
    if kind == "float":
        return float(raw)
    return raw


def load_config_file(path: str | Path) -> dict[str, object]:
    """Parse a key-value config file into RunConfig field overrides."""
    overrides: dict[str, object] = {}
    for line_number, line in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), start=1):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        key, sep, value = stripped.partition("=")
        if not sep:
            raise ValueError(f"{path}:{line_number}: expected key = value")
        name = key.strip().replace("-", "_")
        if name not in _FIELD_TYPES:
            raise ValueError(f"{path}:{line_number}: unknown option {key.strip()!r}")
        try:
            overrides[name] = _parse_value(name, value.strip())
        except ValueError as exc:
            raise ValueError(f"{path}:{line_number}: bad value for {key.strip()!r}") from exc
    return overrides


def config_from_environment() -> dict[str, object]:
    path = os.environ.get(CONFIG_ENV_VAR)
    if not path:
        return {}
    return load_config_file(path)
