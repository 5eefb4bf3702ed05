"""Run-wide configuration: size caps, seed, output format."""
from __future__ import annotations

import contextlib
import dataclasses
from dataclasses import dataclass

__version__ = "0.1.0"


@dataclass(frozen=True)
class RunConfig:
    order_cap: int = 200
    dim_cap: int = 256
    seed: int = 0
    output_format: str = "json"
    parallelism: int = 1
    catalog_path: str | None = None

    def __post_init__(self):
        if self.order_cap <= 0 or self.dim_cap <= 0:
            raise ValueError("caps must be positive")
        if self.output_format not in ("json", "csv", "pretty"):
            raise ValueError(f"unknown output format {self.output_format!r}")
        if self.parallelism <= 0:
            raise ValueError("parallelism must be positive")

    def provenance(self) -> dict:
        return {"tool": "tsgreen", "version": __version__, "seed": self.seed,
                "order_cap": self.order_cap, "dim_cap": self.dim_cap}


_current = RunConfig()


def get_config() -> RunConfig:
    return _current


def set_config(cfg: RunConfig) -> None:
    global _current
    _current = cfg


@contextlib.contextmanager
def using_config(**changes):
    """Temporarily override fields of the active configuration."""
    global _current
    old = _current
    _current = dataclasses.replace(old, **changes)
    try:
        yield _current
    finally:
        _current = old
