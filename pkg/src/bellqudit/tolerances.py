"""Numerical tolerances shared across modules.

Values are read at call time from the module-level ``TOL`` instance, so the
CLI (or a test) can override them through :func:`override` or the
``QP_TOL_OVERRIDES`` environment variable.
"""
from __future__ import annotations

import contextlib
import dataclasses
import os
from dataclasses import dataclass

ENV_VAR = "QP_TOL_OVERRIDES"


@dataclass
class Tolerances:
    norm: float = 1e-9      # probability-sum checks
    renorm: float = 1e-6    # largest drift eligible for silent renormalisation
    survive: float = 1e-300  # smallest admissible B-step survival probability
    tie: float = 1e-12      # uniqueness of the largest dit-error column
    r: float = 1e-9         # width of the r = 2 indeterminate band

    def update(self, **values: float) -> None:
        names = {f.name for f in dataclasses.fields(self)}
        for key, value in values.items():
            if key not in names:
                raise KeyError(f"unknown tolerance {key!r}; expected one of {sorted(names)}")
            value = float(value)
            if not value > 0:
                raise ValueError(f"tolerance {key} must be > 0, got {value}")
            setattr(self, key, value)


TOL = Tolerances()


def parse_overrides(text: str) -> dict[str, float]:
    """Parse ``"norm=1e-8,tie=1e-10"`` into a dict."""
    out: dict[str, float] = {}
    for item in text.split(","):
        item = item.strip()
        if not item:
            continue
        key, sep, value = item.partition("=")
        if not sep:
            raise ValueError(f"malformed tolerance override {item!r} (expected key=value)")
        out[key.strip()] = float(value)
    return out


def apply_env_overrides(environ=os.environ) -> None:
    text = environ.get(ENV_VAR, "")
    if text:
        TOL.update(**parse_overrides(text))


@contextlib.contextmanager
def override(**values: float):
    saved = dataclasses.replace(TOL)
    TOL.update(**values)
    try:
        yield TOL
    finally:
        for f in dataclasses.fields(saved):
            setattr(TOL, f.name, getattr(saved, f.name))
