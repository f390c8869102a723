"""
Run configuration: flat ``key = value`` files, overridable by CLI flags.

Example::

    # weak-end sweep at N = 20
    n = 20
    lambda2 = [0.2]
    lambda1_min = 0.005
    lambda1_max = 1.0
    lambda1_step = 0.005
    beta = inf
"""

from __future__ import annotations

import dataclasses
import math
from dataclasses import dataclass, field
from typing import Optional


class ConfigError(ValueError):
    pass


@dataclass
class RunConfig:
    n: list = field(default_factory=lambda: [20])
    lambda2: list = field(default_factory=lambda: [0.2])
    lambda1_min: float = 0.005
    lambda1_max: float = 1.0
    lambda1_step: float = 0.005
    lambda2_min: float = 0.005
    lambda2_max: float = 1.0
    lambda2_step: float = 0.005
    gamma: float = 0.0
    gamma_min: float = 0.0
    gamma_max: float = 1.0
    gamma_step: float = 0.025
    t_min: float = 1e-5
    t_max: float = 3e-3
    t_step: float = 1e-5
    beta: float = math.inf
    eps: float = 1e-3
    eps_e: float = 1e-6
    relative_tol: bool = False
    rho_min: float = 0.99
    gap_tol: float = 1e-8
    detector: str = "magnitude"
    count: int = 20
    seed: int = 0
    oracle_check: bool = False
    out: Optional[str] = None
    format: str = "csv"
    jobs: int = 1

    #: keys that never change the numbers and are left out of dataset headers
    RUNTIME_KEYS = ("out", "format", "jobs")

    def items(self):
        return [(f.name, getattr(self, f.name)) for f in dataclasses.fields(self)]

    def header_items(self):
        return [(k, v) for k, v in self.items() if k not in self.RUNTIME_KEYS]


_FIELDS = {f.name: f for f in dataclasses.fields(RunConfig)}
_LIST_KEYS = {"n", "lambda2"}
_INT_KEYS = {"count", "seed", "jobs"}
_BOOL_KEYS = {"relative_tol", "oracle_check"}
_STR_KEYS = {"detector", "out", "format"}


def _scalar(key, text):
    text = text.strip()
    try:
        if key in _BOOL_KEYS:
            low = text.lower()
            if low in ("1", "true", "yes", "on"):
                return True
            if low in ("0", "false", "no", "off"):
                return False
            raise ValueError(text)
        if key in _STR_KEYS:
            return text.strip("\"'")
        if key in _INT_KEYS or key == "n":
            return int(text)
        return float(text)
    except ValueError:
        raise ConfigError(f"bad value for {key!r}: {text!r}") from None


def parse_value(key: str, text: str):
    if key not in _FIELDS:
        raise ConfigError(f"unknown config key {key!r}")
    text = text.strip()
    if key in _LIST_KEYS:
        if text.startswith("[") and text.endswith("]"):
            body = text[1:-1].strip()
            parts = [p for p in body.split(",") if p.strip()] if body else []
        else:
            parts = [text]
        if not parts:
            raise ConfigError(f"{key!r} must not be empty")
        return [_scalar(key, p) for p in parts]
    return _scalar(key, text)


def parse_config_text(text: str) -> dict:
    values = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected 'key = value', got {raw!r}")
        key, val = (s.strip() for s in line.split("=", 1))
        try:
            values[key] = parse_value(key, val)
        except ConfigError as exc:
            raise ConfigError(f"line {lineno}: {exc}") from None
    return values


def load_config(path: str) -> dict:
    try:
        with open(path) as fh:
            return parse_config_text(fh.read())
    except OSError as exc:
        raise ConfigError(f"cannot read config {path!r}: {exc}") from None


def build_config(file_values: dict, flag_values: dict) -> RunConfig:
    """Defaults, then the config file, then flags (flags win)."""
    merged = {}
    merged.update(file_values)
    merged.update({k: v for k, v in flag_values.items() if v is not None})
    cfg = RunConfig(**merged)
    validate(cfg)
    return cfg


def validate(cfg: RunConfig) -> None:
    if not cfg.n or any(n < 2 for n in cfg.n):
        raise ConfigError(f"n must be a non-empty list of integers >= 2, got {cfg.n}")
    if not cfg.lambda2 or any(not (0 < l2 <= 1) for l2 in cfg.lambda2):
        raise ConfigError(f"lambda2 values must lie in (0, 1], got {cfg.lambda2}")
    for prefix in ("lambda1", "lambda2", "gamma", "t"):
        lo, hi, step = (getattr(cfg, f"{prefix}_{s}") for s in ("min", "max", "step"))
        if not step > 0:
            raise ConfigError(f"{prefix}_step must be positive, got {step}")
        if hi < lo:
            raise ConfigError(f"empty {prefix} grid: min={lo} > max={hi}")
    if not (0 < cfg.lambda1_min and cfg.lambda1_max <= 1):
        raise ConfigError("lambda1 grid must lie within (0, 1]")
    if not cfg.t_min > 0:
        raise ConfigError("temperatures must be positive")
    if not cfg.beta > 0:
        raise ConfigError("beta must be positive (use inf for the ground state)")
    if not cfg.eps > 0 or not cfg.eps_e >= 0:
        raise ConfigError("tolerances must be positive")
    if not 0 < cfg.rho_min <= 1:
        raise ConfigError("rho_min must lie in (0, 1]")
    if cfg.format not in ("csv", "json"):
        raise ConfigError(f"format must be csv or json, got {cfg.format!r}")
    if cfg.detector not in ("drop", "magnitude"):
        raise ConfigError(f"detector must be 'drop' or 'magnitude', got {cfg.detector!r}")
    if cfg.jobs < 1:
        raise ConfigError("jobs must be >= 1")
    if cfg.count < 1:
        raise ConfigError("count must be >= 1")
