"""Experiment configuration files (flat YAML mappings)."""
from __future__ import annotations

import dataclasses
from dataclasses import dataclass, field
from pathlib import Path

import yaml

from ..datagen import SAMPLERS


class ConfigError(ValueError):
    def __init__(self, field_name: str, message: str):
        self.field = field_name
        super().__init__(f"{field_name}: {message}")


def _check_blocks(n_total, m_n, ell_n, min_main=2):
    if ell_n < 2 or ell_n % 2:
        raise ConfigError("ell_n", "ell_n must be even")
    if m_n < 2 or m_n % 2:
        raise ConfigError("m_n", "m_n must be even")
    if m_n % ell_n:
        raise ConfigError("m_n", f"m_n={m_n} is not a multiple of ell_n={ell_n}")
    if n_total - m_n < min_main:
        raise ConfigError("n_total", f"n_total={n_total} leaves fewer than {min_main} main rows")


def _check_common(cfg):
    _check_blocks(cfg.n_total, cfg.m_n, cfg.ell_n)
    if cfg.p < 1:
        raise ConfigError("p", "p must be >= 1")
    if not 0.0 <= cfg.tau <= 1.0:
        raise ConfigError("tau", "tau must lie in [0, 1]")
    if cfg.trials < 1:
        raise ConfigError("trials", "trials must be >= 1")
    if cfg.B < 1:
        raise ConfigError("B", "B must be >= 1")
    if not 0 <= cfg.seed < 2**64:
        raise ConfigError("seed", "seed must be an unsigned 64-bit integer")


@dataclass
class ExperimentConfig:
    """Euclidean coverage study; defaults are the reference study sizes."""

    distribution: str = "elliptical_t6"
    correlation: str = "ar"
    n_total: int = 500
    m_n: int = 50
    ell_n: int = 10
    p: int = 100
    tau: float = 0.9
    alphas: list = field(default_factory=lambda: [0.05, 0.1])
    trials: int = 500
    B: int = 500
    seed: int = 0
    out: str = "coverage.csv"

    def validate(self):
        if self.distribution not in SAMPLERS:
            raise ConfigError("distribution", f"unknown distribution {self.distribution!r}")
        if self.correlation not in ("ar", "algebraic", "identity"):
            raise ConfigError("correlation", f"unknown correlation {self.correlation!r}")
        _check_common(self)
        if not self.alphas or any(not 0.0 < a < 1.0 for a in self.alphas):
            raise ConfigError("alphas", "every alpha must lie in (0, 1)")
        return self


@dataclass
class PowerConfig:
    """Drift test on simulated geometric Brownian motion."""

    n_total: int = 300
    m_n: int = 30
    ell_n: int = 6
    p: int = 100
    tau: float = 0.9
    alpha: float = 0.05
    trials: int = 500
    B: int = 500
    seed: int = 0
    K: int = 100
    varsigma0: float = 0.2
    mu: float = 1.0
    h_grid: list = field(default_factory=lambda: [0.0, 0.025, 0.05, 0.075, 0.1])
    out: str = "power.csv"

    def validate(self):
        _check_common(self)
        if not 0.0 < self.alpha < 1.0:
            raise ConfigError("alpha", "alpha must lie in (0, 1)")
        if self.K < 1:
            raise ConfigError("K", "K must be >= 1")
        if self.varsigma0 < 0:
            raise ConfigError("varsigma0", "varsigma0 must be non-negative")
        if not self.h_grid or any(h < 0 for h in self.h_grid):
            raise ConfigError("h_grid", "h_grid must be a non-empty list of h >= 0")
        return self


def _coerce(cfg_cls, raw: dict):
    fields = {f.name: f for f in dataclasses.fields(cfg_cls)}
    kwargs = {}
    for key, value in raw.items():
        if key not in fields:
            raise ConfigError(key, "unknown field")
        default = fields[key].default
        if default is dataclasses.MISSING:
            default = fields[key].default_factory()
        try:
            if isinstance(default, bool):
                value = bool(value)
            elif isinstance(default, int):
                if isinstance(value, float) and not value.is_integer():
                    raise ValueError
                value = int(value)
            elif isinstance(default, float):
                value = float(value)
            elif isinstance(default, list):
                value = [float(v) for v in (value if isinstance(value, list) else [value])]
            elif isinstance(default, str):
                value = str(value)
        except (TypeError, ValueError):
            raise ConfigError(key, f"cannot interpret {value!r}") from None
        kwargs[key] = value
    return cfg_cls(**kwargs)


def load_config(path, cls=ExperimentConfig):
    """Read a flat YAML mapping; missing fields take the defaults."""
    text = Path(path).read_text(encoding="utf-8")
    try:
        raw = yaml.safe_load(text)
    except yaml.YAMLError as exc:
        raise ConfigError("<document>", f"parse error: {exc}") from None
    if raw is None:
        raw = {}
    if not isinstance(raw, dict):
        raise ConfigError("<document>", "expected a mapping of field: value")
    return _coerce(cls, raw).validate()


def config_dict(cfg) -> dict:
    return dataclasses.asdict(cfg)


def dump_config(cfg, path) -> None:
    Path(path).write_text(yaml.safe_dump(config_dict(cfg), sort_keys=True), encoding="utf-8")
