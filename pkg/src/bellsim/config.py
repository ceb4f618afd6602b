"""Experiment configuration files.

Configs are TOML::

    mode = "sample"          # exact | sample | lhv
    n = 1000000
    seed = 42

    [directions]
    A = [1, 0, 0]
    a = [0, 0, 1]
    B = [-1, 0, 1]           # normalized on load
    b = [1, 0, 1]

    [detection]
    eta_left = 1.0
    eta_right = 1.0

    [lhv]
    weights = [...]          # 16 strategy weights, default uniform

    [budget]
    t_s = 1e-6
    t_m = 1e-7
"""
from __future__ import annotations

import hashlib
import json
import math
from dataclasses import dataclass, replace
from pathlib import Path

try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib

from bellsim.linalg import Direction

MODES = ("exact", "sample", "lhv")
DIRECTION_KEYS = ("A", "a", "B", "b")
_TOP_KEYS = {"mode", "n", "seed", "directions", "detection", "lhv", "budget"}


class ConfigError(ValueError):
    def __init__(self, path: str, message: str):
        self.path = path
        super().__init__(f"{path}: {message}")


@dataclass(frozen=True)
class ExperimentConfig:
    directions: dict[str, Direction]
    n: int = 1_000_000
    seed: int = 0
    eta_left: float = 1.0
    eta_right: float = 1.0
    mode: str = "sample"
    lhv_weights: tuple[float, ...] | None = None
    t_s: float | None = None
    t_m: float | None = None

    @property
    def settings(self) -> tuple[Direction, Direction, Direction, Direction]:
        return tuple(self.directions[k] for k in DIRECTION_KEYS)

    def with_overrides(self, **kw) -> "ExperimentConfig":
        kw = {k: v for k, v in kw.items() if v is not None}
        cfg = replace(self, **kw)
        _check_ranges(cfg)
        return cfg

    def to_dict(self) -> dict:
        return {
            "mode": self.mode,
            "n": self.n,
            "seed": self.seed,
            "directions": {k: self.directions[k].as_list() for k in DIRECTION_KEYS},
            "detection": {"eta_left": self.eta_left, "eta_right": self.eta_right},
            "lhv": {"weights": list(self.lhv_weights) if self.lhv_weights is not None else None},
            "budget": {"t_s": self.t_s, "t_m": self.t_m},
        }

    def sha256(self) -> str:
        text = json.dumps(self.to_dict(), sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(text.encode()).hexdigest()


def _number(value, path, integer=False):
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigError(path, f"expected a number, got {value!r}")
    if integer and not isinstance(value, int):
        raise ConfigError(path, f"expected an integer, got {value!r}")
    if not math.isfinite(value):
        raise ConfigError(path, "must be finite")
    return value


def _table(raw, key, allowed):
    sec = raw.get(key, {})
    if not isinstance(sec, dict):
        raise ConfigError(key, "expected a section")
    for k in sec:
        if k not in allowed:
            raise ConfigError(f"{key}.{k}", "unknown field")
    return sec


def _check_ranges(cfg: ExperimentConfig) -> None:
    if cfg.mode not in MODES:
        raise ConfigError("mode", f"must be one of {', '.join(MODES)}, got {cfg.mode!r}")
    if cfg.n < 1:
        raise ConfigError("n", f"must be at least 1, got {cfg.n}")
    if not 0 <= cfg.seed < 2**64:
        raise ConfigError("seed", f"must be an unsigned 64-bit integer, got {cfg.seed}")
    for name in ("eta_left", "eta_right"):
        eta = getattr(cfg, name)
        if not 0 <= eta <= 1:
            raise ConfigError(f"detection.{name}", f"must lie in [0, 1], got {eta}")
    for name in ("t_s", "t_m"):
        t = getattr(cfg, name)
        if t is not None and t < 0:
            raise ConfigError(f"budget.{name}", f"must be nonnegative, got {t}")


def parse_config(raw: dict) -> ExperimentConfig:
    for k in raw:
        if k not in _TOP_KEYS:
            raise ConfigError(k, "unknown field")
    dirs_raw = _table(raw, "directions", set(DIRECTION_KEYS))
    directions = {}
    for k in DIRECTION_KEYS:
        path = f"directions.{k}"
        if k not in dirs_raw:
            raise ConfigError(path, "missing required field")
        v = dirs_raw[k]
        if not isinstance(v, list) or len(v) != 3:
            raise ConfigError(path, f"expected [x, y, z], got {v!r}")
        comps = [_number(c, f"{path}[{i}]") for i, c in enumerate(v)]
        try:
            directions[k] = Direction(*comps)
        except ValueError as exc:
            raise ConfigError(path, str(exc)) from None

    det = _table(raw, "detection", {"eta_left", "eta_right"})
    lhv = _table(raw, "lhv", {"weights"})
    budget = _table(raw, "budget", {"t_s", "t_m"})

    weights = None
    if "weights" in lhv:
        w = lhv["weights"]
        if not isinstance(w, list) or len(w) != 16:
            raise ConfigError("lhv.weights", "expected a list of 16 numbers")
        weights = tuple(float(_number(x, f"lhv.weights[{i}]")) for i, x in enumerate(w))
        if any(x < 0 for x in weights) or abs(sum(weights) - 1) > 1e-9:
            raise ConfigError("lhv.weights", "weights must be nonnegative and sum to 1")

    mode = raw.get("mode", "sample")
    if not isinstance(mode, str):
        raise ConfigError("mode", f"expected a string, got {mode!r}")
    cfg = ExperimentConfig(
        directions=directions,
        n=_number(raw.get("n", 1_000_000), "n", integer=True),
        seed=_number(raw.get("seed", 0), "seed", integer=True),
        eta_left=float(_number(det.get("eta_left", 1.0), "detection.eta_left")),
        eta_right=float(_number(det.get("eta_right", 1.0), "detection.eta_right")),
        mode=mode,
        lhv_weights=weights,
        t_s=float(_number(budget["t_s"], "budget.t_s")) if "t_s" in budget else None,
        t_m=float(_number(budget["t_m"], "budget.t_m")) if "t_m" in budget else None,
    )
    _check_ranges(cfg)
    return cfg


def loads_config(text: str) -> ExperimentConfig:
    try:
        raw = tomllib.loads(text)
    except tomllib.TOMLDecodeError as exc:
        raise ConfigError("<file>", f"not valid TOML: {exc}") from None
    return parse_config(raw)


def load_config(path) -> ExperimentConfig:
    return loads_config(Path(path).read_text())


def bundled_config(name: str) -> Path:
    """Path of a config shipped with the package, e.g. ``bundled_config("paper")``."""
    return Path(__file__).parent / "configs" / f"{name}.config"
