"""Experiment configuration: flat dotted keys, validated with field paths.

Config files are INI text. Each section is a field group and each key a
field, so ``[chain] fraction = 0.5`` and the flag ``--fraction 0.5`` both set
``chain.fraction``.
"""

from __future__ import annotations

import configparser
import dataclasses
import io
import os
import re
from dataclasses import dataclass, field

from ..errors import ConfigError

OUTPUT_ENV = "LCQAOA_OUTPUT_DIR"

_COUPLING = re.compile(r"^(linear|heavy_hex:(\d+)x(\d+))$")


@dataclass(frozen=True)
class ExperimentConfig:
    # instance
    n: int | None = None
    d: int = 3
    seed: int = 0
    weighted: bool = False
    graph_file: str | None = None
    # ansatz
    ansatz: str = "original"
    p: int = 1
    # chain (lc only)
    chain_restarts: int = 32
    chain_seed: int = 0
    fraction: float = 1.0
    # objective / sampling
    mode: str = "exact"
    shots: int = 1024
    mode_seed: int = 0
    sample_seed: int = 0
    # noise
    p1: float = 0.0
    p2: float = 0.0
    trajectories: int = 64
    coupling: str = "linear"
    # optimizer
    tol: float = 1e-3
    max_iter: int | None = None
    restarts: int = 0
    fourier_ladder: bool = False
    postprocess: bool = True
    output: str | None = None
    explicit: frozenset = field(default=frozenset(), compare=False, repr=False)

    def __post_init__(self):
        validate(self)

    @property
    def noisy(self) -> bool:
        return self.p1 > 0 or self.p2 > 0

    def replace(self, **changes) -> "ExperimentConfig":
        explicit = self.explicit | {k for k in changes if k in FIELD_PATHS}
        return dataclasses.replace(self, explicit=frozenset(explicit), **changes)

    def to_dict(self) -> dict:
        return {path: getattr(self, name) for name, path in FIELD_PATHS.items()}

    def output_dir(self) -> str:
        return self.output or os.environ.get(OUTPUT_ENV) or "."


FIELD_PATHS = {
    "n": "instance.n", "d": "instance.d", "seed": "instance.seed", "weighted": "instance.weighted",
    "graph_file": "instance.graph_file",
    "ansatz": "ansatz.kind", "p": "ansatz.p",
    "chain_restarts": "chain.restarts", "chain_seed": "chain.seed", "fraction": "chain.fraction",
    "mode": "mode.kind", "shots": "mode.shots", "mode_seed": "mode.seed", "sample_seed": "mode.sample_seed",
    "p1": "noise.p1", "p2": "noise.p2", "trajectories": "noise.trajectories", "coupling": "noise.coupling",
    "tol": "optimizer.tol", "max_iter": "optimizer.max_iter", "restarts": "optimizer.restarts",
    "fourier_ladder": "optimizer.fourier_ladder", "postprocess": "output.postprocess",
    "output": "output.path",
}
PATH_FIELDS = {v: k for k, v in FIELD_PATHS.items()}


_OPTIONAL = {"n": int, "max_iter": int, "graph_file": str, "output": str}
DEFAULTS = ExperimentConfig.__dataclass_fields__


def _coerce(name: str, value):
    want = _OPTIONAL.get(name) or type(DEFAULTS[name].default)
    path = FIELD_PATHS[name]
    if value is None:
        if name in _OPTIONAL:
            return None
        raise ConfigError(path, "may not be empty")
    if want is bool:
        if isinstance(value, bool):
            return value
        text = str(value).strip().lower()
        if text in ("1", "true", "yes", "on"):
            return True
        if text in ("0", "false", "no", "off"):
            return False
        raise ConfigError(path, f"expected a boolean, got {value!r}")
    if want is int:
        if isinstance(value, bool):
            raise ConfigError(path, f"expected an integer, got {value!r}")
        if isinstance(value, int):
            return value
        try:
            return int(str(value).strip())
        except ValueError:
            raise ConfigError(path, f"expected an integer, got {value!r}") from None
    if want is float:
        try:
            return float(value)
        except (TypeError, ValueError):
            raise ConfigError(path, f"expected a number, got {value!r}") from None
    return str(value)


def validate(c: ExperimentConfig) -> None:
    def need(ok, name, message):
        if not ok:
            raise ConfigError(FIELD_PATHS[name], message)

    if c.graph_file is None:
        need(c.n is not None, "n", "required unless instance.graph_file is given")
        need(c.n >= 2, "n", f"must be >= 2, got {c.n}")
        need(c.d >= 1, "d", f"must be >= 1, got {c.d}")
        need(c.d < c.n, "d", f"must be < n={c.n}, got {c.d}")
        need(c.n * c.d % 2 == 0, "d", f"n*d must be even, got n={c.n} d={c.d}")
    else:
        for name in ("n", "d", "seed", "weighted"):
            need(name not in c.explicit, name, "conflicts with instance.graph_file")
    need(c.ansatz in ("original", "lc"), "ansatz", f"must be 'original' or 'lc', got {c.ansatz!r}")
    need(c.p >= 1, "p", f"must be >= 1, got {c.p}")
    if c.ansatz != "lc":
        for name in ("chain_restarts", "chain_seed", "fraction"):
            need(name not in c.explicit, name, "only valid with ansatz.kind = lc")
    need(c.chain_restarts >= 1, "chain_restarts", "must be >= 1")
    need(0.0 <= c.fraction <= 1.0, "fraction", f"must lie in [0, 1], got {c.fraction}")
    need(c.mode in ("exact", "shots"), "mode", f"must be 'exact' or 'shots', got {c.mode!r}")
    if c.mode != "shots":
        need("mode_seed" not in c.explicit, "mode_seed", "only valid with mode.kind = shots")
    need(c.shots >= 1, "shots", "must be >= 1")
    need(0.0 <= c.p1 <= 1.0, "p1", f"must lie in [0, 1], got {c.p1}")
    need(0.0 <= c.p2 <= 1.0, "p2", f"must lie in [0, 1], got {c.p2}")
    need(c.trajectories >= 1, "trajectories", "must be >= 1")
    need(_COUPLING.match(c.coupling) is not None, "coupling",
         f"expected 'linear' or 'heavy_hex:RxC', got {c.coupling!r}")
    need(c.tol > 0, "tol", f"must be > 0, got {c.tol}")
    need(c.max_iter is None or c.max_iter >= 1, "max_iter", "must be >= 1")
    need(c.restarts >= 0, "restarts", "must be >= 0")


def coupling_dims(spec: str) -> tuple[int, int] | None:
    """``(rows, cols)`` of a ``heavy_hex:RxC`` spec, ``None`` for ``linear``."""
    m = _COUPLING.match(spec)
    return (int(m.group(2)), int(m.group(3))) if m and m.group(2) else None


def config_from_mapping(values: dict, base: ExperimentConfig | None = None) -> ExperimentConfig:
    """Build a config from ``{field name or dotted path: value}``; later layers override ``base``."""
    changes = {}
    for key, value in values.items():
        name = PATH_FIELDS.get(key, key)
        if name not in FIELD_PATHS:
            raise ConfigError(key, "unknown field")
        changes[name] = _coerce(name, value)
    if base is None:
        return ExperimentConfig(**changes, explicit=frozenset(changes))
    merged = {name: getattr(base, name) for name in FIELD_PATHS} | changes
    return ExperimentConfig(**merged, explicit=base.explicit | frozenset(changes))


def load_config(path: str) -> ExperimentConfig:
    parser = configparser.ConfigParser(interpolation=None)
    try:
        with open(path, encoding="utf-8") as fh:
            parser.read_file(fh)
    except configparser.Error as exc:
        raise ConfigError(path, str(exc).splitlines()[0]) from None
    values = {}
    for section in parser.sections():
        for key, raw in parser.items(section):
            values[f"{section}.{key}"] = raw if raw.strip() else None
    return config_from_mapping(values)


def dump_config(c: ExperimentConfig) -> str:
    """INI text holding every non-default field; ``load_config`` reads it back to an equal config."""
    parser = configparser.ConfigParser(interpolation=None)
    for name, path in FIELD_PATHS.items():
        value = getattr(c, name)
        if value == DEFAULTS[name].default:
            continue
        section, key = path.split(".")
        if not parser.has_section(section):
            parser.add_section(section)
        parser.set(section, key, str(value).lower() if isinstance(value, bool) else str(value))
    buf = io.StringIO()
    parser.write(buf)
    return buf.getvalue()
