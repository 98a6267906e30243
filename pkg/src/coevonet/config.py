"""Flat key=value config files mirrored 1:1 by command-line flags.

One pair per line, ``#`` starts a comment, later keys override earlier
ones; the ``sweep`` key may appear up to twice (one axis each).  Explicit
command-line flags win over the file, and built-in defaults fill whatever
remains.
"""

from __future__ import annotations

import math

from .core import ParameterError, SimParams
from .sweep import SweepAxis
from .topology import Topology, TopologyKind


class ConfigError(ValueError):
    """Malformed config input: syntax, unknown key, or unparsable value."""


_INT_KEYS = {"n", "steps", "window", "seed", "replicas", "ws_degree", "workers"}
_FLOAT_KEYS = {"b", "m", "p", "gamma", "delta", "kappa", "ws_rewire"}
_STR_KEYS = {"topology", "out"}
KNOWN_KEYS = _INT_KEYS | _FLOAT_KEYS | _STR_KEYS | {"sweep"}

DEFAULTS = {
    "topology": "sl",
    "n": 2500,
    "b": 1.5,
    "m": 0.5,
    "p": 0.9,
    "gamma": 0.2,
    "delta": 0.1,
    "kappa": 0.1,
    "steps": 10000,
    "window": 1000,
    "seed": 1,
    "replicas": 5,
    "ws_degree": 10,
    "ws_rewire": 0.5,
    "workers": 1,
    "out": None,
    "sweep": [],
}


def _convert(key: str, raw: str):
    try:
        if key in _INT_KEYS:
            return int(raw)
        if key in _FLOAT_KEYS:
            return float(raw)
    except ValueError:
        raise ConfigError(f"config key {key!r}: cannot parse value {raw!r}") from None
    return raw


def parse_config_file(path: str) -> dict:
    """Read a key=value file into typed settings; unknown keys are errors."""
    values: dict = {}
    sweeps: list[str] = []
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            text = line.split("#", 1)[0].strip()
            if not text:
                continue
            if "=" not in text:
                raise ConfigError(f"{path}:{lineno}: expected key = value, got {text!r}")
            key, raw = (part.strip() for part in text.split("=", 1))
            if key not in KNOWN_KEYS:
                raise ConfigError(f"{path}:{lineno}: unknown key {key!r}")
            if key == "sweep":
                sweeps.append(raw)
            else:
                values[key] = _convert(key, raw)
    if sweeps:
        values["sweep"] = sweeps
    return values


def merge_settings(file_values: dict, flag_values: dict) -> dict:
    """defaults < config file < explicit flags (None flags mean 'not given')."""
    settings = dict(DEFAULTS)
    settings.update(file_values)
    settings.update({k: v for k, v in flag_values.items() if v is not None})
    return settings


def parse_sweep_axis(text: str) -> SweepAxis:
    parts = text.split(":")
    if len(parts) != 4:
        raise ConfigError(
            f"sweep spec {text!r}: expected <param>:<start>:<stop>:<points>"
        )
    param, start, stop, points = (part.strip() for part in parts)
    try:
        return SweepAxis(param=param, start=float(start), stop=float(stop), points=int(points))
    except ValueError:
        raise ConfigError(f"sweep spec {text!r}: unparsable numbers") from None


def build_topology(settings: dict) -> Topology:
    name = str(settings["topology"]).lower()
    try:
        kind = TopologyKind(name)
    except ValueError:
        raise ParameterError(
            f"topology={settings['topology']!r} not one of hl, sl, xl, ws"
        ) from None
    n = int(settings["n"])
    if kind is TopologyKind.WATTS_STROGATZ:
        return Topology(
            kind=kind,
            ws_nodes=n,
            ws_degree=int(settings["ws_degree"]),
            ws_rewire_prob=float(settings["ws_rewire"]),
        )
    side = math.isqrt(max(n, 0))
    if side * side != n:
        raise ParameterError(f"n={n} is not a perfect square (lattice topology)")
    return Topology(kind=kind, side_length=side)


def build_params(settings: dict) -> SimParams:
    return SimParams(
        b=float(settings["b"]),
        m=float(settings["m"]),
        p=float(settings["p"]),
        gamma=float(settings["gamma"]),
        delta=float(settings["delta"]),
        kappa=float(settings["kappa"]),
        topology=build_topology(settings),
        mc_steps=int(settings["steps"]),
        measure_window=int(settings["window"]),
        seed=int(settings["seed"]),
    )
