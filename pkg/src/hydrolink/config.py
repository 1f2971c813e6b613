"""TOML run configuration: schema, defaults, overrides, hashing.

Every field has a documented default, so a config file only needs the
values it changes.  Unknown blocks or keys are rejected rather than
ignored; range violations name the offending field.  The effective
config (file plus ``--set`` overrides) is hashed into every artifact so
outputs can be traced back to their exact parameters.
"""

from __future__ import annotations

import hashlib
import json
import sys
from dataclasses import dataclass
from typing import Any, Callable

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

__all__ = [
    "ConfigError",
    "SCHEMA",
    "default_config",
    "load_config",
    "apply_overrides",
    "validate_tree",
    "config_hash",
    "defaulted_fields",
]


class ConfigError(ValueError):
    """Configuration rejected; the message names the offending field."""


@dataclass(frozen=True)
class FieldSpec:
    default: Any
    kind: str  # "int" | "float" | "str" | "list"
    doc: str
    check: Callable[[Any], str | None] | None = None


def _in_range(lo=None, hi=None, lo_open=False, hi_open=False):
    def check(v):
        if lo is not None and (v <= lo if lo_open else v < lo):
            return f"must be {'>' if lo_open else '>='} {lo}"
        if hi is not None and (v >= hi if hi_open else v > hi):
            return f"must be {'<' if hi_open else '<='} {hi}"
        return None

    return check


def _positive_list(v):
    if not v:
        return "must not be empty"
    if any(x < 1 for x in v):
        return "entries must be >= 1"
    return None


SCHEMA: dict[str, dict[str, FieldSpec]] = {
    "": {
        "seed": FieldSpec(0, "int", "global experiment seed"),
        "out_dir": FieldSpec("", "str", "artifact directory (flag and env override)"),
    },
    "environment": {
        "spreading_k": FieldSpec(1.5, "float", "spreading exponent, 1..2", _in_range(1.0, 2.0)),
        "shipping_s": FieldSpec(0.5, "float", "shipping activity, 0..1", _in_range(0.0, 1.0)),
        "wind_w": FieldSpec(0.0, "float", "wind speed m/s, >= 0", _in_range(0.0)),
    },
    "grid": {
        "f_min_khz": FieldSpec(0.1, "float", "grid start, kHz", _in_range(0.0, lo_open=True)),
        "f_max_khz": FieldSpec(200.0, "float", "grid end, kHz", _in_range(0.0, lo_open=True)),
        "step_khz": FieldSpec(0.1, "float", "grid step, kHz", _in_range(0.0, lo_open=True)),
    },
    "link": {
        "distances_m": FieldSpec(
            [1000.0, 10000.0, 50000.0, 100000.0], "list", "link distances, m", _positive_list
        ),
        "snr_db": FieldSpec(10.0, "float", "target in-band SNR, dB"),
        "efficiency": FieldSpec(
            0.1, "float", "electroacoustic efficiency, (0, 1]", _in_range(0.0, 1.0, lo_open=True)
        ),
    },
    "chain": {
        "distances_m": FieldSpec(
            [1000.0, 10000.0, 50000.0, 100000.0], "list", "chain spans, m", _positive_list
        ),
        "n_max": FieldSpec(10, "int", "largest relay count in sweeps", _in_range(0)),
        "packet_bits": FieldSpec(32.0, "float", "packet size, bits", _in_range(0.0, lo_open=True)),
        "snr_db": FieldSpec(10.0, "float", "per-hop target SNR, dB"),
        "rx_power_w": FieldSpec(2.0, "float", "receive power draw, W", _in_range(0.0)),
        "sound_speed_mps": FieldSpec(
            1500.0, "float", "sound speed, m/s", _in_range(0.0, lo_open=True)
        ),
        "efficiency": FieldSpec(
            0.1, "float", "electroacoustic efficiency, (0, 1]", _in_range(0.0, 1.0, lo_open=True)
        ),
    },
    "cs": {
        "n": FieldSpec(64, "int", "channel length in taps", _in_range(10)),
        "s_taps": FieldSpec(3, "int", "active taps", _in_range(1)),
        "m_list": FieldSpec([4, 8, 12, 16, 20, 24, 32], "list", "pilot counts to sweep"),
        "trials": FieldSpec(100, "int", "trials per pilot count", _in_range(1)),
        "noise_std": FieldSpec(0.0, "float", "measurement noise std", _in_range(0.0)),
        "decay_tau_taps": FieldSpec(
            0.0, "float", "power decay constant in taps, 0 = flat", _in_range(0.0)
        ),
        "scheme": FieldSpec("gaussian", "str", "pilot scheme: gaussian or fourier"),
    },
    "dfe": {
        "n_ff": FieldSpec(12, "int", "feedforward taps", _in_range(1)),
        "n_fb": FieldSpec(8, "int", "feedback taps", _in_range(0)),
        "mu": FieldSpec(0.01, "float", "LMS step", _in_range(0.0, 1.0, True, True)),
        "snr_list": FieldSpec([0.0, 4.0, 8.0, 12.0], "list", "BER sweep SNRs, dB"),
        "ber_mu": FieldSpec(0.001, "float", "LMS step for the BER sweep", _in_range(0.0, 1.0, True, True)),
        "n_train": FieldSpec(5000, "int", "training symbols for BER runs", _in_range(0)),
        "n_data": FieldSpec(100_000, "int", "data symbols for BER runs", _in_range(1000)),
        "sparse_n": FieldSpec(32, "int", "sparse channel length for MSE runs", _in_range(10)),
        "sparse_s": FieldSpec(3, "int", "sparse channel active taps", _in_range(1)),
        "sparse_decay_tau": FieldSpec(8.0, "float", "sparse channel decay, taps", _in_range(0.0)),
        "mse_snr_db": FieldSpec(15.0, "float", "SNR for the convergence runs, dB"),
        "mse_symbols": FieldSpec(1500, "int", "training curve length", _in_range(100)),
        "pilots_m": FieldSpec(16, "int", "pilot count for the seeded estimate", _in_range(1)),
        "pilot_noise_std": FieldSpec(0.02, "float", "pilot noise std", _in_range(0.0)),
    },
    "detector": {
        "nu": FieldSpec(1.0, "float", "K shape parameter", _in_range(0.0, lo_open=True)),
        "scr_list": FieldSpec([0.0, 5.0, 10.0, 20.0, 30.0], "list", "SCR sweep, dB"),
        "target_pfa": FieldSpec(1e-3, "float", "false-alarm target", _in_range(0.0, 1.0, True, True)),
        "trials": FieldSpec(2000, "int", "Monte-Carlo trials per point", _in_range(1000)),
        "cells": FieldSpec(14, "int", "range cells per frame", _in_range(3)),
        "pulses": FieldSpec(64, "int", "pulses per Monte-Carlo frame", _in_range(1)),
        "guard": FieldSpec(1, "int", "guard cells each side", _in_range(0)),
        "n_ref": FieldSpec(8, "int", "reference cells", _in_range(1)),
    },
}

def _coerce(block: str, key: str, spec: FieldSpec, value: Any) -> Any:
    path = f"{block}.{key}" if block else key
    if spec.kind == "int":
        if isinstance(value, bool) or not isinstance(value, int):
            raise ConfigError(f"{path}: expected integer, got {value!r}")
    elif spec.kind == "float":
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            raise ConfigError(f"{path}: expected number, got {value!r}")
        value = float(value)
    elif spec.kind == "str":
        if not isinstance(value, str):
            raise ConfigError(f"{path}: expected string, got {value!r}")
    elif spec.kind == "list":
        if not isinstance(value, (list, tuple)):
            raise ConfigError(f"{path}: expected array, got {value!r}")
        if any(isinstance(x, bool) or not isinstance(x, (int, float)) for x in value):
            raise ConfigError(f"{path}: array entries must be numbers")
        value = [float(x) if isinstance(x, float) else x for x in value]
    if spec.check is not None:
        problem = spec.check(value)
        if problem:
            raise ConfigError(f"{path}: {problem}")
    return value


def _cross_checks(cfg: dict) -> list[str]:
    problems = []
    if cfg["grid"]["f_max_khz"] <= cfg["grid"]["f_min_khz"]:
        problems.append("grid.f_max_khz: must exceed grid.f_min_khz")
    span = cfg["grid"]["f_max_khz"] - cfg["grid"]["f_min_khz"]
    if span / cfg["grid"]["step_khz"] + 1 < 10:
        problems.append("grid.step_khz: grid must contain at least 10 points")
    if cfg["cs"]["s_taps"] > 0.10 * cfg["cs"]["n"]:
        problems.append("cs.s_taps: must not exceed 10% of cs.n")
    if any(m < 0 or m > cfg["cs"]["n"] for m in cfg["cs"]["m_list"]):
        problems.append("cs.m_list: entries must lie in [0, cs.n]")
    if cfg["cs"]["scheme"] not in ("gaussian", "fourier"):
        problems.append("cs.scheme: must be 'gaussian' or 'fourier'")
    if cfg["dfe"]["sparse_s"] > 0.10 * cfg["dfe"]["sparse_n"]:
        problems.append("dfe.sparse_s: must not exceed 10% of dfe.sparse_n")
    if cfg["dfe"]["pilots_m"] > cfg["dfe"]["sparse_n"]:
        problems.append("dfe.pilots_m: must not exceed dfe.sparse_n")
    return problems


def default_config() -> dict:
    cfg: dict[str, Any] = {}
    for key, spec in SCHEMA[""].items():
        cfg[key] = spec.default
    for block, fields in SCHEMA.items():
        if not block:
            continue
        cfg[block] = {key: spec.default for key, spec in fields.items()}
    return cfg


def validate_tree(tree: dict, source: str = "config") -> dict:
    """Merge a parsed TOML tree over the defaults, enforcing the schema."""
    cfg = default_config()
    for key, value in tree.items():
        if key in SCHEMA[""]:
            cfg[key] = _coerce("", key, SCHEMA[""][key], value)
        elif key in SCHEMA:
            if not isinstance(value, dict):
                raise ConfigError(f"{key}: expected a table")
            for sub, subval in value.items():
                if sub not in SCHEMA[key]:
                    raise ConfigError(f"{key}.{sub}: unknown key in {source}")
                cfg[key][sub] = _coerce(key, sub, SCHEMA[key][sub], subval)
        else:
            raise ConfigError(f"{key}: unknown block or key in {source}")
    problems = _cross_checks(cfg)
    if problems:
        raise ConfigError("; ".join(problems))
    return cfg


def load_config(path: str | None) -> dict:
    """Parse and validate a TOML file; None loads pure defaults.

    Raises FileNotFoundError when the file is absent and ConfigError when
    it cannot be parsed or fails validation.  A present-but-empty file is
    rejected: it configures nothing, which usually means a path mix-up.
    """
    if path is None:
        return default_config()
    with open(path, "rb") as fh:
        try:
            tree = tomllib.load(fh)
        except tomllib.TOMLDecodeError as exc:
            raise ConfigError(f"{path}: {exc}") from exc
    if not tree:
        blocks = ", ".join(k for k in SCHEMA if k)
        raise ConfigError(
            f"{path}: no configuration found; expected one or more of the "
            f"blocks: {blocks} (or top-level seed / out_dir)"
        )
    return validate_tree(tree, source=path)


def apply_overrides(cfg: dict, overrides: list[str]) -> dict:
    """Apply ``--set block.key=value`` pairs on top of a validated config.

    Values are parsed as TOML scalars/arrays, falling back to bare
    strings, then validated like file values.
    """
    tree: dict[str, Any] = {}
    for item in overrides:
        if "=" not in item:
            raise ConfigError(f"override {item!r} is not of the form key=value")
        path, raw = item.split("=", 1)
        path = path.strip()
        try:
            value = tomllib.loads(f"v = {raw}")["v"]
        except tomllib.TOMLDecodeError:
            value = raw
        parts = path.split(".")
        if len(parts) == 1:
            tree[parts[0]] = value
        elif len(parts) == 2:
            tree.setdefault(parts[0], {})[parts[1]] = value
        else:
            raise ConfigError(f"override path {path!r} has too many components")
    merged: dict[str, Any] = {}

    def deep(dst, src):
        for k, v in src.items():
            if isinstance(v, dict):
                dst.setdefault(k, {})
                deep(dst[k], v)
            else:
                dst[k] = v

    # replay the already-validated config as a tree, then the overrides
    for k, v in cfg.items():
        if isinstance(v, dict):
            merged[k] = dict(v)
        else:
            merged[k] = v
    deep(merged, tree)
    return validate_tree(merged, source="overrides")


def defaulted_fields(tree: dict) -> list[str]:
    """Dotted paths of schema fields not present in the parsed tree."""
    out = []
    for key, spec in SCHEMA[""].items():
        if key not in tree:
            out.append(f"{key} (default {spec.default!r})")
    for block, fields in SCHEMA.items():
        if not block:
            continue
        present = tree.get(block, {})
        for key, spec in fields.items():
            if key not in present:
                out.append(f"{block}.{key} (default {spec.default!r})")
    return out


def config_hash(cfg: dict) -> str:
    """Stable short hash of the effective config, ignoring out_dir."""
    reduced = {k: v for k, v in cfg.items() if k != "out_dir"}
    canon = json.dumps(reduced, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(canon.encode()).hexdigest()[:16]
