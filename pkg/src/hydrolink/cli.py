"""Command-line front end producing deterministic CSV artifacts.

Each subcommand reads an optional TOML config, applies ``--set``
overrides, and writes one or more CSV files whose header comments embed
the effective config hash, the seed, and any overrides.  Identical
config and seed give byte-identical files.

Exit codes: 0 success, 2 usage, 3 invalid config, 4 missing config file.
"""

from __future__ import annotations

import argparse
import csv
import os
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .budget import link_budget
from .channel import Environment, FrequencyGrid
from .clutter import roc_eval
from .config import (
    ConfigError,
    apply_overrides,
    config_hash,
    defaulted_fields,
    load_config,
)
from .dfe import DfeConfig, ber_sim, qfunc_ber
from .relay import ChainScenario, sweep_relays
from .seeding import derive_seed
from .sparse import (
    generate_sparse_channel,
    measure,
    omp_reconstruct,
    pilot_matrix,
    pilot_savings_curve,
)

EXIT_OK = 0
EXIT_CONFIG_INVALID = 3
EXIT_CONFIG_MISSING = 4

_OUT_DIR_ENV = "HYDROLINK_OUT_DIR"


def _fmt(value) -> str:
    if isinstance(value, (bool, np.bool_)):
        return str(bool(value))
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return repr(float(value))
    return str(value)


def _write_csv(path: Path, command: str, cfg: dict, seed: int, overrides: list[str],
               header: list[str], rows) -> None:
    with open(path, "w", newline="") as fh:
        meta = [
            f"# tool=hydrolink {__version__}",
            f"# command={command}",
            f"# config_hash={config_hash(cfg)}",
            f"# seed={seed}",
            f"# overrides={';'.join(overrides)}",
        ]
        for line in meta:
            fh.write(line + "\r\n")
        writer = csv.writer(fh)
        writer.writerow(header)
        for row in rows:
            writer.writerow([_fmt(v) for v in row])


def _env_and_grid(cfg: dict) -> tuple[Environment, FrequencyGrid]:
    env = Environment(
        spreading_k=cfg["environment"]["spreading_k"],
        shipping_s=cfg["environment"]["shipping_s"],
        wind_w=cfg["environment"]["wind_w"],
    )
    grid = FrequencyGrid(
        f_min_khz=cfg["grid"]["f_min_khz"],
        f_max_khz=cfg["grid"]["f_max_khz"],
        step_khz=cfg["grid"]["step_khz"],
    )
    return env, grid


def _cmd_link_budget(cfg, seed, out_dir, overrides) -> list[Path]:
    env, grid = _env_and_grid(cfg)
    block = cfg["link"]
    rows = []
    for d in block["distances_m"]:
        b = link_budget(d, env, block["snr_db"], grid, block["efficiency"])
        rows.append(
            (
                d,
                b.f_o_khz,
                b.band_khz[0],
                b.band_khz[1],
                b.bandwidth_hz,
                b.source_level_db,
                b.tx_power_w,
                b.bit_rate_bps,
            )
        )
    path = out_dir / "link_budget.csv"
    _write_csv(
        path,
        "link-budget",
        cfg,
        seed,
        overrides,
        [
            "distance_m",
            "f_o_khz",
            "f_lo_khz",
            "f_hi_khz",
            "bandwidth_hz",
            "source_level_db",
            "tx_power_w",
            "bit_rate_bps",
        ],
        rows,
    )
    return [path]


def _cmd_relay_sweep(cfg, seed, out_dir, overrides) -> list[Path]:
    env, grid = _env_and_grid(cfg)
    block = cfg["chain"]
    rows = []
    for d in block["distances_m"]:
        sc = ChainScenario(
            total_distance_m=d,
            packet_bits=block["packet_bits"],
            snr_db=block["snr_db"],
            rx_power_w=block["rx_power_w"],
            sound_speed_mps=block["sound_speed_mps"],
            env=env,
        )
        report = sweep_relays(sc, block["n_max"], grid, block["efficiency"])
        for i in range(report.n_relays.size):
            rows.append(
                (
                    d,
                    report.n_relays[i],
                    report.hop_distance_m[i],
                    report.delay_s[i],
                    report.energy_j[i],
                    report.hop_tx_power_w[i],
                    report.hop_bit_rate_bps[i],
                )
            )
    path = out_dir / "relay_sweep.csv"
    _write_csv(
        path,
        "relay-sweep",
        cfg,
        seed,
        overrides,
        [
            "total_distance_m",
            "n_relays",
            "hop_distance_m",
            "delay_s",
            "energy_j",
            "hop_tx_power_w",
            "hop_bit_rate_bps",
        ],
        rows,
    )
    return [path]


def _cmd_cs_bench(cfg, seed, out_dir, overrides) -> list[Path]:
    block = cfg["cs"]
    decay = block["decay_tau_taps"] or None
    curve = pilot_savings_curve(
        n=block["n"],
        s_taps=block["s_taps"],
        m_list=[int(m) for m in block["m_list"]],
        trials=block["trials"],
        noise_std=block["noise_std"],
        decay_tau_taps=decay,
        scheme=block["scheme"],
        seed=derive_seed(seed, "cs-bench"),
    )
    rows = [(m, med, block["trials"]) for m, med in curve]
    path = out_dir / "cs_pilot_curve.csv"
    _write_csv(
        path, "cs-bench", cfg, seed, overrides, ["m_pilots", "median_nmse", "trials"], rows
    )
    return [path]


def _cmd_dfe_ber(cfg, seed, out_dir, overrides) -> list[Path]:
    block = cfg["dfe"]
    ber_rows = []
    for i, snr in enumerate(block["snr_list"]):
        res = ber_sim(
            np.array([1.0 + 0.0j]),
            snr,
            n_train=block["n_train"],
            n_data=block["n_data"],
            config=DfeConfig(n_ff=block["n_ff"], n_fb=block["n_fb"], mu=block["ber_mu"]),
            seed=derive_seed(seed, "dfe-ber", i),
        )
        ber_rows.append((snr, res.ber, res.n_errors, res.n_data, qfunc_ber(snr)))
    ber_path = out_dir / "dfe_ber.csv"
    _write_csv(
        ber_path,
        "dfe-ber",
        cfg,
        seed,
        overrides,
        ["snr_db", "ber", "n_errors", "n_data", "qfunc_reference"],
        ber_rows,
    )

    channel = generate_sparse_channel(
        block["sparse_n"],
        block["sparse_s"],
        block["sparse_decay_tau"] or None,
        seed=derive_seed(seed, "dfe-mse-channel"),
    )
    pilots = pilot_matrix(block["pilots_m"], block["sparse_n"], seed=derive_seed(seed, "dfe-mse-pilots"))
    y = measure(channel, pilots, block["pilot_noise_std"], seed=derive_seed(seed, "dfe-mse-noise"))
    estimate = omp_reconstruct(y, pilots)
    run_seed = derive_seed(seed, "dfe-mse-run")
    base = dict(n_ff=block["n_ff"], n_fb=block["n_fb"], mu=block["mu"])
    cold = ber_sim(
        channel,
        block["mse_snr_db"],
        n_train=block["mse_symbols"],
        n_data=1000,
        config=DfeConfig(**base),
        seed=run_seed,
    )
    seeded = ber_sim(
        channel,
        block["mse_snr_db"],
        n_train=block["mse_symbols"],
        n_data=1000,
        config=DfeConfig(**base, init_estimate=estimate.dense()),
        seed=run_seed,
    )
    mse_rows = [
        (k, cold.training_mse_curve[k], seeded.training_mse_curve[k])
        for k in range(block["mse_symbols"])
    ]
    mse_path = out_dir / "dfe_mse.csv"
    _write_csv(
        mse_path,
        "dfe-ber",
        cfg,
        seed,
        overrides,
        ["symbol_index", "mse_cold_start", "mse_cs_initialized"],
        mse_rows,
    )
    return [ber_path, mse_path]


def _cmd_clutter_roc(cfg, seed, out_dir, overrides) -> list[Path]:
    block = cfg["detector"]
    rows = roc_eval(
        nu=block["nu"],
        scr_list=block["scr_list"],
        target_pfa=block["target_pfa"],
        trials=block["trials"],
        seed=derive_seed(seed, "clutter-roc"),
        cells=block["cells"],
        pulses=block["pulses"],
        guard=block["guard"],
        n_ref=block["n_ref"],
    )
    path = out_dir / "clutter_roc.csv"
    _write_csv(
        path,
        "clutter-roc",
        cfg,
        seed,
        overrides,
        ["scr_db", "empirical_pd", "empirical_pfa"],
        rows,
    )
    return [path]


_COMMANDS = {
    "link-budget": _cmd_link_budget,
    "relay-sweep": _cmd_relay_sweep,
    "cs-bench": _cmd_cs_bench,
    "dfe-ber": _cmd_dfe_ber,
    "clutter-roc": _cmd_clutter_roc,
}


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="hydrolink",
        description="Acoustic link planning, sparse equalization and clutter detection runs.",
    )
    parser.add_argument("--version", action="version", version=f"hydrolink {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)
    for name in list(_COMMANDS) + ["validate"]:
        p = sub.add_parser(name, help=f"run the {name} experiment" if name != "validate" else "check a config file")
        p.add_argument("--config", help="TOML config file (defaults used when omitted)")
        p.add_argument("--seed", type=int, help="override the global seed")
        p.add_argument("--out-dir", help=f"artifact directory (env {_OUT_DIR_ENV}, then cwd)")
        p.add_argument(
            "--set",
            dest="overrides",
            action="append",
            default=[],
            metavar="KEY=VALUE",
            help="override a config field, e.g. chain.n_max=20 (repeatable)",
        )
    return parser


def _resolve_out_dir(args, cfg) -> Path:
    if args.out_dir:
        root = args.out_dir
    elif cfg["out_dir"]:
        root = cfg["out_dir"]
    else:
        root = os.environ.get(_OUT_DIR_ENV, "") or "."
    path = Path(root)
    path.mkdir(parents=True, exist_ok=True)
    return path


def _cmd_validate(args) -> int:
    try:
        cfg = load_config(args.config)
        cfg = apply_overrides(cfg, args.overrides)
    except FileNotFoundError as exc:
        print(f"error: config file not found: {exc.filename}", file=sys.stderr)
        return EXIT_CONFIG_MISSING
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG_INVALID
    if args.config is None:
        tree = {}
    else:
        if sys.version_info >= (3, 11):
            import tomllib as toml
        else:
            import tomli as toml
        with open(args.config, "rb") as fh:
            tree = toml.load(fh)
    for item in args.overrides:
        path = item.split("=", 1)[0].strip()
        parts = path.split(".")
        if len(parts) == 1:
            tree[parts[0]] = cfg.get(parts[0])
        elif len(parts) == 2:
            tree.setdefault(parts[0], {})[parts[1]] = True
    print(f"config OK (hash {config_hash(cfg)})")
    missing = defaulted_fields(tree)
    if missing:
        print(f"{len(missing)} fields taking defaults:")
        for line in missing:
            print(f"  {line}")
    return EXIT_OK


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    if args.command == "validate":
        return _cmd_validate(args)
    try:
        cfg = load_config(args.config)
        cfg = apply_overrides(cfg, args.overrides)
    except FileNotFoundError as exc:
        print(f"error: config file not found: {exc.filename}", file=sys.stderr)
        return EXIT_CONFIG_MISSING
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG_INVALID
    if args.seed is not None:
        cfg["seed"] = args.seed
    seed = cfg["seed"]
    out_dir = _resolve_out_dir(args, cfg)
    paths = _COMMANDS[args.command](cfg, seed, out_dir, args.overrides)
    for p in paths:
        print(f"wrote {p}")
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
