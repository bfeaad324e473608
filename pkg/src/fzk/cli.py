"""Batch command-line interface.

Exit codes: 0 success, 1 configuration/validation failure, 2 numerical
failure (blow-up, or an out-of-tolerance result in a check command).
"""

from __future__ import annotations

import argparse
import dataclasses
import os
import sys

import numpy as np

from . import io
from .config import parse_config
from .diagnostics import SolitonSpec, conservation_drift
from .errors import BlowUpError, FzkError
from .experiments import (
    DEFAULT_FRACTIONAL_ORDERS,
    ORACLE_TOLERANCE,
    RunConfig,
    convergence_study,
    oracle_check,
    peak_positions,
    run_simulation,
    soliton_interaction_study,
    temporal_order_study,
)
from .grid import grid_points, inverse_transform

FULL_SCALE_TWO_SOLITON = [
    SolitonSpec(c=0.5, theta=0.0, x0=-15.0, y0=0.0),
    SolitonSpec(c=0.2, theta=0.0, x0=0.0, y0=0.0),
]


def _load_config(path) -> RunConfig:
    with open(path) as fh:
        return parse_config(fh.read())


def _drift_dict(series) -> dict:
    dm, dp, dh = conservation_drift(series)
    return {"mass": dm, "momentum": dp, "hamiltonian": dh}


def _ensure_out_dir(cfg: RunConfig) -> str:
    os.makedirs(cfg.out_dir, exist_ok=True)
    return cfg.out_dir


def _config_echo(cfg: RunConfig) -> dict:
    echo = dataclasses.asdict(cfg)
    echo["ic"] = [
        {"kind": type(c).__name__, **dataclasses.asdict(c)} for c in cfg.ic
    ]
    return echo


def _cmd_run(args) -> int:
    cfg = _load_config(args.config)
    result = run_simulation(cfg)
    out = _ensure_out_dir(cfg)

    inv_path = os.path.join(out, "invariants.csv")
    io.write_invariants(inv_path, result.invariants)
    snap_path = os.path.join(out, f"final_t{cfg.t_final:g}.snap")
    final_field = inverse_transform(result.final.u, result.disc.M_phys)
    io.write_snapshot(
        snap_path, final_field, io.SnapshotMeta(n=cfg.n, alpha=cfg.alpha, t=result.final.t)
    )
    drifts = _drift_dict(result.invariants)
    io.write_manifest(
        os.path.join(out, "manifest.json"),
        _config_echo(cfg),
        result.timings,
        drifts,
        [inv_path, snap_path],
    )
    print(f"run complete: N={cfg.n} alpha={cfg.alpha} T={cfg.t_final} dt={result.dt:.6g}")
    print(
        "relative drifts: mass={mass:.3e} momentum={momentum:.3e} "
        "hamiltonian={hamiltonian:.3e}".format(**drifts)
    )
    print(f"artifacts in {out}")
    return 0


def _cmd_converge(args) -> int:
    cfg = _load_config(args.config)
    ns = [int(tok) for tok in args.ns.split(",")]
    table = convergence_study(cfg, ns)
    out = _ensure_out_dir(cfg)
    path = os.path.join(out, "error_table.csv")
    io.write_error_table(path, table)
    print(f"{'N':>6} {'L2 error':>14} {'order':>7} {'Linf error':>14} {'order':>7}")
    for row in table.rows:
        l2o = f"{row.l2_order:.2f}" if row.l2_order is not None else "--"
        lio = f"{row.linf_order:.2f}" if row.linf_order is not None else "--"
        print(f"{row.n:>6} {row.l2_error:>14.4e} {l2o:>7} {row.linf_error:>14.4e} {lio:>7}")
    print(f"table written to {path}")
    return 0


def _cmd_temporal_order(args) -> int:
    cfg = _load_config(args.config)
    dts = [float(tok) for tok in args.dts.split(",")]
    rows = temporal_order_study(cfg, dts)
    out = _ensure_out_dir(cfg)
    path = os.path.join(out, "temporal_order.csv")
    io.write_temporal_orders(path, rows)
    print(f"{'dt':>12} {'L2 error':>14} {'order':>7}")
    for row in rows:
        order = f"{row.order:.2f}" if row.order is not None else "--"
        print(f"{row.dt:>12.6g} {row.error:>14.4e} {order:>7}")
    print(f"table written to {path}")
    return 0


def _cmd_solitons(args) -> int:
    cfg = _load_config(args.config)
    if args.full:
        cfg = dataclasses.replace(
            cfg, n=512, t_final=60.0, ic=list(FULL_SCALE_TWO_SOLITON)
        )
    times = (0.0, cfg.t_final / 2.0, cfg.t_final)
    cfg = dataclasses.replace(cfg, snapshot_times=times)
    alphas = tuple(float(tok) for tok in args.alphas.split(","))
    runs = soliton_interaction_study(cfg, alphas=alphas)
    out = _ensure_out_dir(cfg)

    written = []
    for alpha, result in runs:
        tag = f"alpha{alpha:g}"
        inv_path = os.path.join(out, f"invariants_{tag}.csv")
        io.write_invariants(inv_path, result.invariants)
        written.append(inv_path)
        x = grid_points(result.disc.M_phys, cfg.l)
        j0 = int(np.argmin(np.abs(x)))
        slices = []
        for t, field in result.snapshots:
            snap_path = os.path.join(out, f"snapshot_{tag}_t{t:g}.snap")
            io.write_snapshot(
                snap_path, field, io.SnapshotMeta(n=cfg.n, alpha=alpha, t=t)
            )
            written.append(snap_path)
            slices.append((t, field.values[:, j0]))
        cs_path = os.path.join(out, f"cross_section_{tag}.csv")
        io.write_cross_section(cs_path, x, slices)
        written.append(cs_path)

        final_field = result.snapshots[-1][1]
        peaks = peak_positions(final_field)
        desc = ", ".join(f"x={p:.2f} h={h:.3f}" for p, h in peaks[:2])
        print(f"alpha={alpha:g}: final peaks [{desc}]")

    io.write_manifest(
        os.path.join(out, "manifest.json"),
        _config_echo(cfg),
        {f"alpha{a:g}_s": sum(r.timings.values()) for a, r in runs},
        {f"alpha{a:g}": _drift_dict(r.invariants) for a, r in runs},
        written,
    )
    print(f"artifacts in {out}")
    return 0


def _cmd_oracle_check(args) -> int:
    worst = oracle_check(args.nmax, args.trials, args.seed)
    print(f"max |dealiased - direct| discrepancy: {worst:.3e} (tolerance {ORACLE_TOLERANCE:g})")
    if worst > ORACLE_TOLERANCE:
        print("oracle check FAILED", file=sys.stderr)
        return 2
    print("oracle check passed")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="fzk",
        description="Spectral Galerkin solver for the fractional "
        "Zakharov-Kuznetsov equation on a periodic 2D domain",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="integrate one configuration")
    p_run.add_argument("config")
    p_run.set_defaults(func=_cmd_run)

    p_conv = sub.add_parser("converge", help="resolution convergence study")
    p_conv.add_argument("config")
    p_conv.add_argument("--ns", default="16,32,64,128", help="comma-separated doubling resolutions")
    p_conv.set_defaults(func=_cmd_converge)

    p_temp = sub.add_parser("temporal-order", help="time-step convergence study")
    p_temp.add_argument("config")
    p_temp.add_argument("--dts", required=True, help="comma-separated halving step sizes")
    p_temp.set_defaults(func=_cmd_temporal_order)

    p_sol = sub.add_parser("solitons", help="two-soliton interaction study")
    p_sol.add_argument("config")
    p_sol.add_argument(
        "--full",
        action="store_true",
        help="override to the full-scale configuration (N=512, T=60, "
        "solitons at x=-15 and x=0); hours-scale",
    )
    p_sol.add_argument(
        "--alphas",
        default=",".join(f"{a:g}" for a in DEFAULT_FRACTIONAL_ORDERS),
        help="comma-separated fractional orders",
    )
    p_sol.set_defaults(func=_cmd_solitons)

    p_orc = sub.add_parser("oracle-check", help="dealiased vs direct convolution self-check")
    p_orc.add_argument("--nmax", type=int, default=8)
    p_orc.add_argument("--trials", type=int, default=100)
    p_orc.add_argument("--seed", type=int, default=0)
    p_orc.set_defaults(func=_cmd_oracle_check)
    return parser


def cli_main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except BlowUpError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 2
    except (FzkError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


def main() -> None:
    sys.exit(cli_main())
