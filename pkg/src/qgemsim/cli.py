"""Command-line interface: reproducible sweeps written as CSV/JSON.

Every CSV starts with a single ``#``-prefixed JSON line echoing the fully
resolved configuration (including seeds), so any output file can be traced
back to the run that produced it.  Numbers are serialized with 12
significant digits; given the same configuration and seeds the output is
byte-identical across runs.

Exit codes: 0 success, 2 invalid configuration, 3 entanglement not
certifiable at the requested point.
"""

from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from . import __version__
from .entanglement import build_witness, entanglement_entropy, witness_expectation
from .environment import EnvironmentParams, sweep_rows
from .experiment import (MODES, NotCertifiableError, min_shots_single_seed,
                         prepare_instance, simulate_confidence)
from .geometry import (SETUP_KINDS, PhysicalParams, build_setup, load_config,
                       params_from_config, phase_table)
from .pauli import group_ldfc, plan_to_dict, witness_decomposition
from .states import evolved_density_matrix

EXIT_OK = 0
EXIT_INVALID = 2
EXIT_NOT_CERTIFIABLE = 3


def _fmt(value) -> str:
    if isinstance(value, float):
        return f"{value:.12g}"
    return str(value)


def _write_csv(path: str | None, header_obj: dict, columns, rows) -> None:
    lines = ["# " + json.dumps(header_obj, sort_keys=True)]
    lines.append(",".join(columns))
    for row in rows:
        lines.append(",".join(_fmt(row[c]) for c in columns))
    text = "\n".join(lines) + "\n"
    if path is None:
        sys.stdout.write(text)
    else:
        with open(path, "w") as fh:
            fh.write(text)


def _write_text(path: str | None, text: str) -> None:
    if path is None:
        sys.stdout.write(text)
    else:
        with open(path, "w") as fh:
            fh.write(text)


def _parse_grid(spec: str, name: str):
    parts = spec.split(":")
    if len(parts) != 3:
        raise ValueError(f"{name} must be start:stop:steps, got {spec!r}")
    start, stop = float(parts[0]), float(parts[1])
    steps = int(parts[2])
    if steps < 1:
        raise ValueError(f"{name} needs at least 1 step")
    return np.linspace(start, stop, steps)


def _resolve(args):
    """Apply --config overrides and build (params, setup, subsystem index)."""
    config = load_config(args.config) if args.config else {}
    params = params_from_config(config)
    kind = config.get("kind", args.setup)
    n = config.get("n", args.n)
    D = config.get("D", args.d_levels)
    setup = build_setup(kind, n, D, params)
    subsystem = args.subsystem if args.subsystem is not None else min(2, n)
    if not 1 <= subsystem <= n:
        raise ValueError(f"subsystem must be a particle label in 1..{n}")
    return params, setup, subsystem - 1


def _header(args, params, setup, subsystem_index, **extra) -> dict:
    head = {
        "tool": f"qgemsim {__version__}",
        "command": args.command,
        "setup": setup.kind,
        "n": setup.n,
        "D": setup.D,
        "subsystem": subsystem_index + 1,
        "mass_kg": params.mass,
        "d_min_m": params.d_min,
        "delta_x_m": params.delta_x,
    }
    head.update(extra)
    return head


def cmd_entropy_sweep(args) -> int:
    params, setup, sub = _resolve(args)
    taus = _parse_grid(args.tau_grid, "--tau-grid")
    subsystems = args.entropy_subsystems or list(range(1, setup.n + 1))
    if any(not 1 <= s <= setup.n for s in subsystems):
        raise ValueError(f"entropy subsystems must be particle labels in 1..{setup.n}")
    table = phase_table(setup, params)
    rows = []
    for tau in taus:
        rho = evolved_density_matrix(table, float(tau))
        for s in subsystems:
            rows.append({
                "setup": setup.kind, "n": setup.n, "subsystem": s,
                "tau_s": float(tau),
                "entropy_bits": entanglement_entropy(rho, {s - 1}),
            })
    head = _header(args, params, setup, sub, tau_grid=args.tau_grid,
                   entropy_subsystems=subsystems)
    _write_csv(args.out, head, ["setup", "n", "subsystem", "tau_s", "entropy_bits"], rows)
    return EXIT_OK


def cmd_witness_sweep(args) -> int:
    params, setup, sub = _resolve(args)
    taus = _parse_grid(args.tau_grid, "--tau-grid")
    gammas = args.gamma or [0.0]
    table = phase_table(setup, params)
    fixed_witness = None
    if args.witness == "fixed":
        rho_ref = evolved_density_matrix(table, args.ref_tau, args.ref_gamma)
        fixed_witness = build_witness(rho_ref, sub, source="fixed")
    rows = []
    for gamma in gammas:
        for tau in taus:
            rho = evolved_density_matrix(table, float(tau), float(gamma))
            w = fixed_witness if fixed_witness is not None else build_witness(rho, sub)
            rows.append({
                "setup": setup.kind, "n": setup.n, "D": setup.D, "subsystem": sub + 1,
                "gamma_hz": float(gamma), "tau_s": float(tau),
                "witness_value": witness_expectation(w, rho),
            })
    head = _header(args, params, setup, sub, tau_grid=args.tau_grid,
                   gamma=list(map(float, gammas)), witness_mode=args.witness,
                   ref_gamma=args.ref_gamma, ref_tau=args.ref_tau)
    _write_csv(args.out, head,
               ["setup", "n", "D", "subsystem", "gamma_hz", "tau_s", "witness_value"],
               rows)
    return EXIT_OK


def _measure_rows(setup, params, sub, gamma, tau, mode, seeds, target, shots_cap):
    instance = prepare_instance(setup, params, sub, gamma, tau)
    if instance.expectation >= 0:
        raise NotCertifiableError(
            f"witness expectation {instance.expectation:.4g} >= 0 at "
            f"gamma={gamma}: entanglement not certifiable")
    per_seed = [min_shots_single_seed(instance, mode, target, seed) for seed in seeds]
    median = int(np.median(per_seed))
    units = instance.n_groups if mode == "grouped" else instance.n_terms
    lo = 2 * units
    hi = shots_cap if shots_cap else 2 * median
    budgets = sorted({int(b) for b in np.geomspace(max(lo, 8), max(hi, lo + 1), 12)})
    rows = []
    base = {"n": setup.n, "D": setup.D, "setup": setup.kind, "gamma_hz": gamma,
            "tau_s": tau, "mode": mode}
    for seed in seeds:
        stream = np.random.SeedSequence(seed).spawn(len(budgets))
        for budget, child in zip(budgets, stream):
            report = simulate_confidence(instance, budget, mode,
                                         np.random.default_rng(child))
            rows.append(base | {
                "total_shots": budget, "witness_mean": report.witness_mean,
                "stderr": report.stderr, "t": report.t_value,
                "confidence": report.confidence, "seed": seed,
            })
    # summary row: the median minimal budget, tagged with seed -1
    rows.append(base | {
        "total_shots": median, "witness_mean": instance.expectation,
        "stderr": 0.0, "t": 0.0, "confidence": target, "seed": -1,
    })
    return rows


def cmd_measure(args) -> int:
    params, setup, sub = _resolve(args)
    gammas = args.gamma or [0.0]
    seeds = list(range(args.seeds))
    modes = [args.mode] if args.mode else list(MODES)
    rows = []
    for gamma in gammas:
        for mode in modes:
            rows.extend(_measure_rows(setup, params, sub, float(gamma), params.tau,
                                      mode, seeds, args.target, args.shots))
    head = _header(args, params, setup, sub, gamma=list(map(float, gammas)),
                   tau_s=params.tau, modes=modes, seeds=seeds, target=args.target)
    _write_csv(args.out, head,
               ["n", "D", "setup", "gamma_hz", "tau_s", "mode", "total_shots",
                "witness_mean", "stderr", "t", "confidence", "seed"], rows)
    return EXIT_OK


def cmd_deco_estimate(args) -> int:
    grid = _parse_grid(args.te_grid, "--te-grid")
    if grid.min() < 0.05 or grid.max() > 10:
        raise ValueError("--te-grid must stay within [0.05, 10] K")
    rows = sweep_rows(grid, EnvironmentParams(T_e=float(grid[0]), T_i=args.t_internal))
    head = {"tool": f"qgemsim {__version__}", "command": args.command,
            "te_grid": args.te_grid, "T_i_K": args.t_internal}
    _write_csv(args.out, head,
               ["T_e_K", "lambda_air", "gamma_air_hz", "lambda_s", "lambda_e",
                "lambda_a", "gamma_bb_hz", "gamma_total_hz"], rows)
    return EXIT_OK


def cmd_group_ops(args) -> int:
    params, setup, sub = _resolve(args)
    if setup.D != 2:
        raise ValueError("group-ops requires qubit setups (D = 2)")
    gamma = args.gamma[0] if args.gamma else 0.0
    decomp = witness_decomposition(setup, params, sub, gamma, params.tau)
    payload = plan_to_dict(group_ldfc(decomp))
    payload["config"] = _header(args, params, setup, sub, gamma_hz=gamma,
                                tau_s=params.tau)
    _write_text(args.out, json.dumps(payload, indent=2) + "\n")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qgemsim",
        description="Simulate gravitationally induced entanglement experiments")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--setup", choices=SETUP_KINDS, default="parallel")
        p.add_argument("--n", type=int, default=3, help="number of particles")
        p.add_argument("--d-levels", type=int, default=2, dest="d_levels",
                       help="superposition arms per particle")
        p.add_argument("--subsystem", type=int, default=None,
                       help="1-based particle label to trace/transpose "
                            "(default: particle 2, the middle one for n=3)")
        p.add_argument("--config", default=None,
                       help="key=value file overriding kind/n/D/m/d_min/delta_x/tau")
        p.add_argument("--out", default=None, help="output path (default stdout)")

    p = sub.add_parser("entropy-sweep", help="entanglement entropy over time")
    common(p)
    p.add_argument("--tau-grid", default="0:5:51", help="start:stop:steps in seconds")
    p.add_argument("--entropy-subsystems", type=int, nargs="*", default=None,
                   help="particle labels to report (default: all)")
    p.set_defaults(func=cmd_entropy_sweep)

    p = sub.add_parser("witness-sweep", help="witness expectation over gamma and tau")
    common(p)
    p.add_argument("--tau-grid", default="0:5:51")
    p.add_argument("--gamma", type=float, action="append", default=None,
                   help="decoherence rate in Hz (repeatable)")
    p.add_argument("--witness", choices=("self", "fixed"), default="self")
    p.add_argument("--ref-gamma", type=float, default=0.0,
                   help="fixed-mode witness reference decoherence rate")
    p.add_argument("--ref-tau", type=float, default=2.5,
                   help="fixed-mode witness reference time")
    p.set_defaults(func=cmd_witness_sweep)

    p = sub.add_parser("measure", help="finite-shot certification simulation")
    common(p)
    p.add_argument("--gamma", type=float, action="append", default=None)
    p.add_argument("--mode", choices=MODES, default=None,
                   help="measurement mode (default: both)")
    p.add_argument("--shots", type=int, default=None,
                   help="cap for the confidence-curve budgets")
    p.add_argument("--seeds", type=int, default=11, help="number of RNG seeds")
    p.add_argument("--target", type=float, default=0.999,
                   help="confidence target for the minimal-shot search")
    p.set_defaults(func=cmd_measure)

    p = sub.add_parser("deco-estimate", help="environmental decoherence-rate table")
    p.add_argument("--te-grid", default="0.1:5:50",
                   help="environment temperature grid start:stop:steps in K")
    p.add_argument("--t-internal", type=float, default=0.15,
                   help="internal temperature of the test mass in K")
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_deco_estimate)

    p = sub.add_parser("group-ops", help="witness terms and QWC groups as JSON")
    common(p)
    p.add_argument("--gamma", type=float, action="append", default=None)
    p.set_defaults(func=cmd_group_ops)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except NotCertifiableError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NOT_CERTIFIABLE
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
