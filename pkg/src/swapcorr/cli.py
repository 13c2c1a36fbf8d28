"""Command-line interface: overlap, analyze, sweep, trajectory, selftest.

Exit codes: 0 success, 1 usage error, 2 input validation error, 3 numerical
failure.  File-producing commands write a ``<out>.manifest.json`` sidecar
recording the command, parameters, seed, tool version and timestamp, so the
data files themselves stay byte-identical across reruns.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import sys
from datetime import datetime, timezone

import numpy as np

from . import __version__
from .circuit import build_closed_form, measure_stats, sample_shots
from .linalg import DensityMatrix, InvalidStateError, NumericalError, load_density_matrix
from .measures import CLASS_ENTANGLED, classify
from .scenarios import (
    TrajectoryConfig,
    sweep,
    trajectory,
    write_sweep_csv,
    write_trajectory_csv,
)
from .selftest import run_selftest
from .witness import construct_witness

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_INPUT = 2
EXIT_NUMERICAL = 3

MAX_REGISTER_DIM = 8


@dataclasses.dataclass(frozen=True)
class RunManifest:
    command: str
    parameters: dict
    seed: int
    tool_version: str
    timestamp: str

    def write_sidecar(self, out_path: str) -> str:
        path = f"{out_path}.manifest.json"
        with open(path, "w", encoding="utf-8") as fh:
            json.dump(dataclasses.asdict(self), fh, indent=2)
            fh.write("\n")
        return path


def _manifest(command: str, parameters: dict, seed: int) -> RunManifest:
    return RunManifest(
        command=command,
        parameters=parameters,
        seed=seed,
        tool_version=__version__,
        timestamp=datetime.now(timezone.utc).isoformat(),
    )


def _load_register(path: str) -> DensityMatrix:
    rho = load_density_matrix(path)
    if rho.dim > MAX_REGISTER_DIM:
        raise InvalidStateError(
            f"{path}: register dimension {rho.dim} exceeds the CLI limit of {MAX_REGISTER_DIM}"
        )
    return rho


def _load_pair(path1: str, path2: str) -> tuple[DensityMatrix, DensityMatrix]:
    rho1 = _load_register(path1)
    rho2 = _load_register(path2)
    if rho1.dim != rho2.dim:
        raise InvalidStateError(
            f"input dimensions differ: {path1} has {rho1.dim}, {path2} has {rho2.dim}"
        )
    return rho1, rho2


def cmd_overlap(args: argparse.Namespace) -> int:
    """Print the exact overlap statistics, optionally with a sampled estimate."""
    rho1, rho2 = _load_pair(args.state1, args.state2)
    tri = build_closed_form(rho1, rho2)
    stats = measure_stats(tri)
    print(f"overlap: {stats.overlap:.12g}")
    print(f"p_plus: {stats.p_plus:.12g}")
    print(f"p_minus: {stats.p_minus:.12g}")
    if args.shots is not None:
        est = sample_shots(tri, args.shots, seed=args.seed)
        print(f"sampled_overlap: {est.overlap_estimate:.12g}")
        print(f"std_error: {est.std_error:.12g}")
        print(f"shots: {est.n_shots}")
        print(f"seed: {est.seed}")
    return EXIT_OK


def cmd_analyze(args: argparse.Namespace) -> int:
    """Print the correlation report, plus a witness certificate when entangled."""
    rho1, rho2 = _load_pair(args.state1, args.state2)
    report = classify(build_closed_form(rho1, rho2))
    payload = {"report": report.to_json_dict(), "witness": None}
    if report.classification == CLASS_ENTANGLED:
        payload["witness"] = construct_witness(rho1, rho2).to_json_dict()
    text = json.dumps(payload, indent=2)
    print(text)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
        manifest = _manifest(
            "analyze", {"state1": args.state1, "state2": args.state2, "out": args.out}, args.seed
        )
        manifest.write_sidecar(args.out)
    return EXIT_OK


def cmd_sweep(args: argparse.Namespace) -> int:
    """Write the (a1, a2) sweep CSV (and a surface figure) for the channel example."""
    rows = sweep(args.resolution)
    write_sweep_csv(rows, args.out)
    print(f"wrote {args.out} ({len(rows)} rows)")
    manifest = _manifest(
        "sweep", {"resolution": args.resolution, "out": args.out}, args.seed
    )
    print(f"wrote {manifest.write_sidecar(args.out)}")
    if not args.no_figure:
        from .plots import render_sweep_figure

        fig_path = _figure_path(args.out)
        render_sweep_figure(rows, fig_path)
        print(f"wrote {fig_path}")
    return EXIT_OK


def cmd_trajectory(args: argparse.Namespace) -> int:
    """Write the decay-trajectory CSV (and figure) and print the death times."""
    config = TrajectoryConfig(
        gamma1_early=args.gamma1_early,
        gamma2_early=args.gamma2_early,
        gamma1_late=args.gamma1_late,
        gamma2_late=args.gamma2_late,
        a10=args.a10,
        a20=args.a20,
        t_switch=args.t_switch,
        t_max=args.t_max,
        n_steps=args.steps,
        carry_across=not args.no_carry,
    )
    result = trajectory(config)
    write_trajectory_csv(result.points, args.out)
    print(f"wrote {args.out} ({len(result.points)} rows)")
    manifest = _manifest("trajectory", dataclasses.asdict(config) | {"out": args.out}, args.seed)
    print(f"wrote {manifest.write_sidecar(args.out)}")
    if not args.no_figure:
        from .plots import render_trajectory_figure

        fig_path = _figure_path(args.out)
        render_trajectory_figure(result, fig_path)
        print(f"wrote {fig_path}")

    def show(name: str, value: float | None) -> None:
        print(f"{name}: {'none' if value is None else f'{value:.6g}'}")

    show("death_time", result.death_time)
    show("discord_death_time", result.discord_death_time)
    show("negativity_death_time", result.negativity_death_time)
    return EXIT_OK


def cmd_selftest(args: argparse.Namespace) -> int:
    failures = run_selftest(seed=args.seed, quick=args.quick)
    return EXIT_OK if failures == 0 else EXIT_NUMERICAL


def _figure_path(out_csv: str) -> str:
    stem = out_csv[:-4] if out_csv.lower().endswith(".csv") else out_csv
    return f"{stem}.png"


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="swapcorr",
        description=(
            "Simulate the controlled-swap overlap measurement circuit and "
            "analyze the correlations it creates."
        ),
    )
    parser.add_argument("--seed", type=int, default=0, help="random seed (default: 0)")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_seed(p: argparse.ArgumentParser) -> None:
        # also accepted after the subcommand; SUPPRESS keeps the global value
        # from being clobbered by a subparser default
        p.add_argument("--seed", type=int, default=argparse.SUPPRESS,
                       help="random seed (default: 0)")

    p_overlap = sub.add_parser("overlap", help="exact overlap statistics for two state files")
    p_overlap.add_argument("state1", help="matrix JSON file for register 1")
    p_overlap.add_argument("state2", help="matrix JSON file for register 2")
    p_overlap.add_argument("--shots", type=int, default=None,
                           help="also draw this many simulated readouts")
    add_seed(p_overlap)
    p_overlap.set_defaults(func=cmd_overlap)

    p_analyze = sub.add_parser("analyze", help="full correlation report for two state files")
    p_analyze.add_argument("state1")
    p_analyze.add_argument("state2")
    p_analyze.add_argument("--out", default=None, help="also write the report JSON here")
    add_seed(p_analyze)
    p_analyze.set_defaults(func=cmd_analyze)

    p_sweep = sub.add_parser("sweep", help="correlation surfaces over the (a1, a2) square")
    p_sweep.add_argument("--resolution", type=int, default=101,
                         help="grid points per axis (default: 101)")
    p_sweep.add_argument("--out", required=True, help="output CSV path")
    p_sweep.add_argument("--no-figure", action="store_true",
                         help="skip rendering the surface figure")
    add_seed(p_sweep)
    p_sweep.set_defaults(func=cmd_sweep)

    p_traj = sub.add_parser("trajectory", help="decay trajectory and correlation death time")
    p_traj.add_argument("--gamma1-early", type=float, default=10.0)
    p_traj.add_argument("--gamma2-early", type=float, default=5.0)
    p_traj.add_argument("--gamma1-late", type=float, default=10.0)
    p_traj.add_argument("--gamma2-late", type=float, default=10.0)
    p_traj.add_argument("--a10", type=float, default=1.0)
    p_traj.add_argument("--a20", type=float, default=float(np.exp(-1.0)))
    p_traj.add_argument("--t-switch", type=float, default=0.2)
    p_traj.add_argument("--t-max", type=float, default=0.4)
    p_traj.add_argument("--steps", type=int, default=81)
    p_traj.add_argument("--no-carry", action="store_true",
                        help="restart the late decay from t=0 instead of the switch value")
    p_traj.add_argument("--out", required=True, help="output CSV path")
    p_traj.add_argument("--no-figure", action="store_true")
    add_seed(p_traj)
    p_traj.set_defaults(func=cmd_trajectory)

    p_self = sub.add_parser("selftest", help="run the built-in property checks")
    p_self.add_argument("--quick", action="store_true", help="smaller corpora")
    add_seed(p_self)
    p_self.set_defaults(func=cmd_selftest)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code in (0, None) else EXIT_USAGE
    try:
        return args.func(args)
    except InvalidStateError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (OSError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except NumericalError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL


def entry_point() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entry_point()
