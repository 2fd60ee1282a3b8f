"""Command-line front end.

Exit codes: 0 success, 2 configuration or usage error, 3 data error.
"""

from __future__ import annotations

import argparse
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import fields, replace
from pathlib import Path

from .config import LEARNERS, ConfigError, RunConfig, load_config_file
from .formats import (
    DataError,
    format_summary,
    read_episodes_csv,
    summary_json,
    write_episodes_csv,
)
from .stats import mann_whitney_u

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_DATA = 3
OUTPUT_ROOT_ENV = "QARDNS_OUTPUT_ROOT"


def _err(msg: str) -> None:
    print(f"qardns: {msg}", file=sys.stderr)


def _triple(text: str) -> tuple[int, int, int]:
    parts = text.split(",")
    if len(parts) != 3:
        raise argparse.ArgumentTypeError("expected three comma-separated integers")
    return tuple(int(p) for p in parts)


def _add_run_options(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", help="key=value config file; flags override it")
    p.add_argument("--episodes", type=int)
    p.add_argument("--seed", type=int)
    p.add_argument("--dims", type=_triple)
    p.add_argument("--goal", type=_triple)
    p.add_argument("--obstacle-fraction", type=float)
    p.add_argument("--max-steps", type=int)
    p.add_argument("--n-qubits", type=int)
    p.add_argument("--shots", type=int)
    p.add_argument("--learner", choices=LEARNERS)
    p.add_argument("--epsilon-fixed", type=float)
    p.add_argument("--stage-file")
    p.add_argument("-o", "--output-dir")


def config_from_args(args: argparse.Namespace) -> RunConfig:
    values = {}
    if getattr(args, "config", None):
        values.update(load_config_file(args.config))
    for f in fields(RunConfig):
        v = getattr(args, f.name, None)
        if v is not None:
            values[f.name] = v
    if "output_dir" not in values:
        root = os.environ.get(OUTPUT_ROOT_ENV, "runs")
        values["output_dir"] = str(Path(root) / f"seed{values.get('seed', 0)}")
    return RunConfig(**values).validate()


def execute_run(config: RunConfig, quiet: bool = True) -> Path:
    """Run one experiment and write its artefacts; returns the output directory."""
    from .trainer import run_experiment

    out = Path(config.output_dir)
    out.mkdir(parents=True, exist_ok=True)
    (out / "run_config.txt").write_text(config.to_text())
    records, summary = run_experiment(config)
    write_episodes_csv(out / "episodes.csv", records)
    text = format_summary(summary)
    (out / "summary.txt").write_text(text)
    (out / "summary.json").write_text(summary_json(summary))
    if not quiet:
        print(text, end="")
    return out


def cmd_run(args: argparse.Namespace) -> int:
    try:
        config = config_from_args(args)
    except (ConfigError, ValueError, OSError) as exc:
        _err(f"invalid configuration: {exc}")
        return EXIT_CONFIG
    seeds = args.sweep_seeds
    try:
        if not seeds:
            execute_run(config, quiet=False)
            return EXIT_OK
        base = Path(config.output_dir)
        configs = [
            replace(config, seed=s, output_dir=str(base / f"seed{s}")) for s in seeds
        ]
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            for out in pool.map(execute_run, configs):
                print(f"wrote {out}")
        return EXIT_OK
    except OSError as exc:
        _err(f"cannot write output: {exc}")
        return EXIT_CONFIG


def compare_dirs(dir_a: Path, dir_b: Path) -> str:
    a = read_episodes_csv(dir_a / "episodes.csv")
    b = read_episodes_csv(dir_b / "episodes.csv")
    if sorted(a) != sorted(b):
        raise ConfigError(
            f"agent counts differ: {len(a)} in {dir_a}, {len(b)} in {dir_b}"
        )
    lines = [f"A: {dir_a}", f"B: {dir_b}", "test: Mann-Whitney U on per-episode total reward"]
    for agent in sorted(a):
        res = mann_whitney_u(a[agent]["total_reward"], b[agent]["total_reward"])
        lines.append(
            f"Agent {agent}: U={res.U:.1f} z={res.z:.4f} p={res.format_p()} "
            f"r={res.effect_size:.4f} n1={res.n1} n2={res.n2}"
        )
    return "\n".join(lines) + "\n"


def cmd_compare(args: argparse.Namespace) -> int:
    try:
        if args.config_a or args.config_b:
            if not (args.config_a and args.config_b):
                raise ConfigError("--config-a and --config-b must be given together")
            dirs = [
                execute_run(RunConfig(**load_config_file(c)).validate())
                for c in (args.config_a, args.config_b)
            ]
        else:
            if len(args.runs) != 2:
                raise ConfigError("compare needs exactly two run directories")
            dirs = [Path(d) for d in args.runs]
        for d in dirs:
            if not (d / "episodes.csv").is_file():
                raise ConfigError(f"no episodes.csv in {d}")
        text = compare_dirs(*dirs)
    except ConfigError as exc:
        _err(str(exc))
        return EXIT_CONFIG
    except DataError as exc:
        _err(f"malformed data: {exc}")
        return EXIT_DATA
    out = Path(args.output) if args.output else dirs[0] / "comparison.txt"
    try:
        out.write_text(text)
    except OSError as exc:
        _err(f"cannot write {out}: {exc}")
        return EXIT_CONFIG
    print(text, end="")
    return EXIT_OK


def cmd_plot(args: argparse.Namespace) -> int:
    from .plots import SMOOTH_WINDOW, write_plots

    run_dir = Path(args.run_dir)
    csv_path = run_dir / "episodes.csv"
    if not csv_path.is_file():
        _err(f"no episodes.csv in {run_dir}")
        return EXIT_CONFIG
    try:
        agents = read_episodes_csv(csv_path)
    except DataError as exc:
        _err(f"malformed data: {exc}")
        return EXIT_DATA
    out_dir = Path(args.output_dir) if args.output_dir else run_dir
    out_dir.mkdir(parents=True, exist_ok=True)
    paths = write_plots(agents, out_dir)
    n = max((len(c["episode"]) for c in agents.values()), default=0)
    if n < SMOOTH_WINDOW:
        print(f"note: {n} episodes < window {SMOOTH_WINDOW}; curves left unsmoothed")
    for p in paths:
        print(f"wrote {p}")
    return EXIT_OK


def cmd_summarize(args: argparse.Namespace) -> int:
    """Recompute summary statistics from an existing episodes.csv."""
    from .stats import summarize_agent

    try:
        agents = read_episodes_csv(Path(args.run_dir) / "episodes.csv")
    except FileNotFoundError as exc:
        _err(str(exc))
        return EXIT_CONFIG
    except DataError as exc:
        _err(f"malformed data: {exc}")
        return EXIT_DATA
    for i, cols in sorted(agents.items()):
        s = summarize_agent(i, cols["total_reward"], cols["steps"], cols["success"], cols["collisions"])
        print(
            f"Agent {i}: success={s.success_rate} mean_reward={s.mean_reward:.4f} "
            f"std={s.std_reward:.4f} mean_steps={s.mean_steps:.2f} "
            f"collision_rate={s.collision_rate:.4f}"
        )
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="qardns", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("run", help="run an experiment")
    _add_run_options(p)
    p.add_argument("--sweep-seeds", type=int, nargs="+", help="run one directory per seed")
    p.add_argument("--jobs", type=int, default=None, help="parallel workers for sweeps")
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("compare", help="Mann-Whitney comparison of two runs")
    p.add_argument("runs", nargs="*", help="two run directories")
    p.add_argument("--config-a")
    p.add_argument("--config-b")
    p.add_argument("-o", "--output", help="comparison report path")
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser("plot", help="write SVG figures for a run")
    p.add_argument("run_dir")
    p.add_argument("-o", "--output-dir")
    p.set_defaults(func=cmd_plot)

    p = sub.add_parser("summarize", help="recompute summary statistics from a run")
    p.add_argument("run_dir")
    p.set_defaults(func=cmd_summarize)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_CONFIG
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
