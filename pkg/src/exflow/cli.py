import argparse
import json
import sys
from pathlib import Path
from typing import List, Optional

from . import analyze, load_subject
from ..core.errors import ConfigError, ExflowError, UnknownFixture
from ..core.output_manager import round_floats, write_json_report
from ..core.pipeline_processor import setup_logging, trace_orbit
from ..ingestion.config_loader import load_config, load_settings
from ..ingestion.gallery import list_fixtures
from .types import AnalysisJob

CHECK_TARGETS = ("complete", "thm66", "separation", "compactness")
FIXTURE_COMMANDS = ("ends", "limits", "complete", "basins", "duality")


def _common(parser: argparse.ArgumentParser, fixture: bool = True) -> None:
    if fixture:
        parser.add_argument("--fixture", required=True, help="Gallery fixture name (see `efl gallery list`)")
        parser.add_argument("--n", type=int, help="Size parameter of parametric fixtures")
    parser.add_argument("--json", dest="json_path", help="Write the JSON report here")
    parser.add_argument("--dot", dest="dot_path", help="Write the component tree as DOT here")
    parser.add_argument("--dynamics-dot", dest="dynamics_dot_path", help="Write the cell dynamics as DOT here")
    parser.add_argument("--depth", type=int, help="Truncation of absorbing towers (default EFL_MAX_DEPTH)")
    parser.add_argument("--seed", type=int, help="Seed for random walk sampling")
    parser.add_argument("--walks", type=int, help="Number of sampled walks for basins")
    parser.add_argument("--steps", type=int, help="Length of sampled walks")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="efl",
        description="Ends, limit sets and C0-completions of finite exterior flows"
    )
    parser.add_argument(
        "--log-level",
        choices=["DEBUG", "INFO", "WARNING", "ERROR"],
        help="Set logging level (default: EFL_LOG_LEVEL or INFO)"
    )
    commands = parser.add_subparsers(dest="command", required=True)

    gallery_cmd = commands.add_parser("gallery", help="Fixture gallery")
    gallery_cmd.add_argument("action", choices=["list"])

    analyze_cmd = commands.add_parser("analyze", help="Analyse the ODE described by a config file")
    analyze_cmd.add_argument("config", help="Path to an analysis config")
    _common(analyze_cmd, fixture=False)

    for name in FIXTURE_COMMANDS:
        _common(commands.add_parser(name, help=f"Run the {name} analysis on a fixture"))

    check_cmd = commands.add_parser("check", help="Run one theorem checker on a fixture")
    check_cmd.add_argument("target", choices=CHECK_TARGETS)
    _common(check_cmd)

    orbit_cmd = commands.add_parser("orbit", help="Follow one trajectory and report its end")
    orbit_cmd.add_argument("--fixture", required=True, help="Gallery fixture name")
    orbit_cmd.add_argument("--n", type=int, help="Size parameter of parametric fixtures")
    orbit_cmd.add_argument("--from", dest="start", required=True, help="Starting top cell")
    orbit_cmd.add_argument("--steps", type=int, default=64, help="Walk length (default: 64)")
    orbit_cmd.add_argument("--seed", type=int, help="Random maximal walk instead of the least-image walk")
    orbit_cmd.add_argument("--depth", type=int, help="Truncation of the absorbing tower")
    orbit_cmd.add_argument("--json", dest="json_path", help="Write the orbit report here")
    return parser


def _job(args: argparse.Namespace) -> AnalysisJob:
    job = AnalysisJob(
        json_path=Path(args.json_path) if args.json_path else None,
        dot_path=Path(args.dot_path) if args.dot_path else None,
        dynamics_dot_path=Path(args.dynamics_dot_path) if args.dynamics_dot_path else None,
        depth=args.depth,
    )
    if args.command == "analyze":
        config = load_config(args.config)
        job.config_path = Path(args.config)
        job.checks = list(config.checks)
        job.seed, job.walks, job.steps = config.seed, config.walks, config.steps
        job.depth = args.depth or config.depth
    else:
        job.fixture, job.n = args.fixture, args.n
        job.checks = [args.target if args.command == "check" else args.command]
    if args.seed is not None:
        job.seed = args.seed
    if args.walks is not None:
        job.walks = args.walks
    if args.steps is not None:
        job.steps = args.steps
    return job


def _emit(payload: dict, json_path: Optional[str]) -> None:
    if json_path:
        print(f"✅ Report written to: {json_path}")
    else:
        print(json.dumps(payload, indent=2, ensure_ascii=False))


def run(args: argparse.Namespace) -> int:
    if args.command == "gallery":
        for name in list_fixtures():
            print(name)
        return 0

    if args.command == "orbit":
        job = AnalysisJob(fixture=args.fixture, n=args.n, depth=args.depth)
        subject = load_subject(job)
        report = round_floats(trace_orbit(subject, args.start, args.steps, args.seed))
        if args.json_path:
            write_json_report(report, args.json_path)
        _emit(report, args.json_path)
        return 0

    job = _job(args)
    result = analyze(job)
    _emit(result.report, args.json_path)
    if result.dot_path:
        print(f"✅ Component tree written to: {result.dot_path}")
    if result.dynamics_dot_path:
        print(f"✅ Dynamics graph written to: {result.dynamics_dot_path}")
    return 0


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)

    try:
        settings = load_settings()
        setup_logging(args.log_level or settings.log_level, settings.log_file)
        return run(args)
    except (ConfigError, UnknownFixture) as exc:
        print(f"❌ {exc}", file=sys.stderr)
        return 2
    except ExflowError as exc:
        print(json.dumps(exc.to_dict()), file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
