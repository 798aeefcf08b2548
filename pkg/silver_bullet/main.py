import logging
import sys
from argparse import ArgumentParser, Namespace
from typing import List, Optional

from dotenv import load_dotenv

from .analytics.bounds import hammer_bounds
from .analytics.table import table_geometry
from .attacks.fuzz import FuzzCampaign
from .attacks.oracle import exhaustive_oracle, oracle_bound
from .attacks.wave import execute, plan_wave
from .config.loader import load_config
from .config.settings import get_settings
from .explorer.presets import PRESET_NAMES
from .explorer.sweep import markers_path, min_d_markers, sweep, write_csv, write_markers
from .mechanism.simulator import run_trace
from .mechanism.trace import load_trace
from .models.errors import (
    ConfigError,
    ConstraintError,
    DomainError,
    OracleLimitError,
    TimingError,
    TraceError,
    UsageError,
)
from .models.validation import validate
from .utils.reporting import render

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_VIOLATION = 2
EXIT_UNSAFE = 3

LOG_FORMAT = '%(asctime)s - %(name)s - %(levelname)s - %(message)s'


def _configure_logging(args: Namespace) -> None:
    level = 'DEBUG' if args.debug else (args.log_level or get_settings().log_level)
    logging.basicConfig(level=getattr(logging, level.upper(), logging.INFO),
                        format=LOG_FORMAT, stream=sys.stderr, force=True)


def _load(args: Namespace):
    if not args.config:
        raise UsageError(f"'{args.command}' needs --config")
    return load_config(args.config, args.set)


def _require_valid(device, config, allow_unsafe: bool = False) -> bool:
    violations = validate(device, config)
    for violation in violations:
        print(str(violation))
    if violations and not allow_unsafe:
        return False
    if violations:
        logger.warning("Continuing with an unsafe configuration (--allow-unsafe)")
    return True


def cmd_validate(args: Namespace) -> int:
    device, config = _load(args)
    thc = hammer_bounds(device, config).thc
    print(f"THC={thc}")
    violations = validate(device, config)
    for violation in violations:
        print(str(violation))
    return EXIT_VIOLATION if violations else EXIT_OK


def cmd_analyze(args: Namespace) -> int:
    device, config = _load(args)
    if not _require_valid(device, config):
        return EXIT_VIOLATION
    report = hammer_bounds(device, config, p_ref=args.p_ref)
    report = report.model_copy(update={'table': table_geometry(config, device.refresh_burst_r)})
    print(render(report, as_json=args.json))
    return EXIT_OK


def _simulate_trace(args: Namespace, device, config) -> int:
    events = load_trace(args.trace)
    report = run_trace(device, config, events, allow_unsafe=args.allow_unsafe)
    print(render(report, as_json=args.json))
    return EXIT_OK if report.safe else EXIT_UNSAFE


def _simulate_wave(args: Namespace, device, config) -> int:
    plan = plan_wave(device, config, p_ref=args.p_ref, allow_unsafe=args.allow_unsafe)
    if args.out:
        with open(args.out, 'w', encoding='utf-8') as handle:
            handle.write(plan.to_trace_text())
        logger.info(f"Wrote attack trace to {args.out}")
    outcome = execute(device, config, plan)
    print(render(outcome, as_json=args.json))
    return EXIT_OK if outcome.safe else EXIT_UNSAFE


def _simulate_fuzz(args: Namespace, device, config) -> int:
    campaign = FuzzCampaign(device, config, allow_unsafe=args.allow_unsafe)
    length = args.len if args.len is not None else 10 * campaign.thc
    report = campaign.run(args.seed, args.count, length)
    print(render(report, as_json=args.json))
    return EXIT_OK if report.safe else EXIT_UNSAFE


def cmd_simulate(args: Namespace) -> int:
    modes = [name for name, flag in (('trace', args.trace), ('wave', args.wave), ('fuzz', args.fuzz)) if flag]
    if len(modes) != 1:
        raise UsageError("simulate needs exactly one of --trace, --wave, --fuzz")
    if args.p_ref is not None and modes[0] != 'wave':
        raise UsageError("--p-ref only applies to --wave")
    device, config = _load(args)
    if not _require_valid(device, config, args.allow_unsafe):
        return EXIT_VIOLATION
    handler = {'trace': _simulate_trace, 'wave': _simulate_wave, 'fuzz': _simulate_fuzz}[modes[0]]
    return handler(args, device, config)


def cmd_oracle(args: Namespace) -> int:
    if args.horizon is None:
        raise UsageError("oracle needs --horizon")
    device, config = _load(args)
    value = exhaustive_oracle(device, config, args.horizon)
    bound = oracle_bound(device, config)
    print(f"oracle={value}")
    print(f"bound={bound}")
    print(f"oracle {'<=' if value <= bound else '>'} {bound}")
    return EXIT_OK if value <= bound else EXIT_UNSAFE


def cmd_sweep(args: Namespace) -> int:
    if not args.preset:
        raise UsageError(f"sweep needs --preset, one of {PRESET_NAMES}")
    if not args.out:
        raise UsageError("sweep needs --out")
    rows = sweep(args.preset, density=args.density)
    write_csv(rows, args.out)
    print(f"wrote {len(rows)} rows to {args.out}")
    if args.preset == 'fig7':
        markers = min_d_markers(rows[0].t, sorted({row.r for row in rows}))
        for r, limit in markers:
            logger.info(f"Protocol limit for R={r}: D >= {limit}")
        marker_out = markers_path(args.out)
        write_markers(markers, marker_out)
        print(f"wrote {len(markers)} protocol limits to {marker_out}")
    return EXIT_OK


COMMANDS = {
    'validate': cmd_validate,
    'analyze': cmd_analyze,
    'simulate': cmd_simulate,
    'oracle': cmd_oracle,
    'sweep': cmd_sweep,
}


def build_parser() -> ArgumentParser:
    common = ArgumentParser(add_help=False)
    common.add_argument("--config", help="Config file with device and mechanism keys")
    common.add_argument("--set", action="append", metavar="KEY=VALUE",
                        help="Override one config key (repeatable)")
    common.add_argument("--json", action="store_true", help="Print machine-readable reports")
    common.add_argument("--allow-unsafe", action="store_true",
                        help="Run even when the configuration has violations")
    common.add_argument("--log-level", help="Logging level (default: SILVER_BULLET_LOG_LEVEL or INFO)")
    common.add_argument("--debug", action="store_true", help="Shortcut for --log-level DEBUG")

    parser = ArgumentParser(prog="silver-bullet",
                            description="Analyze and simulate the Silver Bullet RowHammer mitigation")
    subparsers = parser.add_subparsers(dest="command", required=True)

    subparsers.add_parser("validate", parents=[common], help="Check a configuration and print its THC")

    analyze = subparsers.add_parser("analyze", parents=[common], help="Print the hammer-count bounds")
    analyze.add_argument("--p-ref", type=int, help="PENDING value at which the attack lets the target refresh")

    simulate = subparsers.add_parser("simulate", parents=[common], help="Replay a trace, wave attack or fuzz batch")
    simulate.add_argument("--trace", help="Trace file to replay")
    simulate.add_argument("--wave", action="store_true", help="Plan and replay the worst-case wave attack")
    simulate.add_argument("--fuzz", action="store_true", help="Replay a batch of generated traces")
    simulate.add_argument("--p-ref", type=int, help="PENDING value at which the attack lets the target refresh")
    simulate.add_argument("--seed", type=int, default=0, help="Fuzz seed (default: 0)")
    simulate.add_argument("--count", type=int, default=100, help="Number of fuzz traces (default: 100)")
    simulate.add_argument("--len", type=int, help="Fuzz trace length (default: 10 x THC)")
    simulate.add_argument("--out", help="Write the wave attack trace to this file")

    oracle = subparsers.add_parser("oracle", parents=[common], help="Exhaustive worst case on a tiny configuration")
    oracle.add_argument("--horizon", type=int, help="Number of activations to search over")

    sweep_parser = subparsers.add_parser("sweep", parents=[common], help="Write a design-space CSV")
    sweep_parser.add_argument("--preset", help=f"Dataset to generate: {', '.join(PRESET_NAMES)}")
    sweep_parser.add_argument("--out", help="CSV output path")
    sweep_parser.add_argument("--density", type=int, default=1, help="Grid points per doubling (default: 1)")
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    """Main entry point"""
    load_dotenv()
    args = build_parser().parse_args(argv)
    _configure_logging(args)

    try:
        return COMMANDS[args.command](args)
    except (ConfigError, TraceError, TimingError) as e:
        logger.error(str(e))
        return EXIT_ERROR
    except (ConstraintError, DomainError, OracleLimitError, UsageError) as e:
        logger.error(str(e))
        return EXIT_VIOLATION
    except OSError as e:
        logger.error(f"I/O error: {str(e)}")
        return EXIT_ERROR
    except Exception as e:
        logger.error(f"Unexpected error in {args.command}: {str(e)}")
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
