"""
Command Line Interface for digitdrift
"""
import argparse
import csv
import io
import json
import logging
import math
import sys
import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Dict, List, Optional, Sequence

from bitcore import l_count
from charfn import eval_charfn, moments_via_jets
from config import ConfigManager
from cylinder import density, solve
from measure import (build_measure, build_measure_float, cusick_c, evaluate, l2_norm_squared,
                     mean, rational_str, support, to_json, total_mass, variance)
from models import (ConsistencyError, CylinderIntegrityError, DomainError, ExperimentConfig,
                    RunManifest)
from oracle import brute_density
from runner import ExperimentRunner, merge_results
from stochastic import MAX_CLT_ORDER, create_experiment, cusick_scan
from variance_formula import variance_bounds_check, variance_closed_form

ROW_HEADER = ["n", "statistic", "value", "target", "deviation", "seed", "sample"]
THETA_POINTS = 64

logger = logging.getLogger("cli")


def setup_logging(verbosity: int = 0):
    """Setup logging configuration based on verbosity level

    Args:
        verbosity: 0 = WARNING+ERROR only, 1 = INFO+, 2 = DEBUG+
    """
    if verbosity >= 2:
        level = logging.DEBUG
    elif verbosity >= 1:
        level = logging.INFO
    else:
        level = logging.WARNING

    # stdout carries the result tables
    logging.basicConfig(
        level=level,
        format='%(asctime)s - %(name)s - %(levelname)s - %(message)s',
        handlers=[
            logging.StreamHandler(sys.stderr)
        ],
        force=True,
    )


@dataclass
class CommandOutput:
    """What a subcommand produced: a JSON document or a CSV table"""
    json_data: Optional[Dict[str, Any]] = None
    header: Optional[List[str]] = None
    rows: List[List[Any]] = field(default_factory=list)
    seed: Optional[int] = None
    metadata: Dict[str, Any] = field(default_factory=dict)
    exit_code: int = 0


def _rational(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"expected a rational NUM/DEN, got {text!r}")


def _exact(value: Fraction, as_float: bool):
    return float(value) if as_float else rational_str(value)


def _cell(value: Any) -> str:
    if isinstance(value, float):
        return format(value, '.17g')
    if isinstance(value, Fraction):
        return rational_str(value)
    return str(value)


def _jsonable(value: Any) -> Any:
    if isinstance(value, Fraction):
        return rational_str(value)
    if isinstance(value, dict):
        return {str(k): _jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_jsonable(v) for v in value]
    return value


def render(output: CommandOutput) -> str:
    if output.json_data is not None:
        return json.dumps(_jsonable(output.json_data), indent=2) + "\n"
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(output.header)
    for row in output.rows:
        writer.writerow([_cell(value) for value in row])
    return buffer.getvalue()


# --- subcommands ---

def cmd_measure(args, config: ConfigManager) -> CommandOutput:
    """Exact mu_a on a window of d"""
    if args.a < 0:
        raise DomainError(f"a must be non-negative, got {args.a}")
    as_float = args.float
    if as_float:
        rep = build_measure_float(args.a)
        start, top = rep.support()
        lo, hi = args.window or (start - 4, top)
        values = rep.evaluate_many(list(range(lo, hi + 1)))
        return CommandOutput(json_data={
            'a': args.a,
            'tail_start': start,
            'window': [lo, hi],
            'values': {str(d): float(v) for d, v in zip(range(lo, hi + 1), values)},
            'total_mass': rep.total_mass(),
            'mean': rep.mean(),
            'variance': rep.variance(),
            'l2_norm_squared': rep.l2_norm_squared(),
            'cusick_c': rep.cusick_c(),
        })

    rep = build_measure(args.a)
    start, top = support(rep)
    lo, hi = args.window or (start - 4, top)
    return CommandOutput(json_data={
        'a': args.a,
        'tail_start': start,
        'window': [lo, hi],
        'values': {str(d): evaluate(rep, d) for d in range(lo, hi + 1)},
        'total_mass': total_mass(rep),
        'mean': mean(rep),
        'variance': variance(rep),
        'l2_norm_squared': l2_norm_squared(rep),
        'cusick_c': cusick_c(rep),
        'representation': to_json(rep),
    })


def cmd_variance(args, config: ConfigManager) -> CommandOutput:
    """Closed-form variance of mu_a, or the generic-variance experiment"""
    if args.n is not None:
        experiment = create_experiment("variance", lag_cap=config.lag_cap)
        return _run_experiment(experiment, config, config.experiment_config(args.n), args.seeds)

    breakdown = variance_closed_form(args.a)
    data: Dict[str, Any] = {'a': args.a, 'total': _exact(breakdown.total, args.float)}
    if args.breakdown:
        data.update({
            'leading': _exact(breakdown.leading, args.float),
            'tail': _exact(breakdown.tail, args.float),
            'correlation_sum': _exact(breakdown.correlation_sum, args.float),
            'boundary_sum': _exact(breakdown.boundary_sum, args.float),
        })
        bounds = variance_bounds_check(args.a)
        data['bounds'] = {'l': l_count(args.a), 'lower': bounds.lower,
                          'upper': bounds.upper, 'ok': bounds.ok}
    return CommandOutput(json_data=data)


def cmd_moments(args, config: ConfigManager) -> CommandOutput:
    """m_0 .. m_K of mu_a through the jet chain"""
    K = args.max_order if args.max_order is not None else config.jet_order
    moments = moments_via_jets(args.a, K)
    return CommandOutput(header=["k", "m_k"],
                         rows=[[k, _exact(m, args.float)] for k, m in enumerate(moments)],
                         metadata={'jet_order': K})


def cmd_charfn(args, config: ConfigManager) -> CommandOutput:
    """hat mu_a on a theta grid (default: 64 points on [0, 2 pi))"""
    if args.grid:
        lo, hi, steps = args.grid
        steps = int(steps)
        thetas = [lo + (hi - lo) * i / (steps - 1) for i in range(steps)]
    else:
        thetas = [2 * math.pi * i / THETA_POINTS for i in range(THETA_POINTS)]
    values = eval_charfn(args.a, thetas)
    return CommandOutput(header=["theta", "re", "im"],
                         rows=[[float(t), float(v.real), float(v.imag)] for t, v in zip(thetas, values)])


def cmd_cylinders(args, config: ConfigManager) -> CommandOutput:
    """Suffix words of E_{a,d} and their density"""
    ws = solve(args.a, args.d)
    dens = density(ws)
    mu = evaluate(build_measure(args.a), args.d)
    return CommandOutput(json_data={
        'a': args.a,
        'd': args.d,
        'words': ws.sorted_words(),
        'density': _exact(dens, args.float),
        'mu': _exact(mu, args.float),
        'consistent': dens == mu,
    })


def cmd_oracle(args, config: ConfigManager) -> CommandOutput:
    """Brute-force density over n < 2^M against mu_a(d)"""
    brute = brute_density(args.a, args.d, args.M, workers=config.threads)
    mu = evaluate(build_measure(args.a), args.d)
    return CommandOutput(json_data={
        'a': args.a,
        'd': args.d,
        'M': args.M,
        'brute_density': _exact(brute, args.float),
        'mu': _exact(mu, args.float),
        'error': float(abs(brute - mu)),
    })


def cmd_corr(args, config: ConfigManager) -> CommandOutput:
    return _run_experiment(create_experiment("corr"), config, config.experiment_config(args.n), args.seeds)


def cmd_clt(args, config: ConfigManager) -> CommandOutput:
    base = config.experiment_config(args.n)
    if base.max_moment_order > MAX_CLT_ORDER:
        raise DomainError(f"--max-order must be at most {MAX_CLT_ORDER}, got {base.max_moment_order}")
    if base.p != Fraction(1, 2):
        logger.warning(f"clt runs with balanced bits; ignoring p={base.p}")
        base = ExperimentConfig(seed=base.seed, n=base.n, samples=base.samples,
                                max_moment_order=base.max_moment_order, lag_cap=base.lag_cap)
    return _run_experiment(create_experiment("clt"), config, base, args.seeds)


def cmd_cdf(args, config: ConfigManager) -> CommandOutput:
    experiment = create_experiment("cdf", grid=config.grid)
    return _run_experiment(experiment, config, config.experiment_config(args.n), args.seeds)


def cmd_cusick(args, config: ConfigManager) -> CommandOutput:
    """Exhaustive minimum of c_a, or c_a for seeded random a"""
    if args.n is not None:
        experiment = create_experiment("cusick")
        return _run_experiment(experiment, config, config.experiment_config(args.n), args.seeds)
    min_c, argmin = cusick_scan(args.max_a)
    return CommandOutput(json_data={
        'max_a': args.max_a,
        'min_c': _exact(min_c, args.float),
        'argmin': argmin,
        'at_least_half': min_c >= Fraction(1, 2),
    })


def cmd_config(args, config: ConfigManager) -> CommandOutput:
    """Manage configuration"""
    if args.validate:
        issues = config.validate_config()
        if issues:
            print("Configuration validation failed:", file=sys.stderr)
            for issue in issues:
                print(f"  - {issue}", file=sys.stderr)
            return CommandOutput(json_data={'valid': False, 'issues': issues}, exit_code=2)
        return CommandOutput(json_data={'valid': True, 'issues': []})
    return CommandOutput(json_data={'config_file': config.config_file, 'settings': config.settings})


def _run_experiment(experiment, config: ConfigManager, base: ExperimentConfig,
                    seed_count: int) -> CommandOutput:
    if seed_count < 1:
        raise DomainError(f"--seeds must be positive, got {seed_count}")
    if base.n < 1:
        raise DomainError(f"--n must be positive, got {base.n}")
    seeds = [base.seed + i for i in range(seed_count)]
    outcomes = ExperimentRunner(config.threads).run(experiment, base, seeds)
    merged = merge_results(outcomes, experiment.name)
    merged.metadata['config'] = base.to_dict()
    merged.metadata['parameters'] = experiment.parameters()
    return CommandOutput(
        header=ROW_HEADER,
        rows=[[r.n, r.statistic, r.value, r.target, r.deviation, r.seed, r.sample] for r in merged.rows],
        seed=base.seed,
        metadata=merged.metadata,
        exit_code=0 if all(outcome.success for outcome in outcomes) else 1,
    )


def write_outputs(output: CommandOutput, args, config: ConfigManager, wall_clock: float) -> None:
    """Result file plus PATH.manifest.json, or stdout when --out is absent"""
    text = render(output)
    if not args.out:
        sys.stdout.write(text)
        return
    with open(args.out, 'w', encoding='utf-8', newline='') as f:
        f.write(text)
    manifest_path = f"{args.out}.manifest.json"
    parameters = {k: v for k, v in vars(args).items() if k != 'handler'}
    manifest = RunManifest(
        subcommand=args.command,
        parameters=_jsonable(parameters),
        seed=output.seed,
        output_paths=[args.out, manifest_path],
        wall_clock=wall_clock,
        settings=_jsonable(dict(config.settings, threads=config.threads)),
    )
    data = manifest.to_dict()
    if output.metadata:
        data['metadata'] = _jsonable(output.metadata)
    with open(manifest_path, 'w', encoding='utf-8') as f:
        json.dump(data, f, indent=2)
    logger.info(f"Results saved to {args.out}")


# --- parser ---

def _add_seed_args(parser: argparse.ArgumentParser):
    parser.add_argument('--seed', type=int, default=None, help='Generator seed (default: config seed)')
    parser.add_argument('--seeds', type=int, default=1, help='Number of consecutive seeds to run (default: 1)')
    parser.add_argument('--samples', type=int, default=None, help='Samples per seed (default: config samples)')


def build_parser() -> argparse.ArgumentParser:
    # Use two parent parsers so options work before or after the subcommand
    common_main = argparse.ArgumentParser(add_help=False)
    common_main.add_argument('--config', '-c', default='digitdrift.json',
                             help='Configuration file path (default: digitdrift.json)')
    common_main.add_argument('--verbose', '-v', action='count', default=0,
                             help='Increase verbosity: -v for INFO, -vv for DEBUG (default: WARNING+ERROR only)')
    common_main.add_argument('--out', default=None,
                             help='Write results to PATH and a manifest to PATH.manifest.json')
    common_main.add_argument('--float', action='store_true', default=False,
                             help='Emit exact values as floats')
    common_main.add_argument('--threads', type=int, default=None,
                             help='Worker count (default: config, then cpu count; capped by DIGITDRIFT_THREADS)')

    common_sub = argparse.ArgumentParser(add_help=False)
    common_sub.add_argument('--config', '-c', default=argparse.SUPPRESS,
                            help='Configuration file path (default: digitdrift.json)')
    common_sub.add_argument('--verbose', '-v', action='count', default=argparse.SUPPRESS,
                            help='Increase verbosity: -v for INFO, -vv for DEBUG (default: WARNING+ERROR only)')
    common_sub.add_argument('--out', default=argparse.SUPPRESS,
                            help='Write results to PATH and a manifest to PATH.manifest.json')
    common_sub.add_argument('--float', action='store_true', default=argparse.SUPPRESS,
                            help='Emit exact values as floats')
    common_sub.add_argument('--threads', type=int, default=argparse.SUPPRESS,
                            help='Worker count (default: config, then cpu count; capped by DIGITDRIFT_THREADS)')

    parser = argparse.ArgumentParser(
        prog="digitdrift",
        description="Exact and experimental study of s2(n + a) - s2(n)",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog="""
Examples:
  # Exact measure mu_3 on d in [-4, 4]
  python main.py measure --a 3 --window -4 4

  # Closed-form variance with its four terms
  python main.py variance --a 3 --breakdown

  # Renormalized moments for five seeds, saved with a manifest
  python main.py clt --n 2048 --seed 7 --seeds 5 --max-order 6 --out clt.csv

  # Brute-force referee with INFO logging
  python main.py -v oracle --a 3 --d 2 --M 24
        """,
        parents=[common_main],
    )

    subparsers = parser.add_subparsers(dest='command', help='Available commands')

    p = subparsers.add_parser('measure', help='Exact mu_a on a window', parents=[common_sub])
    p.add_argument('--a', type=int, required=True)
    p.add_argument('--window', type=int, nargs=2, metavar=('LO', 'HI'), default=None)
    p.set_defaults(handler=cmd_measure)

    p = subparsers.add_parser('variance', help='Closed-form or generic variance', parents=[common_sub])
    target = p.add_mutually_exclusive_group(required=True)
    target.add_argument('--a', type=int)
    target.add_argument('--n', type=int, help='Bit length for the seeded generic-variance experiment')
    p.add_argument('--breakdown', action='store_true', help='Print the four closed-form terms')
    p.add_argument('--p', type=_rational, default=None, help='Bit bias NUM/DEN (default: config p)')
    _add_seed_args(p)
    p.set_defaults(handler=cmd_variance)

    p = subparsers.add_parser('moments', help='Exact moments from jets', parents=[common_sub])
    p.add_argument('--a', type=int, required=True)
    p.add_argument('--max-order', type=int, default=None, help='Jet order (default: config jet_order)')
    p.set_defaults(handler=cmd_moments)

    p = subparsers.add_parser('charfn', help='Characteristic function on a theta grid', parents=[common_sub])
    p.add_argument('--a', type=int, required=True)
    p.add_argument('--grid', type=float, nargs=3, metavar=('LO', 'HI', 'STEPS'), default=None)
    p.set_defaults(handler=cmd_charfn)

    p = subparsers.add_parser('cylinders', help='Suffix words partitioning E_{a,d}', parents=[common_sub])
    p.add_argument('--a', type=int, required=True)
    p.add_argument('--d', type=int, required=True)
    p.set_defaults(handler=cmd_cylinders)

    p = subparsers.add_parser('oracle', help='Brute-force density over n < 2^M', parents=[common_sub])
    p.add_argument('--a', type=int, required=True)
    p.add_argument('--d', type=int, required=True)
    p.add_argument('--M', type=int, required=True)
    p.set_defaults(handler=cmd_oracle)

    p = subparsers.add_parser('corr', help='Correlation C_{2,n} of seeded sign sequences', parents=[common_sub])
    p.add_argument('--n', type=int, required=True)
    p.add_argument('--p', type=_rational, default=None, help='Bit bias NUM/DEN (default: config p)')
    _add_seed_args(p)
    p.set_defaults(handler=cmd_corr)

    p = subparsers.add_parser('clt', help='Renormalized moments against the normal law', parents=[common_sub])
    p.add_argument('--n', type=int, required=True)
    p.add_argument('--max-order', type=int, default=None, help='Highest moment order (default: config max_order)')
    _add_seed_args(p)
    p.set_defaults(handler=cmd_clt)

    p = subparsers.add_parser('cdf', help='Rescaled CDF against Phi', parents=[common_sub])
    p.add_argument('--n', type=int, required=True)
    p.add_argument('--p', type=_rational, default=None, help='Bit bias NUM/DEN (default: config p)')
    p.add_argument('--grid', type=float, nargs=3, metavar=('LO', 'HI', 'STEPS'), default=None)
    _add_seed_args(p)
    p.set_defaults(handler=cmd_cdf)

    p = subparsers.add_parser('cusick', help='Minimum of c_a or c_a for random a', parents=[common_sub])
    target = p.add_mutually_exclusive_group(required=True)
    target.add_argument('--max-a', type=int)
    target.add_argument('--n', type=int, help='Bit length of seeded random a')
    p.add_argument('--p', type=_rational, default=None, help='Bit bias NUM/DEN for random a (default: config p)')
    _add_seed_args(p)
    p.set_defaults(handler=cmd_cusick)

    p = subparsers.add_parser('config', help='Manage configuration', parents=[common_sub])
    p.add_argument('--validate', action='store_true', help='Validate configuration')
    p.set_defaults(handler=cmd_config)

    return parser


def _overrides(args) -> Dict[str, Any]:
    grid = getattr(args, 'grid', None)
    return {
        'seed': getattr(args, 'seed', None),
        'p': getattr(args, 'p', None),
        'samples': getattr(args, 'samples', None),
        'max_order': getattr(args, 'max_order', None),
        'grid': [grid[0], grid[1], int(grid[2])] if grid else None,
        'threads': getattr(args, 'threads', None),
    }


def run(argv: Optional[Sequence[str]] = None) -> int:
    """Parse argv, execute one subcommand and return the exit code"""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        # argparse already wrote usage to stderr
        return e.code if isinstance(e.code, int) else 2

    setup_logging(args.verbose)

    if not args.command:
        parser.print_help(sys.stderr)
        return 2

    try:
        config = ConfigManager(args.config)
    except ValueError as e:
        print(f"Error: {e}", file=sys.stderr)
        return 2
    config.apply_overrides(**_overrides(args))

    if args.command != 'config':
        issues = config.validate_config()
        if issues:
            print("Configuration validation failed:", file=sys.stderr)
            for issue in issues:
                print(f"  - {issue}", file=sys.stderr)
            return 2

    start_time = time.time()
    try:
        output = args.handler(args, config)
    except DomainError as e:
        print(f"Error: {e}", file=sys.stderr)
        return 2
    except (CylinderIntegrityError, ConsistencyError) as e:
        print(f"Integrity failure: {e}", file=sys.stderr)
        return 1

    write_outputs(output, args, config, time.time() - start_time)
    return output.exit_code


def main():
    """Main CLI entry point"""
    return run(sys.argv[1:])


if __name__ == '__main__':
    sys.exit(main())
