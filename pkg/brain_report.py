#!/usr/bin/env python3
"""
Best Rational Approximation Report Tool
Scans, tables, continued fraction expansions, the verification matrix and
timing benchmarks for an irrational constant, driven by brain_config.yaml
defaults and command-line overrides.
"""

import argparse
import logging
import os
import sys
import time
from dataclasses import dataclass
from datetime import datetime
from fractions import Fraction
from typing import Any, Dict, List, Optional, Sequence, Tuple

import yaml

from alpha_oracle import AlphaSpec, ApproximationError, PrecisionExhausted, parse_alpha
from brain_scan import BrainKind, brain_sequence, table_mode
from brain_verify import GoldenFileError, run_verification
from cf_engine import CFAlgorithm, ExpansionError, nicf_expand, rcf_expand, rcf_up_to
from table_format import FORMATS, STYLES, emit_rows, record_cells

EXIT_OK = 0
EXIT_VERIFY_FAILED = 1
EXIT_USAGE = 2
EXIT_PRECISION = 3
EXIT_INTERRUPTED = 130

SCRIPT_DIR = os.path.dirname(os.path.abspath(__file__))
DEFAULT_CONFIG_FILE = 'brain_config.yaml'

DEFAULT_SETTINGS: Dict[str, Any] = {
    'MAX_Q': 1000,
    'DIGITS': 9,
    'STYLE': 'pretty',
    'FORMAT': 'tsv',
    'THREADS': 1,
    'DIST_WIDTH_EXPONENT': 12,
    'LOG_DIR': './logs',
    'GOLDEN_DIR': os.path.join(SCRIPT_DIR, 'golden'),
}
INT_SETTINGS = ('MAX_Q', 'DIGITS', 'THREADS', 'DIST_WIDTH_EXPONENT')
PATH_SETTINGS = ('LOG_DIR', 'GOLDEN_DIR')

DEFAULT_TERMS = 10
DEFAULT_TOP = 20
DIGITS_RANGE = (3, 30)

SCAN_HEADER = ('k', 'q', 'p', 'sign', 'key')
TABLE_HEADER = ('q', 'p', 'sign', 'key')
BENCH_HEADER = ('N', 't_scan', 't_cf', 'ratio')


class ConfigError(ApproximationError):
    """Invalid configuration file or command-line combination."""
    pass


def setup_logging(subcommand: str, log_dir: Optional[str]) -> logging.Logger:
    """
    Log to logs/brain_<subcommand>.log with timestamps, and warnings to
    stderr. stdout is reserved for data rows.
    """
    logger = logging.getLogger()
    logger.setLevel(logging.INFO)

    # Remove any existing handlers
    for handler in logger.handlers[:]:
        logger.removeHandler(handler)
        handler.close()

    if log_dir:
        os.makedirs(log_dir, exist_ok=True)
        formatter = logging.Formatter(
            fmt='%(asctime)s - %(levelname)s - %(message)s',
            datefmt='%Y-%m-%d %H:%M:%S'
        )
        file_handler = logging.FileHandler(os.path.join(log_dir, f'brain_{subcommand}.log'),
                                           mode='a', encoding='utf-8')
        file_handler.setLevel(logging.INFO)
        file_handler.setFormatter(formatter)
        logger.addHandler(file_handler)

    console_handler = logging.StreamHandler(sys.stderr)
    console_handler.setLevel(logging.WARNING)
    console_handler.setFormatter(logging.Formatter('%(message)s'))
    logger.addHandler(console_handler)

    return logger


def log_print(message, end='\n', flush=False):
    """Print message to stdout and the log file."""
    print(message, end=end, flush=flush)

    if message.strip():
        logging.info(message.rstrip())


def log_session_start(subcommand: str):
    session_start = datetime.now().strftime('%Y-%m-%d %H:%M:%S')
    separator = "=" * 80

    logging.info(f"\n{separator}")
    logging.info(f"NEW SESSION STARTED: {session_start}")
    logging.info(f"Script: brain_report.py {subcommand}")
    logging.info(f"Working Directory: {os.getcwd()}")
    logging.info(f"{separator}")


def load_yaml_data(file_path: str) -> Dict:
    if not os.path.exists(file_path):
        raise ConfigError(f"File not found: {file_path}")

    try:
        with open(file_path, 'r') as f:
            data = yaml.safe_load(f)
    except yaml.YAMLError as e:
        raise ConfigError(f"Error parsing {file_path}: {e}")
    except OSError as e:
        raise ConfigError(f"Error reading {file_path}: {e}")

    if not isinstance(data, dict):
        raise ConfigError(f"{file_path} does not contain a YAML mapping")
    return data


def extract_settings(yaml_data: Dict, file_path: str) -> Dict[str, Any]:
    """
    Validate the 'Settings' section and merge it over the defaults.
    Relative GOLDEN_DIR paths are taken relative to the config file.
    """
    if 'Settings' not in yaml_data:
        raise ConfigError(f"No 'Settings' section found in {file_path}")

    section = yaml_data['Settings']
    if not isinstance(section, dict):
        raise ConfigError(f"'Settings' section in {file_path} is not a mapping")

    settings = dict(DEFAULT_SETTINGS)
    for key, value in section.items():
        if key not in DEFAULT_SETTINGS:
            raise ConfigError(f"Unknown setting {key} in {file_path}")
        if key in INT_SETTINGS and (isinstance(value, bool) or not isinstance(value, int)):
            raise ConfigError(f"Setting {key} in {file_path} must be an integer, got {value!r}")
        if key in PATH_SETTINGS and value is not None and not isinstance(value, str):
            raise ConfigError(f"Setting {key} in {file_path} must be a path or null, got {value!r}")
        if key in ('STYLE', 'FORMAT') and not isinstance(value, str):
            raise ConfigError(f"Setting {key} in {file_path} must be a string, got {value!r}")
        settings[key] = value

    golden_dir = section.get('GOLDEN_DIR')
    if golden_dir and not os.path.isabs(golden_dir):
        settings['GOLDEN_DIR'] = os.path.join(os.path.dirname(os.path.abspath(file_path)), golden_dir)
    return settings


def load_settings(config_path: Optional[str]) -> Dict[str, Any]:
    """Settings from --config, else ./brain_config.yaml when present, else built-in defaults."""
    if config_path is None:
        if not os.path.exists(DEFAULT_CONFIG_FILE):
            return dict(DEFAULT_SETTINGS)
        config_path = DEFAULT_CONFIG_FILE
    return extract_settings(load_yaml_data(config_path), config_path)


@dataclass(frozen=True)
class RunConfig:
    command: str
    alphas: Tuple[AlphaSpec, ...]
    limits: Tuple[int, ...]
    kind: BrainKind
    algorithm: CFAlgorithm
    terms: int
    top_k: Optional[int]
    below: Optional[Fraction]
    fmt: str
    digits: int
    style: str
    threads: int
    dist_width: Fraction
    log_dir: Optional[str]
    golden_dir: Optional[str]

    def __post_init__(self):
        if not self.alphas:
            raise ConfigError("At least one --alpha is required")
        if any(n < 1 for n in self.limits) or not self.limits:
            raise ConfigError(f"--max-q values must be >= 1, got {list(self.limits)}")
        if not DIGITS_RANGE[0] <= self.digits <= DIGITS_RANGE[1]:
            raise ConfigError(f"--digits must be in {DIGITS_RANGE[0]}..{DIGITS_RANGE[1]}, got {self.digits}")
        if self.threads < 1:
            raise ConfigError(f"--threads must be >= 1, got {self.threads}")
        if self.terms < 1:
            raise ConfigError(f"--terms must be >= 1, got {self.terms}")
        if self.top_k is not None and self.top_k < 1:
            raise ConfigError(f"--top must be >= 1, got {self.top_k}")
        if self.below is not None and self.below <= 0:
            raise ConfigError(f"--below must be positive, got {self.below}")
        if self.fmt not in FORMATS:
            raise ConfigError(f"Unknown format '{self.fmt}' (expected one of {', '.join(FORMATS)})")
        if self.style not in STYLES:
            raise ConfigError(f"Unknown style '{self.style}' (expected one of {', '.join(STYLES)})")
        if self.dist_width <= 0:
            raise ConfigError(f"Distance width must be positive, got {self.dist_width}")

    @property
    def alpha(self) -> AlphaSpec:
        return self.alphas[0]

    @property
    def max_q(self) -> int:
        return self.limits[-1]


def parse_arguments(argv: Optional[Sequence[str]] = None) -> argparse.Namespace:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument('--config', help=f'YAML settings file (default: ./{DEFAULT_CONFIG_FILE} if present)')
    common.add_argument('--alpha', action='append',
                        help='pi | e | phi | sqrt:<d> | quad:<a>,<b>,<c>,<d> | dec:<digits>[@<bound>], '
                             'optionally prefixed with - (repeatable for verify)')
    common.add_argument('--max-q', dest='max_q', type=int, action='append',
                        help='Denominator bound N (repeatable for bench)')
    common.add_argument('--kind', help='Approximation kind: I, II or III')
    common.add_argument('--algorithm', help='Continued fraction algorithm: rcf or nicf')
    common.add_argument('--terms', type=int, help=f'Partial quotients to print (default: {DEFAULT_TERMS})')
    common.add_argument('--top', type=int, help='Keep the first k table rows')
    common.add_argument('--below', help='Keep table rows whose key is below this rational')
    common.add_argument('--format', dest='fmt', choices=FORMATS, help='Row format')
    common.add_argument('--digits', type=int, help='Significant digits of rendered keys')
    common.add_argument('--style', choices=STYLES, help='Decimal rendering style')
    common.add_argument('--threads', type=int, help='Worker threads for the certified scan')
    common.add_argument('--no-log-file', dest='no_log_file', action='store_true',
                        help='Do not write logs/brain_<subcommand>.log')

    parser = argparse.ArgumentParser(
        description='Best Rational Approximation Report Tool',
        epilog='''
Examples:
  python brain_report.py scan --alpha pi --kind II --max-q 1000
  python brain_report.py table --alpha phi --kind III --style paper
  python brain_report.py cf --alpha pi --algorithm nicf --terms 6
  python brain_report.py verify --alpha pi --alpha phi
  python brain_report.py bench --alpha pi --max-q 1000 --max-q 10000
        ''',
        formatter_class=argparse.RawDescriptionHelpFormatter
    )
    subparsers = parser.add_subparsers(dest='command', required=True)
    subparsers.add_parser('scan', parents=[common], help='Streaming best approximations up to N')
    subparsers.add_parser('table', parents=[common], help='Full scan sorted by the kind key')
    subparsers.add_parser('cf', parents=[common], help='Partial quotients and convergents')
    subparsers.add_parser('verify', parents=[common], help='Run the verification matrix')
    subparsers.add_parser('bench', parents=[common], help='Time the scan against the expansion')

    return parser.parse_args(argv)


def _parse_below(text: Optional[str]) -> Optional[Fraction]:
    if text is None:
        return None
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise ConfigError(f"--below must be a rational number, got '{text}'")


def build_run_config(args: argparse.Namespace, settings: Dict[str, Any]) -> RunConfig:
    """Merge command-line flags over the settings and validate the result."""
    command = args.command

    alpha_texts = args.alpha or (['pi', 'phi'] if command == 'verify' else ['pi'])
    if len(alpha_texts) > 1 and command != 'verify':
        raise ConfigError(f"{command} takes a single --alpha, got {len(alpha_texts)}")
    alphas = tuple(parse_alpha(text) for text in alpha_texts)

    limits = tuple(args.max_q or [settings['MAX_Q']])
    if command == 'bench':
        if any(a >= b for a, b in zip(limits, limits[1:])):
            raise ConfigError(f"bench --max-q values must be ascending, got {list(limits)}")
    elif len(limits) > 1:
        raise ConfigError(f"{command} takes a single --max-q, got {len(limits)}")

    kind = BrainKind.parse(args.kind or 'I')
    algorithm = CFAlgorithm.parse(args.algorithm or 'rcf')

    top_k = args.top
    below = _parse_below(args.below)
    if command == 'table' and top_k is None and below is None:
        if kind is BrainKind.III:
            below = Fraction(1)
        else:
            top_k = DEFAULT_TOP

    exponent = settings['DIST_WIDTH_EXPONENT']
    if exponent < 1:
        raise ConfigError(f"DIST_WIDTH_EXPONENT must be >= 1, got {exponent}")

    return RunConfig(
        command=command,
        alphas=alphas,
        limits=limits,
        kind=kind,
        algorithm=algorithm,
        terms=args.terms if args.terms is not None else DEFAULT_TERMS,
        top_k=top_k,
        below=below,
        fmt=args.fmt or settings['FORMAT'],
        digits=args.digits if args.digits is not None else settings['DIGITS'],
        style=args.style or settings['STYLE'],
        threads=args.threads if args.threads is not None else settings['THREADS'],
        dist_width=Fraction(1, 10 ** exponent),
        log_dir=None if args.no_log_file else settings['LOG_DIR'],
        golden_dir=settings['GOLDEN_DIR'],
    )


def cmd_scan(config: RunConfig) -> int:
    alpha = config.alpha
    sequence = brain_sequence(alpha, config.max_q, config.kind,
                              dist_width=config.dist_width, threads=config.threads)
    rows = [[str(item.k)] + record_cells(alpha, item.record, config.kind, config.digits, config.style)
            for item in sequence.items]
    sys.stdout.write(emit_rows(SCAN_HEADER, rows, config.fmt))
    logging.info(f"scan {alpha.describe()} kind {config.kind.value} N={config.max_q}: "
                 f"{len(rows)} approximations, signs {sequence.sign_string()}")
    return EXIT_OK


def cmd_table(config: RunConfig) -> int:
    alpha = config.alpha
    records = table_mode(alpha, config.max_q, config.kind, top_k=config.top_k, below=config.below,
                         dist_width=config.dist_width, threads=config.threads)
    rows = [record_cells(alpha, record, config.kind, config.digits, config.style) for record in records]
    sys.stdout.write(emit_rows(TABLE_HEADER, rows, config.fmt))
    logging.info(f"table {alpha.describe()} kind {config.kind.value} N={config.max_q}: {len(rows)} rows")
    return EXIT_OK


def cmd_cf(config: RunConfig) -> int:
    expand = rcf_expand if config.algorithm is CFAlgorithm.RCF else nicf_expand
    expansion = expand(config.alpha, config.terms)
    lines = [f"quotients: {expansion.render_quotients()}"]
    lines += [str(convergent) for convergent in expansion.convergents]
    sys.stdout.write('\n'.join(lines) + '\n')
    logging.info(f"cf {config.alpha.describe()} {config.algorithm.value}: {expansion.render_quotients()}")
    return EXIT_OK


def cmd_verify(config: RunConfig) -> int:
    names = ', '.join(alpha.describe() for alpha in config.alphas)
    logging.info(f"Verifying {names} with N={config.max_q}, threads={config.threads}")

    results = run_verification(config.alphas, config.max_q, config.golden_dir,
                               dist_width=config.dist_width, threads=config.threads)
    for result in results:
        log_print(result.render())

    failed = [result for result in results if not result.passed]
    log_print(f"{len(results) - len(failed)}/{len(results)} checks passed")
    return EXIT_VERIFY_FAILED if failed else EXIT_OK


def _timed(func, *args, **kwargs) -> float:
    start = time.perf_counter()
    func(*args, **kwargs)
    return time.perf_counter() - start


def cmd_bench(config: RunConfig) -> int:
    """
    Wall time of the kind-II scan against an RCF expansion reaching the same
    denominator. Growth is reported, not asserted.
    """
    alpha = config.alpha
    timings: List[Tuple[int, float, float]] = []
    for N in config.limits:
        t_scan = _timed(brain_sequence, alpha, N, BrainKind.II,
                        dist_width=config.dist_width, threads=config.threads)
        t_cf = _timed(rcf_up_to, alpha, N)
        timings.append((N, t_scan, t_cf))

    rows = [[str(N), f"{t_scan:.6f}", f"{t_cf:.6f}", f"{t_scan / t_cf:.1f}" if t_cf > 0 else 'inf']
            for N, t_scan, t_cf in timings]
    sys.stdout.write(emit_rows(BENCH_HEADER, rows, config.fmt))

    for (n1, scan1, cf1), (n2, scan2, cf2) in zip(timings, timings[1:]):
        if scan1 <= 0 or cf1 <= 0:
            continue
        logging.info(f"N {n1} -> {n2}: scan x{scan2 / scan1:.1f}, cf x{cf2 / cf1:.1f}")
        if scan2 / scan1 < n2 / n1 / 2:
            logging.warning(f"Scan time grew only x{scan2 / scan1:.1f} from N={n1} to N={n2}")
    return EXIT_OK


COMMANDS = {
    'scan': cmd_scan,
    'table': cmd_table,
    'cf': cmd_cf,
    'verify': cmd_verify,
    'bench': cmd_bench,
}


def main(argv: Optional[Sequence[str]] = None) -> int:
    """Main program flow; returns the process exit code."""
    args = parse_arguments(argv)

    try:
        config = build_run_config(args, load_settings(args.config))
    except ApproximationError as e:
        print(f"Configuration Error: {e}", file=sys.stderr)
        return EXIT_USAGE

    setup_logging(config.command, config.log_dir)
    log_session_start(config.command)

    try:
        return COMMANDS[config.command](config)
    except KeyboardInterrupt:
        logging.error("\nOperation cancelled by user.")
        return EXIT_INTERRUPTED
    except PrecisionExhausted as e:
        logging.error(f"Precision Error: {e}")
        return EXIT_PRECISION
    except (ConfigError, GoldenFileError, ExpansionError) as e:
        logging.error(f"Error: {e}")
        return EXIT_USAGE
    except ApproximationError as e:
        logging.error(f"Error: {e}")
        return EXIT_VERIFY_FAILED


if __name__ == "__main__":
    sys.exit(main())
