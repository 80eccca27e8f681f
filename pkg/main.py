# -*- coding: utf-8 -*-
"""
curvetop computes certified graphs isotopic to real plane curves
f(x, y) = 0 and to real space curves P1 = P2 = 0.
This is the command line entry point. It reads the polynomials, runs the
plane or space pipeline, prints a report and writes the JSON / OBJ
artifacts.
"""

__author__ = 'Oldmacintosh'
__version__ = 'v0.1.0'
__date__ = 'October 2026'
__PROJECT__ = 'curvetop'
__DEBUG__ = False

# These constants are used as the default values for the config.ini
SHEAR_BUDGET: int = 32
REFINE_WIDTH: str = '1/1073741824'
# Worker processes lifting fibers under --parallel, 0 means one per CPU
MAX_PROCESSES: int = 0
LIMIT_REFINEMENTS: int = 60
OUTPUT_FORMAT: str = 'json'

import os  # noqa PEP 8: E402
import sys  # noqa PEP 8: E402
import time  # noqa PEP 8: E402
import logging  # noqa PEP 8: E402
import argparse  # noqa PEP 8: E402
import configparser  # noqa PEP 8: E402
from datetime import datetime, timezone  # noqa PEP 8: E402
from tzlocal import get_localzone  # noqa PEP 8: E402
import pytz  # noqa PEP 8: E402
from sympy import Rational  # noqa PEP 8: E402
import curvetop  # noqa PEP 8: E402

# Define all the necessary directories
main_dir: str = os.environ.get('CURVETOP_HOME') or os.path.join(os.path.expanduser('~'),
                                                                '.curvetop')
logging_dir: str = os.path.join(main_dir, 'logs')
data_dir: str = os.path.join(os.path.dirname(os.path.abspath(__file__)), 'data')
corpus_path: str = os.path.join(data_dir, 'table_curves.ini')

LOG_LEVELS: tuple[str, ...] = ('DEBUG', 'INFO', 'WARNING', 'ERROR')
TIME_FORMAT: str = '%d-%m-%Y %H:%M:%S'

Logger = logging.getLogger(__name__)


def convert_utc_to_local(utc_time_str: str, local_timezone_str: str = str(get_localzone())) -> str:
    """
    Function to convert UTC time to local time.
    Time format: '%d-%m-%Y %H:%M:%S'
    :param utc_time_str: The UTC time string
    :param local_timezone_str: The local timezone to convert to
    :return: The local time string
    """
    utc_time = datetime.strptime(utc_time_str, TIME_FORMAT)
    local_timezone = pytz.timezone(local_timezone_str)
    local_time = pytz.utc.localize(utc_time).astimezone(local_timezone)
    return local_time.strftime(TIME_FORMAT)


def read_polynomial(text: str) -> curvetop.MultiPoly:
    """
    Parse a polynomial given on the command line.
    :param text: The polynomial, or @path of a file holding it
    :return: The parsed polynomial
    """
    if text.startswith('@'):
        with open(text[1:], encoding='utf-8') as file:
            text = file.read()
    return curvetop.parse_polynomial(text)


def load_corpus(path: str = corpus_path) -> list[tuple[str, str, str]]:
    """
    The stored experiment pairs, in file order.
    :param path: The corpus file
    :return: (name, P1, P2) triples
    """
    parser = configparser.ConfigParser()
    if not parser.read(path, encoding='utf-8'):
        raise FileNotFoundError(f'corpus file {path} not found')
    return [(parser.get(section, 'name', fallback=section), parser.get(section, 'p1'),
             parser.get(section, 'p2')) for section in parser.sections()]


def recorded_counts(path: str = corpus_path) -> dict[int, tuple[int, int]]:
    """
    Component count and cycle rank recorded for the corpus pairs that have them.
    :param path: The corpus file
    :return: 1-based index to (components, cycle rank)
    """
    parser = configparser.ConfigParser()
    if not parser.read(path, encoding='utf-8'):
        raise FileNotFoundError(f'corpus file {path} not found')
    return {n: (parser.getint(section, 'components'), parser.getint(section, 'cycle_rank'))
            for n, section in enumerate(parser.sections(), 1)
            if parser.has_option(section, 'components')}


def log_level() -> str:
    """Level from CURVETOP_LOG, INFO when unset or invalid."""
    level = os.environ.get('CURVETOP_LOG', 'INFO').upper()
    return level if level in LOG_LEVELS else 'INFO'


def configure_logging() -> None:
    """File log always; a console log only when CURVETOP_LOG or debug asks for it."""
    os.makedirs(logging_dir, exist_ok=True)
    log_name = datetime.now().strftime(f'%H-%M-%S_{__PROJECT__.lower()}_%y-%m-%d.txt')
    handlers = [logging.FileHandler(os.path.join(logging_dir, log_name), encoding='utf-8')]
    if __DEBUG__ or 'CURVETOP_LOG' in os.environ:
        handlers.append(logging.StreamHandler(sys.stderr))
    logging.basicConfig(format='%(asctime)s [%(levelname)s] %(message)s',
                        level='DEBUG' if __DEBUG__ else log_level(), handlers=handlers, force=True)


def report(graph: curvetop.PLSGraph, mode: str, inputs: list[str], started: float) -> str:
    """
    Text report of a run.
    :param graph: The computed graph
    :param mode: plane, space or corpus
    :param inputs: The input polynomials as text
    :param started: ``time.perf_counter()`` at the start of the run
    :return: The report
    """
    stats = curvetop.component_stats(graph)
    finished = convert_utc_to_local(datetime.now(timezone.utc).strftime(TIME_FORMAT))
    lines = [f'{__PROJECT__} {__version__} | {mode}']
    lines += [f'input: {text}' for text in inputs]
    lines.append(f'shears tried: {len(graph.trail)}')
    lines += [f'  {entry}' for entry in graph.trail]
    for name in curvetop.graph.CERTIFICATES:
        if graph.certificates.get(name):
            lines.append(f'{name}: {graph.certificates[name]}')
    if graph.frame:
        lines.append('frame: ' + ', '.join(str(shear) for shear in graph.frame))
    lines.append(f'vertices: {len(graph.vertices)}, edges: {len(graph.edges)}')
    lines.append(f'components: {stats.components}, cycle rank: {stats.cycle_rank}')
    lines.append('degree histogram: ' + ', '.join(f'{degree}: {count}' for degree, count
                                                  in sorted(stats.degree_histogram.items())))
    lines.append(f'finished: {finished} (wall time {time.perf_counter() - started:.2f} s)')
    return '\n'.join(lines)


def check_recorded(graph: curvetop.PLSGraph, components: int, cycle_rank: int) -> str:
    """Compare a corpus run with its recorded counts; a mismatch is logged as a warning."""
    stats = curvetop.component_stats(graph)
    match = (stats.components, stats.cycle_rank) == (components, cycle_rank)
    if not match:
        Logger.warning('main: Counts differ from the record (%d, %d)', components, cycle_rank)
    return (f'recorded: components: {components}, cycle rank: {cycle_rank} '
            f'({"match" if match else "mismatch"})')


def write_artifacts(graph: curvetop.PLSGraph, out: str | None, fmt: str) -> list[str]:
    """
    Write the graph as ``out.json`` and/or ``out.obj``; without ``out`` the
    artifact goes to standard output, JSON for ``both``.
    :return: The files written
    """
    if out is None:
        sys.stdout.write(curvetop.export(graph, 'json' if fmt == 'both' else fmt).decode('utf-8'))
        return []
    written = []
    for kind in (('json', 'obj') if fmt == 'both' else (fmt,)):
        path = f'{out}.{kind}'
        with open(path, 'wb') as file:
            file.write(curvetop.export(graph, kind))
        written.append(path)
        Logger.info('main: Artifact written(%s)', path)
    return written


class CommandLineParser(argparse.ArgumentParser):
    """Usage errors exit with 1, the code of every other input error."""

    def error(self, message: str):
        self.print_usage(sys.stderr)
        self.exit(1, f'{self.prog}: error: {message}\n')


def build_parser() -> CommandLineParser:
    options = argparse.ArgumentParser(add_help=False)
    options.add_argument('--out', help='artifact stem, writes STEM.json and/or STEM.obj')
    options.add_argument('--format', choices=('json', 'obj', 'both'), help='artifact format')
    options.add_argument('--shear-budget', type=int, help='shears tried after the identity')
    options.add_argument('--refine-width',
                         help='width of the approximations, a rational such as 1/1024')
    options.add_argument('--parallel', action='store_true', help='lift fibers in worker processes')

    parser = CommandLineParser(prog=__PROJECT__, description=__doc__.strip().splitlines()[0])
    parser.add_argument('--version', action='version', version=f'{__PROJECT__} {__version__}')
    commands = parser.add_subparsers(dest='command', required=True)
    plane = commands.add_parser('plane', parents=[options], help='topology of f(x, y) = 0')
    plane.add_argument('f', help='polynomial text or @path')
    space = commands.add_parser('space', parents=[options], help='topology of P1 = P2 = 0')
    space.add_argument('p1', help='polynomial text or @path')
    space.add_argument('p2', help='polynomial text or @path')
    check = commands.add_parser('check-generic', parents=[options],
                                help='run the certificates without shearing')
    check.add_argument('f', help='the plane curve, or P1 of a space curve')
    check.add_argument('p2', nargs='?', help='P2 of a space curve')
    corpus = commands.add_parser('corpus', parents=[options], help='run a stored experiment pair')
    corpus.add_argument('n', type=int, help='1-based index in the corpus file')
    return parser


def policy_from(args: argparse.Namespace, settings) -> curvetop.ShearRetryPolicy:
    width = Rational(args.refine_width) if args.refine_width is not None else settings.refine_width
    if width <= 0:
        raise ValueError('the approximation width must be positive')
    processes = (settings.max_processes or os.cpu_count() or 1) if args.parallel else 0
    return curvetop.ShearRetryPolicy(
        budget=args.shear_budget if args.shear_budget is not None else settings.shear_budget,
        refine_width=width,
        processes=processes,
        limit_refinements=settings.limit_refinements)


def check_generic(args: argparse.Namespace) -> int:
    """Certificates on the input as given; 0 when all pass, 2 otherwise."""
    f = read_polynomial(args.f)
    if args.p2 is None:
        f = curvetop.plane.as_plane(f)
        f = curvetop.plane.as_plane(f.squarefree_part()) if not f.is_constant else f
        lead = f.leading_coefficient('y')
        if not lead.is_constant:
            reports = [curvetop.GenericityReport('degenerate_lcoef', {'asymptote': f'lcoef_y = {lead}'})]
        else:
            reports = [curvetop.certify_plane_generic(f)]
    else:
        identity = curvetop.ShearMap.space(0, 0)
        certification = curvetop.space.certify_space_curve(f, read_polynomial(args.p2), identity)
        if certification is None:
            reports = [curvetop.GenericityReport('degenerate_lcoef', {'lcoef_z': 'not constant'},
                                                 identity, 'pseudo_generic')]
        else:
            reports = list(certification.reports)
    for entry in reports:
        print(entry)
    return 0 if all(entry.passed for entry in reports) else 2


def run(args: argparse.Namespace, settings) -> int:
    """
    Execute one sub-command.
    :return: The exit code
    """
    if args.command == 'check-generic':
        return check_generic(args)
    started = time.perf_counter()
    policy = policy_from(args, settings)
    if args.command == 'plane':
        inputs = [args.f]
        graph = curvetop.plane_topology(read_polynomial(args.f), policy)
    else:
        if args.command == 'corpus':
            corpus = load_corpus()
            if not 1 <= args.n <= len(corpus):
                raise ValueError(f'corpus index {args.n} outside 1..{len(corpus)}')
            name, p1, p2 = corpus[args.n - 1]
            Logger.info('main: Running corpus pair(%s)', name)
        else:
            p1, p2 = args.p1, args.p2
        inputs = [p1, p2]
        graph = curvetop.space_topology(read_polynomial(p1), read_polynomial(p2), policy)
    print(report(graph, args.command, inputs, started))
    if args.command == 'corpus':
        recorded = recorded_counts()
        if args.n in recorded:
            print(check_recorded(graph, *recorded[args.n]))
    write_artifacts(graph, args.out, args.format or settings.output_format)
    return 0


def main(argv: list[str] | None = None) -> int:
    """
    Parse the command line and run it.
    :param argv: Arguments, ``sys.argv[1:]`` when None
    :return: The exit code
    """
    from tblib import pickling_support
    from dependencies.modules import config

    try:
        args = build_parser().parse_args(argv)
    except SystemExit as error:
        return error.code if isinstance(error.code, int) else 0
    try:
        configure_logging()
        pickling_support.install()
        settings = config.load_settings()
        return run(args, settings)
    except KeyboardInterrupt:
        return 130
    except curvetop.ShearBudgetExhausted as error:
        Logger.error('main: %s', error)
        print(f'error: {error}', file=sys.stderr)
        return 2
    except (curvetop.ParseError, curvetop.CommonComponent, curvetop.ZeroPolynomial,
            curvetop.UnknownVariable, OSError, ValueError) as error:
        Logger.error('main: Invalid input(%s)', error)
        print(f'error: {error}', file=sys.stderr)
        return 1
    except Exception as error:
        Logger.exception('main: %s', error)
        print(f'error: {error}', file=sys.stderr)
        return 1


if __name__ == '__main__':
    import multiprocessing

    multiprocessing.freeze_support()
    sys.exit(main())
