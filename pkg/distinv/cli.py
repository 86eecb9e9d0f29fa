'''Command line entry point. Exit status is 0 on success, 1 when --assert
finds a verification mismatch or a failed trace claim, and 2 on usage
or input errors.
'''
import argparse
import functools
import logging
import sys
import time

import trio

from distinv.codecs import FORMATS
from distinv.codecs import read_graphs
from distinv.codecs import write_graph
from distinv.config import TOOL_VERSION
from distinv.config import get_settings
from distinv.engine import BUILTIN_CONJECTURES
from distinv.engine import search_extremal
from distinv.engine import verify_conjecture
from distinv.enumeration import GRAPH_CLASSES
from distinv.enumeration import GraphClass
from distinv.enumeration import sample_class
from distinv.exceptions import DistInvException
from distinv.families import FAMILIES
from distinv.families import FamilySpec
from distinv.invariants import invariant_profile
from distinv.report import ConjectureReportModel
from distinv.report import EnumerationModel
from distinv.report import ExtremalModel
from distinv.report import ProfileModel
from distinv.report import ReportDocument
from distinv.report import ReportSink
from distinv.report import TraceModel
from distinv.report import write_report
from distinv.transforms import DRIVERS
from distinv.transforms import RULES
from distinv.transforms import checkpoint_values
from distinv.utils import rat_to_str

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_MISMATCH = 1
EXIT_USAGE = 2


def _common_options():
    parser = argparse.ArgumentParser(add_help=False)
    parser.add_argument(
        '--format', choices=FORMATS, default='edgelist',
        help='graph text format for input and output')
    parser.add_argument(
        '--json', action='store_true',
        help='emit a JSON report (to --output, or stdout)')
    parser.add_argument(
        '--csv', metavar='PATH',
        help="write a CSV table to PATH ('-' for stdout)")
    parser.add_argument('--output', metavar='PATH')
    parser.add_argument(
        '--timing', action='store_true',
        help='include wall clock time in the report')
    parser.add_argument(
        '--jobs', type=int, default=None,
        help='worker threads (default: DIT_JOBS)')
    parser.add_argument('--seed', type=int, default=0)
    parser.add_argument(
        '--log-level', type=str.upper, default=None,
        choices=('DEBUG', 'INFO', 'WARNING', 'ERROR'))
    return parser


def _graph_input(parser):
    parser.add_argument('--family', choices=sorted(FAMILIES))
    parser.add_argument('--n', type=int)
    parser.add_argument(
        '--input', metavar='PATH', help="graph file ('-' for stdin)")


def build_parser():
    common = _common_options()
    parser = argparse.ArgumentParser(
        prog='distinv',
        description='Exact distance invariants, extremal searches and '
                    'transformation traces for trees and small graphs.')
    parser.add_argument(
        '--version', action='version', version=f'%(prog)s {TOOL_VERSION}')
    commands = parser.add_subparsers(dest='command', required=True)

    invariants = commands.add_parser(
        'invariants', parents=[common], help='profile of one graph')
    _graph_input(invariants)

    family = commands.add_parser(
        'family', parents=[common], help='emit a family instance')
    family.add_argument('--family', choices=sorted(FAMILIES), required=True)
    family.add_argument('--n', type=int, required=True)

    enumerate_ = commands.add_parser(
        'enumerate', parents=[common], help='stream or count a class')
    _class_options(enumerate_)
    enumerate_.add_argument('--count-only', action='store_true')
    enumerate_.add_argument(
        '--sample', type=int, metavar='K',
        help='only K graphs drawn reproducibly with --seed')

    search = commands.add_parser(
        'search', parents=[common], help='extremal search over a class')
    _class_options(search)
    search.add_argument('--expr', required=True)
    direction = search.add_mutually_exclusive_group(required=True)
    direction.add_argument(
        '--maximize', dest='direction', action='store_const', const='max')
    direction.add_argument(
        '--minimize', dest='direction', action='store_const', const='min')

    verify = commands.add_parser(
        'verify', parents=[common], help='check a built-in conjecture')
    verify.add_argument(
        '--conjecture', choices=sorted(BUILTIN_CONJECTURES), required=True)
    verify.add_argument('--min-n', type=int, required=True)
    verify.add_argument('--max-n', type=int, required=True)
    verify.add_argument('--allow-large', action='store_true')
    verify.add_argument('--assert', dest='assert_', action='store_true')

    transform = commands.add_parser(
        'transform', parents=[common],
        help='apply a rule or a driver, with traces')
    _graph_input(transform)
    rule = transform.add_mutually_exclusive_group(required=True)
    rule.add_argument('--rule', choices=sorted(RULES))
    rule.add_argument('--driver', choices=sorted(DRIVERS))
    transform.add_argument(
        '--allow-identity', action='store_true',
        help='let t6 return caterpillars unchanged')
    transform.add_argument('--assert', dest='assert_', action='store_true')

    return parser


def _class_options(parser):
    parser.add_argument('--class', dest='class_id', choices=GRAPH_CLASSES,
                        required=True)
    parser.add_argument('--n', type=int, required=True)
    parser.add_argument('--allow-large', action='store_true')


def _read_text(path):
    if path == '-':
        return sys.stdin.read()
    with open(path, encoding='utf-8') as f:
        return f.read()


def _load_graphs(parser, args):
    if args.family is not None:
        if args.n is None:
            parser.error('--family needs --n')
        return (FamilySpec(args.family, args.n).build(),)

    if args.input is None:
        parser.error('one of --family or --input is required')

    return read_graphs(_read_text(args.input), args.format)


def _emit_text(args, text):
    if args.json and args.output is None:
        # stdout belongs to the JSON report
        return
    if args.output is not None and not args.json:
        with open(args.output, 'w', encoding='utf-8') as f:
            f.write(text)
        return
    sys.stdout.write(text)


def _profile_text(profile):
    lines = [
        f'n {profile.n}',
        f'm {profile.m}',
        f'radius {profile.radius}',
        f'diameter {profile.diameter}',
        f'avg_ecc {rat_to_str(profile.avg_ecc)}',
        f'proximity {rat_to_str(profile.proximity)}',
        f'remoteness {rat_to_str(profile.remoteness)}',
        f'avg_distance {rat_to_str(profile.avg_distance)}',
        f'centers {" ".join(map(str, profile.centers))}',
        f'centroids {" ".join(map(str, profile.centroids))}',
    ]
    return '\n'.join(lines) + '\n'


def _run_invariants(parser, args, jobs):
    graphs = _load_graphs(parser, args)
    profiles = [invariant_profile(g) for g in graphs]
    _emit_text(args, '\n'.join(_profile_text(p) for p in profiles))
    return EXIT_OK, {
        'profiles': [
            ProfileModel.from_graph(g, p) for g, p in zip(graphs, profiles)],
    }


def _run_family(parser, args, jobs):
    spec = FamilySpec(args.family, args.n)
    g = spec.build()
    _emit_text(args, write_graph(g, args.format))
    fields = {'family': str(spec)}
    if g.n >= 2:
        fields['profiles'] = [ProfileModel.from_graph(g)]
    return EXIT_OK, fields


def _write_graphs(args, graphs):
    if args.format == 'graph6':
        return ''.join(write_graph(g, 'graph6') for g in graphs)
    return '\n'.join(write_graph(g, 'edgelist') for g in graphs)


def _run_enumerate(parser, args, jobs):
    graph_class = GraphClass(
        args.class_id, args.n, allow_large=args.allow_large)
    if args.sample is not None:
        graphs = sample_class(graph_class, args.sample, args.seed)
    else:
        graphs = graph_class.graphs()

    if args.count_only:
        _emit_text(args, f'{len(graphs)}\n')
        listed = None
    else:
        _emit_text(args, _write_graphs(args, graphs))
        listed = [write_graph(g, 'graph6').strip() for g in graphs]

    return EXIT_OK, {
        'enumeration': EnumerationModel(
            class_id=args.class_id, n=args.n, count=len(graphs),
            graphs=listed),
    }


def _run_search(parser, args, jobs):
    graph_class = GraphClass(
        args.class_id, args.n, allow_large=args.allow_large)
    result = trio.run(functools.partial(
        search_extremal, graph_class, args.expr, args.direction, jobs=jobs))

    lines = [f'{result.direction} {rat_to_str(result.extremal_value)}']
    lines.extend(write_graph(g, 'graph6').strip()
                 for g in result.witness_graphs)
    _emit_text(args, '\n'.join(lines) + '\n')
    return EXIT_OK, {'extremal': ExtremalModel.from_result(result)}


def _run_verify(parser, args, jobs):
    if args.min_n > args.max_n:
        parser.error('--min-n must not exceed --max-n')

    spec = BUILTIN_CONJECTURES[args.conjecture]
    report = trio.run(functools.partial(
        verify_conjecture, spec, range(args.min_n, args.max_n + 1),
        jobs=jobs, allow_large=args.allow_large))

    lines = []
    for row in report.rows:
        verdicts = []
        if row.family_is_extremal is not None:
            verdicts.append(f'family {row.family_id} '
                            f'{"ok" if row.family_is_extremal else "FAILS"}')
        if row.bound_respected is not None:
            verdicts.append(
                f'bound {"ok" if row.bound_respected else "FAILS"}'
                f'{" (tight)" if row.bound_tight else ""}')
        lines.append(
            f'n={row.n} extremal {rat_to_str(row.extremal_value)} ' +
            ', '.join(verdicts))
    _emit_text(args, '\n'.join(lines) + '\n')

    status = EXIT_OK
    if args.assert_ and report.mismatches:
        logger.warning(
            '%s mismatches at n in %s', spec.conjecture_id,
            list(report.mismatches))
        status = EXIT_MISMATCH

    return status, {
        'conjecture': ConjectureReportModel.from_report(spec, report),
    }


def _run_transform(parser, args, jobs):
    graphs = _load_graphs(parser, args)
    if not graphs:
        parser.error('no graph in the input')
    g = graphs[0]
    fields = {}
    if args.rule is not None:
        if args.rule == 't6':
            traces = [RULES['t6'](g, allow_identity=args.allow_identity)]
        else:
            traces = [RULES[args.rule](g)]
    else:
        traces = DRIVERS[args.driver](g)
        if args.driver == 'rho-r':
            fields['checkpoint_values'] = checkpoint_values(g, traces)

    lines = []
    for trace in traces:
        failed = [name for name, ok in trace.claims.items() if not ok]
        lines.append(
            f'{trace.rule_id} ' +
            ('holds' if trace.holds else f'FAILS {" ".join(failed)}'))
    final = traces[-1].after if traces else g
    _emit_text(args, '\n'.join(lines + [write_graph(final, args.format)]))

    fields['traces'] = [TraceModel.from_trace(trace) for trace in traces]
    status = EXIT_OK
    if args.assert_ and not all(trace.holds for trace in traces):
        status = EXIT_MISMATCH
    return status, fields


_COMMANDS = {
    'invariants': _run_invariants,
    'family': _run_family,
    'enumerate': _run_enumerate,
    'search': _run_search,
    'verify': _run_verify,
    'transform': _run_transform,
}


def _configure_logging(level):
    logging.basicConfig(
        stream=sys.stderr,
        level=level.upper(),
        format='%(levelname)s %(name)s: %(message)s')


def _sinks(args):
    sinks = []
    if args.json:
        sinks.append(ReportSink('json', args.output))
    if args.csv is not None:
        sinks.append(ReportSink('csv', None if args.csv == '-' else args.csv))
    return sinks


def _echo(argv):
    '''argv without --jobs, which never changes a result.'''
    echoed = []
    skip = False
    for arg in argv:
        if skip:
            skip = False
        elif arg == '--jobs':
            skip = True
        elif not arg.startswith('--jobs='):
            echoed.append(arg)
    return echoed


def run_cli(argv=None):
    '''Runs one command and returns its exit status. argparse usage
    errors exit with status 2 directly.
    '''
    if argv is None:
        argv = sys.argv[1:]
    argv = list(argv)

    parser = build_parser()
    args = parser.parse_args(argv)
    settings = get_settings()
    _configure_logging(args.log_level or settings.log_level)
    jobs = args.jobs if args.jobs is not None else settings.jobs
    if jobs < 1:
        parser.error('--jobs must be at least 1')

    started = time.perf_counter()
    try:
        status, fields = _COMMANDS[args.command](parser, args, jobs)
        sinks = _sinks(args)
        if sinks:
            document = ReportDocument(
                command=_echo(argv),
                kind=args.command,
                timing_seconds=(
                    time.perf_counter() - started if args.timing else None),
                **fields)
            write_report(document, sinks)

    except (DistInvException, OSError) as exc:
        logger.debug('Command failed', exc_info=exc)
        print(f'distinv: error: {exc}', file=sys.stderr)
        return EXIT_USAGE

    except ValueError as exc:
        # eg a CSV table requested for a report kind that has none
        print(f'distinv: error: {exc}', file=sys.stderr)
        return EXIT_USAGE

    return status


def main():
    sys.exit(run_cli())
