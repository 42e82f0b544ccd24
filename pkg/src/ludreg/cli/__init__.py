"""
Command line interface::

    ludreg phase-grid    [flags]   recovery probability over an (N, p) grid
    ludreg init-envelope [flags]   convergence time against initial angle
    ludreg single        [flags]   one instance, every selected solver
    ludreg analyze --dim D         threshold tables
    ludreg verify  --dim 3,4,6     Monte Carlo check of the closed forms

Exit status is 0 on success, 1 on usage errors and 2 on runtime or IO
errors.
"""

import argparse
import logging
import sys

from ..analysis import threshold_table, lambda_star, witness_gap, \
    convex_threshold_curve, nonconvex_threshold_curve
from ..config import LUDREG_VERSION
from ..exceptions import DomainError
from ..python.montecarlo import SphereMomentTest
from .experiments import ExperimentSpec, run_experiment
from .output import emit_outputs, fmt
from .settings import UsageError, load_config, parse_grid, normalize_key

log = logging.getLogger(__name__)

LOG_FORMAT = '%(asctime)s %(levelname)-5s [%(name)s] %(message)s'

COMMANDS = {
    'phase-grid': 'phase_grid',
    'init-envelope': 'init_envelope',
    'single': 'single_run',
}


class ArgumentParser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError('%s: %s' % (self.prog, message))


def _experiment_flags(parser):
    add = parser.add_argument
    add('--config', help='JSON configuration file or run manifest')
    add('--dim', type=int, help='dimension d')
    add('--n-grid', help='sample sizes: "4,8,16" or "4:1024:geometric"')
    add('--p-grid', help='corruption levels: "0.1,0.5" or "0.1:0.9:0.1"')
    add('--p', type=float, help='single corruption level')
    add('--trials', type=int, help='trials per grid cell')
    add('--solvers', help='subset of ls,so,unconstrained,conv')
    add('--seed', type=int, help='base seed')
    add('--cloud', help='point cloud (.csv/.xyz or ASCII .ply) instead of '
        'the sphere')
    add('--out', help='output directory')
    add('--recovery-tol', type=float)
    add('--alpha-max', type=float)
    add('--max-iters', type=int)
    add('--convex-max-iters', type=int)
    add('--starts', type=int, help='random initializations (init-envelope)')
    add('--overlay-c', type=float,
        help='constant c of the threshold curves drawn on figures')


def build_parser():
    common = ArgumentParser(add_help=False)
    common.add_argument('-v', '--verbose', action='count', default=0,
                        help='more output (repeatable)')

    parser = ArgumentParser(prog='ludreg', description='Robust rotation '
                            'registration by least unsquared deviations')
    parser.add_argument('--version', action='version',
                        version='%(prog)s ' + LUDREG_VERSION)
    sub = parser.add_subparsers(dest='command', metavar='command')
    sub.required = True

    for name in COMMANDS:
        _experiment_flags(sub.add_parser(name, parents=[common]))

    analyze = sub.add_parser('analyze', parents=[common],
                             help='print threshold tables')
    analyze.add_argument('--dim', default='3', help='dimensions, e.g. "3,6"')
    analyze.add_argument('--p-grid', help='levels at which to tabulate '
                         'lambda* and the witness gap')
    analyze.add_argument('--n-grid', help='sample sizes at which to '
                         'tabulate the threshold curves')
    analyze.add_argument('--overlay-c', type=float, default=1.0)

    verify = sub.add_parser('verify', parents=[common],
                            help='Monte Carlo check of the closed forms')
    verify.add_argument('--dim', default='3,4,6', help='dimensions')
    verify.add_argument('--samples', type=int, default=1000000)
    verify.add_argument('--seed', type=int, default=0)
    verify.add_argument('--significance', type=float, default=0.0027)
    return parser


def experiment_spec(args):
    """Merges the configuration file and the flags; flags win"""
    values = load_config(args.config) if args.config else {}
    values.pop('kind', None)
    out = values.pop('out', None)
    for key, value in vars(args).items():
        if key in ('command', 'verbose', 'config', 'p') or value is None:
            continue
        values[normalize_key(key)] = value
    if args.p is not None:
        values['p_values'] = (args.p,)
    out = values.pop('out', out)
    kind = COMMANDS[args.command]
    try:
        spec = ExperimentSpec.for_kind(kind, **values)
    except TypeError as e:
        raise UsageError(str(e)) from None
    return spec, out or 'ludreg-%s' % args.command


def cmd_experiment(args):
    spec, out = experiment_spec(args)
    log.info('running %s', spec)
    result = run_experiment(spec)
    for path in emit_outputs(result, out):
        print(path)
    return 0


def cmd_analyze(args):
    try:
        dims = parse_grid(args.dim, int)
        levels = parse_grid(args.p_grid) if args.p_grid else ()
        sizes = parse_grid(args.n_grid, int) if args.n_grid else ()
        rows = []
        for d in dims:
            table = threshold_table(d)
            rows.append('d=%i p_tilde=%s beta_ratio=%s'
                        % (d, fmt(table.p_tilde), fmt(table.beta_ratio)))
            for p in levels:
                if d >= 3 and table.p_tilde < p < 1:
                    rows.append('  p=%s lambda*=%s witness_gap=%s' % (
                        fmt(p), fmt(lambda_star(d, p)),
                        fmt(witness_gap(d, p))))
                else:
                    rows.append('  p=%s below threshold' % fmt(p))
            for n in sizes:
                rows.append('  N=%i convex=%s nonconvex=%s' % (
                    n, fmt(float(convex_threshold_curve(d, n,
                                                        args.overlay_c))),
                    fmt(float(nonconvex_threshold_curve(n,
                                                        args.overlay_c)))))
    except DomainError as e:
        raise UsageError(str(e)) from None
    print('\n'.join(rows))
    return 0


def cmd_verify(args):
    dims = parse_grid(args.dim, int)
    if min(dims) < 3:
        raise UsageError('verify: dimensions must be >= 3')
    tests = [SphereMomentTest(d, sample_count=args.samples, seed=args.seed)
             for d in dims]
    for t in tests:
        t.tabulate()
    count = sum(len(t.estimates) for t in tests)
    ok = True
    for t in tests:
        ok &= t.run(significance_level=args.significance, test_count=count,
                    quiet=False)
    if not ok:
        print('verify: closed form rejected', file=sys.stderr)
        return 2
    return 0


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as e:
        print(e, file=sys.stderr)
        return 1
    except SystemExit as e:
        # --help and --version
        return e.code or 0

    level = max(logging.WARNING - 10 * args.verbose, logging.DEBUG)
    logging.basicConfig(level=level, format=LOG_FORMAT)

    try:
        if args.command == 'analyze':
            return cmd_analyze(args)
        elif args.command == 'verify':
            return cmd_verify(args)
        return cmd_experiment(args)
    except UsageError as e:
        print('ludreg: %s' % e, file=sys.stderr)
        return 1
    except (OSError, ValueError, RuntimeError) as e:
        print('ludreg: %s' % e, file=sys.stderr)
        return 2
