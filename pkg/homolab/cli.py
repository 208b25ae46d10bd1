'''
Command-line entry point: ``homolab <command> [flags]``.

Every command reads complex and chain JSON files, calls into the library and
writes one JSON report (stdout unless ``--out`` is given); ``generate`` writes
a complex file instead. Exit codes: 0 on success, 2 when a verification report
has a failed check, 1 on any HomolabError.
'''
import argparse
import itertools
import logging
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

from . import __version__, settings
from .betti import TESTERS, incremental_betti, make_tester, matrix_reduction_betti
from .collapse import apply_collapses, greedy_collapse, transport_chain
from .complex import boundary_matrix
from .duality import build_dual, check_duality
from .errors import HomolabError, UsageError
from .families import capacitance_family, many_small, resistance_family
from .flow import BACKENDS, effective_capacitance, effective_resistance
from .io import (chain_from_dict, chain_to_dict, complex_from_dict, complex_to_dict,
                 family_to_dict, format_value, load_chain, load_complex, read_json,
                 voids_from_dict, write_csv, write_report)
from .snf import bounds_report, relative_boundary_matrix, smith_normal_form, torsion_cardinality
from .span import (build_span_program, build_szegedy_workspace, simulate_evaluation,
                   witness_bounds, witness_sizes)
from .spectra import KINDS, betti_via_hodge, laplacian, spectrum
from .suites import SUITES, run_suite

logger = logging.getLogger(__name__)

GENERATORS = {
    'Bdn': resistance_family,
    'PQ': capacitance_family,
    'M': many_small,
}

COMMANDS = ('generate', 'betti', 'resistance', 'capacitance', 'spectral-gap', 'snf',
            'collapse', 'span-sim', 'duality', 'verify', 'sweep')

# flags naming JSON files, checked at parse time
PATH_FLAGS = ('input', 'gamma', 'sub', 'sub0', 'gamma1', 'gamma2', 'pairs')


class _Parser(argparse.ArgumentParser):

    def error(self, message):
        raise UsageError(message)


@dataclass
class RunPlan:
    command: str
    options: dict = field(default_factory=dict)
    out: str = None
    verbose: bool = False

    def to_dict(self):
        return {'command': self.command,
                'options': {k: v for k, v in sorted(self.options.items()) if v is not None}}


def _nonnegative(value):
    number = int(value)
    if number < 0:
        raise argparse.ArgumentTypeError('must be non-negative, got {}'.format(number))
    return number


def _positive(value):
    number = int(value)
    if number < 1:
        raise argparse.ArgumentTypeError('must be positive, got {}'.format(number))
    return number


def _probability(value):
    number = float(value)
    if not 0 < number < 1:
        raise argparse.ArgumentTypeError('must lie in (0, 1), got {}'.format(number))
    return number


def _bits(value):
    if not value or set(value) - {'0', '1'}:
        raise argparse.ArgumentTypeError('must be a 0/1 string, got {!r}'.format(value))
    return value


def build_parser():
    parser = _Parser(prog='homolab', description='Computational topology lab.')
    parser.add_argument('--version', action='version', version=__version__)
    common = _Parser(add_help=False)
    common.add_argument('--out', help='report path, stdout when omitted')
    common.add_argument('--verbose', action='store_true')
    sub = parser.add_subparsers(dest='command', parser_class=_Parser)

    p = sub.add_parser('generate', parents=[common], help='write a worst-case family')
    p.add_argument('--family', choices=sorted(GENERATORS), required=True)
    p.add_argument('--d', type=_positive, required=True)
    p.add_argument('--n', type=_positive, required=True)
    p.add_argument('--copies', type=_positive)

    p = sub.add_parser('betti', parents=[common])
    p.add_argument('--input', required=True)
    p.add_argument('--dim', type=_nonnegative, required=True)
    p.add_argument('--method', choices=('incremental', 'reduction', 'hodge'), default='incremental')
    p.add_argument('--tester', choices=TESTERS, default='classical-exact')
    p.add_argument('--seed', type=int)

    p = sub.add_parser('resistance', parents=[common])
    p.add_argument('--input', required=True)
    p.add_argument('--gamma', help="chain file, default the input's gamma")
    p.add_argument('--backend', choices=BACKENDS, default='exact')

    p = sub.add_parser('capacitance', parents=[common])
    p.add_argument('--input', required=True)
    p.add_argument('--sub', help="subcomplex file, default the input's subcomplex")
    p.add_argument('--gamma')

    p = sub.add_parser('spectral-gap', parents=[common])
    p.add_argument('--input', required=True)
    p.add_argument('--dim', type=_nonnegative, required=True)
    p.add_argument('--kind', choices=KINDS, default='combinatorial')

    p = sub.add_parser('snf', parents=[common])
    p.add_argument('--input', required=True)
    p.add_argument('--dim', type=_positive, required=True)
    p.add_argument('--sub')
    p.add_argument('--sub0')
    p.add_argument('--samples', type=_positive, default=500)
    p.add_argument('--seed', type=int, default=0)

    p = sub.add_parser('collapse', parents=[common])
    p.add_argument('--input', required=True)
    p.add_argument('--target-dim', type=_nonnegative)
    p.add_argument('--pairs', help='prescribed sequence, a JSON list of [sigma, tau]')
    p.add_argument('--gamma')

    p = sub.add_parser('span-sim', parents=[common])
    p.add_argument('--input', required=True)
    p.add_argument('--gamma')
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument('--x', type=_bits)
    group.add_argument('--all-instances', action='store_true')
    p.add_argument('--error-budget', type=_probability, default=0.01)
    p.add_argument('--seed', type=int, default=0)

    p = sub.add_parser('duality', parents=[common])
    p.add_argument('--input', required=True, help='complex with voids')
    p.add_argument('--sub', required=True)
    p.add_argument('--gamma1', required=True)
    p.add_argument('--gamma2', required=True)
    p.add_argument('--gamma')
    p.add_argument('--split', type=_nonnegative, default=0)

    p = sub.add_parser('verify', parents=[common])
    p.add_argument('--suite', choices=sorted(SUITES) + ['all'], required=True)

    p = sub.add_parser('sweep', parents=[common], help='growth table over a family')
    p.add_argument('--family', choices=('Bdn', 'PQ'), required=True)
    p.add_argument('--d', type=_positive, default=2)
    p.add_argument('--n-max', type=_positive, default=5)
    p.add_argument('--csv')
    p.add_argument('--store', action='store_true', help='insert the complexes into the catalog')
    return parser


def parse_and_validate(argv):
    args = build_parser().parse_args(argv)
    if args.command is None:
        raise UsageError('a command is required, one of {}'.format(', '.join(COMMANDS)))
    options = vars(args)
    command = options.pop('command')
    out, verbose = options.pop('out'), options.pop('verbose')
    for flag in PATH_FLAGS:
        if options.get(flag) is not None:
            try:
                read_json(options[flag])
            except OSError as e:
                raise UsageError('--{}: cannot read {}: {}'.format(flag, options[flag], e.strerror)) from None
    if command == 'generate' and options['copies'] is not None and options['family'] != 'M':
        raise UsageError('--copies only applies to --family M')
    return RunPlan(command, options, out, verbose)


# ---- commands ----

def _gamma(opts, data):
    if opts.get('gamma'):
        return load_chain(opts['gamma'])
    if 'gamma' in data:
        return chain_from_dict(data['gamma'])
    raise UsageError('--gamma is required, the input carries no gamma')


def _subcomplex(opts, data, flag='sub'):
    if opts.get(flag):
        return load_complex(opts[flag])[0]
    if flag == 'sub' and 'subcomplex' in data:
        return complex_from_dict(data['subcomplex'])
    raise UsageError('--{} is required, the input carries no subcomplex'.format(flag))


def _generate(opts):
    generator = GENERATORS[opts['family']]
    if opts['family'] == 'M':
        family = generator(opts['d'], opts['n'], opts['copies'])
    else:
        family = generator(opts['d'], opts['n'])
    return family_to_dict(family)


def _betti(opts):
    K, _ = load_complex(opts['input'])
    d = opts['dim']
    if opts['method'] == 'reduction':
        return {'d': d, 'method': 'reduction', 'betti': matrix_reduction_betti(K, d)}
    if opts['method'] == 'hodge':
        return {'d': d, 'method': 'hodge', 'betti': betti_via_hodge(K, d)}
    if opts['tester'] == 'span-sim':
        tester = make_tester('span-sim', seed=opts['seed'] or 0)
    else:
        tester = make_tester(opts['tester'])
    return incremental_betti(K, d, tester=tester, seed=opts['seed'])


def _resistance(opts):
    K, data = load_complex(opts['input'])
    result = effective_resistance(K, _gamma(opts, data), backend=opts['backend'])
    return {'resistance': result.resistance, 'backend': result.backend,
            'flow': result.flow}


def _capacitance(opts):
    K, data = load_complex(opts['input'])
    result = effective_capacitance(_subcomplex(opts, data), K, _gamma(opts, data))
    return {'capacitance': result.capacitance, 'potential': result.potential}


def _spectral_gap(opts):
    K, _ = load_complex(opts['input'])
    report = spectrum(laplacian(K, opts['dim'], opts['kind'])).to_dict()
    report.update(kind=opts['kind'], d=opts['dim'])
    return report


def _snf(opts):
    K, data = load_complex(opts['input'])
    d = opts['dim']
    if opts.get('sub') or opts.get('sub0'):
        L = _subcomplex(opts, data) if opts.get('sub') else K
        L0 = _subcomplex(opts, data, 'sub0') if opts.get('sub0') else []
        op = relative_boundary_matrix(K, L, L0, d)
        return {'d': d, 'relative': True,
                'snf': smith_normal_form(op.to_lists()) if 0 not in op.shape else None,
                'torsion': torsion_cardinality(K, L, L0, d)}
    if not K.n(d) or not K.n(d - 1):
        raise UsageError('--dim {}: the complex has no {}-simplices with faces'.format(d, d))
    return {'d': d, 'relative': False,
            'snf': smith_normal_form(boundary_matrix(K, d).to_lists()),
            'bounds': bounds_report(K, d, samples=opts['samples'], seed=opts['seed'])}


def _collapse(opts):
    K, data = load_complex(opts['input'])
    if opts.get('pairs'):
        sequence = apply_collapses(K, read_json(opts['pairs']))
    else:
        gamma = _gamma(opts, data) if opts.get('gamma') or 'gamma' in data else None
        protect = gamma.support() if gamma is not None else ()
        sequence = greedy_collapse(K, opts['target_dim'], protect=protect)
    report = sequence.to_dict()
    report['result'] = complex_to_dict(sequence.result)
    if opts.get('gamma') or 'gamma' in data:
        gamma = _gamma(opts, data)
        flow = effective_resistance(K, gamma).flow
        if flow is None:
            report['transported'] = None
        else:
            f = transport_chain(sequence, flow, gamma)
            report['transported'] = chain_to_dict(f)
            report['passed'] = f.boundary() == gamma and all(s in sequence.result for s in f.support())
    return report


def _span_sim(opts):
    K, data = load_complex(opts['input'])
    program = build_span_program(K, _gamma(opts, data))
    bounds = witness_bounds(program)
    workspace = build_szegedy_workspace(K, program.gamma)
    if opts['x'] is not None:
        instances = [[int(b) for b in opts['x']]]
    else:
        instances = [list(x) for x in itertools.product((0, 1), repeat=program.size)]
    rows = []
    for i, x in enumerate(instances):
        result = simulate_evaluation(program, x, opts['error_budget'], seed=opts['seed'] + i,
                                     bounds=bounds, workspace=workspace)
        classical = program.evaluate(x)
        plus, minus = witness_sizes(program, x)
        rows.append({'x': ''.join(map(str, x)), 'decision': result.decision,
                     'classical': classical, 'agree': result.decision == classical,
                     'acceptance': result.acceptance, 'w_plus': plus, 'w_minus': minus,
                     'tally': result.tally})
    return {'positive_bound': bounds.positive, 'negative_bound': bounds.negative,
            'query_bound': bounds.query_bound, 'walk': workspace.report,
            'instances': rows, 'passed': all(r['agree'] for r in rows)}


def _duality(opts):
    K, data = load_complex(opts['input'])
    gamma1, gamma2 = load_chain(opts['gamma1']), load_chain(opts['gamma2'])
    gamma = _gamma(opts, data) if opts.get('gamma') or 'gamma' in data else gamma1.boundary()
    dual = build_dual(K, voids_from_dict(data, gamma1.dim), gamma1, gamma2, gamma, opts['split'])
    return check_duality(dual, _subcomplex(opts, data))


def _verify(opts):
    names = sorted(SUITES) if opts['suite'] == 'all' else [opts['suite']]
    reports = [run_suite(name) for name in names]
    return {'suites': reports, 'passed': all(r.passed for r in reports)}


def _sweep_point(family, d, n):
    if family == 'Bdn':
        generated = resistance_family(d, n)
        R = effective_resistance(generated.K, generated.gamma).resistance
        row = {'resistance': generated.unit_resistance(R), 'capacitance': None}
    else:
        generated = capacitance_family(d, n)
        C = effective_capacitance(generated.L, generated.K, generated.gamma).capacitance
        row = {'resistance': None, 'capacitance': generated.unit_capacitance(C)}
    gap = spectrum(laplacian(generated.K, d - 1, 'up')).gap
    row.update(n=n, lambda_min=gap, simplices=len(generated.K))
    return generated, row


def _sweep(opts):
    points = range(1, opts['n_max'] + 1)
    workers = max(1, min(settings.threads, len(points)))
    with ThreadPoolExecutor(max_workers=workers) as pool:
        results = list(pool.map(lambda n: _sweep_point(opts['family'], opts['d'], n), points))
    rows = [row for _, row in results]
    for previous, row in zip(rows, rows[1:]):
        key = 'resistance' if opts['family'] == 'Bdn' else 'capacitance'
        row['ratio'] = row[key] / previous[key]
    if opts.get('csv'):
        write_csv(rows, opts['csv'], ['n', 'simplices', 'lambda_min', 'resistance',
                                      'capacitance', 'ratio'])
    if opts.get('store'):
        from . import catalog
        names = [catalog.Complex.insert_family(generated) for generated, _ in results]
        catalog.BoundaryResistance.populate(
            [{'complex_name': name} for name in names], display_progress=True)
    return {'family': opts['family'], 'd': opts['d'], 'rows': rows}


HANDLERS = {
    'generate': _generate,
    'betti': _betti,
    'resistance': _resistance,
    'capacitance': _capacitance,
    'spectral-gap': _spectral_gap,
    'snf': _snf,
    'collapse': _collapse,
    'span-sim': _span_sim,
    'duality': _duality,
    'verify': _verify,
    'sweep': _sweep,
}


def execute(plan):
    '''Run a plan; returns the report as written and whether it passed.'''
    body = format_value(HANDLERS[plan.command](plan.options))
    # generate writes a complex file, every other command a report
    report = body if plan.command == 'generate' else {'plan': plan.to_dict(), 'report': body}
    write_report(report, plan.out)
    passed = body.get('passed', True) if isinstance(body, dict) else True
    return report, passed is not False


def main(argv=None):
    argv = sys.argv[1:] if argv is None else argv
    try:
        plan = parse_and_validate(argv)
        logging.basicConfig(level=logging.INFO if plan.verbose else logging.WARNING,
                            format='%(levelname)s %(name)s: %(message)s')
        _, passed = execute(plan)
    except (HomolabError, OSError) as e:
        print('homolab: {}: {}'.format(type(e).__name__, e), file=sys.stderr)
        return 1
    return 0 if passed else 2


if __name__ == '__main__':
    sys.exit(main())
