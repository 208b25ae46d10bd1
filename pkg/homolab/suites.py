'''
Standard complexes and the named verification suites run by ``homolab
verify``. Every suite returns a VerificationReport; a failed check is a
property that did not hold, not an error.
'''
import itertools
import logging
import random
from fractions import Fraction

import networkx as nx
import numpy as np
from sympy import ZZ
from sympy.polys.matrices import DomainMatrix
from sympy.polys.matrices.normalforms import smith_normal_form as sympy_smith_normal_form

from . import linalg
from .betti import incremental_betti, matrix_reduction_betti
from .collapse import greedy_collapse, transport_chain
from .complex import Chain, boundary_matrix, build_complex, orient
from .constructions import verify_chain_maps
from .duality import build_dual, check_duality, fundamental_cycle, partition_void
from .errors import HomolabError, UsageError
from .families import (building_block, capacitance_family, pattern_complex,
                       random_proper_coloring, resistance_family)
from .flow import (INFINITY, MonotoneInstance, ParallelInstance, SeriesInstance,
                   effective_capacitance, effective_resistance, is_null_homologous,
                   spectral_gap_transfer, verify_flow_formulas)
from .snf import bounds_report, smith_normal_form, torsion_cardinality
from .span import (build_span_program, build_szegedy_workspace, prepare_initial_state,
                   simulate_evaluation, witness_bounds, witness_sizes, witness_sizes_direct)
from .spectra import (VerificationReport, betti_via_hodge, laplacian, spectrum,
                      verify_spectrum_identities)

logger = logging.getLogger(__name__)


# ---- standard complexes ----

def full_simplex(d):
    return build_complex([range(d + 1)])


def sphere(d):
    """Boundary of the (d+1)-simplex."""
    return build_complex(itertools.combinations(range(d + 2), d + 1))


def projective_plane():
    return build_complex([
        (0, 1, 2), (0, 2, 3), (0, 3, 4), (0, 4, 5), (0, 1, 5),
        (1, 2, 4), (1, 3, 4), (1, 3, 5), (2, 3, 5), (2, 4, 5)])


def torus():
    """Seven-vertex torus."""
    triangles = []
    for i in range(7):
        triangles.append((i, (i + 1) % 7, (i + 3) % 7))
        triangles.append((i, (i + 2) % 7, (i + 3) % 7))
    return build_complex(triangles)


def octahedron():
    """Boundary of the octahedron; 2k and 2k+1 are antipodal."""
    return build_complex(itertools.product((0, 1), (2, 3), (4, 5)))


def cycle_graph(n):
    return build_complex([(i, (i + 1) % n) for i in range(n)])


def random_complex(rng, vertices=8, max_dim=3, count=None):
    count = count or rng.randint(1, 10)
    simplices = []
    for _ in range(count):
        size = rng.randint(1, max_dim + 1)
        simplices.append(rng.sample(range(vertices), size))
    return build_complex(simplices)


def cycle_chain(nodes):
    '''The 1-cycle through ``nodes`` in order, closing back to the first.'''
    acc = {}
    for a, b in zip(nodes, nodes[1:] + nodes[:1]):
        s, sign = orient((a, b))
        acc[s] = acc.get(s, 0) + sign
    return Chain(1, acc)


def _run(report, name, check):
    try:
        passed, detail = check()
    except HomolabError as e:
        passed, detail = False, '{}: {}'.format(type(e).__name__, e)
    report.add(name, passed, detail)


# ---- suites ----

def betti_suite(count=50, seed=0):
    '''Incremental, matrix-reduction and Hodge Betti numbers agree.'''
    rng = random.Random(seed)
    report = VerificationReport('betti')
    for i in range(count):
        K = random_complex(rng)
        for d in range(min(K.dim, 2) + 1):
            values = (incremental_betti(K, d, seed=rng.randrange(2 ** 16)).betti,
                      matrix_reduction_betti(K, d), betti_via_hodge(K, d))
            report.add('complex {} d={}'.format(i, d), len(set(values)) == 1, str(values))
    return report


def spectra_suite(count=100, seed=0):
    rng = random.Random(seed)
    report = VerificationReport('spectra')
    complexes = [random_complex(rng) for _ in range(count)]
    complexes += [resistance_family(2, n).K for n in (1, 2)]
    complexes.append(capacitance_family(2, 1).K)
    for K in complexes:
        for d in range(K.dim + 1):
            report.extend(verify_spectrum_identities(K, d))
    return report


def _random_case(rng, max_top=None):
    '''A random complex and a dimension d >= 1 holding between 1 and ``max_top`` d-simplices.'''
    while True:
        K = random_complex(rng)
        dims = [d for d in range(1, K.dim + 1)
                if K.n(d) and (max_top is None or K.n(d) <= max_top)]
        if dims:
            return K, rng.choice(dims)


def _random_boundary(rng, K, d):
    """Boundary of a random integer d-chain of K; None if every draw is zero."""
    for _ in range(20):
        gamma = Chain(d, {s: rng.randint(-2, 2) for s in K.simplices(d)}).boundary()
        if not gamma.is_zero():
            return gamma
    return None


def _energy(K, chain):
    return sum((c * c / K.weight(s) for s, c in chain.items()), Fraction(0))


def _random_monotone(rng, count):
    instances = []
    for i in range(count):
        K, d = _random_case(rng)
        top = list(K.simplices(d))
        L = K.without(rng.sample(top, rng.randint(0, len(top) - 1)))
        gamma = _random_boundary(rng, L, d)
        if gamma is not None:
            instances.append(MonotoneInstance(L, K, gamma, 'random monotonicity {}'.format(i)))
    return instances


def _optimality(report, rng, count, directions):
    '''No perturbation of the optimal flow along a d-cycle lowers its energy.'''
    for i in range(count):
        for _ in range(50):
            K, d = _random_case(rng)
            cycles = linalg.nullspace(boundary_matrix(K, d).to_lists(), K.n(d))
            if cycles:
                break
        name = 'optimality {}'.format(i)
        gamma = _random_boundary(rng, K, d)
        if not cycles or gamma is None:
            report.add(name, True, 'no d-cycle or boundary drawn', skipped=True)
            continue
        result = effective_resistance(K, gamma)
        base = _energy(K, result.flow)
        passed = base == result.resistance
        for _ in range(directions):
            coefficients = [rng.randint(-3, 3) for _ in cycles]
            values = [sum((a * z[j] for a, z in zip(coefficients, cycles)), Fraction(0))
                      for j in range(K.n(d))]
            perturbed = result.flow + Chain.from_vector(d, K.simplices(d), values)
            passed = passed and perturbed.boundary() == gamma and _energy(K, perturbed) >= base
        report.add(name, passed, 'R={} over {} directions'.format(result.resistance, directions))


def _capacitance_finiteness(report, rng, count, max_top):
    '''C(L, K) is finite exactly when gamma does not bound in L, over every L.'''
    for i in range(count):
        K, d = _random_case(rng, max_top)
        gamma = _random_boundary(rng, K, d)
        name = 'capacitance finiteness {}'.format(i)
        if gamma is None:
            report.add(name, True, 'no boundary drawn', skipped=True)
            continue
        top = K.simplices(d)
        agree = True
        for r in range(len(top) + 1):
            for removed in itertools.combinations(top, r):
                L = K.without(removed)
                finite = effective_capacitance(L, K, gamma).finite
                agree = agree and finite != is_null_homologous(L, gamma)
        report.add(name, agree, '{} subcomplexes, d={}'.format(2 ** len(top), d))


def flow_suite(count=50, directions=20, capacitance_cases=5, max_top=8, seed=0):
    '''
    Series, parallel and monotonicity instances in dimensions 1 and 2 and on
    random complexes, flow optimality along random cycle directions and
    capacitance finiteness over every subcomplex of small complexes.
    '''
    rng = random.Random(seed)
    path = build_complex([(0, 1), (1, 2)])
    other = build_complex([(0, 3), (3, 2)])
    v = {i: Chain.of((i,)) for i in range(4)}
    instances = [
        SeriesInstance(build_complex([(0, 1)]), build_complex([(1, 2)]),
                       v[2] - v[0], v[1] - v[0], v[2] - v[1]),
        ParallelInstance(path, other, v[2] - v[0]),
        MonotoneInstance(path, build_complex([(0, 1), (1, 2), (0, 3), (3, 2)]), v[2] - v[0]),
        ParallelInstance(full_simplex(2), build_complex([(0, 1, 3), (0, 2, 3), (1, 2, 3)]),
                         Chain.of((0, 1, 2)).boundary()),
        MonotoneInstance(full_simplex(2), sphere(2), Chain.of((0, 1, 2)).boundary()),
        SeriesInstance(build_complex([(0, 1, 2)]), build_complex([(0, 2, 3)]),
                       cycle_chain([0, 1, 2, 3]), cycle_chain([0, 1, 2]), cycle_chain([0, 2, 3])),
    ]
    report = verify_flow_formulas(instances + _random_monotone(rng, count))
    _optimality(report, rng, count // 2, directions)
    _capacitance_finiteness(report, rng, capacitance_cases, max_top)
    return report


def _integer_matrix(rows):
    return DomainMatrix([[ZZ(v) for v in row] for row in rows], (len(rows), len(rows[0])), ZZ)


def _snf_oracle(rows):
    '''Invariant factors from sympy, ascending with the zeros last.'''
    S = sympy_smith_normal_form(_integer_matrix(rows)).to_Matrix()
    diagonal = [abs(int(S[i, i])) for i in range(min(S.shape))]
    return sorted(diagonal, key=lambda v: (v == 0, v))


def snf_suite(count=200, max_size=12, seed=0):
    '''Random integer matrices with entries in [-3, 3] against sympy, plus torsion checks.'''
    rng = random.Random(seed)
    report = VerificationReport('snf')
    agree = chain = det = True
    for _ in range(count):
        m, n = rng.randint(1, max_size), rng.randint(1, max_size)
        rows = [[rng.randint(-3, 3) for _ in range(n)] for _ in range(m)]
        result = smith_normal_form(rows)
        agree = agree and result.diagonal == _snf_oracle(rows)
        nonzero = [v for v in result.diagonal if v]
        chain = chain and all(b % a == 0 for a, b in zip(nonzero, nonzero[1:]))
        if m == n:
            det = det and result.determinant == abs(int(_integer_matrix(rows).det()))
    report.add('oracle agreement', agree, '{} matrices'.format(count))
    report.add('divisibility', chain)
    report.add('determinant', det)
    P = projective_plane()
    report.add('projective plane torsion', torsion_cardinality(P, P, None, 2) == 2)
    for name, K in (('sphere', sphere(2)), ('projective plane', P), ('torus', torus())):
        for d in range(1, K.dim + 1):
            bounds = bounds_report(K, d, samples=200, seed=seed)
            report.add('hadamard {} d={}'.format(name, d), bounds.hadamard_ok, bounds.label)
    return report


def chain_map_suite(max_dim=3):
    report = VerificationReport('chain maps')
    for d in range(1, max_dim + 1):
        report.extend(verify_chain_maps(full_simplex(d)))
    for d in (2, 3):
        report.extend(verify_chain_maps(building_block(d)[0]))
    return report


def families_suite(max_n=5):
    '''
    Resistance of B_2^n against |y_n|^2 / 3 and capacitance of P_2^n in
    Q_2^n against 4^n, both exact.
    '''
    report = VerificationReport('families')
    previous = None
    for n in range(1, max_n + 1):
        family = resistance_family(2, n)
        y = family.certificates['y']
        R = effective_resistance(family.K, family.gamma).resistance
        report.add('R(B_2^{})'.format(n), R == y.norm2(),
                   'unit R={} |y|^2={}'.format(family.unit_resistance(R), y.norm2()))
        report.add('|d y_{}|^2 = 3'.format(n), y.boundary().norm2() == 3)
        if previous is not None and n >= 3:
            ratio = float(y.norm2() / previous)
            report.add('ratio n={}'.format(n), 3.5 <= ratio <= 4.5, '{:.6g}'.format(ratio))
        previous = y.norm2()

        pair = capacitance_family(2, n)
        C = effective_capacitance(pair.L, pair.K, pair.gamma).capacitance
        report.add('C(P_2^{}, Q_2^{})'.format(n, n), C == 4 ** n, 'C={}'.format(C))
    return report


def _gap_decay(report, ratio_max_n, ratio):
    gaps = {}
    for n in range(1, ratio_max_n + 1):
        B = resistance_family(2, n)
        gap = spectrum(laplacian(B.K, 1, 'up')).gap
        gaps[n] = gap
        # the boundary of the top simplex has norm^2 3 and resistance |y_n|^2
        bound = 3 / float(B.certificates['y'].norm2())
        report.add('B_2^{} gap bound'.format(n), gap is not None and gap <= bound + 1e-12,
                   'lambda_min {:.6g}, 3/|y|^2 {:.6g}'.format(gap or 0.0, bound))
        if n >= 2:
            previous = gaps[n - 1]
            factor = gap / previous if gap and previous else float('nan')
            report.add('B_2^{} gap decay'.format(n), factor <= ratio,
                       'lambda_min ratio {:.4f}'.format(factor))


def gap_transfer_suite(max_n=4, count=16, seed=0, ratio_max_n=5, ratio=0.3):
    '''
    lambda_min times the resistance of its eigencycle is one, and lambda_min
    of the up Laplacian on B_2^n shrinks by at least `ratio` per level.
    '''
    rng = random.Random(seed)
    report = VerificationReport('gap transfer')
    _gap_decay(report, ratio_max_n, ratio)
    cases = [('B_2^{}'.format(n), resistance_family(2, n).K, 2) for n in range(1, max_n + 1)]
    while len(cases) < max_n + count:
        K = random_complex(rng)
        if K.dim >= 1 and spectrum(laplacian(K, 0, 'weighted-up')).gap is not None:
            cases.append(('random {}'.format(len(cases)), K, 1))
    for name, K, d in cases:
        def check(K=K, d=d):
            product = spectral_gap_transfer(K, d).product
            return abs(product - 1) <= 1e-7, '{:.12g}'.format(product)
        _run(report, name, check)
    return report


def collapse_suite(max_n=5, instances=30, seed=0):
    '''
    Full collapses of the families, chain transport along collapses that
    keep gamma, and null-homology of cycles before and after.
    '''
    rng = random.Random(seed)
    report = VerificationReport('collapse')
    pairs = []
    for n in range(1, max_n + 1):
        B = resistance_family(2, n)
        PQ = capacitance_family(2, n)
        for name, K in (('B_2^{}'.format(n), B.K), ('P_2^{}'.format(n), PQ.L)):
            sequence = greedy_collapse(K, target_dim=1)
            report.add('{} to dimension 1'.format(name), sequence.reached,
                       str(sequence.result.counts()))
            pairs.append((K, sequence.result))
        kept = greedy_collapse(B.K, protect=B.gamma.support())
        f = transport_chain(kept, B.certificates['y'], B.gamma)
        report.add('transport B_2^{}'.format(n),
                   f.boundary() == B.gamma and all(s in kept.result for s in f.support()))

    checked = 0
    while checked < instances and pairs:
        K, L = pairs[checked % len(pairs)]
        graph = nx.Graph(list(L.simplices(1)))
        basis = nx.cycle_basis(graph)
        if not basis:
            checked += 1
            continue
        gamma = Chain.zero(1)
        for cycle in rng.sample(basis, min(len(basis), 2)):
            gamma = gamma + cycle_chain(cycle)
        before, after = is_null_homologous(K, gamma), is_null_homologous(L, gamma)
        report.add('null-homology {}'.format(checked), before == after, str(before))
        checked += 1
    return report


def _walk_cases():
    return [
        ('triangle', full_simplex(2), Chain.of((0, 1, 2)).boundary()),
        ('triangle d=1', full_simplex(2), Chain.of((1, 2)).boundary()),
        ('sphere', sphere(2), Chain.of((0, 1, 2)).boundary()),
        ('B_2^1', resistance_family(2, 1).K, resistance_family(2, 1).gamma),
    ]


def walk_suite():
    report = VerificationReport('walk')
    for name, K, gamma in _walk_cases():
        try:
            report.extend(build_szegedy_workspace(K, gamma).report)
        except HomolabError as e:
            report.add(name, False, '{}: {}'.format(type(e).__name__, e))
    return report


def _programs():
    sphere_minus = sphere(2).without([(0, 1, 2)])
    pair = capacitance_family(2, 1)
    return [
        ('triangle', build_span_program(full_simplex(2), Chain.of((0, 1, 2)).boundary())),
        ('sphere', build_span_program(sphere(2), Chain.of((0, 1, 2)).boundary())),
        ('sphere minus face', build_span_program(sphere_minus, Chain.of((0, 1, 2)).boundary())),
        ('Q_2^1', build_span_program(pair.K, pair.gamma)),
    ]


def witness_suite():
    '''
    Witness sizes against resistance and capacitance, and against their
    direct float evaluation, over every input.
    '''
    report = VerificationReport('witness')
    for name, program in _programs():
        exact = direct = True
        for x in itertools.product((0, 1), repeat=program.size):
            plus, minus = witness_sizes(program, x)
            positive = program.evaluate(x)
            finite = (plus is not INFINITY, minus is not INFINITY)
            exact = exact and finite == (positive, not positive)
            fplus, fminus = witness_sizes_direct(program, x)
            value, other = (plus, fplus) if positive else (minus, fminus)
            direct = direct and abs(float(value) - float(other)) <= 1e-8 * max(1.0, float(value))
        report.add('{} exact'.format(name), exact, '{} inputs'.format(2 ** program.size))
        report.add('{} direct'.format(name), direct)
    return report


def evaluation_suite(error_budget=1e-6, seed=0):
    report = VerificationReport('evaluation')
    rng = np.random.default_rng(seed)
    for name, program in _programs():
        workspace = build_szegedy_workspace(program.K, program.gamma)
        program = workspace.program
        bounds = witness_bounds(program)
        wrong = 0
        for x in itertools.product((0, 1), repeat=program.size):
            result = simulate_evaluation(program, x, error_budget,
                                         seed=int(rng.integers(2 ** 32)), bounds=bounds,
                                         workspace=workspace)
            wrong += result.decision != program.evaluate(x)
        report.add('{} decisions'.format(name), wrong == 0, '{} wrong'.format(wrong))
    states = [(name, program.K, program.gamma) for name, program in _programs()]
    states += [('torus', torus(), cycle_chain([0, 1, 3])),
               ('tetrahedron', full_simplex(3), Chain.of((0, 1, 2)).boundary()),
               ('projective plane', projective_plane(), Chain.of((0, 1, 2)).boundary()),
               ('octahedron', octahedron(), cycle_chain([0, 2, 1, 3])),
               ('B_2^1', resistance_family(2, 1).K, resistance_family(2, 1).gamma),
               ('cycle', cycle_graph(5), Chain.of((2,)) - Chain.of((0,)))]
    for name, K, gamma in states:
        if not is_null_homologous(K, gamma):
            continue
        state = prepare_initial_state(K, gamma)
        R = state.resistance
        report.add('initial state {}'.format(name), state.extended_norm2 == R / (R + 1),
                   '{} vs R={}'.format(state.extended_norm2, R))
    return report


def duality_cases():
    '''
    (name, dual data) for the tetrahedron boundary, the octahedron with its
    equator and the planar 4-cycle.
    '''
    out = []
    K = sphere(2)
    z = fundamental_cycle(K)
    out.append(('sphere', build_dual(K, [z], *partition_void(z, lambda s: s == (0, 1, 2)))))
    K = octahedron()
    z = fundamental_cycle(K)
    out.append(('octahedron', build_dual(K, [z], *partition_void(z, lambda s: 4 in s))))
    K = cycle_graph(4)
    z = fundamental_cycle(K)
    out.append(('square', build_dual(K, [z], *partition_void(z, lambda s: s in ((0, 1), (1, 2))))))
    return out


def valid_subcomplexes(data, limit=None, seed=0):
    '''Subcomplexes L = K minus some d-simplices in which gamma does not bound.'''
    top = data.K.simplices(data.d)
    out = []
    for r in range(1, len(top) + 1):
        for removed in itertools.combinations(top, r):
            L = data.K.without(removed)
            if not is_null_homologous(L, data.gamma):
                out.append(L)
    if limit is not None and len(out) > limit:
        out = random.Random(seed).sample(out, limit)
    return out


def duality_suite(limit=20, seed=0):
    report = VerificationReport('duality')
    for name, data in duality_cases():
        for i, L in enumerate(valid_subcomplexes(data, limit, seed)):
            result = check_duality(data, L)
            report.add('{} L{}'.format(name, i), result.passed,
                       'C={} R={}'.format(result.capacitance, result.resistance))
    return report


def coloring_suite(max_n=3, seed=0):
    '''Up-Laplacian gap of B_2^n against its pattern complex.'''
    report = VerificationReport('coloring')
    for n in range(1, max_n + 1):
        K = resistance_family(2, n).K
        found = random_proper_coloring(K, K.n(0), attempts=200, seed=seed)
        if found is None:
            report.add('B_2^{}'.format(n), True, 'no proper coloring found', skipped=True)
            continue
        Kc = pattern_complex(K, found.coloring).complex
        a = spectrum(laplacian(K, 1, 'up')).gap
        b = spectrum(laplacian(Kc, 1, 'up')).gap
        report.add('B_2^{}'.format(n), abs(a - b) <= 1e-8 * max(1.0, a),
                   '{} colors, {:.12g} vs {:.12g}'.format(found.colors, a, b))
    return report


SUITES = {
    'betti': betti_suite,
    'spectra': spectra_suite,
    'flow': flow_suite,
    'snf': snf_suite,
    'chain-maps': chain_map_suite,
    'families': families_suite,
    'gap-transfer': gap_transfer_suite,
    'collapse': collapse_suite,
    'walk': walk_suite,
    'witness': witness_suite,
    'evaluation': evaluation_suite,
    'duality': duality_suite,
    'coloring': coloring_suite,
}


def run_suite(name, **options):
    if name not in SUITES:
        raise UsageError('unknown suite {!r}, expected one of {}'.format(name, sorted(SUITES)))
    report = SUITES[name](**options)
    logger.info('suite %s: %s', name, 'passed' if report.passed else 'FAILED')
    return report
