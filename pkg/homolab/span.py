'''
The span program deciding whether a cycle bounds in a subcomplex, its witness
sizes, and a dense classical simulation of the quantum evaluation algorithm
with query accounting.

The program has one input bit per d-simplex; K(x) keeps the (d-1)-skeleton
and the d-simplices whose bit is set. Its operator is A = boundary * sqrt(W)
and its target is gamma.
'''
import itertools
import logging
import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np
import scipy.linalg as la

from . import linalg, settings
from .complex import SimplicialComplex, boundary_matrix, facets, is_cycle
from .errors import DomainError, MalformedInputError, NumericError, ResourceError
from .flow import (INFINITY, boundary_columns, effective_capacitance,
                   effective_resistance, is_null_homologous)
from .spectra import VerificationReport, laplacian, spectrum

logger = logging.getLogger(__name__)

# phase estimation is refused beyond 2**MAX_PRECISION_BITS steps
MAX_PRECISION_BITS = 48

# input-oracle queries per reflection about H(x)
QUERIES_PER_REFLECTION = 2

# eigenphase agreement and phase-gap slack of the walk
PHASE_TOL = 1e-9


@dataclass
class SpanProgram:
    K: SimplicialComplex
    gamma: object
    d: int

    @property
    def simplices(self):
        return self.K.simplices(self.d)

    @property
    def size(self):
        return self.K.n(self.d)

    def operator(self):
        """A = boundary * sqrt(W) as a dense float matrix."""
        scale = np.sqrt([float(w) for w in self.K.weights(self.d)])
        return boundary_matrix(self.K, self.d).dense().astype(float) * scale

    def target(self):
        return self.gamma.to_vector(self.K.simplices(self.d - 1), dtype=float)

    def check_input(self, x):
        x = [int(b) for b in x]
        if len(x) != self.size or any(b not in (0, 1) for b in x):
            raise MalformedInputError('input must be {} bits, got {!r}'.format(self.size, x))
        return x

    def subcomplex(self, x):
        x = self.check_input(x)
        kept = list(self.K.skeleton(self.d - 1).all_simplices())
        kept += [s for s, bit in zip(self.simplices, x) if bit]
        alive = set(kept)
        return SimplicialComplex(kept, {s: w for s, w in self.K.weight_map().items() if s in alive})

    def evaluate(self, x):
        """True on positive inputs: gamma bounds in K(x)."""
        return is_null_homologous(self.subcomplex(x), self.gamma)


def build_span_program(K, gamma, weights=None):
    if weights:
        K = K.with_simplices((), weights)
    if not is_cycle(gamma):
        raise DomainError('target is not a cycle')
    for s in gamma.support():
        if s not in K:
            raise DomainError('target is supported on {} outside the complex'.format(list(s)))
    return SpanProgram(K, gamma, gamma.dim + 1)


def witness_sizes(program, x):
    '''
    (w+, w-) for input x: the resistance of gamma in K(x) on positive inputs
    and its capacitance in (K(x), K) on negative ones, the other being
    INFINITY. A gamma that does not bound in K has negative witnesses of size 0.
    '''
    Kx = program.subcomplex(x)
    if is_null_homologous(Kx, program.gamma):
        return effective_resistance(Kx, program.gamma).resistance, INFINITY
    if not is_null_homologous(program.K, program.gamma):
        return INFINITY, Fraction(0)
    return INFINITY, effective_capacitance(Kx, program.K, program.gamma).capacitance


def witness_sizes_direct(program, x):
    '''
    Float witness sizes from the program alone: the least |w|^2 with A w = tau
    and w in H(x), or the least |omega A|^2 with omega tau = 1 and omega A
    vanishing on H(x).
    '''
    x = program.check_input(x)
    A, tau = program.operator(), program.target()
    on = [i for i, bit in enumerate(x) if bit]
    A_on = A[:, on]
    if A_on.size:
        w, *_ = la.lstsq(A_on, tau)
        residual = la.norm(A_on @ w - tau)
    else:
        w, residual = np.zeros(0), la.norm(tau)
    if residual <= 1e-9 * max(1.0, la.norm(tau)):
        return float(w @ w), INFINITY
    # omega ranges over the left kernel of A restricted to H(x)
    B = la.null_space(A_on.T) if A_on.size else np.eye(A.shape[0])
    a = B.T @ tau
    Q = B.T @ A @ A.T @ B
    z = la.lstsq(Q, a)[0]
    return INFINITY, float(1 / (a @ z))


@dataclass
class WitnessBounds:
    positive: object
    negative: object
    instances: int
    exhaustive: bool = True

    @property
    def query_bound(self):
        """sqrt(W+ W-), the order of the query complexity."""
        if self.positive is None or self.negative is None:
            return None
        return math.sqrt(float(self.positive) * float(self.negative))


def witness_bounds(program):
    '''
    Largest finite positive and negative witness sizes over every input.
    Only done for programs with at most
    ``settings.exhaustive_witness_simplices`` input bits.
    '''
    if program.size > settings.exhaustive_witness_simplices:
        raise ResourceError('{} input bits exceed the exhaustive witness limit {}'.format(
            program.size, settings.exhaustive_witness_simplices))
    W_plus = W_minus = None
    count = 0
    for x in itertools.product((0, 1), repeat=program.size):
        plus, minus = witness_sizes(program, x)
        count += 1
        if plus is not INFINITY:
            W_plus = plus if W_plus is None else max(W_plus, plus)
        if minus is not INFINITY:
            W_minus = minus if W_minus is None else max(W_minus, minus)
    return WitnessBounds(W_plus, W_minus, count)


# ---- oracles ----

@dataclass
class QueryTally:
    input_queries: int = 0
    list_queries: int = 0
    membership_queries: int = 0
    incidence_queries: int = 0
    walk_calls: int = 0
    amplification_rounds: int = 0
    repetitions: int = 0
    precision_bits: int = 0
    qubits: int = 0
    query_bound: float = None

    def to_dict(self):
        return dict(self.__dict__)


class OracleModels:
    '''
    Counted classical stand-ins for the list, membership and incidence
    oracles of a complex. Preparing a uniform superposition over m items is
    charged ceil(sqrt(m)) queries.
    '''

    def __init__(self, K, tally=None):
        self.K = K
        self.tally = tally or QueryTally()

    def list(self, d, i):
        self.tally.list_queries += 1
        return self.K.simplices(d)[i]

    def membership(self, s):
        self.tally.membership_queries += 1
        return tuple(s) in self.K

    def down_incidence(self, s, j):
        '''The facet of s without its j-th vertex and the sign (-1)^j.'''
        self.tally.incidence_queries += 1
        return facets(tuple(s))[j]

    def up_incidence(self, s, j):
        """j-th immediate coface of s, or None past the last one."""
        self.tally.incidence_queries += 1
        up = self.K.cofaces(tuple(s))
        return up[j] if j < len(up) else None

    def charge_superposition(self, m):
        cost = math.ceil(math.sqrt(max(m, 1)))
        self.tally.incidence_queries += cost
        return cost


def oracle_models(K):
    return OracleModels(K)


# ---- walk operator ----

@dataclass
class SpanSimWorkspace:
    program: SpanProgram
    M_B: np.ndarray
    M_C: np.ndarray
    U: np.ndarray
    phases: np.ndarray
    V: np.ndarray
    excluded: tuple
    lambda_min: float
    sigma_min: float
    phase_residual: float = None
    report: VerificationReport = field(repr=False, default=None)

    @property
    def dimension(self):
        return self.U.shape[0]

    @property
    def walk_calls_per_reflection(self):
        d = self.program.d
        return math.ceil(math.sqrt((d + 1) / self.lambda_min))


def _kernel_reflection(A):
    n = A.shape[1]
    kernel = la.null_space(A) if A.size else np.eye(n)
    return 2 * kernel @ kernel.T - np.eye(n), kernel.shape[1]


def _phase_multiset(values):
    angles = np.angle(values)
    # -1 may come out of angle() as -pi
    angles[np.isclose(angles, -math.pi, rtol=0, atol=PHASE_TOL)] = math.pi
    return np.sort(angles)


def build_szegedy_workspace(K, gamma):
    '''
    The walk U = R_C R_B on C_{d-1} (x) C_d, the reflection V about ker A it
    yields and the checks of its eigenstructure. Zero-degree (d-1)-simplices
    are left out of the C space and reported in ``excluded``.
    '''
    program = build_span_program(K, gamma)
    d = program.d
    rows, cols = K.simplices(d - 1), K.simplices(d)
    m, n = len(rows), len(cols)
    N = m * n
    if N == 0:
        raise DomainError('no {}-simplices to walk on'.format(d))
    if N > settings.span_cap:
        raise ResourceError('walk space of dimension {} exceeds the cap {}'.format(N, settings.span_cap))
    weights = [float(w) for w in K.weights(d)]
    row_index = {s: i for i, s in enumerate(rows)}

    M_B = np.zeros((N, n))
    for j, t in enumerate(cols):
        for f, sign in facets(t):
            M_B[row_index[f] * n + j, j] = sign / math.sqrt(d + 1)

    degrees = np.zeros(m)
    for j, t in enumerate(cols):
        for f, _ in facets(t):
            degrees[row_index[f]] += weights[j]
    kept = [i for i in range(m) if degrees[i] > 0]
    excluded = tuple(rows[i] for i in range(m) if degrees[i] == 0)
    M_C = np.zeros((N, len(kept)))
    col_of = {i: k for k, i in enumerate(kept)}
    for j, t in enumerate(cols):
        for f, _ in facets(t):
            i = row_index[f]
            M_C[i * n + j, col_of[i]] = math.sqrt(weights[j] / degrees[i])

    R_B = 2 * M_B @ M_B.T - np.eye(N)
    R_C = 2 * M_C @ M_C.T - np.eye(N)
    U = R_C @ R_B
    try:
        T, Z, sdim = la.schur(U.astype(complex), output='complex',
                              sort=lambda z: abs(z + 1) < 1e-7)
    except la.LinAlgError as e:
        raise NumericError('Schur decomposition of the walk failed: {}'.format(e)) from e
    eigenvalues = np.diag(T)
    minus = Z[:, :sdim]
    V = np.real(M_B.T @ (2 * minus @ minus.conj().T - np.eye(N)) @ M_B)

    A = program.operator()
    reflection, nullity = _kernel_reflection(A)
    product = M_C.T @ M_B
    singular = la.svdvals(product) if product.size else np.zeros(0)

    norm = laplacian(K, d - 1, 'normalized-up', exclude_zero_degree=True)
    gap = spectrum(norm).gap
    if gap is None:
        raise DomainError('normalized up Laplacian has no nonzero eigenvalue')
    sigma_min = math.sqrt(gap / (d + 1))

    report = VerificationReport('walk d={}'.format(d))
    tol = 1e-8
    rank = int(np.sum(singular > tol))
    report.add('kernel', n - rank == nullity,
               'nullity {} vs {}'.format(n - rank, nullity))
    report.add('closed-form', np.allclose(
        product, (boundary_matrix(K, d).dense()[kept, :] / np.sqrt(degrees[kept])[:, None])
        * np.sqrt(weights) / math.sqrt(d + 1), atol=1e-12))
    predicted = _predicted_phases(singular, n, len(kept), N)
    if predicted.shape == (N,):
        residual = float(np.max(np.abs(np.sort(predicted) - _phase_multiset(eigenvalues))))
    else:
        residual = math.inf
    report.add('phases', residual <= PHASE_TOL,
               '{} eigenphases, residual {:.3g}'.format(N, residual))
    report.add('reflection', la.norm(V - reflection, 2) <= tol,
               '|V - R_ker| = {:.3g}'.format(la.norm(V - reflection, 2)))
    phases = np.angle(-eigenvalues)
    nonzero = np.abs(phases[np.abs(phases) > PHASE_TOL])
    phase_gap = float(nonzero.min()) if nonzero.size else math.pi
    report.add('phase-gap', phase_gap >= 2 * sigma_min - PHASE_TOL,
               '{:.6g} vs 2 sigma_min {:.6g}'.format(phase_gap, 2 * sigma_min))
    if not report.passed:
        raise NumericError('walk operator failed {}'.format(
            [c.name for c in report.checks if not c.passed]))
    logger.debug('walk on %d dimensions, sigma_min %.6g', N, sigma_min)
    return SpanSimWorkspace(program, M_B, M_C, U, np.angle(eigenvalues), V, excluded,
                            gap, sigma_min, residual, report)


def _predicted_phases(singular, n_b, n_c, N, tol=1e-9):
    '''
    Eigenphases of R_C R_B from the singular values s of M_C^T M_B: a pair
    +-2 arccos(s) for each s strictly between 0 and 1, phase pi once per
    zero singular direction on either side, phase 0 for the rest.
    '''
    s = np.asarray(singular)
    inner = s[(s > tol) & (s < 1 - tol)]
    rank = int(np.sum(s > tol))
    zero_b, zero_c = n_b - rank, n_c - rank
    plus = N - 2 * inner.size - zero_b - zero_c
    angles = 2 * np.arccos(np.clip(inner, -1.0, 1.0))
    return np.concatenate([angles, -angles, np.full(zero_b + zero_c, math.pi),
                           np.zeros(max(plus, 0))])


# ---- initial state ----

@dataclass
class InitialState:
    w0: np.ndarray
    resistance: Fraction
    extended_norm2: Fraction
    amplification_rounds: int

    @property
    def norm2(self):
        return float(np.dot(self.w0, self.w0))


def prepare_initial_state(K, gamma):
    '''
    w0 = A^+ gamma, of squared norm R(gamma). Appending gamma itself as an
    extra column gives a state of squared norm R / (R + 1), amplified in
    ceil(sqrt(R) + sqrt(1/R)) rounds.
    '''
    result = effective_resistance(K, gamma)
    if not result.finite:
        raise DomainError('gamma does not bound, no initial state')
    R = result.resistance
    d = gamma.dim + 1
    scale = [math.sqrt(float(w)) for w in K.weights(d)]
    w0 = np.array([float(result.flow[s]) / c for s, c in zip(K.simplices(d), scale)])
    rows = K.simplices(d - 1)
    b = gamma.to_vector(rows)
    columns = boundary_columns(K, d) + [{i: v for i, v in enumerate(b) if v}]
    extended = linalg.min_energy_solution(columns, len(rows), b, K.weights(d) + [Fraction(1)])
    if extended is None:
        raise NumericError('extended system has no solution')
    rounds = math.ceil(math.sqrt(float(R)) + math.sqrt(1 / float(R))) if R else 0
    return InitialState(w0, R, extended[1], rounds)


# ---- evaluation ----

def fejer(phi, M):
    '''
    Probability that phase estimation with M steps reads 0 on an
    eigenvector of phase phi.
    '''
    phi = np.asarray(phi, dtype=float)
    half = np.sin(phi / 2)
    out = np.ones_like(phi)
    away = np.abs(half) > 1e-12
    out[away] = np.sin(M * phi[away] / 2) ** 2 / (M * M * half[away] ** 2)
    return out


@dataclass
class EvaluationResult:
    decision: bool
    acceptance: float
    threshold: float
    tally: QueryTally

    def to_dict(self):
        return {'decision': self.decision, 'acceptance': self.acceptance,
                'threshold': self.threshold, 'tally': self.tally.to_dict()}


def simulate_evaluation(program, x, error_budget=0.01, seed=None, bounds=None, workspace=None):
    '''
    Decide whether gamma bounds in K(x).

    Phase estimation of U = R_H(x) R_ker(A) on w0 / |w0| with M = 2^t steps,
    M >= 4 pi W- sqrt(W+) |w0|, reads phase 0 with probability at least
    1 / (W- |w0|^2) on negative inputs and at most a quarter of that on
    positive ones. The estimate is repeated until a threshold halfway
    between separates the two with error at most ``error_budget``.
    '''
    x = program.check_input(x)
    if not 0 < error_budget < 1:
        raise DomainError('error budget must lie in (0, 1)')
    tally = QueryTally()
    if program.gamma.is_zero():
        return EvaluationResult(True, 0.0, 0.0, tally)
    state = prepare_initial_state(program.K, program.gamma)
    if bounds is None:
        bounds = witness_bounds(program)
    if not bounds.negative or bounds.positive is None:
        raise DomainError('witness bounds must be positive, got ({}, {})'.format(
            bounds.positive, bounds.negative))
    W_plus, W_minus = float(bounds.positive), float(bounds.negative)
    norm = math.sqrt(state.norm2)

    if workspace is not None:
        V, per_reflection = workspace.V, workspace.walk_calls_per_reflection
    else:
        V, _ = _kernel_reflection(program.operator())
        d = program.d
        gap = spectrum(laplacian(program.K, d - 1, 'normalized-up',
                                 exclude_zero_degree=True)).gap
        per_reflection = math.ceil(math.sqrt((d + 1) / gap)) if gap else 0

    U = np.diag(2.0 * np.array(x) - 1.0) @ V
    try:
        T, Z = la.schur(U.astype(complex), output='complex')
    except la.LinAlgError as e:
        raise NumericError('Schur decomposition of U(x) failed: {}'.format(e)) from e
    phases = np.angle(np.diag(T))
    weights = np.abs(Z.conj().T @ (state.w0 / norm)) ** 2

    target = 4 * math.pi * W_minus * math.sqrt(W_plus) * norm
    bits = max(0, math.ceil(math.log2(max(target, 1.0))))
    if bits > MAX_PRECISION_BITS:
        raise ResourceError('phase estimation needs {} bits, cap is {}'.format(
            bits, MAX_PRECISION_BITS))
    M = 2 ** bits
    acceptance = float(np.clip(np.sum(weights * fejer(phases, M)), 0.0, 1.0))
    theta = 1.0 / (2 * W_minus * state.norm2)
    repetitions = math.ceil(6 * math.log(1 / error_budget) / theta)
    rng = np.random.default_rng(seed)
    hits = int(rng.binomial(repetitions, acceptance))
    decision = hits < theta * repetitions

    steps = repetitions * (M - 1)
    d = program.d
    d_max = max((len(program.K.cofaces(s)) for s in program.K.simplices(d - 1)), default=0)
    tally.input_queries = steps * QUERIES_PER_REFLECTION
    tally.walk_calls = steps * per_reflection
    tally.incidence_queries = tally.walk_calls * (math.ceil(math.sqrt(d)) + math.ceil(math.sqrt(d_max)))
    tally.amplification_rounds = state.amplification_rounds * repetitions
    tally.repetitions = repetitions
    tally.precision_bits = bits
    space = program.K.n(d - 1) * program.K.n(d)
    tally.qubits = math.ceil(math.log2(max(space, 2))) + bits
    tally.query_bound = bounds.query_bound
    logger.debug('p0=%.4g threshold=%.4g over %d repetitions -> %s',
                 acceptance, theta, repetitions, 'positive' if decision else 'negative')
    return EvaluationResult(decision, acceptance, theta, tally)


class SpanSimTester:
    '''
    Null-homology tester for the incremental algorithm. The simplex being
    added is rebuilt from the vertices of gamma; the program runs on the
    prefix plus that simplex with its bit off.
    '''

    name = 'span-sim'

    def __init__(self, error_budget=1e-6, seed=0, bounds=None):
        self.error_budget = error_budget
        self.bounds = bounds
        self.rng = np.random.default_rng(seed)
        self.invocations = 0
        self.queries = 0

    def __call__(self, prefix, gamma):
        self.invocations += 1
        if gamma.is_zero():
            return True
        sigma = tuple(sorted({v for s in gamma.support() for v in s}))
        ambient = prefix.with_simplices([sigma])
        program = build_span_program(ambient, gamma)
        x = [0 if s == sigma else 1 for s in program.simplices]
        result = simulate_evaluation(program, x, self.error_budget,
                                     seed=int(self.rng.integers(2 ** 32)), bounds=self.bounds)
        self.queries += result.tally.input_queries
        return result.decision
