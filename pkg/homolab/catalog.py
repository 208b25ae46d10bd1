'''
Schema of stored complexes and the quantities computed on them.
'''
import logging

import datajoint as dj

from . import reference, settings
from .betti import incremental_betti
from .complex import SimplicialComplex, build_complex
from .flow import effective_capacitance, effective_resistance
from .io import chain_from_dict, chain_to_dict, format_value, parse_key, simplex_key
from .spectra import laplacian, spectrum

logger = logging.getLogger(__name__)

schema = dj.schema(settings.schema_prefix + '_catalog')


@schema
class Complex(dj.Manual):
    definition = """ # a weighted simplicial complex, generated or read from a file
    complex_name: varchar(64)
    ---
    -> reference.Family
    family_d=null:          tinyint
    family_n=null:          smallint
    dim:                    tinyint
    counts:                 blob        # n_d for d = 0..dim
    maximal_simplices:      longblob
    subcomplex=null:        longblob    # maximal simplices of L for a pair L in K
    gamma=null:             longblob    # designated cycle, {"dim", "coefficients"}
    """

    class Weight(dj.Part):
        definition = """
        -> master
        simplex:    varchar(255)    # comma-joined vertex ids
        ---
        weight:     varchar(64)     # exact rational p/q
        """

    @classmethod
    def insert_complex(cls, name, K, family='file', d=None, n=None, gamma=None, L=None):
        cls.insert1({
            'complex_name': name,
            'family': family,
            'family_d': d,
            'family_n': n,
            'dim': K.dim,
            'counts': K.counts(),
            'maximal_simplices': [list(s) for s in K.maximal_simplices()],
            'subcomplex': None if L is None else [list(s) for s in L.maximal_simplices()],
            'gamma': None if gamma is None else chain_to_dict(gamma),
        }, skip_duplicates=True)
        cls.Weight.insert(({'complex_name': name, 'simplex': simplex_key(s), 'weight': str(w)}
                           for s, w in K.weight_map().items()), skip_duplicates=True)

    @classmethod
    def insert_family(cls, family):
        name = '{}_{}_{}'.format(family.name, family.d, family.n)
        cls.insert_complex(name, family.K, family.name, family.d, family.n,
                           family.gamma, family.L)
        return name

    @staticmethod
    def load(key):
        '''(K, L, gamma) of one stored complex; L and gamma may be None.'''
        simplices, sub, gamma = (Complex & key).fetch1('maximal_simplices', 'subcomplex', 'gamma')
        weights = dict(zip(*(Complex.Weight & key).fetch('simplex', 'weight')))
        K = build_complex(simplices, {parse_key(s): w for s, w in weights.items()})
        L = None
        if sub is not None:
            kept = set(build_complex(sub).all_simplices())
            L = SimplicialComplex(kept, {s: w for s, w in K.weight_map().items() if s in kept})
        return K, L, None if gamma is None else chain_from_dict(gamma)


@schema
class BettiNumber(dj.Computed):
    definition = """
    -> Complex
    -> reference.Tester
    betti_dim:      tinyint
    ---
    betti:          int
    invocations:    int         # tester calls
    queries=null:   bigint      # input-oracle queries, simulated testers only
    """

    key_source = Complex * (reference.Tester & 'tester like "classical%"')

    def make(self, key):
        K, _, _ = Complex.load(key)
        for d in range(K.dim + 1):
            run = incremental_betti(K, d, tester=key['tester'])
            self.insert1(dict(key, betti_dim=d, betti=run.betti,
                              invocations=run.invocations, queries=run.queries))


@schema
class SpectralGap(dj.Computed):
    definition = """
    -> Complex
    -> reference.LaplacianKind
    laplacian_dim:              tinyint
    ---
    lambda_min=null:            double      # smallest nonzero eigenvalue
    lambda_max=null:            double
    harmonic_dimension:         int
    """

    key_source = Complex * (reference.LaplacianKind & 'laplacian_kind in ("up", "combinatorial")')

    def make(self, key):
        K, _, _ = Complex.load(key)
        for d in range(K.dim + 1):
            report = spectrum(laplacian(K, d, key['laplacian_kind']))
            self.insert1(dict(key, laplacian_dim=d, lambda_min=report.gap,
                              lambda_max=report.lambda_max,
                              harmonic_dimension=report.harmonic_dimension))


@schema
class BoundaryResistance(dj.Computed):
    definition = """ # resistance of the designated cycle, and its capacitance for pairs
    -> Complex
    ---
    resistance:             varchar(255)    # exact p/q, or inf
    resistance_float:       double
    capacitance=null:       varchar(255)
    """

    key_source = Complex & 'gamma is not null'

    def make(self, key):
        K, L, gamma = Complex.load(key)
        R = effective_resistance(K, gamma).resistance
        key.update(resistance=format_value(R), resistance_float=float(R))
        if L is not None:
            key['capacitance'] = format_value(effective_capacitance(L, K, gamma).capacitance)
        logger.info('%s: R = %s', key['complex_name'], key['resistance'])
        self.insert1(key)
