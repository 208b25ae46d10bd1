'''
Exact and simulated computations on weighted simplicial complexes: homology,
Laplacian spectra, effective resistance and capacitance, worst-case families
and a dense simulation of the span-program tester.

The datajoint schemas live in ``homolab.reference`` and ``homolab.catalog``
and are only connected when imported.
'''
__version__ = '0.1.0'

from .complex import Chain, SimplicialComplex, build_complex  # noqa: F401
from .errors import HomolabError  # noqa: F401
