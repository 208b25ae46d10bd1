'''
Schema of lookup values shared by the catalog.
'''
import datajoint as dj

from . import settings
from .betti import TESTERS
from .spectra import KINDS

dj.config.update(settings.database_config())
schema = dj.schema(settings.schema_prefix + '_reference')


@schema
class Family(dj.Lookup):
    definition = """
    family: varchar(8)
    ---
    family_description: varchar(128)
    """
    contents = [
        ['B', 'resistance family: stacked building blocks closed by sigma x 0'],
        ['PQ', 'capacitance pair: P inside Q, Q holding sigma x 0'],
        ['M', 'disjoint copies of the resistance family'],
        ['file', 'complex read from a JSON file']
    ]


@schema
class LaplacianKind(dj.Lookup):
    definition = """
    laplacian_kind: varchar(16)
    """
    contents = zip(KINDS)


@schema
class Tester(dj.Lookup):
    definition = """
    tester: varchar(16)     # null-homology tester of the incremental algorithm
    """
    contents = zip(TESTERS)
