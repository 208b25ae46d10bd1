'''
This script generates the worst-case families, stores them in the catalog and
computes their Betti numbers, spectral gaps and resistances.
'''

import sys

from homolab import catalog
from homolab.families import capacitance_family, many_small, resistance_family

max_n = int(sys.argv[1]) if len(sys.argv) > 1 else 4

# generate the families
print('Generating families...')
names = []
for d in (2, 3):
    for n in range(1, max_n + 1):
        if d == 3 and n > 2:
            continue
        names.append(catalog.Complex.insert_family(resistance_family(d, n)))
        names.append(catalog.Complex.insert_family(capacitance_family(d, n)))
names.append(catalog.Complex.insert_family(many_small(2, 1, copies=4)))
print('{} complexes in the catalog'.format(len(catalog.Complex())))

# populate computed tables
print('Computing Betti numbers...')
catalog.BettiNumber.populate(display_progress=True)

print('Computing spectral gaps...')
catalog.SpectralGap.populate(display_progress=True)

print('Computing resistances and capacitances...')
catalog.BoundaryResistance.populate(display_progress=True)
