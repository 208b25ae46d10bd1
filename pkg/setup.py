#!/usr/bin/env python
from setuptools import setup, find_packages

setup(
    name='homolab',
    version='0.1.0',
    description='Homology, Laplacian spectra and effective resistance of simplicial complexes, '
                'with datajoint schemas for the results',
    author='homolab developers',
    packages=find_packages(exclude=['tests']),
    install_requires=['datajoint>=0.12', 'numpy', 'scipy', 'sympy>=1.12', 'networkx>=3.0'],
    extras_require={'test': ['pytest']},
    entry_points={'console_scripts': ['homolab=homolab.cli:main']},
    scripts=['scripts/ingestion.py'],
)
