'''
Runtime configuration read from the environment.
'''
import os

from .errors import UsageError


def _read(name, cast, default):
    raw = os.environ.get(name)
    if raw is None or raw == '':
        return default
    try:
        value = cast(raw)
    except ValueError:
        raise UsageError('{} must be a {}, got {!r}'.format(
            name, cast.__name__, raw)) from None
    if value <= 0:
        raise UsageError('{} must be positive, got {!r}'.format(name, raw))
    return value


threads = _read('HOMOLAB_THREADS', int, os.cpu_count() or 1)
zero_tol = _read('HOMOLAB_ZERO_TOL', float, 1e-9)
span_cap = _read('HOMOLAB_SPAN_CAP', int, 4096)
eigen_cap = _read('HOMOLAB_EIGEN_CAP', int, 2000)
exact_columns = _read('HOMOLAB_EXACT_COLUMNS', int, 400)
max_simplices = _read('HOMOLAB_MAX_SIMPLICES', int, 20000)
schema_prefix = os.environ.get('HOMOLAB_SCHEMA_PREFIX', 'homolab')

# submatrix count below which torsion maxima are enumerated exhaustively
exhaustive_submatrices = _read('HOMOLAB_EXHAUSTIVE_SUBMATRICES', int, 50000)

# largest n_d for which witness-size maxima are taken over every bitstring
exhaustive_witness_simplices = 10


def database_config():
    return {
        'database.host': os.environ.get('DJ_HOST', 'localhost'),
        'database.user': os.environ.get('DJ_USER', 'root'),
        'database.password': os.environ.get('DJ_PASS', ''),
    }
