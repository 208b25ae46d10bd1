'''
JSON formats for complexes, chains and reports.

A complex file holds ``maximal_simplices``, optional ``weights`` keyed by
comma-joined vertex ids, and optional ``voids``. A chain is
``{"dim": d, "coefficients": {"0,1": "1", ...}}``. Rationals are written as
``p/q`` strings, floats with 12 significant digits.
'''
import csv
import json
import logging
import math
from fractions import Fraction

import numpy as np

from .complex import Chain, SimplicialComplex, build_complex
from .errors import MalformedInputError
from .flow import INFINITY

logger = logging.getLogger(__name__)

FLOAT_FORMAT = '{:.12g}'


def simplex_key(s):
    return ','.join(str(v) for v in s)


def parse_key(key):
    try:
        return tuple(int(v) for v in str(key).split(','))
    except ValueError:
        raise MalformedInputError('bad simplex key {!r}'.format(key)) from None


def parse_scalar(value):
    if isinstance(value, bool):
        raise MalformedInputError('bad coefficient {!r}'.format(value))
    try:
        if isinstance(value, float):
            return Fraction(str(value))
        return Fraction(value)
    except (TypeError, ValueError, ZeroDivisionError):
        raise MalformedInputError('bad coefficient {!r}'.format(value)) from None


def format_value(value):
    '''
    JSON-ready form of a computed value: Fractions as ``p/q``, floats with 12
    significant digits, INFINITY as ``"inf"``; containers recursively.
    '''
    if value is INFINITY:
        return 'inf'
    if isinstance(value, bool) or value is None or isinstance(value, str):
        return value
    if isinstance(value, Fraction):
        return str(value)
    if isinstance(value, (int, np.integer)):
        return int(value)
    if isinstance(value, (float, np.floating)):
        value = float(value)
        if math.isinf(value) or math.isnan(value):
            return str(value)
        return FLOAT_FORMAT.format(value)
    if isinstance(value, Chain):
        return chain_to_dict(value)
    if isinstance(value, SimplicialComplex):
        return complex_to_dict(value)
    if isinstance(value, dict):
        return {str(k): format_value(v) for k, v in value.items()}
    if isinstance(value, (list, tuple, np.ndarray)):
        return [format_value(v) for v in value]
    if hasattr(value, 'to_dict'):
        return format_value(value.to_dict())
    raise MalformedInputError('cannot serialize {!r}'.format(type(value).__name__))


# ---- complexes ----

def complex_from_dict(data):
    if not isinstance(data, dict) or 'maximal_simplices' not in data:
        raise MalformedInputError('complex needs a maximal_simplices list')
    simplices = data['maximal_simplices']
    if not isinstance(simplices, list) or not all(isinstance(s, list) for s in simplices):
        raise MalformedInputError('maximal_simplices must be a list of vertex lists')
    weights = {parse_key(k): parse_scalar(v) for k, v in (data.get('weights') or {}).items()}
    return build_complex(simplices, weights)


def complex_to_dict(K, voids=None):
    out = {'maximal_simplices': [list(s) for s in K.maximal_simplices()]}
    weights = K.weight_map()
    if weights:
        out['weights'] = {simplex_key(s): str(w) for s, w in sorted(weights.items())}
    if voids:
        out['voids'] = [chain_to_dict(v)['coefficients'] for v in voids]
    return out


def voids_from_dict(data, d):
    return [chain_from_dict({'dim': d, 'coefficients': v}) for v in data.get('voids') or []]


# ---- chains ----

def chain_from_dict(data):
    if not isinstance(data, dict) or 'coefficients' not in data:
        raise MalformedInputError('chain needs a coefficients map')
    terms = {parse_key(k): parse_scalar(v) for k, v in data['coefficients'].items()}
    if 'dim' in data:
        dim = int(data['dim'])
    elif terms:
        dim = len(next(iter(terms))) - 1
    else:
        raise MalformedInputError('empty chain needs an explicit dim')
    return Chain(dim, terms)


def chain_to_dict(chain):
    return {'dim': chain.dim,
            'coefficients': {simplex_key(s): format_value(c) for s, c in chain.items()}}


# ---- files ----

def read_json(path):
    try:
        with open(path) as f:
            return json.load(f)
    except json.JSONDecodeError as e:
        raise MalformedInputError('{} is not valid JSON: {}'.format(path, e)) from e


def load_complex(path):
    data = read_json(path)
    K = complex_from_dict(data)
    logger.info('loaded %s with counts %s', path, K.counts())
    return K, data


def load_chain(path):
    return chain_from_dict(read_json(path))


def dumps(report):
    return json.dumps(format_value(report), indent=2, sort_keys=True) + '\n'


def write_report(report, path=None):
    '''Write a report as JSON, to stdout when ``path`` is None.'''
    text = dumps(report)
    if path is None:
        print(text, end='')
    else:
        with open(path, 'w') as f:
            f.write(text)
    return text


def write_csv(rows, path, columns=None):
    columns = columns or (list(rows[0]) if rows else [])
    with open(path, 'w', newline='') as f:
        writer = csv.DictWriter(f, fieldnames=columns)
        writer.writeheader()
        for row in rows:
            writer.writerow({k: format_value(row.get(k)) for k in columns})


def family_to_dict(family):
    '''A generated family as a complex file with its cycle and provenance.'''
    out = complex_to_dict(family.K)
    out['gamma'] = chain_to_dict(family.gamma)
    out['gamma_norm2'] = str(family.norm2)
    out['provenance'] = family.provenance
    if family.L is not None:
        out['subcomplex'] = complex_to_dict(family.L)
    out['certificates'] = {
        name: [chain_to_dict(x) for x in c] if isinstance(c, list) else chain_to_dict(c)
        for name, c in family.certificates.items()}
    return out
