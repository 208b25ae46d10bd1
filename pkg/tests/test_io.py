import json
from fractions import Fraction

import numpy as np
import pytest

from homolab.complex import Chain
from homolab.errors import MalformedInputError
from homolab.families import capacitance_family
from homolab.flow import INFINITY
from homolab.io import (chain_from_dict, chain_to_dict, complex_from_dict, complex_to_dict,
                        dumps, family_to_dict, format_value, load_complex, parse_key,
                        parse_scalar, read_json, write_csv, write_report)


def test_format_value():
    assert format_value(INFINITY) == 'inf'
    assert format_value(Fraction(3, 4)) == '3/4'
    assert format_value(1 / 3) == '0.333333333333'
    assert format_value(np.int64(3)) == 3
    assert format_value({'a': [Fraction(1, 2), None, True]}) == {'a': ['1/2', None, True]}


def test_format_value_rejects_objects():
    with pytest.raises(MalformedInputError):
        format_value(object())


def test_parse_scalar():
    assert parse_scalar('1/2') == Fraction(1, 2)
    assert parse_scalar(0.25) == Fraction(1, 4)
    assert parse_scalar(3) == 3
    for bad in (True, 'x', '1/0', None):
        with pytest.raises(MalformedInputError):
            parse_scalar(bad)


def test_parse_key():
    assert parse_key('0,1,2') == (0, 1, 2)
    with pytest.raises(MalformedInputError):
        parse_key('a,b')


def test_complex_dict(triangle):
    K = complex_from_dict({'maximal_simplices': [[0, 1, 2]], 'weights': {'0,1': '1/2'}})
    assert K.counts() == triangle.counts()
    assert K.weight((0, 1)) == Fraction(1, 2)
    assert complex_to_dict(K) == {'maximal_simplices': [[0, 1, 2]], 'weights': {'0,1': '1/2'}}


@pytest.mark.parametrize('data', [[], {}, {'maximal_simplices': [1, 2]}])
def test_malformed_complex(data):
    with pytest.raises(MalformedInputError):
        complex_from_dict(data)


def test_chain_dict(face_boundary):
    data = chain_to_dict(face_boundary)
    assert data == {'dim': 1, 'coefficients': {'0,1': '1', '0,2': '-1', '1,2': '1'}}
    assert chain_from_dict({'coefficients': data['coefficients']}) == face_boundary
    assert chain_from_dict({'dim': 1, 'coefficients': {}}) == Chain.zero(1)


def test_malformed_chain():
    with pytest.raises(MalformedInputError):
        chain_from_dict({'coefficients': {}})
    with pytest.raises(MalformedInputError):
        chain_from_dict({'dim': 1})
    with pytest.raises(MalformedInputError):
        chain_from_dict({'coefficients': {'0,1': '1', '0,1,2': '1'}})


def test_read_json(tmp_path):
    good = tmp_path / 'good.json'
    good.write_text(json.dumps({'maximal_simplices': [[0, 1], [1, 2]]}))
    K, data = load_complex(str(good))
    assert K.counts() == [3, 2]
    assert 'maximal_simplices' in data
    bad = tmp_path / 'bad.json'
    bad.write_text('{"maximal_simplices": ')
    with pytest.raises(MalformedInputError):
        read_json(str(bad))


def test_dumps_is_sorted():
    text = dumps({'b': 1, 'a': Fraction(1, 3)})
    assert text.index('"a"') < text.index('"b"')
    assert '"1/3"' in text


def test_write_report(tmp_path, capsys):
    path = tmp_path / 'report.json'
    text = write_report({'value': INFINITY}, str(path))
    assert path.read_text() == text
    write_report({'value': 1})
    assert json.loads(capsys.readouterr().out) == {'value': 1}


def test_write_csv(tmp_path):
    path = tmp_path / 'rows.csv'
    write_csv([{'n': 1, 'ratio': None}, {'n': 2, 'ratio': Fraction(4)}], str(path), ['n', 'ratio'])
    assert path.read_text().splitlines() == ['n,ratio', '1,', '2,4']


def test_family_to_dict():
    data = family_to_dict(capacitance_family(2, 1))
    assert {'maximal_simplices', 'gamma', 'gamma_norm2', 'provenance',
            'subcomplex', 'certificates'} <= set(data)
    assert complex_from_dict(data['subcomplex']).is_subcomplex_of(complex_from_dict(data))
