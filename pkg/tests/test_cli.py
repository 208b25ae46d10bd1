import json

import pytest

from homolab import cli
from homolab.errors import UsageError


@pytest.fixture
def block(tmp_path):
    '''B_2^1 written as a complex file.'''
    path = tmp_path / 'block.json'
    assert cli.main(['generate', '--family', 'Bdn', '--d', '2', '--n', '1', '--out', str(path)]) == 0
    return path


@pytest.fixture
def sphere_file(tmp_path):
    path = tmp_path / 'sphere.json'
    path.write_text(json.dumps({'maximal_simplices': [[0, 1, 2], [0, 1, 3], [0, 2, 3], [1, 2, 3]]}))
    return path


def report_of(path):
    return json.loads(path.read_text())['report']


def test_plan():
    plan = cli.parse_and_validate(['generate', '--family', 'Bdn', '--d', '2', '--n', '1'])
    assert plan.command == 'generate'
    assert plan.out is None
    assert plan.to_dict() == {'command': 'generate', 'options': {'family': 'Bdn', 'd': 2, 'n': 1}}


@pytest.mark.parametrize('argv', [
    [],
    ['frobnicate'],
    ['generate', '--family', 'Bdn', '--d', '0', '--n', '1'],
    ['generate', '--family', 'PQ', '--d', '2', '--n', '1', '--copies', '3'],
    ['span-sim', '--input', 'x.json', '--x', '0102'],
])
def test_usage_errors(argv):
    with pytest.raises(UsageError):
        cli.parse_and_validate(argv)


def test_negative_dimension(sphere_file):
    with pytest.raises(UsageError, match='--dim'):
        cli.parse_and_validate(['betti', '--input', str(sphere_file), '--dim', '-1'])


def test_missing_input(tmp_path):
    with pytest.raises(UsageError, match='--input'):
        cli.parse_and_validate(['betti', '--input', str(tmp_path / 'none.json'), '--dim', '1'])


def test_generate(block):
    data = json.loads(block.read_text())
    assert data['provenance'] == {'family': 'B', 'd': 2, 'n': 1}
    assert data['gamma']['dim'] == 1
    assert data['gamma_norm2'] == '3'


def test_resistance(block, tmp_path):
    out = tmp_path / 'r.json'
    assert cli.main(['resistance', '--input', str(block), '--out', str(out)]) == 0
    assert report_of(out)['resistance'] == '13'


@pytest.mark.parametrize('method', ['incremental', 'reduction', 'hodge'])
def test_betti(sphere_file, tmp_path, method):
    out = tmp_path / 'b.json'
    argv = ['betti', '--input', str(sphere_file), '--dim', '2', '--method', method, '--out', str(out)]
    assert cli.main(argv) == 0
    assert report_of(out)['betti'] == 1


def test_errors_exit_with_one(sphere_file, capsys):
    assert cli.main(['resistance', '--input', str(sphere_file)]) == 1
    assert 'UsageError' in capsys.readouterr().err


def test_failed_report_exits_with_two(monkeypatch, tmp_path):
    monkeypatch.setitem(cli.HANDLERS, 'verify', lambda opts: {'passed': False})
    assert cli.main(['verify', '--suite', 'flow', '--out', str(tmp_path / 'v.json')]) == 2


def test_verify(tmp_path):
    out = tmp_path / 'v.json'
    assert cli.main(['verify', '--suite', 'walk', '--out', str(out)]) == 0
    assert report_of(out)['passed'] is True


def test_reports_are_deterministic(sphere_file, tmp_path):
    texts = []
    for i in range(2):
        out = tmp_path / 'gap{}.json'.format(i)
        cli.main(['spectral-gap', '--input', str(sphere_file), '--dim', '1', '--kind', 'up',
                  '--out', str(out)])
        texts.append(out.read_text())
    assert texts[0] == texts[1]


def test_sweep(tmp_path):
    out, table = tmp_path / 's.json', tmp_path / 's.csv'
    argv = ['sweep', '--family', 'Bdn', '--n-max', '2', '--csv', str(table), '--out', str(out)]
    assert cli.main(argv) == 0
    rows = report_of(out)['rows']
    assert [row['resistance'] for row in rows] == ['13/3', '61/3']
    assert rows[1]['ratio'] == '61/13'
    assert table.read_text().splitlines()[0] == 'n,simplices,lambda_min,resistance,capacitance,ratio'


def test_unwritable_output_exits_with_one(tmp_path, capsys):
    out = tmp_path / 'missing' / 'b.json'
    argv = ['generate', '--family', 'Bdn', '--d', '2', '--n', '1', '--out', str(out)]
    assert cli.main(argv) == 1
    assert 'FileNotFoundError' in capsys.readouterr().err


def test_snf_bounds_are_seeded_by_default(block, tmp_path):
    texts = []
    for i in range(2):
        out = tmp_path / 'snf{}.json'.format(i)
        assert cli.main(['snf', '--input', str(block), '--dim', '2', '--samples', '20',
                         '--out', str(out)]) == 0
        texts.append(out.read_text())
    assert texts[0] == texts[1]
