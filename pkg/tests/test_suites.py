import pytest

from homolab.errors import UsageError
from homolab.suites import SUITES, run_suite


@pytest.mark.parametrize('name, options', [
    ('flow', {'count': 6, 'directions': 3, 'capacitance_cases': 1}),
    ('chain-maps', {'max_dim': 2}),
    ('snf', {'count': 20}),
    ('betti', {'count': 5}),
    ('families', {'max_n': 3}),
    ('walk', {}),
])
def test_fast_suites(name, options):
    report = run_suite(name, **options)
    assert report.checks
    assert report.passed, [c for c in report.checks if not c.passed]


@pytest.mark.slow
@pytest.mark.parametrize('name', ['witness', 'evaluation', 'families', 'gap-transfer', 'collapse'])
def test_full_suites(name):
    assert run_suite(name).passed


def test_unknown_suite():
    with pytest.raises(UsageError):
        run_suite('everything')


def test_suite_names():
    assert {'betti', 'flow', 'snf', 'duality', 'walk'} <= set(SUITES)
