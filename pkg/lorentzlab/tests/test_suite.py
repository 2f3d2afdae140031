import numpy as np
import pandas as pd
import pytest

from .. import util
from ..exceptions import DomainError
from ..lab import suite as lab_suite
from ..lab.checks import CheckReport
from ..lab.suite import DEFAULT_SETTINGS, Suite, check_settings, load_suite

small_settings = {
    'holder_pairs': ((2, 2), (2, 'inf')),
    'holder_trials': 20,
    'holder_cells': 10,
    'general_holder_trials': 20,
    'p_grid': (2, 3),
    'alpha_grid': (1,),
    'n_grid': (2,),
    'q_grid': (2, 'inf'),
    'ac_k_max': 6,
    'morrey_pairs': 200,
    'morrey_pq': ((2, 2),),
    'morrey_cells': 128,
}


def test_check_settings():
    settings = check_settings({'seed': 3, 'holder_trials': None})
    assert settings['seed'] == 3
    assert settings['holder_trials'] == DEFAULT_SETTINGS['holder_trials']
    assert set(settings) == set(DEFAULT_SETTINGS)
    with pytest.raises(DomainError):
        check_settings({'holder_trails': 5})


def test_unknown_suite():
    with pytest.raises(DomainError):
        Suite('bogus')


def test_jobs_get_streams_and_seeds(monkeypatch):
    monkeypatch.delenv(util.SEED_ENV_VAR, raising=False)
    jobs = Suite('holder', dict(small_settings, seed=9)).jobs()
    assert len(jobs) == len(small_settings['holder_pairs']) + 2
    random_jobs = [kwargs for _, func, kwargs in jobs if func in lab_suite.RANDOM_JOBS]
    assert [kwargs['seed'] for kwargs in random_jobs] == [9] * len(random_jobs)
    assert len({kwargs['stream'] for kwargs in random_jobs}) == len(random_jobs)
    monkeypatch.setenv(util.SEED_ENV_VAR, '5')
    jobs = Suite('holder', dict(small_settings, seed=9)).jobs()
    assert jobs[0][2]['seed'] == 5


def test_distance_job_takes_no_quadrature():
    jobs = Suite('ac', small_settings).jobs()
    kwargs = {func: kwargs for _, func, kwargs in jobs}
    assert 'quad' not in kwargs[lab_suite.distance_job]
    assert 'quad' in kwargs[lab_suite.ac_job]


@pytest.mark.parametrize("name", ['holder', 'equivalence', 'inclusion', 'ac', 'morrey1d', 'poincare'])
def test_small_suite_passes(name):
    suite = Suite(name, small_settings).run()
    counts = suite.counts()
    assert counts['FAIL'] == 0, [report.to_dict() for report in suite.failures]
    assert counts['PASS'] > 0
    keys = [report.sort_key() for report in suite.reports]
    assert keys == sorted(keys)
    assert isinstance(suite.summary, pd.DataFrame)
    assert len(suite.summary) == len(suite.reports)


def test_suite_is_deterministic(monkeypatch):
    monkeypatch.delenv(util.SEED_ENV_VAR, raising=False)
    first = Suite('holder', small_settings).run().summary
    second = Suite('holder', small_settings).run().summary
    pd.testing.assert_frame_equal(first, second)
    other = Suite('holder', dict(small_settings, seed=1)).run().summary
    holder_rows = first['check_id'] == 'holder'
    assert not np.array_equal(first.loc[holder_rows, 'lhs'].values,
                              other.loc[other['check_id'] == 'holder', 'lhs'].values)


def test_parallel_matches_serial():
    settings = dict(small_settings, holder_pairs=((2, 2),))
    serial = Suite('holder', settings).run().summary
    parallel = Suite('holder', settings, n_jobs=2, parallel=True).run().summary
    pd.testing.assert_frame_equal(serial, parallel)


def test_save_and_load(tmp_path):
    suite = Suite('inclusion', small_settings).run()
    path = tmp_path / 'inclusion.pkl'
    suite.save(str(path))
    loaded = load_suite(str(path))
    assert loaded.name == 'inclusion'
    assert util.stable_json(loaded.reports) == util.stable_json(suite.reports)
    util.save_object(CheckReport.predicate('x', {}, True), str(path))
    with pytest.raises(DomainError):
        load_suite(str(path))
