import json
import logging
import math

import numpy as np
import pytest

from .. import util
from ..foundations import INFINITY
from ..norms import Divergence, NormValue


@pytest.mark.parametrize("x,expected", [(0.5, '0.5'), (2.0, '2'), (math.sqrt(2), '1.41421356237'),
                                        (math.inf, 'inf'), (-math.inf, '-inf')])
def test_format_number(x, expected):
    assert util.format_number(x) == expected


def test_resolve_seed(monkeypatch):
    monkeypatch.delenv(util.SEED_ENV_VAR, raising=False)
    assert util.resolve_seed() == 0
    assert util.resolve_seed(7) == 7
    monkeypatch.setenv(util.SEED_ENV_VAR, '11')
    assert util.resolve_seed(7) == 11
    monkeypatch.setenv(util.SEED_ENV_VAR, 'eleven')
    with pytest.raises(ValueError):
        util.resolve_seed(7)


def test_to_jsonable():
    obj = {'a': (1, np.float64(0.5)), 'b': np.array([1.0, np.inf]), 'c': math.nan,
           'd': Divergence.HEAD_DIVERGENCE, 'e': np.int64(3), 'f': np.bool_(True), 2: None}
    assert util.to_jsonable(obj) == {'a': [1, 0.5], 'b': [1.0, 'inf'], 'c': 'nan',
                                     'd': 'HEAD_DIVERGENCE', 'e': 3, 'f': True, '2': None}
    assert util.to_jsonable(NormValue.finite(2.0)) == {'finite': 2.0}
    assert util.to_jsonable(NormValue.infinite(Divergence.TAIL_DIVERGENCE)) == {'infinite': 'TAIL_DIVERGENCE'}
    assert util.to_jsonable(float(INFINITY)) == 'inf'


def test_stable_json_sorts_keys():
    text = util.stable_json({'b': 1, 'a': {'d': 2, 'c': 3}})
    assert text == '{"a": {"c": 3, "d": 2}, "b": 1}'
    assert json.loads(util.stable_json([math.inf])) == ['inf']


def test_save_and_load_closure(tmp_path):
    scale = 3.0
    path = str(tmp_path / 'closure.pkl')
    util.save_object(lambda x: scale * x, path)
    assert util.load_object(path)(2.0) == 6.0


def test_custom_logger(tmp_path):
    log_file = str(tmp_path / 'lab.log')
    logger = util.custom_logger('lorentzlab.test_util', level=logging.INFO, log_file=log_file)
    again = util.custom_logger('lorentzlab.test_util', level=logging.INFO, log_file=log_file)
    assert logger is again
    assert len([h for h in logger.handlers if isinstance(h, logging.FileHandler)]) == 1
    logger.info('hello from the lab')
    for handler in logger.handlers:
        handler.flush()
    text = open(log_file).read()
    assert 'INFO: hello from the lab' in text
    for handler in list(logger.handlers):
        handler.close()
        logger.removeHandler(handler)
