import json
import logging
import math
import os
from enum import Enum

import dill as pkl
import numpy as np

SEED_ENV_VAR = 'LORENTZ_LAB_SEED'
LOG_FORMAT = "%(asctime)s - %(levelname)s: %(message)s"


def custom_logger(logger_name, level=logging.DEBUG, log_file=None):
    """
    Creates (or fetches) a logger with the lorentzlab format.

    Parameters
    ----------
    logger_name : str
        Name of the logger, e.g. 'lorentzlab'. Module loggers created with
        logging.getLogger(__name__) inside the package propagate to it.
    level : see logging module for further information
    log_file : str/None
        If given, records are appended to this file, otherwise they go to
        stderr.

    Return
    ------
    logger : logging.Logger
        Logger handle

    Example
    -------
    logger = custom_logger('lorentzlab', log_file='verify.log')
    logger.info('Here is some info written to the file')
    """
    logger = logging.getLogger(logger_name)
    logger.setLevel(level)
    log_format = logging.Formatter(LOG_FORMAT)

    if log_file is not None:
        target = os.path.abspath(log_file)
        for handler in logger.handlers:
            if isinstance(handler, logging.FileHandler) and handler.baseFilename == target:
                return logger
        handler = logging.FileHandler(log_file, mode='a')
    else:
        for handler in logger.handlers:
            if type(handler) is logging.StreamHandler:
                return logger
        handler = logging.StreamHandler()
    handler.setFormatter(log_format)
    logger.addHandler(handler)
    return logger


def resolve_seed(seed=None, env_var=SEED_ENV_VAR):
    ''' The effective random seed. The environment variable wins over the
    argument; without either the seed is 0.'''
    value = os.environ.get(env_var)
    if value not in (None, ''):
        try:
            return int(value)
        except ValueError:
            msg = f'{env_var}={value!r} is not an integer seed'
            raise ValueError(msg) from None
    if seed is None:
        return 0
    return int(seed)


def format_number(x, digits=12):
    ''' Print a real with the given number of significant digits ('inf' for
    infinities).'''
    x = float(x)
    if math.isinf(x):
        return 'inf' if x > 0 else '-inf'
    return f'{x:.{digits}g}'


def to_jsonable(obj):
    ''' Convert nested results into plain JSON types.

    Objects with a ``to_json`` or ``to_dict`` method are converted through it,
    numpy scalars and arrays become Python numbers and lists, non-finite
    floats become the strings 'inf', '-inf' and 'nan' and enums their value.
    '''
    if hasattr(obj, 'to_json'):
        return to_jsonable(obj.to_json())
    if hasattr(obj, 'to_dict'):
        return to_jsonable(obj.to_dict())
    if isinstance(obj, Enum):
        return obj.value
    if isinstance(obj, dict):
        return {str(k): to_jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return [to_jsonable(v) for v in obj.tolist()]
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        obj = float(obj)
        if math.isnan(obj):
            return 'nan'
        if math.isinf(obj):
            return 'inf' if obj > 0 else '-inf'
        return obj
    if obj is None or isinstance(obj, str):
        return obj
    return str(obj)


def stable_json(obj, indent=None):
    ''' Deterministic JSON text (sorted keys) of ``obj``.'''
    return json.dumps(to_jsonable(obj), sort_keys=True, indent=indent)


def save_object(obj, file_name):
    ''' Store any object (closures included) with dill.

    Parameters
    ----------
    obj : object
        The object to store.
    file_name : str
        Filename or full path to store the object to.
    '''
    with open(file_name, 'wb') as f:
        pkl.dump(obj, f)


def load_object(file_name):
    with open(file_name, 'rb') as f:
        return pkl.load(f)
