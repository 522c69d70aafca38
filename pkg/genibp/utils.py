#!/usr/bin/env python
# -*- coding: utf-8 -*-

import os, inspect
import importlib
import re
import json
from functools import reduce
import builtins

import numpy as np

#: format used for floats written to text (CSV and table output)
FLOAT_FORMAT = '%.17g'


def get_data_path(data, module, check_exists=True):
    """return a directory path to data within a module

    data : str or list of str
        file name or list of sub-directories and file name (e.g. ['schemas','report.json'])

    Examples
    --------
    >>> import genibp.cli
    >>> os.path.basename(get_data_path(['schemas', 'feature_matrix.json'], genibp.cli))
    'feature_matrix.json'

    """
    basepath = os.path.dirname(os.path.abspath(inspect.getfile(module)))

    if isinstance(data, str): data = [data]

    dirpath = os.path.join(basepath, *data)

    if check_exists:
        assert os.path.exists(dirpath), '{0} does not exist'.format(dirpath)

    return dirpath


def load_json(data, module):
    """ load a json document shipped within a module """
    with open(get_data_path(data, module)) as f:
        return json.load(f)


def str_to_obj(class_str):
    """ get object from string

    creates object from string of module,
    but without using unsecure eval operator

    Properties
    ----------
    class_str : str
        a string of an object

    Examples
    --------

    >>> print(str_to_obj('float')(2))
    2.0

    >>> print(str_to_obj('math.sqrt')(4.0))
    2.0

    >>> str_to_obj('genibp.errors.DomainError').__name__
    'DomainError'

    """

    # first try builtins like float, int, ...
    try:
        return reduce(getattr, class_str.split("."), builtins)
    except AttributeError:
        pass

    parts = class_str.split(".")
    # longest importable module prefix, then attribute lookup
    for i in range(len(parts), 0, -1):
        try:
            module = importlib.import_module('.'.join(parts[:i]))
        except ImportError:
            continue
        return reduce(getattr, parts[i:], module)

    raise ImportError('could not resolve {0}'.format(class_str))


def obj_to_str(obj):
    """ get class string from object

    Examples
    --------

    >>> print(obj_to_str([1,2,3]).split('.')[-1])
    list

    >>> import numpy as np
    >>> print(obj_to_str(np.array([1,2,3])))
    numpy.ndarray

    """
    mod_str = obj.__class__.__module__
    name_str = obj.__class__.__name__
    if mod_str == '__main__':
        return name_str
    else:
        return '.'.join([mod_str, name_str])


def _atoi(text):
    return int(text) if text.isdigit() else text
def _natural_keys(text):
    return [text] if isinstance(text, float) else [_atoi(c) for c in re.split(r'(\d+)', str(text))]
def natural_sort(iterable):
    """human order sorting of number strings

    used for the customer keys of json feature matrices

    Examples
    --------

    >>> sorted(['10','1', '2'])
    ['1', '10', '2']

    >>> natural_sort(['10','1', '2'])
    ['1', '2', '10']

    """
    return sorted(iterable, key=_natural_keys)


def make_rng(seed, *key):
    """ a counter-based random stream derived from a seed and a spawn key

    streams with different keys are statistically independent and
    the same (seed, key) always reproduces the same stream

    Examples
    --------

    >>> a = make_rng(7, 3, 1).random()
    >>> b = make_rng(7, 3, 1).random()
    >>> a == b
    True
    >>> make_rng(7, 3, 2).random() == a
    False

    """
    seq = np.random.SeedSequence(seed, spawn_key=tuple(int(k) for k in key))
    return np.random.Generator(np.random.Philox(seq))

