#!/usr/bin/env python
# -*- coding: utf-8 -*-

"""generalized Indian buffet processes: exact sequential sampling,
posterior structure and marginal likelihoods for latent feature models
driven by completely random measures

"""

__version__ = '0.1.0'

from genibp import errors
from genibp import utils
from genibp import models
from genibp import calculus
from genibp import buffet
from genibp import posterior
from genibp import verify


def _run_tests(doctests=True, verbose=True):
    """
    mimics pytest --doctest-modules -v genibp
    """
    import os, genibp, pytest
    argv = ['genibp']
    if verbose:
        argv.append('-v')
    if doctests:
        argv.append('--doctest-modules')
    initial_dir = os.getcwd()
    my_package_dir = os.path.dirname(os.path.dirname(os.path.abspath(genibp.__file__)))
    os.chdir(my_package_dir)
    try:
        return pytest.main(argv)
    finally:
        os.chdir(initial_dir)
