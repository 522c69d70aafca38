#!/usr/bin/env python
# -*- coding: utf-8 -*-

""" exceptions raised across genibp

each maps to one CLI exit code (see genibp.cli.app.EXIT_CODES)

Examples
--------

>>> issubclass(DomainError, ValueError)
True
>>> err = ExplosivityError('E[Z] is infinite', diagnosis='beta <= 1')
>>> err.diagnosis
'beta <= 1'

"""


class IBPError(Exception):
    """ base class for genibp errors """


class DomainError(IBPError, ValueError):
    """ an argument lies outside the support of a density or score model """


class ConfigurationError(IBPError, ValueError):
    """ invalid or mutually incompatible parameters """


class ValidationError(IBPError, ValueError):
    """ a feature matrix is malformed or incompatible with its model

    Properties
    ----------
    offending : list
        the offending entries, as strings

    """
    def __init__(self, message, offending=()):
        self.offending = list(offending)
        if self.offending:
            message = '{0}: {1}'.format(message, '; '.join(self.offending))
        super(ValidationError, self).__init__(message)


class ExplosivityError(IBPError, ArithmeticError):
    """ a required integral diverges

    Properties
    ----------
    diagnosis : str
        why the integral was judged divergent

    """
    def __init__(self, message, diagnosis=''):
        self.diagnosis = diagnosis
        super(ExplosivityError, self).__init__(message)


class ResourceError(IBPError, RuntimeError):
    """ an iteration cap or tractability limit was hit """
