#!/usr/bin/env python
# -*- coding: utf-8 -*-

""" posterior laws of observed dish weights J

closed-form laws wrap a frozen scipy distribution; the generic law is an
inverse-CDF table over the unnormalized log-density
``M log(1 - pi_A(s)) + sum log h(a_n|s) + log rho(s)``.

Examples
--------

>>> law = BetaJump(2, 2)
>>> print('{:.6f}'.format(law.mean()))
0.500000
>>> law.to_dict()
{'kind': 'Beta', 'params': {'a': 2.0, 'b': 2.0}}

"""
import numpy as np
from scipy import stats
from scipy.special import betaln

from genibp.calculus.quadrature import InverseCDFTable, integrate

# weights drawn on (0,1) stay strictly inside it
_TINY, _BELOW_ONE = np.nextafter(0., 1.), np.nextafter(1., 0.)


class JumpLaw(object):
    """ a univariate law of a dish weight """
    kind = 'JumpLaw'
    support = 'UnitInterval'

    def sample(self, rng, size=None):
        raise NotImplementedError

    def mean(self):
        raise NotImplementedError

    def logpdf(self, s, sc=None):
        raise NotImplementedError

    def normalization(self):
        """ integral of the density over the support, 1 up to quadrature error """
        return integrate(lambda s, sc: np.exp(self.logpdf(s, sc)), self.support,
                         what='{0} jump density'.format(self.kind))

    def params(self):
        return {}

    def to_dict(self):
        return {'kind': self.kind, 'params': self.params()}

    def __repr__(self):
        args = ','.join('{0}={1!r}'.format(k, v) for k, v in sorted(self.params().items()))
        return '{0}Jump({1})'.format(self.kind, args)


class _ScipyJump(JumpLaw):

    def sample(self, rng, size=None):
        out = self.dist.rvs(size=size, random_state=rng)
        return float(out) if size is None else out

    def mean(self):
        return float(self.dist.mean())


class BetaJump(_ScipyJump):
    """ J ~ Beta(a, b) on (0,1)

    Examples
    --------
    >>> law = BetaJump(1.5, 2.5)
    >>> print('{:.8f}'.format(law.normalization()))
    1.00000000

    """
    kind = 'Beta'
    support = 'UnitInterval'

    def __init__(self, a, b):
        assert a > 0 and b > 0, 'beta jump parameters must be positive, got ({0}, {1})'.format(a, b)
        self.a, self.b = float(a), float(b)
        self.dist = stats.beta(self.a, self.b)

    def sample(self, rng, size=None):
        out = np.clip(self.dist.rvs(size=size, random_state=rng), _TINY, _BELOW_ONE)
        return float(out) if size is None else out

    def logpdf(self, s, sc=None):
        s = np.asarray(s, dtype=float)
        sc = 1. - s if sc is None else sc
        return (self.a - 1.) * np.log(s) + (self.b - 1.) * np.log(sc) - betaln(self.a, self.b)

    def params(self):
        return {'a': self.a, 'b': self.b}


class ScaledGammaJump(_ScipyJump):
    """ rate * J ~ Gamma(shape, 1) on (0, inf)

    Examples
    --------
    >>> law = ScaledGammaJump(4, 4)
    >>> print('{:.6f}'.format(law.mean()))
    1.000000

    """
    kind = 'ScaledGamma'
    support = 'PositiveHalfLine'

    def __init__(self, shape, rate):
        assert shape > 0 and rate > 0, 'gamma jump parameters must be positive, got ({0}, {1})'.format(shape, rate)
        self.shape, self.rate = float(shape), float(rate)
        self.dist = stats.gamma(self.shape, scale=1. / self.rate)

    def logpdf(self, s, sc=None):
        return self.dist.logpdf(s)

    def params(self):
        return {'shape': self.shape, 'rate': self.rate}


class QuadratureJump(JumpLaw):
    """ tabulated jump law of an unnormalized log-density

    Properties
    ----------
    logfunc : callable
        vectorized unnormalized log-density of (s, 1-s)
    support : str
    label : dict
        the description written to json (prior, score, scores, M)

    Examples
    --------
    >>> law = QuadratureJump(lambda s, sc: np.log(s) + np.log(sc), 'UnitInterval')
    >>> print('{:.6f}'.format(law.mean()))
    0.500000

    """
    kind = 'Quadrature'

    def __init__(self, logfunc, support, label=None):
        self.support = support
        self.label = label or {}
        self.table = InverseCDFTable(logfunc, support)
        self._logfunc = logfunc
        self._mean = None

    def logpdf(self, s, sc=None):
        s = np.asarray(s, dtype=float)
        sc = 1. - s if sc is None else sc
        return self._logfunc(s, sc) - self.table.log_total

    def sample(self, rng, size=None):
        return self.table.sample(rng, size)

    def mean(self):
        if self._mean is None:
            logpdf = self.logpdf
            self._mean = float(integrate(lambda s, sc: s * np.exp(logpdf(s, sc)), self.support,
                                         what='jump mean'))
        return self._mean

    def params(self):
        return dict(self.label)
