#!/usr/bin/env python
# -*- coding: utf-8 -*-

""" samplers of (H, X) pairs: the weight and nonzero score of a new dish

a customer facing the tilted density rho_M tries Poisson(phi) new dishes,
phi = int pi_A(s) rho_M(s) ds, each with an iid pair where H has density
pi_A(s) rho_M(s) / phi and X | H=s is a score conditioned to be nonzero.
Named pairs sample in closed form, X first where its marginal is known:

==================  ==================================  =========================
sampler             X                                   H | X=j
==================  ==================================  =========================
SibuyaGamma         Sibuya(alpha)                       Gamma(j-alpha, rate b)
GenGammaPair        tilted Sibuya                       Gamma(j-alpha, b+zeta)
LogarithmicGamma    Logarithmic(b/(beta+b))             Gamma(j, beta+b)
BernoulliBeta       1                                   Beta(1-alpha, beta+alpha)
NBBeta              beta-negative-binomial type         Beta(j-alpha, beta+alpha+r)
GenericQuadrature   truncated G_A(.|H)                  inverse-CDF table
==================  ==================================  =========================

Examples
--------

>>> from genibp.models.levy import StablePositive
>>> from genibp.models.scores import Poisson
>>> from genibp.calculus.exponents import tilt
>>> sampler = pair_sampler(tilt(StablePositive(alpha=0.5), Poisson(b=1), 0))
>>> sampler.closed_form
'SibuyaGamma'
>>> print('{:.6f} {:.6f}'.format(sampler.x_pmf(1), sampler.x_pmf(2)))
0.500000 0.125000

"""
from functools import lru_cache

import numpy as np
from scipy import stats
from scipy.special import gammaln, betaln
import traitlets as trait

from genibp.errors import ExplosivityError, ResourceError
from genibp.models.levy import TiltedLevy, is_infinite
from genibp.models.scores import ScoreModel
from genibp.calculus import mapping
from genibp.calculus.exponents import new_dish_rate
from genibp.calculus.quadrature import InverseCDFTable, settings

PAIR_KINDS = ('SibuyaGamma', 'GenGammaPair', 'LogarithmicGamma',
              'BernoulliBeta', 'NBBeta', 'GenericQuadrature')


def invert_logpmf(logpmf, u, start=1):
    """ smallest j >= start whose cumulative mass reaches u

    the pmf is evaluated in geometrically growing chunks

    Examples
    --------
    >>> geometric = lambda j: (j - 1) * np.log(0.5) + np.log(0.5)
    >>> invert_logpmf(geometric, 0.5), invert_logpmf(geometric, 0.6), invert_logpmf(geometric, 0.8)
    (1, 2, 3)

    """
    cap = settings().max_iterations
    cum, lo, size = 0., start, 64
    while lo - start < cap:
        j = np.arange(lo, lo + size, dtype=float)
        with np.errstate(under='ignore'):
            p = np.exp(logpmf(j))
        csum = cum + np.cumsum(p)
        idx = int(np.searchsorted(csum, u, side='left'))
        if idx < size:
            return lo + idx
        if p[-1] == 0.:
            # the remaining mass is below rounding
            return lo + size - 1
        cum = csum[-1]
        lo, size = lo + size, size * 2
    raise ResourceError('discrete inversion exceeded {0} values'.format(cap))


def sibuya_log_survival(alpha, j):
    """ log P(X > j) = log Gamma(j+1-alpha) - log Gamma(1-alpha) - log j! """
    return gammaln(j + 1. - alpha) - gammaln(1. - alpha) - gammaln(j + 1.)


def sibuya_inverse(alpha, u):
    """ Sibuya(alpha) quantile: the smallest j with P(X > j) < u

    exponential search then bisection on the closed survival function

    Examples
    --------
    >>> sibuya_inverse(0.5, 0.6), sibuya_inverse(0.5, 0.4)
    (1, 2)

    """
    logu = np.log(u)
    if sibuya_log_survival(alpha, 1) < logu:
        return 1
    lo, hi = 1, 2
    while sibuya_log_survival(alpha, hi) >= logu:
        lo, hi = hi, hi * 2
        if hi > 2**62:
            raise ResourceError('Sibuya draw beyond 2**62 for u={0!r}'.format(u))
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if sibuya_log_survival(alpha, mid) >= logu:
            lo = mid
        else:
            hi = mid
    return hi


class PairSampler(trait.HasTraits):
    """ base class of the (H, X) samplers

    Properties
    ----------
    tilted : TiltedLevy
        the density rho_M new dishes are drawn from
    score_model : ScoreModel
    closed_form : str
        the sampler tag
    rate : float
        phi, the expected number of new dishes

    """
    tilted = trait.Instance(TiltedLevy)
    score_model = trait.Instance(ScoreModel)
    closed_form = trait.Enum(PAIR_KINDS, default_value='GenericQuadrature', read_only=True)
    rate = trait.Float(read_only=True)

    def __init__(self, **kwargs):
        super(PairSampler, self).__init__(**kwargs)
        rate = new_dish_rate(self.tilted, self.score_model)
        if is_infinite(rate):
            raise ExplosivityError('the new dish rate is infinite; the buffet explodes', diagnosis=rate.reason)
        self.set_trait('rate', rate)
        self._setup()

    def _get_effective(self):
        return self.tilted.reexpressed
    effective = property(_get_effective)

    def _setup(self):
        pass

    def x_logpmf(self, j):
        """ log P(X=j) of the marginal score, where known in closed form """
        raise NotImplementedError('{0} has no closed score marginal'.format(self.closed_form))

    def x_pmf(self, j):
        return float(np.exp(self.x_logpmf(j)))

    def sample_x(self, rng):
        return invert_logpmf(self.x_logpmf, rng.random())

    def sample_h_given_x(self, j, rng):
        raise NotImplementedError

    def sample(self, rng):
        """ one (H, X) pair """
        j = self.sample_x(rng)
        return self.sample_h_given_x(j, rng), j

    def to_dict(self):
        return {'closed_form': self.closed_form, 'rate': self.rate, 'tilted': self.tilted.to_dict()}

    def __repr__(self):
        return '{0}(rate={1!r}, tilted={2!r})'.format(self.closed_form, self.rate, self.tilted)


class SibuyaGamma(PairSampler):
    """ positive stable density with Poisson(b) scores

    Examples
    --------
    >>> from genibp.models.levy import StablePositive
    >>> from genibp.models.scores import Poisson
    >>> from genibp.calculus.exponents import tilt
    >>> sampler = SibuyaGamma(tilted=tilt(StablePositive(alpha=0.5), Poisson(b=4), 0), score_model=Poisson(b=4))
    >>> print('{:.6f}'.format(sampler.rate))
    2.000000
    >>> total = sum(sampler.x_pmf(j) for j in range(1, 2000))
    >>> bool(abs(1 - total - np.exp(sibuya_log_survival(0.5, 1999))) < 1e-9)
    True

    """

    def _setup(self):
        self.set_trait('closed_form', 'SibuyaGamma')
        self.alpha, _ = mapping.gg_family(self.effective)

    def x_logpmf(self, j):
        a = self.alpha
        return np.log(a) + gammaln(j - a) - gammaln(j + 1.) - gammaln(1. - a)

    def sample_x(self, rng):
        return sibuya_inverse(self.alpha, rng.random())

    def sample_h_given_x(self, j, rng):
        return float(rng.gamma(j - self.alpha, 1. / self.score_model.b))


class GenGammaPair(PairSampler):
    """ generalized gamma density GG(alpha, zeta) with Poisson(b) scores

    P(X=j) = (b+zeta)^(alpha-j) b^j alpha Gamma(j-alpha) / (j! Gamma(1-alpha) psi)
    with psi = (b+zeta)^alpha - zeta^alpha

    """

    def _setup(self):
        self.set_trait('closed_form', 'GenGammaPair')
        self.alpha, self.zeta = mapping.gg_family(self.effective)

    def x_logpmf(self, j):
        a, z, b = self.alpha, self.zeta, self.score_model.b
        return (np.log(a) + gammaln(j - a) - gammaln(j + 1.) - gammaln(1. - a)
                + (a - j) * np.log(b + z) + j * np.log(b) - np.log(self.rate))

    def sample_x(self, rng):
        if self.zeta == 0:
            return sibuya_inverse(self.alpha, rng.random())
        return invert_logpmf(self.x_logpmf, rng.random())

    def sample_h_given_x(self, j, rng):
        return float(rng.gamma(j - self.alpha, 1. / (self.score_model.b + self.zeta)))


class LogarithmicGamma(PairSampler):
    """ gamma density Gamma(theta, beta) with Poisson(b) scores

    Examples
    --------
    >>> from genibp.models.levy import GammaProcess
    >>> from genibp.models.scores import Poisson
    >>> from genibp.calculus.exponents import tilt
    >>> sampler = pair_sampler(tilt(GammaProcess(theta=2, beta=1), Poisson(b=1), 0))
    >>> print('{:.12f}'.format(abs(sampler.x_pmf(1) - 1 / (2 * np.log(2)))))
    0.000000000000
    >>> print('{:.6f}'.format(sampler.x_mean()))
    1.442695

    """

    def _setup(self):
        self.set_trait('closed_form', 'LogarithmicGamma')
        b, beta = self.score_model.b, self.effective.beta
        self.p = b / (beta + b)
        self.h_rate = beta + b
        self.dist = stats.logser(self.p)

    def x_logpmf(self, j):
        return self.dist.logpmf(j)

    def x_mean(self):
        return float(self.dist.mean())

    def sample_x(self, rng):
        return int(self.dist.rvs(random_state=rng))

    def sample_h_given_x(self, j, rng):
        return float(rng.gamma(j, 1. / self.h_rate))


class BernoulliBeta(PairSampler):
    """ beta family with Bernoulli scores: X = 1, H ~ Beta(1-alpha, beta+alpha)

    Examples
    --------
    >>> from genibp.models.levy import StableBeta
    >>> from genibp.models.scores import Bernoulli
    >>> from genibp.calculus.exponents import tilt
    >>> sampler = pair_sampler(tilt(StableBeta(theta=1, alpha=0.5, beta=0.5), Bernoulli(), 2))
    >>> sampler.h_params
    (0.5, 3.0)
    >>> sampler.sample(np.random.default_rng(0))[1]
    1

    """

    def _setup(self):
        self.set_trait('closed_form', 'BernoulliBeta')
        theta, alpha, beta = mapping.beta_family(self.effective)
        self.h_params = (1. - alpha, beta + alpha)

    def x_logpmf(self, j):
        return np.where(np.asarray(j) == 1, 0., -np.inf)

    def sample_x(self, rng):
        return 1

    def sample_h_given_x(self, j, rng):
        return float(rng.beta(*self.h_params))


class NBBeta(PairSampler):
    """ beta family with negative binomial scores

    P(X=j) = C(j+r-1, j) theta B(j-alpha, beta+alpha+r) / phi and
    H | X=j ~ Beta(j-alpha, beta+alpha+r). Integer r samples H first from
    the finite beta mixture 1 - (1-s)^r = s sum_k (1-s)^k, then X from the
    truncated score law.

    Examples
    --------
    >>> from genibp.models.levy import BetaProcess
    >>> from genibp.models.scores import NegBinomial
    >>> from genibp.calculus.exponents import tilt
    >>> sampler = pair_sampler(tilt(BetaProcess(theta=1, beta=2), NegBinomial(r=2), 0))
    >>> total = sum(sampler.x_pmf(j) for j in range(1, 20000))
    >>> print('{:.4f}'.format(total))
    1.0000

    """

    def _setup(self):
        self.set_trait('closed_form', 'NBBeta')
        self.theta, self.alpha, self.beta = mapping.beta_family(self.effective)
        r = self.score_model.r
        if r == int(r) and r <= 10**4:
            k = np.arange(int(r))
            logw = betaln(1. - self.alpha, self.beta + self.alpha + k)
            w = np.exp(logw - logw.max())
            self._mixture = w / w.sum()
        else:
            self._mixture = None

    def x_logpmf(self, j):
        r, a, b = self.score_model.r, self.alpha, self.beta
        return (gammaln(j + r) - gammaln(r) - gammaln(j + 1.) + np.log(self.theta)
                + betaln(j - a, b + a + r) - np.log(self.rate))

    def sample(self, rng):
        if self._mixture is None:
            return PairSampler.sample(self, rng)
        k = int(rng.choice(len(self._mixture), p=self._mixture))
        h = float(rng.beta(1. - self.alpha, self.beta + self.alpha + k))
        h = min(max(h, np.nextafter(0., 1.)), np.nextafter(1., 0.))
        return h, self.score_model.sample_nonzero(h, rng)

    def sample_h_given_x(self, j, rng):
        return float(rng.beta(j - self.alpha, self.beta + self.alpha + self.score_model.r))


class GenericQuadrature(PairSampler):
    """ any other pair: H from an inverse-CDF table of pi_A(s) rho_M(s),
    then X from the truncated score law

    Examples
    --------
    >>> from genibp.models.levy import BetaProcess
    >>> from genibp.models.scores import Poisson
    >>> from genibp.calculus.exponents import tilt
    >>> sampler = pair_sampler(tilt(BetaProcess(theta=1, beta=1), Poisson(b=1), 0))
    >>> sampler.closed_form
    'GenericQuadrature'
    >>> h, x = sampler.sample(np.random.default_rng(3))
    >>> bool(0 < h < 1 and x >= 1)
    True

    """

    def _setup(self):
        tilted, score = self.tilted, self.score_model

        def logfunc(s, sc):
            return score.log_pi_nonzero(s, sc) + tilted.log_density(s, sc)
        self.table = InverseCDFTable(logfunc, tilted.support)

    def sample_h(self, rng):
        return self.table.sample(rng)

    def sample(self, rng):
        h = self.sample_h(rng)
        return h, self.score_model.sample_nonzero(h, rng)


@lru_cache(maxsize=256)
def _pair_sampler(tilted, score):
    klass = None
    if tilted.reexpressed is not None:
        klass = mapping.lookup(tilted.reexpressed, score, 'pair')
    if klass is None:
        klass = GenericQuadrature
    return klass(tilted=tilted, score_model=score)


def pair_sampler(tilted, score=None):
    """ the (H, X) sampler of a tilted density, dispatched on its named form

    Raises
    ------
    ExplosivityError
        if the new dish rate is infinite

    """
    score = tilted.score if score is None else score
    return _pair_sampler(tilted, score)


def sample_pair(sampler, rng):
    """ one (H, X) pair

    Examples
    --------
    >>> from genibp.models.levy import GammaProcess
    >>> from genibp.models.scores import Poisson
    >>> from genibp.calculus.exponents import tilt
    >>> sampler = pair_sampler(tilt(GammaProcess(theta=2, beta=1), Poisson(b=1), 3))
    >>> h, x = sample_pair(sampler, np.random.default_rng(5))
    >>> bool(h > 0 and isinstance(x, int) and x >= 1)
    True

    """
    return sampler.sample(rng)
