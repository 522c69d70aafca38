#!/usr/bin/env python
# -*- coding: utf-8 -*-

""" univariate score models G_A(.|s)

a score model gives the conditional law of a customer's score for a dish
whose latent weight is s. Each model knows its nonzero probability
pi_A(s), how to sample scores (optionally conditioned to be nonzero) and
the likelihood factor h of an observed score.

Methods that take the weight also accept its complement ``sc = 1 - s``,
which the quadrature layer supplies without cancellation near s = 1.

"""
import numpy as np
from scipy.special import gammaln
import traitlets as trait

from genibp.errors import DomainError, ConfigurationError, ResourceError
from genibp.calculus.quadrature import settings


class ScoreModel(trait.HasTraits):
    """ base class of the univariate score models

    models are values: two models of the same kind with the same
    parameters compare (and hash) equal

    """
    kind = 'ScoreModel'
    support = 'UnitInterval'

    def _get_params(self):
        return {name: getattr(self, name) for name in sorted(self.trait_names())}
    params = property(_get_params)

    def to_dict(self):
        """ json-ready description, e.g. {'kind': 'Poisson', 'b': 1.0} """
        out = {'kind': self.kind}
        out.update(self.params)
        return out

    def __eq__(self, other):
        return isinstance(other, ScoreModel) and self.to_dict() == other.to_dict()

    def __hash__(self):
        return hash(tuple(sorted(self.to_dict().items())))

    def __repr__(self):
        args = ','.join('{0}={1!r}'.format(k, v) for k, v in sorted(self.params.items()))
        return '{0}({1})'.format(self.kind, args)

    def check(self, s):
        """ raise DomainError unless every s lies strictly inside the support """
        s = np.asarray(s, dtype=float)
        upper = 1. if self.support == 'UnitInterval' else np.inf
        if not np.all((s > 0) & (s < upper)):
            raise DomainError('{0} requires weights strictly inside {1}, got {2}'.format(
                self.kind, self.support, s))

    @staticmethod
    def _complement(s, sc):
        return 1. - np.asarray(s, dtype=float) if sc is None else sc

    def log_zero_mass(self, s, sc=None):
        """ log(1 - pi_A(s)) """
        raise NotImplementedError

    def pi_nonzero(self, s, sc=None):
        """ pi_A(s) = P(A != 0 | s) """
        return -np.expm1(self.log_zero_mass(s, sc))

    def log_pi_nonzero(self, s, sc=None):
        return np.log(self.pi_nonzero(s, sc))

    def logpmf(self, a, s, sc=None):
        raise NotImplementedError

    def pmf(self, a, s, sc=None):
        return np.exp(self.logpmf(a, s, sc))

    def mean(self, s, sc=None):
        """ E[A | s] """
        raise NotImplementedError

    def sample(self, s, rng, size=None):
        raise NotImplementedError

    def sample_nonzero(self, s, rng):
        raise NotImplementedError

    def log_h_factor(self, a, s, sc=None):
        """ log of [G_A(a|s)/(1-pi_A(s))] for a != 0, and 0 for a == 0 """
        raise NotImplementedError

    def log_h_product(self, scores, s, sc=None):
        """ sum of log_h_factor over the scores of one dish

        Examples
        --------
        >>> model = NegBinomial(r=2)
        >>> scores = [1, 0, 3]
        >>> total = model.log_h_product(scores, 0.25)
        >>> bool(abs(total - model.log_constant(scores) - 4 * np.log(0.25)) < 1e-12)
        True
        >>> pattern = model.logpmf(np.array([1, 3]), 0.25).sum() - 2 * model.log_zero_mass(0.25)
        >>> bool(abs(total - pattern) < 1e-12)
        True

        """
        total = 0.
        for a in scores:
            if a != 0:
                total = total + self.log_h_factor(a, s, sc)
        return total

    def log_constant(self, scores):
        """ log of the weight-free part of the h product """
        return 0.

    def _invert(self, p1, ratio, rng):
        """ sequential inversion of a pmf on {1,2,...} given P(1) and
        the ratio P(j+1)/P(j) as a function of j """
        u = rng.random()
        j, p = 1, p1
        cum = p
        cap = settings().max_iterations
        while cum < u:
            p *= ratio(j)
            j += 1
            if p == 0.:
                break
            cum += p
            if j > cap:
                raise ResourceError('truncated {0} inversion exceeded {1} steps'.format(self.kind, cap))
        return j

    def _reject(self, s, rng):
        cap = settings().max_iterations
        for _ in range(cap):
            x = int(self.sample(s, rng))
            if x != 0:
                return x
        raise ResourceError('truncated {0} rejection exceeded {1} draws'.format(self.kind, cap))


class Bernoulli(ScoreModel):
    """ Bernoulli(s) scores

    Examples
    --------
    >>> model = Bernoulli()
    >>> model.pi_nonzero(0.3)
    0.3
    >>> print('{:.6f}'.format(model.log_h_factor(1, 0.25)))
    -1.098612
    >>> model.log_h_factor(0, 0.25)
    0.0
    >>> model.sample_nonzero(0.01, np.random.default_rng(0))
    1
    >>> try:
    ...     model.pi_nonzero(1.)
    ... except DomainError as err:
    ...     print('domain error')
    domain error

    """
    kind = 'Bernoulli'
    support = 'UnitInterval'

    def log_zero_mass(self, s, sc=None):
        if sc is None:
            self.check(s)
        return np.log(self._complement(s, sc))

    def pi_nonzero(self, s, sc=None):
        if sc is None:
            self.check(s)
        return s

    def log_pi_nonzero(self, s, sc=None):
        if sc is None:
            self.check(s)
        return np.log(s)

    def logpmf(self, a, s, sc=None):
        if sc is None:
            self.check(s)
        a = np.asarray(a)
        sc = self._complement(s, sc)
        with np.errstate(divide='ignore'):
            out = np.where(a == 1, np.log(s), np.log(sc))
        return np.where((a == 0) | (a == 1), out, -np.inf)

    def mean(self, s, sc=None):
        return s

    def sample(self, s, rng, size=None):
        return (rng.random(size) < s).astype(int) if size is not None else int(rng.random() < s)

    def sample_nonzero(self, s, rng):
        self.check(s)
        return 1

    def log_h_factor(self, a, s, sc=None):
        if sc is None:
            self.check(s)
        if a == 0:
            return 0.
        if a != 1:
            return -np.inf
        return np.log(s) - np.log(self._complement(s, sc))


class Poisson(ScoreModel):
    """ Poisson(b s) scores

    Examples
    --------
    >>> model = Poisson(b=1)
    >>> print('{:.6f}'.format(model.pi_nonzero(np.log(2))))
    0.500000
    >>> print('{:.6f}'.format(Poisson(b=2).log_h_factor(3, 0.5)))
    -1.791759
    >>> Poisson(b=0)
    Traceback (most recent call last):
     ...
    traitlets.traitlets.TraitError: Poisson rate b must be positive and finite, got 0.0

    """
    kind = 'Poisson'
    support = 'PositiveHalfLine'
    b = trait.CFloat(1., help='scale of the Poisson mean b*s')

    @trait.validate('b')
    def _valid_b(self, proposal):
        if not (np.isfinite(proposal['value']) and proposal['value'] > 0):
            raise trait.TraitError('Poisson rate b must be positive and finite, got {0}'.format(proposal['value']))
        return proposal['value']

    def log_zero_mass(self, s, sc=None):
        if sc is None:
            self.check(s)
        return -self.b * np.asarray(s, dtype=float)

    def log_pi_nonzero(self, s, sc=None):
        if sc is None:
            self.check(s)
        return np.log(-np.expm1(-self.b * np.asarray(s, dtype=float)))

    def logpmf(self, a, s, sc=None):
        if sc is None:
            self.check(s)
        a = np.asarray(a, dtype=float)
        lam = self.b * np.asarray(s, dtype=float)
        with np.errstate(divide='ignore', invalid='ignore'):
            out = np.where(a == 0, -lam, a * np.log(lam) - lam - gammaln(a + 1))
        return np.where(a >= 0, out, -np.inf)

    def mean(self, s, sc=None):
        return self.b * s

    def sample(self, s, rng, size=None):
        out = rng.poisson(self.b * s, size)
        return out if size is not None else int(out)

    def sample_nonzero(self, s, rng):
        self.check(s)
        lam = self.b * s
        if lam >= np.log(2.):
            return self._reject(s, rng)
        return self._invert(lam / np.expm1(lam), lambda j: lam / (j + 1.), rng)

    def log_h_factor(self, a, s, sc=None):
        if sc is None:
            self.check(s)
        if a == 0:
            return 0.
        return a * np.log(self.b * s) - gammaln(a + 1.)

    def log_constant(self, scores):
        return float(sum(a * np.log(self.b) - gammaln(a + 1.) for a in scores if a != 0))


class NegBinomial(ScoreModel):
    """ negative binomial scores with pmf C(a+r-1, a) s^a (1-s)^r

    Examples
    --------
    >>> model = NegBinomial(r=2)
    >>> print('{:.6f}'.format(model.pi_nonzero(0.5)))
    0.750000
    >>> print('{:.6f}'.format(model.pmf(0, 0.5) + model.pi_nonzero(0.5)))
    1.000000

    truncated to {1,2,...} with r=1 the scores are geometric

    >>> geom = NegBinomial(r=1)
    >>> print('{:.6f}'.format(geom.pmf(3, 0.5) / geom.pi_nonzero(0.5)))
    0.125000

    """
    kind = 'NegBinomial'
    support = 'UnitInterval'
    r = trait.CFloat(1., help='number of successes r > 0')

    @trait.validate('r')
    def _valid_r(self, proposal):
        if not (np.isfinite(proposal['value']) and proposal['value'] > 0):
            raise trait.TraitError('negative binomial r must be positive and finite, got {0}'.format(proposal['value']))
        return proposal['value']

    def log_zero_mass(self, s, sc=None):
        if sc is None:
            self.check(s)
        return self.r * np.log(self._complement(s, sc))

    def logpmf(self, a, s, sc=None):
        if sc is None:
            self.check(s)
        a = np.asarray(a, dtype=float)
        r = self.r
        sc = self._complement(s, sc)
        with np.errstate(divide='ignore', invalid='ignore'):
            out = (gammaln(a + r) - gammaln(r) - gammaln(a + 1)
                   + np.where(a == 0, 0., a * np.log(s)) + r * np.log(sc))
        return np.where(a >= 0, out, -np.inf)

    def mean(self, s, sc=None):
        return self.r * s / self._complement(s, sc)

    def sample(self, s, rng, size=None):
        out = rng.negative_binomial(self.r, 1. - s, size)
        return out if size is not None else int(out)

    def sample_nonzero(self, s, rng):
        self.check(s)
        r = self.r
        zero = np.exp(r * np.log1p(-s))
        if zero <= 0.5:
            return self._reject(s, rng)
        p1 = r * s * zero / -np.expm1(r * np.log1p(-s))
        return self._invert(p1, lambda j: s * (j + r) / (j + 1.), rng)

    def log_h_factor(self, a, s, sc=None):
        if sc is None:
            self.check(s)
        if a == 0:
            return 0.
        r = self.r
        return gammaln(a + r) - gammaln(r) - gammaln(a + 1.) + a * np.log(s)

    def log_constant(self, scores):
        r = self.r
        return float(sum(gammaln(a + r) - gammaln(r) - gammaln(a + 1.) for a in scores if a != 0))


SCORE_KINDS = {
    'Bernoulli': Bernoulli,
    'Poisson': Poisson,
    'NegBinomial': NegBinomial,
}


def score_from_dict(data):
    """ build a score model from its json description

    Examples
    --------
    >>> score_from_dict({'kind': 'NegBinomial', 'r': 3})
    NegBinomial(r=3.0)

    """
    data = dict(data)
    kind = data.pop('kind', None)
    if kind not in SCORE_KINDS:
        raise ConfigurationError('unknown score model kind: {0}'.format(kind))
    try:
        return SCORE_KINDS[kind](**data)
    except trait.TraitError as err:
        raise ConfigurationError(str(err))


def pi_nonzero(model, s):
    """ pi_A(s) = P(A != 0 | s)

    Examples
    --------
    >>> pi_nonzero(Bernoulli(), 0.3)
    0.3
    >>> print('{:.6f}'.format(pi_nonzero(NegBinomial(r=2), 0.5)))
    0.750000

    """
    return float(model.pi_nonzero(s))


def sample_score(model, s, rng):
    """ one draw from G_A(.|s)

    Examples
    --------
    >>> rng = np.random.default_rng(1)
    >>> draws = [sample_score(Poisson(b=2), 0.5, rng) for i in range(20000)]
    >>> bool(abs(np.mean(draws) - 1.0) < 3 * np.sqrt(1.0 / 20000))
    True

    """
    model.check(s)
    return model.sample(s, rng)


def sample_nonzero_score(model, s, rng):
    """ one draw from G_A(.|s) conditioned on A != 0

    Examples
    --------
    >>> rng = np.random.default_rng(2)
    >>> draws = np.array([sample_nonzero_score(Poisson(b=1), np.log(2), rng) for i in range(20000)])
    >>> bool(draws.min() >= 1)
    True
    >>> bool(abs(np.mean(draws == 1) - np.log(2)) < 3 * np.sqrt(0.25 / 20000))
    True

    below log 2 the Poisson draws come from sequential inversion

    >>> lam = 0.25
    >>> draws = np.array([sample_nonzero_score(Poisson(b=1), lam, rng) for i in range(20000)])
    >>> p1 = lam * np.exp(-lam) / -np.expm1(-lam)
    >>> bool(abs(np.mean(draws == 1) - p1) < 4 * np.sqrt(p1 * (1 - p1) / 20000))
    True
    >>> bool(abs(np.mean(draws == 2) - p1 * lam / 2) < 4 * np.sqrt(0.25 / 20000))
    True

    """
    return model.sample_nonzero(s, rng)


def log_h_factor(model, a, s):
    """ log likelihood factor of one observed score

    Examples
    --------
    >>> log_h_factor(Bernoulli(), 0, 0.4)
    0.0
    >>> print('{:.6f}'.format(log_h_factor(Poisson(b=2), 3, 0.5)))
    -1.791759

    """
    return float(model.log_h_factor(a, s))
