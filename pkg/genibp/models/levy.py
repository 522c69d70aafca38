#!/usr/bin/env python
# -*- coding: utf-8 -*-

""" homogeneous Lévy densities rho(s) and their tilted families

named kinds carry their parameters as traits and evaluate in closed form;
``Custom`` wraps a user callback (or the transform of another density).
Log-densities take the weight s and, optionally, its complement
``sc = 1 - s`` so that unit-interval densities stay accurate near 1.

Examples
--------

>>> print("{:.6f}".format(eval_density(BetaProcess(theta=1, beta=1), 0.5)))
2.000000
>>> print('{:.6f}'.format(eval_density(GammaProcess(theta=1, beta=1), 1.)))
0.367879

"""
import numpy as np
from scipy.special import gammaln
import traitlets as trait

from genibp.errors import DomainError, ConfigurationError
from genibp.models.scores import ScoreModel

SUPPORTS = ('UnitInterval', 'PositiveHalfLine')


class Infinite(object):
    """ in-band marker for a divergent rate or mean

    Examples
    --------
    >>> flag = Infinite('beta <= 1')
    >>> flag
    Infinite('beta <= 1')
    >>> is_infinite(flag), is_infinite(2.0)
    (True, False)

    """
    def __init__(self, reason=''):
        self.reason = reason

    def __repr__(self):
        return 'Infinite({0!r})'.format(self.reason)

    def __eq__(self, other):
        return isinstance(other, Infinite)

    def __hash__(self):
        return hash('Infinite')

    def to_dict(self):
        return {'finite': False, 'reason': self.reason}


def is_infinite(value):
    return isinstance(value, Infinite)


def _positive(name, value):
    if not (np.isfinite(value) and value > 0):
        raise trait.TraitError('{0} must be positive and finite, got {1}'.format(name, value))
    return value


def _complement(s, sc):
    return 1. - np.asarray(s, dtype=float) if sc is None else sc


class LevyDensity(trait.HasTraits):
    """ base class of the Lévy densities

    parameters are the traits tagged ``param=True``; densities are values,
    so equal kinds with equal parameters compare (and hash) equal

    """
    kind = 'LevyDensity'
    support = 'UnitInterval'

    def _get_params(self):
        return {name: getattr(self, name) for name in sorted(self.trait_names(param=True))}
    params = property(_get_params)

    def to_dict(self):
        """ json-ready description {kind, params, support} """
        return {'kind': self.kind, 'params': self.params, 'support': self.support}

    def __eq__(self, other):
        return isinstance(other, LevyDensity) and self.to_dict() == other.to_dict()

    def __hash__(self):
        return hash((self.kind, self.support, tuple(sorted(self.params.items()))))

    def __repr__(self):
        args = ','.join('{0}={1!r}'.format(k, v) for k, v in sorted(self.params.items()))
        return '{0}({1})'.format(self.kind, args)

    def check(self, s):
        """ raise DomainError unless every s lies strictly inside the support """
        s = np.asarray(s, dtype=float)
        upper = 1. if self.support == 'UnitInterval' else np.inf
        if not np.all((s > 0) & (s < upper)):
            raise DomainError('{0} is defined on the open {1}, got s={2}'.format(
                self.kind, self.support, s))

    def log_density(self, s, sc=None):
        raise NotImplementedError

    def density(self, s, sc=None):
        """ rho(s), vectorized """
        if sc is None:
            self.check(s)
        with np.errstate(over='ignore'):
            return np.exp(self.log_density(s, sc))


class BetaProcess(LevyDensity):
    """ rho(s) = theta s^-1 (1-s)^(beta-1) on (0,1)

    Examples
    --------
    >>> BetaProcess(theta=2, beta=3)
    BetaProcess(beta=3.0,theta=2.0)
    >>> BetaProcess(theta=-1)
    Traceback (most recent call last):
     ...
    traitlets.traitlets.TraitError: theta must be positive and finite, got -1.0

    """
    kind = 'BetaProcess'
    support = 'UnitInterval'
    theta = trait.CFloat(1., help='mass parameter').tag(param=True)
    beta = trait.CFloat(1., help='concentration parameter').tag(param=True)

    @trait.validate('theta', 'beta')
    def _valid_positive(self, proposal):
        return _positive(proposal['trait'].name, proposal['value'])

    def log_density(self, s, sc=None):
        s = np.asarray(s, dtype=float)
        return np.log(self.theta) - np.log(s) + (self.beta - 1.) * np.log(_complement(s, sc))


class StableBeta(LevyDensity):
    """ rho(s) = theta s^(-alpha-1) (1-s)^(beta+alpha-1) on (0,1)

    with alpha=0 it is the beta process with the same theta and beta

    Examples
    --------
    >>> s = np.linspace(0.05, 0.95, 19)
    >>> bool(np.allclose(StableBeta(theta=2, alpha=0, beta=1).density(s),
    ...                  BetaProcess(theta=2, beta=1).density(s), rtol=1e-14))
    True
    >>> StableBeta(theta=1, alpha=0.5, beta=-0.6)
    Traceback (most recent call last):
     ...
    traitlets.traitlets.TraitError: stable-beta requires beta + alpha > 0, got beta=-0.6, alpha=0.5

    """
    kind = 'StableBeta'
    support = 'UnitInterval'
    theta = trait.CFloat(1., help='mass parameter').tag(param=True)
    alpha = trait.CFloat(0., help='stability index in [0, 1)').tag(param=True)
    beta = trait.CFloat(1., help='concentration, beta > -alpha').tag(param=True)

    @trait.validate('theta')
    def _valid_theta(self, proposal):
        return _positive('theta', proposal['value'])

    @trait.validate('alpha')
    def _valid_alpha(self, proposal):
        alpha = proposal['value']
        if not 0 <= alpha < 1:
            raise trait.TraitError('stable-beta alpha must lie in [0, 1), got {0}'.format(alpha))
        if not self.beta + alpha > 0:
            raise trait.TraitError('stable-beta requires beta + alpha > 0, got beta={0}, alpha={1}'.format(
                self.beta, alpha))
        return alpha

    @trait.validate('beta')
    def _valid_beta(self, proposal):
        beta = proposal['value']
        if not (np.isfinite(beta) and beta + self.alpha > 0):
            raise trait.TraitError('stable-beta requires beta + alpha > 0, got beta={0}, alpha={1}'.format(
                beta, self.alpha))
        return beta

    def log_density(self, s, sc=None):
        s = np.asarray(s, dtype=float)
        a, b = self.alpha, self.beta
        return np.log(self.theta) - (a + 1.) * np.log(s) + (b + a - 1.) * np.log(_complement(s, sc))


class GammaProcess(LevyDensity):
    """ rho(s) = theta s^-1 exp(-beta s) on (0, inf)

    Examples
    --------
    >>> print('{:.6f}'.format(GammaProcess(theta=1, beta=1).density(1.)))
    0.367879

    """
    kind = 'GammaProcess'
    support = 'PositiveHalfLine'
    theta = trait.CFloat(1., help='mass parameter').tag(param=True)
    beta = trait.CFloat(1., help='rate parameter').tag(param=True)

    @trait.validate('theta', 'beta')
    def _valid_positive(self, proposal):
        return _positive(proposal['trait'].name, proposal['value'])

    def log_density(self, s, sc=None):
        s = np.asarray(s, dtype=float)
        return np.log(self.theta) - np.log(s) - self.beta * s


class StablePositive(LevyDensity):
    """ rho(s) = alpha s^(-alpha-1) / Gamma(1-alpha) on (0, inf)

    Examples
    --------
    >>> StablePositive(alpha=1.)
    Traceback (most recent call last):
     ...
    traitlets.traitlets.TraitError: stability index alpha must lie in (0, 1), got 1.0

    """
    kind = 'StablePositive'
    support = 'PositiveHalfLine'
    alpha = trait.CFloat(0.5, help='stability index in (0, 1)').tag(param=True)

    @trait.validate('alpha')
    def _valid_alpha(self, proposal):
        if not 0 < proposal['value'] < 1:
            raise trait.TraitError('stability index alpha must lie in (0, 1), got {0}'.format(proposal['value']))
        return proposal['value']

    def log_density(self, s, sc=None):
        s = np.asarray(s, dtype=float)
        a = self.alpha
        return np.log(a) - (a + 1.) * np.log(s) - gammaln(1. - a)


class GeneralizedGamma(StablePositive):
    """ rho(s) = alpha s^(-alpha-1) exp(-beta s) / Gamma(1-alpha) on (0, inf)

    Examples
    --------
    >>> GeneralizedGamma(alpha=0.5, beta=2)
    GeneralizedGamma(alpha=0.5,beta=2.0)

    """
    kind = 'GeneralizedGamma'
    beta = trait.CFloat(0., help='exponential tilting rate, beta >= 0').tag(param=True)

    @trait.validate('beta')
    def _valid_beta(self, proposal):
        if not (np.isfinite(proposal['value']) and proposal['value'] >= 0):
            raise trait.TraitError('generalized gamma beta must be >= 0, got {0}'.format(proposal['value']))
        return proposal['value']

    def log_density(self, s, sc=None):
        return StablePositive.log_density(self, s, sc) - self.beta * np.asarray(s, dtype=float)


class Custom(LevyDensity):
    """ a user-supplied density, or the transform of another density

    user densities must declare their support and assert integrability;
    the assertion is then checked numerically on construction

    Properties
    ----------
    density_func : callable
        rho(s), preferably vectorized
    support : str
        'UnitInterval' or 'PositiveHalfLine'
    integrable : bool
        user assertion that the integral of min(s, 1) rho(s) is finite
    origin : None or LevyDensity
        set for densities produced by ``transform_levy``

    Examples
    --------
    >>> rho = Custom(density_func=lambda s: 2. / s, support='UnitInterval', integrable=True)
    >>> print("{:.6f}".format(float(rho.density(0.5))))
    4.000000
    >>> Custom(density_func=lambda s: 1. / s**2, support='UnitInterval', integrable=True)
    Traceback (most recent call last):
     ...
    genibp.errors.ConfigurationError: custom density fails the integrability check: mass does not decay towards 0
    >>> Custom(density_func=lambda s: 1. / s)
    Traceback (most recent call last):
     ...
    genibp.errors.ConfigurationError: custom densities must assert integrable=True

    """
    kind = 'Custom'
    support = trait.Enum(SUPPORTS, default_value='UnitInterval')
    density_func = trait.Callable(allow_none=True)
    integrable = trait.Bool(False, help='user assertion that min(s,1) rho(s) integrates')
    origin = trait.Instance(LevyDensity, allow_none=True)

    def __init__(self, **kwargs):
        super(Custom, self).__init__(**kwargs)
        if self.origin is not None:
            self.support = 'PositiveHalfLine' if self.origin.support == 'UnitInterval' else 'UnitInterval'
            return
        if self.density_func is None:
            raise ConfigurationError('custom densities need a density_func')
        if not self.integrable:
            raise ConfigurationError('custom densities must assert integrable=True')
        self._certify()

    def _certify(self):
        from genibp.calculus.quadrature import integrate
        from genibp.errors import ExplosivityError
        log_density = self.log_density

        def func(s, sc):
            return np.minimum(s, 1.) * np.exp(log_density(s, sc))
        try:
            integrate(func, self.support, what='integral of min(s,1) rho(s)')
        except ExplosivityError as err:
            raise ConfigurationError('custom density fails the integrability check: {0}'.format(err.diagnosis))

    def _call(self, s):
        s = np.asarray(s, dtype=float)
        try:
            out = np.asarray(self.density_func(s), dtype=float)
            if out.shape == s.shape:
                return out
        except (TypeError, ValueError):
            pass
        return np.vectorize(lambda x: float(self.density_func(x)), otypes=[float])(s)

    def log_density(self, s, sc=None):
        s = np.asarray(s, dtype=float)
        with np.errstate(divide='ignore', over='ignore', invalid='ignore'):
            if self.origin is None:
                return np.log(self._call(s))
            if self.support == 'PositiveHalfLine':
                # tau_inf(y) = e^-y tau_01(1 - e^-y)
                return -s + self.origin.log_density(-np.expm1(-s), np.exp(-s))
            # tau_01(u) = (1-u)^-1 tau_inf(-log(1-u))
            uc = _complement(s, sc)
            return -np.log(uc) + self.origin.log_density(-np.log(uc))

    def _get_params(self):
        return {}
    params = property(_get_params)

    def to_dict(self):
        out = {'kind': self.kind, 'params': {}, 'support': self.support}
        if self.origin is not None:
            out['origin'] = self.origin.to_dict()
        return out

    def __eq__(self, other):
        if self.origin is None:
            return self is other
        return isinstance(other, Custom) and self.to_dict() == other.to_dict()

    def __hash__(self):
        if self.origin is None:
            return id(self)
        return hash(('Custom', self.origin))

    def __repr__(self):
        if self.origin is None:
            return 'Custom(support={0!r})'.format(self.support)
        return 'Custom(origin={0!r})'.format(self.origin)


LEVY_KINDS = {
    'BetaProcess': BetaProcess,
    'StableBeta': StableBeta,
    'GammaProcess': GammaProcess,
    'StablePositive': StablePositive,
    'GeneralizedGamma': GeneralizedGamma,
}


def levy_from_dict(data):
    """ build a Lévy density from its json description

    Examples
    --------
    >>> levy_from_dict({'kind': 'GammaProcess', 'params': {'theta': 2, 'beta': 1}})
    GammaProcess(beta=1.0,theta=2.0)
    >>> rho = transform_levy(BetaProcess(theta=1, beta=2))
    >>> levy_from_dict(rho.to_dict()) == rho
    True

    """
    kind = data.get('kind')
    if kind == 'Custom':
        if 'origin' not in data:
            raise ConfigurationError('a user Custom density cannot be rebuilt from json')
        return transform_levy(levy_from_dict(data['origin']))
    if kind not in LEVY_KINDS:
        raise ConfigurationError('unknown Lévy density kind: {0}'.format(kind))
    klass = LEVY_KINDS[kind]
    if 'support' in data and data['support'] != klass.support:
        raise ConfigurationError('{0} lives on {1}, not {2}'.format(kind, klass.support, data['support']))
    try:
        return klass(**data.get('params', {}))
    except trait.TraitError as err:
        raise ConfigurationError(str(err))


def compatible(support, score):
    """ whether a score model can be driven by a density on this support

    Bernoulli and negative binomial scores need weights in (0,1);
    Poisson scores accept either support
    """
    return score.kind == 'Poisson' or support == 'UnitInterval'


class TiltedLevy(trait.HasTraits):
    """ rho_M(s) = (1 - pi_A(s))^M rho(s)

    build with ``genibp.calculus.exponents.tilt``, which also fills in the
    closed-form re-expression for named pairs

    Examples
    --------
    >>> from genibp.models.scores import Bernoulli
    >>> rho = TiltedLevy(base=BetaProcess(theta=1, beta=1), score=Bernoulli(), tilt_order=0)
    >>> print('{:.6f}'.format(eval_density(rho, 0.3)))
    3.333333

    """
    base = trait.Instance(LevyDensity)
    score = trait.Instance(ScoreModel)
    tilt_order = trait.Int(0, min=0)
    reexpressed = trait.Instance(LevyDensity, allow_none=True,
                                 help='the same density written as a named kind')

    def _get_support(self):
        return self.base.support
    support = property(_get_support)

    def check(self, s):
        self.base.check(s)

    def log_density(self, s, sc=None):
        if self.tilt_order == 0:
            return self.base.log_density(s, sc)
        if self.reexpressed is not None:
            return self.reexpressed.log_density(s, sc)
        return self.tilt_order * self.score.log_zero_mass(s, _complement(s, sc)) + self.base.log_density(s, sc)

    def density(self, s, sc=None):
        if sc is None:
            self.check(s)
        if self.tilt_order == 0:
            return self.base.density(s, sc)
        with np.errstate(over='ignore'):
            return np.exp(self.log_density(s, sc))

    def to_dict(self):
        out = {'base': self.base.to_dict(), 'score': self.score.to_dict(), 'tilt_order': self.tilt_order}
        if self.reexpressed is not None:
            out['reexpressed'] = self.reexpressed.to_dict()
        return out

    def __eq__(self, other):
        return isinstance(other, TiltedLevy) and self.to_dict() == other.to_dict()

    def __hash__(self):
        return hash((self.base, self.score, self.tilt_order))

    def __repr__(self):
        return 'TiltedLevy(base={0!r}, score={1!r}, tilt_order={2})'.format(
            self.base, self.score, self.tilt_order)


def eval_density(levy, s):
    """ rho(s) or rho_M(s) at a point inside the support

    Examples
    --------
    >>> print("{:.6f}".format(eval_density(BetaProcess(theta=1, beta=1), 0.5)))
    2.000000
    >>> eval_density(BetaProcess(theta=1, beta=1), 1.5)
    Traceback (most recent call last):
     ...
    genibp.errors.DomainError: BetaProcess is defined on the open UnitInterval, got s=1.5

    """
    levy.check(s)
    out = levy.density(s)
    return float(out) if np.ndim(out) == 0 else out


def transform_levy(levy):
    """ map a density to its pair on the other support

    tau_inf(y) = e^-y tau_01(1 - e^-y) and tau_01(u) = tau_inf(-log(1-u)) / (1-u)

    Examples
    --------
    >>> rho = transform_levy(GammaProcess(theta=1, beta=1))
    >>> rho.support
    'UnitInterval'
    >>> print('{:.10f}'.format(eval_density(rho, 1 - np.exp(-1))))
    1.0000000000

    >>> beta = BetaProcess(theta=1, beta=2)
    >>> twice = transform_levy(transform_levy(beta))
    >>> s = np.linspace(0.01, 0.99, 99)
    >>> bool(np.max(np.abs(twice.density(s) / beta.density(s) - 1)) < 1e-10)
    True

    """
    if not isinstance(levy, LevyDensity):
        raise ConfigurationError('only Lévy densities can be transformed, got {0!r}'.format(levy))
    return Custom(origin=levy)
