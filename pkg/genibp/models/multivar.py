#!/usr/bin/env python
# -*- coding: utf-8 -*-

""" multivariate priors, score models and buffet states

a dish now carries a jump vector s = (s_1..s_q); its nonzero scores are
either a condiment index j in 1..q (multinomial scores) or a score vector
(general models such as the bivariate Bernoulli)

Examples
--------

>>> prior = SBDPrior(theta=1, alpha=0, beta=1, gamma=[1, 1])
>>> prior.aggregate
StableBeta(alpha=0.0,beta=1.0,theta=1.0)
>>> prior.tilted(3).beta
4.0
>>> law = bivariate_bernoulli_model(0.25, 0.25, 0.25)
>>> print('{:.2f} {:.2f}'.format(law.pmf((0, 0)), law.marginal(1)))
0.25 0.50

"""
import numpy as np
import pandas as pd
from scipy import integrate as sp_integrate
from scipy.special import gammaln
import traitlets as trait

from genibp.errors import ConfigurationError, DomainError, ValidationError
from genibp.calculus.quadrature import settings
from genibp.models.levy import StableBeta
from genibp.models.scores import Bernoulli
from genibp.models.dishes import ScoreEntries, DishRecord, BuffetState


class MultiLevy(trait.HasTraits):
    """ base class of the q-variate Lévy densities """
    kind = 'MultiLevy'
    support = 'Simplex'

    def _get_q(self):
        raise NotImplementedError
    q = property(_get_q)

    def _get_params(self):
        return {name: getattr(self, name) for name in sorted(self.trait_names(param=True))}
    params = property(_get_params)

    def to_dict(self):
        return {'kind': self.kind, 'params': self.params, 'support': self.support}

    def __repr__(self):
        args = ','.join('{0}={1!r}'.format(k, v) for k, v in sorted(self.params.items()))
        return '{0}({1})'.format(self.kind, args)


class SBDPrior(MultiLevy):
    """ the stable-Beta-Dirichlet density on {p : p_j > 0, sum p < 1}

    rho_q(p) = theta Gamma(G)/prod Gamma(gamma_j) p.^(-alpha-G) (1-p.)^(beta+alpha-1) prod p_j^(gamma_j-1)

    with p. = sum p_j and G = sum gamma_j; the total p. is stable-beta
    distributed and the direction p/p. is Dirichlet(gamma)

    Examples
    --------
    >>> prior = SBDPrior(theta=2, alpha=0.5, beta=0.5, gamma=[2, 1])
    >>> prior.q
    2
    >>> s = 0.3
    >>> closed, numeric = prior.slice_density(s), prior.slice_density(s, method='quadrature')
    >>> bool(abs(closed - numeric) < 1e-6 * closed)
    True
    >>> SBDPrior(gamma=[1, -1])
    Traceback (most recent call last):
     ...
    traitlets.traitlets.TraitError: condiment weights gamma must be positive, got [1.0, -1.0]

    """
    kind = 'SBDPrior'
    theta = trait.CFloat(1., help='mass parameter').tag(param=True)
    alpha = trait.CFloat(0., help='stability index in [0, 1)').tag(param=True)
    beta = trait.CFloat(1., help='concentration, beta > -alpha').tag(param=True)
    gamma = trait.List(trait.CFloat(), [1.], help='condiment weights').tag(param=True)

    @trait.validate('theta')
    def _valid_theta(self, proposal):
        if not (np.isfinite(proposal['value']) and proposal['value'] > 0):
            raise trait.TraitError('theta must be positive and finite, got {0}'.format(proposal['value']))
        return proposal['value']

    @trait.validate('alpha', 'beta')
    def _valid_alpha_beta(self, proposal):
        alpha = proposal['value'] if proposal['trait'].name == 'alpha' else self.alpha
        beta = proposal['value'] if proposal['trait'].name == 'beta' else self.beta
        if not 0 <= alpha < 1:
            raise trait.TraitError('stable-beta alpha must lie in [0, 1), got {0}'.format(alpha))
        if not (np.isfinite(beta) and beta + alpha > 0):
            raise trait.TraitError('stable-beta requires beta + alpha > 0, got beta={0}, alpha={1}'.format(
                beta, alpha))
        return proposal['value']

    @trait.validate('gamma')
    def _valid_gamma(self, proposal):
        gamma = [float(g) for g in proposal['value']]
        if not gamma or not all(np.isfinite(g) and g > 0 for g in gamma):
            raise trait.TraitError('condiment weights gamma must be positive, got {0}'.format(gamma))
        return gamma

    def _get_q(self):
        return len(self.gamma)
    q = property(_get_q)

    def _get_aggregate(self):
        return StableBeta(theta=self.theta, alpha=self.alpha, beta=self.beta)
    aggregate = property(_get_aggregate, doc='the stable-beta density of the total p.')

    def tilted(self, M):
        """ the density after M customers with multinomial scores """
        return SBDPrior(theta=self.theta, alpha=self.alpha, beta=self.beta + M, gamma=self.gamma)

    def log_density(self, p):
        """ log rho_q(p), p of shape (..., q) """
        p = np.asarray(p, dtype=float)
        g = np.asarray(self.gamma)
        total = p.sum(axis=-1)
        if not (np.all(p > 0) and np.all(total < 1)):
            raise DomainError('{0} is defined on the open simplex, got p={1}'.format(self.kind, p))
        norm = np.log(self.theta) + gammaln(g.sum()) - gammaln(g).sum()
        return (norm - (self.alpha + g.sum()) * np.log(total)
                + (self.beta + self.alpha - 1.) * np.log1p(-total)
                + ((g - 1.) * np.log(p)).sum(axis=-1))

    def slice_density(self, s, method='closed'):
        """ rho_q integrated over {p : p. = s}, the stable-beta density at s

        ``method='quadrature'`` integrates the q-variate density numerically
        over the first q-1 coordinates

        """
        if method == 'closed':
            return float(self.aggregate.density(s))
        if method != 'quadrature':
            raise ConfigurationError("slice methods are 'closed' or 'quadrature', got {0!r}".format(method))
        if self.q == 1:
            return float(np.exp(self.log_density([s])))
        opts = {'epsrel': settings().epsrel, 'epsabs': 0., 'limit': settings().limit}

        def func(*head):
            last = s - sum(head)
            if last <= 0 or min(head) <= 0:
                return 0.
            return float(np.exp(self.log_density(list(head) + [last])))

        def bounds(*outer):
            return [0., s - sum(outer)]
        value, _ = sp_integrate.nquad(func, [bounds] * (self.q - 1), opts=[opts] * (self.q - 1))
        return float(value)

    def new_dish_rate(self, M=0, method='auto'):
        """ theta Gamma(1-alpha) Gamma(M+beta+alpha) / Gamma(M+beta+1)

        Examples
        --------
        >>> print('{:.6f}'.format(SBDPrior(theta=1, alpha=0, beta=1, gamma=[1, 1]).new_dish_rate(0)))
        1.000000

        """
        from genibp.calculus.exponents import new_dish_rate, tilt
        score = Bernoulli()
        return new_dish_rate(tilt(self.aggregate, score, M), score, method=method)


class FiniteMultiLevy(MultiLevy):
    """ a finite-activity q-variate measure: total mass times a sampler of
    the normalized jump law

    Properties
    ----------
    total_mass : float
    sampler : callable
        rng -> q-vector with nonnegative entries
    dimension : int

    Examples
    --------
    >>> rho = FiniteMultiLevy(total_mass=2., dimension=3,
    ...                       sampler=lambda rng: rng.dirichlet([1, 1, 1, 1])[:3])
    >>> rho.q, rho.sample(np.random.default_rng(0)).shape
    (3, (3,))

    """
    kind = 'FiniteMultiLevy'
    total_mass = trait.CFloat(1., help='rho_q of the whole space').tag(param=True)
    dimension = trait.Int(1, min=1, help='q').tag(param=True)
    sampler = trait.Callable(allow_none=True, help='draws from rho_q / total_mass')

    @trait.validate('total_mass')
    def _valid_mass(self, proposal):
        if not (np.isfinite(proposal['value']) and proposal['value'] > 0):
            raise trait.TraitError('total mass must be positive and finite, got {0}'.format(proposal['value']))
        return proposal['value']

    def _get_q(self):
        return self.dimension
    q = property(_get_q)

    def sample(self, rng):
        if self.sampler is None:
            raise ConfigurationError('a finite multivariate measure needs a sampler')
        out = np.asarray(self.sampler(rng), dtype=float)
        if out.shape != (self.q,):
            raise ConfigurationError('sampler returned shape {0}, expected ({1},)'.format(out.shape, self.q))
        return out


class MultiScoreModel(trait.HasTraits):
    """ base class of finite-support multivariate score models

    a model lists its nonzero ``outcomes`` and the probability of each
    given a jump vector (``cell_probs``); the zero outcome takes the rest

    """
    kind = 'MultiScoreModel'
    zero = 0

    def _get_q(self):
        raise NotImplementedError
    q = property(_get_q, doc='length of the jump vector')

    def outcomes(self):
        raise NotImplementedError

    def cell_probs(self, s):
        """ P(A = outcome | s) for every nonzero outcome, shape (..., n) """
        raise NotImplementedError

    def check(self, s):
        s = np.asarray(s, dtype=float)
        if s.shape[-1:] != (self.q,) or not (np.all(s >= 0) and np.all(s.sum(axis=-1) < 1)):
            raise DomainError('{0} needs jump vectors of length {1} with nonnegative entries '
                              'summing below 1, got {2}'.format(self.kind, self.q, s))

    def pi_nonzero(self, s):
        return np.asarray(self.cell_probs(s)).sum(axis=-1)

    def is_zero(self, a):
        return a == self.zero

    def pmf(self, a, s):
        if self.is_zero(a):
            return 1. - float(self.pi_nonzero(s))
        try:
            k = self.outcomes().index(a)
        except ValueError:
            return 0.
        return float(np.asarray(self.cell_probs(s))[..., k])

    def log_h_factor(self, a, s):
        """ log [G(a|s) / (1 - pi(s))] for nonzero a, 0 for the zero outcome """
        if self.is_zero(a):
            return 0.
        with np.errstate(divide='ignore'):
            return float(np.log(self.pmf(a, s)) - np.log1p(-self.pi_nonzero(s)))

    def sample(self, s, rng):
        probs = np.asarray(self.cell_probs(s), dtype=float)
        u = rng.random()
        k = int(np.searchsorted(np.cumsum(probs), u, side='right'))
        return self.outcomes()[k] if k < len(probs) else self.zero

    def sample_nonzero(self, s, rng):
        probs = np.asarray(self.cell_probs(s), dtype=float)
        if not probs.sum() > 0:
            raise DomainError('{0} has no nonzero outcome at s={1}'.format(self.kind, s))
        return self.outcomes()[int(rng.choice(len(probs), p=probs / probs.sum()))]

    def valid_entry(self, a):
        return a in self.outcomes()

    def to_dict(self):
        out = {'kind': self.kind}
        out.update({name: getattr(self, name) for name in sorted(self.trait_names())})
        return out

    def __eq__(self, other):
        return isinstance(other, MultiScoreModel) and self.to_dict() == other.to_dict()

    def __hash__(self):
        return hash(self.kind)

    def __repr__(self):
        args = ','.join('{0}={1!r}'.format(k, v) for k, v in sorted(self.to_dict().items()) if k != 'kind')
        return '{0}({1})'.format(self.kind, args)

    def freeze(self, s):
        return FrozenMultiScore(self, s)


class MultinomialScore(MultiScoreModel):
    """ one condiment j with probability s_j, none with probability 1 - sum s

    nonzero outcomes are condiment indices 1..q

    Examples
    --------
    >>> model = MultinomialScore(conds=3)
    >>> model.outcomes(), model.pmf(2, [0.125, 0.25, 0.5]), model.pmf(0, [0.125, 0.25, 0.5])
    ([1, 2, 3], 0.25, 0.125)
    >>> single = MultinomialScore(conds=1)
    >>> single.univariate()
    Bernoulli()
    >>> bool(abs(single.log_h_factor(1, [0.25]) - Bernoulli().log_h_factor(1, 0.25)) < 1e-12)
    True
    >>> single.log_h_factor(0, [0.25])
    0.0

    """
    kind = 'Multinomial'
    conds = trait.Int(1, min=1, help='number of condiments q')

    def _get_q(self):
        return self.conds
    q = property(_get_q)

    def outcomes(self):
        return list(range(1, self.conds + 1))

    def cell_probs(self, s):
        return np.asarray(s, dtype=float)

    def univariate(self):
        """ the equivalent univariate model of a single condiment """
        if self.conds != 1:
            raise ConfigurationError('only one-condiment multinomial scores are univariate')
        return Bernoulli()


class BivariateBernoulli(MultiScoreModel):
    """ A = (A_1, A_2) on {0,1}^2 with jump vector s = (p11, p10, p01)

    P(A = (a1, a2)) = p11^(a1 a2) p10^(a1 (1-a2)) p01^((1-a1) a2) p00^((1-a1)(1-a2))

    with p00 = 1 - p11 - p10 - p01

    """
    kind = 'BivariateBernoulli'
    zero = (0, 0)

    def _get_q(self):
        return 3
    q = property(_get_q)

    def outcomes(self):
        return [(1, 1), (1, 0), (0, 1)]

    def cell_probs(self, s):
        return np.asarray(s, dtype=float)

    def is_zero(self, a):
        return tuple(a) == self.zero

    def valid_entry(self, a):
        return tuple(a) in self.outcomes()

    def pmf(self, a, s):
        return super(BivariateBernoulli, self).pmf(tuple(a), s)

    def marginal(self, j, s):
        """ P(A_j = 1 | s) """
        p11, p10, p01 = np.asarray(s, dtype=float)
        return float(p11 + (p10 if j == 1 else p01))


class FrozenMultiScore(object):
    """ a multivariate score model at a fixed jump vector """

    def __init__(self, model, s):
        model.check(s)
        self.model = model
        self.s = np.asarray(s, dtype=float)

    def pi_nonzero(self):
        return float(self.model.pi_nonzero(self.s))

    def pmf(self, a):
        return self.model.pmf(a, self.s)

    def marginal(self, j):
        return self.model.marginal(j, self.s)

    def sample(self, rng):
        return self.model.sample(self.s, rng)

    def sample_nonzero(self, rng):
        return self.model.sample_nonzero(self.s, rng)

    def cells(self):
        """ {outcome: probability}, zero outcome included """
        out = {self.model.zero: 1. - self.pi_nonzero()}
        out.update(zip(self.model.outcomes(), np.asarray(self.model.cell_probs(self.s)).tolist()))
        return out


def bivariate_bernoulli_model(p11, p10, p01):
    """ the bivariate Bernoulli law of the cell probabilities (p11, p10, p01)

    the returned law's ``model`` plugs into the multivariate buffet

    Examples
    --------
    >>> law = bivariate_bernoulli_model(0.25, 0.25, 0.25)
    >>> sorted(law.cells().items())
    [((0, 0), 0.25), ((0, 1), 0.25), ((1, 0), 0.25), ((1, 1), 0.25)]
    >>> bivariate_bernoulli_model(0, 0, 0)
    Traceback (most recent call last):
     ...
    genibp.errors.ConfigurationError: the bivariate Bernoulli law with p11=p10=p01=0 has no nonzero outcome

    """
    probs = [float(p) for p in (p11, p10, p01)]
    if not all(0 <= p <= 1 for p in probs) or not sum(probs) < 1:
        raise ConfigurationError('bivariate Bernoulli cell probabilities must be nonnegative with '
                                 'p11 + p10 + p01 < 1, got {0}'.format(probs))
    if sum(probs) == 0:
        raise ConfigurationError('the bivariate Bernoulli law with p11=p10=p01=0 has no nonzero outcome')
    return BivariateBernoulli().freeze(probs)


MULTI_SCORE_KINDS = {'Multinomial': MultinomialScore, 'BivariateBernoulli': BivariateBernoulli}


def multi_score_from_dict(data):
    """ rebuild a multivariate score model from its to_dict description """
    data = dict(data)
    kind = data.pop('kind', None)
    if kind not in MULTI_SCORE_KINDS:
        raise ConfigurationError('unknown multivariate score kind {0!r}, expected one of {1}'.format(
            kind, sorted(MULTI_SCORE_KINDS)))
    try:
        return MULTI_SCORE_KINDS[kind](**data)
    except trait.TraitError as err:
        raise ConfigurationError(str(err))


def multi_levy_from_dict(data):
    """ rebuild an SBDPrior; finite measures carry a callable and do not round trip """
    if data.get('kind') != 'SBDPrior':
        raise ConfigurationError('only SBDPrior descriptions can be rebuilt, got {0!r}'.format(data.get('kind')))
    try:
        return SBDPrior(**data.get('params', {}))
    except trait.TraitError as err:
        raise ConfigurationError(str(err))


class MultiScoreEntries(ScoreEntries):
    """ (customer, score) pairs where a score is a condiment index or a
    nonzero vector of nonnegative integers

    Examples
    --------
    >>> MultiScoreEntries().validate(object, [(1, 2), (2, [1, 0])])
    ((1, 2), (2, (1, 0)))

    """
    info_text = 'score entries (customer, condiment index or nonzero score vector)'

    def _entry(self, obj, value, score):
        if isinstance(score, (list, tuple, np.ndarray)):
            vector = tuple(int(a) for a in score)
            if list(vector) != list(score) or min(vector) < 0 or not any(vector):
                self.error(obj, value)
            return vector
        return super(MultiScoreEntries, self)._entry(obj, value, score)


class MultiDishRecord(DishRecord):
    """ a dish of the multivariate buffet

    ``count_c`` counts the customers who took the dish

    Examples
    --------
    >>> dish = MultiDishRecord(atom=0.5, scores=[(1, 2), (2, 1), (4, 2)])
    >>> dish.count_c, dish.condiment_counts(3)
    (3, [1, 2, 0])
    >>> dish.to_dict()
    {'atom': 0.5, 'scores': {'1': 2, '2': 1, '4': 2}}

    """
    scores = MultiScoreEntries(help='(customer, condiment or score vector) pairs')

    def _get_count_c(self):
        return len(self.scores)
    count_c = property(_get_count_c)

    def condiment_counts(self, q):
        """ per-condiment tallies c_j of multinomial entries """
        counts = [0] * q
        for _, j in self.scores:
            counts[j - 1] += 1
        return counts

    def to_dict(self):
        return {'atom': self.atom,
                'scores': {str(i): list(a) if isinstance(a, tuple) else a for i, a in self.scores}}


class MultiBuffetState(BuffetState):
    """ the dishes served to M customers under a multivariate prior

    Examples
    --------
    >>> state = MultiBuffetState(prior=SBDPrior(gamma=[1, 1]), score_model=MultinomialScore(conds=2),
    ...                          num_customers=2)
    >>> state.add_dish(MultiDishRecord(atom=0.3, scores=[(1, 2), (2, 2)]))
    >>> state.q, state.condiment_counts()
    (2, [[0, 2]])
    >>> state.add_dish(DishRecord(atom=0.1, scores=[(1, 1)]))
    Traceback (most recent call last):
     ...
    ValueError: dish is not a valid record or there is an atom clash

    """
    prior = trait.Instance(MultiLevy)
    score_model = trait.Instance(MultiScoreModel)
    _allowed_object = MultiDishRecord

    def _get_q(self):
        return self.score_model.q
    q = property(_get_q)

    def condiment_counts(self):
        return [d.condiment_counts(self.q) for d in self.dishes]

    def check(self):
        super(MultiBuffetState, self).check()
        offending = []
        for k, dish in enumerate(self.dishes):
            for i, a in dish.scores:
                if not self.score_model.valid_entry(a):
                    offending.append('dish {0} customer {1}: {2!r} is not an outcome of {3!r}'.format(
                        k, i, a, self.score_model))
        if offending:
            raise ValidationError('invalid buffet state', offending)

    def matrix(self):
        """ M x K table of scores, condiment indices or tuples, 0 where absent """
        values = np.zeros((self.num_customers, self.num_dishes), dtype=object)
        for k, dish in enumerate(self.dishes):
            for i, a in dish.scores:
                values[i - 1, k] = a
        return pd.DataFrame(values, index=pd.Index(range(1, self.num_customers + 1), name='customer'),
                            columns=pd.Index(self.atoms, name='atom'))

    def summary(self):
        out = super(MultiBuffetState, self).summary()
        out['q'] = self.q
        return out
