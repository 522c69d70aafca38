#!/usr/bin/env python
# -*- coding: utf-8 -*-

""" posterior of a buffet state: tilted prior, dish jump laws, predictive
score laws, the log marginal of the score pattern and explosivity

Examples
--------

>>> from genibp.models.levy import GammaProcess
>>> from genibp.models.scores import Poisson
>>> from genibp.models.dishes import BuffetState, DishRecord
>>> state = BuffetState(prior=GammaProcess(theta=1, beta=1), score_model=Poisson(b=1), num_customers=1)
>>> state.add_dish(DishRecord(atom=0.3, scores=[(1, 2)]))
>>> print('{:.10f}'.format(abs(log_marginal(state) - (-np.log(2) + np.log(1. / 8)))))
0.0000000000

"""
from collections import Counter
from functools import lru_cache

import numpy as np
import pandas as pd
from scipy import stats
from scipy.special import gammaln
import traitlets as trait
from traitlets.log import get_logger

from genibp.errors import ValidationError
from genibp.models.levy import TiltedLevy
from genibp.calculus import mapping
from genibp.calculus.exponents import (tilt, exponent_psi, log_dish_integral, mean_total,
                                       check_pair, _check_method)
from genibp.calculus.quadrature import integrate
from genibp.posterior.jumps import JumpLaw, QuadratureJump


@lru_cache(maxsize=4096)
def _jump_law(prior, score, scores, M, method):
    if method != 'quadrature':
        func = mapping.lookup(prior, score, 'jump')
        if func is not None:
            return func(prior, score, sum(scores), M)
    nonzero = [a for a in scores if a != 0]

    def logfunc(s, sc):
        return M * score.log_zero_mass(s, sc) + prior.log_density(s, sc) + score.log_h_product(nonzero, s, sc)
    label = {'prior': prior.to_dict(), 'score': score.to_dict(), 'scores': list(nonzero), 'M': M}
    get_logger().debug('tabulating the jump law of %r with scores %r', prior, nonzero)
    return QuadratureJump(logfunc, prior.support, label=label)


def jump_law(prior, score, scores, M, method='auto'):
    """ posterior law of the weight of a dish with these nonzero scores
    after M customers

    density proportional to (1 - pi_A(s))^M prod h(a_n|s) rho(s)

    Examples
    --------
    >>> from genibp.models.levy import StableBeta
    >>> from genibp.models.scores import Bernoulli
    >>> jump_law(StableBeta(theta=1, alpha=0, beta=1), Bernoulli(), [1, 1], 3)
    BetaJump(a=2.0,b=2.0)

    """
    _check_method(method)
    return _jump_law(prior, score, tuple(int(a) for a in scores if a != 0), int(M), method)


class PredictiveLaw(object):
    """ law of a customer's score for an existing dish

    Properties
    ----------
    kind : str
    dist : None or frozen scipy distribution
        the closed form, when there is one

    """

    def __init__(self, kind, dist=None, params=None, jump=None, score=None):
        self.kind = kind
        self.dist = dist
        self.params = params or {}
        self.jump = jump
        self.score = score

    def pmf(self, a):
        if self.dist is not None:
            return float(self.dist.pmf(a))
        jump, score = self.jump, self.score

        def integrand(s, sc):
            return np.exp(score.logpmf(a, s, sc) + jump.logpdf(s, sc))
        return float(integrate(integrand, jump.support, what='predictive pmf'))

    def take_probability(self):
        """ P(A != 0) """
        return 1. - self.pmf(0)

    def sample(self, rng):
        if self.dist is not None:
            return int(self.dist.rvs(random_state=rng))
        return int(self.score.sample(self.jump.sample(rng), rng))

    def to_dict(self):
        return {'kind': self.kind, 'params': dict(self.params), 'take_probability': self.take_probability()}

    def __repr__(self):
        args = ','.join('{0}={1!r}'.format(k, v) for k, v in sorted(self.params.items()))
        return '{0}({1})'.format(self.kind, args)


def predictive_law(jump, score):
    """ the mixture of G_A(.|s) over a jump law """
    if score.kind == 'Bernoulli':
        p = jump.mean()
        return PredictiveLaw('Bernoulli', stats.bernoulli(p), {'p': p})
    if score.kind == 'Poisson' and jump.kind == 'ScaledGamma':
        q = jump.rate / (jump.rate + score.b)
        return PredictiveLaw('NegBinomial', stats.nbinom(jump.shape, q), {'n': jump.shape, 'p': q})
    if score.kind == 'NegBinomial' and jump.kind == 'Beta':
        params = {'n': score.r, 'a': jump.b, 'b': jump.a}
        return PredictiveLaw('BetaNegBinomial', stats.betanbinom(score.r, jump.b, jump.a), params)
    return PredictiveLaw('Mixture', params={'jump': jump.to_dict(), 'score': score.to_dict()},
                         jump=jump, score=score)


class PosteriorSummary(trait.HasTraits):
    """ the posterior after M customers

    Properties
    ----------
    tilted : TiltedLevy
        law of the unobserved dishes
    jump_laws : list of JumpLaw
        one per observed dish, in serving order
    dish_counts : list of int
        c for each dish
    atoms : list of float

    """
    tilted = trait.Instance(TiltedLevy)
    jump_laws = trait.List(trait.Instance(JumpLaw))
    dish_counts = trait.List(trait.Int())
    atoms = trait.List(trait.Float())

    @trait.validate('jump_laws')
    def _valid_jump_laws(self, proposal):
        if self.dish_counts and len(proposal['value']) != len(self.dish_counts):
            raise trait.TraitError('one jump law per dish is required')
        return proposal['value']

    def _get_num_dishes(self):
        return len(self.jump_laws)
    num_dishes = property(_get_num_dishes)

    def predictive(self, index):
        return predictive_existing(self, index)

    def trait_df(self):
        """ pandas.DataFrame with one row per dish """
        data = []
        for k, law in enumerate(self.jump_laws):
            data.append({'atom': self.atoms[k] if self.atoms else np.nan, 'count_c': self.dish_counts[k],
                         'jump': law.kind, 'jump_mean': law.mean(),
                         'take_probability': self.predictive(k).take_probability()})
        return pd.DataFrame(data, columns=['atom', 'count_c', 'jump', 'jump_mean', 'take_probability'])

    def to_dict(self):
        """ tilted prior, per-dish jump laws and predictive take probabilities """
        tilted = self.tilted
        effective = tilted.reexpressed
        dishes = []
        for k, law in enumerate(self.jump_laws):
            dishes.append({'atom': self.atoms[k] if self.atoms else None, 'count_c': self.dish_counts[k],
                           'jump_law': law.to_dict(), 'jump_mean': law.mean(),
                           'predictive': self.predictive(k).to_dict()})
        return {'tilted': {'base': tilted.base.to_dict(), 'score': tilted.score.to_dict(),
                           'tilt_order': tilted.tilt_order,
                           'reexpressed': effective.to_dict() if effective is not None else None},
                'dishes': dishes}

    def _repr_html_(self):
        return self.trait_df().to_html()


def _check_scores(state):
    """ raise ValidationError for scores the model cannot produce """
    state.check()
    check_pair(state.prior, state.score_model)
    if state.score_model.kind != 'Bernoulli':
        return
    offending = ['dish {0} customer {1} score {2}'.format(k, i, a)
                 for k, dish in enumerate(state.dishes) for i, a in dish.scores if a != 1]
    if offending:
        raise ValidationError('Bernoulli scores must be 0 or 1', offending)


def posterior_of(state, method='auto'):
    """ tilted prior and per-dish jump laws of a buffet state

    Examples
    --------
    >>> from genibp.models.levy import StableBeta
    >>> from genibp.models.scores import Bernoulli
    >>> from genibp.models.dishes import BuffetState, DishRecord
    >>> state = BuffetState(prior=StableBeta(theta=1, alpha=0, beta=1), score_model=Bernoulli(), num_customers=3)
    >>> state.add_dish(DishRecord(atom=0.7, scores=[(1, 1), (3, 1)]))
    >>> summary = posterior_of(state)
    >>> summary.jump_laws
    [BetaJump(a=2.0,b=2.0)]
    >>> summary.tilted.reexpressed
    StableBeta(alpha=0.0,beta=4.0,theta=1.0)
    >>> posterior_of(BuffetState(prior=state.prior, score_model=Bernoulli())).jump_laws
    []

    """
    _check_scores(state)
    prior, score, M = state.prior, state.score_model, state.num_customers
    laws = [jump_law(prior, score, [a for _, a in dish.scores], M, method) for dish in state.dishes]
    summary = PosteriorSummary(tilted=tilt(prior, score, M), dish_counts=state.counts, atoms=state.atoms)
    summary.jump_laws = laws
    return summary


def predictive_existing(summary, index):
    """ law of the next customer's score for dish ``index``

    Examples
    --------
    >>> from genibp.models.levy import GammaProcess
    >>> from genibp.models.scores import Poisson
    >>> from genibp.models.dishes import BuffetState, DishRecord
    >>> state = BuffetState(prior=GammaProcess(theta=1, beta=1), score_model=Poisson(b=1), num_customers=1)
    >>> state.add_dish(DishRecord(atom=0.3, scores=[(1, 1)]))
    >>> law = predictive_existing(posterior_of(state), 0)
    >>> law.kind
    'NegBinomial'
    >>> print('{:.6f}'.format(law.pmf(0)))
    0.666667

    """
    if not 0 <= index < summary.num_dishes:
        raise IndexError('dish index {0} out of range for {1} dishes'.format(index, summary.num_dishes))
    return predictive_law(summary.jump_laws[index], summary.tilted.score)


def feature_pattern(state):
    """ the unordered multiset of score columns, atoms ignored

    Examples
    --------
    >>> from genibp.models.levy import BetaProcess
    >>> from genibp.models.scores import Bernoulli
    >>> from genibp.models.dishes import BuffetState, DishRecord
    >>> state = BuffetState(prior=BetaProcess(), score_model=Bernoulli(), num_customers=2)
    >>> state.add_dishes([DishRecord(atom=0.9, scores=[(2, 1)]), DishRecord(atom=0.2, scores=[(1, 1)]),
    ...                   DishRecord(atom=0.4, scores=[(2, 1)])])
    >>> feature_pattern(state)
    (((1, 1),), ((2, 1),), ((2, 1),))

    """
    return tuple(sorted(dish.column_key() for dish in state.dishes))


def log_marginal(state, method='auto', include_atoms=False):
    """ log probability of the observed scores

    -Psi(f_M) + sum over dishes of log int (1 - pi_A)^M prod h rho ds.
    By default atoms are integrated out and the result is the probability
    of the unordered score pattern, i.e. the joint density divided by the
    factorials of the multiplicities of identical columns;
    ``include_atoms=True`` returns the joint density against Uniform[0,1)
    atoms.

    Examples
    --------
    >>> from genibp.models.levy import BetaProcess
    >>> from genibp.models.scores import Bernoulli
    >>> from genibp.models.dishes import BuffetState, DishRecord
    >>> state = BuffetState(prior=BetaProcess(theta=1, beta=1), score_model=Bernoulli(), num_customers=1)
    >>> state.add_dishes([DishRecord(atom=0.1, scores=[(1, 1)]), DishRecord(atom=0.2, scores=[(1, 1)])])
    >>> print('{:.10f}'.format(np.exp(log_marginal(state))))
    0.1839397206
    >>> print('{:.10f}'.format(np.exp(log_marginal(state, include_atoms=True))))
    0.3678794412
    >>> log_marginal(BuffetState(prior=state.prior, score_model=Bernoulli()))
    0.0

    """
    _check_method(method)
    _check_scores(state)
    prior, score, M = state.prior, state.score_model, state.num_customers
    if M == 0:
        return 0.
    total = -exponent_psi(prior, score, M, method)
    for dish in state.dishes:
        total += log_dish_integral(prior, score, [a for _, a in dish.scores], M, method)
    if not include_atoms:
        multiplicities = Counter(dish.column_key() for dish in state.dishes)
        total -= float(sum(gammaln(m + 1.) for m in multiplicities.values()))
    return float(total)


def explosivity_check(prior, score, method='auto'):
    """ E[Z(Omega)], the expected total score of one customer

    Returns
    -------
    mean : float or Infinite

    Examples
    --------
    >>> from genibp.models.levy import BetaProcess
    >>> from genibp.models.scores import NegBinomial, Bernoulli
    >>> explosivity_check(BetaProcess(theta=1, beta=0.5), NegBinomial(r=1))
    Infinite('negative binomial scores need beta + alpha > 1 for a finite mean')
    >>> print('{:.6f}'.format(explosivity_check(BetaProcess(theta=1, beta=2), NegBinomial(r=2))))
    2.000000
    >>> print('{:.6f}'.format(explosivity_check(BetaProcess(theta=1, beta=1), Bernoulli())))
    1.000000

    """
    return mean_total(prior, score, method)
