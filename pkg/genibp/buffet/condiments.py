#!/usr/bin/env python
# -*- coding: utf-8 -*-

""" the multivariate buffet

with a stable-Beta-Dirichlet prior and multinomial scores a customer takes
an existing dish with probability (c - alpha)/(M + beta) and, having taken
it, condiment j with probability (c_j + gamma_j)/(c + sum gamma); new dishes
arrive exactly as in the univariate stable-beta buffet and each picks
condiment j with probability gamma_j / sum gamma.

A finite multivariate measure with any finite-support score model is
served by exact rejection (existing dishes) and Poisson thinning (new
dishes).

Examples
--------

>>> from genibp.models.multivar import SBDPrior, MultinomialScore
>>> state = mv_sample_buffet(SBDPrior(theta=2, alpha=0.2, beta=1, gamma=[1, 2]),
...                          MultinomialScore(conds=2), 4, seed=5)
>>> state.num_customers, len(state.new_dish_counts)
(4, 4)
>>> state.check()

"""
import numpy as np
import pandas as pd
from scipy import stats
import traitlets as trait
from traitlets.log import get_logger

from genibp.errors import ConfigurationError, ExplosivityError, ResourceError, ValidationError
from genibp.calculus.quadrature import settings
from genibp.models.levy import is_infinite
from genibp.models.scores import Bernoulli
from genibp.models.dishes import BuffetState, DishRecord
from genibp.models.multivar import (SBDPrior, FiniteMultiLevy, MultinomialScore, MultiScoreModel,
                                    MultiDishRecord, MultiBuffetState)
from genibp.posterior.jumps import BetaJump
from genibp.buffet.sequential import draw_atom, _streams


def _check_mv_pair(prior, score):
    if isinstance(prior, SBDPrior):
        if not isinstance(score, MultinomialScore) or score.q != prior.q:
            raise ConfigurationError('a stable-Beta-Dirichlet prior with {0} condiments needs '
                                     'MultinomialScore(conds={0}), got {1!r}'.format(prior.q, score))
    elif isinstance(prior, FiniteMultiLevy):
        if not isinstance(score, MultiScoreModel) or score.q != prior.q:
            raise ConfigurationError('{0!r} needs a score model on jump vectors of length {1}, got {2!r}'.format(
                prior, prior.q, score))
    else:
        raise ConfigurationError('unsupported multivariate prior {0!r}'.format(prior))


def take_probabilities(prior, counts, M):
    """ r_j, the probability that customer M+1 takes the dish with condiment j

    Examples
    --------
    >>> from genibp.models.multivar import SBDPrior
    >>> r = take_probabilities(SBDPrior(alpha=0, beta=1, gamma=[1, 1]), [2, 0], 3)
    >>> print('{:.4f} {:.4f}'.format(r.sum(), r[0] / r.sum()))
    0.5000 0.7500

    """
    counts = np.asarray(counts, dtype=float)
    gamma = np.asarray(prior.gamma)
    c = counts.sum()
    return (counts + gamma) / (c + gamma.sum()) * (c - prior.alpha) / (M + prior.beta)


class SBDJumpSampler(object):
    """ the posterior jump vector of a dish: Beta total times Dirichlet direction

    Properties
    ----------
    total : BetaJump
        Beta(c - alpha, M + beta + alpha - c)
    direction : frozen scipy.stats.dirichlet
        Dirichlet(c_j + gamma_j)

    """

    def __init__(self, prior, counts, M):
        counts = [int(c) for c in counts]
        c = sum(counts)
        if c < 1 or c > M:
            raise ValidationError('a dish needs 1 <= c <= M, got c={0}, M={1}'.format(c, M))
        self.total = BetaJump(c - prior.alpha, M + prior.beta + prior.alpha - c)
        self.concentration = [cj + g for cj, g in zip(counts, prior.gamma)]
        self.direction = stats.dirichlet(self.concentration) if len(counts) > 1 else None

    def sample_direction(self, rng):
        if self.direction is None:
            return np.ones(1)
        return self.direction.rvs(random_state=rng)[0]

    def sample(self, rng):
        return self.total.sample(rng) * self.sample_direction(rng)

    def mean(self):
        if self.direction is None:
            return np.array([self.total.mean()])
        return self.total.mean() * self.direction.mean()

    def to_dict(self):
        return {'total': self.total.to_dict(),
                'direction': {'kind': 'Dirichlet', 'params': {'concentration': list(self.concentration)}}}


def mv_jump_sampler(prior, counts, M):
    """ the law of the jump vector of a dish with condiment counts c_j

    Examples
    --------
    >>> from genibp.models.multivar import SBDPrior
    >>> law = mv_jump_sampler(SBDPrior(alpha=0, beta=1, gamma=[1, 1]), [1, 1], 2)
    >>> law.total, law.concentration
    (BetaJump(a=2.0,b=1.0), [2.0, 2.0])
    >>> print(['{:.4f}'.format(m) for m in law.mean()])
    ['0.3333', '0.3333']

    """
    if not isinstance(prior, SBDPrior):
        raise ConfigurationError('closed-form jump vectors need a stable-Beta-Dirichlet prior, got {0!r}'.format(
            prior))
    return SBDJumpSampler(prior, counts, M)


class MultiPairSampler(trait.HasTraits):
    """ base class of the new-dish samplers of the multivariate buffet """
    prior = trait.Any()
    score_model = trait.Instance(MultiScoreModel)
    num_customers = trait.Int(0, min=0)

    def sample(self, rng):
        """ one (H vector, X) pair """
        raise NotImplementedError

    def sample_dishes(self, rng):
        """ the (H, X) pairs of all new dishes of one customer """
        raise NotImplementedError


class SBDPairSampler(MultiPairSampler):
    """ H. ~ Beta(1 - alpha, M + beta + alpha), direction ~ Dirichlet(gamma),
    X ~ Multinomial(1, direction)

    Examples
    --------
    >>> from genibp.models.multivar import SBDPrior, MultinomialScore
    >>> sampler = mv_pair_sampler(SBDPrior(theta=1, alpha=0, beta=1, gamma=[1, 1]), MultinomialScore(conds=2))
    >>> print('{:.6f}'.format(sampler.rate))
    1.000000
    >>> sampler.condiment_probabilities().tolist()
    [0.5, 0.5]

    """
    rate = trait.Float(read_only=True)

    def __init__(self, **kwargs):
        super(SBDPairSampler, self).__init__(**kwargs)
        rate = self.prior.new_dish_rate(self.num_customers)
        if is_infinite(rate):
            raise ExplosivityError('the stable-Beta-Dirichlet new dish rate is infinite', diagnosis=rate.reason)
        self.set_trait('rate', rate)
        prior = self.prior
        self.total = BetaJump(1. - prior.alpha, self.num_customers + prior.beta + prior.alpha)
        self.direction = stats.dirichlet(prior.gamma) if prior.q > 1 else None

    def condiment_probabilities(self):
        gamma = np.asarray(self.prior.gamma)
        return gamma / gamma.sum()

    def sample(self, rng):
        d = np.ones(1) if self.direction is None else self.direction.rvs(random_state=rng)[0]
        h = self.total.sample(rng) * d
        x = int(rng.choice(len(d), p=d / d.sum())) + 1
        return h, x

    def sample_dishes(self, rng):
        return [self.sample(rng) for _ in range(int(rng.poisson(self.rate)))]


class ThinningPairSampler(MultiPairSampler):
    """ new dishes of a finite multivariate measure by Poisson thinning

    a jump s of rho_q is kept with probability pi(s)(1 - pi(s))^M and
    scored from G(.|s) conditioned to be nonzero

    """

    def _keep(self, s):
        pi = float(self.score_model.pi_nonzero(s))
        return pi * (1. - pi) ** self.num_customers

    def sample(self, rng):
        cap = settings().max_iterations
        for _ in range(cap):
            s = self.prior.sample(rng)
            if rng.random() < self._keep(s):
                return s, self.score_model.sample_nonzero(s, rng)
        raise ResourceError('no new-dish proposal accepted in {0} draws'.format(cap))

    def sample_dishes(self, rng):
        out = []
        for _ in range(int(rng.poisson(self.prior.total_mass))):
            s = self.prior.sample(rng)
            if rng.random() < self._keep(s):
                out.append((s, self.score_model.sample_nonzero(s, rng)))
        return out


def mv_pair_sampler(prior, score, M=0):
    """ the sampler of new (H, X) pairs for customer M+1 """
    _check_mv_pair(prior, score)
    if isinstance(prior, SBDPrior):
        return SBDPairSampler(prior=prior, score_model=score, num_customers=M)
    return ThinningPairSampler(prior=prior, score_model=score, num_customers=M)


def _reject_jump(prior, score, entries, M, rng):
    """ a jump vector from (1 - pi)^M prod h(a|s) rho_q(s), by rejection

    one condiment on a uniform jump taken once by three customers has a
    Beta(2, 3) jump

    >>> from genibp.models.multivar import FiniteMultiLevy
    >>> from genibp.utils import make_rng
    >>> rho = FiniteMultiLevy(total_mass=1., dimension=1, sampler=lambda rng: rng.random(1))
    >>> rng = make_rng(3)
    >>> draws = np.array([_reject_jump(rho, MultinomialScore(conds=1), [1], 3, rng)[0] for _ in range(4000)])
    >>> bool(abs(draws.mean() - 0.4) < 4 * 0.2 / np.sqrt(4000))
    True

    """
    cap = settings().max_iterations
    for _ in range(cap):
        s = prior.sample(rng)
        with np.errstate(divide='ignore'):
            log_accept = M * np.log1p(-float(score.pi_nonzero(s)))
        log_accept += sum(score.log_h_factor(a, s) for a in entries)
        accept = np.exp(log_accept)
        if rng.random() < accept:
            return s
    raise ResourceError('no jump vector accepted in {0} draws for scores {1!r}'.format(cap, entries))


def _serve_mv_customer(state, rng=None):
    prior, score, M = state.prior, state.score_model, state.num_customers
    customer = M + 1
    existing, fresh = _streams(state, customer, rng)

    for k, dish in enumerate(state.dishes):
        stream = existing(k)
        if isinstance(prior, SBDPrior):
            s = mv_jump_sampler(prior, dish.condiment_counts(prior.q), M).sample(stream)
        else:
            s = _reject_jump(prior, score, [a for _, a in dish.scores], M, stream)
        a = score.sample(s, stream)
        if not score.is_zero(a):
            dish.record(customer, a)

    try:
        pairs = mv_pair_sampler(prior, score, M).sample_dishes(fresh)
    except ExplosivityError as err:
        raise ExplosivityError('customer {0} faces infinitely many new dishes: the prior is explosive'.format(
            customer), diagnosis=err.diagnosis)
    taken = set(state.atoms)
    dishes = []
    for _, x in pairs:
        atom = draw_atom(fresh, taken)
        taken.add(atom)
        dishes.append(MultiDishRecord(atom=atom, scores=[(customer, x)]))
    state.add_dishes(dishes)
    state.num_customers = customer
    state.new_dish_counts = list(state.new_dish_counts) + [len(pairs)]
    get_logger().debug('customer %d: %d new dishes, %d in total', customer, len(pairs), state.num_dishes)
    return len(pairs)


def mv_sample_next_customer(state, rng=None):
    """ a new state with customer M+1 added; the input is left untouched

    Examples
    --------
    >>> from genibp.models.multivar import FiniteMultiLevy, BivariateBernoulli, MultiBuffetState
    >>> rho = FiniteMultiLevy(total_mass=3., dimension=3, sampler=lambda rng: rng.dirichlet([1, 1, 1, 1])[:3])
    >>> state = MultiBuffetState(prior=rho, score_model=BivariateBernoulli(), seed=3)
    >>> later = mv_sample_next_customer(mv_sample_next_customer(state))
    >>> state.num_customers, later.num_customers
    (0, 2)
    >>> later.check()

    """
    _check_mv_pair(state.prior, state.score_model)
    state = state.copy()
    _serve_mv_customer(state, rng)
    return state


def mv_sample_buffet(prior, score, num_customers, rng=None, seed=None):
    """ the multivariate state after ``num_customers`` customers """
    _check_mv_pair(prior, score)
    state = MultiBuffetState(prior=prior, score_model=score, seed=seed)
    for _ in range(num_customers):
        _serve_mv_customer(state, rng)
    return state


def collapse(state):
    """ the univariate Bernoulli state obtained by summing out condiments

    Examples
    --------
    >>> from genibp.models.multivar import SBDPrior, MultinomialScore
    >>> state = mv_sample_buffet(SBDPrior(gamma=[1, 1]), MultinomialScore(conds=2), 3, seed=1)
    >>> flat = collapse(state)
    >>> flat.prior, flat.counts == state.counts
    (StableBeta(alpha=0.0,beta=1.0,theta=1.0), True)

    """
    if not isinstance(state.prior, SBDPrior):
        raise ConfigurationError('only stable-Beta-Dirichlet buffets collapse to a univariate buffet')
    flat = BuffetState(prior=state.prior.aggregate, score_model=Bernoulli(), num_customers=state.num_customers,
                       seed=state.seed, new_dish_counts=list(state.new_dish_counts))
    flat.add_dishes([DishRecord(atom=d.atom, scores=[(i, 1) for i, _ in d.scores]) for d in state.dishes])
    return flat


class MultiPosteriorSummary(trait.HasTraits):
    """ the stable-Beta-Dirichlet posterior after M customers

    Properties
    ----------
    prior : SBDPrior
        the prior the customers were served under
    tilted : SBDPrior
        law of the unobserved dishes, beta shifted by M
    jump_samplers : list of SBDJumpSampler
    condiment_counts : list of list of int
    atoms : list of float

    """
    prior = trait.Instance(SBDPrior)
    tilted = trait.Instance(SBDPrior)
    jump_samplers = trait.List()
    condiment_counts = trait.List(trait.List(trait.Int()))
    atoms = trait.List(trait.Float())
    num_customers = trait.Int(0)

    def take_probabilities(self, index):
        return take_probabilities(self.prior, self.condiment_counts[index], self.num_customers)

    def trait_df(self):
        """ pandas.DataFrame with one row per dish """
        data = []
        for k, law in enumerate(self.jump_samplers):
            r = self.take_probabilities(k)
            data.append({'atom': self.atoms[k], 'condiment_counts': tuple(self.condiment_counts[k]),
                         'total_a': law.total.a, 'total_b': law.total.b, 'take_probability': float(r.sum())})
        return pd.DataFrame(data, columns=['atom', 'condiment_counts', 'total_a', 'total_b', 'take_probability'])

    def to_dict(self):
        dishes = []
        for k, law in enumerate(self.jump_samplers):
            r = self.take_probabilities(k)
            dishes.append({'atom': self.atoms[k], 'condiment_counts': list(self.condiment_counts[k]),
                           'jump_law': law.to_dict(), 'take_probabilities': r.tolist()})
        return {'tilted': self.tilted.to_dict(), 'dishes': dishes}

    def _repr_html_(self):
        return self.trait_df().to_html()


def mv_posterior_of(state):
    """ tilted prior and per-dish jump vector laws of a multinomial buffet

    Examples
    --------
    >>> from genibp.models.multivar import SBDPrior, MultinomialScore, MultiBuffetState, MultiDishRecord
    >>> state = MultiBuffetState(prior=SBDPrior(alpha=0, beta=1, gamma=[1, 1]),
    ...                          score_model=MultinomialScore(conds=2), num_customers=3)
    >>> state.add_dish(MultiDishRecord(atom=0.4, scores=[(1, 1), (3, 1)]))
    >>> summary = mv_posterior_of(state)
    >>> summary.tilted.beta, summary.jump_samplers[0].concentration
    (4.0, [3.0, 1.0])
    >>> print(['{:.3f}'.format(r) for r in summary.take_probabilities(0)])
    ['0.375', '0.125']
    >>> summary.prior == state.prior, summary.prior.beta
    (True, 1.0)

    """
    if not isinstance(state.prior, SBDPrior):
        raise ConfigurationError('posterior summaries are closed form only for stable-Beta-Dirichlet priors')
    _check_mv_pair(state.prior, state.score_model)
    state.check()
    prior, M = state.prior, state.num_customers
    counts = state.condiment_counts()
    return MultiPosteriorSummary(prior=prior, tilted=prior.tilted(M), num_customers=M, condiment_counts=counts,
                                 atoms=state.atoms,
                                 jump_samplers=[mv_jump_sampler(prior, c, M) for c in counts])
