#!/usr/bin/env python
# -*- coding: utf-8 -*-

""" the sequential generative process

customer M+1 scores every existing dish by drawing its weight from the
posterior jump law and a score from G_A(.|weight), then tries
Poisson(phi_M) new dishes whose (weight, score) pairs come from the pair
sampler of the tilted density rho_M.

Random streams: with an explicit ``rng`` every draw comes from it in
order; otherwise a state with a seed gives existing dish k of customer i
the stream ``make_rng(seed, i, 0, k)`` and the new dishes of customer i
the stream ``make_rng(seed, i, 1)``, so draws do not depend on how many
other dishes were scored.

Examples
--------

>>> from genibp.models.levy import BetaProcess
>>> from genibp.models.scores import Bernoulli
>>> state = sample_buffet(BetaProcess(theta=2, beta=1), Bernoulli(), 5, seed=11)
>>> state.num_customers
5
>>> sample_buffet(BetaProcess(theta=2, beta=1), Bernoulli(), 5, seed=11).atoms == state.atoms
True

"""
import numpy as np
from traitlets.log import get_logger

from genibp.errors import ExplosivityError
from genibp.models.dishes import BuffetState, DishRecord
from genibp.calculus.exponents import tilt, check_pair
from genibp.buffet.pairs import pair_sampler
from genibp.posterior.summary import jump_law
from genibp.utils import make_rng


def draw_atom(rng, taken):
    """ a Uniform[0,1) atom not yet in use """
    atom = float(rng.random())
    while atom in taken:
        atom = float(rng.random())
    return atom


def _streams(state, customer, rng):
    """ (existing-dish stream factory, new-dish stream) of one customer """
    if rng is not None or state.seed is None:
        rng = np.random.default_rng() if rng is None else rng
        return (lambda k: rng), rng
    seed = state.seed
    return (lambda k: make_rng(seed, customer, 0, k)), make_rng(seed, customer, 1)


def _serve_customer(state, rng=None):
    """ add customer M+1 to the state in place; returns the new dish count """
    prior, score, M = state.prior, state.score_model, state.num_customers
    customer = M + 1
    existing, fresh = _streams(state, customer, rng)

    for k, dish in enumerate(state.dishes):
        stream = existing(k)
        law = jump_law(prior, score, [a for _, a in dish.scores], M)
        a = int(score.sample(law.sample(stream), stream))
        if a != 0:
            dish.record(customer, a)

    try:
        sampler = pair_sampler(tilt(prior, score, M))
    except ExplosivityError as err:
        raise ExplosivityError('customer {0} faces infinitely many new dishes: the prior is explosive'.format(
            customer), diagnosis=err.diagnosis)
    count = int(fresh.poisson(sampler.rate))
    taken = set(state.atoms)
    dishes = []
    for _ in range(count):
        h, x = sampler.sample(fresh)
        atom = draw_atom(fresh, taken)
        taken.add(atom)
        dishes.append(DishRecord(atom=atom, scores=[(customer, x)]))
    state.add_dishes(dishes)
    state.num_customers = customer
    state.new_dish_counts = list(state.new_dish_counts) + [count]
    get_logger().debug('customer %d: %d new dishes (rate %.6g), %d in total',
                       customer, count, sampler.rate, state.num_dishes)
    return count


def sample_first_customer(prior, score, rng=None, seed=None):
    """ the dishes and scores of customer 1

    Examples
    --------
    >>> from genibp.models.levy import GammaProcess
    >>> from genibp.models.scores import Poisson
    >>> state = sample_first_customer(GammaProcess(theta=2, beta=1), Poisson(b=1), np.random.default_rng(4))
    >>> state.num_customers, len(state.new_dish_counts)
    (1, 1)

    """
    check_pair(prior, score)
    state = BuffetState(prior=prior, score_model=score, seed=seed)
    _serve_customer(state, rng)
    return state


def sample_next_customer(state, rng=None):
    """ a new state with customer M+1 added; the input is left untouched

    Examples
    --------
    >>> from genibp.models.levy import StableBeta
    >>> from genibp.models.scores import Bernoulli
    >>> first = sample_first_customer(StableBeta(theta=3, alpha=0.3, beta=1), Bernoulli(), seed=2)
    >>> second = sample_next_customer(first)
    >>> first.num_customers, second.num_customers
    (1, 2)
    >>> second.atoms[:first.num_dishes] == first.atoms
    True

    """
    state = state.copy()
    _serve_customer(state, rng)
    return state


def sample_buffet(prior, score, num_customers, rng=None, seed=None):
    """ the state after ``num_customers`` customers

    Examples
    --------
    >>> from genibp.models.levy import BetaProcess
    >>> from genibp.models.scores import Bernoulli
    >>> sample_buffet(BetaProcess(), Bernoulli(), 0).num_dishes
    0

    """
    check_pair(prior, score)
    state = BuffetState(prior=prior, score_model=score, seed=seed)
    for _ in range(num_customers):
        _serve_customer(state, rng)
    return state


def sample_new_dishes(prior, score, M, rng):
    """ the new (weight, score) pairs of customer M+1, existing dishes ignored

    Examples
    --------
    >>> from genibp.models.levy import GammaProcess
    >>> from genibp.models.scores import Poisson
    >>> pairs = sample_new_dishes(GammaProcess(theta=2, beta=1), Poisson(b=1), 3, np.random.default_rng(0))
    >>> all(x >= 1 for h, x in pairs)
    True

    """
    sampler = pair_sampler(tilt(prior, score, M))
    return [sampler.sample(rng) for _ in range(int(rng.poisson(sampler.rate)))]
