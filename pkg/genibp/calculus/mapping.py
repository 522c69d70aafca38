#!/usr/bin/env python
# -*- coding: utf-8 -*-

""" closed forms for the named (Lévy density, score model) pairs

``CLOSED_FORMS`` maps the class path of a Lévy density to the class path
of a score model, and then to the dotted paths of the functions that
evaluate each quantity in closed form:

exponent
    f(levy, score, M) -> Psi(f_M)
tilt
    f(levy, score, M) -> the tilted density as a named kind
pair
    class path of the sampler of (nonzero score, weight) pairs
jump
    f(levy, score, c, M) -> posterior law of an observed dish weight
dish_integral
    f(levy, score, scores, M) -> log of the integral of one dish
mean_total
    f(levy, score) -> E[sum of scores of one customer]

``KAPPA`` maps a Lévy density class path to its cumulant function.
Pairs missing from the tables fall back to quadrature.

Examples
--------

>>> from genibp.models.levy import GammaProcess
>>> from genibp.models.scores import Poisson
>>> func = lookup(GammaProcess(theta=2, beta=1), Poisson(b=1), 'exponent')
>>> print('{:.6f}'.format(func(GammaProcess(theta=2, beta=1), Poisson(b=1), 3)))
2.772589

"""
import numpy as np
from scipy.special import gammaln, betaln, digamma, gamma, gammasgn

from genibp.utils import str_to_obj, obj_to_str
from genibp.errors import ExplosivityError
from genibp.models.levy import (BetaProcess, StableBeta, GeneralizedGamma,
                                StablePositive, Infinite)

_BERNOULLI = 'genibp.models.scores.Bernoulli'
_POISSON = 'genibp.models.scores.Poisson'
_NEGBIN = 'genibp.models.scores.NegBinomial'
_HERE = 'genibp.calculus.mapping.'


def tilt_rate(score, M):
    """ the real exponent x with (1 - pi_A(s))^M = (1-s)^x or exp(-x s) """
    if score.kind == 'Bernoulli':
        return float(M)
    if score.kind == 'NegBinomial':
        return score.r * M
    return score.b * M


def beta_family(levy):
    """ (theta, alpha, beta) of a beta or stable-beta density """
    if levy.kind == 'BetaProcess':
        return levy.theta, 0., levy.beta
    return levy.theta, levy.alpha, levy.beta


def gg_family(levy):
    """ (alpha, beta) of a generalized gamma or positive stable density """
    if levy.kind == 'StablePositive':
        return levy.alpha, 0.
    return levy.alpha, levy.beta


def _gamma_ratio(x, y):
    """ Gamma(x)/Gamma(y), zero at the poles of Gamma(y) """
    if y <= 0 and y == np.floor(y):
        return 0.
    return gammasgn(x) * gammasgn(y) * np.exp(gammaln(x) - gammaln(y))


def beta_family_exponent(theta, alpha, beta, x):
    """ theta * int (1 - (1-s)^x) s^(-alpha-1) (1-s)^(beta+alpha-1) ds

    integer x sums positive beta functions; real x uses digamma (alpha=0)
    or the gamma-ratio difference

    Examples
    --------
    >>> print('{:.10f}'.format(beta_family_exponent(1., 0., 1., 3)))
    1.8333333333
    >>> a = beta_family_exponent(2., 0.3, 0.5, 4)
    >>> b = beta_family_exponent(2., 0.3, 0.5, 4. + 1e-12)
    >>> bool(abs(a - b) < 1e-9)
    True

    """
    if x == 0:
        return 0.
    if x == int(x) and x <= 10**5:
        k = np.arange(int(x))
        return theta * float(np.sum(np.exp(betaln(1. - alpha, beta + alpha + k))))
    if alpha == 0:
        return theta * float(digamma(beta + x) - digamma(beta))
    c = beta + alpha
    return theta * float(gamma(-alpha) * (_gamma_ratio(c, beta) - _gamma_ratio(c + x, beta + x)))


def _with_beta(levy, beta):
    if levy.kind == 'BetaProcess':
        return BetaProcess(theta=levy.theta, beta=beta)
    return StableBeta(theta=levy.theta, alpha=levy.alpha, beta=beta)


# beta family ##############################################################

def beta_exponent(levy, score, M):
    theta, alpha, beta = beta_family(levy)
    return beta_family_exponent(theta, alpha, beta, tilt_rate(score, M))


def beta_tilt(levy, score, M):
    return _with_beta(levy, levy.beta + tilt_rate(score, M))


def beta_bernoulli_jump(levy, score, c, M):
    from genibp.posterior.jumps import BetaJump
    theta, alpha, beta = beta_family(levy)
    return BetaJump(c - alpha, beta + alpha + M - c)


def beta_negbin_jump(levy, score, c, M):
    from genibp.posterior.jumps import BetaJump
    theta, alpha, beta = beta_family(levy)
    return BetaJump(c - alpha, beta + alpha + score.r * M)


def beta_bernoulli_dish(levy, score, scores, M):
    theta, alpha, beta = beta_family(levy)
    c = int(sum(scores))
    return float(np.log(theta) + betaln(c - alpha, beta + alpha + M - c))


def beta_negbin_dish(levy, score, scores, M):
    theta, alpha, beta = beta_family(levy)
    c = sum(scores)
    return float(np.log(theta) + score.log_constant(scores) + betaln(c - alpha, beta + alpha + score.r * M))


def beta_bernoulli_mean(levy, score):
    theta, alpha, beta = beta_family(levy)
    return theta * float(np.exp(betaln(1. - alpha, beta + alpha)))


def beta_negbin_mean(levy, score):
    theta, alpha, beta = beta_family(levy)
    if beta + alpha <= 1:
        return Infinite('negative binomial scores need beta + alpha > 1 for a finite mean')
    return score.r * theta * float(np.exp(betaln(1. - alpha, beta + alpha - 1.)))


def beta_poisson_mean(levy, score):
    return score.b * beta_bernoulli_mean(levy, score)


_BETA_FAMILY = {
    _BERNOULLI: {
        'exponent': _HERE + 'beta_exponent',
        'tilt': _HERE + 'beta_tilt',
        'pair': 'genibp.buffet.pairs.BernoulliBeta',
        'jump': _HERE + 'beta_bernoulli_jump',
        'dish_integral': _HERE + 'beta_bernoulli_dish',
        'mean_total': _HERE + 'beta_bernoulli_mean',
    },
    _NEGBIN: {
        'exponent': _HERE + 'beta_exponent',
        'tilt': _HERE + 'beta_tilt',
        'pair': 'genibp.buffet.pairs.NBBeta',
        'jump': _HERE + 'beta_negbin_jump',
        'dish_integral': _HERE + 'beta_negbin_dish',
        'mean_total': _HERE + 'beta_negbin_mean',
    },
    _POISSON: {
        'mean_total': _HERE + 'beta_poisson_mean',
    },
}


# gamma process with Poisson scores ########################################

def gamma_poisson_exponent(levy, score, M):
    return levy.theta * float(np.log1p(score.b * M / levy.beta))


def gamma_poisson_tilt(levy, score, M):
    from genibp.models.levy import GammaProcess
    return GammaProcess(theta=levy.theta, beta=levy.beta + score.b * M)


def gamma_poisson_jump(levy, score, c, M):
    from genibp.posterior.jumps import ScaledGammaJump
    return ScaledGammaJump(c, levy.beta + score.b * M)


def gamma_poisson_dish(levy, score, scores, M):
    c = sum(scores)
    return float(np.log(levy.theta) + gammaln(c) - c * np.log(levy.beta + score.b * M)
                 + score.log_constant(scores))


def gamma_poisson_mean(levy, score):
    return score.b * levy.theta / levy.beta


# generalized gamma and positive stable with Poisson scores ###############

def gg_poisson_exponent(levy, score, M):
    alpha, beta = gg_family(levy)
    return float((beta + score.b * M)**alpha - beta**alpha)


def gg_poisson_tilt(levy, score, M):
    alpha, beta = gg_family(levy)
    rate = beta + score.b * M
    if rate == 0:
        return StablePositive(alpha=alpha)
    return GeneralizedGamma(alpha=alpha, beta=rate)


def gg_poisson_jump(levy, score, c, M):
    from genibp.posterior.jumps import ScaledGammaJump
    alpha, beta = gg_family(levy)
    return ScaledGammaJump(c - alpha, beta + score.b * M)


def gg_poisson_dish(levy, score, scores, M):
    alpha, beta = gg_family(levy)
    c = sum(scores)
    rate = beta + score.b * M
    return float(np.log(alpha) + gammaln(c - alpha) - gammaln(1. - alpha)
                 + (alpha - c) * np.log(rate) + score.log_constant(scores))


def gg_poisson_mean(levy, score):
    alpha, beta = gg_family(levy)
    if beta == 0:
        return Infinite('a positive stable density has infinite mean')
    return score.b * alpha * beta**(alpha - 1.)


_GG_POISSON = {
    _POISSON: {
        'exponent': _HERE + 'gg_poisson_exponent',
        'tilt': _HERE + 'gg_poisson_tilt',
        'pair': 'genibp.buffet.pairs.GenGammaPair',
        'jump': _HERE + 'gg_poisson_jump',
        'dish_integral': _HERE + 'gg_poisson_dish',
        'mean_total': _HERE + 'gg_poisson_mean',
    },
}

_STABLE_POISSON = {_POISSON: dict(_GG_POISSON[_POISSON], pair='genibp.buffet.pairs.SibuyaGamma')}

CLOSED_FORMS = {
    'genibp.models.levy.BetaProcess': _BETA_FAMILY,
    'genibp.models.levy.StableBeta': _BETA_FAMILY,
    'genibp.models.levy.GammaProcess': {
        _POISSON: {
            'exponent': _HERE + 'gamma_poisson_exponent',
            'tilt': _HERE + 'gamma_poisson_tilt',
            'pair': 'genibp.buffet.pairs.LogarithmicGamma',
            'jump': _HERE + 'gamma_poisson_jump',
            'dish_integral': _HERE + 'gamma_poisson_dish',
            'mean_total': _HERE + 'gamma_poisson_mean',
        },
    },
    'genibp.models.levy.GeneralizedGamma': _GG_POISSON,
    'genibp.models.levy.StablePositive': _STABLE_POISSON,
}


# cumulants kappa_j(t) = int s^j tilt(s) rho(s) ds #########################

def gamma_kappa(levy, j, t):
    return float(np.exp(np.log(levy.theta) + gammaln(j) - j * np.log(levy.beta + t)))


def gg_kappa(levy, j, t):
    alpha, beta = gg_family(levy)
    if beta + t == 0:
        raise ExplosivityError('kappa_{0}(0) of a positive stable density is infinite'.format(j),
                               diagnosis='no exponential tilting')
    return float(np.exp(np.log(alpha) + gammaln(j - alpha) - gammaln(1. - alpha)
                        + (alpha - j) * np.log(beta + t)))


def beta_kappa(levy, j, t):
    theta, alpha, beta = beta_family(levy)
    return float(np.exp(np.log(theta) + betaln(j - alpha, beta + alpha + t)))


KAPPA = {
    'genibp.models.levy.BetaProcess': _HERE + 'beta_kappa',
    'genibp.models.levy.StableBeta': _HERE + 'beta_kappa',
    'genibp.models.levy.GammaProcess': _HERE + 'gamma_kappa',
    'genibp.models.levy.GeneralizedGamma': _HERE + 'gg_kappa',
    'genibp.models.levy.StablePositive': _HERE + 'gg_kappa',
}


def lookup(levy, score, key):
    """ the closed form of ``key`` for a (levy, score) pair, or None

    'pair' entries return the sampler class

    Examples
    --------
    >>> from genibp.models.levy import BetaProcess
    >>> from genibp.models.scores import Bernoulli, Poisson
    >>> lookup(BetaProcess(), Bernoulli(), 'pair').__name__
    'BernoulliBeta'
    >>> lookup(BetaProcess(), Poisson(b=1), 'tilt') is None
    True

    """
    path = CLOSED_FORMS.get(obj_to_str(levy), {}).get(obj_to_str(score), {}).get(key)
    return None if path is None else str_to_obj(path)


def lookup_kappa(levy):
    path = KAPPA.get(obj_to_str(levy))
    return None if path is None else str_to_obj(path)
