#!/usr/bin/env python
# -*- coding: utf-8 -*-

""" Laplace exponents, tilting, new-dish rates and cumulants

every quantity is taken from ``genibp.calculus.mapping`` when the pair has
a closed form and from adaptive quadrature otherwise; ``method`` selects
'auto' (closed when available), 'closed' or 'quadrature'.

Examples
--------

>>> from genibp.models.levy import BetaProcess, GammaProcess
>>> from genibp.models.scores import Bernoulli, Poisson
>>> print('{:.6f}'.format(exponent_psi(BetaProcess(theta=1, beta=1), Bernoulli(), 3)))
1.833333
>>> print('{:.6f}'.format(exponent_psi(BetaProcess(theta=1, beta=1), Bernoulli(), 3, method='quadrature')))
1.833333

"""
from functools import lru_cache

import numpy as np
from traitlets.log import get_logger

from genibp.errors import ConfigurationError, ExplosivityError
from genibp.models.levy import LevyDensity, TiltedLevy, Infinite, compatible
from genibp.calculus import mapping
from genibp.calculus.quadrature import integrate

METHODS = ('auto', 'closed', 'quadrature')


def _log1mexp(x):
    """ log(1 - exp(x)) for x < 0 """
    with np.errstate(divide='ignore'):
        return np.log(-np.expm1(x))


def check_pair(levy, score):
    """ raise ConfigurationError for incompatible supports """
    if not compatible(levy.support, score):
        raise ConfigurationError('{0} scores need weights in (0,1), but {1!r} lives on {2}'.format(
            score.kind, levy, levy.support))


def _check_method(method):
    if method not in METHODS:
        raise ConfigurationError('method must be one of {0}, got {1!r}'.format(METHODS, method))


def _check_order(M):
    if int(M) != M or M < 0:
        raise ConfigurationError('tilt orders are nonnegative integers, got {0}'.format(M))
    return int(M)


def _closed(levy, score, key, method):
    """ the closed form for ``key``, honouring the method """
    if method == 'quadrature':
        return None
    func = mapping.lookup(levy, score, key)
    if func is None and method == 'closed':
        raise ConfigurationError('no closed form of {0} for {1!r} with {2!r}'.format(key, levy, score))
    return func


@lru_cache(maxsize=1024)
def _tilt(base, score, M):
    if M == 0:
        reexpressed = base
    else:
        func = mapping.lookup(base, score, 'tilt')
        reexpressed = None if func is None else func(base, score, M)
    return TiltedLevy(base=base, score=score, tilt_order=M, reexpressed=reexpressed)


def tilt(levy, score, M):
    """ rho_M(s) = (1 - pi_A(s))^M rho(s)

    tilting an already tilted density adds the orders

    Examples
    --------
    >>> from genibp.models.levy import GammaProcess, StableBeta
    >>> from genibp.models.scores import Poisson, NegBinomial
    >>> tilt(GammaProcess(theta=1, beta=1), Poisson(b=2), 3).reexpressed
    GammaProcess(beta=7.0,theta=1.0)
    >>> tilt(StableBeta(theta=1, alpha=0.5, beta=1), NegBinomial(r=2), 2).reexpressed
    StableBeta(alpha=0.5,beta=5.0,theta=1.0)
    >>> once = tilt(GammaProcess(theta=1, beta=1), Poisson(b=2), 1)
    >>> tilt(once, Poisson(b=2), 2) == tilt(GammaProcess(theta=1, beta=1), Poisson(b=2), 3)
    True

    """
    M = _check_order(M)
    if isinstance(levy, TiltedLevy):
        if levy.score != score:
            raise ConfigurationError('cannot tilt {0!r} by a different score model {1!r}'.format(levy, score))
        levy, M = levy.base, levy.tilt_order + M
    check_pair(levy, score)
    return _tilt(levy, score, M)


def exponent_psi(levy, score, M, method='auto'):
    """ Psi(f_M) = int (1 - (1 - pi_A(s))^M) rho(s) ds

    Raises
    ------
    ExplosivityError
        if the integral diverges

    Examples
    --------
    >>> from genibp.models.levy import GammaProcess, StablePositive
    >>> from genibp.models.scores import Poisson
    >>> exponent_psi(GammaProcess(theta=1, beta=1), Poisson(b=1), 0)
    0.0
    >>> a = exponent_psi(StablePositive(alpha=0.5), Poisson(b=1), 4)
    >>> b = exponent_psi(StablePositive(alpha=0.5), Poisson(b=1), 4, method='quadrature')
    >>> print('{:.6f} {:.6f}'.format(a, b))
    2.000000 2.000000

    """
    _check_method(method)
    M = _check_order(M)
    check_pair(levy, score)
    if M == 0:
        return 0.
    func = _closed(levy, score, 'exponent', method)
    if func is not None:
        return func(levy, score, M)

    def integrand(s, sc):
        return np.exp(_log1mexp(M * score.log_zero_mass(s, sc)) + levy.log_density(s, sc))
    return float(integrate(integrand, levy.support, what='Psi(f_{0})'.format(M)))


def new_dish_rate(levy, score, method='auto'):
    """ expected number of new dishes, int pi_A(s) rho_M(s) ds

    equals Psi(f_(M+1)) - Psi(f_M) of the untilted density

    Returns
    -------
    rate : float or Infinite

    Examples
    --------
    >>> from genibp.models.levy import BetaProcess
    >>> from genibp.models.scores import Bernoulli
    >>> rho = tilt(BetaProcess(theta=2, beta=1), Bernoulli(), 3)
    >>> print('{:.6f}'.format(new_dish_rate(rho, Bernoulli())))
    0.500000
    >>> print('{:.6f}'.format(new_dish_rate(rho, Bernoulli(), method='quadrature')))
    0.500000

    """
    _check_method(method)
    tilted = levy if isinstance(levy, TiltedLevy) else tilt(levy, score, 0)
    if tilted.score != score:
        raise ConfigurationError('{0!r} was tilted by {1!r}, not {2!r}'.format(tilted, tilted.score, score))
    effective = tilted.reexpressed
    if effective is not None:
        func = _closed(effective, score, 'exponent', method)
        if func is not None:
            return func(effective, score, 1)
    elif method == 'closed':
        raise ConfigurationError('no closed form of the new dish rate for {0!r}'.format(tilted))

    def integrand(s, sc):
        return np.exp(score.log_pi_nonzero(s, sc) + tilted.log_density(s, sc))
    try:
        return float(integrate(integrand, tilted.support, what='new dish rate'))
    except ExplosivityError as err:
        get_logger().warning('new dish rate of %r is infinite: %s', tilted, err.diagnosis)
        return Infinite(err.diagnosis)


def cumulant_kappa(levy, j, tilt_rate=0., method='auto'):
    """ kappa_j(t) = int s^j T_t(s) rho(s) ds

    the tilt T_t(s) is exp(-t s) on the half line and (1-s)^t on (0,1)

    Examples
    --------
    >>> from genibp.models.levy import GammaProcess, StablePositive
    >>> print('{:.6f}'.format(cumulant_kappa(GammaProcess(theta=2, beta=1), 2, 1.)))
    0.500000
    >>> print('{:.6f}'.format(cumulant_kappa(GammaProcess(theta=2, beta=1), 2, 1., method='quadrature')))
    0.500000
    >>> cumulant_kappa(StablePositive(alpha=0.5), 1)
    Traceback (most recent call last):
     ...
    genibp.errors.ExplosivityError: kappa_1(0) of a positive stable density is infinite

    """
    _check_method(method)
    if int(j) != j or j < 1:
        raise ConfigurationError('cumulant order j must be a positive integer, got {0}'.format(j))
    if not (np.isfinite(tilt_rate) and tilt_rate >= 0):
        raise ConfigurationError('tilt rate must be >= 0, got {0}'.format(tilt_rate))
    j = int(j)
    if method != 'quadrature':
        func = mapping.lookup_kappa(levy)
        if func is not None:
            return func(levy, j, tilt_rate)
        if method == 'closed':
            raise ConfigurationError('no closed form of kappa for {0!r}'.format(levy))

    if levy.support == 'UnitInterval':
        def integrand(s, sc):
            return np.exp(j * np.log(s) + tilt_rate * np.log(sc) + levy.log_density(s, sc))
    else:
        def integrand(s, sc):
            return np.exp(j * np.log(s) - tilt_rate * s + levy.log_density(s, sc))
    return float(integrate(integrand, levy.support, what='kappa_{0}({1})'.format(j, tilt_rate)))


def mean_total(levy, score, method='auto'):
    """ expected sum of one customer's scores, int E[A|s] rho(s) ds

    Returns
    -------
    mean : float or Infinite

    Examples
    --------
    >>> from genibp.models.levy import StableBeta
    >>> from genibp.models.scores import NegBinomial
    >>> mean_total(StableBeta(theta=1, alpha=0.2, beta=0.5), NegBinomial(r=1))
    Infinite('negative binomial scores need beta + alpha > 1 for a finite mean')

    """
    _check_method(method)
    check_pair(levy, score)
    func = _closed(levy, score, 'mean_total', method)
    if func is not None:
        return func(levy, score)

    def integrand(s, sc):
        with np.errstate(divide='ignore'):
            return np.exp(np.log(score.mean(s, sc)) + levy.log_density(s, sc))
    try:
        return float(integrate(integrand, levy.support, what='mean total score'))
    except ExplosivityError as err:
        return Infinite(err.diagnosis)


def log_dish_integral(levy, score, scores, M, method='auto'):
    """ log int (1 - pi_A(s))^M prod h(a_n|s) rho(s) ds for one observed dish

    Examples
    --------
    >>> from genibp.models.levy import GammaProcess
    >>> from genibp.models.scores import Poisson
    >>> args = GammaProcess(theta=2, beta=1), Poisson(b=1.5), [0, 2, 1], 3
    >>> a = log_dish_integral(*args)
    >>> b = log_dish_integral(*args, method='quadrature')
    >>> bool(abs(a - b) < 1e-8)
    True

    """
    _check_method(method)
    func = _closed(levy, score, 'dish_integral', method)
    if func is not None:
        return func(levy, score, list(scores), M)
    from genibp.calculus.quadrature import integrate_log
    nonzero = [a for a in scores if a != 0]

    def logfunc(s, sc):
        return M * score.log_zero_mass(s, sc) + levy.log_density(s, sc) + score.log_h_product(nonzero, s, sc)
    return float(integrate_log(logfunc, levy.support, what='dish integral'))
