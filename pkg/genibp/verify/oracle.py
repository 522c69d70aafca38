#!/usr/bin/env python
# -*- coding: utf-8 -*-

""" brute-force simulation of the hierarchical model

jumps of rho restricted to s >= epsilon form a Poisson process with
finitely many points; each customer scores every jump independently.
The tail mass T(s) = int_s rho is tabulated once per (density, epsilon)
with scipy's QUADPACK on a cached grid and inverted by binary search, so
the oracle shares no sampling code with genibp.buffet.

Examples
--------

>>> from genibp.models.levy import BetaProcess
>>> from genibp.models.scores import Bernoulli
>>> result = truncated_crm_oracle(BetaProcess(theta=1, beta=1), Bernoulli(), 3, 1e-4,
...                               np.random.default_rng(0), replicates=200)
>>> sum(result.patterns.values()), len(result.dish_counts)
(200, 200)
>>> print('{:.6f}'.format(result.tail_mass))
9.210340

"""
from collections import Counter
from functools import lru_cache

import numpy as np
from scipy import integrate as sp_integrate
from traitlets.log import get_logger

from genibp.errors import ResourceError, ConfigurationError
from genibp.calculus.quadrature import settings

# expected jump counts above this are intractable
MAX_EXPECTED_JUMPS = 10 ** 6


def _density(levy):
    if levy.support == 'UnitInterval':
        return lambda s: float(np.exp(levy.log_density(s, 1. - s)))
    return lambda s: float(np.exp(levy.log_density(s)))


def _complement_density(levy):
    """ rho(1 - u) as a function of u, exact near s = 1 """
    return lambda u: float(np.exp(levy.log_density(1. - u, u)))


def _cells(levy, grid):
    """ rho mass of every grid cell and of (grid[-1], end of support) """
    limit = settings().limit
    density = _density(levy)
    if levy.support != 'UnitInterval':
        cells = [sp_integrate.quad(density, a, b, limit=limit)[0] for a, b in zip(grid[:-1], grid[1:])]
        return np.array(cells), 0.
    complement = _complement_density(levy)
    cells = []
    for a, b in zip(grid[:-1], grid[1:]):
        if a < 0.5:
            cells.append(sp_integrate.quad(density, a, b, limit=limit)[0])
        else:
            cells.append(sp_integrate.quad(complement, 1. - b, 1. - a, limit=limit)[0])
    end = sp_integrate.quad(complement, 0., 1. - grid[-1], limit=limit)[0]
    return np.array(cells), end


def _knots(levy, epsilon, knots):
    if levy.support == 'UnitInterval':
        if not 0 < epsilon < 1:
            raise ConfigurationError('the truncation level must lie in (0, 1), got {0}'.format(epsilon))
        half = max(epsilon, 0.5)
        lower = np.geomspace(epsilon, half, knots // 2)
        upper = 1. - np.geomspace(1. - half, 1e-15, knots // 2)
        return np.unique(np.concatenate([lower, upper]))
    if not epsilon > 0:
        raise ConfigurationError('the truncation level must be positive, got {0}'.format(epsilon))
    top = max(epsilon, 1.)
    while top < 1e300 and np.log(top) + levy.log_density(top) > -40.:
        top *= 2.
    return np.geomspace(epsilon, top, knots)


@lru_cache(maxsize=64)
def tail_table(levy, epsilon, knots=4096):
    """ (grid, T(grid)) with T decreasing from T(epsilon) to the mass
    beyond the last knot

    Examples
    --------
    >>> from genibp.models.levy import GammaProcess
    >>> grid, tail = tail_table(GammaProcess(theta=1, beta=1), 0.5)
    >>> bool(np.all(np.diff(tail) <= 0)), float(tail[-1])
    (True, 0.0)

    on the unit interval the mass between the last knot and 1 is kept

    >>> from genibp.models.levy import BetaProcess
    >>> grid, tail = tail_table(BetaProcess(theta=1, beta=0.5), 0.5)
    >>> exact = 2. * np.arcsinh(1.)
    >>> bool(abs(tail[0] - exact) < 1e-8 * exact), bool(tail[-1] > 0)
    (True, True)

    """
    grid = _knots(levy, epsilon, knots)
    cells, end = _cells(levy, grid)
    tail = np.concatenate([np.cumsum(cells[::-1])[::-1], [0.]]) + end
    get_logger().debug('oracle tail table of %r at epsilon=%g: T=%.6g on %d knots',
                       levy, epsilon, tail[0], len(grid))
    return grid, tail


def invert_tail(grid, tail, u):
    """ s with T(s) = u, log-linear between knots; u below the last
    tabulated mass maps to the last knot

    >>> s = invert_tail(np.array([0.25, 0.5]), np.array([1., 0.5]), [1., 0.5, 0.])
    >>> print(' '.join('{:.6f}'.format(x) for x in s))
    0.250000 0.500000 0.500000

    """
    u = np.atleast_1d(u)
    # tail is decreasing; search the increasing reversed copy
    rev = tail[::-1]
    idx = len(tail) - np.searchsorted(rev, u, side='left')
    idx = np.clip(idx, 1, len(tail) - 1)
    lo, hi = grid[idx - 1], grid[idx]
    t_lo, t_hi = tail[idx - 1], tail[idx]
    frac = np.where(t_lo > t_hi, (t_lo - u) / np.where(t_lo > t_hi, t_lo - t_hi, 1.), 0.)
    frac = np.clip(frac, 0., 1.)
    return np.exp(np.log(lo) + frac * (np.log(hi) - np.log(lo)))


def bias_bound(levy, score, M, epsilon):
    """ M int_0^epsilon pi_A(s) rho(s) ds, bounding the expected number of
    dishes the truncation misses """
    def func(s):
        return float(score.pi_nonzero(s) * np.exp(levy.log_density(s)))
    return M * sp_integrate.quad(func, 0., epsilon, limit=settings().limit)[0]


class OracleResult(object):
    """ replicated brute-force draws

    Properties
    ----------
    patterns : collections.Counter
        unordered score patterns, keyed like genibp.posterior.feature_pattern
    dish_counts : list of int
        observed dishes per replicate
    tail_mass : float
        expected number of simulated jumps, T(epsilon)
    bias : float
        bias_bound of the truncation

    """

    def __init__(self, patterns, dish_counts, tail_mass, bias):
        self.patterns = patterns
        self.dish_counts = dish_counts
        self.tail_mass = tail_mass
        self.bias = bias

    def frequency(self, pattern):
        return self.patterns.get(pattern, 0) / float(sum(self.patterns.values()))

    def to_dict(self):
        return {'replicates': len(self.dish_counts), 'tail_mass': self.tail_mass, 'bias_bound': self.bias,
                'mean_dish_count': float(np.mean(self.dish_counts)) if self.dish_counts else 0.}


def truncated_crm_oracle(prior, score, M, epsilon, rng, replicates=1):
    """ unordered score patterns of M customers under the truncated measure

    Raises
    ------
    ResourceError
        when T(epsilon) exceeds MAX_EXPECTED_JUMPS

    """
    grid, tail = tail_table(prior, float(epsilon))
    total = float(tail[0])
    if total > MAX_EXPECTED_JUMPS:
        raise ResourceError('truncation at epsilon={0} leaves {1:.3g} expected jumps; raise epsilon'.format(
            epsilon, total))
    patterns = Counter()
    counts = []
    for _ in range(int(replicates)):
        num = int(rng.poisson(total))
        jumps = invert_tail(grid, tail, rng.random(num) * total) if num else np.empty(0)
        columns = []
        for s in jumps:
            column = tuple((i + 1, int(a)) for i, a in enumerate(score.sample(float(s), rng, size=M)) if a != 0)
            if column:
                columns.append(column)
        patterns[tuple(sorted(columns))] += 1
        counts.append(len(columns))
    return OracleResult(patterns, counts, total, bias_bound(prior, score, M, epsilon))
