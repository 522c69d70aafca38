#!/usr/bin/env python
# -*- coding: utf-8 -*-

""" statistical tests used by the verification suites

Examples
--------

>>> from scipy import stats as st
>>> rng = np.random.default_rng(0)
>>> draws = rng.poisson(2., size=5000)
>>> stat, pvalue, dof = chi_square_discrete(draws, st.poisson(2.).pmf)
>>> bool(pvalue > 1e-3), dof > 3
(True, True)

"""
import numpy as np
from scipy import stats


def bonferroni(family_rate, num_tests):
    """ per-test level keeping the family-wise error below family_rate

    >>> bonferroni(0.01, 4)
    0.0025

    """
    return family_rate / max(int(num_tests), 1)


def merge_bins(expected, min_expected=5.):
    """ group consecutive bins until each group expects at least min_expected

    a short last group is merged into its predecessor

    Examples
    --------
    >>> merge_bins([1., 2., 6., 10., 3., 1.])
    [[0, 1, 2], [3, 4, 5]]

    """
    groups, current, mass = [], [], 0.
    for k, e in enumerate(expected):
        current.append(k)
        mass += e
        if mass >= min_expected:
            groups.append(current)
            current, mass = [], 0.
    if current:
        if groups:
            groups[-1].extend(current)
        else:
            groups.append(current)
    return groups


def _discrete_probs(samples, pmf, start, tail=1e-12, cap=10 ** 5):
    samples = np.asarray(samples, dtype=int)
    top = max(int(samples.max()) if samples.size else start, start)
    probs = [float(pmf(k)) for k in range(start, top + 1)]
    k = top
    while 1. - sum(probs) > tail and k < start + cap:
        k += 1
        probs.append(float(pmf(k)))
    probs[-1] += max(1. - sum(probs), 0.)
    return np.array(probs), k


def chi_square_discrete(samples, pmf, start=0, min_expected=5.):
    """ chi-square goodness of fit of integer draws to a pmf on start, start+1, ...

    the last bin absorbs the upper tail and bins are merged until every
    expected count is at least ``min_expected``

    Returns
    -------
    statistic, pvalue, degrees of freedom

    """
    samples = np.asarray(samples, dtype=int)
    probs, top = _discrete_probs(samples, pmf, start)
    n = samples.size
    observed = np.bincount(np.clip(samples - start, 0, top - start), minlength=top - start + 1)
    groups = merge_bins(n * probs, min_expected)
    obs = np.array([observed[g].sum() for g in groups], dtype=float)
    exp = np.array([probs[g].sum() for g in groups]) * n
    if len(groups) < 2:
        return 0., 1., 0
    exp *= obs.sum() / exp.sum()
    stat, pvalue = stats.chisquare(obs, exp)
    return float(stat), float(pvalue), len(groups) - 1


def chi_square_categories(counts, probs, min_expected=5.):
    """ chi-square of category counts against probabilities, sparse
    categories merged

    >>> stat, pvalue, dof = chi_square_categories([50, 50], [0.5, 0.5])
    >>> pvalue, dof
    (1.0, 1)

    """
    counts = np.asarray(counts, dtype=float)
    probs = np.asarray(probs, dtype=float)
    order = np.argsort(-probs, kind='stable')
    groups = merge_bins(counts.sum() * probs[order], min_expected)
    obs = np.array([counts[order[g]].sum() for g in groups])
    exp = np.array([probs[order[g]].sum() for g in groups]) * counts.sum()
    if len(groups) < 2:
        return 0., 1., 0
    exp *= obs.sum() / exp.sum()
    stat, pvalue = stats.chisquare(obs, exp)
    return float(stat), float(pvalue), len(groups) - 1


def ks_test(samples, cdf):
    """ one-sample Kolmogorov-Smirnov test; returns (statistic, pvalue) """
    result = stats.kstest(np.asarray(samples, dtype=float), cdf)
    return float(result.statistic), float(result.pvalue)


def ks_two_sample(first, second):
    result = stats.ks_2samp(np.asarray(first, dtype=float), np.asarray(second, dtype=float))
    return float(result.statistic), float(result.pvalue)


def z_score(successes, trials, probability):
    """ standardized deviation of a binomial count

    >>> z_score(55, 100, 0.5)
    1.0

    """
    sd = np.sqrt(trials * probability * (1. - probability))
    if sd == 0:
        return 0. if successes == trials * probability else np.inf
    return float((successes - trials * probability) / sd)


def z_level(level):
    """ two-sided normal critical value of a test level """
    return float(stats.norm.isf(level / 2.))


def homogeneity(first, second, min_expected=5.):
    """ chi-square test that two Counters of categories share one law

    categories with few pooled observations are merged into one cell

    """
    keys = sorted(set(first) | set(second), key=lambda k: -(first.get(k, 0) + second.get(k, 0)))
    rows, rest = [], [0, 0]
    for key in keys:
        a, b = first.get(key, 0), second.get(key, 0)
        if a + b >= 2 * min_expected:
            rows.append([a, b])
        else:
            rest[0] += a
            rest[1] += b
    if sum(rest):
        rows.append(rest)
    if len(rows) < 2:
        return 0., 1., 0
    result = stats.chi2_contingency(np.array(rows, dtype=float), correction=False)
    return float(result[0]), float(result[1]), int(result[2])


def total_variation(first, second):
    """ total variation distance of the empirical laws of two Counters

    >>> from collections import Counter
    >>> total_variation(Counter('aab'), Counter('abb'))
    0.3333333333333333

    """
    n1, n2 = float(sum(first.values())), float(sum(second.values()))
    keys = set(first) | set(second)
    return 0.5 * sum(abs(first.get(k, 0) / n1 - second.get(k, 0) / n2) for k in keys)


def relative_error(value, reference):
    """ |value - reference| / |reference|, absolute when the reference is 0 """
    value, reference = float(value), float(reference)
    if reference == 0:
        return abs(value)
    return abs(value - reference) / abs(reference)
