#!/usr/bin/env python
# -*- coding: utf-8 -*-

""" named batteries of verification checks

each suite is a list of checks; check ``k`` of suite ``j`` draws from the
stream ``make_rng(seed, j, k)`` only, so a report is reproducible from
(suite, seed, budget) whatever the number of worker threads. Checks
return plain records: statistical ones carry a p-value and are judged at
the Bonferroni-corrected level of their suite, exact ones carry an error
and their own tolerance.

=======================  ======================================  ==========
suite                    checks                                  budget
=======================  ======================================  ==========
levy-closed-forms        closed vs quadrature exponents,         max tilt
                         telescoping, transforms
pair-pmfs                score laws, Sibuya, Logarithmic, NB,    draws
                         H marginals
buffet-counts            Poisson(theta/i) new dishes,            buffets
                         exchangeability, stable new dishes
gamma-poisson-totals     negative binomial totals                draws
posterior-coherence      pattern probabilities, take             buffets
                         probabilities, jump laws, dual paths
multivar-collapse        condiment buffet vs stable-beta         buffets
explosivity              infinite and finite mean totals         unused
oracle-equivalence       truncated measure vs sequential         replicates
=======================  ======================================  ==========

Examples
--------

>>> report = run_suite('explosivity', seed=42)
>>> report.passed, report.suite
(True, 'explosivity')
>>> run_suite('levy-closed-forms', seed=1, budget=3).passed
True
>>> run_suite('nope')
Traceback (most recent call last):
 ...
genibp.errors.ConfigurationError: unknown suite 'nope'; choose from all, levy-closed-forms, pair-pmfs, buffet-counts, gamma-poisson-totals, posterior-coherence, multivar-collapse, explosivity, oracle-equivalence

"""
from collections import Counter, OrderedDict
from concurrent.futures import ThreadPoolExecutor
from itertools import product, combinations_with_replacement

import numpy as np
from scipy import integrate as sp_integrate
from scipy import stats
from scipy.special import gammaln
import traitlets as trait
from traitlets.config import Configurable
from traitlets.log import get_logger

from genibp.errors import ConfigurationError
from genibp.utils import make_rng
from genibp.models.levy import (BetaProcess, StableBeta, GammaProcess, StablePositive, GeneralizedGamma,
                                transform_levy, is_infinite)
from genibp.models.scores import Bernoulli, Poisson, NegBinomial
from genibp.models.dishes import BuffetState, DishRecord
from genibp.models.multivar import SBDPrior, MultinomialScore
from genibp.calculus.exponents import exponent_psi, new_dish_rate, tilt
from genibp.buffet.pairs import pair_sampler, sibuya_log_survival
from genibp.buffet.sequential import (sample_buffet, sample_first_customer, sample_next_customer,
                                      sample_new_dishes)
from genibp.buffet.condiments import (mv_sample_buffet, mv_sample_next_customer, mv_jump_sampler,
                                      take_probabilities, collapse)
from genibp.posterior.summary import (jump_law, posterior_of, feature_pattern, log_marginal,
                                      explosivity_check)
from genibp.verify.stats import (bonferroni, chi_square_discrete, chi_square_categories, ks_test,
                                 ks_two_sample, z_score, homogeneity, total_variation, relative_error)
from genibp.verify.oracle import truncated_crm_oracle
from genibp.verify.report import TestReport, merge_reports

DEFAULT_BUDGETS = {
    'levy-closed-forms': 20,
    'pair-pmfs': 10 ** 5,
    'buffet-counts': 2 * 10 ** 4,
    'gamma-poisson-totals': 10 ** 5,
    'posterior-coherence': 10 ** 5,
    'multivar-collapse': 10 ** 4,
    'explosivity': 1,
    'oracle-equivalence': 10 ** 5,
}

# suites whose budget is not a sample size
EXACT_SUITES = ('levy-closed-forms', 'explosivity')


class SuiteSettings(Configurable):
    """ budgets and error rates of the verification suites """
    budgets = trait.Dict(default_value=DEFAULT_BUDGETS, help='default budget per suite').tag(config=True)
    family_rate = trait.Float(0.01, help='family-wise false failure rate of a suite').tag(config=True)
    level = trait.Float(0.001, help='level of a single statistical test').tag(config=True)
    workers = trait.Int(1, min=1, help='threads running the checks of a suite').tag(config=True)

    @trait.validate('family_rate', 'level')
    def _valid_rate(self, proposal):
        if not 0 < proposal['value'] < 1:
            raise trait.TraitError('{0} must lie in (0, 1), got {1}'.format(
                proposal['trait'].name, proposal['value']))
        return proposal['value']


# records ###################################################################

def _stat(name, statistic, pvalue, size):
    return {'name': name, 'statistic': statistic, 'pvalue': pvalue, 'size': size}


def _exact(name, error, threshold, statistic=None, size=None):
    return {'name': name, 'error': error, 'threshold': threshold, 'statistic': statistic, 'size': size}


def _outcome(name, passed, statistic=None):
    return {'name': name, 'passed': bool(passed), 'statistic': statistic}


def _two_sided(z):
    return float(2. * stats.norm.sf(abs(z)))


def _poisson_chi2(name, draws, mean):
    stat, pvalue, _ = chi_square_discrete(draws, stats.poisson(mean).pmf)
    return _stat(name, stat, pvalue, len(draws))


def _truncated_chi2(name, draws, logpmf, top, start=1):
    """ chi-square on start..top-1 plus one upper tail bin """
    logp = logpmf(np.arange(start, top, dtype=float))
    probs = np.exp(logp)
    probs = np.append(probs, max(1. - probs.sum(), 0.))
    draws = np.clip(np.asarray(draws, dtype=int), start, top)
    counts = np.bincount(draws - start, minlength=top - start + 1)
    stat, pvalue, _ = chi_square_categories(counts, probs)
    return _stat(name, stat, pvalue, len(draws))


def _mean_z(name, draws, mean, sd=None):
    draws = np.asarray(draws, dtype=float)
    sd = draws.std(ddof=1) if sd is None else sd
    z = (draws.mean() - mean) / (sd / np.sqrt(len(draws)))
    return _stat(name, z, _two_sided(z), len(draws))


def _take_records(prefix, taken, trials, alpha, M, beta, orders):
    out = []
    for c in orders:
        p = (c - alpha) / (M + beta)
        z = z_score(taken[c], trials[c], p)
        out.append(_stat('{0} c={1}'.format(prefix, c), z, _two_sided(z), trials[c]))
    return out


# levy-closed-forms #########################################################

def named_pairs():
    """ (density, score) pairs with a closed-form exponent """
    return [(BetaProcess(theta=1, beta=1), Bernoulli()),
            (StableBeta(theta=2, alpha=0.5, beta=1), Bernoulli()),
            (StableBeta(theta=1, alpha=0.3, beta=2), NegBinomial(r=2)),
            (BetaProcess(theta=1, beta=2), NegBinomial(r=1.5)),
            (GammaProcess(theta=2, beta=1), Poisson(b=1)),
            (StablePositive(alpha=0.5), Poisson(b=2)),
            (GeneralizedGamma(alpha=0.3, beta=1), Poisson(b=1))]


def named_densities():
    return [BetaProcess(theta=1, beta=2), StableBeta(theta=2, alpha=0.4, beta=1.5),
            GammaProcess(theta=2, beta=1), StablePositive(alpha=0.5), GeneralizedGamma(alpha=0.3, beta=1)]


def check_psi_paths(rng, n):
    out = []
    for levy, score in named_pairs():
        errors = [relative_error(exponent_psi(levy, score, M, 'closed'), exponent_psi(levy, score, M, 'quadrature'))
                  for M in range(1, n + 1)]
        out.append(_exact('psi closed vs quadrature {0!r} {1!r}'.format(levy, score), max(errors), 1e-6, size=n))
    return out


def check_telescoping(rng, n):
    out = []
    for levy, score in named_pairs():
        psi = [exponent_psi(levy, score, M, 'closed') for M in range(n + 1)]
        errors = [relative_error(new_dish_rate(tilt(levy, score, M), score), psi[M + 1] - psi[M])
                  for M in range(n)]
        out.append(_exact('new dish rate telescopes {0!r} {1!r}'.format(levy, score), max(errors), 1e-8, size=n))
    return out


def check_transform_round_trip(rng, n):
    out = []
    for levy in named_densities():
        if levy.support == 'UnitInterval':
            grid = np.linspace(0.01, 0.99, 99)
        else:
            grid = np.geomspace(1e-3, 10., 99)
        twice = transform_levy(transform_levy(levy))
        error = float(np.max(np.abs(twice.density(grid) / levy.density(grid) - 1.)))
        out.append(_exact('transform round trip {0!r}'.format(levy), error, 1e-10, size=len(grid)))
    return out


def check_transform_exponents(rng, n):
    """ Psi of a unit-interval density under Bernoulli scores equals Psi of
    its half-line image under Poisson(1) scores """
    out = []
    for levy in named_densities():
        if levy.kind == 'StablePositive':
            continue
        image = transform_levy(levy)
        if levy.support == 'UnitInterval':
            pairs = (levy, Bernoulli()), (image, Poisson(b=1))
        else:
            pairs = (levy, Poisson(b=1)), (image, Bernoulli())
        for lam in (1, 2, 3):
            here = exponent_psi(pairs[0][0], pairs[0][1], lam)
            there = exponent_psi(pairs[1][0], pairs[1][1], lam, 'quadrature')
            out.append(_exact('phi on both supports {0!r} lambda={1}'.format(levy, lam),
                              relative_error(there, here), 1e-8, statistic=here))
    return out


# pair-pmfs #################################################################

def score_cases():
    """ (model, weight) pairs covering both nonzero samplers of each kind """
    return [(Bernoulli(), 0.3),
            (Poisson(b=1), 0.3), (Poisson(b=1), 2.),
            (NegBinomial(r=1), 0.25), (NegBinomial(r=2), 0.5)]


def check_score_laws(rng, n):
    """ pmf mass, zero mass and truncated draws of every score kind

    >>> records = check_score_laws(make_rng(0), 500)
    >>> len(records), all(r['error'] <= r['threshold'] for r in records if 'error' in r)
    (15, True)

    """
    out = []
    draws = min(n, 20000)
    for model, s in score_cases():
        label = '{0!r} s={1}'.format(model, s)
        support = np.arange(0, 400, dtype=float)
        out.append(_exact('{0} pmf mass'.format(label), float(abs(1. - model.pmf(support, s).sum())), 1e-10))
        out.append(_exact('{0} zero mass'.format(label),
                          float(abs(model.pmf(0, s) + model.pi_nonzero(s) - 1.)), 1e-12))
        sample = [model.sample_nonzero(s, rng) for _ in range(draws)]
        if isinstance(model, Bernoulli):
            out.append(_outcome('{0} nonzero draws'.format(label), all(x == 1 for x in sample)))
            continue
        log_pi = model.log_pi_nonzero(s)
        out.append(_truncated_chi2('{0} nonzero draws'.format(label), sample,
                                   lambda k, model=model, s=s, log_pi=log_pi: model.logpmf(k, s) - log_pi, 24))
    return out


def check_closed_pmfs(rng, n):
    sibuya = pair_sampler(tilt(StablePositive(alpha=0.5), Poisson(b=1), 0))
    logarithmic = pair_sampler(tilt(GammaProcess(theta=1, beta=1), Poisson(b=1), 0))
    top = 2000
    mass = np.exp(sibuya.x_logpmf(np.arange(1, top, dtype=float))).sum()
    return [_exact('Sibuya P(X=1), P(X=2)', max(abs(sibuya.x_pmf(1) - 0.5), abs(sibuya.x_pmf(2) - 0.125)), 1e-12),
            _exact('Sibuya mass plus survival', abs(1. - mass - np.exp(sibuya_log_survival(0.5, top - 1))), 1e-9),
            _exact('Logarithmic P(X=1)', abs(logarithmic.x_pmf(1) - 1. / (2. * np.log(2.))), 1e-12)]


def check_score_draws(rng, n):
    out = []
    sibuya = pair_sampler(tilt(StablePositive(alpha=0.5), Poisson(b=1), 0))
    out.append(_truncated_chi2('Sibuya draws', [sibuya.sample_x(rng) for _ in range(n)], sibuya.x_logpmf, 64))
    logarithmic = pair_sampler(tilt(GammaProcess(theta=2, beta=1), Poisson(b=1), 0))
    out.append(_truncated_chi2('Logarithmic draws', [logarithmic.sample_x(rng) for _ in range(n)],
                               logarithmic.x_logpmf, 40))
    gengamma = pair_sampler(tilt(StablePositive(alpha=0.5), Poisson(b=1), 3))
    out.append(_truncated_chi2('tilted Sibuya draws', [gengamma.sample_x(rng) for _ in range(n)],
                               gengamma.x_logpmf, 40))
    nbbeta = pair_sampler(tilt(BetaProcess(theta=1, beta=2), NegBinomial(r=2), 0))
    out.append(_truncated_chi2('NB-beta score draws', [nbbeta.sample(rng)[1] for _ in range(n)],
                               nbbeta.x_logpmf, 40))
    return out


def check_weight_draws(rng, n):
    out = []
    alpha, beta, M = 0.5, 0.5, 2
    sampler = pair_sampler(tilt(StableBeta(theta=1, alpha=alpha, beta=beta), Bernoulli(), M))
    stat, pvalue = ks_test([sampler.sample(rng)[0] for _ in range(n)],
                           stats.beta(1. - alpha, M + beta + alpha).cdf)
    out.append(_stat('stable-beta new dish weights KS', stat, pvalue, n))

    # h(s) proportional to (1 - e^-s)/s on (0,1)
    generic = pair_sampler(tilt(BetaProcess(theta=1, beta=1), Poisson(b=1), 0))
    moments = [sp_integrate.quad(lambda s, j=j: s ** j * -np.expm1(-s) / s, 0., 1., epsabs=0., epsrel=1e-12)[0]
               for j in range(3)]
    mean = moments[1] / moments[0]
    sd = np.sqrt(moments[2] / moments[0] - mean ** 2)
    out.append(_mean_z('generic quadrature weight mean', [generic.sample(rng)[0] for _ in range(n)], mean, sd))
    return out


# buffet-counts #############################################################

def check_new_dish_counts(rng, n):
    prior, score, M = BetaProcess(theta=1, beta=1), Bernoulli(), 10
    states = [sample_buffet(prior, score, M, rng=rng) for _ in range(n)]
    counts = np.array([state.new_dish_counts for state in states])
    out = [_poisson_chi2('customer {0} new dishes'.format(i), counts[:, i - 1], 1. / i) for i in (1, 2, 5, 10)]
    harmonic = sum(1. / i for i in range(1, M + 1))
    out.append(_poisson_chi2('dishes after {0} customers'.format(M), [s.num_dishes for s in states], harmonic))
    psi = exponent_psi(prior, score, 1)
    first = [s.total_score(1) for s in states]
    last = [s.total_score(M) for s in states]
    out.append(_poisson_chi2('customer 1 dishes taken', first, psi))
    out.append(_poisson_chi2('customer {0} dishes taken'.format(M), last, psi))
    stat, pvalue = ks_two_sample(first, last)
    out.append(_stat('customers 1 and {0} exchangeable'.format(M), stat, pvalue, n))
    return out


def check_stable_new_dishes(rng, n):
    prior, score = StablePositive(alpha=0.5), Poisson(b=1)
    out = []
    for M in (0, 3):
        counts = [len(sample_new_dishes(prior, score, M, rng)) for _ in range(n)]
        out.append(_poisson_chi2('stable new dishes after {0} customers'.format(M), counts,
                                 (M + 1.) ** 0.5 - M ** 0.5))
    return out


# gamma-poisson-totals ######################################################

GAMMA_POISSON = dict(theta=2., beta=1., b=1.)


def _nbinom_total(M):
    theta, beta, b = GAMMA_POISSON['theta'], GAMMA_POISSON['beta'], GAMMA_POISSON['b']
    return stats.nbinom(theta, (beta + b * M) / (beta + b * M + b))


def check_first_customer_total(rng, n):
    p = GAMMA_POISSON
    prior, score = GammaProcess(theta=p['theta'], beta=p['beta']), Poisson(b=p['b'])
    totals = [sample_first_customer(prior, score, rng).total_score() for _ in range(n)]
    stat, pvalue, _ = chi_square_discrete(totals, _nbinom_total(0).pmf)
    return [_stat('first customer total', stat, pvalue, n)]


def check_fresh_totals(rng, n):
    p = GAMMA_POISSON
    prior, score = GammaProcess(theta=p['theta'], beta=p['beta']), Poisson(b=p['b'])
    out = []
    for M in (0, 1, 3):
        totals = [sum(x for _, x in sample_new_dishes(prior, score, M, rng)) for _ in range(n)]
        stat, pvalue, _ = chi_square_discrete(totals, _nbinom_total(M).pmf)
        out.append(_stat('new dish total after {0} customers'.format(M), stat, pvalue, n))
    return out


# posterior-coherence #######################################################

def enumerate_patterns(prior, score, M, max_dishes, max_score):
    """ {pattern: probability} of every pattern of M customers with at most
    ``max_dishes`` dishes and scores at most ``max_score``

    Examples
    --------
    >>> patterns = enumerate_patterns(BetaProcess(theta=1, beta=1), Bernoulli(), 2, 2, 1)
    >>> len(patterns)
    10
    >>> print('{:.6f}'.format(patterns[()]))
    0.223130

    """
    columns = [tuple((i + 1, a) for i, a in enumerate(v) if a)
               for v in product(range(max_score + 1), repeat=M) if any(v)]
    out = {}
    for K in range(max_dishes + 1):
        for combo in combinations_with_replacement(columns, K):
            state = BuffetState(prior=prior, score_model=score, num_customers=M)
            state.add_dishes([DishRecord(atom=(k + 1.) / (K + 2.), scores=list(col)) for k, col in enumerate(combo)])
            out[feature_pattern(state)] = float(np.exp(log_marginal(state)))
    return out


def check_pattern_probabilities(rng, n):
    out = []
    models = [(BetaProcess(theta=1, beta=1), Bernoulli(), 1), (GammaProcess(theta=1, beta=1), Poisson(b=1), 2)]
    for prior, score, max_score in models:
        patterns = enumerate_patterns(prior, score, 2, 2, max_score)
        seen = Counter(feature_pattern(sample_buffet(prior, score, 2, rng=rng)) for _ in range(n))
        keys = list(patterns)
        probs = [patterns[k] for k in keys]
        counts = [seen[k] for k in keys]
        counts.append(n - sum(counts))
        probs.append(max(1. - sum(probs), 0.))
        stat, pvalue, _ = chi_square_categories(counts, probs)
        label = '{0!r} {1!r}'.format(prior, score)
        out.append(_stat('pattern frequencies ' + label, stat, pvalue, n))
        out.append(_exact('enumerated pattern mass ' + label, max(sum(probs[:-1]) - 1., 0.), 1e-9))
    return out


def check_take_probability(rng, n):
    alpha, beta, M = 0.3, 1., 3
    prior = StableBeta(theta=1, alpha=alpha, beta=beta)
    taken, trials = Counter(), Counter()
    for _ in range(n):
        state = sample_buffet(prior, Bernoulli(), M, rng=rng)
        later = sample_next_customer(state, rng)
        for dish, after in zip(state.dishes, later.dishes):
            trials[dish.count_c] += 1
            taken[dish.count_c] += int(after.score_of(M + 1) != 0)
    return _take_records('take probability', taken, trials, alpha, M, beta, (1, 2, 3))


def check_jump_laws(rng, n):
    out = []
    cases = [(StableBeta(theta=1, alpha=0.3, beta=1), Bernoulli(), [1, 1], 3),
             (GammaProcess(theta=1, beta=1), Poisson(b=1), [2, 1], 2),
             (BetaProcess(theta=1, beta=2), NegBinomial(r=2), [1, 3], 3)]
    for prior, score, scores, M in cases:
        closed = jump_law(prior, score, scores, M)
        numeric = jump_law(prior, score, scores, M, 'quadrature')
        label = '{0!r} {1!r} scores={2}'.format(prior, score, scores)
        out.append(_exact('jump law normalization ' + label, abs(numeric.normalization() - 1.), 1e-8))
        out.append(_exact('jump mean closed vs quadrature ' + label,
                          relative_error(numeric.mean(), closed.mean()), 1e-6))
    generic = jump_law(BetaProcess(theta=1, beta=1), Poisson(b=1), [1, 2], 3)
    out.append(_exact('jump law normalization beta-Poisson', abs(generic.normalization() - 1.), 1e-8))
    return out


def check_log_marginal_paths(rng, n):
    out = []
    cases = [(BetaProcess(theta=1, beta=1), Bernoulli(), 4),
             (GammaProcess(theta=2, beta=1), Poisson(b=1), 3),
             (StableBeta(theta=1, alpha=0.3, beta=2), NegBinomial(r=2), 3),
             (GeneralizedGamma(alpha=0.5, beta=1), Poisson(b=2), 3)]
    for prior, score, M in cases:
        errors = []
        for _ in range(5):
            state = sample_buffet(prior, score, M, rng=rng)
            closed = log_marginal(state, 'closed')
            errors.append(abs(closed - log_marginal(state, 'quadrature')) / max(1., abs(closed)))
        out.append(_exact('log marginal closed vs quadrature {0!r} {1!r}'.format(prior, score), max(errors), 1e-6))
    return out


def check_conjugacy(rng, n):
    state = BuffetState(prior=StableBeta(theta=1, alpha=0.3, beta=1), score_model=Bernoulli(), num_customers=4)
    state.add_dish(DishRecord(atom=0.5, scores=[(1, 1), (3, 1)]))
    summary = posterior_of(state)
    law = summary.jump_laws[0]
    beta_error = max(abs(law.a - 1.7), abs(law.b - 3.3), abs(summary.tilted.reexpressed.beta - 5.))

    state = BuffetState(prior=GammaProcess(theta=1, beta=1), score_model=Poisson(b=2), num_customers=3)
    state.add_dish(DishRecord(atom=0.5, scores=[(1, 2), (2, 1)]))
    law = posterior_of(state).jump_laws[0]
    gamma_error = max(abs(law.shape - 3.), abs(law.rate - 7.))
    return [_exact('stable-beta Bernoulli jump is Beta(c-alpha, M-c+beta+alpha)', beta_error, 1e-12),
            _exact('gamma Poisson jump is Gamma(sum a, beta+bM)', gamma_error, 1e-12)]


# multivar-collapse #########################################################

def condiment_prior():
    return SBDPrior(theta=2, alpha=0.3, beta=1, gamma=[1, 2])


def check_sbd_rate(rng, n):
    prior = condiment_prior()
    out = []
    for M in range(5):
        exact = prior.theta * np.exp(gammaln(1. - prior.alpha) + gammaln(M + prior.beta + prior.alpha)
                                     - gammaln(M + prior.beta + 1.))
        out.append(_exact('condiment new dish rate closed M={0}'.format(M),
                          relative_error(prior.new_dish_rate(M, 'closed'), exact), 1e-12))
        out.append(_exact('condiment new dish rate quadrature M={0}'.format(M),
                          relative_error(prior.new_dish_rate(M, 'quadrature'), exact), 1e-9))
    return out


def check_slice_density(rng, n):
    prior = condiment_prior()
    return [_exact('slice density s={0}'.format(s),
                   relative_error(prior.slice_density(s, 'quadrature'), prior.slice_density(s)), 1e-6)
            for s in (0.1, 0.5, 0.9)]


def check_univariate_reduction(rng, n):
    """ a one-condiment multinomial score has the Bernoulli likelihood """
    single = MultinomialScore(conds=1)
    bernoulli = single.univariate()
    grid = np.linspace(0.01, 0.99, 25)
    errors = [max(abs(single.log_h_factor(1, [s]) - bernoulli.log_h_factor(1, s)),
                  abs(single.pmf(0, [s]) - float(bernoulli.pmf(0, s))))
              for s in grid]
    return [_exact('one-condiment log h and zero mass vs Bernoulli', max(errors), 1e-12)]


def check_collapsed_buffet(rng, n):
    prior, score, M = condiment_prior(), MultinomialScore(conds=2), 4
    flat_prior = prior.aggregate
    condiments = np.zeros(prior.q, dtype=int)
    taken, trials = Counter(), Counter()
    collapsed_counts, flat_counts, num_dishes = Counter(), Counter(), []
    for _ in range(n):
        state = mv_sample_buffet(prior, score, M, rng=rng)
        later = mv_sample_next_customer(state, rng)
        for dish, after in zip(state.dishes, later.dishes):
            trials[dish.count_c] += 1
            taken[dish.count_c] += int(after.score_of(M + 1) != 0)
        for dish in later.dishes:
            condiments[dish.scores[0][1] - 1] += 1
        flat = collapse(later)
        num_dishes.append(flat.num_dishes)
        collapsed_counts.update(flat.counts)
        flat_counts.update(sample_buffet(flat_prior, Bernoulli(), M + 1, rng=rng).counts)
    gamma = np.asarray(prior.gamma)
    out = [_poisson_chi2('collapsed dishes', num_dishes, exponent_psi(flat_prior, Bernoulli(), M + 1))]
    stat, pvalue, _ = homogeneity(collapsed_counts, flat_counts)
    out.append(_stat('collapsed vs univariate dish sizes', stat, pvalue, n))
    stat, pvalue, _ = chi_square_categories(condiments, gamma / gamma.sum())
    out.append(_stat('first condiment frequencies', stat, pvalue, int(condiments.sum())))
    out.extend(_take_records('condiment take probability', taken, trials, prior.alpha, M, prior.beta, (1, 2)))
    return out


def check_jump_vector_mean(rng, n):
    prior, counts, M = condiment_prior(), [2, 1], 4
    law = mv_jump_sampler(prior, counts, M)
    draws = np.array([law.sample(rng) for _ in range(n)])
    expected = take_probabilities(prior, counts, M)
    return [_mean_z('jump vector mean j={0}'.format(j + 1), draws[:, j], expected[j]) for j in range(prior.q)]


# explosivity ###############################################################

def check_negbin_beta(rng, n):
    out = []
    for beta in (0.5, 1.):
        result = explosivity_check(BetaProcess(theta=1, beta=beta), NegBinomial(r=1))
        out.append(_outcome('NB beta={0} explosive'.format(beta), is_infinite(result)))
    quadrature = explosivity_check(BetaProcess(theta=1, beta=0.5), NegBinomial(r=1), 'quadrature')
    out.append(_outcome('NB beta=0.5 explosive by quadrature', is_infinite(quadrature)))
    theta, r, beta = 1.5, 2., 2.5
    prior, score = BetaProcess(theta=theta, beta=beta), NegBinomial(r=r)
    closed = explosivity_check(prior, score)
    out.append(_exact('NB beta={0} mean theta r/(beta-1)'.format(beta),
                      relative_error(closed, theta * r / (beta - 1.)), 1e-12, statistic=closed))
    out.append(_exact('NB beta={0} mean closed vs quadrature'.format(beta),
                      relative_error(explosivity_check(prior, score, 'quadrature'), closed), 1e-9))
    return out


def check_other_means(rng, n):
    bernoulli = explosivity_check(BetaProcess(theta=1, beta=1), Bernoulli())
    gg = explosivity_check(GeneralizedGamma(alpha=0.5, beta=4), Poisson(b=2))
    return [_exact('Bernoulli beta(1,1) mean', relative_error(bernoulli, 1.), 1e-12, statistic=bernoulli),
            _exact('generalized gamma Poisson mean', relative_error(gg, 2. * 0.5 * 4. ** -0.5), 1e-12),
            _outcome('positive stable Poisson explosive',
                     is_infinite(explosivity_check(StablePositive(alpha=0.5), Poisson(b=1))))]


# oracle-equivalence ########################################################

def tv_threshold(n, categories):
    """ 0.01 from 10**5 samples on, a noise-scaled bound below """
    if n >= 10 ** 5:
        return 0.01
    return max(0.01, 2. * np.sqrt(categories / float(n)))


def check_oracle_patterns(rng, n):
    prior, score, M, epsilon = BetaProcess(theta=1, beta=1), Bernoulli(), 2, 1e-5

    def coarse(pattern):
        return pattern if len(pattern) <= 3 else 'more'
    oracle = truncated_crm_oracle(prior, score, M, epsilon, rng, replicates=n)
    brute = Counter()
    for pattern, count in oracle.patterns.items():
        brute[coarse(pattern)] += count
    sequential = Counter(coarse(feature_pattern(sample_buffet(prior, score, M, rng=rng))) for _ in range(n))
    stat, pvalue, _ = homogeneity(brute, sequential)
    tv = total_variation(brute, sequential)
    categories = len(set(brute) | set(sequential))
    return [_stat('oracle vs sequential patterns', stat, pvalue, n),
            _exact('oracle vs sequential total variation', tv, tv_threshold(n, categories), size=n)]


def check_oracle_counts(rng, n):
    prior, score = BetaProcess(theta=1, beta=1), Bernoulli()
    oracle = truncated_crm_oracle(prior, score, 3, 1e-4, rng, replicates=n)
    harmonic = 1. + 1. / 2 + 1. / 3
    gap = max(abs(np.mean(oracle.dish_counts) - harmonic) - oracle.bias, 0.)
    z = gap / np.sqrt(harmonic / n)
    out = [_stat('oracle mean dish count within bias', z, _two_sided(z), n)]
    single = truncated_crm_oracle(prior, score, 1, 1e-4, rng, replicates=n)
    z = z_score(single.patterns.get((), 0), n, np.exp(-exponent_psi(prior, score, 1)))
    out.append(_stat('oracle P(K=0) one customer', z, _two_sided(z), n))
    return out


SUITES = OrderedDict([
    ('levy-closed-forms', [check_psi_paths, check_telescoping, check_transform_round_trip,
                           check_transform_exponents]),
    ('pair-pmfs', [check_score_laws, check_closed_pmfs, check_score_draws, check_weight_draws]),
    ('buffet-counts', [check_new_dish_counts, check_stable_new_dishes]),
    ('gamma-poisson-totals', [check_first_customer_total, check_fresh_totals]),
    ('posterior-coherence', [check_pattern_probabilities, check_take_probability, check_jump_laws,
                             check_log_marginal_paths, check_conjugacy]),
    ('multivar-collapse', [check_sbd_rate, check_slice_density, check_univariate_reduction, check_collapsed_buffet,
                           check_jump_vector_mean]),
    ('explosivity', [check_negbin_beta, check_other_means]),
    ('oracle-equivalence', [check_oracle_patterns, check_oracle_counts]),
])

SUITE_NAMES = ('all',) + tuple(SUITES)


def fresh_seed():
    """ a seed from operating system entropy """
    return int(np.random.SeedSequence().entropy)


def _run_checks(name, seed, budget, workers):
    index = list(SUITES).index(name)
    jobs = [(check, make_rng(seed, index, k)) for k, check in enumerate(SUITES[name])]
    log = get_logger()

    def run(job):
        check, rng = job
        log.debug('suite %s: running %s', name, check.__name__)
        return check(rng, budget)
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(run, jobs))
    else:
        results = [run(job) for job in jobs]
    return [record for records in results for record in records]


def run_suite(name, seed=42, budget=None, workers=None, settings=None):
    """ run a named suite, or every suite for 'all'

    Parameters
    ----------
    name : str
        one of SUITE_NAMES
    seed : int or None
        root seed; None draws a fresh one, recorded in the report
    budget : int or None
        sample size (or maximal tilt order), defaulting to the settings
    workers : int or None
        threads running the checks
    settings : SuiteSettings or None

    Returns
    -------
    report : TestReport

    """
    if name not in SUITE_NAMES:
        raise ConfigurationError('unknown suite {0!r}; choose from {1}'.format(name, ', '.join(SUITE_NAMES)))
    settings = SuiteSettings() if settings is None else settings
    if seed is None:
        seed = fresh_seed()
        get_logger().info('suite %s: fresh seed %d', name, seed)
    workers = settings.workers if workers is None else int(workers)
    if name == 'all':
        reports = [run_suite(part, seed, None if part in EXACT_SUITES else budget, workers, settings)
                   for part in SUITES]
        return merge_reports('all', reports, seed=seed, budget=0 if budget is None else int(budget))

    budget = int(settings.budgets.get(name, DEFAULT_BUDGETS[name]) if budget is None else budget)
    if budget < 1:
        raise ConfigurationError('suite budgets are positive integers, got {0}'.format(budget))
    records = _run_checks(name, seed, budget, workers)
    num_tests = sum(1 for r in records if r.get('pvalue') is not None)
    level = min(settings.level, bonferroni(settings.family_rate, num_tests))
    report = TestReport(suite=name, seed=seed, budget=budget)
    for record in records:
        if record.get('pvalue') is not None:
            record['threshold'] = level
        report.add(**record)
    get_logger().info('suite %s: %d checks, %d failed', name, len(report.checks), report.num_failed)
    return report
