#!/usr/bin/env python
# -*- coding: utf-8 -*-

""" the ``kind:key=val,...`` mini-language for priors and score models

list values separate their items with '/', e.g. ``sbd:gamma=1/2``

Examples
--------

>>> prior_from_spec('beta:theta=1,beta=2')
BetaProcess(beta=2.0,theta=1.0)
>>> score_from_spec('nb:r=3')
NegBinomial(r=3.0)
>>> prior_from_spec('sbd:theta=2,gamma=1/2')
SBDPrior(alpha=0.0,beta=1.0,gamma=[1.0, 2.0],theta=2.0)
>>> score_from_spec('multinomial', q=3)
Multinomial(conds=3)
>>> to_spec(prior_from_spec('stable-beta:theta=1,alpha=0.25,beta=1'))
'stable-beta:alpha=0.25,beta=1,theta=1'

"""
from genibp.errors import ConfigurationError
from genibp.models.levy import LEVY_KINDS, levy_from_dict
from genibp.models.scores import SCORE_KINDS, score_from_dict
from genibp.models.multivar import MULTI_SCORE_KINDS, multi_levy_from_dict, multi_score_from_dict

PRIOR_ALIASES = {
    'beta': 'BetaProcess',
    'stable-beta': 'StableBeta',
    'gamma': 'GammaProcess',
    'stable': 'StablePositive',
    'gengamma': 'GeneralizedGamma',
    'sbd': 'SBDPrior',
}

SCORE_ALIASES = {
    'bernoulli': 'Bernoulli',
    'poisson': 'Poisson',
    'nb': 'NegBinomial',
    'multinomial': 'Multinomial',
}


def _value(key, text):
    """ int, float or '/'-separated list of floats """
    try:
        if '/' in text:
            return [float(t) for t in text.split('/') if t]
        if key == 'conds':
            return int(text)
        return float(text)
    except ValueError:
        raise ConfigurationError('parameter {0}={1!r} is not a number'.format(key, text))


def parse_spec(text):
    """ split a spec into its kind and parameters

    Examples
    --------
    >>> parse_spec('gamma:theta=2, beta=1')
    ('gamma', {'theta': 2.0, 'beta': 1.0})
    >>> parse_spec('poisson')
    ('poisson', {})
    >>> parse_spec('gamma:theta')
    Traceback (most recent call last):
     ...
    genibp.errors.ConfigurationError: malformed parameter 'theta' in 'gamma:theta', expected key=value

    """
    if not isinstance(text, str) or not text.strip():
        raise ConfigurationError('an empty model specification')
    kind, _, rest = text.strip().partition(':')
    params = {}
    for item in rest.split(','):
        item = item.strip()
        if not item:
            continue
        key, sep, val = item.partition('=')
        if not sep or not key.strip():
            raise ConfigurationError('malformed parameter {0!r} in {1!r}, expected key=value'.format(item, text))
        key = key.strip()
        if key in params:
            raise ConfigurationError('parameter {0} given twice in {1!r}'.format(key, text))
        params[key] = _value(key, val.strip())
    return kind.strip(), params


def _kind(kind, aliases, known):
    kind = aliases.get(kind.lower(), kind)
    if kind not in known:
        raise ConfigurationError('unknown kind {0!r}; use one of {1}'.format(
            kind, ', '.join(sorted(aliases))))
    return kind


def prior_from_spec(text):
    """ a LevyDensity, or an SBDPrior for 'sbd' """
    kind, params = parse_spec(text)
    kind = _kind(kind, PRIOR_ALIASES, list(LEVY_KINDS) + ['SBDPrior'])
    if kind == 'SBDPrior':
        return multi_levy_from_dict({'kind': kind, 'params': params})
    return levy_from_dict({'kind': kind, 'params': params})


def score_from_spec(text, q=None):
    """ a score model; multinomial scores take ``conds`` from q when absent """
    kind, params = parse_spec(text)
    kind = _kind(kind, SCORE_ALIASES, list(SCORE_KINDS) + list(MULTI_SCORE_KINDS))
    if kind in MULTI_SCORE_KINDS:
        if q is not None:
            params.setdefault('conds', int(q))
        return multi_score_from_dict(dict(params, kind=kind))
    if q is not None and q != 1:
        raise ConfigurationError('{0} scores are univariate, but q={1} was requested'.format(kind, q))
    return score_from_dict(dict(params, kind=kind))


def _format(value):
    if isinstance(value, (list, tuple)):
        return '/'.join(_format(v) for v in value)
    return '{0:.17g}'.format(value)


def to_spec(model):
    """ the mini-language form of a prior or score model """
    aliases = dict((v, k) for k, v in list(PRIOR_ALIASES.items()) + list(SCORE_ALIASES.items()))
    doc = model.to_dict()
    params = doc.get('params', dict((k, v) for k, v in doc.items() if k != 'kind'))
    args = ','.join('{0}={1}'.format(k, _format(v)) for k, v in sorted(params.items()))
    kind = aliases.get(doc['kind'], doc['kind'])
    return kind if not args else '{0}:{1}'.format(kind, args)
