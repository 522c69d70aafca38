#!/usr/bin/env python
# -*- coding: utf-8 -*-

""" feature matrix documents

json layout::

    {"customers": M,
     "dishes": [{"atom": 0.25, "scores": {"1": 2, "4": 1}}, ...],
     "model": {"kind": "Poisson", "b": 1.0},
     "prior": {"kind": "GammaProcess", "params": {...}, "support": ...},
     "seed": 7}

dishes are ordered by first customer, then atom; json floats are written
as their shortest round-trip representation and csv floats with 17
significant digits, so both formats reproduce atoms bit for bit.

Examples
--------

>>> from genibp.models.levy import BetaProcess
>>> from genibp.models.scores import Bernoulli
>>> from genibp.models.dishes import BuffetState
>>> doc = export_matrix(BuffetState(prior=BetaProcess(), score_model=Bernoulli()))
>>> doc['customers'], doc['dishes']
(0, [])

"""
import json
import io

import numpy as np
import pandas as pd

from genibp.errors import ValidationError, ConfigurationError
from genibp.models.dishes import BuffetState, DishRecord
from genibp.models.levy import levy_from_dict
from genibp.models.scores import score_from_dict
from genibp.models.multivar import (MultiBuffetState, MultiDishRecord, multi_levy_from_dict,
                                    multi_score_from_dict)
from genibp.utils import natural_sort, FLOAT_FORMAT


def ordered_dishes(state):
    """ dishes sorted by (first customer, atom) """
    return sorted(state.dishes, key=lambda d: (d.first_customer, d.atom))


def export_matrix(state):
    """ the json-ready feature matrix document of a state

    Examples
    --------
    >>> from genibp.models.levy import GammaProcess
    >>> from genibp.models.scores import Poisson
    >>> from genibp.models.dishes import BuffetState, DishRecord
    >>> state = BuffetState(prior=GammaProcess(), score_model=Poisson(), num_customers=1)
    >>> state.add_dishes([DishRecord(atom=0.75, scores=[(1, 3)]), DishRecord(atom=0.5, scores=[(1, 1)])])
    >>> doc = export_matrix(state)
    >>> [d['atom'] for d in doc['dishes']], dense_matrix(import_matrix(doc)).sum(axis=1).tolist()
    ([0.5, 0.75], [4])

    """
    doc = {'customers': state.num_customers,
           'dishes': [d.to_dict() for d in ordered_dishes(state)],
           'model': state.score_model.to_dict(),
           'prior': state.prior.to_dict(),
           'seed': state.seed}
    if state.new_dish_counts:
        doc['new_dish_counts'] = list(state.new_dish_counts)
    if isinstance(state, MultiBuffetState):
        doc['q'] = state.q
    return doc


def _as_int(value):
    if isinstance(value, bool):
        raise ValueError(value)
    if isinstance(value, float) and not value.is_integer():
        raise ValueError(value)
    return int(value)


def _as_score(value, multi):
    """ an int score, or for multivariate documents a tuple score vector """
    if multi and isinstance(value, (list, tuple)):
        vector = tuple(_as_int(a) for a in value)
        if min(vector) < 0 or not any(vector):
            raise ValueError(value)
        return vector
    score = _as_int(value)
    if score <= 0:
        raise ValueError(value)
    return score


def import_matrix(doc, prior=None, score=None):
    """ rebuild a BuffetState from a feature matrix document

    ``prior`` and ``score`` override the document's own descriptions;
    a document with a ``q`` entry gives a MultiBuffetState

    Raises
    ------
    ValidationError
        listing every malformed entry

    Examples
    --------
    >>> doc = {'customers': 1, 'dishes': [{'atom': 1.5, 'scores': {'1': 0, '3': 1}}],
    ...        'model': {'kind': 'Bernoulli'}, 'prior': {'kind': 'BetaProcess', 'params': {}}}
    >>> import_matrix(doc)
    Traceback (most recent call last):
     ...
    genibp.errors.ValidationError: malformed feature matrix: dish 0: atom 1.5 outside [0,1); dish 0 customer 1: score 0 is not a positive integer; dish 0: customer 3 outside 1..1
    >>> doc['dishes'] = [{'atom': 2.0, 'scores': {'1': 1}}, {'atom': 0.5, 'scores': {}}]
    >>> import_matrix(doc)
    Traceback (most recent call last):
     ...
    genibp.errors.ValidationError: malformed feature matrix: dish 0: atom 2.0 outside [0,1); dish 1: no nonzero score
    >>> doc = {'customers': 2, 'q': 2, 'dishes': [{'atom': 0.5, 'scores': {'1': 2, '2': 1}}],
    ...        'model': {'kind': 'Multinomial', 'conds': 2},
    ...        'prior': {'kind': 'SBDPrior', 'params': {'gamma': [1, 1]}}}
    >>> import_matrix(doc).condiment_counts()
    [[1, 1]]

    """
    offending = []
    if not isinstance(doc, dict):
        raise ValidationError('a feature matrix must be a json object')
    multi = doc.get('q') is not None
    try:
        if multi:
            prior = prior if prior is not None else multi_levy_from_dict(doc['prior'])
            score = score if score is not None else multi_score_from_dict(doc['model'])
        else:
            prior = prior if prior is not None else levy_from_dict(doc['prior'])
            score = score if score is not None else score_from_dict(doc['model'])
    except KeyError as err:
        raise ValidationError('malformed feature matrix', ['missing {0}'.format(err)])
    except ConfigurationError as err:
        raise ValidationError('malformed feature matrix', [str(err)])
    try:
        M = _as_int(doc.get('customers', 0))
        if M < 0:
            raise ValueError(M)
    except (TypeError, ValueError):
        raise ValidationError('malformed feature matrix', ['customers={0!r}'.format(doc.get('customers'))])

    record = MultiDishRecord if multi else DishRecord
    dishes = []
    atoms = set()
    for k, entry in enumerate(doc.get('dishes', [])):
        atom = entry.get('atom') if isinstance(entry, dict) else None
        if not isinstance(atom, (int, float)) or isinstance(atom, bool) or not 0 <= atom < 1:
            offending.append('dish {0}: atom {1!r} outside [0,1)'.format(k, atom))
        elif atom in atoms:
            offending.append('dish {0}: duplicate atom {1!r}'.format(k, atom))
        else:
            atoms.add(atom)
        scores = entry.get('scores', {}) if isinstance(entry, dict) else {}
        pairs, bad = [], len(offending)
        for key in natural_sort(scores):
            try:
                customer = _as_int(key)
                a = _as_score(scores[key], multi)
            except (TypeError, ValueError):
                offending.append('dish {0} customer {1}: score {2!r} is not a positive integer'.format(
                    k, key, scores[key]))
                continue
            if not 1 <= customer <= M:
                offending.append('dish {0}: customer {1} outside 1..{2}'.format(k, customer, M))
            else:
                pairs.append((customer, a))
        if not pairs and len(offending) == bad:
            offending.append('dish {0}: no nonzero score'.format(k))
        if not offending:
            dishes.append(record(atom=float(atom), scores=pairs))
    if offending:
        raise ValidationError('malformed feature matrix', offending)

    state_class = MultiBuffetState if multi else BuffetState
    state = state_class(prior=prior, score_model=score, num_customers=M, seed=doc.get('seed'))
    state.add_dishes(dishes)
    if doc.get('new_dish_counts') is not None:
        state.new_dish_counts = [int(c) for c in doc['new_dish_counts']]
    return state


def dense_matrix(state):
    """ M x K integer array, dishes in export order """
    values = np.zeros((state.num_customers, state.num_dishes), dtype=int)
    for k, dish in enumerate(ordered_dishes(state)):
        for i, a in dish.scores:
            values[i - 1, k] = a
    return values


def write_json(state, path=None):
    """ write the document to a path, or return it as a string """
    text = json.dumps(export_matrix(state), indent=1)
    if path is None:
        return text
    with open(path, 'w') as f:
        f.write(text)


def read_json(path, prior=None, score=None):
    with open(path) as f:
        try:
            doc = json.load(f)
        except ValueError as err:
            raise ValidationError('{0} is not valid json'.format(path), [str(err)])
    return import_matrix(doc, prior, score)


def triples_df(state):
    """ pandas.DataFrame with one row per (customer, atom, score)

    Examples
    --------
    >>> from genibp.models.levy import BetaProcess
    >>> from genibp.models.scores import Bernoulli
    >>> from genibp.models.dishes import BuffetState, DishRecord
    >>> state = BuffetState(prior=BetaProcess(), score_model=Bernoulli(), num_customers=2)
    >>> state.add_dish(DishRecord(atom=0.1, scores=[(1, 1), (2, 1)]))
    >>> triples_df(state).values.tolist()
    [[1.0, 0.1, 1.0], [2.0, 0.1, 1.0]]

    """
    data = [(i, dish.atom, a) for dish in ordered_dishes(state) for i, a in dish.scores]
    return pd.DataFrame(data, columns=['customer', 'atom', 'score'])


def write_csv(state, path=None):
    """ csv of the (customer, atom, score) triples with 17 significant digits

    Examples
    --------
    >>> from genibp.models.levy import BetaProcess
    >>> from genibp.models.scores import Bernoulli
    >>> from genibp.models.dishes import BuffetState, DishRecord
    >>> state = BuffetState(prior=BetaProcess(), score_model=Bernoulli(), num_customers=1)
    >>> state.add_dish(DishRecord(atom=0.1, scores=[(1, 1)]))
    >>> print(write_csv(state).strip())
    customer,atom,score
    1,0.10000000000000001,1

    """
    return triples_df(state).to_csv(path, index=False, float_format=FLOAT_FORMAT)


def read_csv(path_or_buffer, prior, score, num_customers=None):
    """ rebuild a state from csv triples """
    if isinstance(path_or_buffer, str) and '\n' in path_or_buffer:
        path_or_buffer = io.StringIO(path_or_buffer)
    df = pd.read_csv(path_or_buffer, float_precision='round_trip')
    missing = set(['customer', 'atom', 'score']).difference(df.columns)
    if missing:
        raise ValidationError('csv feature matrix lacks columns', sorted(missing))
    M = int(df.customer.max()) if num_customers is None and len(df) else (num_customers or 0)
    dishes = []
    for atom, group in df.groupby('atom', sort=False):
        group = group.sort_values('customer')
        dishes.append({'atom': float(atom),
                       'scores': {str(int(i)): int(a) for i, a in zip(group.customer, group.score)}})
    return import_matrix({'customers': M, 'dishes': dishes}, prior=prior, score=score)
