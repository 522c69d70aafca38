#!/usr/bin/env python
# -*- coding: utf-8 -*-

""" dish records and buffet states

a DishRecord holds the atom of one dish and the nonzero scores it
received; a BuffetState collects the dishes served to M customers
together with the prior and score model that generated them

"""
import numpy as np
import pandas as pd
import traitlets as trait

from genibp.errors import ValidationError
from genibp.models.levy import LevyDensity
from genibp.models.scores import ScoreModel
from genibp.utils import obj_to_str


class ScoreEntries(trait.TraitType):
    """ (customer, score) pairs with strictly increasing 1-based customers
    and nonzero integer scores

    Examples
    --------
    >>> entries = ScoreEntries()
    >>> entries.validate(object, [(1, 2), (3, 1)])
    ((1, 2), (3, 1))
    >>> try:
    ...     entries.validate(object, [(2, 1), (1, 1)])
    ...     print('validated')
    ... except trait.TraitError:
    ...     print('not validated')
    not validated

    """
    info_text = 'score entries (customer, score) with increasing customers and nonzero scores'
    default_value = ()

    def _entry(self, obj, value, score):
        if isinstance(score, (bool, np.bool_)) or int(score) != score or score <= 0:
            self.error(obj, value)
        return int(score)

    def validate(self, obj, value):
        if not value:
            return ()
        entries = []
        last = 0
        for item in value:
            try:
                customer, score = item
            except (TypeError, ValueError):
                self.error(obj, value)
            if int(customer) != customer or customer <= last:
                self.error(obj, value)
            last = int(customer)
            entries.append((last, self._entry(obj, value, score)))
        return tuple(entries)


class DishRecord(trait.HasTraits):
    """ one dish: its atom and the nonzero scores it received

    Examples
    --------
    >>> dish = DishRecord(atom=0.25, scores=[(1, 2), (4, 1)])
    >>> dish.count_c, dish.first_customer, dish.score_of(2)
    (3, 1, 0)
    >>> dish.record(5, 3)
    >>> dish.count_c
    6
    >>> dish.to_dict()
    {'atom': 0.25, 'scores': {'1': 2, '4': 1, '5': 3}}
    >>> dish.trait_series()['count_c']
    6

    """
    atom = trait.Float(0., help='the dish label, a draw from Uniform[0,1)')
    scores = ScoreEntries(help='(customer, score) pairs, nonzero only')

    @trait.validate('atom')
    def _valid_atom(self, proposal):
        if not 0 <= proposal['value'] < 1:
            raise trait.TraitError('dish atoms lie in [0,1), got {0}'.format(proposal['value']))
        return proposal['value']

    def _get_count_c(self):
        return int(sum(a for _, a in self.scores))
    count_c = property(_get_count_c)

    def _get_customers(self):
        return [i for i, _ in self.scores]
    customers = property(_get_customers)

    def _get_first_customer(self):
        return self.scores[0][0] if self.scores else 0
    first_customer = property(_get_first_customer)

    def score_of(self, customer):
        """ the score of a customer, 0 if absent """
        for i, a in self.scores:
            if i == customer:
                return a
        return 0

    def score_vector(self, num_customers):
        """ the scores of customers 1..M, zeros included """
        out = [0] * num_customers
        for i, a in self.scores:
            out[i - 1] = a
        return out

    def record(self, customer, score):
        """ append the nonzero score of a later customer """
        self.scores = self.scores + ((customer, score),)

    def column_key(self):
        """ hashable summary of the column, ignoring the atom """
        return self.scores

    def copy(self):
        return self.__class__(atom=self.atom, scores=self.scores)

    def to_dict(self):
        return {'atom': self.atom, 'scores': {str(i): a for i, a in self.scores}}

    def trait_series(self):
        """ pandas.Series of the dish traits """
        return pd.Series({'atom': self.atom, 'count_c': self.count_c, 'scores': self.scores})

    def __repr__(self):
        return '{0}(atom={1!r}, scores={2!r})'.format(self.__class__.__name__, self.atom, self.scores)


class UniqueDishes(trait.TraitType):
    """ a tuple of dish records with pairwise distinct atoms """
    info_text = 'a collection of DishRecords with unique atoms'
    default_value = ()

    def validate(self, obj, value):
        if not value:
            return ()
        if not all(isinstance(d, DishRecord) for d in value):
            self.error(obj, value)
        atoms = [d.atom for d in value]
        if len(atoms) != len(set(atoms)):
            self.error(obj, value)
        return tuple(value)


class BuffetState(trait.HasTraits):
    """ the dishes served to the first M customers

    Properties
    ----------
    num_customers : int
        M
    dishes : tuple of DishRecord
        in serving order
    prior : LevyDensity
    score_model : ScoreModel
    seed : None or int
        root of the random stream lineage; customer i draws from
        ``make_rng(seed, i, ...)``
    new_dish_counts : list of int
        number of new dishes tried by each customer

    Examples
    --------
    >>> from genibp.models.levy import BetaProcess
    >>> from genibp.models.scores import Bernoulli
    >>> state = BuffetState(prior=BetaProcess(), score_model=Bernoulli(), num_customers=2)
    >>> state.add_dish(DishRecord(atom=0.5, scores=[(1, 1), (2, 1)]))
    >>> state.add_dish(DishRecord(atom=0.1, scores=[(2, 1)]))
    >>> state.num_dishes, state.counts
    (2, [2, 1])
    >>> state.trait_df().first_customer.tolist()
    [1, 2]
    >>> state.matrix().values.tolist()
    [[1, 0], [1, 1]]

    >>> state.add_dish(DishRecord(atom=0.5, scores=[(1, 1)]))
    Traceback (most recent call last):
     ...
    ValueError: dish is not a valid record or there is an atom clash

    """
    num_customers = trait.Int(0, min=0, help='number of customers served')
    dishes = UniqueDishes(read_only=True)
    prior = trait.Instance(LevyDensity)
    score_model = trait.Instance(ScoreModel)
    seed = trait.Int(None, allow_none=True, help='root seed of the stream lineage')
    new_dish_counts = trait.List(trait.Int(), help='new dishes per customer')
    _allowed_object = DishRecord

    def __iter__(self):
        for dish in self.dishes:
            yield dish

    def add_dish(self, dish):
        """ append a dish record """
        self.add_dishes([dish])

    def add_dishes(self, dishes):
        """ append dish records """
        if not all(isinstance(d, self._allowed_object) for d in dishes):
            raise ValueError('dish is not a valid record or there is an atom clash')
        try:
            self.set_trait('dishes', list(self.dishes) + list(dishes))
        except trait.TraitError:
            raise ValueError('dish is not a valid record or there is an atom clash')

    def _get_atoms(self):
        return [d.atom for d in self.dishes]
    atoms = property(_get_atoms)

    def _get_counts(self):
        return [d.count_c for d in self.dishes]
    counts = property(_get_counts)

    def _get_num_dishes(self):
        return len(self.dishes)
    num_dishes = property(_get_num_dishes)

    def get(self, atom):
        """ dish record by atom """
        return self.dishes[self.atoms.index(atom)]

    def scores_of(self, customer):
        """ {atom: score} of one customer's nonzero entries """
        out = {}
        for dish in self.dishes:
            a = dish.score_of(customer)
            if a:
                out[dish.atom] = a
        return out

    def total_score(self, customer=None):
        """ sum of all scores, or of one customer's """
        if customer is None:
            return int(sum(self.counts))
        return int(sum(self.scores_of(customer).values()))

    def copy(self):
        """ a deep copy, safe to extend """
        state = self.__class__(num_customers=self.num_customers, prior=self.prior,
                               score_model=self.score_model, seed=self.seed,
                               new_dish_counts=list(self.new_dish_counts))
        state.set_trait('dishes', [d.copy() for d in self.dishes])
        return state

    def check(self):
        """ raise ValidationError unless the bookkeeping invariants hold """
        offending = []
        for k, dish in enumerate(self.dishes):
            if not dish.scores:
                offending.append('dish {0} (atom {1!r}) has no nonzero score'.format(k, dish.atom))
            elif dish.scores[-1][0] > self.num_customers:
                offending.append('dish {0} (atom {1!r}) is scored by customer {2} > M={3}'.format(
                    k, dish.atom, dish.scores[-1][0], self.num_customers))
        if offending:
            raise ValidationError('invalid buffet state', offending)

    def trait_df(self):
        """ pandas.DataFrame with one row per dish """
        data = [{'atom': d.atom, 'first_customer': d.first_customer, 'count_c': d.count_c,
                 'customers': tuple(d.customers)} for d in self.dishes]
        return pd.DataFrame(data, columns=['atom', 'first_customer', 'count_c', 'customers'])

    def matrix(self):
        """ dense M x K score matrix, customers as rows and atoms as columns """
        values = np.zeros((self.num_customers, self.num_dishes), dtype=int)
        for k, dish in enumerate(self.dishes):
            for i, a in dish.scores:
                values[i - 1, k] = a
        df = pd.DataFrame(values, index=pd.Index(range(1, self.num_customers + 1), name='customer'),
                          columns=pd.Index(self.atoms, name='atom'))
        return df

    def summary(self):
        """ json-ready counts: K, total score, per-customer new dishes """
        return {'customers': self.num_customers, 'dishes': self.num_dishes,
                'total_score': self.total_score(), 'new_dish_counts': list(self.new_dish_counts),
                'prior': self.prior.to_dict() if self.prior is not None else None,
                'model': self.score_model.to_dict() if self.score_model is not None else None,
                'otype': obj_to_str(self)}

    def _repr_html_(self):
        return self.trait_df().to_html()

    def __repr__(self):
        return '{0}(M={1}, K={2}, prior={3!r}, score_model={4!r})'.format(
            self.__class__.__name__, self.num_customers, self.num_dishes, self.prior, self.score_model)
