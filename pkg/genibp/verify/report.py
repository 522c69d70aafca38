#!/usr/bin/env python
# -*- coding: utf-8 -*-

""" verification reports

Examples
--------

>>> report = TestReport(suite='demo', seed=1, budget=10)
>>> report.add('harmonic sum', statistic=0., error=1e-12, threshold=1e-6)
>>> report.add('poisson counts', statistic=3.2, pvalue=0.52, threshold=0.001, size=100)
>>> report.passed, report.num_failed
(True, 0)
>>> report.trait_df().passed.tolist()
[True, True]

"""
import numpy as np
import pandas as pd
import traitlets as trait

CHECK_FIELDS = ('name', 'statistic', 'pvalue', 'error', 'threshold', 'passed', 'seed', 'size')


class TestReport(trait.HasTraits):
    """ the checks run by one suite

    a check passes when its p-value is at least the threshold, or when its
    error is at most the threshold; a report passes iff every check does

    Properties
    ----------
    suite : str
    seed : int or None
        the root seed the checks' streams derive from
    budget : int
    checks : list of dict
        records with the keys of ``CHECK_FIELDS``

    """
    __test__ = False
    suite = trait.Unicode('', help='suite name')
    seed = trait.Int(None, allow_none=True)
    budget = trait.Int(0)
    checks = trait.List(trait.Dict())

    @trait.validate('checks')
    def _valid_checks(self, proposal):
        for check in proposal['value']:
            missing = set(CHECK_FIELDS).difference(check)
            if missing:
                raise trait.TraitError('check {0!r} lacks {1}'.format(check.get('name'), sorted(missing)))
        return proposal['value']

    def add(self, name, statistic=None, pvalue=None, error=None, threshold=None, passed=None,
            seed=None, size=None):
        """ record one check; ``passed`` is derived unless given """
        if passed is None:
            if pvalue is not None:
                passed = bool(pvalue >= threshold)
            elif error is not None:
                passed = bool(error <= threshold)
            else:
                raise ValueError('check {0!r} needs a p-value, an error or an explicit outcome'.format(name))
        record = {'name': name,
                  'statistic': None if statistic is None else float(statistic),
                  'pvalue': None if pvalue is None else float(pvalue),
                  'error': None if error is None else float(error),
                  'threshold': None if threshold is None else float(threshold),
                  'passed': bool(passed),
                  'seed': self.seed if seed is None else seed,
                  'size': None if size is None else int(size)}
        self.checks = self.checks + [record]

    def extend(self, records):
        self.checks = self.checks + list(records)

    def _get_passed(self):
        return all(c['passed'] for c in self.checks)
    passed = property(_get_passed)

    def _get_num_failed(self):
        return sum(not c['passed'] for c in self.checks)
    num_failed = property(_get_num_failed)

    def to_dict(self):
        return {'suite': self.suite, 'seed': self.seed, 'budget': self.budget,
                'passed': self.passed, 'checks': [dict(c) for c in self.checks]}

    def trait_df(self):
        """ pandas.DataFrame with one row per check """
        return pd.DataFrame(self.checks, columns=list(CHECK_FIELDS))

    def table(self):
        """ human-readable table of the checks """
        df = self.trait_df().drop(columns=['seed'])
        df['passed'] = np.where(df.passed, 'ok', 'FAIL')
        header = '{0}: {1} ({2} checks, seed {3}, budget {4})'.format(
            self.suite, 'passed' if self.passed else 'FAILED', len(self.checks), self.seed, self.budget)
        return header + '\n' + df.to_string(index=False, na_rep='')

    def _repr_html_(self):
        return self.trait_df().to_html()


def merge_reports(name, reports, seed=None, budget=0):
    """ concatenate the checks of several reports, prefixing each check name

    >>> a, b = TestReport(suite='a'), TestReport(suite='b')
    >>> a.add('x', error=0., threshold=1.)
    >>> merge_reports('all', [a, b]).trait_df().name.tolist()
    ['a/x']

    """
    out = TestReport(suite=name, seed=seed, budget=budget)
    records = []
    for report in reports:
        for check in report.checks:
            check = dict(check)
            check['name'] = '{0}/{1}'.format(report.suite, check['name'])
            records.append(check)
    out.extend(records)
    return out
