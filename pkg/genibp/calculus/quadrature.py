#!/usr/bin/env python
# -*- coding: utf-8 -*-

""" adaptive quadrature over the unit interval and the positive half line

integrands are written as ``func(s, sc)`` where ``sc`` is the complement
``1 - s`` computed without cancellation, so that factors like
``(1-s)**(beta-1)`` stay accurate as s approaches 1. The unit interval is
split at 1/2 and each half is integrated in logarithmic coordinates about
its endpoint; the half line is split at 1.

Examples
--------

>>> print('{:.10f}'.format(integrate(lambda s, sc: sc**-0.5, 'UnitInterval')))
2.0000000000

>>> print('{:.10f}'.format(integrate(lambda s, sc: np.exp(-s), 'PositiveHalfLine')))
1.0000000000

>>> try:
...     integrate(lambda s, sc: 1./s, 'UnitInterval')
... except ExplosivityError as err:
...     print(err.diagnosis)
mass does not decay towards 0

"""
import warnings

import numpy as np
from numpy.polynomial.legendre import leggauss
from scipy import integrate as _integrate
from scipy.integrate import IntegrationWarning
from scipy.interpolate import PchipInterpolator
from traitlets.config import SingletonConfigurable
import traitlets as trait
from traitlets.log import get_logger

from genibp.errors import ExplosivityError

SUPPORTS = ('UnitInterval', 'PositiveHalfLine')
_LOG_HALF = np.log(0.5)


class QuadratureSettings(SingletonConfigurable):
    """ tolerances shared by every numerical integral

    Examples
    --------
    >>> QuadratureSettings.instance().epsrel
    1e-09

    """
    epsrel = trait.Float(1e-9, help='relative tolerance of adaptive quadrature').tag(config=True)
    epsabs = trait.Float(0., help='absolute tolerance of adaptive quadrature').tag(config=True)
    limit = trait.Int(200, help='maximum number of subintervals per quadrature call').tag(config=True)
    grid_knots = trait.Int(2048, min=16, help='knots of inverse-CDF tables').tag(config=True)
    table_floor = trait.Float(1e-12, help='distance from the support ends where tables start').tag(config=True)
    max_iterations = trait.Int(10**6, help='cap for sequential inversion and rejection loops').tag(config=True)
    divergence_ratio = trait.Float(0.999, help=(
        'dyadic chunks whose successive mass ratio stays above this '
        'are diagnosed as divergent')).tag(config=True)


def settings():
    """ the active QuadratureSettings """
    return QuadratureSettings.instance()


def _guard(value):
    value = float(value)
    return 0. if np.isnan(value) else value


def _near_zero(func):
    """ integrand in t = log(s) """
    def g(t):
        s = np.exp(t)
        if s == 0.:
            return 0.
        with np.errstate(all='ignore'):
            return _guard(func(s, -np.expm1(t)) * s)
    return g


def _near_one(func):
    """ integrand in t = log(1-s) """
    def g(t):
        sc = np.exp(t)
        if sc == 0.:
            return 0.
        with np.errstate(all='ignore'):
            return _guard(func(-np.expm1(t), sc) * sc)
    return g


def _direct(func):
    def g(s):
        with np.errstate(all='ignore'):
            return _guard(func(s, 1. - s))
    return g


def _quad(g, a, b, points=None):
    conf = settings()
    kwargs = dict(epsabs=conf.epsabs, epsrel=conf.epsrel, limit=conf.limit, full_output=1)
    if points is not None and np.isfinite(a) and np.isfinite(b):
        points = [p for p in points if a < p < b]
        if points:
            kwargs['points'] = points
    with warnings.catch_warnings():
        warnings.simplefilter('ignore', IntegrationWarning)
        out = _integrate.quad(g, a, b, **kwargs)
    value = out[0]
    return value, (len(out) == 3 and np.isfinite(value))


def _pieces(func, support, peak=None):
    """ (integrand, a, b, points) covering the support """
    floor = settings().table_floor
    tfloor = np.log(floor)
    if support == 'UnitInterval':
        pieces = [(_near_zero(func), -np.inf, tfloor, None),
                  (_near_zero(func), tfloor, _LOG_HALF, None),
                  (_near_one(func), -np.inf, tfloor, None),
                  (_near_one(func), tfloor, _LOG_HALF, None)]
        if peak is not None:
            if peak <= 0.5:
                pieces[1] = pieces[1][:3] + ([np.log(peak)],)
            else:
                pieces[3] = pieces[3][:3] + ([np.log1p(-peak)],)
        return pieces
    elif support == 'PositiveHalfLine':
        pieces = [(_near_zero(func), -np.inf, tfloor, None),
                  (_near_zero(func), tfloor, 0., None)]
        if peak is not None and peak > 1:
            upper = 4. * peak
            pieces += [(_direct(func), 1., upper, [peak]),
                       (_direct(func), upper, np.inf, None)]
        else:
            if peak is not None:
                pieces[1] = pieces[1][:3] + ([np.log(peak)],)
            pieces.append((_direct(func), 1., np.inf, None))
        return pieces
    raise ValueError('unknown support: {0}'.format(support))


def diagnose_divergence(func, support):
    """ doubling-interval heuristic for divergence at the support ends

    the integral is cut into dyadic chunks approaching each end; if the
    chunk masses stop shrinking the end is diagnosed as divergent.
    Integrands decaying like s**(-0.9986) or slower at 0 are reported as
    divergent, and slowly divergent integrands (e.g. 1/(s log(s)**2)
    shapes at the end of the float range) can be missed.

    Returns
    -------
    diagnosis : str
        empty if no divergence was found

    Examples
    --------
    >>> diagnose_divergence(lambda s, sc: s**-0.5, 'UnitInterval')
    ''
    >>> diagnose_divergence(lambda s, sc: sc**-1.5, 'UnitInterval')
    'mass does not decay towards 1'
    >>> diagnose_divergence(lambda s, sc: s**-1.5, 'PositiveHalfLine')
    'mass does not decay towards 0'
    >>> diagnose_divergence(lambda s, sc: 1./(1.+s), 'PositiveHalfLine')
    'mass does not decay towards infinity'

    """
    ratio = settings().divergence_ratio
    ends = [('0', _near_zero(func), 'log')]
    if support == 'UnitInterval':
        ends.append(('1', _near_one(func), 'log'))
    else:
        ends.append(('infinity', _direct(func), 'linear'))

    for name, g, kind in ends:
        chunks = []
        for k in range(1, 64):
            if kind == 'log':
                a, b = -(k + 1) * np.log(2.), -k * np.log(2.)
            else:
                a, b = 2.**k, 2.**(k + 1)
            value, ok = _quad(g, a, b)
            if not np.isfinite(value):
                return 'non-finite mass towards {0}'.format(name)
            chunks.append(abs(value))
        tail = np.array(chunks[-12:])
        if np.all(tail == 0.):
            continue
        if np.any(tail[:-1] == 0.):
            continue
        ratios = tail[1:] / tail[:-1]
        if np.all(ratios >= ratio):
            return 'mass does not decay towards {0}'.format(name)
    return ''


def integrate(func, support, peak=None, what='integral'):
    """ integrate ``func(s, sc)`` over the support

    Properties
    ----------
    func : callable
        integrand of (s, 1-s)
    support : str
        'UnitInterval' or 'PositiveHalfLine'
    peak : None or float
        a location where the integrand concentrates, used as a
        breakpoint
    what : str
        name used in error messages

    Raises
    ------
    ExplosivityError
        when the divergence heuristic confirms a quadrature failure

    """
    total = 0.
    ok = True
    for g, a, b, points in _pieces(func, support, peak):
        value, piece_ok = _quad(g, a, b, points)
        total += value
        ok = ok and piece_ok
    if ok:
        return total

    diagnosis = diagnose_divergence(func, support)
    if diagnosis:
        raise ExplosivityError('{0} diverges'.format(what), diagnosis=diagnosis)
    if not np.isfinite(total):
        raise ExplosivityError('{0} is not finite'.format(what),
                               diagnosis='quadrature returned {0}'.format(total))
    get_logger().debug('accepting %s=%r after a quadrature warning', what, total)
    return total


def grid(support, knots=None, upper=None):
    """ log-spaced knots refined towards the support ends

    Returns
    -------
    s, sc : numpy.ndarray
        increasing knots and their complements

    Examples
    --------
    >>> s, sc = grid('UnitInterval', 8)
    >>> bool(np.all(np.diff(s) > 0)), bool(np.allclose(s + sc, 1.))
    (True, True)

    """
    conf = settings()
    knots = conf.grid_knots if knots is None else knots
    lfloor = np.log10(conf.table_floor)
    if support == 'UnitInterval':
        half = knots // 2
        low = np.logspace(lfloor, np.log10(0.5), half)
        high_c = np.logspace(np.log10(0.5), lfloor, knots - half + 1)[1:]
        s = np.concatenate([low, 1. - high_c])
        sc = np.concatenate([-np.expm1(np.log(low)), high_c])
        return s, sc
    upper = 1e4 if upper is None else upper
    s = np.logspace(lfloor, np.log10(upper), knots)
    return s, 1. - s


def log_peak(logfunc, support, upper=None):
    """ maximum of a vectorized log-integrand over a grid, and its location """
    s, sc = grid(support, 512, upper)
    with np.errstate(all='ignore'):
        values = np.asarray(logfunc(s, sc), dtype=float)
    values = np.where(np.isnan(values), -np.inf, values)
    idx = int(np.argmax(values))
    return float(values[idx]), float(s[idx])


def integrate_log(logfunc, support, what='integral'):
    """ log of the integral of exp(logfunc(s, sc)), rescaled about its peak

    Examples
    --------
    >>> from scipy.special import gammaln
    >>> c = 300
    >>> value = integrate_log(lambda s, sc: (c-1)*np.log(s) - s, 'PositiveHalfLine')
    >>> print('{:.8f}'.format(abs(value - gammaln(c))))
    0.00000000

    """
    top, peak = log_peak(logfunc, support)
    if not np.isfinite(top):
        raise ExplosivityError('{0} has no mass'.format(what), diagnosis='log-integrand is -inf on the grid')

    def func(s, sc):
        return np.exp(logfunc(s, sc) - top)
    return np.log(integrate(func, support, peak=peak, what=what)) + top


# Gauss-Legendre nodes on [-1, 1] used per table segment
_GL_NODES, _GL_WEIGHTS = leggauss(16)


class InverseCDFTable(object):
    """ monotone inverse-CDF table of an unnormalized density

    the density ``exp(logfunc(s, sc))`` is integrated segment by segment
    over log-spaced knots (Gauss-Legendre in log coordinates) and sampled
    by interpolating the cumulative masses; CDF accuracy is about 1e-6.

    Properties
    ----------
    logfunc : callable
        vectorized log-density of (s, 1-s)
    support : str
        'UnitInterval' or 'PositiveHalfLine'

    Examples
    --------
    >>> from scipy import stats
    >>> table = InverseCDFTable(lambda s, sc: np.log(s) + 2*np.log(sc), 'UnitInterval')
    >>> print('{:.6f}'.format(np.exp(table.log_total)))
    0.083333
    >>> u = np.linspace(0.01, 0.99, 5)
    >>> bool(np.allclose(table.ppf(u), stats.beta(2, 3).ppf(u), rtol=1e-4))
    True

    """

    def __init__(self, logfunc, support, knots=None):
        self.support = support
        self.logfunc = logfunc
        conf = settings()
        knots = conf.grid_knots if knots is None else knots
        upper = self._upper_limit() if support == 'PositiveHalfLine' else None
        s, sc = grid(support, knots, upper)
        self._z = self._to_z(s, sc)

        top, _ = log_peak(logfunc, support, upper)
        if not np.isfinite(top):
            raise ExplosivityError('density has no mass', diagnosis='log-density is -inf on the grid')
        self._shift = top

        # segment masses
        za, zb = self._z[:-1, None], self._z[1:, None]
        half = 0.5 * (zb - za)
        nodes = 0.5 * (za + zb) + half * _GL_NODES[None, :]
        ns, nsc, jac = self._from_z(nodes)
        with np.errstate(all='ignore'):
            values = np.exp(logfunc(ns, nsc) - top) * jac
        values = np.where(np.isfinite(values), values, 0.)
        segments = (values * _GL_WEIGHTS[None, :]).sum(axis=1) * half[:, 0]

        # mass beyond the first and last knots
        def func(x, xc):
            return np.exp(logfunc(x, xc) - top)
        tfloor = np.log(s[0])
        head, _ = _quad(_near_zero(func), -np.inf, tfloor)
        if support == 'UnitInterval':
            tail, _ = _quad(_near_one(func), -np.inf, np.log(sc[-1]))
        else:
            tail, _ = _quad(_direct(func), s[-1], np.inf)

        masses = np.concatenate([[head], segments, [tail]])
        total = masses.sum()
        if not (np.isfinite(total) and total > 0):
            raise ExplosivityError('density is not normalizable',
                                   diagnosis='table mass {0}'.format(total))
        self.log_total = float(np.log(total) + top)
        self._cdf = np.minimum(np.cumsum(masses)[:-1] / total, 1.)
        self._s0, self._s1, self._sc1 = s[0], s[-1], sc[-1]
        # monotone cubic interpolation both ways; zero-mass segments are dropped
        keep = np.append(np.diff(self._cdf) > 0, False)
        keep[int(np.argmax(self._cdf))] = True
        self._ppf_interp = PchipInterpolator(self._cdf[keep], self._z[keep])
        self._cdf_interp = PchipInterpolator(self._z, self._cdf)
        get_logger().debug('inverse-CDF table: %d knots, log-mass %.6g', knots, self.log_total)

    def _upper_limit(self):
        top, _ = log_peak(self.logfunc, self.support, 1e6)
        upper = 1.
        while upper < 1e12:
            with np.errstate(all='ignore'):
                value = self.logfunc(np.array([upper]), np.array([1. - upper]))[0] + np.log(upper)
            if value < top - 60:
                break
            upper *= 2.
        return upper

    def _to_z(self, s, sc):
        s, sc = np.asarray(s, dtype=float), np.asarray(sc, dtype=float)
        if self.support == 'UnitInterval':
            with np.errstate(all='ignore'):
                return np.where(s <= 0.5, np.log(s), 2 * _LOG_HALF - np.log(sc))
        return np.log(s)

    def _from_z(self, z):
        if self.support == 'UnitInterval':
            low = z <= _LOG_HALF
            lz = np.minimum(z, _LOG_HALF)
            s_low = np.exp(lz)
            sc_high = np.exp(np.minimum(2 * _LOG_HALF - z, _LOG_HALF))
            s = np.where(low, s_low, 1. - sc_high)
            sc = np.where(low, -np.expm1(lz), sc_high)
            jac = np.where(low, s_low, sc_high)
            return s, sc, jac
        s = np.exp(z)
        return s, 1. - s, s

    def ppf(self, u):
        """ inverse CDF at probabilities u """
        u = np.atleast_1d(np.asarray(u, dtype=float))
        c0, c1 = self._cdf[0], self._cdf[-1]
        z = self._ppf_interp(np.clip(u, c0, c1))
        s, sc, _ = self._from_z(z)
        s = np.array(s, dtype=float)
        head = u < c0
        if np.any(head):
            s[head] = self._s0 * u[head] / c0
        tail = u > c1
        if np.any(tail):
            if self.support == 'UnitInterval':
                s[tail] = 1. - self._sc1 * (1. - u[tail]) / (1. - c1)
            else:
                s[tail] = self._s1
        if self.support == 'UnitInterval':
            s = np.clip(s, np.nextafter(0., 1.), np.nextafter(1., 0.))
        return s

    def cdf(self, s):
        """ CDF at points s """
        s = np.atleast_1d(np.asarray(s, dtype=float))
        z = np.clip(self._to_z(s, 1. - s), self._z[0], self._z[-1])
        out = np.clip(self._cdf_interp(z), 0., 1.)
        out = np.where(s < self._s0, self._cdf[0] * s / self._s0, out)
        return out

    def sample(self, rng, size=None):
        """ draw from the tabulated law """
        u = rng.random(size if size is not None else 1)
        out = self.ppf(u)
        return float(out[0]) if size is None else out
