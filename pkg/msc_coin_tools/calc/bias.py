#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
Created on Wed Sep 16 10:41:07 2026

Closed forms for the parity bit problem and the bias a cheating Bob
obtains by measuring the unrevealed blocks and then steering the
register: the exact bound, its Gaussian approximation, the curve
parametrized by the knowledge K, the curve's maximum and the attack
round that reaches it.
"""
from collections import namedtuple
import math

import numpy as np
from scipy import optimize, special, stats

__all__ = ['ParityProblem', 'BiasCurvePoint', 'Optimum', 'OptimalTiming',
           'parity_problem', 'pe_parity', 'fidelity_parity',
           'binomial_overlap_form', 'gaussian_alpha', 't_from_alpha',
           'fidelity_gaussian', 'pe_complement_gaussian',
           'pe_complement_exact', 'bias_gaussian', 'knowledge',
           'knowledge_range', 'bias_lower_bound', 'bias_bound_from_overlap',
           'bias_from_K', 'uniform_grid', 'curve', 'max_bias', 'optimal_l']

dflt_grid = 99
dflt_scan = 999
dflt_golden_tol = 1e-9
# Block overlap c'^2 - s'^2 per qubit in the default protocol instance
msc_overlap = math.cos(math.pi / 9.)

ParityProblem = namedtuple('ParityProblem', ['q', 'c_eff', 's_eff', 't'])
BiasCurvePoint = namedtuple('BiasCurvePoint', ['K', 'p0', 'bias'])
Optimum = namedtuple('Optimum', ['K_star', 'bias_star', 'alpha_star'])
OptimalTiming = namedtuple('OptimalTiming', ['q_real', 'q', 'l', 'bias', 'overlap', 'K'])


def parity_problem(q, c_eff, s_eff):
    """Validated ParityProblem for a string of q bits."""
    if int(q) != q or q < 1:
        raise ValueError('q = {} not a valid string length, must be an integer >= 1'.format(q))
    if abs(c_eff ** 2 + s_eff ** 2 - 1.) > 1e-12:
        raise ValueError('Amplitudes c_eff = {}, s_eff = {} are not normalized'.format(c_eff, s_eff))
    return ParityProblem(q=int(q), c_eff=c_eff, s_eff=s_eff, t=s_eff ** 2)


def _check_q(q):
    if int(q) != q or q < 0:
        raise ValueError('q = {} not a valid string length'.format(q))
    return int(q)


def pe_parity(q, c_eff, s_eff):
    """
    Error probability of the best guess of the parity of q bits, each
    committed as (c_eff, +-s_eff). An empty string (q = 0) has a known
    parity.
    """
    q = _check_q(q)
    return (1. - abs(2. * c_eff * s_eff) ** q) / 2.


def fidelity_parity(q, c_eff, s_eff):
    """
    Fidelity of the two parity mixtures over q bits.

    Inputs
    ------
    q ------------ string length, integer >= 1 (q = 0 gives 0, the
                   parities of an empty string are perfectly known).
    c_eff, s_eff - per-bit amplitudes.

    Outputs
    -------
    Returns sum_{k <= q/2} C(q,k) |c^2(q-k) s^2k - c^2k s^2(q-k)| as a
    float. Terms are formed in log space from binomial log pmfs and
    summed largest first, so q up to 1e6 is fine.
    """
    q = _check_q(q)
    if q == 0:
        return 0.
    lo = min(c_eff ** 2, s_eff ** 2)
    hi = 1. - lo
    if lo == 0.:
        return 1.
    if lo == hi:
        return 0.
    k = np.arange(0, q // 2 + 1)
    log_ratio = math.log(lo / hi)
    with np.errstate(divide='ignore'):
        # C(q,k) hi^(q-k) lo^k (1 - (lo/hi)^(q-2k))
        logs = stats.binom.logpmf(k, q, lo) + np.log1p(-np.exp((q - 2 * k) * log_ratio))
    terms = np.exp(np.sort(logs)[::-1])
    return min(math.fsum(terms), 1.)


def binomial_overlap_form(q, t):
    """
    2 P(Bin(q, t) <= floor(q/2)) - 1, the statistical overlap rewrite of
    fidelity_parity. Equal to it for odd q; for even q it also counts
    the central term C(q, q/2) t^(q/2) (1-t)^(q/2).
    """
    q = _check_q(q)
    if not 0. < t < 1.:
        raise ValueError('t = {} not a valid option, must lie in (0, 1)'.format(t))
    return 1. - 2. * stats.binom.sf(q // 2, q, t)


def gaussian_alpha(q, t):
    """alpha = sqrt(q (1-2t)^2 / (4 t (1-t)))."""
    if not 0. < t < 1.:
        raise ValueError('t = {} not a valid option, must lie in (0, 1)'.format(t))
    return math.sqrt(q * (1. - 2. * t) ** 2 / (4. * t * (1. - t)))


def t_from_alpha(alpha, q, upper=False):
    """
    Inverse of gaussian_alpha: the t <= 1/2 (or t >= 1/2 with upper)
    with gaussian_alpha(q, t) == alpha.
    """
    if alpha < 0.:
        raise ValueError('alpha = {} must be non-negative'.format(alpha))
    shift = alpha / (2. * math.sqrt(q + alpha ** 2))
    return 0.5 + shift if upper else 0.5 - shift


def fidelity_gaussian(alpha):
    """Large q approximation of fidelity_parity, Erf(alpha/sqrt(2))."""
    if alpha < 0.:
        raise ValueError('alpha = {} must be non-negative'.format(alpha))
    return float(special.erf(alpha / math.sqrt(2.)))


def pe_complement_gaussian(alpha):
    """Lower bound (1 + exp(-alpha^2/2))/2 on the guessing success 1 - PE."""
    if alpha < 0.:
        raise ValueError('alpha = {} must be non-negative'.format(alpha))
    return (1. + math.exp(-alpha ** 2 / 2.)) / 2.


def pe_complement_exact(q, t):
    """Guessing success 1 - PE = (1 + (4t(1-t))^(q/2))/2."""
    return (1. + (4. * t * (1. - t)) ** (q / 2.)) / 2.


def bias_gaussian(alpha):
    """P(X=0) from the Gaussian approximations of both factors at alpha."""
    return pe_complement_gaussian(alpha) * (1. + fidelity_gaussian(alpha) ** 2) / 2.


def knowledge(q, overlap):
    """
    K = (2 c' s')^q = (1 - overlap^2)^(q/2), the knowledge about the
    parity of q unrevealed bits whose blocks overlap by c'^2 - s'^2.
    """
    return (1. - overlap ** 2) ** (q / 2.)


def knowledge_range(m, overlap):
    """K at the start of the protocol (m bits unrevealed) and at its end (one bit)."""
    return knowledge(m, overlap), knowledge(1, overlap)


def bias_bound_from_overlap(m, l, overlap):
    """
    Exact lower bound on P(X = target) for an attack at round l of an m
    round protocol whose blocks overlap by c'^2 - s'^2 = overlap.

    The guess covers the m - l blocks after round l, the steering acts on
    the m - l + 1 rounds from l on.
    """
    if not 1 <= l <= m:
        raise ValueError('l = {} not a valid option, must lie in [1, {}]'.format(l, m))
    if not -1. <= overlap <= 1.:
        raise ValueError('overlap = {} not a valid option'.format(overlap))
    c_eff = math.sqrt((1. + overlap) / 2.)
    s_eff = math.sqrt((1. - overlap) / 2.)
    guess = 1. - pe_parity(m - l, c_eff, s_eff)
    fid = fidelity_parity(m - l + 1, c_eff, s_eff)
    return 0.5 * guess * (1. + fid ** 2)


def bias_lower_bound(p):
    """
    Exact lower bound on the probability that the attack described by
    ProtocolParams p produces its target result.
    """
    return bias_bound_from_overlap(p.getM(), p.getL(), p.overlap() ** p.getN())


def bias_from_K(K):
    """P(X=0) = (1+K)(1 + Erf(sqrt(-ln K))^2)/4 for K in (0, 1)."""
    if not 0. < K < 1.:
        raise ValueError('K = {} not a valid option, must lie in (0, 1)'.format(K))
    return (1. + K) * (1. + special.erf(math.sqrt(-math.log(K))) ** 2) / 4.


def uniform_grid(npts=dflt_grid):
    """K_i = i/(npts+1) for i = 1..npts."""
    if int(npts) != npts or npts < 1:
        raise ValueError('Grid size {} not a valid option'.format(npts))
    return np.arange(1, int(npts) + 1) / (int(npts) + 1.)


def curve(K_grid):
    """
    Samples bias_from_K along a grid.

    Inputs
    ------
    K_grid ------- iterable of K values, each strictly inside (0, 1).

    Outputs
    -------
    Returns a list of BiasCurvePoint in grid order.
    """
    K_grid = np.asarray(K_grid, dtype=float)
    if K_grid.size == 0 or np.any(K_grid <= 0.) or np.any(K_grid >= 1.):
        raise ValueError('K grid must be non-empty and lie strictly inside (0, 1)')
    points = []
    for K in K_grid:
        p0 = bias_from_K(float(K))
        points.append(BiasCurvePoint(K=float(K), p0=p0, bias=p0 - 0.5))
    return points


def max_bias(npts=dflt_scan, tol=dflt_golden_tol):
    """
    Locates the maximum of bias_from_K: a uniform scan brackets it and a
    golden section search refines it.

    Outputs
    -------
    Returns Optimum(K_star, bias_star, alpha_star) with
    alpha_star = sqrt(-2 ln K_star).
    """
    grid = uniform_grid(npts)
    vals = np.array([bias_from_K(K) for K in grid])
    i = int(np.clip(np.argmax(vals), 1, len(grid) - 2))
    res = optimize.minimize_scalar(lambda K: -bias_from_K(K), method='golden',
                                   bracket=(grid[i - 1], grid[i], grid[i + 1]),
                                   tol=tol)
    K_star = float(res.x)
    return Optimum(K_star=K_star, bias_star=bias_from_K(K_star) - 0.5,
                   alpha_star=math.sqrt(-2. * math.log(K_star)))


def optimal_l(m, msc_defaults=True, overlap=None, K_star=None):
    """
    Number of unrevealed rounds at which the attack should start.

    Inputs
    ------
    m ------------ number of rounds, m >= 2.
    msc_defaults - use the default protocol instance, per qubit overlap
                   cos(pi/9) and n = log2(m) qubits per bit.
    overlap ------ block overlap c'^2 - s'^2 when msc_defaults is False.
    K_star ------- knowledge at the optimum. Defaults to max_bias().

    Outputs
    -------
    Returns OptimalTiming(q_real, q, l, bias, overlap, K): the real
    valued number of unrevealed rounds q_real, its rounding q clamped to
    [1, m-1], the attack round l = m - q, the exact bias
    bias_bound_from_overlap(m, l, overlap) - 1/2, the block overlap and
    the knowledge K at q_real.
    """
    if int(m) != m or m < 2:
        raise ValueError('m = {} not a valid option, must be an integer >= 2'.format(m))
    m = int(m)
    if msc_defaults:
        overlap = msc_overlap ** math.log2(m)
    elif overlap is None:
        raise ValueError('Need an overlap when msc_defaults is False')
    if K_star is None:
        K_star = max_bias().K_star
    q_real = 2. * math.log(K_star) / math.log(1. - overlap ** 2)
    q = int(min(max(round(q_real), 1), m - 1))
    l = m - q
    return OptimalTiming(q_real=q_real, q=q, l=l,
                         bias=bias_bound_from_overlap(m, l, overlap) - 0.5,
                         overlap=overlap, K=knowledge(q_real, overlap))
