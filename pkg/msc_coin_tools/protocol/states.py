#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
Created on Tue Sep 15 14:03:52 2026

Protocol parameters and the states and measurements both parties use:
the single qubit states psi(b), the committed blocks Phi(b), the
parity mixtures that carry the coin's value, and the verification
POVMs (E_b, abort).
"""
from collections import namedtuple
from functools import lru_cache, reduce
import itertools

import numpy as np

from msc_coin_tools.calc import StateVector, DensityMatrix, Povm

__all__ = ['ABORT', 'ProtocolParams', 'EffectiveParams', 'ParityMixture',
           'effective_params', 'string_length', 'psi', 'phi',
           'parity_mixture', 'uniform_mixture', 'verification_povm',
           'parity_strings', 'xor_bits', 'route_pair', 'block_amplitudes']

# Outcome of a failed check; absorbing under xor
ABORT = 'abort'

dflt_c2 = 0.9
dflt_n = 1
dflt_m = 2
dflt_l = 1
# c^2 closer than this to 1/2 leaves the committed states nearly orthogonal
warn_c2_margin = 0.01

EffectiveParams = namedtuple('EffectiveParams', ['c_eff', 's_eff', 't'])
ParityMixture = namedtuple('ParityMixture', ['party', 'parity', 'start', 'rho'])


#################
# ProtocolParams class
#################
class ProtocolParams:
    """
    Public parameters of a protocol instance: the amplitudes c, s of
    the qubit states, n qubits per committed bit, m bit rounds, and the
    round l at which a cheating Bob acts.
    """
    def __init__(self, c2=dflt_c2, n=dflt_n, m=dflt_m, l=dflt_l):
        """
        Inputs
        ------
        c2 ----------- c squared, in the open interval (0, 1). s is the
                       positive root of 1 - c2.
        n ------------ integer number of qubits per committed bit, n >= 1.
        m ------------ integer number of bit rounds, m >= 1.
        l ------------ integer attack round, 1 <= l <= m.
        """
        c2 = float(c2)
        if not 0. < c2 < 1.:
            raise ValueError('c2 = {} not a valid option, must lie in (0, 1)'.format(c2))
        for name, val in (('n', n), ('m', m), ('l', l)):
            if int(val) != val:
                raise ValueError('{} = {} not a valid option, must be an integer'.format(name, val))
        n, m, l = int(n), int(m), int(l)
        if n < 1:
            raise ValueError('n = {} not a valid option, must be >= 1'.format(n))
        if m < 1:
            raise ValueError('m = {} not a valid option, must be >= 1'.format(m))
        if not 1 <= l <= m:
            raise ValueError('l = {} not a valid option, must lie in [1, {}]'.format(l, m))
        if abs(c2 - 0.5) < warn_c2_margin:
            print('WARNING - c2 = {} is close to 1/2, the committed states are nearly orthogonal'.format(c2))
        self._c2 = c2
        self._c = np.sqrt(c2)
        self._s = np.sqrt(1. - c2)
        self._n, self._m, self._l = n, m, l

    @classmethod
    def fromAmplitudes(cls, c, s, n=dflt_n, m=dflt_m, l=dflt_l):
        """Builds params from the amplitudes c, s > 0 with c^2 + s^2 = 1."""
        if c <= 0. or s <= 0.:
            raise ValueError('Amplitudes c = {}, s = {} must both be positive'.format(c, s))
        if abs(c * c + s * s - 1.) > 1e-12:
            raise ValueError('Amplitudes c = {}, s = {} are not normalized'.format(c, s))
        return cls(c * c, n, m, l)

    def _key(self):
        return (self._c2, self._n, self._m, self._l)

    def __eq__(self, other):
        return isinstance(other, ProtocolParams) and self._key() == other._key()

    def __hash__(self):
        return hash(self._key())

    def __str__(self):
        return 'ProtocolParams: c2 = {}, n = {}, m = {}, l = {}'.format(*self._key())

    def getC2(self):
        return self._c2

    def getC(self):
        return self._c

    def getS(self):
        return self._s

    def getN(self):
        return self._n

    def getM(self):
        return self._m

    def getL(self):
        return self._l

    def overlap(self):
        """<psi(0)|psi(1)> = c^2 - s^2."""
        return self._c2 - (1. - self._c2)

    def withL(self, l):
        """Same protocol, different attack round."""
        return ProtocolParams(self._c2, self._n, self._m, l)

    def toDict(self):
        return {'c2': self._c2, 'n': self._n, 'm': self._m, 'l': self._l}


def effective_params(p):
    """
    Amplitudes of Phi(0), Phi(1) in the two dimensional space they span,
    defined by c_eff^2 - s_eff^2 = (c^2 - s^2)^n.
    """
    w = p.overlap() ** p.getN()
    return EffectiveParams(c_eff=np.sqrt((1. + w) / 2.), s_eff=np.sqrt((1. - w) / 2.),
                           t=(1. - w) / 2.)


def string_length(k, p):
    """Number of rounds k, k+1, ..., m still to be opened."""
    if not 1 <= k <= p.getM() + 1:
        raise ValueError('Start round {} not a valid option for m = {}'.format(k, p.getM()))
    return p.getM() - k + 1


def xor_bits(bits):
    """Xor of a sequence of outcomes, with ABORT absorbing."""
    total = 0
    for b in bits:
        if b is None:
            raise ValueError('Cannot xor an outcome that was never recorded')
        if b == ABORT:
            return ABORT
        total ^= int(b)
    return total


def parity_strings(length, parity=None):
    """All bit tuples of a given length, optionally of fixed parity."""
    strings = itertools.product((0, 1), repeat=length)
    if parity is None:
        return list(strings)
    return [s for s in strings if sum(s) % 2 == parity]


def psi(b, p):
    """psi(0) = c|0> + s|1>, psi(1) = c|0> - s|1>."""
    if b not in (0, 1):
        raise ValueError('{} not a valid bit'.format(b))
    return StateVector([p.getC(), (-1) ** b * p.getS()], [2])


# Distinct (params, bit, representation) blocks kept around by the caches below
dflt_cache_size = 128


@lru_cache(maxsize=dflt_cache_size)
def block_amplitudes(b, p, compressed=False):
    """Read-only amplitude array of phi(b, p, compressed)."""
    if compressed:
        eff = effective_params(p)
        amps = np.array([eff.c_eff, (-1) ** b * eff.s_eff], dtype=complex)
    else:
        amps = reduce(np.kron, [psi(b, p).getAmplitudes()] * p.getN())
    amps.flags.writeable = False
    return amps


def phi(b, p, compressed=False):
    """
    The block committing bit b: n copies of psi(b) as a single factor of
    dimension 2^n, or its image (c_eff, +-s_eff) in the two dimensional
    span of Phi(0), Phi(1) when compressed.
    """
    if b not in (0, 1):
        raise ValueError('{} not a valid bit'.format(b))
    amps = block_amplitudes(b, p, compressed)
    return StateVector(amps, [amps.size], check=False)


@lru_cache(maxsize=dflt_cache_size)
def _projector(b, p, compressed):
    v = block_amplitudes(b, p, compressed)
    proj = np.outer(v, v.conj())
    proj.flags.writeable = False
    return proj


def parity_mixture(party, b, k, p, compressed=False):
    """
    Uniform mixture over strings of rounds k..m with parity b of the
    product projectors onto their Phi blocks.

    Inputs
    ------
    party -------- 'A' or 'B', which party holds the blocks.
    b ------------ parity bit.
    k ------------ first round of the string, 1 <= k <= m.
    p ------------ ProtocolParams.
    compressed --- use two dimensional blocks.

    Outputs
    -------
    Returns a ParityMixture(party, parity, start, rho) with rho on
    string_length(k, p) block factors.
    """
    if party not in ('A', 'B'):
        raise ValueError('{} not a valid party, choose A or B'.format(party))
    if b not in (0, 1):
        raise ValueError('{} not a valid parity bit'.format(b))
    if not 1 <= k <= p.getM():
        raise ValueError('Start round {} not a valid option for m = {}'.format(k, p.getM()))
    length = string_length(k, p)
    p0, p1 = _projector(0, p, compressed), _projector(1, p, compressed)
    # sum over fixed parity = half the full sum +- half the signed sum
    total = reduce(np.kron, [p0 + p1] * length)
    signed = reduce(np.kron, [p0 - p1] * length)
    rho = (total + (-1) ** b * signed) / 2. ** length
    d = p0.shape[0]
    return ParityMixture(party=party, parity=b, start=k,
                         rho=DensityMatrix(rho, [d] * length, check=False))


def uniform_mixture(k, p, compressed=False):
    """Uniform mixture over all strings of rounds k..m, with no parity constraint."""
    length = string_length(k, p)
    p0, p1 = _projector(0, p, compressed), _projector(1, p, compressed)
    rho = reduce(np.kron, [(p0 + p1) / 2.] * length)
    return DensityMatrix(rho, [p0.shape[0]] * length, check=False)


@lru_cache(maxsize=dflt_cache_size)
def verification_povm(b, p, compressed=False):
    """
    The check (E_b, E_abort) on one block: E_b projects onto Phi(b) and
    E_abort is its complement.
    """
    e = _projector(b, p, compressed)
    return Povm([(b, e), (ABORT, np.eye(e.shape[0]) - e)], check=False)


def route_pair(pair, announced, expected):
    """
    Splits a sent pair of qubits by an announced bit: the second qubit
    goes back when the bit is 0, the first otherwise.

    Inputs
    ------
    pair --------- (first, second) bit labels of the psi states in the pair.
    announced ---- the announced bit.
    expected ----- label the receiver must keep; the one sent back must
                   be its complement.

    Outputs
    -------
    Returns (kept, returned) labels. Raises RuntimeError if the routing
    does not leave psi(expected) with the receiver.
    """
    first, second = pair
    kept, returned = (first, second) if announced == 0 else (second, first)
    if kept != expected or returned != 1 - expected:
        raise RuntimeError('Routing pair {} with bit {} keeps psi({}), expected psi({})'.format(pair, announced, kept, expected))
    return kept, returned
