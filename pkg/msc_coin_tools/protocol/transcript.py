#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
Created on Thu Sep 17 08:55:20 2026

The record of one protocol run and the recomputation of its result.
"""
import json

import numpy as np

from msc_coin_tools.protocol.states import ABORT, ProtocolParams, xor_bits

__all__ = ['Transcript', 'verify_result', 'rng_info', 'json_number']

# Bit generator behind np.random.default_rng
rng_algorithm = 'PCG64'


def rng_info():
    return {'algorithm': rng_algorithm, 'numpy': np.__version__}


def json_number(x):
    """Round a float to 12 significant digits for serialization."""
    return float('%.12g' % x)


def _bits(seq):
    if seq is None:
        return None
    out = []
    for b in seq:
        if b is None or b == ABORT:
            out.append(b)
        elif isinstance(b, (tuple, list, np.ndarray)):
            out.append(_bits(b))
        else:
            out.append(int(b))
    return out


class Transcript:
    """
    Everything announced and measured during one run.

    Per round lists are indexed by round - 1; per qubit lists are n x m.
    Outcomes are 0, 1, ABORT, or None for a check that never ran (the
    run stopped earlier, or the party skips it).
    """
    def __init__(self, params, honest, seed=None, target=None, compressed=True):
        m = params.getM()
        self.params = params
        self.honest = honest
        self.seed = seed
        self.target = target
        self.compressed = compressed
        self.a = []
        self.b = [None] * m
        self.c = []
        self.d = []
        self.e = []
        self.f = []
        self.a_tilde = [None] * m
        self.b_tilde = [None] * m
        # Step 5: Alice checks Phi(not a_j), Bob checks Phi(not b_j)
        self.alice_returns = [None] * m
        self.bob_returns = [None] * m
        self.a_guess = None
        self.parity = None
        self.x_tilde = None
        self.announced = None
        self.result = None
        self.trace = []

    def __str__(self):
        kind = 'honest' if self.honest else 'attack'
        return '{} transcript ({}), seed {}, X = {}'.format(kind, self.params, self.seed, self.result)

    def record(self, step, rnd, outcome, probability):
        """Appends one measurement (step name, round, outcome, probability)."""
        if isinstance(outcome, tuple):
            outcome = list(outcome)
        self.trace.append((step, rnd, outcome, float(probability)))

    def aborted(self):
        checks = self.a_tilde + self.b_tilde + self.alice_returns + self.bob_returns
        return any(x == ABORT for x in checks)

    def toDict(self):
        out = {'params': self.params.toDict(),
               'seed': self.seed,
               'honest': self.honest,
               'target': self.target,
               'compressed': self.compressed,
               'rng': rng_info(),
               'a': _bits(self.a), 'b': _bits(self.b),
               'c': _bits(self.c), 'd': _bits(self.d),
               'e': _bits(self.e), 'f': _bits(self.f),
               'a_tilde': _bits(self.a_tilde), 'b_tilde': _bits(self.b_tilde),
               'alice_returns': _bits(self.alice_returns),
               'bob_returns': _bits(self.bob_returns)}
        if not self.honest:
            out['a_guess'] = self.a_guess
            out['parity'] = self.parity
            out['x_tilde'] = self.x_tilde
            out['announced'] = _bits(self.announced)
        out['X'] = self.result
        out['trace'] = [[s, r, o, json_number(pr)] for s, r, o, pr in self.trace]
        return out

    def toJSON(self):
        """One line JSON record; identical inputs give identical bytes."""
        return json.dumps(self.toDict(), separators=(',', ':'))

    @classmethod
    def fromDict(cls, rec):
        params = ProtocolParams(**rec['params'])
        t = cls(params, rec['honest'], seed=rec['seed'], target=rec['target'],
                compressed=rec['compressed'])
        for key in ('a', 'b', 'c', 'd', 'e', 'f', 'a_tilde', 'b_tilde',
                    'alice_returns', 'bob_returns'):
            setattr(t, key, rec[key])
        t.a_guess = rec.get('a_guess')
        t.parity = rec.get('parity')
        t.x_tilde = rec.get('x_tilde')
        t.announced = rec.get('announced')
        t.result = rec['X']
        t.trace = [tuple(x) for x in rec['trace']]
        return t

    @classmethod
    def fromJSON(cls, line):
        return cls.fromDict(json.loads(line))


def verify_result(t):
    """
    Recomputes X from the recorded outcomes.

    Inputs
    ------
    t ------------ Transcript.

    Outputs
    -------
    Returns ABORT if any recorded check aborted. Otherwise returns the
    xor over rounds of Bob's check on Alice's bit (or the announced a_j
    for rounds he did not check) and Alice's check on Bob's bit. Raises
    ValueError if an outcome needed for X was never recorded.
    """
    if t.aborted():
        return ABORT
    m = t.params.getM()
    if len(t.a) != m:
        raise ValueError('Incomplete transcript: {} of {} bits of Alice'.format(len(t.a), m))
    if any(x is None for x in t.b_tilde + t.alice_returns):
        raise ValueError('Incomplete transcript: checks of Alice missing')
    if t.honest and any(x is None for x in t.bob_returns):
        raise ValueError('Incomplete transcript: checks of Bob missing')
    a_terms = [at if at is not None else aj for at, aj in zip(t.a_tilde, t.a)]
    return xor_bits(a_terms + list(t.b_tilde))
