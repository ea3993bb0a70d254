#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
Created on Thu Sep 17 13:27:45 2026

A run of the protocol with both parties honest.
"""
import numpy as np

from msc_coin_tools.calc import sample_index
from msc_coin_tools.protocol.states import ABORT, block_amplitudes, phi, route_pair
from msc_coin_tools.protocol.transcript import Transcript, verify_result

__all__ = ['run_honest', 'check_block']


def check_block(block, b, p, compressed, rng):
    """
    Measures (E_b, E_abort) on a product block state. E_b is the rank one
    projector onto Phi(b), so the pass probability is |<Phi(b)|block>|^2
    and one rng.random() draw picks the outcome, as measure would.

    Outputs
    -------
    Returns the outcome (b or ABORT) and its probability.
    """
    target = block_amplitudes(b, p, compressed)
    amps = block.getAmplitudes()
    if amps.shape != target.shape:
        raise ValueError('Block of dimension {} does not match Phi({}) of dimension {}'.format(amps.size, b, target.size))
    keep = min(abs(np.vdot(target, amps)) ** 2, 1.)
    probs = np.array([keep, 1. - keep])
    k = sample_index(probs, rng)
    return (b, ABORT)[k], float(probs[k])


def run_honest(p, rng=None, seed=None, compressed=True):
    """
    Simulates every step of the protocol with an honest Alice and an
    honest Bob.

    Inputs
    ------
    p ------------ ProtocolParams (l is unused).
    rng ---------- numpy Generator. Built from seed when omitted.
    seed --------- seed recorded in the transcript.
    compressed --- two dimensional blocks instead of 2^n dimensional ones.

    Outputs
    -------
    Returns the Transcript. Random draws are taken in the order a (m),
    b (m), c (n x m), d (n x m), then one draw per measurement.
    """
    if rng is None:
        rng = np.random.default_rng(seed)
    n, m = p.getN(), p.getM()
    t = Transcript(p, honest=True, seed=seed, compressed=compressed)

    # Step 1
    a = rng.integers(0, 2, size=m)
    b = rng.integers(0, 2, size=m)
    # Step 2
    c = rng.integers(0, 2, size=(n, m))
    d = rng.integers(0, 2, size=(n, m))
    # Step 3: Bob keeps psi(a_j) of Alice's pairs, Alice keeps psi(b_j) of Bob's
    e = a[None, :] ^ c
    f = b[None, :] ^ d
    for i in range(n):
        for j in range(m):
            route_pair((c[i, j], 1 - c[i, j]), e[i, j], a[j])
            route_pair((d[i, j], 1 - d[i, j]), f[i, j], b[j])
    t.a, t.c, t.d, t.e, t.f = list(a), c.tolist(), d.tolist(), e.tolist(), f.tolist()

    # Step 4
    for j in range(m):
        out, prob = check_block(phi(int(a[j]), p, compressed), int(a[j]), p, compressed, rng)
        t.a_tilde[j] = out
        t.record('check_a', j + 1, out, prob)
        if out == ABORT:
            break
        t.b[j] = int(b[j])
        out, prob = check_block(phi(int(b[j]), p, compressed), int(b[j]), p, compressed, rng)
        t.b_tilde[j] = out
        t.record('check_b', j + 1, out, prob)
        if out == ABORT:
            break
    else:
        # Step 5
        for j in range(m):
            na, nb = 1 - int(a[j]), 1 - int(b[j])
            out, prob = check_block(phi(na, p, compressed), na, p, compressed, rng)
            t.alice_returns[j] = out
            t.record('return_a', j + 1, out, prob)
            out, prob = check_block(phi(nb, p, compressed), nb, p, compressed, rng)
            t.bob_returns[j] = out
            t.record('return_b', j + 1, out, prob)

    t.result = verify_result(t)
    return t
