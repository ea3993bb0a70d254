#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
Created on Fri Sep 18 10:02:14 2026

The cheating Bob. Instead of committing to bits he sends Alice halves
of an entangled state whose register holds every possible string b.
He opens his bits honestly by measuring the register until round l,
then guesses the parity of Alice's unrevealed bits, measures the
parity of his register and, if that combination points the wrong way,
rotates the register toward the opposite parity before announcing.

Bob's returned blocks Phi(not b_j) are a function of the register
string, so the state he holds is represented by a register label of
dimension 2^L for the L unopened rounds. JointState.to_vector writes
those blocks out explicitly.
"""
from functools import lru_cache, reduce

import numpy as np

from msc_coin_tools.calc import (StateVector, Povm, apply_operator, helstrom_pe,
                                 measure, partial_trace, tensor_all,
                                 uhlmann_unitary)
from msc_coin_tools.protocol.states import (ABORT, parity_mixture, parity_strings,
                                            phi, route_pair, string_length,
                                            verification_povm, xor_bits)
from msc_coin_tools.protocol.honest import check_block
from msc_coin_tools.protocol.transcript import Transcript, verify_result

__all__ = ['JointState', 'REMAINDER', 'register_index', 'first_bit_povm',
           'parity_povm', 'string_povm', 'flip_first_bit', 'steering_unitary',
           'guess_povm', 'steer', 'pass_probability', 'run_attack']

# Label of the element completing Bob's string measurement
REMAINDER = 'remainder'

# Cache sizes: register operators per length, dense steering and guessing
# operators per (params, round)
register_cache_size = 32
operator_cache_size = 16


def register_index(bits):
    """Register basis index of a string, first open round most significant."""
    idx = 0
    for b in bits:
        idx = 2 * idx + int(b)
    return idx


#################
# JointState class
#################
class JointState:
    """
    The state Alice and the cheating Bob share for the rounds not yet
    opened: Alice's kept blocks (one factor per round) and Bob's
    register label (one factor of dimension 2^L).
    """
    def __init__(self, params, rounds, state, compressed=True):
        """
        Inputs
        ------
        params ------- ProtocolParams.
        rounds ------- list of the unopened rounds (1-based), in order.
        state -------- StateVector over [d]*L + [2**L].
        compressed --- block dimension d is 2 when True, 2^n otherwise.
        """
        self._params = params
        self._rounds = list(rounds)
        self._compressed = compressed
        L = len(self._rounds)
        d = 2 if compressed else 2 ** params.getN()
        if state.getDims() != [d] * L + [2 ** L]:
            raise ValueError('State dims {} do not match {} rounds of block dimension {}'.format(state.getDims(), L, d))
        self._state = state

    @classmethod
    def prepare(cls, params, start=1, compressed=True, parity=None):
        """
        Uniform superposition over register strings b of rounds start..m
        (optionally only those of a given parity), each with Alice's
        blocks in the state Phi(b_j).
        """
        L = string_length(start, params)
        if L < 1:
            raise ValueError('No rounds left to prepare from round {}'.format(start))
        blocks = [phi(x, params, compressed).getAmplitudes() for x in (0, 1)]
        d = blocks[0].size
        amps = np.zeros((d ** L, 2 ** L), dtype=complex)
        strings = parity_strings(L, parity)
        for s in strings:
            amps[:, register_index(s)] = reduce(np.kron, [blocks[x] for x in s])
        amps /= np.sqrt(len(strings))
        state = StateVector(amps.ravel(), [d] * L + [2 ** L], check=False)
        return cls(params, range(start, params.getM() + 1), state, compressed)

    def __str__(self):
        kind = 'compressed' if self._compressed else 'full'
        return 'JointState ({}) over rounds {}'.format(kind, self._rounds)

    def getParams(self):
        return self._params

    def getRounds(self):
        return list(self._rounds)

    def isCompressed(self):
        return self._compressed

    def blockDim(self):
        return 2 if self._compressed else 2 ** self._params.getN()

    def bob_view(self):
        """The state over Alice's blocks and Bob's register label."""
        return self._state

    def registerFactor(self):
        return len(self._rounds)

    def withState(self, state):
        return JointState(self._params, self._rounds, state, self._compressed)

    def alice_state(self):
        """Reduced state of Alice's blocks."""
        return partial_trace(self._state, range(len(self._rounds)))

    def to_vector(self):
        """
        The state with Bob's returned blocks written out, over
        [d]*L (Alice's blocks) + [d]*L (Bob's returned blocks) + [2]*L
        (register qubits).
        """
        L, d = len(self._rounds), self.blockDim()
        blocks = [phi(x, self._params, self._compressed).getAmplitudes() for x in (0, 1)]
        amps = self._state.getAmplitudes().reshape(d ** L, 2 ** L)
        full = np.zeros((d ** L, d ** L, 2 ** L), dtype=complex)
        for s in parity_strings(L):
            col = register_index(s)
            returned = reduce(np.kron, [blocks[1 - x] for x in s])
            full[:, :, col] = np.outer(amps[:, col], returned)
        return StateVector(full.ravel(), [d] * L + [d] * L + [2] * L, check=False)

    def open_round(self, b):
        """
        Removes the first unopened round after its register bit was
        measured as b and Alice's block found in Phi(b).
        """
        L, d = len(self._rounds), self.blockDim()
        if L < 2:
            raise RuntimeError('Cannot open the last round of a joint state')
        t = self._state.getAmplitudes().reshape(d, d ** (L - 1), 2, 2 ** (L - 1))
        bra = phi(b, self._params, self._compressed).getAmplitudes().conj()
        rest = np.tensordot(bra, t[:, :, b, :], axes=(0, 0))
        norm = np.linalg.norm(rest)
        if norm < 1e-12:
            raise RuntimeError('Round {} cannot be opened with bit {}'.format(self._rounds[0], b))
        state = StateVector((rest / norm).ravel(), [d] * (L - 1) + [2 ** (L - 1)], check=False)
        return JointState(self._params, self._rounds[1:], state, self._compressed)


#################
# Register measurements
#################
@lru_cache(maxsize=register_cache_size)
def first_bit_povm(L):
    """Register measurement of the first open round's bit."""
    idx = np.arange(2 ** L)
    first = (idx >> (L - 1)) & 1
    return Povm.fromDiagonals([0, 1], [first == 0, first == 1], check=False)


@lru_cache(maxsize=register_cache_size)
def parity_povm(L):
    """Register measurement of the parity of all open rounds."""
    par = np.array([sum(s) % 2 for s in parity_strings(L)])
    return Povm.fromDiagonals([0, 1], [par == 0, par == 1], check=False)


@lru_cache(maxsize=register_cache_size)
def string_povm(L, parity):
    """
    Projectors onto register strings of the given parity, completed by
    the projector onto the other parity (label REMAINDER).
    """
    strings = parity_strings(L, parity)
    diag = np.zeros((len(strings) + 1, 2 ** L))
    for k, s in enumerate(strings):
        diag[k, register_index(s)] = 1.
    diag[-1] = 1. - np.sum(diag[:-1], axis=0)
    return Povm.fromDiagonals(strings + [REMAINDER], diag, check=False)


@lru_cache(maxsize=register_cache_size)
def flip_first_bit(L):
    """Permutation of the register flipping the first open round's bit."""
    idx = np.arange(2 ** L)
    perm = np.zeros((2 ** L, 2 ** L))
    perm[idx ^ (1 << (L - 1)), idx] = 1.
    return perm


@lru_cache(maxsize=operator_cache_size)
def steering_unitary(params, start, parity, compressed=True):
    """
    Optimal rotation of Bob's register taking the branch of a given
    register parity toward the branch of the other parity, for the rounds
    start..m. Null spaces are completed with flip_first_bit.

    Outputs
    -------
    Returns the UhlmannResult; its u is the transition probability of
    Alice's two parity mixtures over those rounds.
    """
    src = JointState.prepare(params, start, compressed, parity=parity)
    dst = JointState.prepare(params, start, compressed, parity=1 - parity)
    L = src.registerFactor()
    return uhlmann_unitary(src.bob_view(), dst.bob_view(), free=L,
                           reference=flip_first_bit(L))


@lru_cache(maxsize=operator_cache_size)
def guess_povm(params, start, compressed=True):
    """Helstrom measurement of the parity of Alice's blocks from round start on."""
    rho0 = parity_mixture('B', 0, start, params, compressed).rho
    rho1 = parity_mixture('B', 1, start, params, compressed).rho
    return helstrom_pe(rho0, rho1)[1]


#################
# Steering
#################
def steer(joint, F, want_flip, rng, trace=None):
    """
    Bob's announcement of his remaining bits once his register parity F
    is known.

    Inputs
    ------
    joint -------- JointState whose register lies in the parity F branch.
    F ------------ measured register parity.
    want_flip ---- rotate toward parity 1 - F before measuring.
    rng ---------- numpy Generator.
    trace -------- optional Transcript to record the measurement in.

    Outputs
    -------
    Returns (announced string, JointState after the measurement). If the
    measurement lands outside the wanted parity, a uniformly random string
    of that parity is announced instead.
    """
    L = joint.registerFactor()
    state = joint.bob_view()
    parity = F
    if want_flip:
        rot = steering_unitary(joint.getParams(), joint.getRounds()[0], F, joint.isCompressed())
        state = apply_operator(rot.unitary, state, targets=[L])
        parity = 1 - F
    sample = measure(state, string_povm(L, parity), rng, targets=[L])
    if trace is not None:
        trace.record('steer', joint.getRounds()[0], sample.label, sample.probability)
    if sample.label == REMAINDER:
        print('WARNING - register left the parity {} branch, announcing a random string'.format(parity))
        strings = parity_strings(L, parity)
        announced = strings[int(rng.integers(len(strings)))]
    else:
        announced = sample.label
    return tuple(int(x) for x in announced), joint.withState(sample.state)


def pass_probability(joint, F, want_flip):
    """
    Exact probability that Alice's checks on all remaining rounds pass
    when Bob steers the parity F branch in joint.
    """
    L, d = joint.registerFactor(), joint.blockDim()
    state = joint.bob_view()
    parity = F
    if want_flip:
        rot = steering_unitary(joint.getParams(), joint.getRounds()[0], F, joint.isCompressed())
        state = apply_operator(rot.unitary, state, targets=[L])
        parity = 1 - F
    amps = state.getAmplitudes().reshape(d ** L, 2 ** L)
    blocks = [phi(x, joint.getParams(), joint.isCompressed()).getAmplitudes() for x in (0, 1)]
    total = 0.
    for s in parity_strings(L, parity):
        bra = reduce(np.kron, [blocks[x] for x in s]).conj()
        total += abs(bra @ amps[:, register_index(s)]) ** 2
    return float(total)


#################
# Full run
#################
def run_attack(p, target=0, rng=None, seed=None, compressed=True):
    """
    Simulates the protocol with an honest Alice and the cheating Bob.

    Inputs
    ------
    p ------------ ProtocolParams; p.getL() is the attack round.
    target ------- result Bob tries to force, 0 or 1.
    rng ---------- numpy Generator. Built from seed when omitted.
    seed --------- seed recorded in the transcript.
    compressed --- two dimensional blocks instead of 2^n dimensional ones.

    Outputs
    -------
    Returns the Transcript. Random draws are taken in the order a (m),
    c (n x m), d (n x m), then one draw per measurement. Bob does not run
    his own checks of the blocks Alice returns.
    """
    if target not in (0, 1):
        raise ValueError('target = {} not a valid option, choose 0 or 1'.format(target))
    if rng is None:
        rng = np.random.default_rng(seed)
    n, m, l = p.getN(), p.getM(), p.getL()
    t = Transcript(p, honest=False, seed=seed, target=target, compressed=compressed)

    # Step 1, Step 2
    a = rng.integers(0, 2, size=m)
    c = rng.integers(0, 2, size=(n, m))
    d = rng.integers(0, 2, size=(n, m))
    # Step 3: Bob keeps psi(a_j); announcing f = d leaves Alice psi(b_j)
    # of every register branch b
    e = a[None, :] ^ c
    f = d
    for i in range(n):
        for j in range(m):
            route_pair((c[i, j], 1 - c[i, j]), e[i, j], a[j])
            for b in (0, 1):
                route_pair((b ^ d[i, j], 1 - (b ^ d[i, j])), f[i, j], b)
    t.a, t.c, t.d, t.e, t.f = list(a), c.tolist(), d.tolist(), e.tolist(), f.tolist()
    joint = JointState.prepare(p, 1, compressed)

    def finish():
        t.result = ABORT
        return t

    # Step 4A
    for j in range(1, l):
        aj = int(a[j - 1])
        out, prob = check_block(phi(aj, p, compressed), aj, p, compressed, rng)
        t.a_tilde[j - 1] = out
        t.record('check_a', j, out, prob)
        if out == ABORT:
            return finish()
        L = joint.registerFactor()
        sample = measure(joint.bob_view(), first_bit_povm(L), rng, targets=[L])
        bj = int(sample.label)
        t.b[j - 1] = bj
        t.record('register', j, bj, sample.probability)
        sample = measure(sample.state, verification_povm(bj, p, compressed), rng, targets=[0])
        t.b_tilde[j - 1] = sample.label
        t.record('check_b', j, sample.label, sample.probability)
        if sample.label == ABORT:
            return finish()
        joint = joint.withState(sample.state).open_round(bj)

    # Step 4B
    al = int(a[l - 1])
    out, prob = check_block(phi(al, p, compressed), al, p, compressed, rng)
    t.a_tilde[l - 1] = out
    t.record('check_a', l, out, prob)
    if out == ABORT:
        return finish()
    if l < m:
        held = tensor_all([phi(int(x), p, compressed) for x in a[l:]])
        sample = measure(held, guess_povm(p, l + 1, compressed), rng)
        t.a_guess = int(sample.label)
        t.record('guess', l, t.a_guess, sample.probability)
    else:
        t.a_guess = 0
    L = joint.registerFactor()
    sample = measure(joint.bob_view(), parity_povm(L), rng, targets=[L])
    t.parity = int(sample.label)
    t.record('parity', l, t.parity, sample.probability)
    joint = joint.withState(sample.state)
    t.x_tilde = xor_bits(t.a_tilde[:l] + t.b[:l - 1] + [t.a_guess, t.parity])
    announced, joint = steer(joint, t.parity, t.x_tilde != target, rng, trace=t)
    t.announced = list(announced)

    # Step 4B/4C: Alice checks every remaining announcement
    state = joint.bob_view()
    for k, rnd in enumerate(joint.getRounds()):
        t.b[rnd - 1] = announced[k]
        sample = measure(state, verification_povm(announced[k], p, compressed), rng, targets=[k])
        t.b_tilde[rnd - 1] = sample.label
        t.record('check_b', rnd, sample.label, sample.probability)
        if sample.label == ABORT:
            return finish()
        state = sample.state

    # Step 5: only Alice checks
    for j in range(1, m + 1):
        na = 1 - int(a[j - 1])
        out, prob = check_block(phi(na, p, compressed), na, p, compressed, rng)
        t.alice_returns[j - 1] = out
        t.record('return_a', j, out, prob)

    t.result = verify_result(t)
    return t
