import math
import os
import time

import numpy as np
import pytest
from msc_coin_tools.calc import (bias_lower_bound, fidelity_parity, transition_probability,
                                 uhlmann_unitary, apply_operator, measure)
from msc_coin_tools.protocol import *

p2 = ProtocolParams(0.9, 1, 2, 1)
p3 = ProtocolParams(0.9, 1, 3, 1)
p1 = ProtocolParams(0.9, 1, 1, 1)
p75 = ProtocolParams(0.75, 1, 2, 1)
# Processes for the 10^5 run checks
long_workers = min(4, os.cpu_count() or 1)


def test_steering_overlap_is_transition_probability():
    for p in (p2, p3, p75, ProtocolParams(0.9, 2, 2, 1)):
        eff = effective_params(p)
        for start in range(1, p.getM() + 1):
            L = string_length(start, p)
            r0 = parity_mixture('A', 0, start, p, True).rho
            r1 = parity_mixture('A', 1, start, p, True).rho
            for parity in (0, 1):
                res = steering_unitary(p, start, parity, True)
                assert(abs(res.u - transition_probability(r0, r1)) < 1e-8)
                assert(abs(res.u - fidelity_parity(L, eff.c_eff, eff.s_eff) ** 2) < 1e-8)


def test_steering_with_explicit_blocks():
    # Bob's returned blocks written out: rotating those together with the
    # register reaches the same overlap, the register alone cannot do better
    L = 3
    src = JointState.prepare(p3, 1, True, parity=0).to_vector()
    dst = JointState.prepare(p3, 1, True, parity=1).to_vector()
    full = uhlmann_unitary(src, dst, free=list(range(L, 3 * L)))
    reg = uhlmann_unitary(src, dst, free=list(range(2 * L, 3 * L)))
    u = steering_unitary(p3, 1, 0, True).u
    assert(abs(full.u - u) < 1e-8)
    assert(abs(full.u - fidelity_parity(3, *effective_params(p3)[:2]) ** 2) < 1e-8)
    assert(reg.u <= full.u + 1e-12)


def test_steering_stays_in_target_parity():
    for p in (p2, p3, p75):
        L = p.getM()
        for parity in (0, 1):
            joint = JointState.prepare(p, 1, True, parity=parity)
            rot = steering_unitary(p, 1, parity, True)
            moved = apply_operator(rot.unitary, joint.bob_view(), targets=[L])
            diag = string_povm(L, 1 - parity).getDiagonals()[-1]
            amps = moved.getAmplitudes().reshape(-1, 2 ** L)
            assert(np.sum(np.abs(amps) ** 2 * diag[None, :]) < 1e-9)


def test_pass_probability():
    for p in (p1, p2, p3, p75):
        for parity in (0, 1):
            joint = JointState.prepare(p, 1, True, parity=parity)
            assert(abs(pass_probability(joint, parity, False) - 1.) < 1e-12)
            u = steering_unitary(p, 1, parity, True).u
            assert(pass_probability(joint, parity, True) >= u - 1e-9)
    # one round: the flip is caught unless Phi(1) passes as Phi(0)
    joint = JointState.prepare(p1, 1, True, parity=0)
    assert(abs(pass_probability(joint, 0, True) - 0.64) < 1e-9)


def test_steer():
    rng = np.random.default_rng(1)
    for _ in range(20):
        joint = JointState.prepare(p3, 1, True, parity=1)
        announced, after = steer(joint, 1, True, rng)
        assert(sum(announced) % 2 == 0)
        assert(len(announced) == 3)
        assert(after.getRounds() == [1, 2, 3])
        announced, _ = steer(joint, 1, False, rng)
        assert(sum(announced) % 2 == 1)


def test_steer_off_branch(capsys):
    # register in the parity 1 branch, string measurement of parity 0
    rng = np.random.default_rng(2)
    joint = JointState.prepare(p3, 1, True, parity=1)
    t = Transcript(p3, honest=False, seed=2, compressed=True)
    seen = set()
    for _ in range(20):
        announced, after = steer(joint, 0, False, rng, trace=t)
        assert(len(announced) == 3)
        assert(sum(announced) % 2 == 0)
        assert(after.getRounds() == [1, 2, 3])
        seen.add(announced)
    assert(len(seen) > 1)
    assert(all(outcome == REMAINDER and abs(prob - 1.) < 1e-9
               for step, _, outcome, prob in t.trace))
    assert('WARNING - register left the parity 0 branch' in capsys.readouterr().out)


def test_operator_caches_bounded():
    for cached in (steering_unitary, guess_povm, verification_povm, block_amplitudes,
                   first_bit_povm, parity_povm, string_povm, flip_first_bit):
        assert(cached.cache_info().maxsize is not None)
    steering_unitary.cache_clear()
    size = steering_unitary.cache_info().maxsize
    for k in range(size + 5):
        steering_unitary(ProtocolParams(0.6 + 0.01 * k, 1, 1, 1), 1, 0, True)
    assert(steering_unitary.cache_info().currsize == size)


def test_attack_runs():
    for seed in range(100):
        t = run_attack(p3, seed=seed)
        assert(t.result in (0, 1, ABORT))
        assert(not t.honest)
        if t.result == ABORT:
            continue
        assert(all(x is None for x in t.bob_returns))
        assert(all(x is not None for x in t.alice_returns))
        # announcements match the parity steered to
        assert(sum(t.announced) % 2 == t.parity ^ int(t.x_tilde != t.target))
        assert(t.result == verify_result(t))
        assert(all(step != 'steer' or outcome != REMAINDER for step, _, outcome, _ in t.trace))


def test_attack_no_flip_never_aborts():
    for seed in range(200):
        for target in (0, 1):
            t = run_attack(p2, target=target, seed=seed)
            if t.x_tilde == target:
                assert(t.result != ABORT)
                # the result follows the guess of Alice's last bit
                assert((t.result == target) == (t.a_guess == t.a[1]))


def test_attack_determinism():
    for seed in (0, 9):
        one = run_attack(p3.withL(2), seed=seed).toJSON()
        assert(one == run_attack(p3.withL(2), seed=seed).toJSON())
        rec = Transcript.fromJSON(one).toDict()
        assert('a_guess' in rec and 'x_tilde' in rec)
    with pytest.raises(ValueError):
        run_attack(p2, target=2)


def test_compression_is_sound():
    for m in range(1, 4):
        for n in range(1, 6 // m + 1):
            for l in range(1, m + 1):
                p = ProtocolParams(0.9, n, m, l)
                for seed in (0, 1):
                    assert(compare_representations(p, seed) < 1e-8)


def attack_frequency(p, runs, seed=0, target=0, workers=1):
    report, _ = simulate(p, runs=runs, seed=seed, target=target, workers=workers)
    return report


def test_attack_single_round():
    # one round: Bob flips whenever his parity disagrees with the target
    runs = 4000
    report = attack_frequency(p1, runs)
    exact = 0.5 * (1 + 0.64)
    assert(abs(report.getBound() - exact) < 1e-12)
    assert(abs(report.pHat() - exact) <= 4 * math.sqrt(exact * (1 - exact) / runs))


def test_attack_bound():
    runs = 4000
    for p in (p2, p75):
        for target in (0, 1):
            report = attack_frequency(p, runs, seed=3, target=target)
            assert(abs(report.getBound() - bias_lower_bound(p)) < 1e-12)
            assert(report.passed())


def test_attack_guess_is_balanced():
    runs = 2000
    report, lines = simulate(p3, runs=runs, seed=8, keep_transcripts=True)
    guesses = [Transcript.fromJSON(line).a_guess for line in lines]
    guesses = [g for g in guesses if g is not None]
    share = sum(guesses) / len(guesses)
    assert(abs(share - 0.5) <= 4 * math.sqrt(0.25 / len(guesses)))


def test_joint_state_after_opening():
    # Alice's reduced state after an opened round is the uniform mixture
    rng = np.random.default_rng(2)
    for _ in range(10):
        joint = JointState.prepare(p3, 1, True)
        sample = measure(joint.bob_view(), first_bit_povm(3), rng, targets=[3])
        opened = joint.withState(sample.state).open_round(int(sample.label))
        assert(np.allclose(opened.alice_state().getEntries(),
                           uniform_mixture(2, p3, True).getEntries()))


@pytest.mark.slow
def test_attack_bound_long():
    runs = 100000
    for c2 in (0.75, 0.9):
        for l in (1, 2):
            p = ProtocolParams(c2, 1, 2, l)
            start = time.perf_counter()
            report = attack_frequency(p, runs, seed=17, workers=long_workers)
            assert(time.perf_counter() - start < 120.)
            assert(report.passed())


def test_crosscheck_full_oracle_default():
    ds, failures = crosscheck(q_max=5, c2_values=(0.9,), n_max=2, compression_qubits=1)
    assert(failures == [])
    assert(ds.attrs['full_qubits'] == 10)
    full = ds['pe_full'].sel(q=5, n=2, c2=0.9)
    assert(np.isfinite(float(full)))
    assert(abs(float(full - ds['pe_oracle'].sel(q=5, n=2, c2=0.9))) < 1e-8)
    assert(abs(float(ds['fid_full'].sel(q=5, n=2, c2=0.9) - ds['fid_oracle'].sel(q=5, n=2, c2=0.9))) < 1e-8)


@pytest.mark.slow
def test_compression_crosscheck():
    ds, failures = crosscheck(q_max=4, c2_values=(0.75, 0.9), n_max=2)
    assert(failures == [])
    assert(ds.attrs['passed'] == 1)
