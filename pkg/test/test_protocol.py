import os
import time

import numpy as np
import pytest
from msc_coin_tools.calc import measure
from msc_coin_tools.protocol import *

p_honest = ProtocolParams(0.9, 1, 4, 1)
p_honest_n2 = ProtocolParams(0.75, 2, 3, 1)
seeds = range(200)
# Processes for the 10^5 run checks
long_workers = min(4, os.cpu_count() or 1)


def test_honest_never_aborts():
    for seed in seeds:
        t = run_honest(p_honest, seed=seed)
        assert(t.result in (0, 1))
        assert(not t.aborted())
        assert(t.result == verify_result(t))
        assert(t.b_tilde == t.b)
        assert(t.a_tilde == t.a)
    for seed in range(20):
        t = run_honest(p_honest_n2, seed=seed, compressed=False)
        assert(t.result in (0, 1))


def test_honest_result_is_xor():
    for seed in range(50):
        t = run_honest(p_honest, seed=seed)
        assert(t.result == (sum(t.a) + sum(t.b)) % 2)
        # e = a xor c for every qubit
        e = (np.array(t.a)[None, :] ^ np.array(t.c)).tolist()
        assert(t.e == e)


def test_honest_determinism():
    for seed in (0, 1, 12345):
        assert(run_honest(p_honest, seed=seed).toJSON() == run_honest(p_honest, seed=seed).toJSON())
    one = run_honest(p_honest, rng=np.random.default_rng(3), seed=3).toJSON()
    assert(one == run_honest(p_honest, seed=3).toJSON())


def test_transcript_round_trip():
    t = run_honest(p_honest, seed=5)
    back = Transcript.fromJSON(t.toJSON())
    assert(back.toJSON() == t.toJSON())
    assert(verify_result(back) == t.result)
    rec = t.toDict()
    assert(rec['rng']['algorithm'] == 'PCG64')
    assert('a_guess' not in rec)
    assert(rec['trace'][0][0] == 'check_a')


def test_verify_result():
    t = Transcript(ProtocolParams(0.9, 1, 2, 1), honest=True)
    t.a = [1, 0]
    t.a_tilde = [1, 0]
    t.b_tilde = [1, 1]
    t.alice_returns = [1, 0]
    t.bob_returns = [0, 0]
    assert(verify_result(t) == 1)
    t.b_tilde = [1, ABORT]
    assert(verify_result(t) == ABORT)
    t.b_tilde = [1, None]
    with pytest.raises(ValueError):
        verify_result(t)
    t.b_tilde = [1, 1]
    t.bob_returns = [ABORT, 0]
    assert(verify_result(t) == ABORT)
    t.bob_returns = [None, None]
    with pytest.raises(ValueError):
        verify_result(t)
    t.a = [1]
    t.bob_returns = [0, 0]
    with pytest.raises(ValueError):
        verify_result(t)


def test_run_seed():
    assert(run_seed(0, 5) == 5)
    assert(run_seed(6, 5) == 3)
    t = run_once(p_honest, 7, seed=2, honest=True)
    assert(t.seed == 5)
    assert(t.toJSON() == run_honest(p_honest, seed=5).toJSON())


def test_simulate_honest():
    runs = 2000
    report, lines = simulate(p_honest, runs=runs, seed=11, honest=True, keep_transcripts=True)
    counts = report.getCounts()
    assert(counts[ABORT] == 0)
    assert(report.getRuns() == runs)
    assert(abs(report.pHat() - 0.5) <= 4 * np.sqrt(0.25 / runs))
    assert(report.passed())
    assert(len(lines) == runs)
    assert(Transcript.fromJSON(lines[9]).seed == run_seed(11, 9))
    rec = report.toDict()
    assert(rec['counts'] == {'0': counts[0], '1': counts[1], 'abort': 0})
    with pytest.raises(ValueError):
        simulate(p_honest, runs=0)
    with pytest.raises(ValueError):
        simulate(p_honest, runs=10, workers=0)


def test_simulate_workers():
    serial, lines = simulate(p_honest, runs=200, seed=4, honest=True, keep_transcripts=True)
    parallel, plines = simulate(p_honest, runs=200, seed=4, honest=True, workers=2,
                                keep_transcripts=True)
    assert(serial.getCounts() == parallel.getCounts())
    assert(lines == plines)


def test_check_block_matches_measure():
    for p in (p_honest, p_honest_n2):
        for compressed in (True, False):
            for x in (0, 1):
                for b in (0, 1):
                    g1, g2 = np.random.default_rng(x + 2 * b), np.random.default_rng(x + 2 * b)
                    for _ in range(50):
                        out, prob = check_block(phi(x, p, compressed), b, p, compressed, g1)
                        s = measure(phi(x, p, compressed), verification_povm(b, p, compressed), g2)
                        assert(out == s.label)
                        assert(abs(prob - s.probability) < 1e-12)
    amps = block_amplitudes(0, p_honest_n2, False)
    assert(not amps.flags.writeable)
    assert(np.allclose(amps, phi(0, p_honest_n2).getAmplitudes()))
    with pytest.raises(ValueError):
        check_block(phi(0, p_honest_n2, False), 0, p_honest_n2, True, np.random.default_rng(0))


def test_aggregate_report():
    report = AggregateReport(p_honest, {0: 40, 1: 60}, honest=True)
    assert(report.pHat() == 0.4)
    assert(report.getBound() == 0.5)
    assert(abs(report.stdErr() - np.sqrt(0.24 / 100)) < 1e-12)
    assert(report.passed())
    report = AggregateReport(p_honest, {0: 40, 1: 59, ABORT: 1}, honest=True)
    assert(not report.passed())
    attack = AggregateReport(ProtocolParams(0.9, 1, 2, 1), {0: 656, 1: 344})
    assert(abs(attack.getBound() - 0.656) < 1e-12)
    assert(attack.passed())
    with pytest.raises(ValueError):
        AggregateReport(p_honest, {})


@pytest.mark.slow
def test_simulate_honest_long():
    runs = 100000
    start = time.perf_counter()
    report, _ = simulate(p_honest, runs=runs, seed=0, honest=True, workers=long_workers)
    assert(time.perf_counter() - start < 60.)
    assert(report.getCounts()[ABORT] == 0)
    assert(abs(report.pHat() - 0.5) <= 4 * np.sqrt(0.25 / runs))
