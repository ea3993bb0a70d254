#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
Created on Mon Sep 21 15:36:02 2026

Monte Carlo harness: many independent seeded runs, counted outcomes,
and the comparison of the observed frequency with its closed form.
"""
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
import math

import numpy as np

from msc_coin_tools.calc import bias_lower_bound
from msc_coin_tools.protocol.states import ABORT
from msc_coin_tools.protocol.honest import run_honest
from msc_coin_tools.protocol.attack import run_attack

__all__ = ['AggregateReport', 'run_seed', 'run_once', 'simulate']

dflt_runs = 10000
dflt_seed = 0
# Allowed deviation of the empirical frequency, in binomial standard errors
dflt_sigmas = 4.


def run_seed(seed, index):
    """Seed of run number index: seed xor index."""
    return int(seed) ^ int(index)


def run_once(p, index, seed=dflt_seed, honest=False, target=0, compressed=True):
    """One run with its own generator seeded by run_seed(seed, index)."""
    s = run_seed(seed, index)
    rng = np.random.default_rng(s)
    if honest:
        return run_honest(p, rng=rng, seed=s, compressed=compressed)
    return run_attack(p, target=target, rng=rng, seed=s, compressed=compressed)


def _run_chunk(args):
    p, indices, seed, honest, target, compressed, keep = args
    counts = Counter()
    lines = []
    for i in indices:
        t = run_once(p, i, seed, honest, target, compressed)
        counts[t.result] += 1
        if keep:
            lines.append((i, t.toJSON()))
    return counts, lines


#################
# AggregateReport class
#################
class AggregateReport:
    """
    Counts of the results 0, 1 and ABORT over a batch of runs, with the
    empirical frequency of the wanted result, its standard error and the
    check against the closed form.
    """
    def __init__(self, params, counts, honest=False, target=0, sigmas=dflt_sigmas):
        self._params = params
        self._counts = {0: counts.get(0, 0), 1: counts.get(1, 0), ABORT: counts.get(ABORT, 0)}
        self._runs = sum(self._counts.values())
        if self._runs < 1:
            raise ValueError('Cannot report on zero runs')
        self._honest = honest
        self._target = 0 if honest else target
        self._sigmas = sigmas
        if honest:
            self._bound = 0.5
        else:
            self._bound = bias_lower_bound(params)

    def __str__(self):
        kind = 'honest' if self._honest else 'attack on {}'.format(self._target)
        return '{} runs ({}) of {}: p_hat = {:.5f} +- {:.5f}, bound {:.5f}, {}'.format(
            self._runs, kind, self._params, self.pHat(), self.stdErr(), self._bound,
            'pass' if self.passed() else 'FAIL')

    def getCounts(self):
        return dict(self._counts)

    def getRuns(self):
        return self._runs

    def getBound(self):
        return self._bound

    def pHat(self):
        """Empirical frequency of the target result (0 for honest runs)."""
        return self._counts[self._target] / self._runs

    def stdErr(self):
        p = self.pHat()
        return math.sqrt(p * (1. - p) / self._runs)

    def tolerance(self):
        """sigmas binomial standard errors at the closed form value."""
        b = self._bound
        return self._sigmas * math.sqrt(b * (1. - b) / self._runs)

    def passed(self):
        if self._honest:
            return self._counts[ABORT] == 0 and abs(self.pHat() - 0.5) <= self.tolerance()
        return self.pHat() >= self._bound - self.tolerance()

    def toDict(self):
        return {'params': self._params.toDict(),
                'honest': self._honest,
                'target': self._target,
                'runs': self._runs,
                'counts': {'0': self._counts[0], '1': self._counts[1],
                           ABORT: self._counts[ABORT]},
                'p_hat': self.pHat(),
                'std_err': self.stdErr(),
                'bound': self._bound,
                'tolerance': self.tolerance(),
                'pass': self.passed()}


def simulate(p, runs=dflt_runs, seed=dflt_seed, honest=False, target=0,
             compressed=True, workers=1, keep_transcripts=False, verbose=False):
    """
    Runs the protocol many times.

    Inputs
    ------
    p ------------ ProtocolParams.
    runs --------- number of runs, >= 1.
    seed --------- base seed; run i uses run_seed(seed, i).
    honest ------- honest Bob instead of the attack.
    target ------- result the attack aims for.
    compressed --- block representation.
    workers ------ processes to spread the runs over. Counts do not
                   depend on this.
    keep_transcripts - also return the JSON line of every run.
    verbose ------ print progress.

    Outputs
    -------
    Returns (AggregateReport, list of JSON lines in run order, or None).
    """
    if int(runs) != runs or runs < 1:
        raise ValueError('runs = {} not a valid option, must be >= 1'.format(runs))
    if int(workers) != workers or workers < 1:
        raise ValueError('workers = {} not a valid option, must be >= 1'.format(workers))
    runs, workers = int(runs), int(workers)
    counts = Counter()
    lines = []
    if workers == 1:
        step = max(runs // 10, 1)
        for start in range(0, runs, step):
            chunk = range(start, min(start + step, runs))
            c, l = _run_chunk((p, chunk, seed, honest, target, compressed, keep_transcripts))
            counts.update(c)
            lines.extend(l)
            if verbose:
                print('Finished {} of {} runs'.format(chunk[-1] + 1, runs))
    else:
        chunks = [range(w, runs, workers) for w in range(workers)]
        jobs = [(p, ch, seed, honest, target, compressed, keep_transcripts) for ch in chunks]
        with ProcessPoolExecutor(max_workers=workers) as pool:
            for c, l in pool.map(_run_chunk, jobs):
                counts.update(c)
                lines.extend(l)
                if verbose:
                    print('Worker finished, {} runs counted'.format(sum(counts.values())))
    report = AggregateReport(p, counts, honest=honest, target=target)
    if verbose:
        print(str(report))
    if not keep_transcripts:
        return report, None
    lines.sort(key=lambda x: x[0])
    return report, [line for _, line in lines]
