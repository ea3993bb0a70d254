#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
Created on Tue Sep 22 11:18:40 2026

Checks the closed forms against dense matrices built from scratch, and
the two dimensional block representation against the 2^n dimensional
one, over a sweep of (q, c2, n).
"""
import math

import numpy as np
import xarray as xr

from msc_coin_tools.calc import fidelity, fidelity_parity, helstrom_pe, pe_parity
from msc_coin_tools.protocol.states import ProtocolParams, effective_params, parity_mixture
from msc_coin_tools.protocol.attack import run_attack, steering_unitary

__all__ = ['oracle_parity', 'compare_representations', 'crosscheck',
           'dflt_q_max', 'dflt_c2_values', 'dflt_n_max']

dflt_q_max = 6
dflt_c2_values = (0.6, 0.75, 0.9)
dflt_n_max = 2
# Largest n*q for which the 2^(nq) dimensional mixtures are also built;
# the 4096 dimensional oracles at n*q = 12 are opt-in
dflt_full_qubits = 10
# Attack runs compared in both representations need m*n <= this
dflt_compression_qubits = 6
dflt_tol = 1e-8
dflt_seeds = (0, 1, 2)


def oracle_parity(q, p, compressed=True):
    """
    Helstrom error and fidelity of the two parity mixtures over q rounds,
    from dense matrices.
    """
    params = ProtocolParams(p.getC2(), p.getN(), q, 1)
    rho0 = parity_mixture('B', 0, 1, params, compressed).rho
    rho1 = parity_mixture('B', 1, 1, params, compressed).rho
    return helstrom_pe(rho0, rho1)[0], fidelity(rho0, rho1)


def compare_representations(p, seed, target=0):
    """
    Runs the same seeded attack in both representations.

    Outputs
    -------
    Returns the largest difference between the probabilities recorded
    along the two runs and between their steering overlaps u. Returns
    inf if the runs took different branches.
    """
    short = run_attack(p, target=target, seed=seed, compressed=True)
    full = run_attack(p, target=target, seed=seed, compressed=False)
    if len(short.trace) != len(full.trace):
        return math.inf
    worst = 0.
    for (s0, r0, o0, p0), (s1, r1, o1, p1) in zip(short.trace, full.trace):
        if (s0, r0, o0) != (s1, r1, o1):
            return math.inf
        worst = max(worst, abs(p0 - p1))
    for parity in (0, 1):
        u0 = steering_unitary(p, p.getL(), parity, True).u
        u1 = steering_unitary(p, p.getL(), parity, False).u
        worst = max(worst, abs(u0 - u1))
    return worst


def crosscheck(q_max=dflt_q_max, c2_values=dflt_c2_values, n_max=dflt_n_max,
               pe_formula=pe_parity, fidelity_formula=fidelity_parity,
               full_qubits=dflt_full_qubits, compression_qubits=dflt_compression_qubits,
               seeds=dflt_seeds, tol=dflt_tol, verbose=False):
    """
    Compares closed forms with dense oracles over a sweep.

    Inputs
    ------
    q_max -------- largest string length; q runs over 1..q_max.
    c2_values ---- values of c squared.
    n_max -------- largest number of qubits per block; n runs over 1..n_max.
    pe_formula --- closed form PE(q, c_eff, s_eff) under test.
    fidelity_formula - closed form F(q, c_eff, s_eff) under test.
    full_qubits -- also build the full mixtures when n*q is at most this.
    compression_qubits - compare attack runs in both representations for
                   every (m, n) with m*n at most this, every l and c2.
    seeds -------- seeds of those attack runs.
    tol ---------- largest tolerated discrepancy.
    verbose ------ print each comparison.

    Outputs
    -------
    Returns (xarray Dataset, list of failures). The dataset holds the
    closed forms, the oracles and the compression discrepancies; each
    failure is a dict naming the check and its coordinates.
    """
    if q_max < 1 or n_max < 1 or len(c2_values) == 0:
        raise ValueError('Empty crosscheck sweep: q_max = {}, n_max = {}, c2 = {}'.format(q_max, n_max, c2_values))
    qs = np.arange(1, q_max + 1)
    ns = np.arange(1, n_max + 1)
    c2s = np.asarray(c2_values, dtype=float)
    shape = (len(qs), len(c2s), len(ns))
    out = {key: np.full(shape, np.nan) for key in
           ('pe_closed', 'fid_closed', 'pe_oracle', 'fid_oracle', 'pe_full', 'fid_full')}
    failures = []

    def check(name, err, **coords):
        if not err <= tol:
            failures.append(dict(check=name, error=float(err), **coords))

    for iq, q in enumerate(qs):
        for ic, c2 in enumerate(c2s):
            for i_n, n in enumerate(ns):
                p = ProtocolParams(c2, int(n), int(q), 1)
                eff = effective_params(p)
                pe_c = pe_formula(int(q), eff.c_eff, eff.s_eff)
                fid_c = fidelity_formula(int(q), eff.c_eff, eff.s_eff)
                pe_o, fid_o = oracle_parity(int(q), p, compressed=True)
                out['pe_closed'][iq, ic, i_n] = pe_c
                out['fid_closed'][iq, ic, i_n] = fid_c
                out['pe_oracle'][iq, ic, i_n] = pe_o
                out['fid_oracle'][iq, ic, i_n] = fid_o
                coords = dict(q=int(q), c2=float(c2), n=int(n))
                check('pe', abs(pe_c - pe_o), **coords)
                check('fidelity', abs(fid_c - fid_o), **coords)
                if n * q <= full_qubits:
                    pe_f, fid_f = oracle_parity(int(q), p, compressed=False)
                    out['pe_full'][iq, ic, i_n] = pe_f
                    out['fid_full'][iq, ic, i_n] = fid_f
                    check('pe_full', abs(pe_f - pe_o), **coords)
                    check('fidelity_full', abs(fid_f - fid_o), **coords)
                if verbose:
                    print('q = {}, c2 = {}, n = {}: pe {:.12g} vs {:.12g}, fidelity {:.12g} vs {:.12g}'.format(q, c2, n, pe_c, pe_o, fid_c, fid_o))

    ms = np.arange(1, compression_qubits + 1)
    comp = np.full((len(ms), len(c2s), len(ns)), np.nan)
    for im, m in enumerate(ms):
        for i_n, n in enumerate(ns):
            if m * n > compression_qubits:
                continue
            for ic, c2 in enumerate(c2s):
                worst = 0.
                for l in range(1, m + 1):
                    p = ProtocolParams(c2, int(n), int(m), l)
                    for seed in seeds:
                        err = compare_representations(p, seed)
                        worst = max(worst, err)
                        check('compression', err, m=int(m), n=int(n), c2=float(c2), l=l, seed=int(seed))
                comp[im, ic, i_n] = worst
                if verbose:
                    print('m = {}, n = {}, c2 = {}: representations differ by {:.3g}'.format(m, n, c2, worst))

    ds = xr.Dataset({key: (('q', 'c2', 'n'), val) for key, val in out.items()},
                    coords={'q': qs, 'c2': c2s, 'n': ns, 'm': ms})
    ds['compression_error'] = (('m', 'c2', 'n'), comp)
    ds.attrs['tolerance'] = tol
    ds.attrs['full_qubits'] = full_qubits
    ds.attrs['compression_qubits'] = compression_qubits
    ds.attrs['passed'] = int(len(failures) == 0)
    return ds, failures
