import math

import numpy as np
import pytest
from msc_coin_tools.calc import *
from msc_coin_tools.protocol import ProtocolParams, effective_params, oracle_parity

# Sweep of the closed form checks
qs = range(1, 7)
c2s = (0.6, 0.75, 0.9)
ns = (1, 2)
ts = (0.05, 0.1, 0.2, 0.3, 0.4, 0.45)


def amps(t):
    return math.sqrt(1. - t), math.sqrt(t)


def test_pe_parity_values():
    c = s = math.sqrt(0.5)
    assert(abs(pe_parity(5, c, s)) < 1e-12)
    assert(abs(pe_parity(3, 1., 0.) - 0.5) < 1e-12)
    assert(pe_parity(0, *amps(0.1)) == 0.)
    assert(abs(pe_parity(2, *amps(0.1)) - 0.32) < 1e-12)
    with pytest.raises(ValueError):
        pe_parity(-1, *amps(0.1))


def test_fidelity_parity_values():
    c, s = amps(0.1)
    assert(abs(fidelity_parity(1, c, s) - 0.8) < 1e-12)
    assert(abs(fidelity_parity(2, c, s) - 0.8) < 1e-12)
    assert(fidelity_parity(0, c, s) == 0.)
    assert(abs(fidelity_parity(4, math.sqrt(0.5), math.sqrt(0.5))) < 1e-12)
    # consecutive odd/even lengths share a value
    for k in range(1, 6):
        assert(abs(fidelity_parity(2 * k - 1, c, s) - fidelity_parity(2 * k, c, s)) < 1e-12)
    big = fidelity_parity(10 ** 6, *amps(0.4999))
    assert(np.isfinite(big) and 0. <= big <= 1.)


def test_closed_forms_against_oracles():
    for q in qs:
        for c2 in c2s:
            for n in ns:
                p = ProtocolParams(c2, n, q, 1)
                eff = effective_params(p)
                pe, fid = oracle_parity(q, p, compressed=True)
                assert(abs(pe_parity(q, eff.c_eff, eff.s_eff) - pe) < 1e-9)
                assert(abs(fidelity_parity(q, eff.c_eff, eff.s_eff) - fid) < 1e-9)


def test_binomial_overlap_form():
    for t in ts:
        for q in (1, 3, 5, 7, 21):
            assert(abs(binomial_overlap_form(q, t) - fidelity_parity(q, *amps(t))) < 1e-12)
    # even lengths pick up the central binomial term
    assert(abs(binomial_overlap_form(2, 0.1) - 0.98) < 1e-12)
    for q in (2, 4, 6):
        central = math.comb(q, q // 2) * (0.1 * 0.9) ** (q // 2)
        assert(abs(binomial_overlap_form(q, 0.1) - fidelity_parity(q, *amps(0.1)) - central) < 1e-12)


def test_gaussian_alpha():
    assert(abs(gaussian_alpha(100, 0.25) - 5.773502691896258) < 1e-9)
    assert(gaussian_alpha(100, 0.5) == 0.)
    with pytest.raises(ValueError):
        gaussian_alpha(10, 0.)
    for q in (1, 25, 400):
        for t in ts:
            alpha = gaussian_alpha(q, t)
            assert(abs(t_from_alpha(alpha, q) - t) < 1e-12)
            assert(abs(t_from_alpha(alpha, q, upper=True) - (1 - t)) < 1e-12)


def test_gaussian_factors():
    assert(fidelity_gaussian(0.) == 0.)
    assert(abs(fidelity_gaussian(50.) - 1.) < 1e-12)
    assert(abs(fidelity_gaussian(1.1774) - 0.7609) < 1e-3)
    assert(pe_complement_gaussian(0.) == 1.)
    assert(abs(pe_complement_gaussian(50.) - 0.5) < 1e-12)
    with pytest.raises(ValueError):
        fidelity_gaussian(-1.)
    # the Gaussian success is a lower bound on the exact one
    for q in (1, 5, 25, 100):
        for t in ts:
            assert(pe_complement_exact(q, t) >= pe_complement_gaussian(gaussian_alpha(q, t)) - 1e-12)


def test_gaussian_convergence():
    def err(q, t):
        return abs(fidelity_parity(q, *amps(t)) - fidelity_gaussian(gaussian_alpha(q, t)))
    for t in (0.2, 0.3, 0.4):
        assert(err(400, t) <= 0.03)
    for t in (0.2, 0.3):
        assert(err(25, t) >= err(100, t) >= err(400, t))
    assert(err(400, 0.4) <= min(err(25, 0.4), err(100, 0.4)))


def test_bias_from_K():
    assert(abs(bias_from_K(0.510964) - 0.59195) < 1e-4)
    assert(abs(bias_from_K(1e-12) - 0.5) < 1e-2)
    assert(abs(bias_from_K(1. - 1e-12) - 0.5) < 1e-2)
    for K in (0., 1., -0.1, 1.5):
        with pytest.raises(ValueError):
            bias_from_K(K)


def test_curve():
    pts = curve(uniform_grid(999))
    assert(len(pts) == 999)
    assert(all(pt.bias > 0. for pt in pts))
    bias = np.array([pt.bias for pt in pts])
    top = int(np.argmax(bias))
    assert(np.all(np.diff(bias[:top + 1]) > 0.))
    assert(np.all(np.diff(bias[top:]) < 0.))
    assert(len(curve(uniform_grid())) == 99)
    assert(abs(uniform_grid()[0] - 0.01) < 1e-15)
    with pytest.raises(ValueError):
        curve([0.5, 1.])
    with pytest.raises(ValueError):
        uniform_grid(0)


def test_max_bias():
    opt = max_bias()
    assert(abs(opt.K_star - 0.510964) < 1e-3)
    assert(abs(opt.bias_star - 0.09195) < 1e-4)
    assert(abs(opt.alpha_star - math.sqrt(-2. * math.log(opt.K_star))) < 1e-12)
    assert(abs(bias_gaussian(opt.alpha_star) - 0.5 - opt.bias_star) < 1e-12)
    for dK in (1e-3, -1e-3):
        assert(bias_from_K(opt.K_star + dK) - 0.5 <= opt.bias_star)


def test_knowledge():
    assert(abs(knowledge(2, 0.8) - 0.36) < 1e-12)
    lo, hi = knowledge_range(4, 0.8)
    assert(abs(lo - 0.6 ** 4) < 1e-12 and abs(hi - 0.6) < 1e-12)


def test_bias_lower_bound_values():
    assert(abs(bias_lower_bound(ProtocolParams(0.9, 1, 2, 1)) - 0.656) < 1e-12)
    assert(abs(bias_lower_bound(ProtocolParams(0.75, 1, 2, 1)) - 0.5 * (1 + math.sqrt(0.75)) / 2 * 1.25) < 1e-12)
    # attacking in the last round needs no guess
    for c2 in c2s:
        for n in ns:
            w = (2 * c2 - 1) ** n
            for m in (1, 3):
                p = ProtocolParams(c2, n, m, m)
                assert(abs(bias_lower_bound(p) - 0.5 * (1 + w ** 2)) < 1e-12)
    assert(abs(bias_bound_from_overlap(5, 2, 0.) - 0.5) < 1e-12)
    with pytest.raises(ValueError):
        bias_bound_from_overlap(3, 4, 0.5)


def test_bias_tradeoff():
    # a later attack guesses fewer bits but steers fewer rounds
    m, w = 12, 0.8
    c, s = math.sqrt((1 + w) / 2), math.sqrt((1 - w) / 2)
    guess = [1 - pe_parity(m - l, c, s) for l in range(1, m + 1)]
    fid = [fidelity_parity(m - l + 1, c, s) for l in range(1, m + 1)]
    assert(np.all(np.diff(guess) >= -1e-15))
    assert(np.all(np.diff(fid) <= 1e-15))


def test_bias_bound_long_protocol():
    # the best round at m = 40 does at least as well as the curve's maximum
    p = ProtocolParams(0.9, 1, 40, 1)
    best = max(bias_lower_bound(p.withL(l)) for l in range(1, 40))
    assert(best - 0.5 >= 0.09195 - 0.01)


def test_optimal_l():
    opt = max_bias()
    for m in (20, 40, 80):
        timing = optimal_l(m, K_star=opt.K_star)
        assert(abs(timing.overlap - math.cos(math.pi / 9) ** math.log2(m)) < 1e-12)
        assert(abs(timing.K - opt.K_star) < 1e-6)
        assert(timing.l == m - timing.q)
        bounds = [bias_bound_from_overlap(m, l, timing.overlap) for l in range(1, m)]
        best = int(np.argmax(bounds)) + 1
        assert(abs(timing.l - best) <= 1)
        assert(abs(timing.bias - (bounds[timing.l - 1] - 0.5)) < 1e-12)
        top = best - 1
        assert(np.all(np.diff(bounds[:top + 1]) >= -1e-15))
        assert(np.all(np.diff(bounds[top:]) <= 1e-15))
    assert(optimal_l(20, K_star=opt.K_star).l == 18)
    with pytest.raises(ValueError):
        optimal_l(1)
    with pytest.raises(ValueError):
        optimal_l(10, msc_defaults=False)
