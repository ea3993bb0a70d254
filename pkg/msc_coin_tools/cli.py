#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
Created on Thu Sep 24 16:20:58 2026

Command line front end.

    msc-coin-tools simulate   [--honest] --c2 C2 --n N --m M --l L --runs R --seed S
    msc-coin-tools curve      [--grid N] [--out PATH]
    msc-coin-tools optimize   [--m M]
    msc-coin-tools crosscheck [--q-max Q] [--c2-values ...] [--n-max N] [--out PATH]

Reports go to stdout as JSON; progress (--verbose) goes to stderr.
Exit codes: 0 success, 1 failed check, 2 usage error, 3 I/O error.
"""
import argparse
import contextlib
import json
import sys

from msc_coin_tools.calc import (curve, fidelity_parity, max_bias, optimal_l,
                                 pe_parity, uniform_grid)
from msc_coin_tools.protocol import ProtocolParams, crosscheck, simulate
from msc_coin_tools.protocol.crosscheck import (dflt_c2_values, dflt_full_qubits,
                                                dflt_n_max, dflt_q_max)
from msc_coin_tools.protocol.experiment import dflt_runs, dflt_seed
from msc_coin_tools.protocol.states import dflt_c2, dflt_l, dflt_m, dflt_n
from msc_coin_tools.protocol.transcript import json_number
from msc_coin_tools.calc.bias import dflt_grid
from msc_coin_tools.post import curveCSV, storeCrosscheck, crosscheckSummary
from msc_coin_tools.post import storeRunTable, storeTranscripts

__all__ = ['RunConfig', 'cmd_simulate', 'cmd_curve', 'cmd_optimize',
           'cmd_crosscheck', 'build_parser', 'main']

EXIT_OK = 0
EXIT_CHECK = 1
EXIT_USAGE = 2
EXIT_IO = 3

formats = ('json', 'csv')


def rounded(obj):
    """Copy of a JSON-ready object with floats cut to 12 significant digits."""
    if isinstance(obj, bool) or obj is None:
        return obj
    if isinstance(obj, float):
        return json_number(obj)
    if isinstance(obj, dict):
        return {k: rounded(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [rounded(v) for v in obj]
    return obj


def emit(obj):
    print(json.dumps(rounded(obj)), file=sys.stdout)


#################
# RunConfig class
#################
class RunConfig:
    """
    Settings of a simulate invocation: protocol parameters, the number
    of runs, seed, output and the kind of runs.
    """
    def __init__(self, command='simulate', c2=dflt_c2, n=dflt_n, m=dflt_m, l=dflt_l,
                 runs=dflt_runs, seed=dflt_seed, out=None, fmt='json',
                 honest=False, target=0, workers=1, compressed=True, verbose=False):
        if not 0.5 < c2 < 1.:
            raise ValueError('c2 = {} not a valid option, must lie in (1/2, 1)'.format(c2))
        if int(runs) != runs or runs < 1:
            raise ValueError('runs = {} not a valid option, must be >= 1'.format(runs))
        if int(seed) != seed or not 0 <= seed < 2 ** 64:
            raise ValueError('seed = {} not a valid option, must be a 64-bit unsigned integer'.format(seed))
        if fmt not in formats:
            raise ValueError('{} not a valid output format, choose from {}'.format(fmt, formats))
        if target not in (0, 1):
            raise ValueError('target = {} not a valid option, choose 0 or 1'.format(target))
        self.command = command
        self.params = ProtocolParams(c2, n, m, l)
        self.runs = int(runs)
        self.seed = int(seed)
        self.out = out
        self.fmt = fmt
        self.honest = honest
        self.target = target
        self.workers = workers
        self.compressed = compressed
        self.verbose = verbose

    def __str__(self):
        kind = 'honest' if self.honest else 'attack'
        return '{} {}: {}, {} runs, seed {}'.format(self.command, kind, self.params, self.runs, self.seed)

    @classmethod
    def fromArgs(cls, args):
        return cls(command=args.command, c2=args.c2, n=args.n, m=args.m, l=args.l,
                   runs=args.runs, seed=args.seed, out=args.out, fmt=args.format,
                   honest=args.honest, target=args.target, workers=args.workers,
                   compressed=not args.full, verbose=args.verbose)


def cmd_simulate(cfg):
    """
    Runs cfg.runs protocol runs and prints their AggregateReport as JSON.
    Transcripts are written to cfg.out when given: JSON lines, or a CSV
    table with one row per run for the csv format.
    """
    keep = cfg.out is not None
    with contextlib.redirect_stdout(sys.stderr):
        report, lines = simulate(cfg.params, runs=cfg.runs, seed=cfg.seed,
                                 honest=cfg.honest, target=cfg.target,
                                 compressed=cfg.compressed, workers=cfg.workers,
                                 keep_transcripts=keep, verbose=cfg.verbose)
    if keep:
        if cfg.fmt == 'csv':
            storeRunTable(lines, cfg.out)
        else:
            storeTranscripts(lines, cfg.out)
    emit(report.toDict())
    return report


def cmd_curve(grid=dflt_grid, out=None):
    """
    Writes the bias curve on the uniform grid of size grid as CSV, to
    out or to stdout.
    """
    points = curve(uniform_grid(grid))
    text = curveCSV(points)
    if out is None:
        sys.stdout.write(text)
    else:
        with open(out, 'w') as dst:
            dst.write(text)
    return points


def cmd_optimize(m=None):
    """Prints the curve's maximum, and the attack timing for m rounds if given."""
    opt = max_bias()
    report = {'K_star': opt.K_star, 'bias_star': opt.bias_star, 'alpha_star': opt.alpha_star}
    if m is not None:
        timing = optimal_l(m, msc_defaults=True, K_star=opt.K_star)
        report['optimal_l'] = {'m': m, 'unrevealed_real': timing.q_real,
                               'unrevealed': timing.q, 'l': timing.l,
                               'bias': timing.bias, 'overlap': timing.overlap,
                               'K': timing.K}
    emit(report)
    return report


def cmd_crosscheck(q_max=dflt_q_max, c2_values=dflt_c2_values, n_max=dflt_n_max,
                   out=None, fmt='json', full_qubits=dflt_full_qubits,
                   pe_formula=pe_parity, fidelity_formula=fidelity_parity,
                   verbose=False):
    """
    Runs crosscheck over the sweep and prints a JSON summary. The full
    Dataset goes to out as netCDF (fmt 'nc') or the summary as JSON.
    """
    sweep = {'q_max': q_max, 'c2_values': list(c2_values), 'n_max': n_max,
             'full_qubits': full_qubits}
    with contextlib.redirect_stdout(sys.stderr):
        ds, failures = crosscheck(q_max=q_max, c2_values=c2_values, n_max=n_max,
                                  pe_formula=pe_formula, fidelity_formula=fidelity_formula,
                                  full_qubits=full_qubits, verbose=verbose)
    summary = crosscheckSummary(ds, failures, sweep)
    if out is not None:
        if fmt == 'nc':
            storeCrosscheck(ds, out)
        else:
            with open(out, 'w') as dst:
                json.dump(rounded(summary), dst)
    emit(summary)
    return summary


def build_parser():
    parser = argparse.ArgumentParser(prog='msc-coin-tools',
                                     description='Coin tossing protocol simulation and attack analysis')
    sub = parser.add_subparsers(dest='command', required=True)

    sim = sub.add_parser('simulate', help='Monte Carlo runs of the protocol')
    sim.add_argument('--c2', type=float, default=dflt_c2, help='c squared, in (1/2, 1)')
    sim.add_argument('--n', type=int, default=dflt_n, help='qubits per committed bit')
    sim.add_argument('--m', type=int, default=dflt_m, help='bit rounds')
    sim.add_argument('--l', type=int, default=dflt_l, help='attack round')
    sim.add_argument('--runs', type=int, default=dflt_runs)
    sim.add_argument('--seed', type=int, default=dflt_seed)
    sim.add_argument('--target', type=int, choices=(0, 1), default=0)
    sim.add_argument('--honest', action='store_true', help='honest Bob instead of the attack')
    sim.add_argument('--full', action='store_true', help='2^n dimensional blocks')
    sim.add_argument('--workers', type=int, default=1)
    sim.add_argument('--out', default=None, help='transcript output path')
    sim.add_argument('--format', choices=formats, default='json')
    sim.add_argument('--verbose', action='store_true')

    cur = sub.add_parser('curve', help='bias as a function of K, as CSV')
    cur.add_argument('--grid', type=int, default=dflt_grid, help='number of grid points')
    cur.add_argument('--out', default=None)

    opt = sub.add_parser('optimize', help='maximum of the bias curve')
    opt.add_argument('--m', type=int, default=None, help='also report the attack timing for m rounds')

    cc = sub.add_parser('crosscheck', help='closed forms against dense oracles')
    cc.add_argument('--q-max', type=int, default=dflt_q_max)
    cc.add_argument('--c2-values', type=float, nargs='+', default=list(dflt_c2_values))
    cc.add_argument('--n-max', type=int, default=dflt_n_max)
    cc.add_argument('--full-qubits', type=int, default=dflt_full_qubits)
    cc.add_argument('--out', default=None)
    cc.add_argument('--format', choices=('json', 'nc'), default='json')
    cc.add_argument('--verbose', action='store_true')
    return parser


def main(argv=None, pe_formula=pe_parity, fidelity_formula=fidelity_parity):
    """
    Entry point. Returns the exit code; the closed forms checked by
    crosscheck can be swapped for testing.
    """
    args = build_parser().parse_args(argv)
    try:
        if args.command == 'simulate':
            # warnings raised while validating parameters stay off stdout
            with contextlib.redirect_stdout(sys.stderr):
                cfg = RunConfig.fromArgs(args)
            report = cmd_simulate(cfg)
            return EXIT_OK if report.passed() else EXIT_CHECK
        if args.command == 'curve':
            cmd_curve(args.grid, args.out)
            return EXIT_OK
        if args.command == 'optimize':
            cmd_optimize(args.m)
            return EXIT_OK
        summary = cmd_crosscheck(args.q_max, args.c2_values, args.n_max, args.out,
                                 args.format, args.full_qubits, pe_formula,
                                 fidelity_formula, args.verbose)
        if not summary['pass']:
            for fail in summary['failures']:
                print('Check failed: {}'.format(fail), file=sys.stderr)
            return EXIT_CHECK
        return EXIT_OK
    except ValueError as err:
        print('ERROR - {}'.format(err), file=sys.stderr)
        return EXIT_USAGE
    except OSError as err:
        print('ERROR - {}'.format(err), file=sys.stderr)
        return EXIT_IO


if __name__ == '__main__':
    sys.exit(main())
