#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
Created on Wed Sep 23 09:47:13 2026

Writing and reading simulation output: transcripts as JSON lines, the
bias curve and per run summaries as CSV, crosscheck sweeps as netCDF.
"""
import json

import pandas as pd
import xarray as xr

from msc_coin_tools.calc import BiasCurvePoint
from msc_coin_tools.protocol import Transcript

__all__ = ['storeTranscripts', 'readTranscripts', 'storeRunTable',
           'storeCurve', 'readCurve', 'curveCSV', 'storeCrosscheck',
           'readCrosscheck', 'crosscheckSummary']

curve_columns = ['K', 'p0', 'bias']
float_format = '%.12g'


def storeTranscripts(transcripts, outpath):
    """
    Writes one JSON record per line.

    Inputs
    ------
    transcripts -- iterable of Transcript objects or already encoded
                   JSON lines.
    outpath ------ path of the output file (overwritten).
    """
    with open(outpath, 'w') as out:
        for t in transcripts:
            out.write((t if isinstance(t, str) else t.toJSON()) + '\n')


def readTranscripts(inpath):
    """Returns the Transcripts stored by storeTranscripts."""
    with open(inpath) as src:
        return [Transcript.fromJSON(line) for line in src if line.strip()]


def _run_row(rec):
    row = dict(rec['params'])
    for key in ('seed', 'honest', 'target', 'compressed', 'x_tilde', 'a_guess', 'parity', 'X'):
        row[key] = rec.get(key)
    row['a'] = ''.join(str(x) for x in rec['a'])
    row['b'] = ''.join('-' if x is None else str(x) for x in rec['b'])
    return row


def storeRunTable(transcripts, outpath):
    """
    Writes a CSV summary with one row per run: parameters, seed, bit
    strings, attack internals and the result.
    """
    recs = [json.loads(t) if isinstance(t, str) else t.toDict() for t in transcripts]
    pd.DataFrame([_run_row(r) for r in recs]).to_csv(outpath, index=False)


def _curve_frame(points):
    return pd.DataFrame([[pt.K, pt.p0, pt.bias] for pt in points], columns=curve_columns)


def curveCSV(points):
    """The curve as CSV text with a K,p0,bias header, 12 significant digits."""
    return _curve_frame(points).to_csv(index=False, float_format=float_format,
                                       lineterminator='\n')


def storeCurve(points, outpath):
    """Writes BiasCurvePoints to outpath as CSV (see curveCSV)."""
    with open(outpath, 'w') as out:
        out.write(curveCSV(points))


def readCurve(inpath):
    """Reads a curve file back into a list of BiasCurvePoint."""
    df = pd.read_csv(inpath, float_precision='round_trip')
    if list(df.columns) != curve_columns:
        raise ValueError('{} is not a curve file, header {}'.format(inpath, list(df.columns)))
    return [BiasCurvePoint(K=row.K, p0=row.p0, bias=row.bias) for row in df.itertuples(index=False)]


def storeCrosscheck(ds, outpath):
    """Writes a crosscheck Dataset to netCDF."""
    ds.to_netcdf(outpath, engine='netcdf4')


def readCrosscheck(inpath):
    with xr.open_dataset(inpath, engine='netcdf4') as ds:
        return ds.load()


def crosscheckSummary(ds, failures, sweep):
    """JSON-ready summary of a crosscheck: the sweep, worst errors and failures."""
    def worst(a, b):
        err = abs(ds[a] - ds[b]).max(skipna=True)
        return float(err) if err.notnull() else None
    return {'sweep': sweep,
            'tolerance': ds.attrs['tolerance'],
            'max_error': {'pe': worst('pe_closed', 'pe_oracle'),
                          'fidelity': worst('fid_closed', 'fid_oracle'),
                          'pe_full': worst('pe_full', 'pe_oracle'),
                          'fidelity_full': worst('fid_full', 'fid_oracle'),
                          'compression': (float(ds['compression_error'].max(skipna=True))
                                          if ds['compression_error'].notnull().any() else None)},
                'failures': failures,
                'pass': len(failures) == 0}
