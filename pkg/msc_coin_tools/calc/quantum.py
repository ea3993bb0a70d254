#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
Created on Mon Sep 14 09:12:31 2026

Dense quantum states, POVM measurements and the distinguishability
measures (trace distance, Helstrom error, fidelity, transition
probability) used by the coin tossing simulations. Everything here is
sized for desk-scale Hilbert spaces, roughly dimension 4096 or less.
"""
from collections import namedtuple
from functools import reduce
import math

import numpy as np
from scipy import linalg

__all__ = ['StateVector', 'DensityMatrix', 'Povm', 'MeasurementSample',
           'DistinguishabilityReport', 'UhlmannResult', 'tensor',
           'tensor_all', 'partial_trace', 'trace_distance', 'helstrom_pe',
           'fidelity', 'transition_probability', 'kolmogorov_distance',
           'classical_fidelity', 'distinguishability', 'purify',
           'uhlmann_unitary', 'apply_operator', 'measure', 'sample_index']

# Tolerances
dflt_atol = 1e-9
state_tol = 1e-10
povm_tol = 1e-9
eig_floor = 1e-12
helstrom_tie = 1e-12
null_prob = 1e-12
null_sv = 1e-10

MeasurementSample = namedtuple('MeasurementSample',
                               ['label', 'probability', 'state', 'index'])
DistinguishabilityReport = namedtuple('DistinguishabilityReport',
                                      ['pe', 'k', 'fid', 'trans'])
UhlmannResult = namedtuple('UhlmannResult',
                           ['unitary', 'overlap_amplitude', 'u'])


def _check_dims(dims, size):
    dims = [int(d) for d in dims]
    if len(dims) == 0 or min(dims) < 1:
        raise ValueError('{} not a valid list of subsystem dimensions'.format(dims))
    if math.prod(dims) != size:
        raise ValueError('Subsystem dimensions {} do not multiply to {}'.format(dims, size))
    return dims


def _axes(targets, ndims):
    if targets is None:
        return list(range(ndims))
    if np.isscalar(targets):
        targets = [targets]
    targets = sorted(int(t) for t in targets)
    if len(set(targets)) != len(targets) or targets[0] < 0 or targets[-1] >= ndims:
        raise ValueError('{} not a valid choice of subsystems for {} factors'.format(targets, ndims))
    return targets


def _psd_sqrt(mat):
    """Hermitian square root with eigenvalues below eig_floor treated as zero."""
    w, v = linalg.eigh(mat)
    w = np.where(w > eig_floor, w, 0.)
    return (v * np.sqrt(w)) @ v.conj().T


#################
# State classes
#################
class StateVector:
    """
    A normalized pure state stored as a dense complex amplitude vector
    together with the dimensions of its tensor factors.
    """
    def __init__(self, amplitudes, dims=None, check=True):
        """
        Inputs
        ------
        amplitudes --- array-like of complex amplitudes.
        dims --------- list of subsystem dimensions. Their product must
                       equal the number of amplitudes. Defaults to a
                       single factor.
        check -------- when True the squared norm is validated to
                       within 1e-10 of one.
        """
        amps = np.asarray(amplitudes, dtype=complex).ravel()
        if dims is None:
            dims = [amps.size]
        self._dims = _check_dims(dims, amps.size)
        if check:
            norm = np.vdot(amps, amps).real
            if abs(norm - 1.) > state_tol:
                raise ValueError('State vector has squared norm {}, expected 1'.format(norm))
        self._amps = amps

    def __str__(self):
        return 'StateVector over dims {}'.format(self._dims)

    def getAmplitudes(self):
        return self._amps

    def getDims(self):
        return list(self._dims)

    def getDim(self):
        return self._amps.size

    def toDensityMatrix(self):
        """Returns the projector onto this state as a DensityMatrix."""
        return DensityMatrix(np.outer(self._amps, self._amps.conj()),
                             self._dims, check=False)

    def overlap(self, other):
        """Returns the inner product <self|other>."""
        if self.getDims() != other.getDims():
            raise ValueError('Dimension mismatch: {} vs {}'.format(self._dims, other.getDims()))
        return np.vdot(self._amps, other.getAmplitudes())


class DensityMatrix:
    """
    A dense density matrix together with the dimensions of its
    tensor factors.
    """
    def __init__(self, entries, dims=None, check=True):
        """
        Inputs
        ------
        entries ------ square array-like of complex matrix entries.
        dims --------- list of subsystem dimensions. Defaults to one factor.
        check -------- when True the matrix is validated as Hermitian,
                       unit trace and positive semidefinite, all to 1e-10.
        """
        rho = np.asarray(entries, dtype=complex)
        if rho.ndim != 2 or rho.shape[0] != rho.shape[1]:
            raise ValueError('Density matrix must be square, got shape {}'.format(rho.shape))
        if dims is None:
            dims = [rho.shape[0]]
        self._dims = _check_dims(dims, rho.shape[0])
        if check:
            if np.max(np.abs(rho - rho.conj().T)) > state_tol:
                raise ValueError('Density matrix is not Hermitian')
            tr = np.trace(rho).real
            if abs(tr - 1.) > state_tol:
                raise ValueError('Density matrix has trace {}, expected 1'.format(tr))
            wmin = linalg.eigvalsh(rho)[0]
            if wmin < -state_tol:
                raise ValueError('Density matrix has negative eigenvalue {}'.format(wmin))
        self._rho = rho

    def __str__(self):
        return 'DensityMatrix over dims {}'.format(self._dims)

    def getEntries(self):
        return self._rho

    def getDims(self):
        return list(self._dims)

    def getDim(self):
        return self._rho.shape[0]

    def purity(self):
        return np.real(np.trace(self._rho @ self._rho))


#################
# POVM class
#################
class Povm:
    """
    A finite POVM: labelled positive operators summing to the identity.
    Diagonal POVMs (register projectors) are stored as a stack of
    diagonals and never expanded to dense matrices unless asked.
    """
    def __init__(self, elements, check=True):
        """
        Inputs
        ------
        elements ----- list of (label, matrix) pairs.
        check -------- validate positivity (1e-10) and completeness (1e-9).
        """
        if len(elements) == 0:
            raise ValueError('A POVM needs at least one element')
        self._labels = [lab for lab, _ in elements]
        mats = [np.asarray(e, dtype=complex) for _, e in elements]
        self._dim = mats[0].shape[0]
        for e in mats:
            if e.shape != (self._dim, self._dim):
                raise ValueError('POVM element of shape {} does not match dimension {}'.format(e.shape, self._dim))
        offdiag = sum(np.count_nonzero(e - np.diag(np.diag(e))) for e in mats)
        if offdiag == 0:
            self._diag = np.array([np.real(np.diag(e)) for e in mats])
            self._mats = None
        else:
            self._diag = None
            self._mats = mats
        self._sqrt = {}
        if check:
            self._validate()

    @classmethod
    def fromDiagonals(cls, labels, diagonals, check=True):
        """
        Builds a diagonal POVM from its diagonals.

        Inputs
        ------
        labels ------- outcome labels, one per element.
        diagonals ---- 2-D array-like, one row of real weights per element.
        """
        povm = cls.__new__(cls)
        povm._labels = list(labels)
        povm._diag = np.asarray(diagonals, dtype=float)
        if povm._diag.ndim != 2 or povm._diag.shape[0] != len(povm._labels):
            raise ValueError('Need one diagonal per label')
        povm._dim = povm._diag.shape[1]
        povm._mats = None
        povm._sqrt = {}
        if check:
            povm._validate()
        return povm

    def _validate(self):
        if self._diag is not None:
            if np.min(self._diag) < -state_tol:
                raise ValueError('POVM element is not positive semidefinite')
            total = np.sum(self._diag, axis=0)
            if np.max(np.abs(total - 1.)) > povm_tol:
                raise ValueError('POVM elements do not sum to the identity')
            return
        for lab, e in zip(self._labels, self._mats):
            if np.max(np.abs(e - e.conj().T)) > state_tol:
                raise ValueError('POVM element {} is not Hermitian'.format(lab))
            if linalg.eigvalsh(e)[0] < -state_tol:
                raise ValueError('POVM element {} is not positive semidefinite'.format(lab))
        total = reduce(np.add, self._mats)
        if np.max(np.abs(total - np.eye(self._dim))) > povm_tol:
            raise ValueError('POVM elements do not sum to the identity')

    def __len__(self):
        return len(self._labels)

    def __str__(self):
        kind = 'diagonal' if self.isDiagonal() else 'dense'
        return 'Povm with {} {} elements on dimension {}'.format(len(self), kind, self._dim)

    def getLabels(self):
        return list(self._labels)

    def getDim(self):
        return self._dim

    def isDiagonal(self):
        return self._diag is not None

    def getDiagonals(self):
        return self._diag

    def getElement(self, index):
        if self._diag is not None:
            return np.diag(self._diag[index]).astype(complex)
        return self._mats[index]

    def getElements(self):
        return [(lab, self.getElement(i)) for i, lab in enumerate(self._labels)]

    def sqrtElement(self, index):
        """Square root of one element, cached per element."""
        if index not in self._sqrt:
            if self._diag is not None:
                self._sqrt[index] = np.sqrt(np.clip(self._diag[index], 0., None))
            else:
                self._sqrt[index] = _psd_sqrt(self._mats[index])
        return self._sqrt[index]


#################
# Factor bookkeeping
#################
def _split(amps, dims, targets):
    """Reshape a vector into a (targets, rest) matrix."""
    n = len(dims)
    rest = [i for i in range(n) if i not in targets]
    perm = list(targets) + rest
    dt = math.prod([dims[i] for i in targets])
    mat = amps.reshape(dims).transpose(perm).reshape(dt, -1)
    return mat, perm


def _join(mat, dims, perm):
    shape = [dims[i] for i in perm]
    return mat.reshape(shape).transpose(np.argsort(perm)).ravel()


def _split_rho(rho, dims, targets):
    """Reshape a density matrix into a (dt, dr, dt, dr) tensor."""
    n = len(dims)
    rest = [i for i in range(n) if i not in targets]
    perm = list(targets) + rest
    dt = math.prod([dims[i] for i in targets])
    dr = rho.shape[0] // dt
    t = rho.reshape(dims + dims).transpose(perm + [p + n for p in perm])
    return t.reshape(dt, dr, dt, dr), perm


def _join_rho(t4, dims, perm):
    n = len(dims)
    shape = [dims[i] for i in perm]
    t = t4.reshape(shape + shape)
    inv = list(np.argsort(perm))
    t = t.transpose(inv + [i + n for i in inv])
    d = math.prod(dims)
    return t.reshape(d, d)


#################
# Operations
#################
def tensor(a, b):
    """
    Kronecker product of two states of the same kind.

    Inputs
    ------
    a, b --------- two StateVectors or two DensityMatrices.

    Outputs
    -------
    Returns a state of the same kind whose dims are a's dims followed by b's.
    """
    if isinstance(a, StateVector) and isinstance(b, StateVector):
        return StateVector(np.kron(a.getAmplitudes(), b.getAmplitudes()),
                           a.getDims() + b.getDims(), check=False)
    if isinstance(a, DensityMatrix) and isinstance(b, DensityMatrix):
        return DensityMatrix(np.kron(a.getEntries(), b.getEntries()),
                             a.getDims() + b.getDims(), check=False)
    raise TypeError('Cannot tensor {} with {}'.format(type(a).__name__, type(b).__name__))


def tensor_all(states):
    """Left-to-right tensor product of a non-empty sequence of states."""
    return reduce(tensor, states)


def partial_trace(rho, keep):
    """
    Traces out every subsystem not listed in keep.

    Inputs
    ------
    rho ---------- DensityMatrix (or StateVector, traced as its projector).
    keep --------- iterable of subsystem indices to keep. Must be non-empty.

    Outputs
    -------
    Returns a DensityMatrix over the kept subsystems, in ascending order.
    """
    keep = list(keep) if not np.isscalar(keep) else [keep]
    if len(keep) == 0:
        raise ValueError('Need at least one subsystem to keep')
    dims = rho.getDims()
    keep = _axes(keep, len(dims))
    kdims = [dims[i] for i in keep]
    if isinstance(rho, StateVector):
        mat, _ = _split(rho.getAmplitudes(), dims, keep)
        return DensityMatrix(mat @ mat.conj().T, kdims, check=False)
    t4, _ = _split_rho(rho.getEntries(), dims, keep)
    return DensityMatrix(np.einsum('irjr->ij', t4), kdims, check=False)


def _pair(rho0, rho1):
    if isinstance(rho0, StateVector):
        rho0 = rho0.toDensityMatrix()
    if isinstance(rho1, StateVector):
        rho1 = rho1.toDensityMatrix()
    if rho0.getDim() != rho1.getDim():
        raise ValueError('Dimension mismatch: {} vs {}'.format(rho0.getDims(), rho1.getDims()))
    return rho0.getEntries(), rho1.getEntries()


def trace_distance(rho0, rho1):
    """
    Kolmogorov (trace) distance, half the sum of the absolute
    eigenvalues of rho0 - rho1.
    """
    r0, r1 = _pair(rho0, rho1)
    w = linalg.eigvalsh(r0 - r1)
    return float(np.clip(0.5 * np.sum(np.abs(w)), 0., 1.))


def helstrom_pe(rho0, rho1):
    """
    Minimum error discrimination of two equiprobable states.

    Inputs
    ------
    rho0, rho1 --- DensityMatrices of equal dimension.

    Outputs
    -------
    Returns (pe, povm). pe is the error probability of the optimal
    guess and povm is the two outcome measurement (labels 0 and 1)
    projecting onto the non-negative and negative eigenspaces of
    rho0 - rho1. Eigenvalues within 1e-12 of zero go to outcome 0.
    """
    r0, r1 = _pair(rho0, rho1)
    w, v = linalg.eigh(r0 - r1)
    pos = w > -helstrom_tie
    vp = v[:, pos]
    vn = v[:, ~pos]
    e0 = vp @ vp.conj().T
    e1 = vn @ vn.conj().T
    pe = 0.5 - 0.25 * np.sum(np.abs(w))
    return float(np.clip(pe, 0., 0.5)), Povm([(0, e0), (1, e1)], check=False)


def fidelity(rho0, rho1):
    """
    Fidelity tr sqrt(sqrt(rho0) rho1 sqrt(rho0)), computed as the
    nuclear norm of sqrt(rho0) sqrt(rho1).
    """
    r0, r1 = _pair(rho0, rho1)
    prod = _psd_sqrt(r0) @ _psd_sqrt(r1)
    sv = linalg.svd(prod, compute_uv=False)
    return float(np.clip(np.sum(sv), 0., 1.))


def transition_probability(rho0, rho1):
    """Maximal squared overlap of purifications, the squared fidelity."""
    return fidelity(rho0, rho1) ** 2


def _povm_probs(rho, povm):
    if povm.getDim() != rho.shape[0]:
        raise ValueError('POVM dimension {} does not match state dimension {}'.format(povm.getDim(), rho.shape[0]))
    if povm.isDiagonal():
        return povm.getDiagonals() @ np.real(np.diag(rho))
    return np.array([np.real(np.trace(rho @ e)) for _, e in povm.getElements()])


def kolmogorov_distance(rho0, rho1, povm=None):
    """
    Half the L1 distance between the outcome distributions of a POVM.
    Without a POVM the optimal (Helstrom) measurement is used, which
    gives the trace distance.
    """
    r0, r1 = _pair(rho0, rho1)
    if povm is None:
        return trace_distance(rho0, rho1)
    p0 = _povm_probs(r0, povm)
    p1 = _povm_probs(r1, povm)
    return float(0.5 * np.sum(np.abs(p0 - p1)))


def classical_fidelity(rho0, rho1, povm):
    """
    Bhattacharyya overlap of the outcome distributions of a POVM.
    Never smaller than fidelity(rho0, rho1).
    """
    r0, r1 = _pair(rho0, rho1)
    p0 = np.clip(_povm_probs(r0, povm), 0., None)
    p1 = np.clip(_povm_probs(r1, povm), 0., None)
    return float(np.sum(np.sqrt(p0 * p1)))


def distinguishability(rho0, rho1):
    """
    Collects pe, trace distance, fidelity and transition probability
    of a pair of states into a DistinguishabilityReport.
    """
    k = trace_distance(rho0, rho1)
    fid = fidelity(rho0, rho1)
    return DistinguishabilityReport(pe=0.5 - k / 2., k=k, fid=fid, trans=fid ** 2)


def purify(rho):
    """
    Purification sum_i sqrt(l_i) |v_i>|i> from the eigendecomposition
    of rho, eigenvalues in descending order. The ancilla has the same
    dims as rho, so the result lives on rho.dims + rho.dims.
    """
    if isinstance(rho, StateVector):
        rho = rho.toDensityMatrix()
    w, v = linalg.eigh(rho.getEntries())
    w, v = w[::-1], v[:, ::-1]
    w = np.clip(w, 0., None)
    amps = (v * np.sqrt(w)).ravel()
    amps = amps / np.linalg.norm(amps)
    return StateVector(amps, rho.getDims() * 2, check=False)


def _free_matrix(psi, free):
    dims = psi.getDims()
    axes = _axes(free, len(dims))
    mat, _ = _split(psi.getAmplitudes(), dims, axes)
    return mat


def uhlmann_unitary(psi0, psi1, free, reference=None):
    """
    Finds the unitary on the free subsystem that maximizes
    |<psi1|(I x U)|psi0>|.

    Inputs
    ------
    psi0, psi1 --- StateVectors with identical dims.
    free --------- index (or list of indices, merged into one factor in
                   ascending order) of the subsystem U acts on.
    reference ---- optional unitary on the free subsystem. When the
                   cross-overlap matrix is singular the free part of the
                   optimum is completed by the unitary factor of the
                   reference restricted to the null spaces, which makes
                   the answer unique whenever that restriction is
                   invertible.

    Outputs
    -------
    Returns an UhlmannResult(unitary, overlap_amplitude, u) with
    overlap_amplitude = <psi1|(I x U)|psi0> and u its squared modulus.
    """
    if psi0.getDims() != psi1.getDims():
        raise ValueError('Dimension mismatch: {} vs {}'.format(psi0.getDims(), psi1.getDims()))
    x0 = _free_matrix(psi0, free)
    x1 = _free_matrix(psi1, free)
    # M[i, j] = <psi1|(I x |j><i|)|psi0>, so <psi1|U psi0> = tr(U M)
    m = x0 @ x1.conj().T
    w, s, vh = linalg.svd(m)
    null = s < null_sv
    if reference is not None and np.any(null):
        reference = np.asarray(reference, dtype=complex)
        if reference.shape != m.shape:
            raise ValueError('Reference unitary of shape {} does not act on the free subsystem'.format(reference.shape))
        wn = w[:, null]
        vn = vh.conj().T[:, null]
        completed = m + wn @ (wn.conj().T @ reference.conj().T @ vn) @ vn.conj().T
        q, _ = linalg.polar(completed)
        unitary = q.conj().T
    else:
        unitary = vh.conj().T @ w.conj().T
    amp = np.trace(unitary @ m)
    return UhlmannResult(unitary=unitary, overlap_amplitude=complex(amp),
                         u=float(min(abs(amp) ** 2, 1.)))


def apply_operator(op, state, targets=None):
    """
    Applies op to the listed subsystems (all of them by default) of a
    StateVector or, as op rho op^dagger, of a DensityMatrix.
    """
    op = np.asarray(op, dtype=complex)
    dims = state.getDims()
    axes = _axes(targets, len(dims))
    dt = math.prod([dims[i] for i in axes])
    if op.shape != (dt, dt):
        raise ValueError('Operator of shape {} does not act on subsystems {}'.format(op.shape, axes))
    if isinstance(state, StateVector):
        mat, perm = _split(state.getAmplitudes(), dims, axes)
        return StateVector(_join(op @ mat, dims, perm), dims, check=False)
    t4, perm = _split_rho(state.getEntries(), dims, axes)
    t4 = np.einsum('ai,irjs,bj->arbs', op, t4, op.conj())
    return DensityMatrix(_join_rho(t4, dims, perm), dims, check=False)


def sample_index(probs, rng):
    """
    Index drawn from a normalized probability vector with a single
    rng.random() draw, the same draw rng.choice(len(probs), p=probs) takes.
    """
    cdf = np.cumsum(probs)
    k = int(np.searchsorted(cdf, rng.random() * cdf[-1], side='right'))
    return min(k, len(probs) - 1)


def measure(state, povm, rng, targets=None):
    """
    Samples one outcome of a POVM with the Born rule.

    Inputs
    ------
    state -------- StateVector or DensityMatrix.
    povm --------- Povm acting on the product of the target subsystems.
    rng ---------- numpy Generator; exactly one draw is consumed.
    targets ------ subsystem indices the POVM acts on, all by default.

    Outputs
    -------
    Returns a MeasurementSample(label, probability, state, index) where
    state is sqrt(E) rho sqrt(E) renormalized (a StateVector stays a
    StateVector).
    """
    dims = state.getDims()
    axes = _axes(targets, len(dims))
    dt = math.prod([dims[i] for i in axes])
    if dt != povm.getDim():
        raise ValueError('POVM dimension {} does not match subsystems {} of dims {}'.format(povm.getDim(), axes, dims))
    pure = isinstance(state, StateVector)
    if pure:
        mat, perm = _split(state.getAmplitudes(), dims, axes)
        if povm.isDiagonal():
            probs = povm.getDiagonals() @ np.sum(np.abs(mat) ** 2, axis=1)
        else:
            probs = np.array([np.real(np.vdot(mat, e @ mat)) for _, e in povm.getElements()])
    else:
        t4, perm = _split_rho(state.getEntries(), dims, axes)
        probs = _povm_probs(np.einsum('irjr->ij', t4), povm)
    probs = np.clip(probs, 0., None)
    if np.all(probs < null_prob):
        raise ValueError('Invalid POVM: every outcome has probability below {}'.format(null_prob))
    probs = probs / np.sum(probs)
    k = sample_index(probs, rng)
    root = povm.sqrtElement(k)
    if pure:
        post = root[:, None] * mat if povm.isDiagonal() else root @ mat
        post = _join(post, dims, perm)
        post = StateVector(post / np.linalg.norm(post), dims, check=False)
    else:
        if povm.isDiagonal():
            root = np.diag(root)
        t4 = np.einsum('ai,irjs,jb->arbs', root, t4, root)
        post = _join_rho(t4, dims, perm)
        post = DensityMatrix(post / np.real(np.trace(post)), dims, check=False)
    return MeasurementSample(label=povm.getLabels()[k], probability=float(probs[k]),
                             state=post, index=k)
