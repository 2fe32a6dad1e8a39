"""Relative-number-state machinery and the phase operators.

The two-mode rectangle relabels as |n, m>> with n = p - q (relative photon
number, conjugate to the phase) and m = min(p, q).  The shift D lowers n by
one and satisfies [D, N] = D exactly even after truncation.  The polar
phase operator psi (psi+ psi)^(-1/2) and the log-based phase are built
here, together with their cosine/sine combinations and the squared
amplitude.

Truncation makes every n-lowering operator nilpotent, so log/sqrt of the
raw matrices do not exist.  The spectral constructions therefore act on a
cyclic closure: each m-row of the lattice is closed into a weighted cycle,
which restores an invertible spectrum while leaving the interior physics
untouched (closure artifacts live on the lattice edge).
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from .fock import (OperatorMatrix, SubspaceProjector, ToleranceConfig,
                   TwoModeBasis, hermitian_expi, hermitian_power, identity,
                   principal_matrix_function)


@dataclass(frozen=True)
class RnsIndex:
    """Relative-number label (n, m): n may be negative, m >= 0."""

    n: int
    m: int


class RnsMap:
    """Bijection between Fock pairs (p, q) and relative labels (n, m)."""

    def __init__(self, basis: TwoModeBasis):
        self.basis = basis

    def to_rns(self, p: int, q: int) -> RnsIndex:
        self.basis.index_of(p, q)
        return RnsIndex(p - q, min(p, q))

    def to_pair(self, idx: RnsIndex) -> tuple[int, int]:
        if idx.n >= 0:
            p, q = idx.m + idx.n, idx.m
        else:
            p, q = idx.m, idx.m - idx.n
        self.basis.index_of(p, q)
        return p, q

    def contains(self, idx: RnsIndex) -> bool:
        p = idx.m + idx.n if idx.n >= 0 else idx.m
        q = idx.m if idx.n >= 0 else idx.m - idx.n
        return 0 <= p < self.basis.d_a and 0 <= q < self.basis.d_b

    def n_range(self, m: int) -> tuple[int, int]:
        """Inclusive n interval of row m."""
        return -(self.basis.d_b - 1 - m), self.basis.d_a - 1 - m


def rns_map(basis: TwoModeBasis) -> RnsMap:
    return RnsMap(basis)


def number_diff(basis: TwoModeBasis) -> OperatorMatrix:
    """Relative photon number N = a+a - b+b (diagonal, eigenvalue p - q).

    Built as the exact integer diagonal; the ladder-product form agrees to
    rounding but would carry (sqrt n)^2 float noise on the diagonal.
    """
    p, q = np.divmod(np.arange(basis.dim), basis.d_b)
    return OperatorMatrix(basis.dims, np.diag((p - q).astype(complex)))


def rns_phase_operator(basis: TwoModeBasis) -> OperatorMatrix:
    """Unitary-on-the-interior shift D: |n, m>> -> |n-1, m>>.

    Columns whose shifted target leaves the rectangle are zeroed, which
    keeps [D, N] = D exact on the whole truncated space.
    """
    rmap = rns_map(basis)
    d = np.zeros((basis.dim, basis.dim))
    for p in range(basis.d_a):
        for q in range(basis.d_b):
            src = rmap.to_rns(p, q)
            tgt = RnsIndex(src.n - 1, src.m)
            if rmap.contains(tgt):
                p2, q2 = rmap.to_pair(tgt)
                d[basis.index_of(p2, q2), basis.index_of(p, q)] = 1.0
    return OperatorMatrix(basis.dims, d)


def sw_phase_operator(psi: OperatorMatrix, tol: ToleranceConfig,
                      params=None) -> OperatorMatrix:
    """Polar phase operator psi (psi+ psi)^(-1/2) (pseudo-inverse floored)."""
    if params is not None and not params.is_balanced:
        warnings.warn("polar phase operator requested with A != B; "
                      "proceeding for comparison use", stacklevel=2)
    return psi @ hermitian_power(psi.dag() @ psi, -0.5, tol.pinv_rel_tol)


def cyclic_closure(op: OperatorMatrix, basis: TwoModeBasis,
                   weight: complex | None = None) -> OperatorMatrix:
    """Close every m-row of an n-lowering operator into a weighted cycle.

    Adds one entry per m-row mapping the bottom of the n chain back to its
    top (a self-loop on single-site rows).  The closed matrix has spectrum
    on circles of nonzero radius, so principal log/sqrt exist; the added
    entries sit on the lattice edge and are invisible to interior
    projectors with margin >= 1.  The wrap sign flips for even-length
    chains, which keeps every cycle eigenvalue at the maximal angular
    distance pi/L from the branch cut for either chain parity.
    """
    rmap = rns_map(basis)
    if weight is None:
        sign = 1.0 if (basis.d_a + basis.d_b) % 2 == 0 else -1.0
        weight = sign * math.sqrt(basis.d_b)
    closed = op.mat.astype(complex).copy()
    for m in range(min(basis.d_a, basis.d_b)):
        nlo, nhi = rmap.n_range(m)
        lo = basis.index_of(*rmap.to_pair(RnsIndex(nlo, m)))
        hi = basis.index_of(*rmap.to_pair(RnsIndex(nhi, m)))
        closed[hi, lo] += weight
    return OperatorMatrix(basis.dims, closed)


def theta_operator(psi: OperatorMatrix, basis: TwoModeBasis,
                   tol: ToleranceConfig) -> OperatorMatrix:
    """Log-based phase theta = (log psi_c - log psi_c+)/2i on the closure."""
    psic = cyclic_closure(psi, basis)
    lp = principal_matrix_function(psic, "log", tol.branch_eps)
    lm = principal_matrix_function(psic.dag(), "log", tol.branch_eps)
    return (-0.5j) * (lp - lm)


def theta_from_polar(r: OperatorMatrix, tol: ToleranceConfig) -> OperatorMatrix:
    """Cross-check route: -i log of the closest unitary to R."""
    u, _, vh = np.linalg.svd(r.mat)
    unitary = OperatorMatrix(r.dims, u @ vh)
    lg = principal_matrix_function(unitary, "log", tol.branch_eps)
    return (-1j) * lg


def r_operator(psi: OperatorMatrix, tol: ToleranceConfig) -> OperatorMatrix:
    """Canonical unitary phase: the Hermitian-safe polar form of psi."""
    return sw_phase_operator(psi, tol)


def r_operator_literal(psi: OperatorMatrix, basis: TwoModeBasis,
                       tol: ToleranceConfig) -> OperatorMatrix:
    """Literal quotient form sqrt(psi_c) sqrt(psi_c+)^(-1) on the closure.

    The principal square roots of psi_c and psi_c+ flip sign on the same
    near-cut spectral subspace, so the branch seam cancels in the product.
    """
    psic = cyclic_closure(psi, basis)
    s1 = principal_matrix_function(psic, "sqrt", tol.branch_eps)
    s2 = principal_matrix_function(psic.dag(), "sqrt", tol.branch_eps)
    return OperatorMatrix(psi.dims, s1.mat @ np.linalg.inv(s2.mat))


def trig_operators(r: OperatorMatrix) -> tuple[OperatorMatrix, OperatorMatrix]:
    """cos = (R + R+)/2 and sin = (R - R+)/2i."""
    return 0.5 * (r + r.dag()), (-0.5j) * (r - r.dag())


def amplitude_operator(psi: OperatorMatrix) -> OperatorMatrix:
    """Squared amplitude psi psi+ (equals y1^2 + y2^2 in the balanced case)."""
    return psi @ psi.dag()


def phase_exp(theta: OperatorMatrix) -> OperatorMatrix:
    """e^{i theta} for the (Hermitian) log-based phase."""
    return hermitian_expi(theta)


@dataclass(frozen=True)
class PhaseOperators:
    """Bundle of the phase-operator family for one parameter point."""

    basis: TwoModeBasis
    d: OperatorMatrix
    d_sw: OperatorMatrix
    r: OperatorMatrix
    theta: OperatorMatrix
    cos_theta: OperatorMatrix
    sin_theta: OperatorMatrix
    lambda2: OperatorMatrix


def phase_family(psi: OperatorMatrix, basis: TwoModeBasis,
                 tol: ToleranceConfig) -> PhaseOperators:
    d = rns_phase_operator(basis)
    d_sw = sw_phase_operator(psi, tol)
    r = d_sw
    theta = theta_operator(psi, basis, tol)
    cos_t, sin_t = trig_operators(r)
    lam2 = amplitude_operator(psi)
    return PhaseOperators(basis, d, d_sw, r, theta, cos_t, sin_t, lam2)


def isometry_defect(d: OperatorMatrix, proj: SubspaceProjector) -> float:
    """||P(D+D - 1)P||: how far D is from an isometry on the interior."""
    one = identity(proj.basis)
    return float(np.linalg.norm(proj.compress(d.dag() @ d - one), 2))
