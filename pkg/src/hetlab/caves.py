"""Square-law (noncommuting) extension of the phase-operator family.

T = a~ + mu b~+ and Z = T+ close [T, Z] = k with k = 1 - mu^2, and the
shift-type operator S generalizing the unitary phase R is a square root of
(T Z^-1 + Z^-1 T)/2.  After truncation T and Z are nilpotent, so S is
realized by exact half-shift functional calculus on the Hermitian product
X = TZ: S = u(X) T where

    u(x) u(x + k) = (1/2) (1/x + 1/(x + k)),
    u(x) = sqrt(k) h(x/k) / x,
    h(y) = sqrt(2) Gamma((2y+3)/4) / Gamma((2y+1)/4),

the smooth positive solution.  At k = 0 this reduces to X^(-1/2) T, which
equals the polar form of psi exactly.  All operator inverses are composed
from Hermitian-floored pseudo-inverses of TZ, ZT, psi psi+, psi+ psi; the
nilpotent factors are never inverted directly.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .fock import (OperatorMatrix, SubspaceProjector, ToleranceConfig,
                   TwoModeBasis, commutator, hermitian_fn, hermitian_power,
                   identity, projected_residual)
from .heterodyne import HeterodyneParams, build_psi

_lgamma = np.vectorize(math.lgamma)


def _gamma_half_ratio(z: np.ndarray) -> np.ndarray:
    """Gamma(z + 1/2) / Gamma(z), accurate for all z > 0.

    Direct log-gamma differences cancel catastrophically for huge z, so
    large arguments use the asymptotic series of the ratio instead.
    """
    z = np.asarray(z, dtype=float)
    out = np.empty_like(z)
    small = z < 256.0
    if small.any():
        zs = z[small]
        out[small] = np.exp(_lgamma(zs + 0.5) - _lgamma(zs))
    if (~small).any():
        zl = z[~small]
        corr = (1.0 - 1.0 / (8.0 * zl) + 1.0 / (128.0 * zl ** 2)
                + 5.0 / (1024.0 * zl ** 3) - 21.0 / (32768.0 * zl ** 4))
        out[~small] = np.sqrt(zl) * corr
    return out


def half_shift_symbol(x: np.ndarray, k: float) -> np.ndarray:
    """u(x) with u(x)u(x+k) = (1/2)(1/x + 1/(x+k)), smooth branch, x > 0."""
    if k == 0.0:
        return np.asarray(x) ** -0.5
    x = np.asarray(x, dtype=float)
    zbar = (2.0 * x / k + 1.0) / 4.0
    h = math.sqrt(2.0) * _gamma_half_ratio(zbar)
    return math.sqrt(k) * h / x


def k_expansion(r: float) -> tuple[float, float]:
    """Noncommutativity k from the frequency ratio: exact and first order.

    k = 2r/(1+r) exactly; 2r(1-r) at first order; the remainder is
    bounded by 2 r^3 on (0, 1).
    """
    if not 0 < r < 1:
        raise ValueError("frequency ratio must lie in (0, 1)")
    return 2 * r / (1 + r), 2 * r * (1 - r)


def build_tz(params: HeterodyneParams, basis: TwoModeBasis
             ) -> tuple[OperatorMatrix, OperatorMatrix]:
    """T = a~ + mu b~+ and Z = T+ = a~+ + mu b~ (psi = sqrt(A) T)."""
    psi, psid = build_psi(params, basis)
    root_a = math.sqrt(params.A)
    return (1.0 / root_a) * psi, (1.0 / root_a) * psid


def _sym(op: OperatorMatrix) -> OperatorMatrix:
    return 0.5 * (op + op.dag())


def _basis_of(op: OperatorMatrix) -> TwoModeBasis:
    return TwoModeBasis(*op.dims)


def _pinv_z(t: OperatorMatrix, z: OperatorMatrix, rtol: float) -> OperatorMatrix:
    """Pseudo-inverse of Z through the Hermitian product: (TZ)^+ T."""
    return hermitian_power(_sym(t @ z), -1.0, rtol) @ t


def _pinv_t(t: OperatorMatrix, z: OperatorMatrix, rtol: float) -> OperatorMatrix:
    """Pseudo-inverse of T through the Hermitian product: (ZT)^+ Z."""
    return hermitian_power(_sym(z @ t), -1.0, rtol) @ z


@dataclass(frozen=True)
class CavesOperators:
    """S-family for one parameter point, with the alternative assemblies."""

    basis: TwoModeBasis
    params: HeterodyneParams
    t: OperatorMatrix
    z: OperatorMatrix
    s: OperatorMatrix                 # canonical symmetrized-form root
    sdag: OperatorMatrix
    s_psi_form: OperatorMatrix        # assembled through psi and its pinv
    s_expanded_form: OperatorMatrix   # commutator-expanded assembly
    c0: OperatorMatrix
    s0: OperatorMatrix

    @property
    def k(self) -> float:
        return self.params.k

    @property
    def mu(self) -> float:
        return self.params.mu


def _half_shift_root(t: OperatorMatrix, z: OperatorMatrix, k: float,
                     rtol: float, scale: float = 1.0) -> OperatorMatrix:
    """S with S^2 = (T Z^-1 + Z^-1 T)/2 on the retained spectrum.

    For k >= 0 this is u(TZ) T.  For k < 0 the symbol pole sits inside the
    spectrum of TZ, so the mirrored form T u(ZT; -k) is used; it is the
    adjoint of the same construction applied to the swapped pair (Z, T)
    and squares to the same symmetrized argument.  When the factors carry
    a common normalization (T = psi/sqrt(A)), passing scale = A evaluates
    the symbol on the unnormalized product.
    """
    root = math.sqrt(scale)
    if k >= 0:
        x = _sym(t @ z)
        return hermitian_fn(x, lambda w: half_shift_symbol(w / scale, k) / root,
                            rtol) @ t
    y = _sym(z @ t)
    return t @ hermitian_fn(y, lambda w: half_shift_symbol(w / scale, -k) / root,
                            rtol)


def s_operator(params: HeterodyneParams, basis: TwoModeBasis,
               tol: ToleranceConfig) -> CavesOperators:
    """Build S three ways: canonical half-shift root plus the two rewrites."""
    t, z = build_tz(params, basis)
    k = params.k
    s = _half_shift_root(t, z, k, tol.pinv_rel_tol)

    # same root assembled through psi (the normalization moves into the symbol)
    psi, psid = build_psi(params, basis)
    s_psi = _half_shift_root(psi, psid, k, tol.pinv_rel_tol, scale=params.A)

    # commutator-expanded assembly [2T + k Z^-1] Z^-1 / 2; for k < 0 the
    # adjoint assembly is corrected on the swapped pair and daggered back
    if k >= 0:
        pz = _pinv_z(t, z, tol.pinv_rel_tol)
        g = 0.5 * ((2.0 * t + k * pz) @ pz)
        s_exp = _corrected_root(s, g, t, z, k, tol)
    else:
        pt = _pinv_z(z, t, tol.pinv_rel_tol)
        g = 0.5 * ((2.0 * z + (-k) * pt) @ pt)
        s_exp = _corrected_root(s.dag(), g, z, t, -k, tol).dag()

    sdag = s.dag()
    c0 = 0.5 * (s + sdag)
    s0 = (-0.5j) * (s - sdag)
    return CavesOperators(basis, params, t, z, s, sdag, s_psi, s_exp, c0, s0)


def _corrected_root(s0: OperatorMatrix, g: OperatorMatrix, t: OperatorMatrix,
                    z: OperatorMatrix, k: float,
                    tol: ToleranceConfig) -> OperatorMatrix:
    """One damped Newton step for sqrt(g) anchored at s0.

    s0 squares to g up to assembly differences; S = s0 (1 + K/2) with
    K = pinv(s0^2)(g - s0^2) absorbs them to second order while keeping
    the anchored branch.  The pseudo-inverses here take a coarser floor
    than the global policy: the assembly differences live near the lattice
    edge, and a machine-level floor would amplify exactly those directions.
    """
    floor = max(tol.pinv_rel_tol, tol.branch_eps)
    x = _sym(t @ z)
    z2t2 = _sym(z @ z @ t @ t)
    pinv_t2 = hermitian_power(z2t2, -1.0, floor) @ z @ z

    def inv_v(w):
        u = half_shift_symbol(w, k)
        return 1.0 / (u * u)

    pinv_s2 = pinv_t2 @ hermitian_fn(x, inv_v, floor)
    kmat = pinv_s2 @ (g - s0 @ s0)
    return s0 @ (identity(_basis_of(s0)) + 0.5 * kmat)


@dataclass(frozen=True)
class UnitarityReport:
    """Direct products against their closed forms, plus interior deficits."""

    ss_dag: OperatorMatrix
    sdag_s: OperatorMatrix
    ss_dag_closed: OperatorMatrix
    sdag_s_closed: OperatorMatrix
    res_ss_dag: float
    res_sdag_s: float
    deficit_ss_dag: float
    deficit_sdag_s: float


def unitarity_products(ops: CavesOperators, tol: ToleranceConfig,
                       proj: SubspaceProjector) -> UnitarityReport:
    """SS+ and S+S directly and via the closed forms in the product TZ.

    Closed forms: (1/2) sqrt(4 - k (TZ)^-1 + k (TZ -+ k)^-1); the shifted
    inverses are Hermitian-floored, matching the singular directions the
    direct construction floors.
    """
    one = identity(ops.basis)
    k = ops.k
    x = _sym(ops.t @ ops.z)
    ssd = ops.s @ ops.sdag
    sds = ops.sdag @ ops.s
    if k == 0.0:
        closed9 = closed10 = one
    else:
        xi = hermitian_power(x, -1.0, tol.pinv_rel_tol)
        xm = hermitian_power(x - k * one, -1.0, tol.pinv_rel_tol)
        xpl = hermitian_power(x + k * one, -1.0, tol.pinv_rel_tol)
        closed9 = 0.5 * hermitian_power(4.0 * one - k * xi + k * xm, 0.5,
                                        tol.pinv_rel_tol)
        closed10 = 0.5 * hermitian_power(4.0 * one - k * xi + k * xpl, 0.5,
                                         tol.pinv_rel_tol)
    return UnitarityReport(
        ss_dag=ssd, sdag_s=sds,
        ss_dag_closed=closed9, sdag_s_closed=closed10,
        res_ss_dag=projected_residual(ssd, closed9, proj),
        res_sdag_s=projected_residual(sds, closed10, proj),
        deficit_ss_dag=float(np.linalg.norm(proj.compress(ssd - one), 2)),
        deficit_sdag_s=float(np.linalg.norm(proj.compress(sds - one), 2)),
    )


@dataclass(frozen=True)
class C0S0Report:
    commutator_residual: float    # [C0,S0] against its closed form
    pythagoras_residual: float    # C0^2 + S0^2 against its closed form


def c0_s0(ops: CavesOperators, tol: ToleranceConfig,
          proj: SubspaceProjector) -> C0S0Report:
    """Cosine/sine combinations of S against their closed forms.

    Balanced case: [C0, S0] ~ 0 and C0^2 + S0^2 ~ 1.  Unbalanced case:
    both compare against square roots of 1 + ((A-B)^2/4) (psi^-2, psi+^-2)
    orderings, realized through Hermitian-floored inverses of the psi^2
    products.
    """
    one = identity(ops.basis)
    comm = commutator(ops.c0, ops.s0)
    pyth = ops.c0 @ ops.c0 + ops.s0 @ ops.s0
    if ops.params.is_balanced:
        return C0S0Report(
            commutator_residual=projected_residual(comm, 0.0 * one, proj),
            pythagoras_residual=projected_residual(pyth, one, proj),
        )
    psi, _ = build_psi(ops.params, ops.basis)
    psi2 = psi @ psi
    cc = (ops.params.A - ops.params.B) ** 2 / 4.0
    inv_right = hermitian_power(_sym(psi2 @ psi2.dag()), -1.0, tol.pinv_rel_tol)
    inv_left = hermitian_power(_sym(psi2.dag() @ psi2), -1.0, tol.pinv_rel_tol)
    sq_right = hermitian_power(one + cc * inv_right, 0.5, tol.pinv_rel_tol)
    sq_left = hermitian_power(one + cc * inv_left, 0.5, tol.pinv_rel_tol)
    closed_comm = (0.5j) * (sq_right - sq_left)
    closed_pyth = 0.5 * (sq_right + sq_left)
    return C0S0Report(
        commutator_residual=projected_residual(comm, closed_comm, proj),
        pythagoras_residual=projected_residual(pyth, closed_pyth, proj),
    )


@dataclass(frozen=True)
class ShiftCommutatorReport:
    """[S, N] against S (balanced limit) and the printed closed form."""

    vs_s: float
    vs_printed_rhs: float


def sn_commutator(ops: CavesOperators, nhat: OperatorMatrix,
                  tol: ToleranceConfig, proj: SubspaceProjector
                  ) -> ShiftCommutatorReport:
    """Direct [S, N] against S and against the printed closed form.

    The printed right-hand side is composed left-to-right,
    (1-mu^2)/4 S^-3 Z^-4 + Z^-1 (S^-1 Z^-1 T + T S^-1 Z^-1), with every
    inverse a Hermitian-floored pseudo-inverse.  Its two terms carry
    different relative-number grades, so the comparison is published as a
    report-only residual, never gated.
    """
    comm = commutator(ops.s, nhat)
    vs_s = projected_residual(comm, ops.s, proj)

    k = ops.k
    x = _sym(ops.t @ ops.z)
    pz = _pinv_z(ops.t, ops.z, tol.pinv_rel_tol)
    inv_u = hermitian_fn(x, lambda w: 1.0 / half_shift_symbol(w, k),
                         tol.pinv_rel_tol)
    s_inv = _pinv_t(ops.t, ops.z, tol.pinv_rel_tol) @ inv_u
    s_inv3 = s_inv @ s_inv @ s_inv
    z_inv4 = pz @ pz @ pz @ pz
    rhs = ((1 - ops.mu ** 2) / 4.0) * (s_inv3 @ z_inv4) \
        + pz @ (s_inv @ pz @ ops.t + ops.t @ s_inv @ pz)
    return ShiftCommutatorReport(
        vs_s=vs_s,
        vs_printed_rhs=projected_residual(comm, rhs, proj),
    )
