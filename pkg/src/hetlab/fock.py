"""Truncated two-mode Fock space: bases, operator carriers, matrix functions.

Everything downstream (phase operators, SU(1,1) generators, the Caves
extension) is built from the pieces in this module: dense complex matrices
tagged with their basis, interior projectors that hide truncation edge
artifacts, and guarded spectral matrix functions.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from .errors import (BasisMismatchError, BranchCutError, IllConditionedError,
                     SingularMatrixError)

HERMITIAN_TOL = 1e-12


class Mode(Enum):
    SIGNAL = "signal"
    IMAGE = "image"


@dataclass(frozen=True)
class TwoModeBasis:
    """Rectangular truncation of the two-mode Fock space.

    States |p, q> with 0 <= p < d_a (signal) and 0 <= q < d_b (image),
    flattened row-major, signal-major: index = p * d_b + q.
    """

    d_a: int
    d_b: int

    def __post_init__(self):
        if self.d_a < 2 or self.d_b < 2:
            raise ValueError("two-mode basis needs d_a >= 2 and d_b >= 2")

    @property
    def dim(self) -> int:
        return self.d_a * self.d_b

    @property
    def dims(self) -> tuple[int, int]:
        return (self.d_a, self.d_b)

    def index_of(self, p: int, q: int) -> int:
        if not (0 <= p < self.d_a and 0 <= q < self.d_b):
            raise IndexError(f"({p},{q}) outside {self.d_a}x{self.d_b} rectangle")
        return p * self.d_b + q

    def pair_of(self, index: int) -> tuple[int, int]:
        if not (0 <= index < self.dim):
            raise IndexError(f"flat index {index} outside 0..{self.dim - 1}")
        return divmod(index, self.d_b)

    def grades(self) -> np.ndarray:
        """Relative photon number p - q per flat index."""
        p, q = np.divmod(np.arange(self.dim), self.d_b)
        return p - q


@dataclass(frozen=True)
class OperatorMatrix:
    """Dense complex matrix tagged with the mode dimensions it acts on."""

    dims: tuple[int, ...]
    mat: np.ndarray

    def __post_init__(self):
        n = int(np.prod(self.dims))
        if self.mat.shape != (n, n):
            raise ValueError(f"matrix shape {self.mat.shape} != dims {self.dims}")

    def _check(self, other: "OperatorMatrix"):
        if not isinstance(other, OperatorMatrix):
            raise TypeError("expected an OperatorMatrix")
        if self.dims != other.dims:
            raise BasisMismatchError(f"basis tags differ: {self.dims} vs {other.dims}")

    def __add__(self, other):
        self._check(other)
        return OperatorMatrix(self.dims, self.mat + other.mat)

    def __sub__(self, other):
        self._check(other)
        return OperatorMatrix(self.dims, self.mat - other.mat)

    def __matmul__(self, other):
        self._check(other)
        return OperatorMatrix(self.dims, self.mat @ other.mat)

    def __mul__(self, scalar):
        return OperatorMatrix(self.dims, self.mat * scalar)

    __rmul__ = __mul__

    def __neg__(self):
        return OperatorMatrix(self.dims, -self.mat)

    def dag(self) -> "OperatorMatrix":
        return OperatorMatrix(self.dims, self.mat.conj().T)

    def norm(self) -> float:
        """Spectral norm (largest singular value)."""
        return float(np.linalg.norm(self.mat, 2))

    def is_hermitian(self, tol: float = HERMITIAN_TOL) -> bool:
        scale = max(1.0, float(np.abs(self.mat).max(initial=0.0)))
        return float(np.abs(self.mat - self.mat.conj().T).max(initial=0.0)) <= tol * scale


def identity(basis: TwoModeBasis) -> OperatorMatrix:
    return OperatorMatrix(basis.dims, np.eye(basis.dim, dtype=complex))


def zero(basis: TwoModeBasis) -> OperatorMatrix:
    return OperatorMatrix(basis.dims, np.zeros((basis.dim, basis.dim), dtype=complex))


@dataclass(frozen=True)
class ToleranceConfig:
    poly_tol: float = 1e-10
    fn_tol: float = 1e-3
    pinv_rel_tol: float = 1e-10
    branch_eps: float = 1e-6

    def __post_init__(self):
        for name in ("poly_tol", "fn_tol", "pinv_rel_tol", "branch_eps"):
            if getattr(self, name) <= 0:
                raise ValueError(f"{name} must be strictly positive")


@dataclass(frozen=True)
class SubspaceProjector:
    """Diagonal 0/1 projector onto a "safe" interior subset of Fock pairs."""

    basis: TwoModeBasis
    kept: tuple[int, ...]
    margin: int | None = None
    _mat: np.ndarray = field(init=False, repr=False, compare=False, default=None)

    def __post_init__(self):
        m = np.zeros((self.basis.dim, self.basis.dim))
        idx = np.asarray(self.kept, dtype=int)
        m[idx, idx] = 1.0
        object.__setattr__(self, "_mat", m)

    @property
    def mat(self) -> np.ndarray:
        return self._mat

    @property
    def rank(self) -> int:
        return len(self.kept)

    def compress(self, op: OperatorMatrix | np.ndarray) -> np.ndarray:
        """Restrict to the kept subspace (a rank x rank dense block)."""
        m = op.mat if isinstance(op, OperatorMatrix) else op
        idx = np.asarray(self.kept, dtype=int)
        return m[np.ix_(idx, idx)]


def safe_projector(basis: TwoModeBasis, margin: int) -> SubspaceProjector:
    """Projector onto {(p,q): p <= d_a-1-margin, q <= d_b-1-margin}."""
    if margin < 0:
        raise ValueError("margin must be nonnegative")
    if margin >= min(basis.d_a, basis.d_b):
        raise ValueError(f"margin {margin} empties a {basis.d_a}x{basis.d_b} basis")
    kept = tuple(basis.index_of(p, q)
                 for p in range(basis.d_a - margin)
                 for q in range(basis.d_b - margin))
    return SubspaceProjector(basis, kept, margin=margin)


def photon_projector(basis: TwoModeBasis, max_total: int) -> SubspaceProjector:
    """Projector onto total photon number p + q <= max_total."""
    if max_total < 0:
        raise ValueError("max_total must be nonnegative")
    kept = tuple(basis.index_of(p, q)
                 for p in range(basis.d_a)
                 for q in range(basis.d_b) if p + q <= max_total)
    if not kept:
        raise ValueError("empty photon-number interior")
    return SubspaceProjector(basis, kept)


def annihilator(d: int) -> OperatorMatrix:
    """Single-mode annihilation operator: a|n> = sqrt(n)|n-1>, d x d."""
    if d < 1:
        raise ValueError("d must be >= 1")
    a = np.zeros((d, d), dtype=complex)
    for n in range(1, d):
        a[n - 1, n] = math.sqrt(n)
    return OperatorMatrix((d,), a)


def embed(op: OperatorMatrix, mode: Mode, basis: TwoModeBasis) -> OperatorMatrix:
    """Tensor-embed a single-mode operator as op (x) 1 or 1 (x) op."""
    if len(op.dims) != 1:
        raise BasisMismatchError("embed expects a single-mode operator")
    d = op.dims[0]
    if mode is Mode.SIGNAL:
        if d != basis.d_a:
            raise BasisMismatchError(f"signal operator dim {d} != d_a {basis.d_a}")
        m = np.kron(op.mat, np.eye(basis.d_b, dtype=complex))
    else:
        if d != basis.d_b:
            raise BasisMismatchError(f"image operator dim {d} != d_b {basis.d_b}")
        m = np.kron(np.eye(basis.d_a, dtype=complex), op.mat)
    return OperatorMatrix(basis.dims, m)


def commutator(x: OperatorMatrix, y: OperatorMatrix) -> OperatorMatrix:
    return x @ y - y @ x


def anticommutator(x: OperatorMatrix, y: OperatorMatrix) -> OperatorMatrix:
    return x @ y + y @ x


def projected_residual(x: OperatorMatrix, y: OperatorMatrix,
                       proj: SubspaceProjector) -> float:
    """Relative interior residual ||P(X-Y)P|| / max(1, ||PXP||)."""
    x._check(y)
    if proj.basis.dims != x.dims:
        raise BasisMismatchError("projector basis does not match operators")
    xc = proj.compress(x)
    yc = proj.compress(y)
    num = float(np.linalg.norm(xc - yc, 2))
    den = max(1.0, float(np.linalg.norm(xc, 2)))
    return num / den


def _herm_eig(h: OperatorMatrix, tol: float = HERMITIAN_TOL):
    if not h.is_hermitian(tol):
        raise ValueError("matrix is not Hermitian within tolerance")
    sym = (h.mat + h.mat.conj().T) / 2
    return np.linalg.eigh(sym)


def floored_count(h: OperatorMatrix, pinv_rel_tol: float) -> int:
    """How many eigenvalues hermitian_power would floor to zero."""
    w, _ = _herm_eig(h)
    lmax = float(np.abs(w).max(initial=0.0))
    return int(np.sum(np.abs(w) <= pinv_rel_tol * lmax))


def hermitian_power(h: OperatorMatrix, exponent: float,
                    pinv_rel_tol: float = 1e-10) -> OperatorMatrix:
    """H^exponent through the eigendecomposition, with a relative floor.

    Eigenvalues below pinv_rel_tol * |lambda|_max count as zero; for
    negative exponents those directions are excluded (pseudo-inverse).
    """
    w, v = _herm_eig(h)
    lmax = float(np.abs(w).max(initial=0.0))
    keep = np.abs(w) > pinv_rel_tol * lmax
    if not keep.any():
        raise SingularMatrixError("all eigenvalues below the pseudo-inverse floor")
    if exponent != round(exponent) and np.any(w[keep] < 0):
        raise BranchCutError("negative retained eigenvalue under fractional power",
                             offending=float(w[keep].min()))
    f = np.zeros_like(w)
    f[keep] = np.power(w[keep], exponent)
    return OperatorMatrix(h.dims, (v * f) @ v.conj().T)


def hermitian_fn(h: OperatorMatrix, fn, pinv_rel_tol: float = 1e-10) -> OperatorMatrix:
    """fn applied on the retained spectrum of a Hermitian matrix, 0 elsewhere."""
    w, v = _herm_eig(h)
    lmax = float(np.abs(w).max(initial=0.0))
    keep = np.abs(w) > pinv_rel_tol * lmax
    f = np.zeros_like(w)
    if keep.any():
        f[keep] = fn(w[keep])
    return OperatorMatrix(h.dims, (v * f) @ v.conj().T)


_PRINCIPAL = {
    "log": np.log,
    "sqrt": np.sqrt,
    "inverse": lambda z: 1.0 / z,
    "exp": np.exp,
}


def _cut_distance(lam: np.ndarray) -> np.ndarray:
    """Distance of each eigenvalue from the ray (-inf, 0]."""
    d = np.where(lam.real <= 0, np.abs(lam.imag), np.abs(lam))
    return d


def principal_matrix_function(m: OperatorMatrix, kind: str,
                              branch_eps: float = 1e-6,
                              cond_limit: float = 1e12) -> OperatorMatrix:
    """Principal-branch matrix function through diagonalization.

    Guards: log/inverse reject eigenvalues within branch_eps of zero
    (SingularMatrixError); log/sqrt reject eigenvalues within branch_eps of
    the cut along the non-positive real axis (BranchCutError); an eigenvector
    condition number above cond_limit raises IllConditionedError.
    """
    if kind not in _PRINCIPAL:
        raise ValueError(f"unknown matrix function {kind!r}")
    lam, v = np.linalg.eig(m.mat)
    cond = np.linalg.cond(v)
    if not np.isfinite(cond) or cond > cond_limit:
        raise IllConditionedError(f"eigenvector condition number {cond:.3e}")
    if kind in ("log", "inverse"):
        small = np.abs(lam) < branch_eps
        if small.any():
            raise SingularMatrixError(
                f"eigenvalue {lam[small][0]:.3e} within {branch_eps:g} of zero")
    if kind in ("log", "sqrt"):
        near = _cut_distance(lam) < branch_eps
        if near.any():
            raise BranchCutError(
                f"eigenvalue {lam[near][0]:.3e} within {branch_eps:g} of the cut",
                offending=complex(lam[near][0]))
    f = _PRINCIPAL[kind](lam.astype(complex))
    out = (v * f) @ np.linalg.inv(v)
    return OperatorMatrix(m.dims, out)


def log_roundtrip_residual(m: OperatorMatrix, branch_eps: float = 1e-6) -> float:
    """Relative residual of exp(log M) against M."""
    lg = principal_matrix_function(m, "log", branch_eps)
    back = principal_matrix_function(lg, "exp", branch_eps)
    return float(np.linalg.norm(back.mat - m.mat, 2) /
                 max(1.0, np.linalg.norm(m.mat, 2)))


def hermitian_expi(h: OperatorMatrix) -> OperatorMatrix:
    """e^{iH} for Hermitian H (exact unitary via eigh)."""
    w, v = _herm_eig(h, tol=1e-6)
    f = np.exp(1j * w)
    return OperatorMatrix(h.dims, (v * f) @ v.conj().T)


def coherent_state(gamma: complex, d: int) -> np.ndarray:
    """Truncated coherent state, renormalized to unit norm.

    Warns when the dropped tail e^{-|g|^2} |g|^{2d}/d! exceeds 1e-12.
    """
    if d < 1:
        raise ValueError("d must be >= 1")
    n = np.arange(d)
    logw = n * np.log(np.abs(gamma)) - 0.5 * np.array([math.lgamma(k + 1) for k in n]) \
        if gamma != 0 else np.where(n == 0, 0.0, -np.inf)
    phase = np.exp(1j * n * np.angle(gamma)) if gamma != 0 else np.ones(d)
    amp = np.exp(logw - 0.5 * abs(gamma) ** 2) * phase
    tail = math.exp(-abs(gamma) ** 2 + 2 * d * math.log(abs(gamma)) - math.lgamma(d + 1)) \
        if gamma != 0 else 0.0
    if tail > 1e-12:
        warnings.warn(f"coherent-state tail {tail:.3e} above 1e-12 at d={d}",
                      stacklevel=2)
    vec = amp.astype(complex)
    return vec / np.linalg.norm(vec)
