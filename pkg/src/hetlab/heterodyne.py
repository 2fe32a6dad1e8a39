"""The unified measurement operator and its Lie-algebraic structure.

Builds the rotated mode operators, the unified combination
psi = sqrt(A) a~ + sqrt(B) b~+ that interpolates between the
photon-counting scheme (A=B, commuting with its adjoint) and the
square-law power detector (A!=B), plus the SU(1,1) generators, the
Casimir invariant, and the two-mode algebra with its Abelian ideal.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .fock import (Mode, OperatorMatrix, TwoModeBasis, annihilator, embed,
                   identity)


@dataclass(frozen=True)
class HeterodyneParams:
    """Mixing weights and mode rotation angles of the unified operator.

    A = B is the commuting (photon detector) regime; A != B the
    noncommuting (square-law) regime with contraction mu = sqrt(B/A) and
    noncommutativity k = (A-B)/A.
    """

    A: float
    B: float
    alpha: float = 0.0
    beta: float = 0.0

    def __post_init__(self):
        if self.A <= 0:
            raise ValueError("A must be positive")
        if self.B < 0:
            raise ValueError("B must be nonnegative")

    @property
    def mu(self) -> float:
        return math.sqrt(self.B / self.A)

    @property
    def k(self) -> float:
        return (self.A - self.B) / self.A

    @property
    def is_balanced(self) -> bool:
        return abs(self.A - self.B) <= 1e-14 * max(self.A, self.B)

    @classmethod
    def from_frequency_ratio(cls, r: float, alpha: float = 0.0,
                             beta: float = 0.0) -> "HeterodyneParams":
        """A = 1 + r, B = 1 - r with r the IF/optical frequency ratio."""
        if not 0 < r < 1:
            raise ValueError("frequency ratio must lie in (0, 1)")
        return cls(A=1.0 + r, B=1.0 - r, alpha=alpha, beta=beta)


def _quadrature_parts(op: OperatorMatrix) -> tuple[np.ndarray, np.ndarray]:
    """Self-adjoint components x1, x2 of op = x1 + i x2."""
    m = op.mat
    return (m + m.conj().T) / 2, (m - m.conj().T) / (2j)


def rotated_modes(params: HeterodyneParams, basis: TwoModeBasis
                  ) -> tuple[OperatorMatrix, OperatorMatrix,
                             OperatorMatrix, OperatorMatrix]:
    """Rotation-valued mode operators (a~, b~, a~+, b~+).

    a~ is assembled from the quadrature components rotated by alpha,
    a~ = a1~ + i a2~ = e^{i alpha} a.  The image mode uses the transposed
    rotation at angle beta and the creation-type combination
    b~+ = b1~ - i b2~ = e^{i beta} b+, so that the unified operator
    sqrt(A) a~ + sqrt(B) b~+ reduces to a + b+ at alpha = beta = 0.
    """
    a = embed(annihilator(basis.d_a), Mode.SIGNAL, basis)
    b = embed(annihilator(basis.d_b), Mode.IMAGE, basis)

    a1, a2 = _quadrature_parts(a)
    ca, sa = math.cos(params.alpha), math.sin(params.alpha)
    a1t = ca * a1 - sa * a2
    a2t = sa * a1 + ca * a2
    a_rot = OperatorMatrix(basis.dims, a1t + 1j * a2t)

    # image-mode components rotated by the transposed matrix
    # [[cos, sin], [-sin, cos]], then combined creation-type (b+ = b1 - i b2)
    b1, b2 = _quadrature_parts(b)
    cb, sb = math.cos(params.beta), math.sin(params.beta)
    b1t = cb * b1 + sb * b2
    b2t = -sb * b1 + cb * b2
    bdag_rot = OperatorMatrix(basis.dims, b1t - 1j * b2t)

    return a_rot, bdag_rot.dag(), a_rot.dag(), bdag_rot


def build_psi(params: HeterodyneParams, basis: TwoModeBasis
              ) -> tuple[OperatorMatrix, OperatorMatrix]:
    """Unified operator psi = sqrt(A) a~ + sqrt(B) b~+ and its adjoint."""
    a_rot, _, _, bdag_rot = rotated_modes(params, basis)
    psi = math.sqrt(params.A) * a_rot + math.sqrt(params.B) * bdag_rot
    return psi, psi.dag()


def quadratures(psi: OperatorMatrix) -> tuple[OperatorMatrix, OperatorMatrix]:
    """Self-adjoint quadratures y1 = (psi+psi+)/2, y2 = (psi-psi+)/2i."""
    y1 = 0.5 * (psi + psi.dag())
    y2 = (-0.5j) * (psi - psi.dag())
    return y1, y2


@dataclass(frozen=True)
class GeneratorSet:
    """SU(1,1) realization plus the square-law two-mode algebra members."""

    basis: TwoModeBasis
    j0: OperatorMatrix
    j1: OperatorMatrix
    j2: OperatorMatrix
    jplus: OperatorMatrix
    jminus: OperatorMatrix
    kplus: OperatorMatrix
    n1: OperatorMatrix
    n2: OperatorMatrix
    lplus: OperatorMatrix
    lminus: OperatorMatrix
    nhat: OperatorMatrix


def _modes_for_generators(basis: TwoModeBasis, params: HeterodyneParams | None,
                          rotated: bool):
    if rotated and params is not None:
        at, bt, atd, btd = rotated_modes(params, basis)
    else:
        at = embed(annihilator(basis.d_a), Mode.SIGNAL, basis)
        bt = embed(annihilator(basis.d_b), Mode.IMAGE, basis)
        atd, btd = at.dag(), bt.dag()
    return at, bt, atd, btd


def su11_generators(basis: TwoModeBasis, params: HeterodyneParams | None = None,
                    rotated: bool = False) -> GeneratorSet:
    """Two-mode SU(1,1) generators and the square-law algebra members.

    J1 = (a~+ b~+ + a~ b~)/2, J2 = (a~+ b~+ - a~ b~)/2i,
    J0 = (a~+ a~ + b~+ b~ + 1)/2, ladder members J+- = J1 +- i J2,
    parabolic generator K+ = J0 + J1; N1/N2/L+- for the square-law case;
    nhat is the relative photon number a~+ a~ - b~+ b~.

    Unrotated modes by default; rotated=True rebuilds everything from the
    rotation-valued modes (all verified identities are insensitive).
    """
    at, bt, atd, btd = _modes_for_generators(basis, params, rotated)
    one = identity(basis)
    j1 = 0.5 * (atd @ btd + at @ bt)
    j2 = (-0.5j) * (atd @ btd - at @ bt)
    j0 = 0.5 * (atd @ at + btd @ bt + one)
    jplus = j1 + 1j * j2
    jminus = j1 - 1j * j2
    kplus = j0 + j1
    n1 = 0.5 * (atd @ at + btd @ bt + one)
    n2 = 0.5 * (atd @ at - btd @ bt - one)
    lplus = atd @ btd
    lminus = at @ bt
    nhat = atd @ at - btd @ bt
    return GeneratorSet(basis, j0, j1, j2, jplus, jminus, kplus,
                        n1, n2, lplus, lminus, nhat)


def caves_algebra(basis: TwoModeBasis, params: HeterodyneParams | None = None,
                  rotated: bool = False) -> GeneratorSet:
    """Alias of su11_generators; the square-law members live on the same set."""
    return su11_generators(basis, params, rotated)


def casimir(gen: GeneratorSet) -> OperatorMatrix:
    """Casimir invariant J0^2 - J1^2 - J2^2."""
    return gen.j0 @ gen.j0 - gen.j1 @ gen.j1 - gen.j2 @ gen.j2
