"""Classical generalized-oscillator oracle.

Integrates y'' + Omega^2(t) y = 0 for two independent solutions, builds the
nonlinear-equation amplitude sigma = (Ae y1^2 + Be y2^2 + 2 Ce y1 y2)^(1/2)
(which satisfies sigma'' + Omega^2 sigma = 1/sigma^3 when
Ae Be - Ce^2 = 1/W0^2), and computes the classical phase two independent
ways: integrating 1/sigma^2, and unwrapping the argument of the complex
combination sqrt(A) e^{i alpha} y1 - sqrt(B) e^{i beta} y2.  Also evaluates
the coherent-state expectations that tie the classical solutions to the
mode operators.
"""
from __future__ import annotations

import csv
import math
from dataclasses import dataclass

import numpy as np

from .errors import ConstraintViolationError, HetlabError, ProfileError, UnwrapError
from .fock import annihilator, coherent_state

CONSTRAINT_TOL = 1e-10
EMP_RESIDUAL_TOL = 1e-6
STEP_ACCEPT_TOL = 1e-6


@dataclass(frozen=True)
class OscillatorSpec:
    """Frequency-squared profile and integration window.

    kind: "constant" (coeffs = (omega2,)), "linear" (coeffs = (c0, c1) for
    c0 + c1 t), or "tabulated" (coeffs = (times, values), linearly
    interpolated).  Initial conditions are (value, derivative) pairs at t0.
    """

    kind: str
    coeffs: tuple
    t0: float
    t1: float
    step: float
    y1_init: tuple[float, float] = (1.0, 0.0)
    y2_init: tuple[float, float] = (0.0, 1.0)

    def __post_init__(self):
        if self.t1 <= self.t0:
            raise ValueError("t1 must exceed t0")
        if self.step <= 0 or self.step > (self.t1 - self.t0) / 10:
            raise ValueError("step must be positive and <= (t1-t0)/10")
        if self.kind not in ("constant", "linear", "tabulated"):
            raise ValueError(f"unknown profile kind {self.kind!r}")
        if self.kind == "tabulated":
            ts, vs = self.coeffs
            ts = np.asarray(ts, dtype=float)
            if ts.ndim != 1 or len(ts) < 2 or np.any(np.diff(ts) <= 0):
                raise ProfileError("tabulated times must be strictly increasing")
            if len(ts) != len(vs):
                raise ProfileError("time and value columns differ in length")
            if ts[0] > self.t0 or ts[-1] < self.t1:
                raise ProfileError("profile does not cover [t0, t1]")

    def omega2(self, t):
        if self.kind == "constant":
            return np.full_like(np.asarray(t, dtype=float), self.coeffs[0])
        if self.kind == "linear":
            c0, c1 = self.coeffs
            return c0 + c1 * np.asarray(t, dtype=float)
        ts, vs = self.coeffs
        return np.interp(t, np.asarray(ts, dtype=float), np.asarray(vs, dtype=float))


def load_profile_csv(path) -> OscillatorSpec | tuple:
    """Read a two-column (time, omega_squared) CSV into profile coeffs."""
    times, values = [], []
    try:
        with open(path, newline="", encoding="utf-8") as fh:
            for row in csv.reader(fh):
                if not row or row[0].strip().startswith("#"):
                    continue
                if len(row) < 2:
                    raise ProfileError(f"profile row {row!r} needs two columns")
                try:
                    tval, vval = float(row[0]), float(row[1])
                except ValueError:
                    if times:
                        raise ProfileError(f"non-numeric profile row {row!r}")
                    continue  # header row
                times.append(tval)
                values.append(vval)
    except OSError as exc:
        raise ProfileError(f"cannot read profile: {exc}") from exc
    if len(times) < 2:
        raise ProfileError("profile needs at least two rows")
    if any(b <= a for a, b in zip(times, times[1:])):
        raise ProfileError("profile times must be strictly increasing")
    return tuple(times), tuple(values)


@dataclass(frozen=True)
class EmpConstants:
    """Combination constants of the amplitude quadratic form."""

    ae: float
    be: float
    ce: float
    w0: float

    def constraint_defect(self) -> float:
        return abs(self.ae * self.be - self.ce ** 2 - 1.0 / self.w0 ** 2)


@dataclass(frozen=True)
class ClassicalTrajectory:
    """Integrated solution pair on a uniform grid."""

    t: np.ndarray
    y1: np.ndarray
    y2: np.ndarray
    dy1: np.ndarray
    dy2: np.ndarray
    w0: float
    wronskian_drift: float
    spec: OscillatorSpec
    gamma: complex = 1.0
    omega0: float = 1.0


def _rk4(spec: OscillatorSpec, h: float, n_steps: int) -> np.ndarray:
    """Classical fourth-order steps for the 4-vector (y1, dy1, y2, dy2)."""
    state = np.array([spec.y1_init[0], spec.y1_init[1],
                      spec.y2_init[0], spec.y2_init[1]], dtype=float)
    out = np.empty((n_steps + 1, 4))
    out[0] = state

    def f(t, s):
        w2 = float(spec.omega2(t))
        return np.array([s[1], -w2 * s[0], s[3], -w2 * s[2]])

    t = spec.t0
    for i in range(n_steps):
        k1 = f(t, state)
        k2 = f(t + h / 2, state + h / 2 * k1)
        k3 = f(t + h / 2, state + h / 2 * k2)
        k4 = f(t + h, state + h * k3)
        state = state + (h / 6) * (k1 + 2 * k2 + 2 * k3 + k4)
        t += h
        out[i + 1] = state
    return out


def integrate_oscillator(spec: OscillatorSpec, gamma: complex = 1.0,
                         omega0: float = 1.0) -> ClassicalTrajectory:
    """RK4 integration with a step-halving acceptance check."""
    n = max(10, math.ceil((spec.t1 - spec.t0) / spec.step))
    h = (spec.t1 - spec.t0) / n
    coarse = _rk4(spec, h, n)
    fine = _rk4(spec, h / 2, 2 * n)
    endpoint_shift = float(np.max(np.abs(coarse[-1] - fine[-1])))
    if endpoint_shift > STEP_ACCEPT_TOL:
        raise HetlabError(
            f"step {h:g} rejected: halving shifts endpoint by {endpoint_shift:.3e}")
    t = spec.t0 + h * np.arange(n + 1)
    y1, dy1, y2, dy2 = coarse[:, 0], coarse[:, 1], coarse[:, 2], coarse[:, 3]
    w = y1 * dy2 - dy1 * y2
    w0 = float(w[0])
    drift = float(np.max(np.abs(w - w0)) / max(1e-30, abs(w0)))
    return ClassicalTrajectory(t, y1, y2, dy1, dy2, w0, drift, spec,
                               gamma=gamma, omega0=omega0)


@dataclass(frozen=True)
class AmplitudeResult:
    sigma: np.ndarray
    residual: float    # max |sigma'' + Omega^2 sigma - 1/sigma^3|, interior


def emp_amplitude(traj: ClassicalTrajectory, consts: EmpConstants) -> AmplitudeResult:
    """Amplitude from the quadratic form, plus its equation residual."""
    if consts.constraint_defect() > CONSTRAINT_TOL:
        raise ConstraintViolationError(
            f"Ae*Be - Ce^2 != 1/W0^2 (defect {consts.constraint_defect():.3e})")
    s2 = (consts.ae * traj.y1 ** 2 + consts.be * traj.y2 ** 2
          + 2 * consts.ce * traj.y1 * traj.y2)
    if np.min(s2) <= 0:
        raise ConstraintViolationError("quadratic form degenerates: sigma^2 <= 0")
    sigma = np.sqrt(s2)
    h = traj.t[1] - traj.t[0]
    # five-point centered second difference, endpoints excluded
    sdd = (-sigma[:-4] + 16 * sigma[1:-3] - 30 * sigma[2:-2]
           + 16 * sigma[3:-1] - sigma[4:]) / (12 * h ** 2)
    mid = slice(2, -2)
    w2 = traj.spec.omega2(traj.t[mid])
    resid = sdd + w2 * sigma[mid] - sigma[mid] ** -3
    return AmplitudeResult(sigma, float(np.max(np.abs(resid))))


@dataclass(frozen=True)
class PhaseResult:
    theta_integral: np.ndarray   # trapezoid of 1/sigma^2
    theta_argument: np.ndarray   # unwrapped argument route
    max_discrepancy: float


def classical_phase(traj: ClassicalTrajectory, consts: EmpConstants,
                    alpha: float, beta: float, a_psi: float,
                    b_psi: float) -> PhaseResult:
    """Phase via 1/sigma^2 integration and via the complex-argument route.

    The argument route uses psi(t) = sqrt(A) e^{i alpha} y1 - sqrt(B)
    e^{i beta} y2 with nearest-branch unwrapping; it matches the integral
    route when the amplitude constants correspond to |psi| (Ae = A, Be = B,
    Ce = -sqrt(AB) cos(alpha - beta)).
    """
    amp = emp_amplitude(traj, consts)
    h = traj.t[1] - traj.t[0]
    inv_s2 = amp.sigma ** -2.0
    theta1 = np.concatenate(
        [[0.0], np.cumsum((inv_s2[1:] + inv_s2[:-1]) / 2 * h)])

    psi = (math.sqrt(a_psi) * np.exp(1j * alpha) * traj.y1
           - math.sqrt(b_psi) * np.exp(1j * beta) * traj.y2)
    raw = np.angle(psi)
    jumps = np.diff(raw)
    # nearest-branch continuation
    corrected = jumps - 2 * math.pi * np.round(jumps / (2 * math.pi))
    if np.any(np.abs(corrected) > math.pi / 2):
        worst = float(np.max(np.abs(corrected)))
        raise UnwrapError(f"phase jump {worst:.3f} rad exceeds pi/2; grid too coarse")
    theta2 = np.concatenate([[0.0], np.cumsum(corrected)])
    return PhaseResult(theta1, theta2,
                       float(np.max(np.abs(theta1 - theta2))))


def hh8_diagnostic(traj: ClassicalTrajectory, sigma: np.ndarray,
                   theta: np.ndarray) -> float:
    """Report-only check of y1 against c * sigma * cos(theta + delta).

    The general solution is written as an envelope times a cosine of
    the accumulated phase; amplitude c and offset delta are fitted from
    the initial conditions.
    """
    u = traj.y1 / sigma
    h = traj.t[1] - traj.t[0]
    du0 = (-3 * u[0] + 4 * u[1] - u[2]) / (2 * h)
    dtheta0 = 1.0 / sigma[0] ** 2
    u_prime = du0 / dtheta0          # du/dtheta at t0
    c = math.hypot(u[0], u_prime)
    delta = math.atan2(-u_prime, u[0])
    trial = c * sigma * np.cos(theta + delta)
    return float(np.max(np.abs(trial - traj.y1)))


@dataclass(frozen=True)
class CoherentExpectations:
    a_t: complex
    b_dag_t: complex
    product: complex


def coherent_expectations(gamma: complex, omega0: float, t: float,
                          d: int) -> CoherentExpectations:
    """Expectations of the phase-dressed mode operators on coherent states.

    <a(t)> = conj(gamma) e^{i omega0 t}, <b+(t)> = gamma e^{-i omega0 t},
    product = |gamma|^2, evaluated with truncated coherent vectors and the
    dressed single-mode matrices.
    """
    if gamma == 0:
        return CoherentExpectations(0j, 0j, 0j)
    vec = coherent_state(gamma, d)
    a0 = annihilator(d).mat
    phase = gamma.conjugate() / gamma
    a_t = phase * np.exp(1j * omega0 * t) * complex(vec.conj() @ a0 @ vec)
    b_dag_t = (1 / phase) * np.exp(-1j * omega0 * t) * complex(vec.conj() @ a0.conj().T @ vec)
    return CoherentExpectations(a_t, b_dag_t, a_t * b_dag_t)
