"""Classical dynamics: time integration, oscillation periods, matched arcs.

The period of an orbit of energy E is available through three independent
routes, which cross-validate each other:

* ``period_numeric``  -- event detection on the integrated flow;
* ``period_elliptic`` -- T = 4 K(m) with parameter m = qt_M^2/(1+qt_M^2)
  (PARAMETER convention, not modulus; see :mod:`bornosc.elliptic`);
* ``period_asymptotic`` -- T = 4 asinh(2 qt_M), the large-amplitude matching
  of the sech/sinh arcs, accurate for qt_M >> 1.

Integration uses an adaptive embedded Runge-Kutta 8(5,3) pair.  The method
is not symplectic; instead the integrator runs at an internal tolerance
three orders tighter than the requested one so the relative energy drift of
a returned trajectory stays below the requested tolerance (down to the
double-precision floor of ~1e-12 on long high-energy spans).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Sequence, Union

import numpy as np

from . import _kernels as K
from .core import (
    DomainError,
    EnergyValue,
    LogCoshPoint,
    OscParams,
    ScaledPhasePoint,
    born_hamiltonian,
    level_qmax,
    logcosh_hamiltonian,
)
from .elliptic import ellipk_complement

TOL_MIN = 1e-13
TOL_MAX = 1e-3

# Internal error-control tolerance is tol * _RTOL_SHRINK so that the
# accumulated energy drift (which grows roughly linearly in the step count)
# stays below tol; _RTOL_FLOOR is the float64 noise floor of the controller.
_RTOL_SHRINK = 1e-3
_RTOL_FLOOR = 3e-14


class IntegrationError(RuntimeError):
    """Adaptive integration failed; carries the time reached."""

    def __init__(self, message: str, t_reached: float):
        super().__init__(f"{message} (t reached: {t_reached})")
        self.t_reached = t_reached


@dataclass(frozen=True)
class Trajectory:
    """Time-sampled orbit in scaled Born coordinates or log-cosh coordinates.

    ``kind`` of ``energy0`` says which flow was integrated: "born" samples
    are (qt, pt), "logcosh" samples are (Q, P).  ``max_energy_drift`` is the
    largest relative drift of the conserved quantity over every accepted
    integrator step (a superset of the reported samples).
    """

    times: np.ndarray
    q: np.ndarray
    p: np.ndarray
    energy0: EnergyValue
    max_energy_drift: float
    tol: float

    def __post_init__(self):
        if not (self.times.size == self.q.size == self.p.size):
            raise ValueError("times/q/p length mismatch")
        if self.times.size < 2:
            raise ValueError("a trajectory needs at least two samples")
        if not np.all(np.diff(self.times) > 0.0):
            raise ValueError("sample times must be strictly increasing")

    def __len__(self) -> int:
        return self.times.size

    def point(self, i: int) -> Union[ScaledPhasePoint, LogCoshPoint]:
        if self.energy0.kind == "born":
            return ScaledPhasePoint(qt=self.q[i], pt=self.p[i])
        return LogCoshPoint(Q=self.q[i], P=self.p[i])

    @property
    def final(self) -> Union[ScaledPhasePoint, LogCoshPoint]:
        return self.point(len(self) - 1)


@dataclass(frozen=True)
class PeriodResult:
    """An oscillation period with the route that produced it."""

    period: float
    method: str  # "numeric" | "elliptic" | "asymptotic"
    energy: Optional[EnergyValue] = None

    def __post_init__(self):
        if self.method not in ("numeric", "elliptic", "asymptotic"):
            raise ValueError(f"unknown period method {self.method!r}")
        if not (self.period > 0.0 and math.isfinite(self.period)):
            raise ValueError(f"period must be positive, got {self.period}")
        # 2*pi is the small-oscillation infimum of the true period; the
        # asymptotic formula is exempt since it is meaningless at small
        # amplitude by construction.
        if self.method != "asymptotic" and self.period < 2.0 * math.pi * (1.0 - 1e-9):
            raise ValueError(f"period {self.period} below the small-oscillation limit 2*pi")


def eom_rhs(s: ScaledPhasePoint, params: Optional[OscParams] = None,
            force: float = 0.0) -> tuple[float, float]:
    """Right-hand side of the scaled equations of motion.

    Returns (dqt/dt, dpt/dt); a constant force F adds eps*F to dpt/dt, so
    ``params`` is required whenever ``force`` is nonzero.
    """
    feps = 0.0
    if force != 0.0:
        if params is None:
            raise ValueError("params is required for forced dynamics (the force enters as eps*F)")
        feps = params.epsilon * force
    return K._rhs(K.SYS_BORN, feps, s.qt, s.pt)


def _check_tol(tol: float) -> None:
    if not (TOL_MIN <= tol <= TOL_MAX):
        raise ValueError(f"tol must lie in [{TOL_MIN}, {TOL_MAX}], got {tol}")


def _internal_tols(tol: float, scale: float) -> tuple[float, float]:
    rtol = max(tol * _RTOL_SHRINK, _RTOL_FLOOR)
    return rtol, rtol * max(1.0, scale)


def _prep_t_eval(t_eval, t_end: float) -> np.ndarray:
    te = np.asarray(t_eval, dtype=float)
    if te.ndim != 1 or te.size == 0:
        raise ValueError("t_eval must be a non-empty 1-d sequence")
    if not np.all(np.diff(te) > 0.0):
        raise ValueError("t_eval must be strictly increasing")
    if te[0] < 0.0 or te[-1] > t_end:
        raise ValueError("t_eval must lie within [0, t_end]")
    return te


def _run(sys_id: int, feps: float, eps2: float, q0: float, p0: float,
         t_end: float, tol: float, t_eval) -> tuple[np.ndarray, np.ndarray, np.ndarray, float]:
    rtol, atol = _internal_tols(tol, max(abs(q0), abs(p0)))
    te = np.empty(0) if t_eval is None else _prep_t_eval(t_eval, t_end)
    (status, t_reached, _nsteps, st, sq, sp, eq, ep, drift) = K.integrate_ode(
        sys_id, feps, eps2, q0, p0, t_end, rtol, atol, te, t_eval is None)
    if status == K.STATUS_STEP_UNDERFLOW:
        raise IntegrationError("step size underflow", t_reached)
    if status == K.STATUS_MAX_STEPS:
        raise IntegrationError("step budget exhausted", t_reached)
    if t_eval is None:
        return st, sq, sp, drift
    return te, eq, ep, drift


def integrate(s0: ScaledPhasePoint, params: OscParams, t_end: float,
              tol: float = 1e-10, force: float = 0.0,
              t_eval: Optional[Sequence[float]] = None) -> Trajectory:
    """Integrate the (optionally forced) Born flow from s0 over [0, t_end].

    With ``t_eval`` the trajectory is sampled at exactly those times (the
    integrator lands on them, no interpolation); otherwise every accepted
    step is returned.  For force=0 the relative energy drift is bounded by
    ``tol``; forced runs bound the drift of H - F*q instead.
    """
    _check_tol(tol)
    if not (t_end > 0.0):
        raise ValueError(f"t_end must be positive, got {t_end}")
    feps = params.epsilon * force
    t, q, p, drift = _run(K.SYS_BORN, feps, params.eps2, s0.qt, s0.pt, t_end, tol, t_eval)
    return Trajectory(times=t, q=q, p=p, energy0=born_hamiltonian(s0, params),
                      max_energy_drift=drift, tol=tol)


def integrate_logcosh(s0: LogCoshPoint, t_end: float, tol: float = 1e-10,
                      t_eval: Optional[Sequence[float]] = None) -> Trajectory:
    """Integrate dQ/dt = tanh P, dP/dt = -tanh Q from s0 over [0, t_end]."""
    _check_tol(tol)
    if not (t_end > 0.0):
        raise ValueError(f"t_end must be positive, got {t_end}")
    t, q, p, drift = _run(K.SYS_LOGCOSH, 0.0, 1.0, s0.Q, s0.P, t_end, tol, t_eval)
    return Trajectory(times=t, q=q, p=p, energy0=logcosh_hamiltonian(s0),
                      max_energy_drift=drift, tol=tol)


def period_numeric(E: EnergyValue, params: OscParams, tol: float = 1e-10) -> PeriodResult:
    """Oscillation period by event detection on the integrated orbit.

    Starts at (qt_M, 0) and locates the first return of pt to zero from
    above, which is one full period; the crossing is refined to ~1e-13
    relative in time by step bisection inside the bracketing step.
    """
    _check_tol(tol)
    if not (E.kind == "born" and E.value > 0.0):
        raise DomainError("period requires a positive Born energy")
    q_m = level_qmax(E, params)
    rtol, atol = _internal_tols(tol, q_m)
    # Generous cap: three times the large-amplitude estimate plus the
    # small-oscillation period covers the whole energy range.
    t_cap = 3.0 * (4.0 * math.asinh(2.0 * q_m) + 2.0 * math.pi)
    status, period = K.find_full_period(q_m, 0.0, rtol, atol, t_cap)
    if status == K.STATUS_EVENT_NOT_FOUND:
        raise IntegrationError("no return of pt to 0 before the time cap", period)
    if status != K.STATUS_OK:
        raise IntegrationError("integration failed during period detection", period)
    return PeriodResult(period=period, method="numeric", energy=E)


def period_elliptic(E: EnergyValue, params: OscParams) -> PeriodResult:
    """Closed-form period T = 4 K(m), m = qt_M^2 / (1 + qt_M^2)."""
    if not (E.kind == "born" and E.value > 0.0):
        raise DomainError("period requires a positive Born energy")
    q_m = level_qmax(E, params)
    # parameter m = q_m^2/(1+q_m^2); its complement 1/(1+q_m^2) is exact
    return PeriodResult(period=4.0 * ellipk_complement(1.0 / (1.0 + q_m * q_m)),
                        method="elliptic", energy=E)


def period_asymptotic(q_m: float, params: Optional[OscParams] = None) -> PeriodResult:
    """Large-amplitude period T = 4 asinh(2 qt_M); accuracy degrades below qt_M ~ 10."""
    if not (q_m > 0.0):
        raise DomainError(f"qt_M must be positive, got {q_m}")
    energy = None
    if params is not None:
        energy = EnergyValue(math.expm1(0.5 * math.log1p(q_m * q_m)) / params.eps2, kind="born")
    return PeriodResult(period=4.0 * math.asinh(2.0 * q_m), method="asymptotic", energy=energy)


def matched_segment(q_m: float, t: float) -> ScaledPhasePoint:
    """Large-amplitude arc through (qt_M, 0): (qt, pt) = (qt_M/cosh t, -sinh t).

    This is the qt-dominated quarter of the orbit; the pt-dominated arc
    follows from the qt <-> pt swap symmetry shifted by a quarter period.
    Meaningful for qt_M >> 1 and |t| up to about T/8.
    """
    if not (q_m > 0.0):
        raise DomainError(f"qt_M must be positive, got {q_m}")
    return ScaledPhasePoint(qt=q_m / math.cosh(t), pt=-math.sinh(t))


def born_energy_series(traj: Trajectory, params: OscParams) -> np.ndarray:
    """Born energies H(t) along a Born-flow trajectory (vectorized, stable)."""
    if traj.energy0.kind != "born":
        raise DomainError("energy series expects a Born trajectory")
    a = traj.q * traj.q
    b = traj.p * traj.p
    return np.expm1(0.5 * np.log1p(a + b + a * b)) / params.eps2
