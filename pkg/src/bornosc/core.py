"""Parameters, phase-space coordinates and Hamiltonians of the Born oscillator.

The oscillator is the one-degree-of-freedom system

    H(q, p) = (1/eps^2) * [sqrt((1 + eps^2 q^2)(1 + eps^2 p^2)) - 1],

the single-mode reduction of Born's 1934 nonlinear electrodynamics.  All
internal state is kept in the scaled coordinates qt = eps*q, pt = eps*p, in
which the level sets read (1 + qt^2)(1 + pt^2) = L with level constant
L = (1 + eps^2 E)^2.  A canonical change of variables qt = sinh(Q),
pt = sinh(P) turns H into the "log-cosh" form log[cosh(P) cosh(Q)].

Everything here is an immutable value object or a pure function; instances
can be shared freely across threads.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional


class DomainError(ValueError):
    """Input outside the mathematical domain of an operation."""


def log_cosh(x: float) -> float:
    """log(cosh(x)), overflow-safe up to |x| ~ 1e308."""
    ax = abs(x)
    return ax + math.log1p(math.exp(-2.0 * ax)) - math.log(2.0)


def acosh_1p(u: float) -> float:
    """acosh(1 + u) for u >= 0 without cancellation near u = 0."""
    if u < 0.0:
        raise DomainError(f"acosh argument 1 + u below 1 (u={u})")
    return math.log1p(u + math.sqrt(u * (u + 2.0)))


@dataclass(frozen=True)
class OscParams:
    """Nonlinearity scale eps of the oscillator; eps -> 0 is the harmonic limit."""

    epsilon: float

    def __post_init__(self):
        if not (self.epsilon > 0.0) or not math.isfinite(self.epsilon):
            raise ValueError(f"epsilon must be a positive finite real, got {self.epsilon}")

    @property
    def eps2(self) -> float:
        return self.epsilon * self.epsilon


@dataclass(frozen=True)
class ScaledPhasePoint:
    """Scaled phase-space point (qt, pt) = (eps*q, eps*p)."""

    qt: float
    pt: float

    def __post_init__(self):
        if not (math.isfinite(self.qt) and math.isfinite(self.pt)):
            raise ValueError(f"non-finite phase point ({self.qt}, {self.pt})")

    def unscaled(self, params: OscParams) -> tuple[float, float]:
        """Recover the physical coordinates (q, p) = (qt/eps, pt/eps)."""
        return self.qt / params.epsilon, self.pt / params.epsilon


@dataclass(frozen=True)
class LogCoshPoint:
    """Point (Q, P) in the canonically transformed variables qt = sinh Q, pt = sinh P."""

    Q: float
    P: float

    def __post_init__(self):
        if not (math.isfinite(self.Q) and math.isfinite(self.P)):
            raise ValueError(f"non-finite log-cosh point ({self.Q}, {self.P})")


@dataclass(frozen=True)
class EnergyValue:
    """Non-negative energy, tagged with the Hamiltonian it belongs to.

    kind "born" is a value of H(q, p) above; kind "logcosh" is a value of
    log[cosh(P) cosh(Q)].  Zero occurs exactly at the phase-space origin.
    """

    value: float
    kind: str = "born"

    def __post_init__(self):
        if self.kind not in ("born", "logcosh"):
            raise ValueError(f"unknown energy kind {self.kind!r}")
        if not (self.value >= 0.0) or not math.isfinite(self.value):
            raise ValueError(f"energy must be a finite non-negative real, got {self.value}")

    def level_constant(self, params: OscParams) -> float:
        """L = (1 + eps^2 E)^2, the conserved value of (1+qt^2)(1+pt^2)."""
        if self.kind != "born":
            raise DomainError("level constant is defined for Born energies only")
        s = params.eps2 * self.value
        return (1.0 + s) ** 2


def born_hamiltonian(pt: ScaledPhasePoint, params: OscParams) -> EnergyValue:
    """Evaluate H = (1/eps^2)[sqrt((1+qt^2)(1+pt^2)) - 1] at a scaled point.

    Uses expm1/log1p so the small-amplitude limit (q^2+p^2)/2 is reached at
    full relative precision.
    """
    a = pt.qt * pt.qt
    b = pt.pt * pt.pt
    # sqrt((1+a)(1+b)) - 1 without cancellation: expm1(log1p(a+b+ab)/2)
    scaled = math.expm1(0.5 * math.log1p(a + b + a * b))
    return EnergyValue(scaled / params.eps2, kind="born")


def level_qmax(E: EnergyValue, params: OscParams) -> float:
    """Maximum of qt on the level set of Born energy E: qt_M = sqrt(L - 1)."""
    if E.kind != "born":
        raise DomainError("level_qmax expects a Born energy")
    s = params.eps2 * E.value
    return math.sqrt(s * (2.0 + s))


def logcosh_hamiltonian(pt: LogCoshPoint) -> EnergyValue:
    """Evaluate log[cosh(P) cosh(Q)]; safe for |P|, |Q| up to ~700 and beyond."""
    return EnergyValue(log_cosh(pt.P) + log_cosh(pt.Q), kind="logcosh")


def to_logcosh(s: ScaledPhasePoint) -> LogCoshPoint:
    """Map (qt, pt) -> (Q, P) = (asinh qt, asinh pt)."""
    return LogCoshPoint(Q=math.asinh(s.qt), P=math.asinh(s.pt))


def from_logcosh(pt: LogCoshPoint) -> ScaledPhasePoint:
    """Inverse of :func:`to_logcosh`: (Q, P) -> (sinh Q, sinh P)."""
    return ScaledPhasePoint(qt=math.sinh(pt.Q), pt=math.sinh(pt.P))


def forced_stationary_point(F: float, params: OscParams) -> Optional[ScaledPhasePoint]:
    """Stationary point of the constantly forced oscillator, if it exists.

    The fixed point solves qt/sqrt(1+qt^2) = eps*F with pt = 0; it exists
    only in the subcritical regime |F| < 1/eps.  Returns None for
    supercritical forcing (no stationary solution).
    """
    if not math.isfinite(F):
        raise ValueError("force must be finite")
    f = params.epsilon * F
    if abs(f) >= 1.0:
        return None
    return ScaledPhasePoint(qt=f / math.sqrt((1.0 - f) * (1.0 + f)), pt=0.0)
