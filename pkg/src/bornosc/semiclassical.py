"""Phase-space-area (Weyl counting) spectral estimates and the zeta-zero map.

The semiclassical rule used throughout: the n-th eigenvalue E_n satisfies

    area{ (qt, pt) : H <= E_n }  =  2 pi eps^2 (n + 1/2)

in the scaled coordinates.  For the Born oscillator the area of the level
set (1+qt^2)(1+pt^2) <= L reduces, by the 8-fold symmetry of the domain, to
a 1-d integral over [0, sqrt(sqrt(L)-1)] of (pt(qt) - qt); it also has the
closed form 4[(1 + qn^2) K(-qn^2) - E(-qn^2)] in negative-parameter complete
elliptic integrals (qn = qt_max), and the large-amplitude asymptote
4 qn [log(4 qn) - 1].  Equating that asymptote to 2 pi eps^2 (n + 1/2) with
eps^2 = 1/(8 pi) makes the right-hand side n/4 + 1/8, and with n = 4N - 6
the quantity 8 pi qn estimates the imaginary part y_N of the N-th
non-trivial Riemann zeta zero, whose smooth counting obeys
(y/2pi)[log(y/2pi) - 1] ~ N - 11/8.

For the log-cosh Hamiltonian the same area rule gives the closed form
(E_n + 2 log 2)^2 = pi^2/6 + pi eps^2 (n + 1/2) at large n.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from importlib import resources
from typing import Optional, Union

import numpy as np
from scipy.integrate import quad

from .core import DomainError, EnergyValue, OscParams, acosh_1p, log_cosh
from .elliptic import ellipe_agm, ellipk_agm
from .solvers import expand_bracket, newton_bisect

LOG2 = math.log(2.0)


class ConventionMismatchError(RuntimeError):
    """Closed-form area disagrees with the quadrature oracle."""


class ZerosFormatError(ValueError):
    """Zeros table file is malformed; message names the offending line."""


@dataclass(frozen=True)
class AreaResult:
    """Phase-space area enclosed by one energy level set."""

    energy: EnergyValue
    area: float
    method: str  # "quadrature" | "elliptic" | "asymptotic"

    def __post_init__(self):
        if self.method not in ("quadrature", "elliptic", "asymptotic"):
            raise ValueError(f"unknown area method {self.method!r}")
        if not (self.area > 0.0 and math.isfinite(self.area)):
            raise ValueError(f"area must be positive, got {self.area}")


@dataclass(frozen=True)
class WeylEstimate:
    """Semiclassical estimate of the n-th eigenvalue.

    ``residual`` is the defect of the area condition at the returned energy
    (zero for the purely algebraic closed forms).  ``pre_asymptotic`` marks
    estimates outside the validity range of an asymptotic formula (e.g. a
    non-positive log-cosh energy at small n); they are reported, not errors.
    """

    n: int
    epsilon: float
    energy_estimate: float
    method: str
    residual: float
    pre_asymptotic: bool = False


@dataclass(frozen=True)
class ZerosTable:
    """Ascending imaginary parts y_N of non-trivial zeta zeros, 1-indexed."""

    values: np.ndarray

    def __post_init__(self):
        v = self.values
        if v.ndim != 1 or v.size == 0:
            raise ValueError("zeros table must be a non-empty 1-d array")
        if v[0] <= 0.0 or not np.all(np.diff(v) > 0.0):
            raise ValueError("zeros must be positive and strictly increasing")

    def __len__(self) -> int:
        return self.values.size

    def y(self, N: int) -> float:
        if not (1 <= N <= len(self)):
            raise IndexError(f"zero index N={N} outside table of {len(self)} entries")
        return float(self.values[N - 1])


@dataclass(frozen=True)
class ZeroComparison:
    """One row of the estimate-vs-table comparison."""

    N: int
    y_true: float
    y_est: float
    rel_err: float
    smooth_lhs: float  # (y/2pi)(log(y/2pi) - 1) from the table value
    smooth_rhs: float  # N - 11/8, the smooth counting with S = 1/2


def _require_born(E: EnergyValue) -> float:
    if E.kind != "born" or not (E.value > 0.0):
        raise DomainError("a positive Born energy is required")
    return E.value


def _require_logcosh(E: EnergyValue) -> float:
    if E.kind != "logcosh" or not (E.value > 0.0):
        raise DomainError("a positive log-cosh energy is required")
    return E.value


def born_area_quadrature(E: EnergyValue, params: OscParams,
                         tol: float = 1e-10) -> AreaResult:
    """Area of the Born domain by adaptive quadrature of the reduced integral.

    area = 8 * int_0^{qt*} (pt(qt) - qt) dqt with pt(qt) on the level set and
    qt* = sqrt(eps^2 E) the symmetric point pt = qt.  The integrand vanishes
    linearly at qt*, so the quadrature sees no endpoint singularity.
    """
    e = _require_born(E)
    s = params.eps2 * e
    qm2 = s * (2.0 + s)  # qt_max^2 = L - 1
    qstar = math.sqrt(s)

    def integrand(qt):
        return math.sqrt((qm2 - qt * qt) / (1.0 + qt * qt)) - qt

    val, abserr = quad(integrand, 0.0, qstar, epsabs=0.0,
                       epsrel=max(tol, 1e-13), limit=200)
    if abserr > 100.0 * max(tol, 1e-13) * abs(val):
        raise RuntimeError(f"area quadrature did not converge (abserr {abserr:.3e})")
    return AreaResult(energy=E, area=8.0 * val, method="quadrature")


def born_area_asymptotic(E: EnergyValue, params: OscParams) -> AreaResult:
    """Large-amplitude area law 4 qn [log(4 qn) - 1], qn = qt_max(E).

    Valid once 4 qn > e; below that the expression is non-positive and a
    DomainError is raised.
    """
    e = _require_born(E)
    s = params.eps2 * e
    qn = math.sqrt(s * (2.0 + s))
    if 4.0 * qn <= math.e:
        raise DomainError(f"asymptotic area needs 4 qt_max > e, got {4.0 * qn}")
    return AreaResult(energy=E, area=4.0 * qn * (math.log(4.0 * qn) - 1.0),
                      method="asymptotic")


def born_area_elliptic(E: EnergyValue, params: OscParams,
                       mismatch_tol: float = 1e-6) -> AreaResult:
    """Closed-form Born area 4[(1 + qn^2) K(-qn^2) - E(-qn^2)], qn = qt_max.

    Negative-parameter complete elliptic integrals, parameter convention.
    Every call cross-checks the value against the quadrature route; a
    disagreement beyond mismatch_tol (relative) raises
    ConventionMismatchError instead of returning a number.
    """
    e = _require_born(E)
    s = params.eps2 * e
    qn2 = s * (2.0 + s)
    area = 4.0 * ((1.0 + qn2) * ellipk_agm(-qn2) - ellipe_agm(-qn2))
    oracle = born_area_quadrature(E, params, tol=1e-11).area
    if abs(area - oracle) > mismatch_tol * abs(oracle):
        raise ConventionMismatchError(
            f"elliptic area {area!r} vs quadrature {oracle!r}: "
            "elliptic-integral convention mismatch")
    return AreaResult(energy=E, area=area, method="elliptic")


def logcosh_area_quadrature(E: EnergyValue, tol: float = 1e-10) -> AreaResult:
    """Area of the log-cosh domain {log(cosh P cosh Q) <= E} by quadrature.

    Reduced integral: 8 * int_0^{Qbar} (P(Q) - Q) dQ with the boundary curve
    cosh P(Q) cosh Q = e^E, i.e. P(Q) = acosh(e^E / cosh Q), and with
    Qbar = acosh(e^{E/2}) the symmetric point.  Everything is evaluated in
    log space so arbitrarily large E is safe.
    """
    e = _require_logcosh(E)

    def boundary_p(Q):
        log_z = e - log_cosh(Q)  # log of cosh P on the boundary, >= e/2 here
        if log_z > 30.0:
            return log_z + LOG2  # acosh(z) = log(2z) + O(z^-2)
        return acosh_1p(math.expm1(log_z))

    if 0.5 * e > 30.0:
        q_bar = 0.5 * e + LOG2  # acosh(e^{E/2}) to O(e^-E)
    else:
        q_bar = acosh_1p(math.expm1(0.5 * e))
    val, abserr = quad(lambda Q: boundary_p(Q) - Q, 0.0, q_bar,
                       epsabs=0.0, epsrel=max(tol, 1e-13), limit=200)
    if abserr > 100.0 * max(tol, 1e-13) * abs(val):
        raise RuntimeError(f"area quadrature did not converge (abserr {abserr:.3e})")
    return AreaResult(energy=E, area=8.0 * val, method="quadrature")


def _weyl_target(n: int, params: OscParams) -> float:
    if n < 0:
        raise DomainError(f"level index must be non-negative, got {n}")
    return 2.0 * math.pi * params.eps2 * (n + 0.5)


def _solve_area(n: int, params: OscParams, area_of_energy, guess: float,
                tol: float) -> tuple[float, float]:
    """Solve area(E) = 2 pi eps^2 (n + 1/2) for E; returns (E, residual)."""
    target = _weyl_target(n, params)

    def g(e):
        return area_of_energy(e) - target

    lo, hi = expand_bracket(g, guess / 64.0, 2.0 * guess)
    e_hat = newton_bisect(g, lo, hi, xtol=0.0, rtol=tol)
    return e_hat, g(e_hat)


def weyl_solve_born(n: int, params: OscParams, method: str = "quadrature",
                    tol: float = 1e-12) -> WeylEstimate:
    """Invert the Born area condition for level n with the selected area route.

    The area is strictly increasing in the energy, so a bracketing
    Newton/bisection hybrid refines E_n to relative tolerance tol.
    """
    if method == "quadrature":
        def area_fn(e):
            return born_area_quadrature(EnergyValue(e), params, tol=1e-12).area
    elif method == "elliptic":
        def area_fn(e):
            s = params.eps2 * e
            qn2 = s * (2.0 + s)
            return 4.0 * ((1.0 + qn2) * ellipk_agm(-qn2) - ellipe_agm(-qn2))
    elif method == "asymptotic":
        def area_fn(e):
            return born_area_asymptotic(EnergyValue(e), params).area
    else:
        raise ValueError(f"unknown area method {method!r}")
    # Harmonic limit: area ~ 2 pi eps^2 E, so E ~ n + 1/2 seeds the bracket.
    e_hat, residual = _solve_area(n, params, area_fn, guess=n + 0.5, tol=tol)
    return WeylEstimate(n=n, epsilon=params.epsilon, energy_estimate=e_hat,
                        method=method, residual=residual)


def weyl_solve_logcosh(n: int, params: OscParams, tol: float = 1e-12) -> WeylEstimate:
    """Invert the log-cosh area condition for level n (quadrature area)."""
    def area_fn(e):
        return logcosh_area_quadrature(EnergyValue(e, kind="logcosh"), tol=1e-12).area

    target = _weyl_target(n, params)
    # Small-E the bowl is harmonic (area ~ 2 pi E); large-E the area grows
    # like 2(E + 2 log 2)^2, whichever guess is larger brackets faster.
    guess = max(target / (2.0 * math.pi), math.sqrt(0.5 * target))
    e_hat, residual = _solve_area(n, params, area_fn, guess=guess, tol=tol)
    return WeylEstimate(n=n, epsilon=params.epsilon, energy_estimate=e_hat,
                        method="quadrature", residual=residual)


def solve_x_logx(r: float, tol: float = 1e-12) -> float:
    """Solve x (log x - 1) = r on the increasing branch x > e (requires r > 0)."""
    if not (r > 0.0) or not math.isfinite(r):
        raise DomainError(f"x(log x - 1) = r is solvable on x > e only for r > 0, got r={r}")

    def f(x):
        return x * (math.log(x) - 1.0) - r

    hi = max(math.e * 2.0, 3.0 * r)
    while f(hi) < 0.0:
        hi *= 2.0
    return newton_bisect(f, math.e * (1.0 - 1e-13), hi, fprime=math.log,
                         xtol=0.0, rtol=tol)


def asymptotic_born(n: int, params: OscParams, tol: float = 1e-12) -> WeylEstimate:
    """Asymptotic Born level from 4 qn [log(4 qn) - 1] = 2 pi eps^2 (n + 1/2).

    Solved for x = 4 qn on the branch x > e (the right-hand side is positive
    for every n >= 0, so the solution always exists); the returned energy
    uses the large-amplitude identification E_n = qn / eps^2.
    """
    r = _weyl_target(n, params)
    x = solve_x_logx(r, tol=tol)
    qn = 0.25 * x
    return WeylEstimate(n=n, epsilon=params.epsilon, energy_estimate=qn / params.eps2,
                        method="asymptotic", residual=x * (math.log(x) - 1.0) - r)


def logcosh_asymptotic(n: int, params: OscParams) -> WeylEstimate:
    """Closed-form log-cosh level: E_n = -2 log 2 + sqrt(pi^2/6 + pi eps^2 (n+1/2)).

    Exact consequence of the large-n area evaluation; below the asymptotic
    regime the formula can return a non-positive energy, which is flagged
    via pre_asymptotic rather than treated as an error.
    """
    if n < 0:
        raise DomainError(f"level index must be non-negative, got {n}")
    e = -2.0 * LOG2 + math.sqrt(math.pi ** 2 / 6.0 + math.pi * params.eps2 * (n + 0.5))
    return WeylEstimate(n=n, epsilon=params.epsilon, energy_estimate=e,
                        method="asymptotic", residual=0.0, pre_asymptotic=e <= 0.0)


# ---------------------------------------------------------------------------
# Riemann zeta zeros: estimate and comparison
# ---------------------------------------------------------------------------

ZETA_EPS2 = 1.0 / (8.0 * math.pi)  # makes 2 pi eps^2 (n + 1/2) = n/4 + 1/8


def zeta_zero_estimate(N: int, tol: float = 1e-12) -> float:
    """Estimate the imaginary part of the N-th non-trivial zeta zero.

    With eps^2 = 1/(8 pi) and n = 4N - 6 the asymptotic area condition
    becomes x (log x - 1) = N - 11/8 for x = 4 qn, and y_N ~ 8 pi qn = 2 pi x.
    Requires N >= 3 (the contract excludes the first two zeros, where the
    asymptotic identification is not usable).
    """
    if N < 3:
        raise DomainError(f"zeta zero estimate requires N >= 3, got {N}")
    x = solve_x_logx(N - 11.0 / 8.0, tol=tol)
    return 2.0 * math.pi * x


def load_zeros(path) -> ZerosTable:
    """Parse a zeros table: one decimal per line, '#' comments, blank lines ok."""
    values = []
    with open(path, "r", encoding="ascii") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            try:
                y = float(line)
            except ValueError:
                raise ZerosFormatError(f"{path}: line {lineno}: not a number: {line!r}") from None
            if not math.isfinite(y) or y <= 0.0:
                raise ZerosFormatError(f"{path}: line {lineno}: value must be positive, got {y}")
            if values and y <= values[-1]:
                raise ZerosFormatError(
                    f"{path}: line {lineno}: values must be strictly increasing "
                    f"({y} after {values[-1]})")
            values.append(y)
    if not values:
        raise ZerosFormatError(f"{path}: no values found")
    return ZerosTable(values=np.array(values))


def bundled_zeros_path():
    """Path to the table of the first 100 zeros shipped with the package."""
    return resources.files("bornosc.data").joinpath("zeta_zeros_100.txt")


def load_bundled_zeros() -> ZerosTable:
    with resources.as_file(bundled_zeros_path()) as p:
        return load_zeros(p)


def compare_zeros(table: ZerosTable, N_from: int, N_to: int) -> list[ZeroComparison]:
    """Pair table zeros with estimates over N in [N_from, N_to].

    Each row also carries the smooth-counting check: the left side
    (y/2pi)(log(y/2pi) - 1) computed from the table value against N - 11/8
    (counting with the fluctuating term replaced by its mean S = 1/2).
    """
    if N_from < 3:
        raise DomainError(f"comparison starts at N >= 3, got {N_from}")
    if N_to < N_from:
        raise ValueError(f"empty range [{N_from}, {N_to}]")
    if N_to > len(table):
        raise IndexError(f"table has {len(table)} zeros, range ends at {N_to}")
    rows = []
    for N in range(N_from, N_to + 1):
        y_true = table.y(N)
        y_est = zeta_zero_estimate(N)
        t = y_true / (2.0 * math.pi)
        rows.append(ZeroComparison(
            N=N, y_true=y_true, y_est=y_est,
            rel_err=abs(y_est - y_true) / y_true,
            smooth_lhs=t * (math.log(t) - 1.0),
            smooth_rhs=N - 11.0 / 8.0))
    return rows
