"""Scalar root finding: bracket expansion plus a Newton/bisection hybrid.

Every quantization condition in the package reduces to a monotone scalar
equation, so a guarded Newton iteration that falls back to bisection when a
step leaves the bracket is all that is needed.  Tolerances apply to the
independent variable (absolute + relative).
"""

from __future__ import annotations

import math
from typing import Callable, Optional


class BracketError(RuntimeError):
    """Failed to bracket a sign change."""


def expand_bracket(
    f: Callable[[float], float],
    x_lo: float,
    x_hi: float,
    grow: float = 4.0,
    max_expand: int = 200,
) -> tuple[float, float]:
    """Grow [x_lo, x_hi] geometrically upward until f changes sign across it.

    Intended for increasing functions of a positive variable; the lower edge
    follows the previous upper edge so the final bracket is tight on one side.
    """
    f_lo = f(x_lo)
    f_hi = f(x_hi)
    if f_lo == 0.0:
        return x_lo, x_lo
    for _ in range(max_expand):
        if f_lo * f_hi <= 0.0:
            return x_lo, x_hi
        x_lo, f_lo = x_hi, f_hi
        x_hi = x_hi * grow
        f_hi = f(x_hi)
    raise BracketError(f"no sign change up to x={x_hi}")


def newton_bisect(
    f: Callable[[float], float],
    x_lo: float,
    x_hi: float,
    fprime: Optional[Callable[[float], float]] = None,
    xtol: float = 1e-12,
    rtol: float = 1e-12,
    max_iter: int = 200,
) -> float:
    """Root of f in [x_lo, x_hi] given f(x_lo), f(x_hi) of opposite sign.

    Newton steps (or secant steps when fprime is None) are taken while they
    stay inside the current bracket; otherwise the midpoint is used.  The
    bracket shrinks monotonically, so convergence is guaranteed.
    """
    f_lo = f(x_lo)
    if f_lo == 0.0:
        return x_lo
    f_hi = f(x_hi)
    if f_hi == 0.0:
        return x_hi
    if f_lo * f_hi > 0.0:
        raise BracketError(f"f({x_lo})={f_lo} and f({x_hi})={f_hi} have the same sign")

    x, fx = (x_lo, f_lo) if abs(f_lo) < abs(f_hi) else (x_hi, f_hi)
    x_prev, f_prev = (x_hi, f_hi) if x == x_lo else (x_lo, f_lo)

    for _ in range(max_iter):
        # Candidate step: Newton if a derivative is available, else secant.
        x_new = None
        if fprime is not None:
            d = fprime(x)
            if d != 0.0 and math.isfinite(d):
                x_new = x - fx / d
        elif f_prev != fx:
            x_new = x - fx * (x - x_prev) / (fx - f_prev)
        if x_new is None or not (x_lo < x_new < x_hi):
            x_new = 0.5 * (x_lo + x_hi)

        f_new = f(x_new)
        x_prev, f_prev = x, fx
        x, fx = x_new, f_new
        if fx == 0.0:
            return x
        if f_lo * fx < 0.0:
            x_hi, f_hi = x, fx
        else:
            x_lo, f_lo = x, fx
        if (x_hi - x_lo) <= xtol + rtol * abs(x):
            return 0.5 * (x_lo + x_hi)
    return 0.5 * (x_lo + x_hi)
