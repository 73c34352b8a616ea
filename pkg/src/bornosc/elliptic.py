"""Complete elliptic integrals by arithmetic-geometric mean iteration.

Convention: the PARAMETER m (not the modulus k = sqrt(m)) is used throughout,

    K(m) = int_0^{pi/2} (1 - m sin^2 t)^(-1/2) dt,
    E(m) = int_0^{pi/2} (1 - m sin^2 t)^(+1/2) dt.

``ellipk_agm``/``ellipe_agm`` accept any m < 1; negative parameters are
reduced to [0, 1) with the imaginary-modulus transformation

    K(-u) = K(u/(1+u)) / sqrt(1+u),   E(-u) = sqrt(1+u) * E(u/(1+u)).

The reduced complementary parameter 1 - u/(1+u) = 1/(1+u) is formed directly
(never by subtraction), so huge |m| loses no accuracy; the same is available
to callers that know the complement exactly via ``ellipk_complement``.  The
AGM iteration stops when successive means agree to 1e-15 relative, giving
~1e-15 relative accuracy in K and E.
"""

from __future__ import annotations

import math

_AGM_RTOL = 1e-15
_MAX_ITER = 64


def _agm(b0: float, c0sq: float) -> tuple[float, float]:
    """AGM of (1, b0) and the sum S = sum_n 2^(n-1) c_n^2 with c_0^2 = c0sq."""
    a = 1.0
    b = b0
    s = 0.5 * c0sq
    pow2 = 1.0
    for _ in range(_MAX_ITER):
        c = 0.5 * (a - b)
        a, b = 0.5 * (a + b), math.sqrt(a * b)
        s += pow2 * c * c
        pow2 *= 2.0
        if abs(a - b) <= _AGM_RTOL * a:
            break
    return a, s


def ellipk_complement(mc: float) -> float:
    """K(m) given the complementary parameter mc = 1 - m exactly (0 < mc <= 1).

    Useful when m is close to 1 and mc is known in closed form; avoids the
    cancellation of computing 1 - m in floating point.
    """
    if not (0.0 < mc <= 1.0):
        raise ValueError(f"complementary parameter must lie in (0, 1], got {mc}")
    a, _ = _agm(math.sqrt(mc), 1.0 - mc)
    return 0.5 * math.pi / a


def ellipk_agm(m: float) -> float:
    """Complete elliptic integral of the first kind, parameter convention."""
    if m >= 1.0:
        raise ValueError(f"K(m) diverges for m >= 1 (got m={m})")
    if m == 0.0:
        return 0.5 * math.pi
    if m < 0.0:
        u = -m
        # reduced parameter m' = u/(1+u); its complement 1/(1+u) is exact
        a, _ = _agm(1.0 / math.sqrt(1.0 + u), u / (1.0 + u))
        return 0.5 * math.pi / (a * math.sqrt(1.0 + u))
    a, _ = _agm(math.sqrt(1.0 - m), m)
    return 0.5 * math.pi / a


def ellipe_agm(m: float) -> float:
    """Complete elliptic integral of the second kind, parameter convention."""
    if m > 1.0:
        raise ValueError(f"E(m) is real only for m <= 1 (got m={m})")
    if m == 0.0:
        return 0.5 * math.pi
    if m == 1.0:
        return 1.0
    if m < 0.0:
        u = -m
        a, s = _agm(1.0 / math.sqrt(1.0 + u), u / (1.0 + u))
        return math.sqrt(1.0 + u) * 0.5 * math.pi / a * (1.0 - s)
    a, s = _agm(math.sqrt(1.0 - m), m)
    return 0.5 * math.pi / a * (1.0 - s)
