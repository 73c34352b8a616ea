"""Hot numerical kernels (numba ``@njit``, with interpreted fallback).

Three loops dominate the package runtime and live here so numba can compile
them: the adaptive Dormand-Prince 8(5,3) integrator for the oscillator flows,
the Sturm-sequence bisection eigensolver for symmetric tridiagonal sector
matrices, and the three-term coefficient recursion used to cross-check the
eigensolver.  ``BORNOSC_DISABLE_NUMBA=1`` runs the same code interpreted
(see :mod:`bornosc._jit`).

Kernels use scalar math and preallocated scratch arrays only; everything
object-like stays in the wrapper modules.
"""

import math

import numpy as np

from ._jit import njit
from ._dop853_tableau import A, B, C, E3, E5

SYS_BORN = 0
SYS_LOGCOSH = 1

STATUS_OK = 0
STATUS_STEP_UNDERFLOW = 1
STATUS_MAX_STEPS = 2
STATUS_EVENT_NOT_FOUND = 3

_SAFETY = 0.9
_MIN_FACTOR = 0.2
_MAX_FACTOR = 10.0
_ERR_EXP = -1.0 / 8.0
_MAX_STEPS = 50_000_000

_A = np.ascontiguousarray(A)
_B = np.ascontiguousarray(B)
_C = np.ascontiguousarray(C)
_E3 = np.ascontiguousarray(E3)
_E5 = np.ascontiguousarray(E5)


@njit(cache=True)
def _rhs(sys_id, feps, q, p):
    if sys_id == SYS_BORN:
        # dq/dt = p*sqrt((1+q^2)/(1+p^2)), dp/dt = -q/sqrt(...) + eps*F
        r = math.sqrt((1.0 + q * q) / (1.0 + p * p))
        return p * r, -q / r + feps
    return math.tanh(p), -math.tanh(q)


@njit(cache=True)
def _energy_scaled(sys_id, q, p):
    # Born: eps^2 * H  = sqrt((1+q^2)(1+p^2)) - 1, cancellation-free.
    # Log-cosh: H itself (eps-independent).
    if sys_id == SYS_BORN:
        u = q * q + p * p + (q * q) * (p * p)
        return math.expm1(0.5 * math.log1p(u))
    aq = abs(q)
    ap = abs(p)
    lc_q = aq + math.log1p(math.exp(-2.0 * aq)) - 0.6931471805599453
    lc_p = ap + math.log1p(math.exp(-2.0 * ap)) - 0.6931471805599453
    return lc_q + lc_p


@njit(cache=True)
def _drift(sys_id, eps2, e, e0):
    # |H(t) - H(0)| / max(|H(0)|, 1) in the unscaled Born energy.  For
    # forced runs the callers fold the -eps*F*qt term into e, so H here is
    # the conserved quantity of the flow actually integrated.
    if sys_id == SYS_BORN:
        return abs(e - e0) / max(abs(e0), eps2)
    return abs(e - e0) / max(abs(e0), 1.0)


@njit(cache=True)
def _stages(sys_id, feps, q, p, h, kq, kp):
    """Fill the 13 stage derivatives for one trial step; kq[0]/kp[0] are f(y)."""
    for i in range(1, 12):
        sq = 0.0
        sp = 0.0
        for j in range(i):
            a = _A[i, j]
            if a != 0.0:
                sq += a * kq[j]
                sp += a * kp[j]
        dq, dp = _rhs(sys_id, feps, q + h * sq, p + h * sp)
        kq[i] = dq
        kp[i] = dp
    sq = 0.0
    sp = 0.0
    for j in range(12):
        b = _B[j]
        if b != 0.0:
            sq += b * kq[j]
            sp += b * kp[j]
    q_new = q + h * sq
    p_new = p + h * sp
    dq, dp = _rhs(sys_id, feps, q_new, p_new)
    kq[12] = dq
    kp[12] = dp
    return q_new, p_new


@njit(cache=True)
def _error_norm(h, q, p, q_new, p_new, kq, kp, rtol, atol):
    """Combined 5th/3rd-order error estimate of the 8(5,3) pair, RMS-normalized."""
    e5q = 0.0
    e5p = 0.0
    e3q = 0.0
    e3p = 0.0
    for j in range(13):
        e5q += _E5[j] * kq[j]
        e5p += _E5[j] * kp[j]
        e3q += _E3[j] * kq[j]
        e3p += _E3[j] * kp[j]
    den_q = math.hypot(abs(e5q), 0.1 * abs(e3q))
    den_p = math.hypot(abs(e5p), 0.1 * abs(e3p))
    err_q = h * e5q * (abs(e5q) / den_q) if den_q > 0.0 else 0.0
    err_p = h * e5p * (abs(e5p) / den_p) if den_p > 0.0 else 0.0
    scale_q = atol + rtol * max(abs(q), abs(q_new))
    scale_p = atol + rtol * max(abs(p), abs(p_new))
    eq = err_q / scale_q
    ep = err_p / scale_p
    return math.sqrt(0.5 * (eq * eq + ep * ep))


@njit(cache=True)
def _initial_step(sys_id, feps, q0, p0, dq0, dp0, t_end, rtol, atol):
    scale_q = atol + rtol * abs(q0)
    scale_p = atol + rtol * abs(p0)
    d0 = math.sqrt(0.5 * ((q0 / scale_q) ** 2 + (p0 / scale_p) ** 2))
    d1 = math.sqrt(0.5 * ((dq0 / scale_q) ** 2 + (dp0 / scale_p) ** 2))
    h0 = 1e-6 if (d0 < 1e-5 or d1 < 1e-5) else 0.01 * d0 / d1
    h0 = min(h0, t_end)
    q1 = q0 + h0 * dq0
    p1 = p0 + h0 * dp0
    dq1, dp1 = _rhs(sys_id, feps, q1, p1)
    d2 = math.sqrt(0.5 * (((dq1 - dq0) / scale_q) ** 2 + ((dp1 - dp0) / scale_p) ** 2)) / h0
    dm = max(d1, d2)
    if dm <= 1e-15:
        h1 = max(1e-6, h0 * 1e-3)
    else:
        h1 = (0.01 / dm) ** 0.125
    return min(100.0 * h0, h1, t_end)


@njit(cache=True)
def integrate_ode(sys_id, feps, eps2, q0, p0, t_end, rtol, atol, t_eval, record_steps):
    """Adaptive DOP853 integration of one oscillator flow on [0, t_end].

    Steps are clamped so accepted steps land exactly on every requested
    ``t_eval`` time (no interpolation error) and on ``t_end``.  Returns

        (status, t_reached, n_steps,
         step_t, step_q, step_p,      # accepted steps incl. t=0 (if recorded)
         eval_q, eval_p,              # states at t_eval
         drift_max)

    drift_max is the relative energy drift over all accepted steps.
    """
    kq = np.empty(13)
    kp = np.empty(13)
    n_eval = t_eval.size

    cap = 1024 if record_steps else 1
    step_t = np.empty(cap)
    step_q = np.empty(cap)
    step_p = np.empty(cap)
    eval_q = np.empty(n_eval)
    eval_p = np.empty(n_eval)

    t = 0.0
    q = q0
    p = p0
    n_rec = 0
    if record_steps:
        step_t[0] = 0.0
        step_q[0] = q0
        step_p[0] = p0
        n_rec = 1

    i_eval = 0
    while i_eval < n_eval and t_eval[i_eval] <= 0.0:
        eval_q[i_eval] = q0
        eval_p[i_eval] = p0
        i_eval += 1

    e0 = _energy_scaled(sys_id, q0, p0) - feps * q0
    drift_max = 0.0

    dq, dp = _rhs(sys_id, feps, q, p)
    h = _initial_step(sys_id, feps, q0, p0, dq, dp, t_end, rtol, atol)

    n_steps = 0
    while t < t_end:
        if n_steps >= _MAX_STEPS:
            return (STATUS_MAX_STEPS, t, n_steps, step_t[:n_rec], step_q[:n_rec],
                    step_p[:n_rec], eval_q, eval_p, drift_max)
        if h < 1e-14 * max(abs(t), 1.0):
            return (STATUS_STEP_UNDERFLOW, t, n_steps, step_t[:n_rec], step_q[:n_rec],
                    step_p[:n_rec], eval_q, eval_p, drift_max)

        # Clamp to the next output time, then to the end of the span.
        h_try = h
        if i_eval < n_eval and t + h_try >= t_eval[i_eval]:
            h_try = t_eval[i_eval] - t
        if t + h_try > t_end:
            h_try = t_end - t

        kq[0] = dq
        kp[0] = dp
        q_new, p_new = _stages(sys_id, feps, q, p, h_try, kq, kp)
        err = _error_norm(h_try, q, p, q_new, p_new, kq, kp, rtol, atol)
        n_steps += 1

        if err < 1.0:
            t = t + h_try
            q = q_new
            p = p_new
            dq = kq[12]
            dp = kp[12]
            e = _energy_scaled(sys_id, q, p) - feps * q
            d = _drift(sys_id, eps2, e, e0)
            if d > drift_max:
                drift_max = d
            if record_steps:
                if n_rec == step_t.size:
                    new_cap = 2 * step_t.size
                    nt = np.empty(new_cap)
                    nq = np.empty(new_cap)
                    npp = np.empty(new_cap)
                    nt[:n_rec] = step_t
                    nq[:n_rec] = step_q
                    npp[:n_rec] = step_p
                    step_t = nt
                    step_q = nq
                    step_p = npp
                step_t[n_rec] = t
                step_q[n_rec] = q
                step_p[n_rec] = p
                n_rec += 1
            if i_eval < n_eval and t >= t_eval[i_eval]:
                eval_q[i_eval] = q
                eval_p[i_eval] = p
                i_eval += 1
            factor = _MAX_FACTOR if err == 0.0 else min(
                _MAX_FACTOR, max(_MIN_FACTOR, _SAFETY * err ** _ERR_EXP))
            h = h_try * factor
        else:
            h = h_try * max(_MIN_FACTOR, _SAFETY * err ** _ERR_EXP)

    return (STATUS_OK, t, n_steps, step_t[:n_rec], step_q[:n_rec], step_p[:n_rec],
            eval_q, eval_p, drift_max)


@njit(cache=True)
def _fixed_step(sys_id, feps, q, p, h, kq, kp):
    """One un-controlled 8th-order step of size h (used by event bisection)."""
    dq, dp = _rhs(sys_id, feps, q, p)
    kq[0] = dq
    kp[0] = dp
    return _stages(sys_id, feps, q, p, h, kq, kp)


@njit(cache=True)
def find_full_period(q0, p0, rtol, atol, t_cap):
    """Time of first return of pt to 0 from above (one full period of the
    unforced Born flow started at (qt_M, 0)).

    The crossing is bracketed by the adaptive integration and refined by
    bisection with single fixed 8th-order steps from the bracket's left
    state, so the result carries the integrator's accuracy, not an
    interpolant's.  Returns (status, period).
    """
    kq = np.empty(13)
    kp = np.empty(13)
    t = 0.0
    q = q0
    p = p0
    dq, dp = _rhs(SYS_BORN, 0.0, q, p)
    h = _initial_step(SYS_BORN, 0.0, q0, p0, dq, dp, t_cap, rtol, atol)

    n_steps = 0
    while t < t_cap:
        if n_steps >= _MAX_STEPS:
            return STATUS_MAX_STEPS, t
        if h < 1e-14 * max(abs(t), 1.0):
            return STATUS_STEP_UNDERFLOW, t
        h_try = min(h, t_cap - t)
        kq[0] = dq
        kp[0] = dp
        q_new, p_new = _stages(SYS_BORN, 0.0, q, p, h_try, kq, kp)
        err = _error_norm(h_try, q, p, q_new, p_new, kq, kp, rtol, atol)
        n_steps += 1
        if err >= 1.0:
            h = h_try * max(_MIN_FACTOR, _SAFETY * err ** _ERR_EXP)
            continue

        if p > 0.0 and p_new <= 0.0:
            # Bracketed the + -> - crossing inside [t, t + h_try].
            t_lo = 0.0
            t_hi = h_try
            q_lo = q
            p_lo = p
            for _ in range(200):
                if (t_hi - t_lo) <= 1e-13 * (t + t_hi):
                    break
                t_mid = 0.5 * (t_lo + t_hi)
                qm, pm = _fixed_step(SYS_BORN, 0.0, q_lo, p_lo, t_mid - t_lo, kq, kp)
                if pm > 0.0:
                    t_lo = t_mid
                    q_lo = qm
                    p_lo = pm
                else:
                    t_hi = t_mid
            return STATUS_OK, t + 0.5 * (t_lo + t_hi)

        t = t + h_try
        q = q_new
        p = p_new
        dq = kq[12]
        dp = kp[12]
        factor = _MAX_FACTOR if err == 0.0 else min(
            _MAX_FACTOR, max(_MIN_FACTOR, _SAFETY * err ** _ERR_EXP))
        h = h_try * factor

    return STATUS_EVENT_NOT_FOUND, t


@njit(cache=True)
def sturm_count(diag, off2, x):
    """Number of eigenvalues of the symmetric tridiagonal matrix below x.

    LDL^T pivot signs; off2 holds the squared off-diagonal entries.
    """
    count = 0
    q = diag[0] - x
    if q < 0.0:
        count += 1
    for i in range(1, diag.size):
        if q == 0.0:
            q = 1e-300
        q = diag[i] - x - off2[i - 1] / q
        if q < 0.0:
            count += 1
    return count


@njit(cache=True)
def sturm_eigenvalues(diag, off):
    """All eigenvalues of a symmetric tridiagonal matrix, ascending.

    Bisection on the Sturm count, run to ~4 ulp per eigenvalue.  Cost is
    O(n^2 log(1/eps)) which is ample for the sector sizes used here.
    """
    n = diag.size
    off2 = off * off
    lo = diag[0]
    hi = diag[0]
    for i in range(n):
        r = 0.0
        if i > 0:
            r += abs(off[i - 1])
        if i < n - 1:
            r += abs(off[i])
        lo = min(lo, diag[i] - r)
        hi = max(hi, diag[i] + r)
    span = hi - lo
    lo -= 1e-12 * (1.0 + abs(lo)) + 1e-300
    hi += 1e-12 * (1.0 + abs(hi)) + 1e-300

    out = np.empty(n)
    for k in range(n):
        a = lo
        b = hi
        for _ in range(200):
            width_tol = 4.440892098500626e-16 * max(abs(a), abs(b)) + 1e-300
            if (b - a) <= width_tol:
                break
            mid = 0.5 * (a + b)
            if sturm_count(diag, off2, mid) > k:
                b = mid
            else:
                a = mid
        out[k] = 0.5 * (a + b)
        _ = span
    return out


@njit(cache=True)
def recursion_tail_kernel(Bprime, eps2, sector, K, strict_paper):
    """Forward three-term recursion for the sector coefficients c_{m+4k}.

    Seeds c_0 = 1 on state |sector> and iterates k = 0..K-1.  Returns
    (c, log_scale, growth) where c holds the coefficients after progressive
    renormalization (true c_k = c[k] * exp(log_scale_k); only signs and the
    last-ratio growth indicator are scale-free).

    strict_paper=True reproduces the literal published recursion (diagonal
    1/2 + eps^2 u_n - B' and couplings eps^2 v_n); the default uses the
    operator-algebra-consistent diagonal n + 1/2 + eps^2 u_n - B' and
    couplings eps^2 v_n / 8.
    """
    c = np.zeros(K)
    c[0] = 1.0
    log_scale = 0.0
    c_prev = 0.0
    c_cur = 1.0
    for k in range(K - 1):
        n = sector + 4 * k
        u_n = 0.125 + 0.25 * (1.0 + n + n * n)
        v_n = math.sqrt((n + 1.0) * (n + 2.0) * (n + 3.0) * (n + 4.0))
        if k > 0:
            nm = n - 4
            v_prev = math.sqrt((nm + 1.0) * (nm + 2.0) * (nm + 3.0) * (nm + 4.0))
        else:
            v_prev = 0.0
        if strict_paper:
            diag = 0.5 + eps2 * u_n - Bprime
            coup_n = eps2 * v_n
            coup_prev = eps2 * v_prev
        else:
            diag = n + 0.5 + eps2 * u_n - Bprime
            coup_n = eps2 * v_n / 8.0
            coup_prev = eps2 * v_prev / 8.0
        c_next = (diag * c_cur - coup_prev * c_prev) / coup_n
        if abs(c_next) > 1e100:
            s = abs(c_next)
            c_next /= s
            c_cur /= s
            for j in range(k + 1):
                c[j] /= s
            log_scale += math.log(s)
        c_prev = c_cur
        c_cur = c_next
        c[k + 1] = c_next

    if c_prev != 0.0 and c_cur != 0.0:
        growth = math.log(abs(c_cur)) - math.log(abs(c_prev))
    else:
        growth = -math.inf if c_cur == 0.0 else math.inf
    return c, log_scale, growth


def warmup():
    """Force compilation of every kernel (used by the benchmark)."""
    integrate_ode(SYS_BORN, 0.0, 1.0, 0.1, 0.0, 0.5, 1e-8, 1e-8,
                  np.array([0.25]), True)
    find_full_period(0.1, 0.0, 1e-8, 1e-8, 100.0)
    sturm_eigenvalues(np.array([1.0, 2.0, 3.0]), np.array([0.1, 0.1]))
    recursion_tail_kernel(0.5, 0.1, 0, 8, False)
