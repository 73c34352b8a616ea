"""Quantization of the oscillator through the regularized square operator.

Instead of quantizing H directly, the monotone function

    B = H (1 + eps^2 H / 2)  =  (q^2 + p^2)/2 + (eps^2/2) q^2 p^2

is promoted to the operator B_hat = (p_hat^2 + q_hat^2)/2 +
(eps^2/2) q_hat p_hat^2 q_hat.  In the harmonic-oscillator basis B_hat is
pentadiagonal with couplings only between |n> and |n +/- 4>, so its
spectrum splits into four independent symmetric tridiagonal families
labeled by n mod 4:

    diagonal   n + 1/2 + eps^2 u_n,   u_n = 1/8 + (1 + n + n^2)/4,
    coupling  -eps^2 v_n / 8,         v_n = sqrt((n+1)(n+2)(n+3)(n+4)).

The -eps^2 v_n/8 coupling (rather than -eps^2 v_n) is fixed by the
brute-force ladder-operator construction, which is kept here as the oracle
for the analytic sector matrices.  Eigenvalues B' map back to oscillator
energies via E = (sqrt(1 + 2 eps^2 B') - 1)/eps^2.

A numeric Weyl quantizer provides the alternative route: matrix elements of
an arbitrary phase-space symbol are evaluated against cross-Wigner kernels
of Fock states (Gaussian times generalized Laguerre, phase in q - i p) by
Gauss-Laguerre x trapezoid quadrature in polar coordinates.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np
from scipy.special import gammaln, roots_laguerre

from . import _kernels as K
from .core import DomainError, OscParams

_LAGUERRE_U_CAP = 690.0  # beyond this exp(u) overflows; weights there are ~e^-700


class QuadratureError(RuntimeError):
    """Weyl quadrature failed its quality check; carries the residual."""

    def __init__(self, message: str, residual: float):
        super().__init__(f"{message} (residual {residual:.3e})")
        self.residual = residual


@dataclass(frozen=True)
class FockTruncation:
    """Retain harmonic-oscillator states |0> .. |nmax>."""

    nmax: int

    def __post_init__(self):
        if self.nmax < 8:
            raise ValueError(f"nmax must be at least 8, got {self.nmax}")

    @property
    def dim(self) -> int:
        return self.nmax + 1


@dataclass(frozen=True)
class DenseOperator:
    """Dense real matrix on the truncated Fock space."""

    matrix: np.ndarray
    hermitian: bool
    residual: float = 0.0  # quality measure of the construction, if any

    def __post_init__(self):
        m = self.matrix
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise ValueError("operator matrix must be square")
        if self.hermitian:
            asym = float(np.max(np.abs(m - m.T))) if m.size else 0.0
            if asym > 1e-12 * max(1.0, float(np.max(np.abs(m)))):
                raise ValueError(f"matrix flagged hermitian but asymmetric by {asym}")

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]


@dataclass(frozen=True)
class SectorMatrix:
    """Symmetric tridiagonal matrix of one n mod 4 family, indexed by k."""

    sector: int
    diag: np.ndarray
    offdiag: np.ndarray
    epsilon: float

    def __post_init__(self):
        if self.sector not in (0, 1, 2, 3):
            raise ValueError(f"sector must be in 0..3, got {self.sector}")
        if self.offdiag.size != self.diag.size - 1:
            raise ValueError("offdiag must be one shorter than diag")

    @property
    def dim(self) -> int:
        return self.diag.size

    def fock_indices(self) -> np.ndarray:
        """The oscillator levels n = sector + 4k covered by this sector."""
        return self.sector + 4 * np.arange(self.dim)


@dataclass(frozen=True)
class SpectrumEntry:
    Bprime: float
    sector: int
    k: int
    converged: bool


@dataclass(frozen=True)
class Spectrum:
    """Merged eigenvalues of the four sectors, ascending in B'."""

    entries: tuple[SpectrumEntry, ...]
    epsilon: float
    nmax: int

    def __post_init__(self):
        bp = [e.Bprime for e in self.entries]
        if any(b2 < b1 for b1, b2 in zip(bp, bp[1:])):
            raise ValueError("spectrum entries must be sorted ascending")

    def bprimes(self, converged_only: bool = False) -> np.ndarray:
        return np.array([e.Bprime for e in self.entries
                         if e.converged or not converged_only])

    def energies(self, params: OscParams, converged_only: bool = False) -> np.ndarray:
        return np.array([b_to_energy(e.Bprime, params) for e in self.entries
                         if e.converged or not converged_only])


@dataclass(frozen=True)
class RecursionTail:
    """Coefficients of the eigenstate recursion within one sector.

    ``coefficients`` are jointly rescaled during the run to avoid overflow:
    the true coefficient is coefficients[k] * exp(log_scale_at_k).  The seed
    normalization c_0 = 1 is recorded through log(|c[0]|) + log_scale == 0.
    Signs and the growth indicator log|c_K/c_{K-1}| are scale-free.
    """

    Bprime: float
    coefficients: np.ndarray
    growth_indicator: float
    log_scale: float
    sector: int
    strict_paper: bool

    def __post_init__(self):
        c0 = abs(float(self.coefficients[0]))
        if not math.isclose(math.log(c0) + self.log_scale, 0.0, abs_tol=1e-9):
            raise ValueError("seed normalization c_0 = 1 violated")

    @property
    def tail_sign(self) -> float:
        return math.copysign(1.0, self.coefficients[-1])


def u_coeff(n: int) -> float:
    """Diagonal correction u_n = 1/8 + (1 + n + n^2)/4."""
    if n < 0:
        raise DomainError(f"u_n needs n >= 0, got {n}")
    return 0.125 + 0.25 * (1.0 + n + n * n)


def v_coeff(n: int) -> float:
    """Coupling magnitude v_n = sqrt((n+1)(n+2)(n+3)(n+4)); 0 below the ground state."""
    if n < 0:
        return 0.0
    return math.sqrt((n + 1.0) * (n + 2.0) * (n + 3.0) * (n + 4.0))


def ladder_lowering(dim: int, dtype=np.float64) -> np.ndarray:
    """Annihilation operator on the truncated basis: <n-1|a|n> = sqrt(n)."""
    a = np.zeros((dim, dim), dtype=dtype)
    for n in range(1, dim):
        a[n - 1, n] = math.sqrt(n)
    return a


def brute_force_B(params: OscParams, trunc: FockTruncation) -> DenseOperator:
    """B_hat assembled by explicit ladder-operator matrix products.

    This is the oracle the analytic sector matrices are validated against;
    it is built in extended precision so its entries are trustworthy at the
    1e-12 level even for nmax ~ 1e3.  Rows/columns within 2 of the
    truncation edge differ from the infinite-matrix entries (the products
    reach above |nmax>).
    """
    if trunc.nmax > 10_000:
        raise ValueError("dense construction is meant for nmax <= 1e4")
    dim = trunc.dim
    a = ladder_lowering(dim, dtype=np.longdouble)
    q = (a + a.T) / np.longdouble(math.sqrt(2.0))
    ip = (a - a.T) / np.longdouble(math.sqrt(2.0))  # i*p is real: (a - a^dag)/sqrt(2)
    p2 = -(ip @ ip)
    h0 = 0.5 * (p2 + q @ q)
    qppq = q @ p2 @ q
    b = h0 + (np.longdouble(params.eps2) / 2.0) * qppq
    b = (b + b.T) / 2.0
    return DenseOperator(matrix=b.astype(np.float64), hermitian=True)


def build_sector(params: OscParams, m: int, size: int) -> SectorMatrix:
    """Analytic tridiagonal matrix of sector m with `size` rows (k = 0..size-1)."""
    if m not in (0, 1, 2, 3):
        raise ValueError(f"sector must be in 0..3, got {m}")
    if size < 2:
        raise ValueError(f"sector needs at least 2 rows, got {size}")
    n = m + 4 * np.arange(size)
    diag = n + 0.5 + params.eps2 * (0.125 + 0.25 * (1.0 + n + n * n))
    nn = n[:-1].astype(float)
    off = -params.eps2 * np.sqrt((nn + 1) * (nn + 2) * (nn + 3) * (nn + 4)) / 8.0
    return SectorMatrix(sector=m, diag=diag, offdiag=off, epsilon=params.epsilon)


def sector_size(nmax: int, m: int) -> int:
    """Number of retained levels n <= nmax with n = m (mod 4)."""
    if nmax < m:
        return 0
    return (nmax - m) // 4 + 1


def assemble_sectors(params: OscParams, trunc: FockTruncation) -> np.ndarray:
    """Embed the four analytic sector matrices into the full dense basis."""
    dim = trunc.dim
    full = np.zeros((dim, dim))
    for m in range(4):
        sm = build_sector(params, m, sector_size(trunc.nmax, m))
        idx = sm.fock_indices()
        full[idx, idx] = sm.diag
        full[idx[:-1], idx[1:]] = sm.offdiag
        full[idx[1:], idx[:-1]] = sm.offdiag
    return full


def eigenvalues_sector(sm: SectorMatrix, tol: float = 1e-13) -> np.ndarray:
    """All eigenvalues of a sector matrix, ascending.

    Sturm-sequence bisection; every eigenvalue is resolved to a few ulp,
    well inside the tol * ||A|| contract for any tol >= 1e-13.
    """
    if tol < 1e-13:
        raise ValueError(f"tol below the double-precision floor: {tol}")
    return K.sturm_eigenvalues(np.ascontiguousarray(sm.diag, dtype=float),
                               np.ascontiguousarray(sm.offdiag, dtype=float))


def spectrum(params: OscParams, trunc: FockTruncation, tol: float = 1e-8,
             only_converged: bool = True) -> Spectrum:
    """Merged four-sector spectrum with truncation-convergence flags.

    An eigenvalue is converged when doubling nmax moves it by less than
    tol; reported values come from the requested truncation.
    """
    entries = []
    for m in range(4):
        size = sector_size(trunc.nmax, m)
        size2 = sector_size(2 * trunc.nmax, m)
        ev = eigenvalues_sector(build_sector(params, m, size))
        ev2 = eigenvalues_sector(build_sector(params, m, size2))
        for k, b in enumerate(ev):
            conv = abs(b - ev2[k]) < tol
            if conv or not only_converged:
                entries.append(SpectrumEntry(Bprime=float(b), sector=m, k=k, converged=conv))
    entries.sort(key=lambda e: e.Bprime)
    return Spectrum(entries=tuple(entries), epsilon=params.epsilon, nmax=trunc.nmax)


def b_to_energy(Bprime: float, params: OscParams) -> float:
    """Invert B = E (1 + eps^2 E / 2): E = (sqrt(1 + 2 eps^2 B') - 1)/eps^2.

    Monotone increasing; evaluated in the cancellation-free form
    2 B' / (1 + sqrt(1 + 2 eps^2 B')).
    """
    radicand = 1.0 + 2.0 * params.eps2 * Bprime
    if radicand < 0.0:
        raise DomainError(f"1 + 2 eps^2 B' = {radicand} is negative")
    return 2.0 * Bprime / (1.0 + math.sqrt(radicand))


def energy_to_b(E: float, params: OscParams) -> float:
    """B = E (1 + eps^2 E / 2), the forward map inverted by b_to_energy."""
    return E * (1.0 + 0.5 * params.eps2 * E)


def recursion_tail(Bprime: float, params: OscParams, sector: int, size: int,
                   strict_paper: bool = False) -> RecursionTail:
    """Run the three-term coefficient recursion for `size` levels of a sector.

    The tail coefficient, as a function of B', is proportional to the
    characteristic polynomial of the size x size sector matrix, so its sign
    changes bracket the truncated eigenvalues.  With strict_paper=True the
    literal published recursion is used instead of the operator-consistent
    one (kept for comparison; its spectrum is not the oscillator's).
    """
    if sector not in (0, 1, 2, 3):
        raise ValueError(f"sector must be in 0..3, got {sector}")
    if size < 4:
        raise ValueError(f"need at least 4 recursion rows, got {size}")
    c, log_scale, growth = K.recursion_tail_kernel(
        float(Bprime), params.eps2, sector, size, strict_paper)
    return RecursionTail(Bprime=float(Bprime), coefficients=c, growth_indicator=growth,
                         log_scale=log_scale, sector=sector, strict_paper=strict_paper)


# ---------------------------------------------------------------------------
# Weyl quantization on the truncated Fock basis
# ---------------------------------------------------------------------------

def _wigner_radial(n_low: int, d: int, u: np.ndarray) -> np.ndarray:
    """Normalized radial factor of the cross-Wigner kernel of |n><n+d|.

    phi_n^d(u) = (-1)^n sqrt(n!/(n+d)!) (2u)^(d/2) e^(-u) L_n^d(2u), evaluated
    by the three-term recurrence in n with the normalization folded in so
    every term stays O(1) (no overflow for any n, d, u used here).
    Returns the orders 0..n_low stacked as shape (n_low+1, len(u)).
    """
    out = np.empty((n_low + 1, u.size))
    log0 = -u if d == 0 else 0.5 * (d * np.log(2.0 * u) - gammaln(d + 1.0)) - u
    phi_prev = np.zeros_like(u)
    phi = np.exp(log0)
    out[0] = phi
    for n in range(n_low):
        a = 1.0 / math.sqrt((n + 1.0) * (n + 1.0 + d))
        b = math.sqrt(n * (n + d)) * a
        phi, phi_prev = a * (2.0 * u - (2.0 * n + 1.0 + d)) * phi - b * phi_prev, phi
        out[n + 1] = phi
    return out


def weyl_quantize_fock(symbol: Callable[[np.ndarray, np.ndarray], np.ndarray],
                       params: OscParams, trunc: FockTruncation,
                       n_radial: Optional[int] = None,
                       n_angular: Optional[int] = None,
                       residual_tol: float = 1e-8) -> DenseOperator:
    """Weyl-quantize a real phase-space symbol A(q, p) on the truncated basis.

    Matrix elements <m|A_hat|n> are integrals of the symbol against the
    cross-Wigner kernel of |n><m| (normalized so the symbol 1 maps to the
    identity).  The integral is done in polar coordinates: Gauss-Laguerre in
    u = q^2 + p^2 (the kernel's Gaussian is the weight) and a uniform
    angular grid resolved by FFT, which is spectrally accurate for smooth
    symbols.  ``symbol`` must accept numpy arrays.

    The constructed matrix is checked for hermiticity and realness; if the
    combined residual exceeds residual_tol a QuadratureError is raised.
    """
    nmax = trunc.nmax
    if nmax > 60:
        raise ValueError("weyl quantizer supports nmax <= 60")
    n_r = n_radial if n_radial is not None else max(32, 4 * nmax)
    n_t = n_angular if n_angular is not None else max(64, 8 * (nmax + 1))
    if n_t < 2 * (nmax + 1):
        raise ValueError(f"n_angular={n_t} cannot resolve harmonics up to {nmax}")
    _ = params  # the symbol closes over eps; kept for API uniformity

    u, w = roots_laguerre(n_r)
    keep = (w > 0.0) & (u < _LAGUERRE_U_CAP)
    u = u[keep]
    w_scaled = w[keep] * np.exp(u)  # weights for integrals without the e^-u factor

    theta = 2.0 * math.pi * np.arange(n_t) / n_t
    r = np.sqrt(u)
    vals = symbol(np.outer(r, np.cos(theta)), np.outer(r, np.sin(theta)))
    harm = np.fft.fft(np.asarray(vals, dtype=float), axis=1) / n_t  # c_d(u_j)

    dim = nmax + 1
    op = np.zeros((dim, dim), dtype=complex)
    for d in range(nmax + 1):
        phi = _wigner_radial(nmax - d, d, u)  # includes e^-u
        radial = phi * w_scaled  # (n_low+1, nodes)
        cp = harm[:, d]
        cm = harm[:, (-d) % n_t]
        for n in range(nmax - d + 1):
            op[n, n + d] = radial[n] @ cp
            if d > 0:
                op[n + d, n] = radial[n] @ cm

    asym = float(np.max(np.abs(op - op.conj().T)))
    imag = float(np.max(np.abs(op.imag)))
    scale = max(1.0, float(np.max(np.abs(op.real))))
    residual = max(asym, imag) / scale
    if residual > residual_tol:
        raise QuadratureError("weyl quadrature failed the hermiticity check", residual)
    mat = 0.5 * (op.real + op.real.T)
    return DenseOperator(matrix=mat, hermitian=True, residual=residual)


def born_symbol(params: OscParams) -> Callable[[np.ndarray, np.ndarray], np.ndarray]:
    """The oscillator Hamiltonian as a vectorized phase-space symbol of (q, p)."""
    eps2 = params.eps2

    def h(q, p):
        a = eps2 * np.square(q)
        b = eps2 * np.square(p)
        return np.expm1(0.5 * np.log1p(a + b + a * b)) / eps2

    return h


def weyl_spectrum_born(params: OscParams, trunc: FockTruncation,
                       tol: float = 1e-8) -> Spectrum:
    """Eigen-energies of the Weyl-quantized oscillator Hamiltonian.

    The Weyl matrix of H inherits the n mod 4 block structure (the symbol is
    invariant under the quarter rotation (q, p) -> (-p, q)), so each block
    is diagonalized separately and entries carry sector labels.  Convergence
    flags compare against a basis smaller by 8 states; values are energies
    E_n, directly comparable to b_to_energy of the sector spectrum and to
    the semiclassical estimates.  Entry Bprime stores E (1 + eps^2 E / 2).
    """
    if trunc.nmax < 16:
        raise ValueError("weyl spectrum needs nmax >= 16 for the convergence check")
    op = weyl_quantize_fock(born_symbol(params), params, trunc)
    op_small = weyl_quantize_fock(born_symbol(params), params, FockTruncation(trunc.nmax - 8))

    entries = []
    for m in range(4):
        idx = np.arange(m, trunc.nmax + 1, 4)
        idx_s = np.arange(m, trunc.nmax - 8 + 1, 4)
        ev = np.linalg.eigvalsh(op.matrix[np.ix_(idx, idx)])
        ev_s = np.linalg.eigvalsh(op_small.matrix[np.ix_(idx_s, idx_s)])
        for k, e in enumerate(ev):
            conv = k < ev_s.size and abs(e - ev_s[k]) < tol
            if conv:
                entries.append(SpectrumEntry(Bprime=energy_to_b(float(e), params),
                                             sector=m, k=k, converged=True))
    entries.sort(key=lambda e: e.Bprime)
    return Spectrum(entries=tuple(entries), epsilon=params.epsilon, nmax=trunc.nmax)
