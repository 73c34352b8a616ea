"""Born oscillator: classical dynamics, Fock/Weyl quantization, semiclassics.

The package implements the nonlinear oscillator with Hamiltonian
(1/eps^2)[sqrt((1+eps^2 q^2)(1+eps^2 p^2)) - 1]: its classical orbits and
periods, the Fock-basis spectrum of the regularized square operator, a
numeric Weyl quantizer, phase-space-area eigenvalue estimates, and the
comparison of the resulting asymptotic level law against tables of
non-trivial Riemann zeta zeros.
"""

from ._jit import NUMBA_ENABLED
from .core import (
    DomainError,
    EnergyValue,
    LogCoshPoint,
    OscParams,
    ScaledPhasePoint,
    born_hamiltonian,
    forced_stationary_point,
    from_logcosh,
    level_qmax,
    logcosh_hamiltonian,
    to_logcosh,
)
from .classical import (
    IntegrationError,
    PeriodResult,
    Trajectory,
    born_energy_series,
    eom_rhs,
    integrate,
    integrate_logcosh,
    matched_segment,
    period_asymptotic,
    period_elliptic,
    period_numeric,
)
from .quantum import (
    DenseOperator,
    FockTruncation,
    QuadratureError,
    RecursionTail,
    SectorMatrix,
    Spectrum,
    SpectrumEntry,
    b_to_energy,
    born_symbol,
    brute_force_B,
    build_sector,
    eigenvalues_sector,
    energy_to_b,
    recursion_tail,
    spectrum,
    u_coeff,
    v_coeff,
    weyl_quantize_fock,
    weyl_spectrum_born,
)
from .semiclassical import (
    AreaResult,
    ConventionMismatchError,
    WeylEstimate,
    ZeroComparison,
    ZerosFormatError,
    ZerosTable,
    ZETA_EPS2,
    asymptotic_born,
    born_area_asymptotic,
    born_area_elliptic,
    born_area_quadrature,
    compare_zeros,
    load_bundled_zeros,
    load_zeros,
    logcosh_area_quadrature,
    logcosh_asymptotic,
    weyl_solve_born,
    weyl_solve_logcosh,
    zeta_zero_estimate,
)

__version__ = "0.1.0"
