import math

import pytest
from scipy.integrate import quad

from bornosc.elliptic import ellipe_agm, ellipk_agm, ellipk_complement


def k_by_quadrature(m):
    val, _ = quad(lambda t: 1.0 / math.sqrt(1.0 - m * math.sin(t) ** 2),
                  0.0, math.pi / 2.0, epsabs=0.0, epsrel=1e-13)
    return val


def e_by_quadrature(m):
    val, _ = quad(lambda t: math.sqrt(1.0 - m * math.sin(t) ** 2),
                  0.0, math.pi / 2.0, epsabs=0.0, epsrel=1e-13)
    return val


@pytest.mark.parametrize("m", [0.0, 1e-8, 0.1, 0.5, 0.9, 0.9999, -0.5, -2.0, -100.0, -1e6])
def test_agm_first_kind_vs_quadrature(m):
    assert ellipk_agm(m) == pytest.approx(k_by_quadrature(m), rel=5e-12)


@pytest.mark.parametrize("m", [0.0, 1e-8, 0.1, 0.5, 0.9, 0.9999, -0.5, -2.0, -100.0, -1e6])
def test_agm_second_kind_vs_quadrature(m):
    assert ellipe_agm(m) == pytest.approx(e_by_quadrature(m), rel=5e-12)


def test_known_values():
    assert ellipk_agm(0.0) == math.pi / 2.0
    assert ellipe_agm(0.0) == math.pi / 2.0
    assert ellipe_agm(1.0) == 1.0
    # frozen: 4 K(1/2) computed by independent quadrature of the defining integral
    assert 4.0 * ellipk_agm(0.5) == pytest.approx(7.41629870920548767, rel=1e-14)


def test_complement_form_matches_direct():
    # moderate mc only: computing 1 - mc in floating point is exact enough
    # here; at tiny mc the direct route itself loses digits (next test)
    for mc in (1.0, 0.7, 1e-3):
        assert ellipk_complement(mc) == pytest.approx(ellipk_agm(1.0 - mc), rel=1e-12)


def test_complement_avoids_cancellation():
    # For m = 1 - 1/(1+u^2) with huge u the direct route cannot even
    # represent m accurately; the complement route must still match the
    # asymptote K ~ log(4/sqrt(mc))
    mc = 1e-14
    k = ellipk_complement(mc)
    assert k == pytest.approx(math.log(4.0 / math.sqrt(mc)), rel=1e-12)


def test_domain_errors():
    with pytest.raises(ValueError):
        ellipk_agm(1.0)
    with pytest.raises(ValueError):
        ellipe_agm(1.5)
    with pytest.raises(ValueError):
        ellipk_complement(0.0)
