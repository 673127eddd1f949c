"""Riccati solver: golden tables, residuals, structure invariants."""
import pytest

import laxforge.tables as T
from laxforge.ncpoly import scalarize
from laxforge.riccati import (gamma_residual, riccati_residual, solve_gamma,
                              solve_w_z)


@pytest.fixture(scope="module")
def scalar5():
    return solve_w_z(5, "scalar")


def test_w_goldens(scalar5):
    for k in range(1, 6):
        e12, e21 = T.w_scalar(k)
        assert scalar5.w(k).entries[0][1] == e12, f"W^({k}) 12-entry"
        assert scalar5.w(k).entries[1][0] == e21, f"W^({k}) 21-entry"


def test_z_goldens(scalar5):
    for k in range(1, 5):
        e11, e22 = T.z_scalar(k)
        assert scalar5.z(k).entries[0][0] == e11, f"Z^({k}) 11-entry"
        assert scalar5.z(k).entries[1][1] == e22, f"Z^({k}) 22-entry"


def test_w5_transcription_discrepancy(scalar5):
    """The published order-5 entries differ by exactly the recorded defects."""
    from laxforge.parser import parse_poly
    t12, t21 = T.w5_transcription()
    d12 = scalar5.w(5).entries[0][1] - t12
    d21 = scalar5.w(5).entries[1][0] - t21
    assert d12 == parse_poly("-4*uh*pi*pih")
    assert d21 == parse_poly("4*u*pi*pih")


def test_anti_diagonal_and_diagonal_split(scalar5):
    for k in range(1, 6):
        assert scalar5.w(k).is_anti_diagonal()
    for k in range(1, 5):
        assert scalar5.z(k).is_diagonal()
    m = solve_w_z(4, "matrix")
    for k in range(1, 5):
        assert m.w(k).is_anti_diagonal()
    for k in range(1, 4):
        assert m.z(k).is_diagonal()


def test_residual_vanishes_below_truncation(scalar5):
    assert riccati_residual(scalar5).is_zero
    assert riccati_residual(solve_w_z(4, "matrix")).is_zero


def test_order_validation():
    with pytest.raises(ValueError):
        solve_w_z(0)
    with pytest.raises(ValueError):
        solve_gamma(-1)


def test_gamma_goldens():
    g = solve_gamma(4)
    for k in range(1, 5):
        assert g.gamma(k) == T.gamma_matrix(k), f"order {k}"


def test_gamma_residuals():
    assert gamma_residual(solve_gamma(5)).is_zero
    assert gamma_residual(solve_gamma(4, "gamma_hat")).is_zero


def test_gamma_scalar_equals_w21(scalar5):
    """Scalar specialization of the ratio equals the 21-entry exactly.

    The two recursions coincide termwise once products commute, so the
    order-1 dictionary is the identity: no sign or ordering adjustment.
    """
    g = solve_gamma(5)
    for k in range(1, 6):
        assert scalarize(g.gamma(k)) == scalar5.w(k).entries[1][0]


def test_z_lambda2_metadata(scalar5):
    from fractions import Fraction
    half = scalar5.z_lam2_density
    assert half.is_diagonal()
    assert half.entries[0][0].constant_term().re == Fraction(1, 2)
    assert half.entries[1][1].constant_term().re == Fraction(-1, 2)
