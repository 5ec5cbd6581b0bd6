import math

import pytest

from schettkit.polyring import Poly, VarSet
from schettkit.schett import (
    ReducedSchett,
    SchettSequence,
    reduced_raw,
    schett_at_ones,
    schett_operator_apply,
    schett_poly,
    schett_reduced,
    variable_names,
)

XYZ = VarSet(("x", "y", "z"))
X = Poly.variable(XYZ, "x")
Y = Poly.variable(XYZ, "y")
Z = Poly.variable(XYZ, "z")


def test_first_polynomials():
    assert schett_poly(0) == X
    assert schett_poly(1) == Y * Z
    assert schett_poly(2) == X * Y**2 + X * Z**2
    assert schett_poly(3) == 4 * X**2 * Y * Z + Y**3 * Z + Y * Z**3


def test_frozen_x4_x5():
    x4 = (
        4 * X**3 * Y**2
        + 4 * X**3 * Z**2
        + X * Y**4
        + 14 * X * Y**2 * Z**2
        + X * Z**4
    )
    x5 = (
        16 * X**4 * Y * Z
        + 44 * X**2 * Y**3 * Z
        + 44 * X**2 * Y * Z**3
        + Y**5 * Z
        + 14 * Y**3 * Z**3
        + Y * Z**5
    )
    assert schett_poly(4) == x4
    assert schett_poly(5) == x5


def test_at_ones_is_factorial():
    for n in range(13):
        assert schett_at_ones(n) == math.factorial(n)


def test_homogeneous_of_degree_n_plus_1():
    for n in range(16):
        p = schett_poly(n)
        assert p.is_homogeneous()
        assert p.degree() == n + 1


def test_nonnegative_integer_coefficients():
    for n in range(16):
        p = schett_poly(n)
        assert p.has_integer_coeffs()
        assert p.is_coeff_nonneg()


def test_symmetry_in_y_and_z():
    for n in range(13):
        p = schett_poly(n)
        assert p.substitute({"y": Z, "z": Y}) == p


def test_higher_order_m3():
    names = variable_names(3)
    assert names == ("x0", "x1", "x2", "x3")
    vs = VarSet(names)
    x0, x1, x2, x3 = (Poly.variable(vs, n) for n in names)
    assert schett_poly(1, m=3) == x1 * x2 * x3
    assert schett_poly(2, m=3) == x0 * (x1**2 * x2**2 + x1**2 * x3**2 + x2**2 * x3**2)
    # degree grows by m - 1 per application
    for n in range(6):
        p = schett_poly(n, m=3)
        assert p.is_homogeneous()
        assert p.degree() == 1 + 2 * n


def test_higher_order_at_ones_regression():
    # values frozen from an independent symbolic-differentiation run
    assert [schett_at_ones(n, m=3) for n in range(5)] == [1, 1, 3, 15, 105]


def test_m1_collapses_to_single_derivative():
    # m = 1 alternates x0 <-> x1
    vs = VarSet(("x0", "x1"))
    assert schett_poly(0, m=1) == Poly.variable(vs, "x0")
    assert schett_poly(5, m=1) == Poly.variable(vs, "x1")


def test_reduced_raw_divides_cleanly():
    assert reduced_raw(2) == Y**2 + Z**2
    assert reduced_raw(3) == 4 * X**2 + Y**2 + Z**2
    assert reduced_raw(4) == (
        4 * X**2 * Y**2 + 4 * X**2 * Z**2 + Y**4 + 14 * Y**2 * Z**2 + Z**4
    )


def test_reduced_squared_forms():
    sq = VarSet(("X", "Y", "Z"))
    Xs, Ys, Zs = (Poly.variable(sq, n) for n in ("X", "Y", "Z"))
    r2 = schett_reduced(2)
    assert r2 == ReducedSchett(index=2, parity="even", k=1, poly=Ys + Zs)
    assert schett_reduced(3).poly == 4 * Xs + Ys + Zs
    assert schett_reduced(4).poly == (
        4 * Xs * Ys + 4 * Xs * Zs + Ys**2 + 14 * Ys * Zs + Zs**2
    )
    # frozen from the independent symbolic run
    assert schett_reduced(5).poly == (
        16 * Xs**2 + 44 * Xs * Ys + 44 * Xs * Zs + Ys**2 + 14 * Ys * Zs + Zs**2
    )


def test_reduced_homogeneity():
    for n in range(2, 22):
        r = schett_reduced(n)
        assert r.k == n // 2
        assert r.poly.is_homogeneous()
        assert r.poly.degree() == r.k
        assert r.poly.is_coeff_nonneg()


def test_even_odd_coincidence_at_x_zero():
    for k in range(1, 9):
        even = schett_reduced(2 * k).poly.substitute({"X": 0})
        odd = schett_reduced(2 * k + 1).poly.substitute({"X": 0})
        assert even == odd


def test_operator_apply_matches_sequence():
    p = schett_poly(6)
    assert schett_operator_apply(p) == schett_poly(7)


def test_sequence_cache_shares_instances():
    assert schett_poly(5) is schett_poly(5)
    seq = SchettSequence(2)
    seq.extend_to(4)
    assert seq[3] == schett_poly(3)


def test_bad_arguments():
    with pytest.raises(ValueError):
        schett_poly(-1)
    with pytest.raises(ValueError):
        variable_names(0)
