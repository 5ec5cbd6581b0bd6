import json
import random
from fractions import Fraction

import pytest

from schettkit.polyring import (
    MINUS_INFINITY,
    DivisibilityError,
    Poly,
    UnknownVariableError,
    VarOrderError,
    VarSet,
    halve_even_exponents,
)

XYZ = VarSet(("x", "y", "z"))
X = Poly.variable(XYZ, "x")
Y = Poly.variable(XYZ, "y")
Z = Poly.variable(XYZ, "z")


def random_poly(rng, vars=XYZ, max_terms=6, max_exp=4, max_coeff=9):
    terms = {}
    for _ in range(rng.randint(0, max_terms)):
        e = tuple(rng.randint(0, max_exp) for _ in range(len(vars)))
        terms[e] = terms.get(e, 0) + rng.randint(-max_coeff, max_coeff)
    return Poly(vars, terms)


def test_add_cancellation():
    p = X**2 * Y + 2 * Z
    q = -(X**2 * Y) + Z
    assert p + q == 3 * Z


def test_mul_difference_of_squares():
    assert (X + Y) * (X - Y) == X**2 - Y**2


def test_mul_identity_and_zero():
    p = X**2 + Y**2 + Z**2
    assert p * Poly.one(XYZ) == p
    assert p * Poly.zero(XYZ) == 0
    assert (p * 0).is_zero


def test_partial_derivative():
    p = 4 * X**2 * Y * Z + Y**3 * Z + Y * Z**3
    assert p.partial("y") == 4 * X**2 * Z + 3 * Y**2 * Z + Z**3
    assert p.partial("x") == 8 * X * Y * Z
    with pytest.raises(UnknownVariableError):
        p.partial("w")


def test_substitute_all_ones():
    p = 4 * X**2 * Y * Z + Y**3 * Z + Y * Z**3
    assert p.substitute({"x": 1, "y": 1, "z": 1}).as_scalar() == 6


def test_substitute_polynomial_value():
    p = X * Y
    assert p.substitute({"x": Y + Z}) == Y**2 + Y * Z
    # value reintroducing the substituted name
    assert p.substitute({"x": X + 1}) == X * Y + Y


def test_substitute_unknown_name_rejected():
    with pytest.raises(UnknownVariableError):
        (X * Y).substitute({"w": 1})


def test_monomial_div_exact():
    p = 4 * X**2 * Y * Z + Y**3 * Z + Y * Z**3
    assert p.monomial_div({"y": 1, "z": 1}) == 4 * X**2 + Y**2 + Z**2


def test_monomial_div_failure_carries_monomial():
    p = X**2 * Y + Z
    with pytest.raises(DivisibilityError) as info:
        p.monomial_div({"x": 1})
    assert info.value.monomial == (0, 0, 1)


def test_monomial_div_inverts_monomial_mul():
    rng = random.Random(7)
    for _ in range(50):
        p = random_poly(rng)
        e = {"x": rng.randint(0, 2), "y": rng.randint(0, 2), "z": rng.randint(0, 2)}
        m = Poly.monomial(XYZ, e)
        assert (p * m).monomial_div(e) == p


def test_is_coeff_nonneg():
    assert not (X**2 - Y**2).is_coeff_nonneg()
    assert ((X + Y) ** 2).is_coeff_nonneg()
    assert Poly.zero(XYZ).is_coeff_nonneg()


def test_degree_and_zero_sentinel():
    assert (X**2 * Y + Z).degree() == 3
    assert Poly.zero(XYZ).degree() == MINUS_INFINITY
    assert MINUS_INFINITY < 0


def test_canonical_order_graded_lex_descending():
    p = Y * Z**3 + 4 * X**2 * Y * Z + Y**3 * Z + Z
    exps = [e for e, _ in p.canonical_terms()]
    assert exps == [(2, 1, 1), (0, 3, 1), (0, 1, 3), (0, 0, 1)]
    assert str(p) == "4*x^2*y*z + y^3*z + y*z^3 + z"


def test_json_round_trip_bit_exact():
    rng = random.Random(11)
    for _ in range(40):
        p = random_poly(rng)
        text = p.to_json()
        q = Poly.from_json(text)
        assert q == p
        assert q.to_json() == text


def test_json_fraction_coefficients():
    p = Poly(XYZ, {(1, 0, 0): Fraction(1, 2), (0, 0, 0): -3})
    blob = p.to_json_dict()
    coeffs = [t["coeff"] for t in blob["terms"]]
    assert coeffs == ["1/2", "-3"]
    assert Poly.from_json_dict(blob) == p


def test_json_malformed_rejected():
    with pytest.raises(ValueError):
        Poly.from_json(json.dumps({"vars": ["x"], "terms": [{"coeff": "1"}]}))
    with pytest.raises(ValueError):
        Poly.from_json(json.dumps({"vars": ["x"]}))


def test_varset_rejects_duplicates():
    with pytest.raises(VarOrderError):
        VarSet(("x", "x"))


def test_varset_union_order_conflict():
    a = VarSet(("x", "y"))
    b = VarSet(("y", "x"))
    with pytest.raises(VarOrderError):
        a.union(b)
    assert VarSet(("x", "y")).union(VarSet(("y", "z"))).names == ("x", "y", "z")


def test_cross_varset_arithmetic():
    yz = VarSet(("y", "z"))
    q = Poly.variable(yz, "y") * Poly.variable(yz, "z")
    assert X + q == X + Y * Z
    assert (X * q).degree() == 3


def test_integral_fraction_normalizes_to_int():
    p = Poly.const(XYZ, Fraction(3, 2)) * X
    assert not p.has_integer_coeffs()
    assert (2 * p).has_integer_coeffs()
    assert (2 * p) == 3 * X


def test_ring_axioms_random():
    rng = random.Random(2024)
    for _ in range(60):
        p, q, r = (random_poly(rng) for _ in range(3))
        assert p + q == q + p
        assert p * q == q * p
        assert (p + q) + r == p + (q + r)
        assert (p * q) * r == p * (q * r)
        assert p * (q + r) == p * q + p * r
        assert p + Poly.zero(XYZ) == p


def test_product_rule_random():
    rng = random.Random(5150)
    for _ in range(40):
        p, q = random_poly(rng), random_poly(rng)
        for v in ("x", "y", "z"):
            assert (p * q).partial(v) == p.partial(v) * q + p * q.partial(v)


def test_substitution_is_ring_morphism_random():
    rng = random.Random(99)
    for _ in range(25):
        p, q = random_poly(rng), random_poly(rng)
        val = {"x": random_poly(rng, max_terms=2, max_exp=2), "y": 3}
        assert (p + q).substitute(val) == p.substitute(val) + q.substitute(val)
        assert (p * q).substitute(val) == p.substitute(val) * q.substitute(val)


def test_halve_even_exponents():
    p = X**2 * Y**4 + 3 * Z**2
    h = halve_even_exponents(p, ("X", "Y", "Z"))
    assert str(h) == "X*Y^2 + 3*Z"
    with pytest.raises(ValueError):
        halve_even_exponents(X, ("X", "Y", "Z"))


def test_pow_matches_repeated_mul():
    rng = random.Random(31)
    for _ in range(10):
        p = random_poly(rng, max_terms=3, max_exp=2)
        acc = Poly.one(XYZ)
        for k in range(5):
            assert p**k == acc
            acc = acc * p
