"""Schett polynomials and their reduced forms.

The sequence starts at X_0 = x and applies the operator

    D = y z d/dx + x z d/dy + x y d/dz

so X_{n+1} = D X_n.  The (m+1)-variable generalization replaces D with
sum_i (prod_{j != i} x_j) d/dx_i acting on x_0; m = 2 recovers the classical
case with x = x_0, y = x_1, z = x_2.

Even-index polynomials are divisible by x, odd-index ones by y*z.  After
dividing, only even exponents survive, and the reduced polynomial is
rewritten in the squared variables X = x^2, Y = y^2, Z = z^2.  The reduced
forms at indices 2k and 2k+1 are homogeneous of degree k in X, Y, Z.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass

from .polyring import DivisibilityError, Poly, VarSet, halve_even_exponents

CLASSICAL_NAMES = ("x", "y", "z")
SQUARED_NAMES = ("X", "Y", "Z")


class ReductionError(ValueError):
    """A Schett polynomial failed its divisibility or parity structure."""


def variable_names(m: int) -> tuple[str, ...]:
    if m < 1:
        raise ValueError("m must be >= 1")
    if m == 2:
        return CLASSICAL_NAMES
    return tuple(f"x{i}" for i in range(m + 1))


def schett_operator_apply(p: Poly, m: int = 2) -> Poly:
    """One application of sum_i (prod_{j != i} x_j) d/dx_i."""
    names = variable_names(m)
    universe = p.vars.union(VarSet(names))
    out = Poly.zero(universe)
    for i, name in enumerate(names):
        if name not in p.vars:
            continue  # derivative vanishes
        cofactor = Poly.monomial(
            universe, {n: 1 for j, n in enumerate(names) if j != i}
        )
        out = out + cofactor * p.partial(name)
    return out


class SchettSequence:
    """Materialized prefix X_0 ... X_N, grown on demand.

    Extension is serialized behind a lock; readers see a stable prefix, so
    concurrent lookups are safe.
    """

    def __init__(self, m: int = 2):
        self.m = m
        self.names = variable_names(m)
        vars = VarSet(self.names)
        self._vars = vars
        first = Poly.variable(vars, self.names[0])
        self._polys: list[Poly] = [first]
        self._lock = threading.Lock()

    def extend_to(self, n: int) -> None:
        if n < len(self._polys):
            return
        with self._lock:
            while len(self._polys) <= n:
                self._polys.append(schett_operator_apply(self._polys[-1], self.m))

    def __getitem__(self, n: int) -> Poly:
        if n < 0:
            raise ValueError("index must be >= 0")
        self.extend_to(n)
        return self._polys[n]


_sequences: dict[int, SchettSequence] = {}
_sequences_lock = threading.Lock()


def _sequence(m: int) -> SchettSequence:
    with _sequences_lock:
        seq = _sequences.get(m)
        if seq is None:
            seq = _sequences[m] = SchettSequence(m)
    return seq


def schett_poly(n: int, m: int = 2) -> Poly:
    """X_n, or its (m+1)-variable generalization."""
    if n < 0:
        raise ValueError("index must be >= 0")
    return _sequence(m)[n]


def schett_at_ones(n: int, m: int = 2) -> int:
    """X_n evaluated with every variable set to 1."""
    names = variable_names(m)
    value = schett_poly(n, m).substitute({name: 1 for name in names}).as_scalar()
    assert isinstance(value, int)
    return value


def reduced_raw(n: int) -> Poly:
    """X_n divided by x (n even) or by y*z (n odd), still over x, y, z."""
    p = schett_poly(n, 2)
    divisor = {"x": 1} if n % 2 == 0 else {"y": 1, "z": 1}
    try:
        return p.monomial_div(divisor)
    except DivisibilityError as exc:
        raise ReductionError(f"X_{n} is not divisible by {divisor}") from exc


@dataclass(frozen=True)
class ReducedSchett:
    """Reduced Schett polynomial in the squared variables X, Y, Z."""

    index: int
    parity: str  # "even" | "odd"
    k: int  # homogeneity degree: index in {2k, 2k+1}
    poly: Poly


def schett_reduced(n: int) -> ReducedSchett:
    raw = reduced_raw(n)
    try:
        squared = halve_even_exponents(raw, SQUARED_NAMES)
    except ValueError as exc:
        raise ReductionError(f"reduced X_{n} has an odd exponent") from exc
    return ReducedSchett(
        index=n, parity="even" if n % 2 == 0 else "odd", k=n // 2, poly=squared
    )
