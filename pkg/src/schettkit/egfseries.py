"""Truncated power series with polynomial coefficients.

Two flavors, both exact and immutable:

  EgfSeries   exponential: the series is sum c_n t^n / n!; products use the
              binomial convolution
  OrdSeries   ordinary, in a formal variable s

Every operation records the order through which its result is valid and
never consults coefficients beyond it.

On top of these the module builds the series the Schett theory needs:

  solve_G          G = Sn(t; x, y, z), the odd solution of G' = A(G) with
                   A(s) = [(1+x^2 s^2)(1+y^2 s^2)(1+z^2 s^2)]^(1/2).
                   Squaring and differentiating once turns this into the
                   square-root-free ODE G'' = e1 G + 2 e2 G^3 + 3 e3 G^5
                   (e_i the elementary symmetric functions of x^2, y^2, z^2),
                   which gives an integer coefficient recurrence.  The
                   squared first-order form (G')^2 = B(G) is kept as a
                   testable invariant.
  egf_from_schett  the even / odd reduced Schett EGFs F and F*G
  riordan_submatrix
                   the even-even / odd-odd submatrix of the checkerboard
                   exponential Riordan array R[F, G], entries
                   (n!/k!) [t^n] F G^k restricted to one parity
  thm21_production reconstruction of the production matrices from the
                   B, C, D series of the checkerboard production-matrix
                   theorem, computed entirely in the polynomial ring via
                   C = 2 s B R and D = s^2 B R^2 + B R + (s/2) B' R + s B R'
                   where Z = s A R and B = A^2 (no square roots appear)

Intermediate series coefficients are signed (the 1/(1+u s^2) geometric
expansions alternate); only assembled production-matrix entries are expected
nonnegative, and only by the theorems, never by construction.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass
from fractions import Fraction
from math import comb, factorial
from typing import Literal

from .matrixkit import PolyMatrix, TruncationError
from .polyring import Poly, VarSet

RAW_NAMES = ("x", "y", "z")

Parity = Literal["even", "odd"]


class ValuationError(ValueError):
    """Series division impossible within the truncation discipline."""


def _check_parity(parity: str) -> int:
    if parity == "even":
        return 0
    if parity == "odd":
        return 1
    raise ValueError(f"parity must be 'even' or 'odd', got {parity!r}")


@dataclass(frozen=True, eq=False)
class EgfSeries:
    """Exponential generating function sum c_n t^n / n!, exact through order."""

    vars: VarSet
    order: int
    coeffs: tuple[Poly, ...]  # length order + 1

    def __post_init__(self):
        if self.order < 0 or len(self.coeffs) != self.order + 1:
            raise ValueError("coefficient list does not match order")

    @classmethod
    def from_coeffs(cls, vars: VarSet, coeffs, order: int | None = None) -> "EgfSeries":
        coeffs = list(coeffs)
        if order is None:
            order = len(coeffs) - 1
        zero = Poly.zero(vars)
        coeffs += [zero] * (order + 1 - len(coeffs))
        return cls(vars, order, tuple(coeffs[: order + 1]))

    def coeff(self, n: int) -> Poly:
        if n > self.order:
            raise TruncationError(f"coefficient {n} beyond valid order {self.order}")
        return self.coeffs[n]

    def valuation(self) -> int | None:
        """Index of the first nonzero coefficient, None if zero through order."""
        for n, c in enumerate(self.coeffs):
            if not c.is_zero:
                return n
        return None

    def truncate(self, order: int) -> "EgfSeries":
        if order > self.order:
            raise TruncationError(f"cannot extend order {self.order} to {order}")
        return EgfSeries(self.vars, order, self.coeffs[: order + 1])

    def add(self, other: "EgfSeries") -> "EgfSeries":
        order = min(self.order, other.order)
        vars = self.vars.union(other.vars)
        return EgfSeries(
            vars,
            order,
            tuple(a + b for a, b in zip(self.coeffs[: order + 1], other.coeffs)),
        )

    def scale(self, factor) -> "EgfSeries":
        return EgfSeries(self.vars, self.order, tuple(c * factor for c in self.coeffs))

    def mul(self, other: "EgfSeries") -> "EgfSeries":
        """Binomial convolution: c_n = sum_k C(n,k) a_k b_{n-k}."""
        order = min(self.order, other.order)
        vars = self.vars.union(other.vars)
        zero = Poly.zero(vars)
        a, b = self.coeffs, other.coeffs
        out = []
        for n in range(order + 1):
            acc = zero
            for k in range(n + 1):
                ca, cb = a[k], b[n - k]
                if ca.is_zero or cb.is_zero:
                    continue
                acc = acc + comb(n, k) * (ca * cb)
            out.append(acc)
        return EgfSeries(vars, order, tuple(out))

    def derivative(self) -> "EgfSeries":
        if self.order == 0:
            raise TruncationError("cannot differentiate an order-0 series")
        return EgfSeries(self.vars, self.order - 1, self.coeffs[1:])

    def divide(self, other: "EgfSeries") -> "EgfSeries":
        """Exact truncated quotient; requires unit scalar leading coefficient.

        other must be t^v * (unit + higher); self must vanish through t^v.
        The result order drops by v.
        """
        v = other.valuation()
        if v is None:
            raise ValuationError("division by a series that is zero through its order")
        lead = other.coeffs[v]
        try:
            unit = Fraction(lead.as_scalar())
        except ValueError:
            raise ValuationError("leading coefficient is not a scalar unit") from None
        if any(not self.coeffs[j].is_zero for j in range(min(v, self.order + 1))):
            raise ValuationError(
                f"valuation mismatch: numerator has a term below t^{v}"
            )
        order = min(self.order, other.order) - v
        if order < 0:
            raise ValuationError("quotient order would be negative")
        vars = self.vars.union(other.vars)
        # work on ordinary coefficients of the t^v-shifted series
        a = [self.coeffs[v + j] * Fraction(1, factorial(v + j)) for j in range(order + 1)]
        b = [other.coeffs[v + j] * Fraction(1, factorial(v + j)) for j in range(order + 1)]
        inv = 1 / unit
        q: list[Poly] = []
        for j in range(order + 1):
            acc = a[j]
            for i in range(1, j + 1):
                if b[i].is_zero or q[j - i].is_zero:
                    continue
                acc = acc - b[i] * q[j - i]
            q.append(acc * inv)
        return EgfSeries(
            vars, order, tuple(q[j] * factorial(j) for j in range(order + 1))
        )

    def to_json_dict(self) -> dict:
        return {
            "kind": "egf",
            "order": self.order,
            "coeffs": [c.to_json_dict() for c in self.coeffs],
        }


@dataclass(frozen=True, eq=False)
class OrdSeries:
    """Ordinary power series sum c_j s^j, exact through order."""

    vars: VarSet
    order: int
    coeffs: tuple[Poly, ...]

    def __post_init__(self):
        if self.order < 0 or len(self.coeffs) != self.order + 1:
            raise ValueError("coefficient list does not match order")

    @classmethod
    def from_coeffs(cls, vars: VarSet, coeffs, order: int | None = None) -> "OrdSeries":
        coeffs = list(coeffs)
        if order is None:
            order = len(coeffs) - 1
        zero = Poly.zero(vars)
        coeffs += [zero] * (order + 1 - len(coeffs))
        return cls(vars, order, tuple(coeffs[: order + 1]))

    def coeff(self, j: int) -> Poly:
        if j > self.order:
            raise TruncationError(f"coefficient {j} beyond valid order {self.order}")
        return self.coeffs[j]

    def add(self, other: "OrdSeries") -> "OrdSeries":
        order = min(self.order, other.order)
        vars = self.vars.union(other.vars)
        return OrdSeries(
            vars,
            order,
            tuple(a + b for a, b in zip(self.coeffs[: order + 1], other.coeffs)),
        )

    def scale(self, factor) -> "OrdSeries":
        return OrdSeries(self.vars, self.order, tuple(c * factor for c in self.coeffs))

    def mul(self, other: "OrdSeries") -> "OrdSeries":
        order = min(self.order, other.order)
        vars = self.vars.union(other.vars)
        zero = Poly.zero(vars)
        out = [zero] * (order + 1)
        for i, ci in enumerate(self.coeffs[: order + 1]):
            if ci.is_zero:
                continue
            for j in range(order + 1 - i):
                cj = other.coeffs[j]
                if cj.is_zero:
                    continue
                out[i + j] = out[i + j] + ci * cj
        return OrdSeries(vars, order, tuple(out))

    def derivative(self) -> "OrdSeries":
        if self.order == 0:
            raise TruncationError("cannot differentiate an order-0 series")
        return OrdSeries(
            self.vars,
            self.order - 1,
            tuple((j + 1) * self.coeffs[j + 1] for j in range(self.order)),
        )

    def shift(self, k: int) -> "OrdSeries":
        """Multiply by s^k (all recorded coefficients remain exact)."""
        if k < 0:
            raise ValueError("shift must be nonnegative")
        zero = Poly.zero(self.vars)
        return OrdSeries(
            self.vars, self.order + k, (zero,) * k + self.coeffs
        )

    def to_json_dict(self) -> dict:
        return {
            "kind": "ord",
            "order": self.order,
            "coeffs": [c.to_json_dict() for c in self.coeffs],
        }


# ---------------------------------------------------------------------------
# G = Sn and the Schett EGFs


def _sym_polys() -> tuple[VarSet, Poly, Poly, Poly]:
    vars = VarSet(RAW_NAMES)
    x2 = Poly.monomial(vars, {"x": 2})
    y2 = Poly.monomial(vars, {"y": 2})
    z2 = Poly.monomial(vars, {"z": 2})
    e1 = x2 + y2 + z2
    e2 = x2 * y2 + x2 * z2 + y2 * z2
    e3 = x2 * y2 * z2
    return vars, e1, e2, e3


class _GSolver:
    """Grows the EGF coefficient list of G; results are shared and cached."""

    def __init__(self):
        self.vars, self.e1, self.e2, self.e3 = _sym_polys()
        one = Poly.one(self.vars)
        zero = Poly.zero(self.vars)
        self.g = [zero, one]  # G(0) = 0, G'(0) = 1
        self.g3 = [zero]  # EGF coefficients of G^3
        self.g5 = [zero]  # EGF coefficients of G^5
        self._g2 = [zero]  # EGF coefficients of G^2 (internal)
        self._lock = threading.Lock()

    def _conv(self, u: list[Poly], v: list[Poly], n: int) -> Poly:
        acc = Poly.zero(self.vars)
        for i in range(n + 1):
            ci, cj = u[i], v[n - i]
            if ci.is_zero or cj.is_zero:
                continue
            acc = acc + comb(n, i) * (ci * cj)
        return acc

    def extend_to(self, m: int) -> None:
        with self._lock:
            while len(self.g) <= m:
                n = len(self.g) - 2  # next unknown is g_{n+2}
                # power series of G^2, G^3 = G*G^2, G^5 = G^2*G^3 up to index n
                while len(self._g2) <= n:
                    j = len(self._g2)
                    self._g2.append(self._conv(self.g, self.g, j))
                while len(self.g3) <= n:
                    j = len(self.g3)
                    self.g3.append(self._conv(self.g, self._g2, j))
                while len(self.g5) <= n:
                    j = len(self.g5)
                    self.g5.append(self._conv(self._g2, self.g3, j))
                nxt = (
                    self.e1 * self.g[n]
                    + 2 * self.e2 * self.g3[n]
                    + 3 * self.e3 * self.g5[n]
                )
                self.g.append(nxt)


_g_solver = _GSolver()


def solve_G(M: int) -> EgfSeries:
    """The odd EGF G = Sn with G(0) = 0, G'(0) = 1, through order M.

    Coefficients are integer polynomials; the generating recurrence is
    g_{n+2} = e1 g_n + 2 e2 [G^3]_n + 3 e3 [G^5]_n.
    """
    if M < 1:
        raise ValueError("order must be >= 1")
    _g_solver.extend_to(M)
    coeffs = tuple(_g_solver.g[: M + 1])
    assert all(c.has_integer_coeffs() for c in coeffs)
    return EgfSeries(_g_solver.vars, M, coeffs)


def egf_from_schett(parity: Parity, M: int) -> EgfSeries:
    """EGF of the reduced Schett polynomials of one index parity.

    even: sum Xhat_{2n} t^{2n}/(2n)!; odd: sum Xhat_{2n+1} t^{2n+1}/(2n+1)!.
    Coefficients are in the raw variables (monomials in x^2, y^2, z^2).
    """
    from .schett import reduced_raw

    offset = _check_parity(parity)
    vars = VarSet(RAW_NAMES)
    zero = Poly.zero(vars)
    coeffs = [zero] * (M + 1)
    for n in range(M + 1):
        if n % 2 == offset:
            coeffs[n] = reduced_raw(n)
    return EgfSeries(vars, M, tuple(coeffs))


def riordan_submatrix(parity: Parity, n_max: int, M: int) -> PolyMatrix:
    """One-parity submatrix of the checkerboard Riordan array R[F, G].

    Entries (n, k) for 0 <= n, k <= n_max:
      even: ((2n)!/(2k)!)   [t^{2n}]   F G^{2k}
      odd:  ((2n+1)!/(2k+1)!) [t^{2n+1}] (F G) G^{2k}
    with F (resp. F G) the even (resp. odd) reduced Schett EGF and G from
    solve_G.  Needs M >= 2 n_max + 1 so the top coefficient is exact.
    """
    offset = _check_parity(parity)
    if M < 2 * n_max + 1:
        raise TruncationError(
            f"order {M} too small for indices through {n_max}; need {2 * n_max + 1}"
        )
    G = solve_G(M)
    G2 = G.mul(G)
    cur = egf_from_schett(parity, M)
    size = n_max + 1
    zero = Poly.zero(cur.vars)
    cols: list[list[Poly]] = []
    for k in range(size):
        scale = Fraction(1, factorial(2 * k + offset))
        col = [
            cur.coeff(2 * n + offset) * scale if n >= k else zero for n in range(size)
        ]
        cols.append(col)
        if k + 1 < size:
            cur = cur.mul(G2)
    rows = tuple(tuple(cols[k][n] for k in range(size)) for n in range(size))
    return PolyMatrix(
        entries=rows,
        source=f"riordan-{parity}",
        exact_block=size,
        lower_bandwidth=None,
        upper_bandwidth=0,
    )


# ---------------------------------------------------------------------------
# Production matrices from the checkerboard B/C/D pipeline


def _rational_factor(case: Parity, vars: VarSet, M: int) -> OrdSeries:
    """R(s) with Z = s A R: even case y^2/(1+y^2 s^2) + z^2/(1+z^2 s^2),
    odd case x^2/(1+x^2 s^2), via alternating geometric expansion."""
    zero = Poly.zero(vars)
    coeffs = [zero] * (M + 1)
    if case == "even":
        bases = (Poly.monomial(vars, {"y": 2}), Poly.monomial(vars, {"z": 2}))
    else:
        bases = (Poly.monomial(vars, {"x": 2}),)
    for u in bases:
        power = u
        for j in range(0, M + 1, 2):
            coeffs[j] = coeffs[j] + (power if (j // 2) % 2 == 0 else -power)
            power = power * u
    return OrdSeries(vars, M, tuple(coeffs))


def thm21_production(case: Parity, n_max: int) -> PolyMatrix:
    """Assemble the production matrix from the B, C, D series.

    B = A^2 = (1+x^2 s^2)(1+y^2 s^2)(1+z^2 s^2) exactly; with Z = s A R,
    C = 2 A Z = 2 s B R and D = Z^2 + A Z' = s^2 B R^2 + B R + (s/2) B' R
    + s B R'.  Writing B = sum b_m s^{2m}, C = sum c_m s^{2m+1},
    D = sum d_m s^{2m}, the entries are

      even: ((2n)!/(2k)!)  [2k(n+k) b_{n-k+1} + 2k c_{n-k} + d_{n-k}]
      odd:  ((2n+1)!/(2k+1)!) [(2k+1)(n+k+1) b_{n-k+1} + (2k+1) c_{n-k}
                               + d_{n-k}]

    (negative subscripts read as zero).  The result must equal the band
    builders entrywise; callers compare, this function only assembles.
    """
    offset = _check_parity(case)
    if n_max < 1:
        raise ValueError("n_max must be >= 1")
    M = 2 * n_max + 2
    vars, e1, e2, e3 = _sym_polys()
    zero, one = Poly.zero(vars), Poly.one(vars)
    B = OrdSeries.from_coeffs(vars, [one, zero, e1, zero, e2, zero, e3], M)
    R = _rational_factor(case, vars, M)
    BR = B.mul(R)
    C = BR.shift(1).scale(2)
    D = (
        BR.mul(R).shift(2)
        .add(BR)
        .add(B.derivative().mul(R).scale(Fraction(1, 2)).shift(1))
        .add(B.mul(R.derivative()).shift(1))
    )
    # parity structure: C odd, D even in s (checked through the valid order)
    assert all(C.coeff(j).is_zero for j in range(0, C.order + 1, 2))
    assert all(D.coeff(j).is_zero for j in range(1, D.order + 1, 2))

    def b(m: int) -> Poly:
        return (one, e1, e2, e3)[m] if 0 <= m <= 3 else zero

    def c(m: int) -> Poly:
        if m < 0 or 2 * m + 1 > C.order:
            return zero
        return C.coeff(2 * m + 1)

    def d(m: int) -> Poly:
        if m < 0 or 2 * m > D.order:
            return zero
        return D.coeff(2 * m)

    rows = []
    for n in range(n_max):
        row = []
        for k in range(n_max):
            if k > n + 1 or n - k > 2:
                row.append(zero)
                continue
            if offset == 0:
                bracket = (
                    2 * k * (n + k) * b(n - k + 1) + 2 * k * c(n - k) + d(n - k)
                )
                ratio = factorial(2 * n) // factorial(2 * k)
            else:
                bracket = (
                    (2 * k + 1) * (n + k + 1) * b(n - k + 1)
                    + (2 * k + 1) * c(n - k)
                    + d(n - k)
                )
                ratio = factorial(2 * n + 1) // factorial(2 * k + 1)
            row.append(bracket * ratio)
        rows.append(tuple(row))
    return PolyMatrix(
        entries=tuple(rows),
        source="P" if offset == 0 else "Q",
        exact_block=n_max,
        lower_bandwidth=2,
        upper_bandwidth=1,
    )
