"""Finite truncations of the production matrices and their factors.

All matrices here are leading N x N blocks of infinite row-finite matrices
with polynomial entries.  Each PolyMatrix records how it was built (source
tag), how large a leading block is exact (exact_block), and its band
structure when known, so downstream consumers can refuse computations whose
truncation would silently corrupt entries.

The builders:

  build_P, build_Q   quadridiagonal unit-upper-Hessenberg production
                     matrices of the even / odd reduced Schett sequences
  build_T            their shared x = 0 tridiagonal specialization
  build_L            unit lower bidiagonal factor carrying the x-dependence,
                     so that P = L T and Q = T L block by block
  build_generic_quad fully symbolic quadridiagonal matrix
                     L1 L2 U + L1 D1 + L2 D2 with L1 = alpha I + xi L,
                     L2 = beta I + eta L over indeterminate sequences
                     a, b, c, d, e, f

Band entries are stated in the raw variables x, y, z; passing squared=True
builds the same matrices over X = x^2, Y = y^2, Z = z^2 with every exponent
halved (the coefficient lists are identical, so positivity certificates
transfer verbatim).
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field, replace
from typing import Callable, Iterable, Sequence

from .polyring import Poly, VarSet

RAW_NAMES = ("x", "y", "z")
SQUARED_NAMES = ("X", "Y", "Z")


class TruncationError(ValueError):
    """An operand is too small for the requested exact result block."""


@dataclass(frozen=True)
class PolyMatrix:
    """Immutable square matrix of polynomials with truncation metadata.

    exact_block: the leading block of this size agrees with the infinite
    matrix the source tag names.  lower_bandwidth / upper_bandwidth bound the
    band (entry (i, j) vanishes when i - j > lower or j - i > upper); None
    means unknown or unbounded.
    """

    entries: tuple[tuple[Poly, ...], ...]
    source: str
    exact_block: int
    lower_bandwidth: int | None = None
    upper_bandwidth: int | None = None

    @property
    def size(self) -> int:
        return len(self.entries)

    def entry(self, i: int, j: int) -> Poly:
        return self.entries[i][j]

    def row(self, i: int) -> tuple[Poly, ...]:
        return self.entries[i]

    def with_entry(self, i: int, j: int, value: Poly) -> "PolyMatrix":
        """Copy with one entry replaced (band metadata is kept; callers
        perturbing outside the declared band must not reuse it for padded
        products)."""
        rows = [list(r) for r in self.entries]
        rows[i][j] = value
        return replace(self, entries=tuple(tuple(r) for r in rows))

    def substitute(self, assignment) -> "PolyMatrix":
        """Entrywise substitution.  Zero entries stay zero, so band metadata
        remains a valid upper bound and exactness is preserved."""
        rows = tuple(
            tuple(p if p.is_zero else p.substitute(assignment) for p in row)
            for row in self.entries
        )
        return replace(self, entries=rows)

    def leading_block(self, n: int) -> "PolyMatrix":
        if n > self.size:
            raise TruncationError(f"cannot take {n}x{n} block of {self.size}x{self.size}")
        return replace(
            self,
            entries=tuple(r[:n] for r in self.entries[:n]),
            exact_block=min(self.exact_block, n),
        )

    def to_json_dict(self) -> dict:
        return {
            "rows": self.size,
            "cols": self.size,
            "entries": [[p.to_json_dict() for p in row] for row in self.entries],
            "source": self.source,
            "exact_block": self.exact_block,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_json_dict(), indent=2)

    @classmethod
    def from_json_dict(cls, data: dict) -> "PolyMatrix":
        entries = tuple(
            tuple(Poly.from_json_dict(cell) for cell in row) for row in data["entries"]
        )
        return cls(
            entries=entries,
            source=data["source"],
            exact_block=data["exact_block"],
        )


def first_mismatch(a: PolyMatrix, b: PolyMatrix) -> tuple[int, int] | None:
    """Row-major position of the first differing entry, or None if equal."""
    if a.size != b.size:
        raise ValueError(f"shape mismatch: {a.size} vs {b.size}")
    for i in range(a.size):
        for j in range(a.size):
            if a.entries[i][j] != b.entries[i][j]:
                return (i, j)
    return None


def _from_band(
    n_max: int,
    source: str,
    lower: int,
    entry_fn: Callable[[int, int], Poly],
    vars: VarSet,
) -> PolyMatrix:
    zero = Poly.zero(vars)
    rows = []
    for n in range(n_max):
        row = []
        for k in range(n_max):
            if k > n + 1 or n - k > lower:
                row.append(zero)
            else:
                row.append(entry_fn(n, k))
        rows.append(tuple(row))
    return PolyMatrix(
        entries=tuple(rows),
        source=source,
        exact_block=n_max,
        lower_bandwidth=lower,
        upper_bandwidth=1,
    )


def _band_vars(squared: bool) -> tuple[VarSet, int]:
    """Variable universe and exponent scale for the band builders."""
    if squared:
        return VarSet(SQUARED_NAMES), 1
    return VarSet(RAW_NAMES), 2


def build_P(n_max: int, squared: bool = False) -> PolyMatrix:
    """Production matrix of the even reduced Schett polynomials.

    Quadridiagonal with unit superdiagonal:
      (n, n)   : (2n)^2 x^2 + (2n+1)^2 (y^2 + z^2)
      (n, n-1) : (2n)^2 (2n-1) [ (2n-1) x^2 (y^2+z^2) + (2n+1) y^2 z^2 ]
      (n, n-2) : (2n)^2 (2n-2)^2 (2n-1) (2n-3) x^2 y^2 z^2
    """
    vars, s = _band_vars(squared)
    x2 = {vars.names[0]: s}
    y2 = {vars.names[1]: s}
    z2 = {vars.names[2]: s}

    def entry(n: int, k: int) -> Poly:
        if k == n + 1:
            return Poly.one(vars)
        if k == n:
            return Poly.monomial(vars, x2, (2 * n) ** 2) + Poly.monomial(
                vars, y2, (2 * n + 1) ** 2
            ) + Poly.monomial(vars, z2, (2 * n + 1) ** 2)
        if k == n - 1:
            outer = (2 * n) ** 2 * (2 * n - 1)
            return Poly.monomial(vars, {**x2, **y2}, outer * (2 * n - 1)) + Poly.monomial(
                vars, {**x2, **z2}, outer * (2 * n - 1)
            ) + Poly.monomial(vars, {**y2, **z2}, outer * (2 * n + 1))
        # k == n - 2
        c = (2 * n) ** 2 * (2 * n - 2) ** 2 * (2 * n - 1) * (2 * n - 3)
        return Poly.monomial(vars, {**x2, **y2, **z2}, c)

    return _from_band(n_max, "P", 2, entry, vars)


def build_Q(n_max: int, squared: bool = False) -> PolyMatrix:
    """Production matrix of the odd reduced Schett polynomials.

    Quadridiagonal with unit superdiagonal:
      (n, n)   : (2n+2)^2 x^2 + (2n+1)^2 (y^2 + z^2)
      (n, n-1) : (2n)^2 (2n+1) [ (2n+1) x^2 (y^2+z^2) + (2n-1) y^2 z^2 ]
      (n, n-2) : (2n)^2 (2n-2)^2 (2n+1) (2n-1) x^2 y^2 z^2
    """
    vars, s = _band_vars(squared)
    x2 = {vars.names[0]: s}
    y2 = {vars.names[1]: s}
    z2 = {vars.names[2]: s}

    def entry(n: int, k: int) -> Poly:
        if k == n + 1:
            return Poly.one(vars)
        if k == n:
            return Poly.monomial(vars, x2, (2 * n + 2) ** 2) + Poly.monomial(
                vars, y2, (2 * n + 1) ** 2
            ) + Poly.monomial(vars, z2, (2 * n + 1) ** 2)
        if k == n - 1:
            outer = (2 * n) ** 2 * (2 * n + 1)
            return Poly.monomial(vars, {**x2, **y2}, outer * (2 * n + 1)) + Poly.monomial(
                vars, {**x2, **z2}, outer * (2 * n + 1)
            ) + Poly.monomial(vars, {**y2, **z2}, outer * (2 * n - 1))
        # k == n - 2
        c = (2 * n) ** 2 * (2 * n - 2) ** 2 * (2 * n + 1) * (2 * n - 1)
        return Poly.monomial(vars, {**x2, **y2, **z2}, c)

    return _from_band(n_max, "Q", 2, entry, vars)


def build_T(n_max: int, squared: bool = False) -> PolyMatrix:
    """Tridiagonal x = 0 specialization shared by P and Q.

      (n, n)   : (2n+1)^2 (y^2 + z^2)
      (n, n-1) : 4 n^2 (4 n^2 - 1) y^2 z^2
    """
    vars, s = _band_vars(squared)
    y2 = {vars.names[1]: s}
    z2 = {vars.names[2]: s}

    def entry(n: int, k: int) -> Poly:
        if k == n + 1:
            return Poly.one(vars)
        if k == n:
            d = (2 * n + 1) ** 2
            return Poly.monomial(vars, y2, d) + Poly.monomial(vars, z2, d)
        # k == n - 1
        c = 4 * n * n * (4 * n * n - 1)
        return Poly.monomial(vars, {**y2, **z2}, c)

    return _from_band(n_max, "T", 1, entry, vars)


def build_L(n_max: int, squared: bool = False) -> PolyMatrix:
    """Unit lower bidiagonal factor: diagonal 1, subdiagonal 4 n^2 x^2."""
    vars, s = _band_vars(squared)
    x2 = {vars.names[0]: s}
    zero = Poly.zero(vars)
    one = Poly.one(vars)
    rows = []
    for n in range(n_max):
        row = [zero] * n_max
        row[n] = one
        if n >= 1:
            row[n - 1] = Poly.monomial(vars, x2, 4 * n * n)
        rows.append(tuple(row))
    return PolyMatrix(
        entries=tuple(rows),
        source="L",
        exact_block=n_max,
        lower_bandwidth=1,
        upper_bandwidth=0,
    )


def generic_var_names(n_max: int) -> tuple[str, ...]:
    """Indeterminates of the generic quadridiagonal matrix, in VarSet order."""
    names = ["alpha", "beta", "xi", "eta"]
    names += [f"a{n}" for n in range(n_max)]
    names += [f"b{n}" for n in range(1, n_max)]
    names += [f"c{n}" for n in range(1, n_max)]
    names += [f"d{n}" for n in range(n_max)]
    names += [f"e{n}" for n in range(n_max)]
    names += [f"f{n}" for n in range(n_max)]
    return tuple(names)


def build_generic_quad(n_max: int) -> PolyMatrix:
    """Generic quadridiagonal matrix L1 L2 U + L1 D1 + L2 D2.

    L1 = alpha I + xi L and L2 = beta I + eta L, where L is lower bidiagonal
    with diagonal a_0, a_1, ... and subdiagonal b_1, b_2, ...; U is upper
    bidiagonal with diagonal d_0, d_1, ... and superdiagonal c_1, c_2, ...;
    D1 = diag(e_0, e_1, ...) and D2 = diag(f_0, f_1, ...).  Every symbol is
    an independent indeterminate.  The result is lower Hessenberg with lower
    bandwidth 2.
    """
    vars = VarSet(generic_var_names(n_max))
    zero = Poly.zero(vars)

    def v(name: str) -> Poly:
        return Poly.variable(vars, name)

    alpha, beta, xi, eta = v("alpha"), v("beta"), v("xi"), v("eta")

    def lower(diag: Poly, scale: Poly) -> list[list[Poly]]:
        # diag I + scale * (unit-diagonal lower bidiagonal with diagonal a_n,
        # subdiagonal b_n)
        m = [[zero] * n_max for _ in range(n_max)]
        for n in range(n_max):
            m[n][n] = diag + scale * v(f"a{n}")
            if n >= 1:
                m[n][n - 1] = scale * v(f"b{n}")
        return m

    l1 = lower(alpha, xi)
    l2 = lower(beta, eta)
    u = [[zero] * n_max for _ in range(n_max)]
    for n in range(n_max):
        u[n][n] = v(f"d{n}")
        if n + 1 < n_max:
            u[n][n + 1] = v(f"c{n + 1}")

    def matmul(a, b):
        out = [[zero] * n_max for _ in range(n_max)]
        for i in range(n_max):
            for k in range(n_max):
                if a[i][k].is_zero:
                    continue
                arow = a[i][k]
                for j in range(n_max):
                    if not b[k][j].is_zero:
                        out[i][j] = out[i][j] + arow * b[k][j]
        return out

    l1l2 = matmul(l1, l2)
    total = matmul(l1l2, u)
    for j in range(n_max):
        ej, fj = v(f"e{j}"), v(f"f{j}")
        for i in range(n_max):
            total[i][j] = total[i][j] + l1[i][j] * ej + l2[i][j] * fj

    return PolyMatrix(
        entries=tuple(tuple(r) for r in total),
        source="generic",
        exact_block=n_max,
        lower_bandwidth=2,
        upper_bandwidth=1,
    )


def specialize_generic_to_T(n_max: int, squared: bool = False) -> PolyMatrix:
    """Specialize the generic matrix so it must reproduce build_T.

    alpha = beta = 1, xi = y^2, eta = z^2, a_n = 0, b_n = (2n)(2n+1),
    c_n = 1, d_n = 0, e_n = (2n+1) z^2, f_n = (2n+1) y^2.
    """
    generic = build_generic_quad(n_max)
    vars, s = _band_vars(squared)
    y2 = Poly.monomial(vars, {vars.names[1]: s})
    z2 = Poly.monomial(vars, {vars.names[2]: s})
    assignment: dict[str, Poly | int] = {
        "alpha": 1,
        "beta": 1,
        "xi": y2,
        "eta": z2,
    }
    for n in range(n_max):
        assignment[f"a{n}"] = 0
        assignment[f"d{n}"] = 0
        assignment[f"e{n}"] = (2 * n + 1) * z2
        assignment[f"f{n}"] = (2 * n + 1) * y2
    for n in range(1, n_max):
        assignment[f"b{n}"] = (2 * n) * (2 * n + 1)
        assignment[f"c{n}"] = 1
    zero = Poly.zero(vars)
    rows = tuple(
        tuple(
            p.substitute(assignment) if not p.is_zero else zero
            for p in row
        )
        for row in generic.entries
    )
    return PolyMatrix(
        entries=rows,
        source="generic",
        exact_block=n_max,
        lower_bandwidth=2,
        upper_bandwidth=1,
    )


def mat_mul_truncated(a: PolyMatrix, b: PolyMatrix, result_size: int) -> PolyMatrix:
    """Exact leading result_size x result_size block of the infinite product.

    The block is exact iff the operands extend far enough that no truncated
    column of a (equivalently row of b) can contribute: operand size must be
    at least result_size + upper_bandwidth(a).  Unknown bandwidth is refused.
    """
    if a.size != b.size:
        raise TruncationError(f"operand sizes differ: {a.size} vs {b.size}")
    if a.upper_bandwidth is None:
        raise TruncationError("left operand has unknown upper bandwidth")
    needed = result_size + a.upper_bandwidth
    if a.size < needed:
        raise TruncationError(
            f"operands of size {a.size} cannot give an exact {result_size}-block; "
            f"need at least {needed}"
        )
    if min(a.exact_block, b.exact_block) < needed:
        raise TruncationError("operand exact blocks are smaller than required")
    lo = a.lower_bandwidth
    hi = a.upper_bandwidth
    rows = []
    for i in range(result_size):
        k_min = 0 if lo is None else max(0, i - lo)
        k_max = min(a.size - 1, i + hi)
        row = []
        for j in range(result_size):
            acc = None
            for k in range(k_min, k_max + 1):
                aik = a.entries[i][k]
                if aik.is_zero:
                    continue
                bkj = b.entries[k][j]
                if bkj.is_zero:
                    continue
                term = aik * bkj
                acc = term if acc is None else acc + term
            row.append(acc if acc is not None else Poly.zero(a.entries[0][0].vars))
        rows.append(tuple(row))
    lower = (
        a.lower_bandwidth + b.lower_bandwidth
        if a.lower_bandwidth is not None and b.lower_bandwidth is not None
        else None
    )
    upper = (
        a.upper_bandwidth + b.upper_bandwidth
        if b.upper_bandwidth is not None
        else None
    )
    return PolyMatrix(
        entries=tuple(rows),
        source="product",
        exact_block=result_size,
        lower_bandwidth=lower,
        upper_bandwidth=upper,
    )


def hankel(seq: Sequence[Poly], size: int, source: str = "hankel") -> PolyMatrix:
    """Hankel matrix H[i][j] = seq[i + j] of a given leading size."""
    if len(seq) < 2 * size - 1:
        raise ValueError(
            f"need {2 * size - 1} sequence entries for a {size}x{size} Hankel matrix, "
            f"got {len(seq)}"
        )
    rows = tuple(tuple(seq[i + j] for j in range(size)) for i in range(size))
    return PolyMatrix(
        entries=rows,
        source=source,
        exact_block=size,
        lower_bandwidth=None,
        upper_bandwidth=None,
    )


def hankel_reduced(parity: str, size: int, squared: bool = True) -> PolyMatrix:
    """Hankel matrix of the even- or odd-index reduced Schett sequence."""
    from .schett import reduced_raw, schett_reduced

    if parity not in ("even", "odd"):
        raise ValueError(f"parity must be 'even' or 'odd', got {parity!r}")
    offset = 0 if parity == "even" else 1
    if squared:
        seq = [schett_reduced(2 * k + offset).poly for k in range(2 * size - 1)]
    else:
        seq = [reduced_raw(2 * k + offset) for k in range(2 * size - 1)]
    return hankel(seq, size, source=f"hankel-{parity}")
