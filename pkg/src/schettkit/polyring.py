"""Exact sparse multivariate polynomial arithmetic over the rationals.

A polynomial is a map from exponent vectors to nonzero coefficients over an
ordered variable universe (VarSet).  Coefficients are Python ints, falling
back to fractions.Fraction only when a value is genuinely non-integral; every
operation is exact.  The canonical term order is graded lexicographic,
descending: higher total degree first, ties broken by the exponent vector
read against the VarSet order.  Serialization walks terms in canonical order,
so equal polynomials over equal VarSets serialize to identical bytes.

JSON interchange format::

    {"vars": ["x", "y", "z"],
     "terms": [{"coeff": "4", "exps": [2, 1, 1]},
               {"coeff": "1/2", "exps": [0, 3, 1]}]}

Coefficients are decimal integer strings or "p/q" strings.  The zero
polynomial has an empty term list and degree MINUS_INFINITY.
"""

from __future__ import annotations

import json
from fractions import Fraction
from typing import Iterable, Iterator, Mapping, Union

Coeff = Union[int, Fraction]
Exponents = tuple[int, ...]

#: Degree of the zero polynomial.  Compares below every integer degree.
MINUS_INFINITY = float("-inf")


class VarOrderError(ValueError):
    """Two VarSets share names but disagree on their relative order."""


class UnknownVariableError(ValueError):
    """A variable name is not part of the polynomial's VarSet."""


class DivisibilityError(ValueError):
    """Monomial division failed.  Carries the offending exponent vector."""

    def __init__(self, message: str, monomial: Exponents):
        super().__init__(message)
        self.monomial = monomial


def _norm_coeff(c: Coeff) -> Coeff:
    """Collapse integral Fractions to int so integer arithmetic stays fast."""
    if type(c) is int:
        return c
    if isinstance(c, Fraction):
        if c.denominator == 1:
            return int(c)
        return c
    if isinstance(c, int):  # bool and int subclasses
        return int(c)
    raise TypeError(f"unsupported coefficient type {type(c).__name__}")


def _coeff_from_str(s: str) -> Coeff:
    try:
        return _norm_coeff(Fraction(s))
    except (ValueError, ZeroDivisionError) as exc:
        raise ValueError(f"bad coefficient string {s!r}") from exc


def _coeff_to_str(c: Coeff) -> str:
    return str(c)


class VarSet:
    """Ordered, duplicate-free tuple of variable names.

    The order is the serialization order and the tiebreak order of the
    canonical graded-lex comparison.  VarSets merge by keeping the left
    operand's order and appending unseen names from the right; merging is
    refused when the operands order a shared pair of names differently.
    """

    __slots__ = ("names", "_pos")

    def __init__(self, names: Iterable[str]):
        names = tuple(names)
        if len(set(names)) != len(names):
            raise VarOrderError(f"duplicate variable names in {names!r}")
        for n in names:
            if not isinstance(n, str) or not n:
                raise VarOrderError(f"bad variable name {n!r}")
        self.names = names
        self._pos = {n: i for i, n in enumerate(names)}

    def __len__(self) -> int:
        return len(self.names)

    def __iter__(self) -> Iterator[str]:
        return iter(self.names)

    def __contains__(self, name: object) -> bool:
        return name in self._pos

    def __eq__(self, other: object) -> bool:
        if isinstance(other, VarSet):
            return self.names == other.names
        return NotImplemented

    def __hash__(self) -> int:
        return hash(self.names)

    def __repr__(self) -> str:
        return f"VarSet({', '.join(self.names)})"

    def index(self, name: str) -> int:
        try:
            return self._pos[name]
        except KeyError:
            raise UnknownVariableError(f"unknown variable {name!r}") from None

    def union(self, other: "VarSet") -> "VarSet":
        if self.names == other.names:
            return self
        mine = [n for n in self.names if n in other._pos]
        theirs = [n for n in other.names if n in self._pos]
        if mine != theirs:
            raise VarOrderError(
                f"incompatible variable orders: {self.names!r} vs {other.names!r}"
            )
        return VarSet(self.names + tuple(n for n in other.names if n not in self._pos))


def _remap_terms(terms: dict, src: VarSet, dst: VarSet) -> dict:
    """Re-express exponent vectors of src-indexed terms over dst."""
    if src.names == dst.names:
        return terms
    pad = len(dst) - len(src)
    if pad >= 0 and dst.names[: len(src)] == src.names:
        tail = (0,) * pad
        return {e + tail: c for e, c in terms.items()}
    slots = tuple(dst.index(n) for n in src.names)
    out = {}
    width = len(dst)
    for e, c in terms.items():
        vec = [0] * width
        for s, exp in zip(slots, e):
            vec[s] = exp
        out[tuple(vec)] = c
    return out


def _add_into(acc: dict, terms: dict) -> None:
    for e, c in terms.items():
        prev = acc.get(e)
        if prev is None:
            acc[e] = c
        else:
            s = prev + c
            if s:
                acc[e] = s
            else:
                del acc[e]


def _mul_dicts(a: dict, b: dict) -> dict:
    if len(a) > len(b):
        a, b = b, a
    out: dict = {}
    get = out.get
    for ea, ca in a.items():
        for eb, cb in b.items():
            e = tuple(map(int.__add__, ea, eb))
            c = ca * cb
            prev = get(e)
            if prev is None:
                out[e] = c
            else:
                s = prev + c
                if s:
                    out[e] = s
                else:
                    del out[e]
    return out


class Poly:
    """Immutable exact polynomial over a VarSet.

    Terms map exponent tuples (aligned with the VarSet) to nonzero
    coefficients.  Instances are never mutated after construction; all
    operations return new polynomials, so sharing across threads is safe.
    """

    __slots__ = ("vars", "terms")

    def __init__(self, vars: VarSet, terms: Mapping[Exponents, Coeff] | None = None):
        width = len(vars)
        clean: dict = {}
        if terms:
            for e, c in terms.items():
                e = tuple(e)
                if len(e) != width:
                    raise ValueError(f"exponent vector {e!r} does not match {vars!r}")
                if any(x < 0 or not isinstance(x, int) for x in e):
                    raise ValueError(f"bad exponent vector {e!r}")
                c = _norm_coeff(c)
                if c:
                    if e in clean:
                        raise ValueError(f"duplicate exponent vector {e!r}")
                    clean[e] = c
        self.vars = vars
        self.terms = clean

    @classmethod
    def _raw(cls, vars: VarSet, terms: dict) -> "Poly":
        """Trusted constructor: terms are already normalized and pruned."""
        obj = object.__new__(cls)
        obj.vars = vars
        obj.terms = terms
        return obj

    # ---------------------------------------------------------------- basics

    @classmethod
    def zero(cls, vars: VarSet) -> "Poly":
        return cls._raw(vars, {})

    @classmethod
    def const(cls, vars: VarSet, c: Coeff) -> "Poly":
        c = _norm_coeff(c)
        if not c:
            return cls._raw(vars, {})
        return cls._raw(vars, {(0,) * len(vars): c})

    @classmethod
    def one(cls, vars: VarSet) -> "Poly":
        return cls.const(vars, 1)

    @classmethod
    def variable(cls, vars: VarSet, name: str) -> "Poly":
        i = vars.index(name)
        e = [0] * len(vars)
        e[i] = 1
        return cls._raw(vars, {tuple(e): 1})

    @classmethod
    def monomial(cls, vars: VarSet, exps: Mapping[str, int], coeff: Coeff = 1) -> "Poly":
        vec = [0] * len(vars)
        for name, exp in exps.items():
            vec[vars.index(name)] = exp
        return cls(vars, {tuple(vec): coeff})

    @property
    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self) -> bool:
        return bool(self.terms)

    def degree(self) -> Union[int, float]:
        """Total degree; MINUS_INFINITY for the zero polynomial."""
        if not self.terms:
            return MINUS_INFINITY
        return max(sum(e) for e in self.terms)

    def is_homogeneous(self) -> bool:
        degs = {sum(e) for e in self.terms}
        return len(degs) <= 1

    def is_coeff_nonneg(self) -> bool:
        """True when every coefficient is >= 0 (the zero polynomial passes)."""
        return all(c >= 0 for c in self.terms.values())

    def has_integer_coeffs(self) -> bool:
        return all(type(c) is int for c in self.terms.values())

    def coefficient(self, exps: Mapping[str, int]) -> Coeff:
        vec = [0] * len(self.vars)
        for name, exp in exps.items():
            vec[self.vars.index(name)] = exp
        return self.terms.get(tuple(vec), 0)

    def constant_term(self) -> Coeff:
        return self.terms.get((0,) * len(self.vars), 0)

    def restrict_to_support(self) -> "Poly":
        """Drop VarSet names that appear in no term (order preserved)."""
        used = [i for i in range(len(self.vars)) if any(e[i] for e in self.terms)]
        if len(used) == len(self.vars):
            return self
        target = VarSet(self.vars.names[i] for i in used)
        out = {tuple(e[i] for i in used): c for e, c in self.terms.items()}
        return Poly._raw(target, out)

    def as_scalar(self) -> Coeff:
        """Value of a constant polynomial; error if any variable survives."""
        if not self.terms:
            return 0
        if len(self.terms) == 1:
            ((e, c),) = self.terms.items()
            if not any(e):
                return c
        raise ValueError("polynomial is not constant")

    # ------------------------------------------------------------ arithmetic

    def _aligned(self, other: "Poly") -> tuple[VarSet, dict, dict]:
        if self.vars is other.vars or self.vars.names == other.vars.names:
            return self.vars, self.terms, other.terms
        merged = self.vars.union(other.vars)
        return (
            merged,
            _remap_terms(self.terms, self.vars, merged),
            _remap_terms(other.terms, other.vars, merged),
        )

    def _coerce(self, other) -> "Poly | None":
        if isinstance(other, Poly):
            return other
        if isinstance(other, (int, Fraction)):
            return Poly.const(self.vars, other)
        return None

    def __add__(self, other) -> "Poly":
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        vars, ta, tb = self._aligned(o)
        acc = dict(ta)
        _add_into(acc, tb)
        return Poly._raw(vars, acc)

    __radd__ = __add__

    def __neg__(self) -> "Poly":
        return Poly._raw(self.vars, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other) -> "Poly":
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other) -> "Poly":
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o + (-self)

    def __mul__(self, other) -> "Poly":
        if isinstance(other, (int, Fraction)):
            other = _norm_coeff(other)
            if not other:
                return Poly._raw(self.vars, {})
            return Poly._raw(
                self.vars, {e: _norm_coeff(c * other) for e, c in self.terms.items()}
            )
        if not isinstance(other, Poly):
            return NotImplemented
        vars, ta, tb = self._aligned(other)
        return Poly._raw(vars, _mul_dicts(ta, tb))

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "Poly":
        if not isinstance(n, int) or n < 0:
            raise ValueError("exponent must be a nonnegative integer")
        result = Poly.one(self.vars)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base if n > 1 else base
            n >>= 1
        return result

    def __eq__(self, other: object) -> bool:
        if isinstance(other, (int, Fraction)):
            other = Poly.const(self.vars, other)
        if not isinstance(other, Poly):
            return NotImplemented
        _, ta, tb = self._aligned(other)
        return ta == tb

    __hash__ = None  # mutable-dict-backed; never used as a mapping key

    # -------------------------------------------------------------- calculus

    def partial(self, name: str) -> "Poly":
        """Partial derivative with respect to one variable."""
        i = self.vars.index(name)
        out = {}
        for e, c in self.terms.items():
            k = e[i]
            if k:
                out[e[:i] + (k - 1,) + e[i + 1 :]] = c * k
        return Poly._raw(self.vars, out)

    def substitute(self, assignment: Mapping[str, "Poly | Coeff"]) -> "Poly":
        """Substitute polynomials or scalars for variables.

        Unassigned variables pass through.  The result VarSet keeps the
        surviving variables in their current order, then appends new names
        introduced by the substituted values.
        """
        for name in assignment:
            if name not in self.vars:
                raise UnknownVariableError(f"unknown variable {name!r}")
        values: dict[int, Poly] = {}
        for name, val in assignment.items():
            if isinstance(val, (int, Fraction)):
                val = Poly.const(VarSet(()), val)
            elif isinstance(val, Poly):
                val = val.restrict_to_support()
            else:
                raise TypeError(f"bad substitution value for {name!r}")
            values[self.vars.index(name)] = val
        # Result order: surviving or reintroduced names keep this
        # polynomial's order; names foreign to it follow, by first
        # appearance across values (values visited in VarSet order).
        value_names: list[str] = []
        seen: set[str] = set()
        for i in sorted(values):
            for n in values[i].vars.names:
                if n not in seen:
                    seen.add(n)
                    value_names.append(n)
        target = VarSet(
            [n for n in self.vars.names if n not in assignment or n in seen]
            + [n for n in value_names if n not in self.vars]
        )
        values = {
            i: Poly._raw(target, _remap_terms(v.terms, v.vars, target))
            for i, v in values.items()
        }
        keep_slots = [
            (i, target.index(n))
            for i, n in enumerate(self.vars.names)
            if n not in assignment
        ]
        width = len(target)
        # Powers of each substituted value, grown on demand.
        powers: dict[int, list[Poly]] = {i: [Poly.one(target)] for i in values}
        acc: dict = {}
        for e, c in self.terms.items():
            vec = [0] * width
            for i, slot in keep_slots:
                vec[slot] = e[i]
            piece = Poly._raw(target, {tuple(vec): c})
            for i, exp in enumerate(e):
                if exp and i in values:
                    plist = powers[i]
                    while len(plist) <= exp:
                        plist.append(plist[-1] * values[i])
                    piece = piece * plist[exp]
            _add_into(acc, _remap_terms(piece.terms, piece.vars, target))
        return Poly._raw(target, acc)

    def monomial_div(self, exps: Mapping[str, int] | Exponents) -> "Poly":
        """Exact division by a monomial; DivisibilityError if any term fails."""
        if isinstance(exps, Mapping):
            vec = [0] * len(self.vars)
            for name, exp in exps.items():
                vec[self.vars.index(name)] = exp
            divisor = tuple(vec)
        else:
            divisor = tuple(exps)
            if len(divisor) != len(self.vars):
                raise ValueError("divisor exponent vector has wrong length")
        out = {}
        for e, c in self.terms.items():
            q = tuple(map(int.__sub__, e, divisor))
            if any(x < 0 for x in q):
                raise DivisibilityError(
                    f"term with exponents {e} is not divisible by {divisor}", e
                )
            out[q] = c
        return Poly._raw(self.vars, out)

    # ----------------------------------------------------------- presentation

    def canonical_terms(self) -> list[tuple[Exponents, Coeff]]:
        """Terms in descending graded-lex order (the serialization order)."""
        return sorted(self.terms.items(), key=lambda kv: (sum(kv[0]), kv[0]), reverse=True)

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for e, c in self.canonical_terms():
            factors = []
            for name, exp in zip(self.vars.names, e):
                if exp == 1:
                    factors.append(name)
                elif exp:
                    factors.append(f"{name}^{exp}")
            body = "*".join(factors)
            mag = abs(c)
            if not body:
                text = str(mag)
            elif mag == 1:
                text = body
            else:
                text = f"{mag}*{body}"
            if not parts:
                parts.append(f"-{text}" if c < 0 else text)
            else:
                parts.append(f"- {text}" if c < 0 else f"+ {text}")
        return " ".join(parts)

    def __repr__(self) -> str:
        return f"Poly({self})"

    def to_json_dict(self) -> dict:
        return {
            "vars": list(self.vars.names),
            "terms": [
                {"coeff": _coeff_to_str(c), "exps": list(e)}
                for e, c in self.canonical_terms()
            ],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_json_dict(), indent=2)

    @classmethod
    def from_json_dict(cls, data: Mapping) -> "Poly":
        try:
            vars = VarSet(data["vars"])
            terms = {
                tuple(t["exps"]): _coeff_from_str(t["coeff"]) for t in data["terms"]
            }
        except (KeyError, TypeError) as exc:
            raise ValueError(f"malformed polynomial JSON: {exc}") from exc
        return cls(vars, terms)

    @classmethod
    def from_json(cls, text: str) -> "Poly":
        return cls.from_json_dict(json.loads(text))


def halve_even_exponents(p: Poly, new_names: Iterable[str]) -> Poly:
    """Rewrite a polynomial whose exponents are all even over fresh variables.

    Each monomial prod v_i^(2 a_i) becomes prod w_i^(a_i) where w_i is the
    name at the same position in new_names.  Raises ValueError on any odd
    exponent.
    """
    target = VarSet(new_names)
    if len(target) != len(p.vars):
        raise ValueError("new_names must match the variable count")
    out = {}
    for e, c in p.terms.items():
        if any(x & 1 for x in e):
            raise ValueError(f"odd exponent in term {e}; cannot halve")
        out[tuple(x >> 1 for x in e)] = c
    return Poly._raw(target, out)
