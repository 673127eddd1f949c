"""Exact multivariate polynomials and rational functions.

Coefficients are Gaussian rationals; variables are a fixed tuple per value.
Rational functions are stored unreduced (no multivariate gcd): equality is
decided by cross-multiplication, zeroness by the numerator, which keeps every
identity check exact without factorization machinery.
"""
from __future__ import annotations

from fractions import Fraction

from .coeff import GaussianRational, format_coeff

GR_ZERO = GaussianRational()
GR_ONE = GaussianRational(Fraction(1))


class MPoly:
    """Multivariate polynomial: dict of exponent tuples -> GaussianRational."""

    __slots__ = ("vars", "terms")

    def __init__(self, vars: tuple[str, ...], terms=None):
        self.vars = tuple(vars)
        self.terms: dict[tuple[int, ...], GaussianRational] = {}
        for e, c in (terms or {}).items():
            if c:
                self.terms[tuple(e)] = c

    @staticmethod
    def constant(vars, c) -> "MPoly":
        c = GaussianRational.of(c) if not isinstance(c, GaussianRational) else c
        z = tuple(0 for _ in vars)
        return MPoly(vars, {z: c} if c else {})

    @staticmethod
    def variable(vars, name) -> "MPoly":
        e = tuple(1 if v == name else 0 for v in vars)
        if name not in vars:
            raise ValueError(f"unknown variable {name!r}")
        return MPoly(vars, {e: GR_ONE})

    def _chk(self, other):
        if self.vars != other.vars:
            raise ValueError("variable sets differ")

    @property
    def is_zero(self):
        return not self.terms

    def __bool__(self):
        return not self.is_zero

    def __eq__(self, other):
        return isinstance(other, MPoly) and self.vars == other.vars \
            and self.terms == other.terms

    def __hash__(self):
        return hash((self.vars, frozenset(self.terms.items())))

    def __add__(self, other):
        self._chk(other)
        t = dict(self.terms)
        for e, c in other.terms.items():
            s = t.get(e, GR_ZERO) + c
            if s:
                t[e] = s
            else:
                t.pop(e, None)
        return MPoly(self.vars, t)

    def __neg__(self):
        return MPoly(self.vars, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, GaussianRational):
            return MPoly(self.vars, {e: c * other for e, c in self.terms.items()})
        self._chk(other)
        t: dict[tuple[int, ...], GaussianRational] = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                s = t.get(e, GR_ZERO) + c1 * c2
                if s:
                    t[e] = s
                else:
                    t.pop(e, None)
        return MPoly(self.vars, t)

    def scale(self, c: GaussianRational):
        return MPoly(self.vars, {e: v * c for e, v in self.terms.items()} if c else {})

    def subs_var(self, src: str, dst: str) -> "MPoly":
        """Rename variable src to dst (both must be in vars)."""
        i, j = self.vars.index(src), self.vars.index(dst)
        t: dict[tuple[int, ...], GaussianRational] = {}
        for e, c in self.terms.items():
            e2 = list(e)
            e2[j] += e2[i]
            e2[i] = 0
            key = tuple(e2)
            s = t.get(key, GR_ZERO) + c
            if s:
                t[key] = s
            else:
                t.pop(key, None)
        return MPoly(self.vars, t)

    def subs_values(self, values: dict[str, GaussianRational]) -> "MPoly":
        """Exact substitution of some variables by Gaussian-rational values."""
        idx = {self.vars.index(k): v for k, v in values.items()}
        t: dict[tuple[int, ...], GaussianRational] = {}
        for e, c in self.terms.items():
            e2 = list(e)
            for i, v in idx.items():
                for _ in range(e2[i]):
                    c = c * v
                e2[i] = 0
            key = tuple(e2)
            s = t.get(key, GR_ZERO) + c
            if s:
                t[key] = s
            else:
                t.pop(key, None)
        return MPoly(self.vars, t)

    def eval(self, values: dict[str, complex]) -> complex:
        out = 0j
        for e, c in self.terms.items():
            v = c.to_complex()
            for name, p in zip(self.vars, e):
                if p:
                    v *= values[name] ** p
            out += v
        return out

    def leading_coeff(self) -> GaussianRational:
        if not self.terms:
            return GR_ZERO
        e = max(self.terms)
        return self.terms[e]

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for e, c in sorted(self.terms.items()):
            mono = "*".join(f"{v}^{p}" if p > 1 else v
                            for v, p in zip(self.vars, e) if p)
            cs = format_coeff(c)
            if mono:
                parts.append(mono if cs == "1" else (f"-{mono}" if cs == "-1"
                                                     else f"({cs})*{mono}"))
            else:
                parts.append(f"({cs})" if ("+" in cs[1:] or "-" in cs[1:]) else cs)
        return " + ".join(parts)

    __repr__ = __str__


def _cancel_monomial(num: MPoly, den: MPoly) -> tuple[MPoly, MPoly]:
    """Strip the common monomial factor; if den becomes a unit, clear it.

    This is the only reduction performed (no multivariate gcd): it keeps
    denominators like ka_p from lingering under numerators they divide.
    """
    exps = list(num.terms) + list(den.terms)
    common = tuple(min(e[i] for e in exps) for i in range(len(num.vars)))
    if any(common):
        num = MPoly(num.vars, {tuple(a - b for a, b in zip(e, common)): c
                               for e, c in num.terms.items()})
        den = MPoly(den.vars, {tuple(a - b for a, b in zip(e, common)): c
                               for e, c in den.terms.items()})
    if len(den.terms) == 1:
        (e, c), = den.terms.items()
        if all(p == 0 for p in e):
            return num.scale(GR_ONE / c), MPoly.constant(num.vars, GR_ONE)
        # single-monomial denominator: cancel into the numerator when possible
        if all(all(ne[i] >= e[i] for i in range(len(e))) for ne in num.terms):
            num2 = MPoly(num.vars, {tuple(a - b for a, b in zip(ne, e)): nc * (GR_ONE / c)
                                    for ne, nc in num.terms.items()})
            return num2, MPoly.constant(num.vars, GR_ONE)
    return num, den


class RatFunc:
    """num/den pair over a shared variable tuple; den is content-normalized."""

    __slots__ = ("num", "den")

    def __init__(self, num: MPoly, den: MPoly | None = None):
        if den is None:
            den = MPoly.constant(num.vars, GR_ONE)
        if den.is_zero:
            raise ZeroDivisionError("zero denominator")
        if num.is_zero:
            den = MPoly.constant(num.vars, GR_ONE)
        else:
            num, den = _cancel_monomial(num, den)
            lead = den.leading_coeff()
            inv = GR_ONE / lead
            num, den = num.scale(inv), den.scale(inv)
        self.num, self.den = num, den

    @staticmethod
    def constant(vars, c) -> "RatFunc":
        return RatFunc(MPoly.constant(vars, c))

    @staticmethod
    def variable(vars, name) -> "RatFunc":
        return RatFunc(MPoly.variable(vars, name))

    @property
    def vars(self):
        return self.num.vars

    @property
    def is_zero(self):
        return self.num.is_zero

    def __bool__(self):
        return not self.is_zero

    def _coerce(self, other) -> "RatFunc":
        if isinstance(other, RatFunc):
            return other
        if isinstance(other, (int, Fraction, GaussianRational)):
            return RatFunc.constant(self.vars, GaussianRational.of(other)
                                    if not isinstance(other, GaussianRational) else other)
        return NotImplemented

    def __eq__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return (self.num * other.den) == (other.num * self.den)

    __hash__ = None  # cross-multiplied equality has no consistent hash

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        if self.den == other.den:
            return RatFunc(self.num + other.num, self.den)
        return RatFunc(self.num * other.den + other.num * self.den,
                       self.den * other.den)

    __radd__ = __add__

    def __neg__(self):
        return RatFunc(-self.num, self.den)

    def __sub__(self, other):
        other = self._coerce(other)
        return self + (-other)

    def __rsub__(self, other):
        return self._coerce(other) + (-self)

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return RatFunc(self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = self._coerce(other)
        return self * other.inverse()

    def inverse(self) -> "RatFunc":
        if self.is_zero:
            raise ZeroDivisionError("inverting zero rational function")
        return RatFunc(self.den, self.num)

    def subs_var(self, src, dst) -> "RatFunc":
        return RatFunc(self.num.subs_var(src, dst), self.den.subs_var(src, dst))

    def subs_values(self, values: dict[str, GaussianRational]) -> "RatFunc":
        return RatFunc(self.num.subs_values(values), self.den.subs_values(values))

    def eval(self, values: dict[str, complex]) -> complex:
        d = self.den.eval(values)
        if d == 0:
            raise ZeroDivisionError("denominator vanishes at the sample point")
        return self.num.eval(values) / d

    def __str__(self):
        if self.den == MPoly.constant(self.vars, GR_ONE):
            return str(self.num)
        return f"({self.num})/({self.den})"

    __repr__ = __str__


class RationalMatrix:
    """Dense matrix of rational functions; dims (2,2) or (4,4) in practice."""

    __slots__ = ("vars", "entries")

    def __init__(self, vars, entries):
        self.vars = tuple(vars)
        self.entries = [list(row) for row in entries]

    @staticmethod
    def zero(vars, n, m=None) -> "RationalMatrix":
        m = n if m is None else m
        z = RatFunc.constant(vars, GR_ZERO)
        return RationalMatrix(vars, [[z for _ in range(m)] for _ in range(n)])

    @staticmethod
    def identity(vars, n) -> "RationalMatrix":
        out = RationalMatrix.zero(vars, n)
        one = RatFunc.constant(vars, GR_ONE)
        for i in range(n):
            out.entries[i][i] = one
        return out

    @property
    def shape(self):
        return (len(self.entries), len(self.entries[0]))

    def __add__(self, other):
        return RationalMatrix(self.vars, [[a + b for a, b in zip(r1, r2)]
                                          for r1, r2 in zip(self.entries, other.entries)])

    def __sub__(self, other):
        return RationalMatrix(self.vars, [[a - b for a, b in zip(r1, r2)]
                                          for r1, r2 in zip(self.entries, other.entries)])

    def __neg__(self):
        return RationalMatrix(self.vars, [[-a for a in r] for r in self.entries])

    def __mul__(self, other):
        if isinstance(other, RationalMatrix):
            n, k = self.shape
            k2, m = other.shape
            if k != k2:
                raise ValueError("shape mismatch")
            out = RationalMatrix.zero(self.vars, n, m)
            for i in range(n):
                for j in range(m):
                    acc = RatFunc.constant(self.vars, GR_ZERO)
                    for s in range(k):
                        acc = acc + self.entries[i][s] * other.entries[s][j]
                    out.entries[i][j] = acc
            return out
        return RationalMatrix(self.vars, [[a * other for a in r] for r in self.entries])

    def scale(self, c) -> "RationalMatrix":
        return RationalMatrix(self.vars, [[a * c for a in r] for r in self.entries])

    def kron(self, other: "RationalMatrix") -> "RationalMatrix":
        n, m = self.shape
        p, q = other.shape
        out = RationalMatrix.zero(self.vars, n * p, m * q)
        for i in range(n):
            for j in range(m):
                for a in range(p):
                    for b in range(q):
                        out.entries[i * p + a][j * q + b] = \
                            self.entries[i][j] * other.entries[a][b]
        return out

    def subs_var(self, src, dst) -> "RationalMatrix":
        return RationalMatrix(self.vars,
                              [[a.subs_var(src, dst) for a in r] for r in self.entries])

    @property
    def is_zero(self) -> bool:
        return all(a.is_zero for r in self.entries for a in r)

    def nonzero_entries(self):
        return [(i, j, self.entries[i][j])
                for i in range(self.shape[0]) for j in range(self.shape[1])
                if not self.entries[i][j].is_zero]

    def eval(self, values: dict[str, complex]):
        import numpy as np
        return np.array([[a.eval(values) for a in r] for r in self.entries],
                        dtype=complex)

    def __str__(self):
        return "[" + "; ".join(", ".join(str(a) for a in r) for r in self.entries) + "]"

    __repr__ = __str__
