"""Univariate rational functions in t over Q and polynomials in z over Q(t).

Numerator and denominator are dense ``flint.fmpq_poly`` objects; every
RationalFunction is kept reduced with a monic denominator.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence

import flint

_fq = flint.fmpq_poly


def _to_fraction(q) -> Fraction:
    return Fraction(int(q.p), int(q.q))


def _as_fmpq(c) -> flint.fmpq:
    if isinstance(c, flint.fmpq):
        return c
    if isinstance(c, int):
        return flint.fmpq(c)
    c = Fraction(c)
    return flint.fmpq(c.numerator, c.denominator)


def tpoly(coeffs: Sequence) -> flint.fmpq_poly:
    """Dense polynomial in t from low-to-high coefficients."""
    return _fq([_as_fmpq(c) for c in coeffs])


class RationalFunction:
    """Reduced quotient num/den of polynomials in t; den is monic."""

    __slots__ = ("num", "den")

    def __init__(self, num=0, den=1):
        if not isinstance(num, _fq):
            num = _fq([_as_fmpq(num)])
        if not isinstance(den, _fq):
            den = _fq([_as_fmpq(den)])
        if den.is_zero():
            raise ZeroDivisionError("zero denominator")
        if num.is_zero():
            self.num, self.den = _fq(0), _fq(1)
            return
        g = num.gcd(den)
        if g.degree() > 0:
            num = num // g
            den = den // g
        lc = den.leading_coefficient()
        if lc != 1:
            num = num / lc
            den = den / lc
        self.num, self.den = num, den

    @classmethod
    def _raw(cls, num: flint.fmpq_poly, den: flint.fmpq_poly) -> RationalFunction:
        obj = object.__new__(cls)
        obj.num, obj.den = num, den
        return obj

    @classmethod
    def t(cls) -> RationalFunction:
        return cls(_fq([0, 1]))

    @classmethod
    def from_coeffs(cls, num: Sequence, den: Sequence = (1,)) -> RationalFunction:
        return cls(tpoly(num), tpoly(den))

    def _coerce(self, other) -> RationalFunction:
        if isinstance(other, RationalFunction):
            return other
        if isinstance(other, _fq):
            return RationalFunction._raw(other, _fq(1))
        return RationalFunction(other)

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def __bool__(self) -> bool:
        return not self.num.is_zero()

    def __add__(self, other) -> RationalFunction:
        o = self._coerce(other)
        if self.den == o.den:
            return RationalFunction(self.num + o.num, self.den)
        return RationalFunction(self.num * o.den + o.num * self.den, self.den * o.den)

    __radd__ = __add__

    def __neg__(self) -> RationalFunction:
        return RationalFunction._raw(-self.num, self.den)

    def __sub__(self, other) -> RationalFunction:
        return self + (-self._coerce(other))

    def __rsub__(self, other) -> RationalFunction:
        return self._coerce(other) - self

    def __mul__(self, other) -> RationalFunction:
        o = self._coerce(other)
        if self.is_zero() or o.is_zero():
            return RationalFunction()
        return RationalFunction(self.num * o.num, self.den * o.den)

    __rmul__ = __mul__

    def inverse(self) -> RationalFunction:
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero rational function")
        return RationalFunction(self.den, self.num)

    def __truediv__(self, other) -> RationalFunction:
        return self * self._coerce(other).inverse()

    def __rtruediv__(self, other) -> RationalFunction:
        return self._coerce(other) * self.inverse()

    def __pow__(self, e: int) -> RationalFunction:
        if e < 0:
            return RationalFunction(self.den**-e, self.num**-e)
        return RationalFunction._raw(self.num**e, self.den**e)

    def __eq__(self, other) -> bool:
        try:
            o = self._coerce(other)
        except (TypeError, ValueError):
            return NotImplemented
        # cross-multiplication: robust to non-reduced operands
        return self.num * o.den == o.num * self.den

    def __hash__(self) -> int:
        return hash((str(self.num), str(self.den)))

    def __call__(self, t) -> Fraction:
        t = _as_fmpq(t)
        d = self.den(t)
        if d == 0:
            raise ZeroDivisionError("pole at the evaluation point")
        return _to_fraction(self.num(t) / d)

    def num_coeffs(self) -> list[Fraction]:
        return [_to_fraction(c) for c in self.num.coeffs()]

    def den_coeffs(self) -> list[Fraction]:
        return [_to_fraction(c) for c in self.den.coeffs()]

    def __repr__(self) -> str:
        return f"RationalFunction({format_tpoly(self.num)!r}, {format_tpoly(self.den)!r})"

    def __str__(self) -> str:
        if self.den.is_one():
            return format_tpoly(self.num)
        return f"({format_tpoly(self.num)})/({format_tpoly(self.den)})"


def format_tpoly(p: flint.fmpq_poly, var: str = "t") -> str:
    """Ascending-degree text, e.g. ``1 - t^2 + 1/2*t^3``."""
    if p.is_zero():
        return "0"
    out = []
    for d, c in enumerate(p.coeffs()):
        if c == 0:
            continue
        c = _to_fraction(c)
        neg = c < 0
        a = -c if neg else c
        mono = "" if d == 0 else (var if d == 1 else f"{var}^{d}")
        if not mono:
            body = str(a)
        elif a == 1:
            body = mono
        else:
            body = f"{a}*{mono}"
        if not out:
            out.append(f"-{body}" if neg else body)
        else:
            out.append(f"- {body}" if neg else f"+ {body}")
    return " ".join(out)


def series_expand(r: RationalFunction, K: int) -> list[Fraction]:
    """First K Taylor coefficients of r at t = 0."""
    den = [_to_fraction(c) for c in r.den.coeffs()]
    num = [_to_fraction(c) for c in r.num.coeffs()]
    if not den or den[0] == 0:
        raise ZeroDivisionError("rational function has a pole at t = 0")
    d0 = den[0]
    out: list[Fraction] = []
    for k in range(K):
        s = num[k] if k < len(num) else Fraction(0)
        for j in range(1, min(k, len(den) - 1) + 1):
            s -= den[j] * out[k - j]
        out.append(s / d0)
    return out


class ZPoly:
    """Dense polynomial in z with RationalFunction coefficients (low to high)."""

    __slots__ = ("c",)

    def __init__(self, coeffs: Sequence = ()):
        c = [x if isinstance(x, RationalFunction) else RationalFunction(x) for x in coeffs]
        while c and c[-1].is_zero():
            c.pop()
        self.c = c

    @classmethod
    def z(cls) -> ZPoly:
        return cls([0, 1])

    @classmethod
    def monomial(cls, d: int, coeff=1) -> ZPoly:
        return cls([0] * d + [coeff])

    def degree(self) -> int:
        return len(self.c) - 1

    def is_zero(self) -> bool:
        return not self.c

    def coeff(self, d: int) -> RationalFunction:
        return self.c[d] if 0 <= d < len(self.c) else RationalFunction()

    def lead(self) -> RationalFunction:
        if not self.c:
            raise ValueError("zero polynomial has no leading coefficient")
        return self.c[-1]

    def _coerce(self, other) -> ZPoly:
        return other if isinstance(other, ZPoly) else ZPoly([other])

    def __add__(self, other) -> ZPoly:
        o = self._coerce(other)
        n = max(len(self.c), len(o.c))
        return ZPoly([self.coeff(i) + o.coeff(i) for i in range(n)])

    __radd__ = __add__

    def __neg__(self) -> ZPoly:
        return ZPoly([-x for x in self.c])

    def __sub__(self, other) -> ZPoly:
        return self + (-self._coerce(other))

    def __mul__(self, other) -> ZPoly:
        o = self._coerce(other)
        if self.is_zero() or o.is_zero():
            return ZPoly()
        out = [RationalFunction() for _ in range(len(self.c) + len(o.c) - 1)]
        for i, a in enumerate(self.c):
            if a.is_zero():
                continue
            for j, b in enumerate(o.c):
                if not b.is_zero():
                    out[i + j] = out[i + j] + a * b
        return ZPoly(out)

    __rmul__ = __mul__

    def scale(self, r) -> ZPoly:
        return ZPoly([x * r for x in self.c])

    def divmod(self, other: ZPoly) -> tuple[ZPoly, ZPoly]:
        if other.is_zero():
            raise ZeroDivisionError("division by the zero polynomial")
        rem = list(self.c)
        db = other.degree()
        inv = other.lead().inverse()
        quo = [RationalFunction() for _ in range(max(len(rem) - db, 0))]
        for d in range(len(rem) - 1, db - 1, -1):
            c = rem[d]
            if c.is_zero():
                continue
            q = c * inv
            quo[d - db] = q
            for j, b in enumerate(other.c):
                if not b.is_zero():
                    rem[d - db + j] = rem[d - db + j] - q * b
        return ZPoly(quo), ZPoly(rem[:db])

    def __mod__(self, other: ZPoly) -> ZPoly:
        return self.divmod(other)[1]

    def monic(self) -> ZPoly:
        return self.scale(self.lead().inverse())

    def __eq__(self, other) -> bool:
        o = self._coerce(other)
        return len(self.c) == len(o.c) and all(a == b for a, b in zip(self.c, o.c))

    def __repr__(self) -> str:
        return f"ZPoly({self})"

    def __str__(self) -> str:
        if not self.c:
            return "0"
        parts = []
        for d in range(len(self.c) - 1, -1, -1):
            x = self.c[d]
            if x.is_zero():
                continue
            mono = "" if d == 0 else ("z" if d == 1 else f"z^{d}")
            coeff = str(x)
            if not mono:
                parts.append(f"({coeff})")
            elif coeff == "1":
                parts.append(mono)
            else:
                parts.append(f"({coeff})*{mono}")
        return " + ".join(parts)


def xgcd_z(a: ZPoly, b: ZPoly) -> tuple[ZPoly, ZPoly, ZPoly]:
    """Extended Euclid over Q(t): returns (g, s, u) with s*a + u*b = g, g monic."""
    if a.is_zero() and b.is_zero():
        raise ValueError("xgcd of two zero polynomials")
    r0, r1 = a, b
    s0, s1 = ZPoly([1]), ZPoly()
    u0, u1 = ZPoly(), ZPoly([1])
    while not r1.is_zero():
        q, r = r0.divmod(r1)
        r0, r1 = r1, r
        s0, s1 = s1, s0 - q * s1
        u0, u1 = u1, u0 - q * u1
    inv = r0.lead().inverse()
    return r0.scale(inv), s0.scale(inv), u0.scale(inv)
