"""Sparse multivariate polynomials in y_0, ..., y_n over Q or F_p.

Monomials are packed into a single Python int: the exponent of y_i lives in
bits [16*i, 16*i + 16).  The y_0 field carries a bias of 2**15 so that its
exponent may be negative (Laurent in y_0 only).  With this packing, comparing
two keys as integers is exactly the lexicographic order with y_n most
significant and y_0 least significant, and multiplying two monomials is
``a + b - BIAS``.

Coefficients are ``gmpy2.mpq`` over Q and plain ints in [0, p) over F_p.
A polynomial never stores a zero coefficient.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Iterator, Mapping

import gmpy2
from gmpy2 import mpq

SHIFT = 16
MASK = (1 << SHIFT) - 1
BIAS = 1 << (SHIFT - 1)
ONE_KEY = BIAS
MAX_EXP = BIAS - 1

Exponents = tuple[int, ...]


class FieldMismatchError(ValueError):
    """Raised when combining polynomials over different coefficient fields."""


class ExponentOverflowError(OverflowError):
    pass


def unit(i: int) -> int:
    """Packed offset adding one to the exponent of y_i."""
    return 1 << (SHIFT * i)


def pack(exps: Iterable[int]) -> int:
    key = BIAS
    for i, e in enumerate(exps):
        if i == 0:
            if not -MAX_EXP <= e <= MAX_EXP:
                raise ExponentOverflowError(f"exponent {e} of y0 out of range")
        elif not 0 <= e <= MAX_EXP:
            if e < 0:
                raise ValueError(f"negative exponent {e} for y{i}; only y0 may be Laurent")
            raise ExponentOverflowError(f"exponent {e} of y{i} out of range")
        key += e << (SHIFT * i)
    return key


def unpack(key: int) -> Exponents:
    out = [(key & MASK) - BIAS]
    key >>= SHIFT
    while key:
        out.append(key & MASK)
        key >>= SHIFT
    if len(out) == 1 and out[0] == 0:
        return ()
    return tuple(out)


def key_degree(key: int) -> int:
    d = (key & MASK) - BIAS
    key >>= SHIFT
    while key:
        d += key & MASK
        key >>= SHIFT
    return d


def exponent_of(key: int, i: int) -> int:
    e = (key >> (SHIFT * i)) & MASK
    return e - BIAS if i == 0 else e


def _max_abs_exponent(key: int) -> int:
    m = abs((key & MASK) - BIAS)
    key >>= SHIFT
    while key:
        m = max(m, key & MASK)
        key >>= SHIFT
    return m


def _check_prime(p: int | None) -> None:
    if p is None:
        return
    if p < 3 or p % 2 == 0 or not gmpy2.is_prime(p):
        raise ValueError(f"{p} is not an odd prime")


def coerce_scalar(c, p: int | None):
    """Canonical coefficient for ``c`` in Q (p is None) or F_p."""
    if p is None:
        return mpq(c) if not isinstance(c, Fraction) else mpq(c.numerator, c.denominator)
    if isinstance(c, int):
        return c % p
    q = mpq(c) if not isinstance(c, Fraction) else mpq(c.numerator, c.denominator)
    num, den = int(q.numerator), int(q.denominator)
    if den % p == 0:
        raise ZeroDivisionError(f"denominator {den} is not invertible mod {p}")
    return num * pow(den, -1, p) % p


class Polynomial:
    """Immutable sparse polynomial with a field tag (``p=None`` means Q)."""

    __slots__ = ("_t", "p", "_hash", "_maxexp")

    def __init__(self, terms: Mapping[Exponents, object] | None = None, p: int | None = None):
        _check_prime(p)
        t: dict[int, object] = {}
        if terms:
            for exps, c in terms.items():
                c = coerce_scalar(c, p)
                if c:
                    k = pack(exps)
                    s = t.get(k)
                    if s is None:
                        t[k] = c
                    else:
                        s = s + c if p is None else (s + c) % p
                        if s:
                            t[k] = s
                        else:
                            del t[k]
        self._t = t
        self.p = p
        self._hash = None
        self._maxexp = None

    @classmethod
    def _raw(cls, t: dict[int, object], p: int | None) -> Polynomial:
        obj = object.__new__(cls)
        obj._t = t
        obj.p = p
        obj._hash = None
        obj._maxexp = None
        return obj

    # constructors -----------------------------------------------------
    @classmethod
    def zero(cls, p: int | None = None) -> Polynomial:
        return cls._raw({}, p)

    @classmethod
    def const(cls, c, p: int | None = None) -> Polynomial:
        c = coerce_scalar(c, p)
        return cls._raw({ONE_KEY: c} if c else {}, p)

    @classmethod
    def var(cls, i: int, p: int | None = None, power: int = 1) -> Polynomial:
        if i < 0:
            raise ValueError("variable index must be nonnegative")
        one = mpq(1) if p is None else 1
        return cls._raw({ONE_KEY + power * unit(i): one}, p) if power else cls.const(1, p)

    @classmethod
    def monomial(cls, exps: Exponents, coeff=1, p: int | None = None) -> Polynomial:
        return cls({tuple(exps): coeff}, p)

    # basic access -----------------------------------------------------
    @property
    def raw_terms(self) -> dict[int, object]:
        """Packed-key view; callers must not mutate it."""
        return self._t

    def terms(self) -> Iterator[tuple[Exponents, object]]:
        """Terms in decreasing lex order."""
        for k in sorted(self._t, reverse=True):
            yield unpack(k), self._t[k]

    def coefficient(self, exps: Exponents):
        c = self._t.get(pack(exps))
        if c is None:
            return mpq(0) if self.p is None else 0
        return c

    def __len__(self) -> int:
        return len(self._t)

    def __bool__(self) -> bool:
        return bool(self._t)

    def is_zero(self) -> bool:
        return not self._t

    @property
    def field(self) -> str:
        return "Q" if self.p is None else "Fp"

    def nvars(self) -> int:
        """Number of variables y_0..y_{m-1} needed to hold every term."""
        m = 0
        for k in self._t:
            m = max(m, len(unpack(k)))
        return m

    def max_index(self) -> int:
        return self.nvars() - 1

    def max_abs_exponent(self) -> int:
        if self._maxexp is None:
            self._maxexp = max((_max_abs_exponent(k) for k in self._t), default=0)
        return self._maxexp

    def degrees(self) -> set[int]:
        return {key_degree(k) for k in self._t}

    def degree(self) -> int:
        if not self._t:
            raise ValueError("degree of the zero polynomial")
        return max(self.degrees())

    def is_homogeneous(self) -> bool:
        return len(self.degrees()) <= 1

    def has_laurent_terms(self) -> bool:
        return any((k & MASK) < BIAS for k in self._t)

    def leading_term(self) -> tuple[Exponents, object]:
        if not self._t:
            raise ValueError("leading term of the zero polynomial")
        k = max(self._t)
        return unpack(k), self._t[k]

    def leading_key(self) -> int:
        if not self._t:
            raise ValueError("leading term of the zero polynomial")
        return max(self._t)

    def leading_coefficient(self):
        return self._t[self.leading_key()]

    # equality ---------------------------------------------------------
    def __eq__(self, other) -> bool:
        if isinstance(other, Polynomial):
            return self.p == other.p and self._t == other._t
        if isinstance(other, (int, Fraction)) or type(other) is type(mpq(0)):
            return self == Polynomial.const(other, self.p)
        return NotImplemented

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.p, frozenset(self._t.items())))
        return self._hash

    # arithmetic -------------------------------------------------------
    def _coerce(self, other) -> Polynomial:
        if isinstance(other, Polynomial):
            if other.p != self.p:
                raise FieldMismatchError(f"cannot combine {self.field}(p={self.p}) with {other.field}(p={other.p})")
            return other
        return Polynomial.const(other, self.p)

    def __add__(self, other) -> Polynomial:
        try:
            other = self._coerce(other)
        except TypeError:
            return NotImplemented
        if len(other._t) > len(self._t):
            a, b = other, self
        else:
            a, b = self, other
        t = dict(a._t)
        p = self.p
        for k, c in b._t.items():
            s = t.get(k)
            if s is None:
                t[k] = c
            else:
                s = s + c if p is None else (s + c) % p
                if s:
                    t[k] = s
                else:
                    del t[k]
        return Polynomial._raw(t, p)

    __radd__ = __add__

    def __neg__(self) -> Polynomial:
        p = self.p
        if p is None:
            return Polynomial._raw({k: -c for k, c in self._t.items()}, p)
        return Polynomial._raw({k: p - c for k, c in self._t.items()}, p)

    def __sub__(self, other) -> Polynomial:
        try:
            other = self._coerce(other)
        except TypeError:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other) -> Polynomial:
        return self._coerce(other) - self

    def scale(self, c) -> Polynomial:
        c = coerce_scalar(c, self.p)
        if not c:
            return Polynomial._raw({}, self.p)
        if self.p is None:
            return Polynomial._raw({k: v * c for k, v in self._t.items()}, None)
        p = self.p
        return Polynomial._raw({k: v * c % p for k, v in self._t.items()}, p)

    def __mul__(self, other) -> Polynomial:
        if not isinstance(other, Polynomial):
            try:
                return self.scale(other)
            except TypeError:
                return NotImplemented
        other = self._coerce(other)
        if self.max_abs_exponent() + other.max_abs_exponent() > MAX_EXP:
            raise ExponentOverflowError("product exponent exceeds the packed range")
        a, b = self._t, other._t
        if len(a) < len(b):
            a, b = b, a
        p = self.p
        t: dict[int, object] = {}
        get = t.get
        for kb, cb in b.items():
            off = kb - BIAS
            for ka, ca in a.items():
                k = ka + off
                s = get(k)
                t[k] = ca * cb if s is None else s + ca * cb
        if p is None:
            t = {k: c for k, c in t.items() if c}
        else:
            t = {k: c % p for k, c in t.items() if c % p}
        return Polynomial._raw(t, p)

    def __rmul__(self, other) -> Polynomial:
        return self.scale(other)

    def mul_monomial(self, key: int, coeff=None) -> Polynomial:
        """Multiply by the packed monomial ``key`` (times ``coeff``)."""
        off = key - BIAS
        if coeff is None:
            return Polynomial._raw({k + off: c for k, c in self._t.items()}, self.p)
        return Polynomial._raw({k + off: c for k, c in self.scale(coeff)._t.items()}, self.p)

    def __truediv__(self, c) -> Polynomial:
        if isinstance(c, Polynomial):
            if len(c._t) != 1:
                raise ValueError("division only by a scalar or a y0-power monomial")
            (k, cc), = c._t.items()
            if unpack(k)[1:]:
                raise ValueError("division only by a scalar or a y0-power monomial")
            inv = 1 / cc if self.p is None else pow(cc, -1, self.p)
            return self.mul_monomial(2 * BIAS - k, inv)
        c = coerce_scalar(c, self.p)
        if not c:
            raise ZeroDivisionError("division by zero")
        return self.scale(1 / c if self.p is None else pow(c, -1, self.p))

    def __pow__(self, e: int) -> Polynomial:
        if not isinstance(e, int):
            return NotImplemented
        if e < 0:
            if len(self._t) == 1:
                (k, c), = self._t.items()
                exps = unpack(k)
                if not exps[1:]:
                    a = exps[0] if exps else 0
                    cc = c**e if self.p is None else pow(c, e, self.p)
                    return Polynomial.monomial((a * e,), cc, self.p)
            raise ValueError("negative powers only of y0-monomials")
        if self.p is not None and e >= self.p and e % self.p == 0:
            return self.frobenius() ** (e // self.p)
        result = Polynomial.const(1, self.p)
        base = self
        while e:
            if e & 1:
                result = result * base
            e >>= 1
            if e:
                base = base * base
        return result

    def frobenius(self) -> Polynomial:
        """f**p over F_p: sum of c * m**p (coefficients are fixed by Fermat)."""
        if self.p is None:
            raise ValueError("Frobenius needs a prime field")
        p = self.p
        if self.max_abs_exponent() * p > MAX_EXP:
            raise ExponentOverflowError("p-th power exceeds the packed range")
        return Polynomial._raw({p * (k - BIAS) + BIAS: c for k, c in self._t.items()}, p)

    # calculus ---------------------------------------------------------
    def derivative(self, i: int) -> Polynomial:
        if i < 0:
            raise ValueError(f"variable index {i} out of range")
        u = unit(i)
        p = self.p
        t = {}
        for k, c in self._t.items():
            e = exponent_of(k, i)
            if e:
                v = c * e if p is None else c * e % p
                if v:
                    t[k - u] = v
        return Polynomial._raw(t, p)

    # evaluation and coefficient maps ----------------------------------
    def map_coefficients(self, fn, p: int | None) -> Polynomial:
        t = {}
        for k, c in self._t.items():
            v = coerce_scalar(fn(c), p)
            if v:
                t[k] = v
        return Polynomial._raw(t, p)

    def evaluate(self, point):
        """Exact value at ``point`` (sequence indexed by variable)."""
        p = self.p
        total = mpq(0) if p is None else 0
        for k, c in self._t.items():
            v = c
            for i, e in enumerate(unpack(k)):
                if e:
                    if p is None:
                        v = v * mpq(point[i]) ** e
                    else:
                        v = v * pow(point[i], e, p)
            total += v
        return total if p is None else total % p

    def integer_content(self) -> tuple[mpq, Polynomial]:
        """(c, f/c) with f/c having coprime integer coefficients (Q only)."""
        if self.p is not None:
            raise ValueError("integer content is defined over Q only")
        if not self._t:
            return mpq(1), self
        from math import gcd, lcm

        den = 1
        num = 0
        for c in self._t.values():
            den = lcm(den, int(c.denominator))
        for c in self._t.values():
            num = gcd(num, int(c * den))
        lc = self.leading_coefficient()
        content = mpq(num, den) if lc > 0 else mpq(-num, den)
        return content, self.scale(1 / content)

    def __repr__(self) -> str:
        from .text import format_poly

        tag = "" if self.p is None else f" mod {self.p}"
        return f"Polynomial({format_poly(self)!r}{tag})"

    def __str__(self) -> str:
        from .text import format_poly

        return format_poly(self)


def y(i: int, p: int | None = None) -> Polynomial:
    """The variable y_i."""
    return Polynomial.var(i, p)


def add(f: Polynomial, g: Polynomial) -> Polynomial:
    if f.p != g.p:
        raise FieldMismatchError("field tags differ")
    return f + g


def mul(f: Polynomial, g: Polynomial) -> Polynomial:
    if f.p != g.p:
        raise FieldMismatchError("field tags differ")
    return f * g


def partial_derivative(f: Polynomial, i: int) -> Polynomial:
    return f.derivative(i)


def leading_term(f: Polynomial) -> tuple[Exponents, object]:
    return f.leading_term()
