"""The sl2 triple acting on Q[y_0..y_n]: down, raise and weight."""

from __future__ import annotations

from dataclasses import dataclass

from .polycore import Polynomial
from .polycore.poly import MASK, SHIFT, exponent_of, unit, unpack


class NotAnEigenvectorError(ValueError):
    pass


class NotInvariantError(ValueError):
    pass


def down(f: Polynomial) -> Polynomial:
    """sum_i y_i * df/dy_{i+1}; kills every power of y_0."""
    p = f.p
    out: dict[int, object] = {}
    for key, c in f.raw_terms.items():
        rest = key >> SHIFT
        i = 1
        while rest:
            e = rest & MASK
            if e:
                # y_i^e -> e * y_i^(e-1) * y_(i-1)
                k = key - unit(i) + unit(i - 1)
                v = c * e
                s = out.get(k)
                out[k] = v if s is None else s + v
            rest >>= SHIFT
            i += 1
    if p is None:
        out = {k: v for k, v in out.items() if v}
    else:
        out = {k: v % p for k, v in out.items() if v % p}
    return Polynomial._raw(out, p)


def raise_(f: Polynomial, n: int) -> Polynomial:
    """Leibniz extension of y_i -> (i+1)(n-i) y_{i+1}."""
    if f.has_laurent_terms():
        raise ValueError("raise needs nonnegative exponents")
    if f and f.max_index() > n:
        raise ValueError(f"variable index {f.max_index()} exceeds n={n}")
    p = f.p
    out: dict[int, object] = {}
    for key, c in f.raw_terms.items():
        for i in range(n):
            e = exponent_of(key, i)
            if e:
                k = key - unit(i) + unit(i + 1)
                v = c * e * (i + 1) * (n - i)
                s = out.get(k)
                out[k] = v if s is None else s + v
    if p is None:
        out = {k: v for k, v in out.items() if v}
    else:
        out = {k: v % p for k, v in out.items() if v % p}
    return Polynomial._raw(out, p)


def monomial_weight(key: int, n: int) -> int:
    w = 0
    for i, e in enumerate(unpack(key)):
        w += e * (n - 2 * i)
    return w


def weight(f: Polynomial, n: int) -> int:
    """Common weight of all monomials of f; raises if they differ."""
    if f.is_zero():
        raise ValueError("weight of the zero polynomial")
    ws = {monomial_weight(k, n) for k in f.raw_terms}
    if len(ws) != 1:
        raise NotAnEigenvectorError(f"not an eigenvector: monomial weights {sorted(ws)}")
    return ws.pop()


def is_invariant(f: Polynomial) -> bool:
    return down(f).is_zero()


@dataclass(frozen=True)
class HomogeneousInvariant:
    """A certified invariant, homogeneous of ``degree`` and of weight ``weight``."""

    poly: Polynomial
    n: int
    degree: int
    weight: int

    @classmethod
    def certify(cls, f: Polynomial, n: int) -> HomogeneousInvariant:
        if f.is_zero():
            raise ValueError("zero polynomial is not a homogeneous invariant")
        if f.max_index() > n:
            raise ValueError(f"variable index {f.max_index()} exceeds n={n}")
        if not f.is_homogeneous():
            raise ValueError("polynomial is not homogeneous")
        w = weight(f, n)
        if not is_invariant(f):
            raise NotInvariantError("down(f) != 0")
        return cls(f, n, f.degree(), w)


__all__ = [
    "HomogeneousInvariant",
    "NotAnEigenvectorError",
    "NotInvariantError",
    "down",
    "is_invariant",
    "monomial_weight",
    "raise_",
    "weight",
]
