"""Lowering ladders, the transvectant circ_d, the z- and w-sequences, and recipes.

A recipe is a small expression language for invariants built from y0 by
products, powers and left-normed transvectant chains, e.g.
``z3^2 z22 o_5 y0`` or ``y0 ∘_2 y0 ∘_1 y0``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import factorial
from typing import Mapping, Union

from gmpy2 import mpq

from .polycore import Polynomial
from .polycore.poly import ONE_KEY, unit
from .sl2 import HomogeneousInvariant, raise_

Invariantish = Union[HomogeneousInvariant, Polynomial]


class CircRangeError(ValueError):
    pass


def _as_invariant(z: Invariantish, n: int | None) -> HomogeneousInvariant:
    if isinstance(z, HomogeneousInvariant):
        if n is not None and z.n != n:
            raise ValueError(f"invariant lives in n={z.n}, requested n={n}")
        return z
    if n is None:
        raise ValueError("n is required when passing a bare polynomial")
    return HomogeneousInvariant.certify(z, n)


# ---------------------------------------------------------------- ladders

_LADDERS: dict[tuple[Polynomial, int], list[Polynomial]] = {}
_LADDER_CACHE_LIMIT = 2048


def _ladder(z: HomogeneousInvariant, k: int) -> list[Polynomial]:
    if z.poly.p is not None:
        raise ValueError("lowering ladders need characteristic 0")
    key = (z.poly, z.n)
    lad = _LADDERS.get(key)
    if lad is None:
        if len(_LADDERS) >= _LADDER_CACHE_LIMIT:
            _LADDERS.clear()
        lad = _LADDERS[key] = [z.poly]
    w, n = z.weight, z.n
    while len(lad) <= k:
        j = len(lad)
        lad.append(raise_(lad[-1], n).scale(mpq(1, j * (w - j + 1))))
    return lad


def lower(z: Invariantish, k: int, n: int | None = None) -> Polynomial:
    """k-th ladder element: z_0 = z, z_j = raise(z_{j-1}) / (j (w - j + 1))."""
    z = _as_invariant(z, n)
    if k < 0 or k > z.weight:
        raise CircRangeError(f"ladder index {k} outside 0..{z.weight}")
    return _ladder(z, k)[k]


@dataclass(frozen=True)
class LoweringLadder:
    base: HomogeneousInvariant
    elements: tuple[Polynomial, ...]

    @classmethod
    def build(cls, z: Invariantish, d: int, n: int | None = None) -> LoweringLadder:
        z = _as_invariant(z, n)
        if d > z.weight:
            raise CircRangeError(f"ladder length {d} exceeds weight {z.weight}")
        return cls(z, tuple(_ladder(z, d)[: d + 1]))

    @property
    def weight(self) -> int:
        return self.base.weight


def _is_y0(z: HomogeneousInvariant) -> bool:
    t = z.poly.raw_terms
    if len(t) != 1:
        return False
    (k, c), = t.items()
    return k == ONE_KEY + unit(0) and c == 1


# ---------------------------------------------------------------- transvectant

def circ(z1: Invariantish, z2: Invariantish, d: int, n: int | None = None, check: bool = True) -> HomogeneousInvariant:
    """Transvectant sum_{i=0}^d (-1)^i z1_i z2_{d-i} of two invariant weight vectors."""
    a = _as_invariant(z1, n)
    b = _as_invariant(z2, n if n is not None else a.n)
    if a.n != b.n:
        raise ValueError("arguments live in different n")
    if not 0 <= d <= min(a.weight, b.weight):
        raise CircRangeError(f"d={d} outside 0..min({a.weight}, {b.weight})")
    la = _ladder(a, d)
    if _is_y0(b):
        # ladder of y0 is y_0, y_1, ..., y_n
        acc: dict[int, object] = {}
        for i in range(d + 1):
            off = unit(d - i)
            neg = i & 1
            for k, c in la[i].raw_terms.items():
                kk = k + off
                v = -c if neg else c
                s = acc.get(kk)
                acc[kk] = v if s is None else s + v
        poly = Polynomial._raw({k: v for k, v in acc.items() if v}, None)
    else:
        lb = _ladder(b, d)
        poly = Polynomial.zero()
        for i in range(d + 1):
            term = la[i] * lb[d - i]
            poly = poly - term if i & 1 else poly + term
    if check:
        if poly.is_zero():
            return HomogeneousInvariant(poly, a.n, a.degree + b.degree, a.weight + b.weight - 2 * d)
        res = HomogeneousInvariant.certify(poly, a.n)
        assert res.weight == a.weight + b.weight - 2 * d
        return res
    return HomogeneousInvariant(poly, a.n, a.degree + b.degree, a.weight + b.weight - 2 * d)


def circ_y0_poly(poly: Polynomial, weight: int, d: int, n: int) -> Polynomial:
    """poly o_d y0 for an invariant weight vector over Q or F_p (p larger than the ladder divisors)."""
    if not 0 <= d <= min(weight, n):
        raise CircRangeError(f"d={d} outside 0..min({weight}, {n})")
    p = poly.p
    acc: dict[int, object] = {}
    z = poly
    for i in range(d + 1):
        if i:
            div = i * (weight - i + 1)
            if p is not None and div % p == 0:
                raise ZeroDivisionError(f"ladder divisor {div} vanishes mod {p}")
            z = raise_(z, n).scale(mpq(1, div))
        off = unit(d - i)
        neg = i & 1
        for k, c in z.raw_terms.items():
            kk = k + off
            v = -c if neg else c
            s = acc.get(kk)
            acc[kk] = v if s is None else s + v
    if p is None:
        return Polynomial._raw({k: v for k, v in acc.items() if v}, None)
    return Polynomial._raw({k: v % p for k, v in acc.items() if v % p}, p)


def y0_invariant(n: int) -> HomogeneousInvariant:
    return HomogeneousInvariant(Polynomial.var(0), n, 1, n)


@lru_cache(maxsize=None)
def z_gen(i: int, n: int) -> HomogeneousInvariant:
    """z_1 = y0; even i: y0 o_i y0; odd i: y0 o_1 (y0 o_{i-1} y0)."""
    if not 1 <= i <= n:
        raise ValueError(f"z_{i} is defined for 1 <= i <= n (n={n})")
    y0 = y0_invariant(n)
    if i == 1:
        return y0
    if i % 2 == 0:
        return circ(y0, y0, i)
    inner = circ(y0, y0, i - 1)
    return circ(y0, inner, 1)


@lru_cache(maxsize=None)
def w_gen(i: int) -> Polynomial:
    """(-1)^i/i! y1^i + sum_{j<i} (-1)^j/j! y0^(i-1-j) y1^j y_(i-j)."""
    if i < 1:
        raise ValueError("w_i is defined for i >= 1")
    if i == 1:
        return Polynomial.var(0)
    terms: dict[tuple[int, ...], Fraction] = {}

    def put(exps: list[int], c: Fraction) -> None:
        key = tuple(exps)
        terms[key] = terms.get(key, Fraction(0)) + c

    e = [0] * (i + 1)
    e[1] = i
    put(e, Fraction((-1) ** i, factorial(i)))
    for j in range(i):
        e = [0] * (i + 1)
        e[0] = i - 1 - j
        e[1] += j
        e[i - j] += 1
        put(e, Fraction((-1) ** j, factorial(j)))
    return Polynomial(terms)


def clebsch_gordan(m: int, n: int) -> list[int]:
    """Highest weights of the irreducible summands of U_m (x) U_n."""
    if m < 0 or n < 0:
        raise ValueError("m and n must be nonnegative")
    return [m + n - 2 * i for i in range(min(m, n) + 1)]


# ---------------------------------------------------------------- recipes

class RecipeError(ValueError):
    pass


@dataclass(frozen=True)
class Y0:
    def __str__(self) -> str:
        return "y0"


@dataclass(frozen=True)
class Ref:
    name: str

    def __str__(self) -> str:
        return self.name


@dataclass(frozen=True)
class Power:
    base: object
    exp: int

    def __str__(self) -> str:
        return f"{self.base}^{self.exp}"


@dataclass(frozen=True)
class Product:
    factors: tuple

    def __str__(self) -> str:
        return " ".join(str(f) for f in self.factors)


@dataclass(frozen=True)
class Circ:
    left: object
    d: int

    def __str__(self) -> str:
        return f"{self.left} o_{self.d} y0"


@dataclass(frozen=True)
class Scaled:
    coeff: Fraction
    expr: object

    def __str__(self) -> str:
        return f"{self.coeff} * ({self.expr})"


Recipe = Union[Y0, Ref, Power, Product, Circ, Scaled]

_TOKEN = re.compile(
    r"\s*(?:(?P<circ>∘|o|\\circ)\s*_\s*(?P<d>\d+)"
    r"|(?P<name>[A-Za-z]+\d*)"
    r"|(?P<num>[+-]?\d+(?:/\d+)?)"
    r"|(?P<sym>[()^*]))"
)


def _normalize_latex(text: str) -> str:
    """Accept typeset forms such as ``z_{3}^{2}\\circ_{4}y_0``."""
    text = text.replace("\\circ", "∘")
    text = re.sub(r"_\{(\d+)\}", r"_\1", text)
    text = re.sub(r"\^\{\}", "", text)
    text = re.sub(r"\^\{(\d+)\}", r"^\1", text)
    return re.sub(r"(?<![A-Za-z])([a-np-zA-Z])_(\d+)", r"\1\2", text)


def _tokenize(text: str) -> list[tuple[str, str, int]]:
    out = []
    pos = 0
    text = text.rstrip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise RecipeError(f"unexpected input at position {pos}: {text[pos:pos + 12]!r}")
        if m.group("circ"):
            out.append(("circ", m.group("d"), m.start()))
        elif m.group("name"):
            out.append(("name", m.group("name"), m.start()))
        elif m.group("num"):
            out.append(("num", m.group("num"), m.start()))
        else:
            out.append(("sym", m.group("sym"), m.start()))
        pos = m.end()
    return out


class _RecipeParser:
    def __init__(self, text: str):
        self.text = text
        self.toks = _tokenize(_normalize_latex(text))
        self.i = 0

    def peek(self):
        return self.toks[self.i] if self.i < len(self.toks) else (None, None, len(self.text))

    def next(self):
        t = self.peek()
        self.i += 1
        return t

    def fail(self, msg: str):
        raise RecipeError(f"{msg} at position {self.peek()[2]} in {self.text!r}")

    def parse(self) -> Recipe:
        kind, val, _ = self.peek()
        coeff = None
        toks = self.toks
        if kind == "sym" and val == "(" and len(toks) > 2 and toks[1][0] == "num" and toks[2][1] == ")":
            coeff = Fraction(toks[1][1])
            self.i = 3
        elif kind == "num":
            self.next()
            coeff = Fraction(val)
        if coeff is not None:
            if self.peek()[0] == "sym" and self.peek()[1] == "*":
                self.next()
        e = self.expr()
        if self.peek()[0] is not None:
            self.fail("trailing input")
        return Scaled(coeff, e) if coeff is not None else e

    def expr(self) -> Recipe:
        node = self.product()
        while self.peek()[0] == "circ":
            _, d, _ = self.next()
            kind, val, _ = self.next()
            if kind != "name" or val != "y0":
                self.fail("expected y0 to the right of a transvectant")
            node = Circ(node, int(d))
        return node

    def product(self) -> Recipe:
        factors = []
        while True:
            kind, val, _ = self.peek()
            if kind == "name" or (kind == "sym" and val == "("):
                factors.append(self.power())
                if self.peek()[0] == "sym" and self.peek()[1] == "*":
                    self.next()
            else:
                break
        if not factors:
            self.fail("expected y0, a generator name or '('")
        return factors[0] if len(factors) == 1 else Product(tuple(factors))

    def power(self) -> Recipe:
        kind, val, _ = self.next()
        if kind == "name":
            base: Recipe = Y0() if val == "y0" else Ref(val)
        else:
            base = self.expr()
            if self.next()[1] != ")":
                self.fail("expected ')'")
        if self.peek()[0] == "sym" and self.peek()[1] == "^":
            self.next()
            kind, val, _ = self.next()
            if kind != "num" or int(Fraction(val)) != Fraction(val) or int(val) < 0:
                self.fail("expected a nonnegative integer exponent")
            base = Power(base, int(val))
        return base


def parse_recipe(text: str) -> Recipe:
    return _RecipeParser(text).parse()


def eval_recipe(
    recipe: Recipe | str,
    n: int,
    env: Mapping[str, Invariantish] | None = None,
) -> HomogeneousInvariant:
    """Evaluate a recipe to a certified invariant in Q[y_0..y_n]."""
    if isinstance(recipe, str):
        recipe = parse_recipe(recipe)
    env = dict(env or {})
    resolved: dict[str, HomogeneousInvariant] = {}

    def look(name: str) -> HomogeneousInvariant:
        if name not in resolved:
            if name not in env:
                raise RecipeError(f"unknown generator {name!r}")
            resolved[name] = _as_invariant(env[name], n)
        return resolved[name]

    def ev(node) -> HomogeneousInvariant:
        if isinstance(node, Y0):
            return y0_invariant(n)
        if isinstance(node, Ref):
            return look(node.name)
        if isinstance(node, Power):
            b = ev(node.base)
            return HomogeneousInvariant(b.poly ** node.exp, n, b.degree * node.exp, b.weight * node.exp)
        if isinstance(node, Product):
            parts = [ev(f) for f in node.factors]
            poly = parts[0].poly
            for q in parts[1:]:
                poly = poly * q.poly
            return HomogeneousInvariant(poly, n, sum(q.degree for q in parts), sum(q.weight for q in parts))
        if isinstance(node, Circ):
            left = ev(node.left)
            if not 0 <= node.d <= min(left.weight, n):
                raise RecipeError(f"node '{node}': d={node.d} exceeds min(weight {left.weight}, {n})")
            if left.poly.is_zero():
                raise RecipeError(f"node '{node}': left operand is zero")
            return circ(left, y0_invariant(n), node.d)
        if isinstance(node, Scaled):
            inner = ev(node.expr)
            return HomogeneousInvariant(inner.poly.scale(node.coeff), n, inner.degree, inner.weight)
        raise RecipeError(f"unknown recipe node {node!r}")

    return ev(recipe)


def eval_recipe_list(items: list[tuple[str, str]], n: int) -> dict[str, HomogeneousInvariant]:
    """Evaluate named recipes in order; later ones may refer to earlier names."""
    env: dict[str, HomogeneousInvariant] = {}
    for name, text in items:
        env[name] = eval_recipe(text, n, env)
    return env


def recipe_degree(recipe: Recipe, degrees: Mapping[str, int] | None = None) -> int:
    """Formal degree of a recipe (each circ adds the degree of y0)."""
    degrees = degrees or {}
    if isinstance(recipe, Y0):
        return 1
    if isinstance(recipe, Ref):
        return degrees[recipe.name]
    if isinstance(recipe, Power):
        return recipe.exp * recipe_degree(recipe.base, degrees)
    if isinstance(recipe, Product):
        return sum(recipe_degree(f, degrees) for f in recipe.factors)
    if isinstance(recipe, Circ):
        return recipe_degree(recipe.left, degrees) + 1
    if isinstance(recipe, Scaled):
        return recipe_degree(recipe.expr, degrees)
    raise RecipeError(f"unknown recipe node {recipe!r}")
