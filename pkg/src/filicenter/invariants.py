"""Graded pieces of Z_n = ker(down): bases, minimal generators, rewriting, independence."""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from functools import lru_cache
from math import comb
from typing import Iterable, Sequence

import flint
import gmpy2
from gmpy2 import mpq

from .hilbert import weight_multiplicities
from .linalg import Echelon, kernel_of_map
from .polycore import Polynomial, format_poly, parse_poly
from .polycore.poly import ONE_KEY, unit
from .sl2 import HomogeneousInvariant, NotInvariantError, down, is_invariant
from .transvect import circ_y0_poly, eval_recipe_list, z_gen

DEFAULT_MAX_MONOMIALS = 500_000


class ResourceGuardError(RuntimeError):
    pass


class NotInZnError(ValueError):
    """Leading monomial divisible by y1: the input cannot be an invariant."""


# ---------------------------------------------------------------- weight spaces

def weight_space_keys(n: int, k: int, w: int) -> list[int]:
    """Packed keys of degree-k monomials in y_0..y_n of weight w, increasing."""
    if (n * k - w) % 2:
        return []
    s = (n * k - w) // 2
    if s < 0 or s > n * k:
        return []
    out: list[int] = []

    def rec(i: int, deg: int, rest: int, key: int) -> None:
        if i == 0:
            if rest == 0:
                out.append(key + deg)
            return
        top = min(deg, rest // i)
        for a in range(top + 1):
            rec(i - 1, deg - a, rest - a * i, key + a * unit(i))

    rec(n, k, s, ONE_KEY)
    out.sort()
    return out


def highest_weight_dims(n: int, k: int) -> dict[int, int]:
    """w -> dim Z_{n,k} of weight w (only positive entries)."""
    mult = weight_multiplicities(n, k)
    out = {}
    for w in sorted(mult, reverse=True):
        if w >= 0:
            t = mult[w] - mult.get(w + 2, 0)
            if t:
                out[w] = t
    return out


def _check_budget(n: int, k: int, max_monomials: int) -> None:
    size = comb(n + k, n)
    if size > max_monomials:
        raise ResourceGuardError(f"C({n + k},{n}) = {size} monomials exceeds the bound {max_monomials}")


# ---------------------------------------------------------------- graded bases

@dataclass(frozen=True)
class GradedBasis:
    """Basis of Z_{n,k} in reduced echelon form (monic rows, distinct lex pivots)."""

    n: int
    k: int
    elements: tuple[HomogeneousInvariant, ...]
    method: str
    p: int | None = None
    experimental: bool = False

    def __len__(self) -> int:
        return len(self.elements)

    @property
    def polys(self) -> list[Polynomial]:
        return [e.poly for e in self.elements]

    def weights(self) -> dict[int, int]:
        out: dict[int, int] = {}
        for e in self.elements:
            out[e.weight] = out.get(e.weight, 0) + 1
        return out

    def same_span(self, other: GradedBasis) -> bool:
        return self.p == other.p and set(self.polys) == set(other.polys)


def _reduced(polys: Iterable[Polynomial], p: int | None) -> list[Polynomial]:
    e = Echelon(p)
    for f in polys:
        e.insert(f.raw_terms)
    return [Polynomial._raw(r, p) for r in e.reduced_rows()]


def _down_key(key: int, p: int | None) -> dict:
    return down(Polynomial._raw({key: mpq(1) if p is None else 1}, p)).raw_terms


def basis_kernel(n: int, k: int, p: int | None = None, max_monomials: int = DEFAULT_MAX_MONOMIALS) -> GradedBasis:
    """ker(down) on the degree-k polynomials, one weight space at a time."""
    if n < 0 or k < 0:
        raise ValueError("n and k must be nonnegative")
    experimental = False
    if p is not None:
        if p <= k:
            raise ValueError(f"prime field needs p > k (p={p}, k={k})")
        experimental = True
    _check_budget(n, k, max_monomials)
    elements: list[HomogeneousInvariant] = []
    for w in range(n * k, -1, -2):
        keys = weight_space_keys(n, k, w)
        if not keys:
            continue
        kern = kernel_of_map(keys, lambda key: _down_key(key, p), p)
        for f in _reduced((Polynomial._raw(v, p) for v in kern), p):
            elements.append(HomogeneousInvariant(f, n, k, w))
    return GradedBasis(n, k, tuple(elements), "kernel", p, experimental)


@lru_cache(maxsize=64)
def basis_span(n: int, k: int, max_monomials: int = DEFAULT_MAX_MONOMIALS) -> GradedBasis:
    """Span of b o_d y0 over a basis b of Z_{n,k-1}, reduced per weight."""
    if k < 1:
        raise ValueError("basis_span needs k >= 1")
    _check_budget(n, k, max_monomials)
    if k == 1:
        return GradedBasis(n, 1, (HomogeneousInvariant(Polynomial.var(0), n, 1, n),), "span")
    prev = basis_span(n, k - 1, max_monomials)
    by_weight: dict[int, list[Polynomial]] = {}
    for b in prev.elements:
        for d in range(min(b.weight, n) + 1):
            c = circ_y0_poly(b.poly, b.weight, d, n)
            if c:
                by_weight.setdefault(b.weight + n - 2 * d, []).append(c)
    elements = []
    for w in sorted(by_weight, reverse=True):
        for f in _reduced(by_weight[w], None):
            elements.append(HomogeneousInvariant(f, n, k, w))
    return GradedBasis(n, k, tuple(elements), "span")


# ---------------------------------------------------------------- minimal generators

@dataclass
class GeneratorRecord:
    index: int
    degree: int
    weight: int
    recipe: str
    poly: Polynomial | None = None

    @property
    def name(self) -> str:
        return f"z{self.index}"


@dataclass
class MinimalGenerators:
    n: int
    maxdeg: int
    records: list[GeneratorRecord]
    modulus: int | None
    warnings: list[str] = field(default_factory=list)

    def counts(self) -> dict[int, int]:
        out: dict[int, int] = {}
        for r in self.records:
            out[r.degree] = out.get(r.degree, 0) + 1
        return out

    def __len__(self) -> int:
        return len(self.records)

    def materialize(self) -> None:
        """Exact polynomials over Q for every record, by recipe evaluation."""
        env = eval_recipe_list([(r.name, r.recipe) for r in self.records], self.n)
        for r in self.records:
            inv = env[r.name]
            if inv.degree != r.degree or inv.weight != r.weight:
                raise AssertionError(f"{r.name}: recipe gives degree/weight {inv.degree}/{inv.weight}")
            r.poly = inv.poly


@dataclass
class _Elem:
    poly: Polynomial
    handle: tuple  # ("g", gi) or ("m", gi, (k, w, j))


def _random_prime(seed: int) -> int:
    rng = random.Random(seed)
    return int(gmpy2.next_prime(rng.getrandbits(62) | (1 << 61)))


def minimal_generators(
    n: int,
    maxdeg: int,
    modulus: int | None | str = "auto",
    seed: int = 0,
    order: str = "forward",
    materialize: bool = False,
    max_monomials: int = 5_000_000,
) -> MinimalGenerators:
    """Minimal homogeneous generators of Z_n up to degree maxdeg.

    For each degree k and weight w the products g * b (g an earlier generator,
    b in the chosen basis of Z_{n,k-deg g}) are row-reduced; when they fall
    short of dim Z_{n,k,w}, candidates b o_d y0 fill the gap and become new
    generators.  With a prime modulus (default: a random 62-bit prime) the
    spanning side is exact, since a minor that is nonzero mod q is nonzero
    over Q; the deficiency side can only err if q divides a fixed nonzero
    integer.  ``modulus=None`` does everything over Q.
    """
    if order not in ("forward", "reverse"):
        raise ValueError("order must be 'forward' or 'reverse'")
    if n < 1 or maxdeg < 1:
        raise ValueError("n and maxdeg must be positive")
    _check_budget(n, maxdeg, max_monomials)
    q = _random_prime(seed) if modulus == "auto" else modulus
    one = mpq(1) if q is None else 1

    y0 = Polynomial._raw({ONE_KEY + unit(0): one}, q)
    gens: list[GeneratorRecord] = [GeneratorRecord(1, 1, n, "y0")]
    gpoly: list[Polynomial] = [y0]
    # basis[k][w] -> list of _Elem
    basis: dict[int, dict[int, list[_Elem]]] = {1: {n: [_Elem(y0, ("g", 0))]}}

    def factors(handle) -> dict[int, int]:
        out: dict[int, int] = {}
        while handle[0] == "m":
            _, gi, (kb, wb, jb) = handle
            out[gi] = out.get(gi, 0) + 1
            handle = basis[kb][wb][jb].handle
        gi = handle[1]
        out[gi] = out.get(gi, 0) + 1
        return out

    def recipe_of(handle, d: int) -> str:
        fs = factors(handle)
        if len(fs) == 1 and sum(fs.values()) == 1:
            (gi,) = fs
            return f"{gens[gi].recipe} o_{d} y0"
        parts = []
        for gi in sorted(fs):
            e = fs[gi]
            nm = "y0" if gi == 0 else gens[gi].name
            parts.append(nm if e == 1 else f"{nm}^{e}")
        return f"{' '.join(parts)} o_{d} y0"

    for k in range(2, maxdeg + 1):
        basis[k] = {}
        new_here: list[tuple[int, Polynomial, str]] = []
        gen_order = list(range(len(gens)))
        if order == "reverse":
            gen_order = [0] + gen_order[:0:-1]
        for w, target in highest_weight_dims(n, k).items():
            ech = Echelon(q)
            chosen: list[_Elem] = []
            for gi in gen_order:
                g = gens[gi]
                kb, wb = k - g.degree, w - g.weight
                if kb < 1 or wb < 0:
                    continue
                for jb, b in enumerate(basis.get(kb, {}).get(wb, [])):
                    prod = gpoly[gi] * b.poly
                    if ech.insert(prod.raw_terms) is not None:
                        chosen.append(_Elem(prod, ("m", gi, (kb, wb, jb))))
                        if len(ech) == target:
                            break
                if len(ech) == target:
                    break
            if len(ech) < target:
                cands = []
                for wb, elems in basis[k - 1].items():
                    if (wb + n - w) % 2:
                        continue
                    d = (wb + n - w) // 2
                    if 1 <= d <= min(wb, n):
                        for jb, b in enumerate(elems):
                            cands.append((d, (k - 1, wb, jb), b))
                if order == "reverse":
                    cands.reverse()
                for d, loc, b in cands:
                    c = circ_y0_poly(b.poly, loc[1], d, n)
                    if c and ech.insert(c.raw_terms) is not None:
                        new_here.append((w, c, recipe_of(b.handle, d)))
                        chosen.append(_Elem(c, ("g", len(gens) + len(new_here) - 1)))
                        if len(ech) == target:
                            break
            if len(ech) < target:
                raise ArithmeticError(f"candidates fail to span Z_{{{n},{k}}} at weight {w}")
            basis[k][w] = chosen
        for w, c, rec in new_here:
            gens.append(GeneratorRecord(len(gens) + 1, k, w, rec))
            gpoly.append(c)
        # drop bases no longer reachable by products of degree <= maxdeg
    result = MinimalGenerators(n, maxdeg, gens, q)
    result.warnings.append(f"generators beyond degree {maxdeg} are not searched")
    if materialize:
        result.materialize()
    return result


@dataclass
class GeneratingSetReport:
    n: int
    maxdeg: int
    spans: bool
    minimal: bool
    failures: list[str]


def verify_generating_set(
    n: int,
    generators: Sequence[HomogeneousInvariant],
    maxdeg: int,
    modulus: int | None | str = "auto",
    seed: int = 0,
) -> GeneratingSetReport:
    """Check that homogeneous weight-vector invariants generate Z_n minimally up to maxdeg.

    At each degree k and weight w the products of lower generators with the
    already-certified bases, together with the degree-k generators of weight
    w, must reach dim Z_{n,k,w}; each degree-k generator must also raise the
    rank (otherwise it is redundant).
    """
    q = _random_prime(seed) if modulus == "auto" else modulus
    gens = sorted(generators, key=lambda g: g.degree)
    polys = [g.poly if q is None else g.poly.map_coefficients(lambda c: c, q) for g in gens]
    basis: dict[int, dict[int, list[Polynomial]]] = {}
    failures: list[str] = []
    spans = minimal = True
    for g in gens:
        if g.n != n:
            raise ValueError("generator lives in a different n")
    for k in range(1, maxdeg + 1):
        basis[k] = {}
        here = [i for i, g in enumerate(gens) if g.degree == k]
        dims = highest_weight_dims(n, k)
        for i in here:
            if gens[i].weight not in dims:
                minimal = False
                failures.append(f"degree {k}: generator of weight {gens[i].weight} lies in a zero space")
        for w, target in dims.items():
            ech = Echelon(q)
            chosen = []
            for gi, g in enumerate(gens):
                kb, wb = k - g.degree, w - g.weight
                if kb < 1 or wb < 0 or len(ech) == target:
                    continue
                for b in basis.get(kb, {}).get(wb, []):
                    prod = polys[gi] * b
                    if ech.insert(prod.raw_terms) is not None:
                        chosen.append(prod)
                        if len(ech) == target:
                            break
            for i in here:
                if gens[i].weight != w:
                    continue
                if ech.insert(polys[i].raw_terms) is None:
                    minimal = False
                    failures.append(f"degree {k}, weight {w}: a generator is redundant")
                else:
                    chosen.append(polys[i])
            if len(ech) < target:
                spans = False
                failures.append(f"degree {k}, weight {w}: rank {len(ech)} < {target}")
            basis[k][w] = chosen
    return GeneratingSetReport(n, maxdeg, spans, minimal, failures)


# ---------------------------------------------------------------- rewriting

@dataclass(frozen=True)
class ZExpression:
    """Element of Q[Z_1^{-1}, Z_1, ..., Z_n]; slot i-1 holds the exponent of Z_i."""

    n: int
    poly: Polynomial

    def __str__(self) -> str:
        return format_poly(self.poly, symbol="z", offset=1)

    @classmethod
    def parse(cls, text: str, n: int) -> ZExpression:
        f = parse_poly(text, symbol="z", offset=1)
        if f.nvars() > n:
            raise ValueError(f"z-index exceeds n={n}")
        return cls(n, f)

    def z1_denominator(self) -> int:
        """Smallest N >= 0 with Z_1^N * self polynomial."""
        low = 0
        for exps, _ in self.poly.terms():
            if exps:
                low = min(low, exps[0])
        return -low

    def factored(self) -> str:
        N = self.z1_denominator()
        if N == 0:
            return str(self)
        cleared = self.poly.mul_monomial(ONE_KEY + N)
        return f"({format_poly(cleared, symbol='z', offset=1)})*z1^-{N}"

    def substitute(self) -> Polynomial:
        """Replace Z_i by z_i (Z_1 by y0); the result is Laurent in y0."""
        total = Polynomial.zero()
        zs = [z_gen(i, self.n).poly for i in range(1, self.n + 1)]
        for exps, c in self.poly.terms():
            term = Polynomial.const(c)
            for i, e in enumerate(exps):
                if not e:
                    continue
                if i == 0:
                    term = term.mul_monomial(ONE_KEY + e)
                else:
                    term = term * zs[i] ** e
            total = total + term
        return total


def rewrite_in_z(f: HomogeneousInvariant | Polynomial, n: int) -> ZExpression:
    """Express an invariant over Q[y0^{-1}, z_1..z_n] by leading-monomial cancellation."""
    g = f.poly if isinstance(f, HomogeneousInvariant) else f
    if g.p is not None:
        raise ValueError("rewriting works over Q")
    if not is_invariant(g):
        raise NotInvariantError("input is not annihilated by down")
    if g and g.max_index() > n:
        raise ValueError(f"input involves y_{g.max_index()} beyond n={n}")
    leads = {}
    for i in range(2, n + 1):
        z = z_gen(i, n).poly
        exps, c = z.leading_term()
        leads[i] = (c, exps[0])
    power_cache: dict[tuple[int, int], Polynomial] = {}

    def zpow(i: int, e: int) -> Polynomial:
        if (i, e) not in power_cache:
            power_cache[(i, e)] = z_gen(i, n).poly ** e
        return power_cache[(i, e)]

    out: dict[tuple[int, ...], object] = {}
    steps = 0
    while g:
        exps, c = g.leading_term()
        exps = list(exps) + [0] * (n + 1 - len(exps))
        if exps[1]:
            raise NotInZnError(f"leading monomial {format_poly(Polynomial({tuple(exps): 1}))} is divisible by y1")
        coeff = c
        y0_exp = exps[0]
        term = Polynomial.const(1)
        for i in range(2, n + 1):
            a = exps[i]
            if a:
                lc, k_i = leads[i]
                coeff = coeff / lc**a
                y0_exp -= a * k_i
                term = term * zpow(i, a)
        zexp = (y0_exp,) + tuple(exps[2:])
        out[zexp] = out.get(zexp, 0) + coeff
        g = g - term.mul_monomial(ONE_KEY + y0_exp, coeff)
        steps += 1
    return ZExpression(n, Polynomial(out))


# ---------------------------------------------------------------- independence

@dataclass
class IndependenceVerdict:
    independent: bool
    method: str
    confidence: str
    rank: int
    size: int
    points_tried: int
    witness: Polynomial | None = None

    def witness_text(self) -> str | None:
        if self.witness is None:
            return None
        return format_poly(self.witness, symbol="p", offset=1)


def _jacobian_rank(polys: Sequence[Polynomial], nvars: int, point: list[int]) -> int:
    rows = []
    for f in polys:
        for j in range(nvars):
            v = f.derivative(j).evaluate(point)
            rows.append(flint.fmpq(int(v.numerator), int(v.denominator)))
    return flint.fmpq_mat(len(polys), nvars, rows).rank()


def _weighted_monomials(weights: Sequence[int], D: int) -> list[tuple[int, ...]]:
    out = []
    m = len(weights)

    def rec(i: int, rest: int, acc: list[int]) -> None:
        if i == m:
            if rest == 0:
                out.append(tuple(acc))
            return
        for e in range(rest // weights[i] + 1):
            acc.append(e)
            rec(i + 1, rest - e * weights[i], acc)
            acc.pop()

    rec(0, D, [])
    return out


def find_relation(polys: Sequence[Polynomial], max_degree: int = 12) -> Polynomial | None:
    """Smallest-degree polynomial relation among the inputs, searched degree by degree.

    Homogeneous inputs are graded by their own degree; otherwise every input
    counts as degree 1 and all monomials up to the bound are used at once.
    """
    homog = all(f and f.is_homogeneous() and f.degree() > 0 for f in polys)
    weights = [f.degree() for f in polys] if homog else [1] * len(polys)
    powers: dict[tuple[int, int], Polynomial] = {}

    def pw(i: int, e: int) -> Polynomial:
        if (i, e) not in powers:
            powers[(i, e)] = polys[i] ** e
        return powers[(i, e)]

    def value(exps: tuple[int, ...]) -> Polynomial:
        out = Polynomial.const(1)
        for i, e in enumerate(exps):
            if e:
                out = out * pw(i, e)
        return out

    for D in range(1, max_degree + 1):
        if homog:
            monos = _weighted_monomials(weights, D)
        else:
            monos = [m for d in range(D + 1) for m in _weighted_monomials(weights, d)]
        if len(monos) < 2:
            continue
        images = [value(m).raw_terms for m in monos]
        kern = kernel_of_map(list(range(len(monos))), lambda i: images[i])
        if kern:
            rel = {monos[i]: c for i, c in kern[0].items()}
            _, prim = Polynomial(rel).integer_content()
            return prim
    return None


def independence_check(
    polys: Sequence[Polynomial | HomogeneousInvariant],
    n: int | None = None,
    seed: int = 0,
    retries: int = 3,
    max_relation_degree: int = 12,
) -> IndependenceVerdict:
    """Jacobian rank at random integer points; relation search when it is deficient."""
    ps = [f.poly if isinstance(f, HomogeneousInvariant) else f for f in polys]
    if not ps:
        raise ValueError("need at least one polynomial")
    nvars = max(f.nvars() for f in ps) if n is None else n + 1
    nvars = max(nvars, 1)
    rng = random.Random(seed)
    best = 0
    tried = 0
    for _ in range(max(1, retries)):
        point = [rng.randint(1, 10**6) for _ in range(nvars)]
        tried += 1
        r = _jacobian_rank(ps, nvars, point)
        best = max(best, r)
        if r == len(ps):
            # a nonzero maximal minor at one point is a proof in characteristic 0
            return IndependenceVerdict(True, "jacobian-rank", "certain", r, len(ps), tried)
    rel = find_relation(ps, max_relation_degree)
    if rel is not None:
        return IndependenceVerdict(False, "relation-witness", "certain", best, len(ps), tried, rel)
    return IndependenceVerdict(False, "jacobian-deficient", "probabilistic", best, len(ps), tried)


__all__ = [
    "GeneratorRecord",
    "GradedBasis",
    "IndependenceVerdict",
    "MinimalGenerators",
    "NotInZnError",
    "ResourceGuardError",
    "ZExpression",
    "basis_kernel",
    "basis_span",
    "find_relation",
    "GeneratingSetReport",
    "verify_generating_set",
    "highest_weight_dims",
    "independence_check",
    "minimal_generators",
    "rewrite_in_z",
    "weight_space_keys",
]
