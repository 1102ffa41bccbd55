"""Dimensions delta_{n,d} of the invariant components and the Hilbert series H_n(t).

Two independent counters (bounded partitions, weight multiplicities), the
exact rational H_n(t) by partial fractions in z over Q(t), and a numerical
check of the contour-integral formula.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Sequence

import flint

from .polycore.ratfunc import RationalFunction, ZPoly, format_tpoly, series_expand, xgcd_z

DEFAULT_BOUND = 18
SELF_CHECK_TERMS = 30


class InconsistentCountError(RuntimeError):
    """Two counters that must agree did not."""


# ---------------------------------------------------------------- counters

@lru_cache(maxsize=None)
def _bounded_partitions(k: int, d: int, n: int) -> int:
    """Partitions of k into at most d parts, each at most n."""
    if k == 0:
        return 1
    if k < 0 or d == 0 or n == 0 or k > d * n:
        return 0
    # either fewer than d parts, or exactly d positive parts (shift each down by one)
    return _bounded_partitions(k, d - 1, n) + _bounded_partitions(k - d, d, n - 1)


def delta_partition(n: int, d: int) -> int:
    if n < 0 or d < 0:
        raise ValueError("n and d must be nonnegative")
    return _bounded_partitions(d * n // 2, d, n)


def weight_multiplicities(n: int, d: int) -> dict[int, int]:
    """Number of degree-d monomials in y_0..y_n of each weight sum a_i (n - 2i)."""
    if n < 0 or d < 0:
        raise ValueError("n and d must be nonnegative")
    # table[j][w] = monomials of degree j in the variables seen so far
    table: list[dict[int, int]] = [{0: 1}] + [{} for _ in range(d)]
    for i in range(n + 1):
        wi = n - 2 * i
        for j in range(1, d + 1):
            row, prev = table[j], table[j - 1]
            for w, c in prev.items():
                row[w + wi] = row.get(w + wi, 0) + c
    return table[d]


def delta_weight(n: int, d: int) -> int:
    mult = weight_multiplicities(n, d)
    target = 1 if (n * d) % 2 else 0
    return mult.get(target, 0)


def sym_power_components(n: int, d: int) -> dict[int, int]:
    """Highest weight -> multiplicity of irreducible summands of S^d(U_n)."""
    mult = weight_multiplicities(n, d)
    out = {}
    for w in sorted(mult):
        if w >= 0:
            c = mult[w] - mult.get(w + 2, 0)
            if c:
                out[w] = c
    return out


@dataclass(frozen=True)
class DeltaTable:
    n: int
    values: tuple[int, ...]

    def __getitem__(self, d: int) -> int:
        return self.values[d]

    def __len__(self) -> int:
        return len(self.values)


def hilbert_series_terms(n: int, dmax: int) -> DeltaTable:
    """delta_{n,0..dmax} by the partition counter, cross-checked by weights."""
    if n < 1:
        raise ValueError("n must be at least 1")
    vals = []
    for d in range(dmax + 1):
        a = delta_partition(n, d)
        b = delta_weight(n, d)
        if a != b:
            raise InconsistentCountError(f"delta({n},{d}): partition count {a} != weight count {b}")
        vals.append(a)
    return DeltaTable(n, tuple(vals))


# ---------------------------------------------------------------- rational H_n

@dataclass(frozen=True)
class MuFactorization:
    """mu_n(t, z) = scalar * z^S / prod(factors)."""

    n: int
    index_set: tuple[int, ...]
    shift: int
    negative: tuple[int, ...]  # m for each factor z^m - t
    positive: tuple[int, ...]  # k for each factor 1 - t z^k
    has_scalar: bool  # 1/(1 - t) present when 0 is an index

    @classmethod
    def build(cls, n: int) -> MuFactorization:
        idx = tuple(range(-n, n + 1, 2))
        neg = tuple(-k for k in idx if k < 0)
        pos = tuple(k for k in idx if k > 0)
        return cls(n, idx, sum(neg), neg, pos, 0 in idx)

    def factor_polys(self) -> list[tuple[str, int, ZPoly]]:
        t = RationalFunction.t()
        out = []
        for m in self.negative:
            out.append(("neg", m, ZPoly.monomial(m) - ZPoly([t])))
        for k in self.positive:
            out.append(("pos", k, ZPoly([1]) - ZPoly.monomial(k, t)))
        return out


@dataclass(frozen=True)
class HilbertRational:
    n: int
    series: RationalFunction
    mu: MuFactorization = field(repr=False)

    def expand(self, K: int) -> list[Fraction]:
        return series_expand(self.series, K)

    def pretty(self) -> str:
        return pretty_hilbert(self.series)

    def latex(self) -> str:
        return pretty_hilbert(self.series, latex=True)


def _partial_fraction_numerator(target: ZPoly, others: list[ZPoly], f: ZPoly) -> ZPoly:
    """Q with Q * prod(others) == target (mod f), deg Q < deg f."""
    g = ZPoly([1])
    for o in others:
        g = (g * (o % f)) % f
    one, s, _ = xgcd_z(g, f)
    if one.degree() != 0:
        raise ArithmeticError("partial-fraction factors are not coprime")
    return (s * (target % f)) % f


def hilbert_rational(n: int, bound: int = DEFAULT_BOUND, check_terms: int = SELF_CHECK_TERMS) -> HilbertRational:
    """H_n(t) as an exact rational function, self-checked against delta_{n,d}."""
    if n < 1:
        raise ValueError("n must be at least 1")
    if n > bound:
        raise ValueError(f"n={n} exceeds the configured bound {bound}")
    mu = MuFactorization.build(n)
    facs = mu.factor_polys()
    zS = ZPoly.monomial(mu.shift)
    q0 = RationalFunction()
    q1 = RationalFunction()
    t = RationalFunction.t()
    for j, (kind, k, f) in enumerate(facs):
        if kind != "pos":
            # z^a / (z^m - t) expands in z^(a - m(s+1)) with a < m: no z^0 or z^1 terms
            continue
        others = [g for i, (_, _, g) in enumerate(facs) if i != j]
        Q = _partial_fraction_numerator(zS, others, f)
        # Q / (1 - t z^k) = sum_a q_a z^a sum_s t^s z^(ks); z^e needs a + ks = e
        q0 = q0 + Q.coeff(0)
        q1 = q1 + Q.coeff(1)
        if k == 1:
            q1 = q1 + Q.coeff(0) * t
    if n % 2 == 0 and not q1.is_zero():
        raise ArithmeticError("odd-weight coefficient must vanish for even n")
    total = q0 + q1
    if mu.has_scalar:
        total = total / RationalFunction.from_coeffs([1, -1])
    if check_terms:
        got = series_expand(total, check_terms)
        want = hilbert_series_terms(n, check_terms - 1).values
        if any(a != b for a, b in zip(got, want)):
            raise InconsistentCountError(f"H_{n} expansion disagrees with the partition counts")
    return HilbertRational(n, total, mu)


# ---------------------------------------------------------------- printing

def _cyclotomic_index(poly: flint.fmpq_poly, cache: dict[int, flint.fmpq_poly]) -> int | None:
    """m with poly == Phi_m (poly monic), else None.  phi(m) >= sqrt(m/2) bounds the search."""
    deg = poly.degree()
    for m in range(1, 2 * deg * deg + 3):
        if _euler_phi(m) != deg:
            continue
        if m not in cache:
            cache[m] = flint.fmpq_poly(flint.fmpz_poly.cyclotomic(m).coeffs())
        if cache[m] == poly:
            return m
    return None


def _euler_phi(m: int) -> int:
    return sum(1 for k in range(1, m + 1) if math.gcd(k, m) == 1)


def cyclotomic_cover(den: flint.fmpq_poly) -> list[int] | None:
    """Exponents k_i with prod(1 - t^k_i) divisible by den, or None."""
    _, facs = den.factor()
    need: dict[int, int] = {}
    cache: dict[int, flint.fmpq_poly] = {}
    for g, e in facs:
        g = g / g.leading_coefficient()
        m = _cyclotomic_index(g, cache)
        if m is None:
            return None
        need[m] = need.get(m, 0) + e
    ks = []
    while any(need.values()):
        m = max(k for k, v in need.items() if v)
        ks.append(m)
        for dv in list(need):
            if m % dv == 0 and need[dv]:
                need[dv] -= 1
    return sorted(ks)


def pretty_hilbert(r: RationalFunction, latex: bool = False) -> str:
    """``num / ((1-t^a)(1-t^b)...)`` when the denominator is cyclotomic."""
    ks = cyclotomic_cover(r.den)
    if ks is None:
        return str(r)
    cover = flint.fmpq_poly([1])
    for k in ks:
        cover *= flint.fmpq_poly([1] + [0] * (k - 1) + [-1])
    num = r.num * (cover // r.den)
    groups: dict[int, int] = {}
    for k in ks:
        groups[k] = groups.get(k, 0) + 1
    parts = []
    for k, e in sorted(groups.items()):
        base = "1-t" if k == 1 else f"1-t^{k}"
        if latex:
            base = "1-t" if k == 1 else f"1-t^{{{k}}}"
        parts.append(f"({base})" if e == 1 else (f"({base})^{{{e}}}" if latex else f"({base})^{e}"))
    num_s = format_tpoly(num)
    if latex:
        num_s = num_s.replace("*", "")
        return f"\\frac{{{num_s}}}{{{''.join(parts)}}}"
    return f"({num_s}) / ({''.join(parts)})"


# ---------------------------------------------------------------- checks

@dataclass(frozen=True)
class RecurrenceVerdict:
    holds: bool
    first_failure: int | None
    checked: int


def recurrence_verify(n: int, coeffs: Sequence[int], dmax: int) -> RecurrenceVerdict:
    """Check delta(d) = sum_j coeffs[j-1] delta(d - j) for order <= d <= dmax."""
    r = len(coeffs)
    if r > dmax:
        raise ValueError("recurrence order exceeds dmax")
    a = hilbert_series_terms(n, dmax).values
    checked = 0
    for d in range(r, dmax + 1):
        checked += 1
        if a[d] != sum(c * a[d - j] for j, c in enumerate(coeffs, start=1)):
            return RecurrenceVerdict(False, d, checked)
    return RecurrenceVerdict(True, None, checked)


@dataclass(frozen=True)
class IntegralCheck:
    numeric: float
    exact: Fraction
    difference: float
    panels: int


def _simpson(fn, panels: int) -> float:
    import numpy as np

    x = np.linspace(-math.pi, math.pi, panels + 1)
    y = fn(x)
    h = 2 * math.pi / panels
    return float(h / 3 * (y[0] + y[-1] + 4 * y[1:-1:2].sum() + 2 * y[2:-1:2].sum()))


def integral_check(n: int, t: Fraction | str | float, panels: int = 1 << 14, tol: float = 1e-10) -> IntegralCheck:
    """Quadrature of (1/2pi) int (1 + e^{i phi}) / prod_k (1 - t e^{i(n-2k)phi}) vs exact H_n(t)."""
    import numpy as np

    t = Fraction(t) if not isinstance(t, float) else Fraction(t).limit_denominator(10**12)
    if not 0 < t < 1:
        raise ValueError("t must lie in (0, 1)")
    if panels < 2 or panels & (panels - 1):
        raise ValueError("panels must be a power of two")
    tf = float(t)

    def integrand(phi):
        den = np.ones_like(phi, dtype=complex)
        for k in range(n + 1):
            den = den * (1 - tf * np.exp(1j * (n - 2 * k) * phi))
        return ((1 + np.exp(1j * phi)) / den).real

    m = 4
    prev = _simpson(integrand, m) / (2 * math.pi)
    while m < panels:
        m *= 2
        cur = _simpson(integrand, m) / (2 * math.pi)
        done = abs(cur - prev) < tol
        prev = cur
        if done:
            break
    exact = hilbert_rational(n).series(t)
    return IntegralCheck(prev, exact, abs(prev - float(exact)), m)
