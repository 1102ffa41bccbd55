"""Prime-characteristic checks: z_i mod p, the p-center, and the Jacobian of the p-th powers.

Everything here starts from the integer-coefficient z_i computed over Q and
reduces coefficients; the transvectant ladder is never run mod p.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import gmpy2

from .polycore import Polynomial, format_poly
from .polycore.poly import ONE_KEY, unpack
from .sl2 import down
from .transvect import z_gen

GRID_MAX_N = 8
GRID_MAX_P = 23


class CharPError(ValueError):
    pass


class TriangularityError(ArithmeticError):
    """A Jacobian entry below the diagonal is nonzero."""


def _require_prime(p: int) -> None:
    if p < 2 or not gmpy2.is_prime(p):
        raise CharPError(f"{p} is not a prime")


def reduce_mod_p(f: Polynomial, p: int) -> Polynomial:
    """Coefficient-wise image in F_p[y]; fails on a denominator divisible by p."""
    _require_prime(p)
    if f.p is not None:
        raise CharPError("input must have rational coefficients")
    try:
        return f.map_coefficients(lambda c: c, p)
    except ZeroDivisionError as exc:
        raise CharPError(str(exc)) from None


def z_mod_p(i: int, n: int, p: int) -> Polynomial:
    return reduce_mod_p(z_gen(i, n).poly, p)


@dataclass(frozen=True)
class CentralReport:
    n: int
    p: int
    central: tuple[bool, ...]  # index i-1 for z_i
    leading_ok: tuple[bool, ...]

    @property
    def all_central(self) -> bool:
        return all(self.central)


def _leading_constant(i: int) -> int:
    """Coefficient of y0^k y_i in z_i: 2 for even i, i for odd i > 1."""
    if i == 1:
        return 1
    return 2 if i % 2 == 0 else i


def central_check_modp(n: int, p: int) -> CentralReport:
    _require_prime(p)
    if p == 2:
        raise CharPError("p must be odd")
    central, lead = [], []
    for i in range(1, n + 1):
        zp = z_mod_p(i, n, p)
        central.append(down(zp).is_zero())
        lead.append(_leading_constant(i) % p != 0)
    return CentralReport(n, p, tuple(central), tuple(lead))


@dataclass(frozen=True)
class PCenterElement:
    """Element of F_p[y0, y1^p, ..., yn^p]."""

    p: int
    n: int
    poly: Polynomial

    def __post_init__(self):
        if not _in_pcenter(self.poly, self.p):
            raise CharPError("some exponent of y1..yn is not divisible by p")


def _in_pcenter(f: Polynomial, p: int) -> bool:
    for key in f.raw_terms:
        if any(e % p for e in unpack(key)[1:]):
            return False
    return True


def p_power_in_pcenter(f: Polynomial, p: int, n: int) -> PCenterElement | None:
    """The p-center view of f when every y1..yn exponent is divisible by p, else None."""
    if f.p is None:
        f = reduce_mod_p(f, p)
    elif f.p != p:
        raise CharPError(f"polynomial lives over F_{f.p}, not F_{p}")
    if f and f.max_index() > n:
        return None
    return PCenterElement(p, n, f) if _in_pcenter(f, p) else None


# u-variables: slot j of a UPolynomial holds u_{j+2}; u1 (for x^p) is never used.

U_OFFSET = 2


@dataclass(frozen=True)
class UPolynomial:
    p: int
    n: int
    poly: Polynomial

    def __str__(self) -> str:
        return format_poly(self.poly, symbol="u", offset=U_OFFSET)

    def derivative(self, index: int) -> UPolynomial:
        """Partial derivative by u_index."""
        return UPolynomial(self.p, self.n, self.poly.derivative(index - U_OFFSET))

    def to_pcenter(self) -> PCenterElement:
        out = {}
        for exps, c in self.poly.terms():
            y = [exps[0]] + [e * self.p for e in exps[1:]]
            out[tuple(y)] = c
        return PCenterElement(self.p, self.n, Polynomial(out, self.p))


def to_u_variables(g: PCenterElement) -> UPolynomial:
    out = {}
    for exps, c in g.poly.terms():
        u = [exps[0]] + [e // g.p for e in exps[1:]]
        out[tuple(u)] = c
    return UPolynomial(g.p, g.n, Polynomial(out, g.p))


def alpha(i: int, n: int, p: int) -> UPolynomial:
    """(z_i mod p)^p written in the u-variables."""
    pc = p_power_in_pcenter(z_mod_p(i, n, p).frobenius(), p, n)
    if pc is None:
        raise CharPError(f"(z_{i} mod {p})^{p} is not in the p-center")
    return to_u_variables(pc)


def _as_monomial_in_u2(f: Polynomial) -> tuple[int, int] | None:
    """(c, k) when f = c*u2^k, else None."""
    if len(f) != 1:
        return None
    (exps, c), = f.terms()
    if any(exps[1:]):
        return None
    return int(c), exps[0] if exps else 0


@dataclass
class JacobianResult:
    n: int
    p: int
    matrix: list[list[UPolynomial]]  # matrix[i-2][j-2] = D_i f_j
    diagonal: list[tuple[int, int]]  # (c_i, k_i) with D_i f_i = c_i * u2^k_i
    det_coeff: int
    det_exponent: int
    triangular: bool = field(default=True)

    @property
    def det_text(self) -> str:
        return f"{self.det_coeff}*u2^{self.det_exponent}"

    def det(self) -> UPolynomial:
        return UPolynomial(self.p, self.n, Polynomial._raw({ONE_KEY + self.det_exponent: self.det_coeff}, self.p))


def jacobian_modp(n: int, p: int) -> JacobianResult:
    """D_i f_j = -d alpha_j / d u_{i+2} for 2 <= i, j <= n, with triangularity enforced."""
    if n < 2:
        raise CharPError("the Jacobian needs n >= 2")
    _require_prime(p)
    if p < n + 1:
        raise CharPError(f"p={p} is below n+1={n + 1}")
    alphas = {j: alpha(j, n, p) for j in range(2, n + 1)}
    matrix = []
    for i in range(2, n + 1):
        row = []
        for j in range(2, n + 1):
            entry = -alphas[j].poly.derivative(i)  # slot i holds u_{i+2}
            row.append(UPolynomial(p, n, entry))
        matrix.append(row)
    for a, row in enumerate(matrix):
        for b in range(a):
            if not row[b].poly.is_zero():
                raise TriangularityError(f"D_{a + 2} f_{b + 2} = {row[b]} is nonzero")
    diag = []
    c_tot, k_tot = 1, 0
    for a in range(len(matrix)):
        cm = _as_monomial_in_u2(matrix[a][a].poly)
        if cm is None:
            raise ArithmeticError(f"D_{a + 2} f_{a + 2} = {matrix[a][a]} is not a multiple of a power of u2")
        diag.append(cm)
        c_tot = c_tot * cm[0] % p
        k_tot += cm[1]
    if c_tot % p == 0:
        raise ArithmeticError("determinant vanishes mod p")
    return JacobianResult(n, p, matrix, diag, c_tot, k_tot)


def primes_between(lo: int, hi: int) -> list[int]:
    return [q for q in range(max(lo, 2), hi + 1) if gmpy2.is_prime(q)]


@dataclass
class GridEntry:
    n: int
    p: int
    central: bool
    pcenter: bool
    triangular: bool
    det: str | None
    error: str | None = None

    @property
    def ok(self) -> bool:
        return self.central and self.pcenter and self.triangular and self.error is None


def verify_grid(max_n: int = GRID_MAX_N, max_p: int = GRID_MAX_P, threads: int = 1) -> list[GridEntry]:
    """All checks for 2 <= n <= max_n and primes n+1 <= p <= max_p."""
    pairs = [(n, p) for n in range(2, max_n + 1) for p in primes_between(n + 1, max_p)]

    def one(pair: tuple[int, int]) -> GridEntry:
        n, p = pair
        central = all(down(z_mod_p(i, n, p)).is_zero() for i in range(2, n + 1))
        pcenter = all(p_power_in_pcenter(z_mod_p(i, n, p).frobenius(), p, n) is not None for i in range(2, n + 1))
        try:
            jac = jacobian_modp(n, p)
        except (TriangularityError, ArithmeticError) as exc:
            return GridEntry(n, p, central, pcenter, False, None, str(exc))
        return GridEntry(n, p, central, pcenter, True, jac.det_text)

    if threads > 1:
        from concurrent.futures import ThreadPoolExecutor

        # z_gen's cache is filled idempotently, so concurrent callers only repeat work
        with ThreadPoolExecutor(max_workers=threads) as ex:
            return list(ex.map(one, pairs))
    return [one(pr) for pr in pairs]


def jacobian_report(res: JacobianResult) -> dict:
    return {
        "n": res.n,
        "p": res.p,
        "jacobian_triangular": res.triangular,
        "det": res.det_text,
        "diagonal": [{"i": i + 2, "c": c, "k": k} for i, (c, k) in enumerate(res.diagonal)],
    }


__all__ = [
    "CentralReport",
    "CharPError",
    "GridEntry",
    "JacobianResult",
    "PCenterElement",
    "TriangularityError",
    "UPolynomial",
    "alpha",
    "central_check_modp",
    "jacobian_modp",
    "jacobian_report",
    "p_power_in_pcenter",
    "primes_between",
    "reduce_mod_p",
    "to_u_variables",
    "verify_grid",
    "z_mod_p",
]
