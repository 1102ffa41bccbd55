"""Sparse exact row reduction for polynomials viewed as coefficient vectors.

Rows are keyed by their leading (lex-greatest) monomial, so a reduced echelon
form is canonical for the subspace: two lists span the same space iff their
reduced forms coincide.
"""

from __future__ import annotations

from typing import Iterable

from gmpy2 import mpq

from .polycore import Polynomial


def _axpy(v: dict, c, row: dict, p: int | None) -> None:
    """v -= c * row, in place."""
    for k, a in row.items():
        s = v.get(k)
        if p is None:
            s = -c * a if s is None else s - c * a
            if s:
                v[k] = s
            else:
                v.pop(k, None)
        else:
            s = (-c * a) % p if s is None else (s - c * a) % p
            if s:
                v[k] = s
            else:
                v.pop(k, None)


def _inv(c, p):
    return 1 / c if p is None else pow(c, -1, p)


class Echelon:
    """Incrementally built row-echelon basis with distinct leading keys."""

    def __init__(self, p: int | None = None):
        self.p = p
        self.rows: dict[int, dict] = {}

    def __len__(self) -> int:
        return len(self.rows)

    def reduce(self, v: dict) -> dict:
        """Top-reduce a copy of v until its leading key is not a pivot."""
        v = dict(v)
        rows, p = self.rows, self.p
        while v:
            k = max(v)
            row = rows.get(k)
            if row is None:
                break
            _axpy(v, v[k], row, p)
        return v

    def insert(self, v: dict) -> int | None:
        """Add v if independent; returns its new pivot key or None."""
        v = self.reduce(v)
        if not v:
            return None
        k = max(v)
        inv = _inv(v[k], self.p)
        if self.p is None:
            v = {key: c * inv for key, c in v.items()}
        else:
            v = {key: c * inv % self.p for key, c in v.items()}
        self.rows[k] = v
        return k

    def reduced_rows(self) -> list[dict]:
        """Fully reduced rows, in decreasing pivot order."""
        done: dict[int, dict] = {}
        p = self.p
        for k in sorted(self.rows):
            r = dict(self.rows[k])
            for key in sorted((x for x in r if x != k and x in done), reverse=True):
                c = r.get(key)
                if c:
                    _axpy(r, c, done[key], p)
            done[k] = r
        return [done[k] for k in sorted(done, reverse=True)]


def reduced_echelon(polys: Iterable[Polynomial], p: int | None = None) -> list[Polynomial]:
    """Canonical basis of span(polys): monic rows, pivots cleared elsewhere."""
    e = Echelon(p)
    for f in polys:
        if f.p != p:
            raise ValueError("field tag mismatch in reduced_echelon")
        e.insert(f.raw_terms)
    return [Polynomial._raw(r, p) for r in e.reduced_rows()]


def rank(polys: Iterable[Polynomial], p: int | None = None) -> int:
    e = Echelon(p)
    for f in polys:
        e.insert(f.raw_terms)
    return len(e)


def kernel_of_map(domain_keys: list[int], image, p: int | None = None) -> list[dict]:
    """Kernel vectors of a linear map given on a monomial basis.

    ``domain_keys`` must be in increasing order; ``image(key)`` returns the
    image of that basis vector as a sparse dict.  Each kernel vector returned
    has a distinct leading key (the largest domain key in its support).
    """
    one = mpq(1) if p is None else 1
    pivots: dict[int, tuple[dict, dict]] = {}
    kernel: list[dict] = []
    for key in domain_keys:
        v = dict(image(key))
        combo = {key: one}
        while v:
            lk = max(v)
            hit = pivots.get(lk)
            if hit is None:
                break
            row, rcombo = hit
            c = v[lk]
            _axpy(v, c, row, p)
            _axpy(combo, c, rcombo, p)
        if not v:
            kernel.append(combo)
            continue
        lk = max(v)
        inv = _inv(v[lk], p)
        if p is None:
            v = {k: c * inv for k, c in v.items()}
            combo = {k: c * inv for k, c in combo.items()}
        else:
            v = {k: c * inv % p for k, c in v.items()}
            combo = {k: c * inv % p for k, c in combo.items()}
        pivots[lk] = (v, combo)
    return kernel


class ModRank:
    """Rank of integer vectors modulo a large prime, built incrementally.

    Dense rows (lists of ints) with a pivot column per stored row; used for
    fast probabilistic rank estimates that are certified exactly elsewhere.
    """

    def __init__(self, q: int):
        self.q = q
        self.rows: list[tuple[int, list[int]]] = []

    def __len__(self) -> int:
        return len(self.rows)

    def reduce(self, v: list[int]) -> list[int]:
        q = self.q
        v = [x % q for x in v]
        for piv, row in self.rows:
            c = v[piv]
            if c:
                v = [(a - c * b) % q for a, b in zip(v, row)]
        return v

    def insert(self, v: list[int]) -> bool:
        v = self.reduce(v)
        for j, c in enumerate(v):
            if c:
                inv = pow(c, -1, self.q)
                self.rows.append((j, [x * inv % self.q for x in v]))
                return True
        return False
