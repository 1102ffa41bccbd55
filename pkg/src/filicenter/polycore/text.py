"""Polynomial text grammar and JSON form.

Grammar (whitespace-insensitive)::

    poly    := ['-'] term (('+'|'-') term)*
    term    := coeff | coeff '*' factors | factors
    factors := factor ('*' factor)*
    factor  := SYM INT ['^' SINT]      (SINT negative only for index 0)
    coeff   := INT ['/' INT]

``SYM`` defaults to ``y``; the same grammar is reused for ``z1..zn``
(rewritten invariants) and ``u2..`` (p-center coordinates).  Passing
``names={"t": 0, "z": 1}`` switches to bare single-letter variables.
"""

from __future__ import annotations

from gmpy2 import mpq

from .poly import MAX_EXP, Polynomial, coerce_scalar


class PolynomialSyntaxError(ValueError):
    def __init__(self, message: str, pos: int, text: str):
        super().__init__(f"{message} at position {pos}: {text!r}")
        self.pos = pos
        self.text = text


class _Scanner:
    def __init__(self, text: str):
        self.text = text
        self.i = 0

    def skip(self) -> None:
        while self.i < len(self.text) and self.text[self.i].isspace():
            self.i += 1

    def peek(self) -> str:
        self.skip()
        return self.text[self.i] if self.i < len(self.text) else ""

    def take(self, ch: str) -> bool:
        if self.peek() == ch:
            self.i += 1
            return True
        return False

    def error(self, msg: str):
        raise PolynomialSyntaxError(msg, self.i, self.text)

    def integer(self, signed: bool = False) -> int:
        self.skip()
        start = self.i
        if signed and self.i < len(self.text) and self.text[self.i] in "+-":
            self.i += 1
        j = self.i
        while self.i < len(self.text) and self.text[self.i].isdigit():
            self.i += 1
        if self.i == j:
            self.i = start
            self.error("expected integer")
        return int(self.text[start:self.i])


def parse_poly(
    text: str,
    p: int | None = None,
    symbol: str = "y",
    names: dict[str, int] | None = None,
    offset: int = 0,
) -> Polynomial:
    """Parse ``text`` into a Polynomial over Q (``p=None``) or F_p.

    ``offset`` is subtracted from written indices, so ``symbol="z", offset=1``
    reads z1..zn into slots 0..n-1 (slot 0 may carry a negative exponent).
    """
    s = _Scanner(text)
    if not s.peek():
        s.error("empty polynomial")
    terms: dict[tuple[int, ...], object] = {}
    sign = -1 if s.take("-") else 1
    while True:
        coeff, exps = _term(s, symbol, names, offset)
        coeff = coeff * sign
        key = tuple(exps)
        terms[key] = terms.get(key, 0) + coeff
        if s.take("+"):
            sign = 1
        elif s.take("-"):
            sign = -1
        elif s.peek():
            s.error(f"unexpected character {s.peek()!r}")
        else:
            break
    try:
        return Polynomial({k: coerce_scalar(v, p) for k, v in terms.items()}, p)
    except ZeroDivisionError as exc:
        raise PolynomialSyntaxError(str(exc), 0, text) from None


def _term(s: _Scanner, symbol: str, names: dict[str, int] | None, offset: int = 0):
    coeff = mpq(1)
    exps: list[int] = []
    if s.peek().isdigit():
        num = s.integer()
        den = 1
        if s.take("/"):
            pos = s.i
            den = s.integer()
            if den == 0:
                raise PolynomialSyntaxError("zero denominator", pos, s.text)
        coeff = mpq(num, den)
        if not s.take("*"):
            return coeff, exps
    while True:
        idx, e = _factor(s, symbol, names, offset)
        while len(exps) <= idx:
            exps.append(0)
        exps[idx] += e
        if not s.take("*"):
            break
    while exps and exps[-1] == 0:
        exps.pop()
    return coeff, exps


def _factor(s: _Scanner, symbol: str, names: dict[str, int] | None, offset: int = 0) -> tuple[int, int]:
    s.skip()
    start = s.i
    if names is not None:
        ch = s.peek()
        if ch not in names:
            s.error("expected variable")
        s.i += 1
        idx = names[ch]
    else:
        if not s.text.startswith(symbol, s.i):
            s.error(f"expected variable {symbol}<index>")
        s.i += len(symbol)
        if not (s.i < len(s.text) and s.text[s.i].isdigit()):
            s.error("expected variable index")
        idx = s.integer() - offset
        if idx < 0:
            raise PolynomialSyntaxError(f"variable index below {offset}", start, s.text)
    e = 1
    if s.take("^"):
        pos = s.i
        e = s.integer(signed=True)
        if e < 0 and idx != 0:
            raise PolynomialSyntaxError(f"negative exponent allowed only on {symbol}{offset}", pos, s.text)
        if abs(e) > MAX_EXP:
            raise PolynomialSyntaxError("exponent overflow", pos, s.text)
    if idx > 255:
        raise PolynomialSyntaxError("variable index too large", start, s.text)
    return idx, e


def format_monomial(exps: tuple[int, ...], symbol: str = "y", offset: int = 0, names: list[str] | None = None) -> str:
    parts = []
    for i, e in enumerate(exps):
        if e == 0:
            continue
        var = names[i] if names is not None else f"{symbol}{i + offset}"
        parts.append(var if e == 1 else f"{var}^{e}")
    return "*".join(parts)


def format_poly(f: Polynomial, symbol: str = "y", offset: int = 0, names: list[str] | None = None) -> str:
    """Terms in decreasing lex order, e.g. ``2*y0*y2 - y1^2``."""
    if f.is_zero():
        return "0"
    out = []
    for n, (exps, c) in enumerate(f.terms()):
        mono = format_monomial(exps, symbol, offset, names)
        if f.p is None:
            neg = c < 0
            a = -c if neg else c
        else:
            neg, a = False, c
        if not mono:
            body = str(a)
        elif a == 1:
            body = mono
        else:
            body = f"{a}*{mono}"
        if n == 0:
            out.append(f"-{body}" if neg else body)
        else:
            out.append(f"- {body}" if neg else f"+ {body}")
    return " ".join(out)


def to_json(f: Polynomial) -> dict:
    d: dict = {"field": f.field}
    if f.p is not None:
        d["p"] = f.p
    d["terms"] = [{"exp": list(e), "coeff": str(c)} for e, c in f.terms()]
    return d


def from_json(d: dict) -> Polynomial:
    field = d.get("field")
    if field == "Q":
        p = None
    elif field == "Fp":
        p = int(d["p"])
    else:
        raise ValueError(f"unknown field tag {field!r}")
    terms: dict[tuple[int, ...], object] = {}
    for t in d["terms"]:
        exps = tuple(int(e) for e in t["exp"])
        while exps and exps[-1] == 0:
            exps = exps[:-1]
        if exps in terms:
            raise ValueError(f"duplicate exponent vector {list(exps)}")
        c = mpq(str(t["coeff"]))
        terms[exps] = c
    return Polynomial(terms, p)
