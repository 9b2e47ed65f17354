"""Exact coefficient fields, monomial orders and sparse polynomials.

Polynomials are immutable dictionaries ``{exponent tuple: coefficient}``
over a :class:`PolynomialRing`.  Coefficients are :class:`fractions.Fraction`
over the rationals and canonical integers in ``[0, p)`` over prime fields.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .errors import ParseError, RingMismatchError


def _is_prime(p: int) -> bool:
    if p < 2:
        return False
    if p % 2 == 0:
        return p == 2
    f = 3
    while f * f <= p:
        if p % f == 0:
            return False
        f += 2
    return True


class FieldSpec:
    """Common interface of the coefficient fields."""

    characteristic = 0

    def convert(self, value):
        raise NotImplementedError

    def inv(self, a):
        raise NotImplementedError

    def render(self, a) -> str:
        return str(a)


class RationalField(FieldSpec):
    characteristic = 0

    def convert(self, value):
        if isinstance(value, Fraction):
            return value
        if isinstance(value, (int, str)):
            return Fraction(value)
        raise TypeError(f"cannot convert {value!r} to a rational")

    def inv(self, a):
        if a == 0:
            raise ZeroDivisionError("inverse of zero")
        return 1 / Fraction(a)

    def __eq__(self, other):
        return isinstance(other, RationalField)

    def __hash__(self):
        return hash("QQ")

    def __repr__(self):
        return "QQ"


class PrimeField(FieldSpec):
    def __init__(self, p: int):
        if not _is_prime(p):
            raise ValueError(f"{p} is not prime")
        self.characteristic = p

    def convert(self, value):
        p = self.characteristic
        if isinstance(value, int):
            return value % p
        if isinstance(value, Fraction):
            if value.denominator % p == 0:
                raise ZeroDivisionError(f"denominator divisible by {p}")
            return value.numerator * pow(value.denominator, -1, p) % p
        if isinstance(value, str):
            return self.convert(Fraction(value))
        raise TypeError(f"cannot convert {value!r} to GF({p})")

    def inv(self, a):
        if a % self.characteristic == 0:
            raise ZeroDivisionError("inverse of zero")
        return pow(a, -1, self.characteristic)

    def __eq__(self, other):
        return isinstance(other, PrimeField) and other.characteristic == self.characteristic

    def __hash__(self):
        return hash(("GF", self.characteristic))

    def __repr__(self):
        return f"GF({self.characteristic})"


QQ = RationalField()


def GF(p: int) -> PrimeField:
    return PrimeField(p)


def field_from_name(name: str) -> FieldSpec:
    """``"QQ"``, ``"rational"`` or ``"GF(p)"`` / ``"GF p"``."""
    text = name.strip()
    if text.lower() in ("qq", "q", "rational", "rationals"):
        return QQ
    m = re.fullmatch(r"(?:GF|F|gf)\s*\(?\s*(\d+)\s*\)?", text)
    if m:
        return GF(int(m.group(1)))
    raise ValueError(f"unknown field {name!r}")


ORDERS = ("degrevlex", "lex")


@dataclass(frozen=True)
class Monomial:
    exponents: tuple
    degree: int


class PolynomialRing:
    """``k[x_1, ..., x_n]`` with a monomial order and a positive grading."""

    def __init__(self, variables: Sequence[str], field: FieldSpec = QQ,
                 order: str = "degrevlex", weights: Sequence[int] | None = None):
        variables = tuple(str(v) for v in variables)
        if len(set(variables)) != len(variables):
            raise ValueError("variable names must be distinct")
        for v in variables:
            if not re.fullmatch(r"[A-Za-z_][A-Za-z0-9_]*", v):
                raise ValueError(f"invalid variable name {v!r}")
        if order not in ORDERS:
            raise ValueError(f"unknown monomial order {order!r}")
        weights = tuple(int(w) for w in weights) if weights is not None else (1,) * len(variables)
        if len(weights) != len(variables) or any(w < 1 for w in weights):
            raise ValueError("weights must be positive, one per variable")
        self.variables = variables
        self.field = field
        self.order = order
        self.weights = weights
        self.nvars = len(variables)
        self._index = {v: i for i, v in enumerate(variables)}
        self._setup()

    def _setup(self):
        w = self.weights
        if all(x == 1 for x in w):
            self.wdeg = sum
        else:
            self.wdeg = lambda e: sum(a * b for a, b in zip(e, w))
        wdeg = self.wdeg
        if self.order == "lex":
            self.mono_key = tuple
        else:
            def mono_key(e):
                return (wdeg(e),) + tuple(-a for a in reversed(e))
            self.mono_key = mono_key

    def __getstate__(self):
        return {"variables": self.variables, "field": self.field,
                "order": self.order, "weights": self.weights}

    def __setstate__(self, state):
        self.__init__(state["variables"], state["field"], state["order"], state["weights"])

    def __eq__(self, other):
        return (isinstance(other, PolynomialRing) and self.variables == other.variables
                and self.field == other.field and self.order == other.order
                and self.weights == other.weights)

    def __hash__(self):
        return hash((self.variables, self.field, self.order, self.weights))

    def __repr__(self):
        return (f"PolynomialRing({list(self.variables)}, {self.field!r}, "
                f"order={self.order!r}, weights={list(self.weights)})")

    # construction helpers

    @property
    def zero(self) -> "Polynomial":
        return Polynomial(self, {})

    @property
    def one(self) -> "Polynomial":
        return self.constant(1)

    @property
    def gens(self) -> list["Polynomial"]:
        return [self.var(i) for i in range(self.nvars)]

    def var(self, name_or_index) -> "Polynomial":
        i = name_or_index if isinstance(name_or_index, int) else self._index[name_or_index]
        e = [0] * self.nvars
        e[i] = 1
        return Polynomial(self, {tuple(e): self.field.convert(1)})

    def constant(self, c) -> "Polynomial":
        c = self.field.convert(c)
        return Polynomial(self, {(0,) * self.nvars: c} if c != 0 else {})

    def monomial(self, exponents, coeff=1) -> "Polynomial":
        c = self.field.convert(coeff)
        return Polynomial(self, {tuple(exponents): c} if c != 0 else {})

    def monomial_type(self, exponents) -> Monomial:
        return Monomial(tuple(exponents), self.wdeg(exponents))

    def from_dict(self, terms: dict) -> "Polynomial":
        conv = self.field.convert
        out = {}
        for e, c in terms.items():
            c = conv(c)
            if c != 0:
                out[tuple(e)] = c
        return Polynomial(self, out)

    def __call__(self, value) -> "Polynomial":
        if isinstance(value, Polynomial):
            if value.ring != self:
                raise RingMismatchError("polynomial from a different ring")
            return value
        if isinstance(value, str):
            return self.parse(value)
        return self.constant(value)

    def index(self, name: str) -> int:
        return self._index[name]

    def parse(self, text: str) -> "Polynomial":
        return _Parser(self, text).parse()


class Polynomial:
    """Immutable sparse polynomial; ``terms()`` lists terms in descending order."""

    __slots__ = ("ring", "_terms", "_hash")

    def __init__(self, ring: PolynomialRing, terms: dict):
        self.ring = ring
        self._terms = terms
        self._hash = None

    # inspection

    def terms(self) -> list:
        key = self.ring.mono_key
        return sorted(self._terms.items(), key=lambda t: key(t[0]), reverse=True)

    def as_dict(self) -> dict:
        return dict(self._terms)

    def __iter__(self):
        return iter(self.terms())

    def __len__(self):
        return len(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def __bool__(self):
        return bool(self._terms)

    def leading_term(self):
        if not self._terms:
            raise ValueError("zero polynomial has no leading term")
        e = max(self._terms, key=self.ring.mono_key)
        return e, self._terms[e]

    def leading_monomial(self) -> tuple:
        return self.leading_term()[0]

    def leading_coefficient(self):
        return self.leading_term()[1]

    def degree(self) -> int:
        """Largest weighted degree of a term; ``-1`` for zero."""
        if not self._terms:
            return -1
        return max(self.ring.wdeg(e) for e in self._terms)

    def is_homogeneous(self) -> tuple[bool, int | None]:
        if not self._terms:
            return True, None
        degs = {self.ring.wdeg(e) for e in self._terms}
        if len(degs) == 1:
            return True, degs.pop()
        return False, None

    def is_constant(self) -> bool:
        return all(not any(e) for e in self._terms)

    # arithmetic

    def _coerce(self, other) -> "Polynomial":
        if isinstance(other, Polynomial):
            if other.ring != self.ring:
                raise RingMismatchError("operands over different rings")
            return other
        if isinstance(other, (int, Fraction)):
            return self.ring.constant(other)
        return NotImplemented

    def _add(self, other, sign):
        field = self.ring.field
        p = field.characteristic
        out = dict(self._terms)
        for e, c in other._terms.items():
            v = out.get(e, 0) + (c if sign > 0 else -c)
            if p:
                v %= p
            if v:
                out[e] = v
            else:
                out.pop(e, None)
        return Polynomial(self.ring, out)

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self._add(other, 1)

    __radd__ = __add__

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self._add(other, -1)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other._add(self, -1)

    def __neg__(self):
        p = self.ring.field.characteristic
        if p:
            return Polynomial(self.ring, {e: (-c) % p for e, c in self._terms.items()})
        return Polynomial(self.ring, {e: -c for e, c in self._terms.items()})

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        p = self.ring.field.characteristic
        out: dict = {}
        for e1, c1 in self._terms.items():
            for e2, c2 in other._terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                out[e] = out.get(e, 0) + c1 * c2
        if p:
            out = {e: c % p for e, c in out.items() if c % p}
        else:
            out = {e: c for e, c in out.items() if c}
        return Polynomial(self.ring, out)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if not isinstance(n, int) or n < 0:
            raise ValueError("exponent must be a nonnegative integer")
        if len(self._terms) == 1:
            (e, c), = self._terms.items()
            p = self.ring.field.characteristic
            c = pow(c, n, p) if p else c ** n
            return Polynomial(self.ring, {tuple(a * n for a in e): c})
        result = self.ring.one
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = self.ring.constant(other)
        if not isinstance(other, Polynomial):
            return NotImplemented
        return self.ring == other.ring and self._terms == other._terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.ring, frozenset(self._terms.items())))
        return self._hash

    # rendering

    def _render_monomial(self, e) -> str:
        parts = []
        for name, a in zip(self.ring.variables, e):
            if a == 1:
                parts.append(name)
            elif a > 1:
                parts.append(f"{name}^{a}")
        return "*".join(parts)

    def __str__(self):
        if not self._terms:
            return "0"
        out = []
        for e, c in self.terms():
            neg = c < 0
            mag = -c if neg else c
            mono = self._render_monomial(e)
            if not mono:
                body = str(mag)
            elif mag == 1:
                body = mono
            else:
                body = f"{mag}*{mono}"
            if not out:
                out.append(f"-{body}" if neg else body)
            else:
                out.append(f" - {body}" if neg else f" + {body}")
        return "".join(out)

    def __repr__(self):
        return f"Polynomial({str(self)!r})"


def poly_arith(a: Polynomial, b: Polynomial, op: str) -> Polynomial:
    """Exact ``a op b`` for ``op`` in ``add``, ``sub``, ``mul``."""
    if a.ring != b.ring:
        raise RingMismatchError("operands over different rings")
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    raise ValueError(f"unknown operation {op!r}")


def is_homogeneous(f: Polynomial) -> tuple[bool, int | None]:
    return f.is_homogeneous()


def require_homogeneous(polys: Iterable[Polynomial], what: str = "element"):
    for f in polys:
        ok, _ = f.is_homogeneous()
        if not ok:
            from .errors import NotHomogeneousError
            raise NotHomogeneousError(f"{what} {f} is not homogeneous")


# ---------------------------------------------------------------------------
# text grammar: integers or a/b coefficients, ^ powers, * products, + and -

_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z0-9_]*)|(\S))")


class _Parser:
    def __init__(self, ring: PolynomialRing, text: str):
        self.ring = ring
        self.text = text
        self.tokens = []
        pos = 0
        while pos < len(text):
            m = _TOKEN.match(text, pos)
            if m is None:
                break
            if m.group(0).strip() == "":
                break
            col = m.start(m.lastindex) + 1
            if m.group(1) is not None:
                self.tokens.append(("num", int(m.group(1)), col))
            elif m.group(2) is not None:
                self.tokens.append(("name", m.group(2), col))
            else:
                ch = m.group(3)
                if ch not in "+-*^/()":
                    raise ParseError(f"unexpected character {ch!r}", column=col)
                self.tokens.append((ch, ch, col))
            pos = m.end()
        self.tokens.append(("end", None, len(text) + 1))
        self.i = 0

    def peek(self):
        return self.tokens[self.i]

    def take(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect(self, kind, what):
        tok = self.take()
        if tok[0] != kind:
            found = "end of input" if tok[0] == "end" else repr(tok[1])
            raise ParseError(f"expected {what}, found {found}", column=tok[2])
        return tok

    def parse(self) -> Polynomial:
        if self.peek()[0] == "end":
            raise ParseError("empty polynomial", column=1)
        value = self.expr()
        tok = self.peek()
        if tok[0] != "end":
            raise ParseError(f"unexpected {tok[1]!r}", column=tok[2])
        return value

    def expr(self) -> Polynomial:
        value = self.term()
        while self.peek()[0] in "+-" and self.peek()[0] != "end":
            op = self.take()[0]
            rhs = self.term()
            value = value + rhs if op == "+" else value - rhs
        return value

    def term(self) -> Polynomial:
        value = self.unary()
        while self.peek()[0] == "*":
            self.take()
            value = value * self.unary()
        return value

    def unary(self) -> Polynomial:
        kind = self.peek()[0]
        if kind == "-":
            self.take()
            return -self.unary()
        if kind == "+":
            self.take()
            return self.unary()
        return self.power()

    def power(self) -> Polynomial:
        base = self.atom()
        if self.peek()[0] == "^":
            self.take()
            tok = self.expect("num", "exponent")
            base = base ** tok[1]
        return base

    def atom(self) -> Polynomial:
        tok = self.take()
        kind = tok[0]
        if kind == "num":
            value = Fraction(tok[1])
            if self.peek()[0] == "/":
                self.take()
                den = self.expect("num", "denominator")
                if den[1] == 0:
                    raise ParseError("zero denominator", column=den[2])
                value = Fraction(tok[1], den[1])
            return self.ring.constant(value)
        if kind == "name":
            if tok[1] not in self.ring._index:
                raise ParseError(f"unknown variable {tok[1]!r}", column=tok[2])
            return self.ring.var(tok[1])
        if kind == "(":
            value = self.expr()
            self.expect(")", "')'")
            return value
        found = "end of input" if kind == "end" else repr(tok[1])
        raise ParseError(f"expected a coefficient, variable or '(', found {found}", column=tok[2])
