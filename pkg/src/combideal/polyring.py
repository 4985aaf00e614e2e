"""Sparse multivariate polynomials over the rationals.

A polynomial in ``n`` variables is a mapping from exponent tuples (one entry
per variable) to nonzero :class:`fractions.Fraction` coefficients.  Variables
are plain indices; names only matter when parsing and printing.

    x0^2*x1 + 3  ->  {(2, 1): Fraction(1), (0, 0): Fraction(3)}

Monomial orders are ``lex`` and ``grlex`` over a variable priority list
(highest priority first).  The default priority is index order, so
``x0 > x1 > ... > x_{n-1}``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from types import MappingProxyType
from typing import Iterable, Mapping, Sequence

from .errors import ParseError

Exponent = tuple[int, ...]
Coefficient = Fraction | int


@dataclass(frozen=True)
class MonomialOrder:
    """``lex`` or ``grlex`` with a fixed variable priority.

    ``priority`` lists variable indices from most to least significant; it
    must be a permutation of ``range(n)`` for the ring it is used in.  ``None``
    means natural index order.
    """

    kind: str = "grlex"
    priority: tuple[int, ...] | None = None

    def __post_init__(self):
        if self.kind not in ("lex", "grlex"):
            raise ValueError(f"unknown monomial order {self.kind!r}")
        if self.priority is not None:
            pr = tuple(self.priority)
            if sorted(pr) != list(range(len(pr))):
                raise ValueError("priority must be a permutation of variable indices")
            object.__setattr__(self, "priority", pr)

    def key(self, a: Exponent) -> tuple[int, ...]:
        """Sort key: larger key means larger monomial."""
        if self.priority is not None:
            if len(self.priority) != len(a):
                raise ValueError("priority length does not match exponent length")
            a = tuple(a[i] for i in self.priority)
        if self.kind == "grlex":
            return (sum(a),) + tuple(a)
        return tuple(a)


LEX = MonomialOrder("lex")
GRLEX = MonomialOrder("grlex")


def compare_monomials(a: Exponent, b: Exponent, order: MonomialOrder = GRLEX) -> int:
    """Return -1, 0 or 1 as ``a`` is less than, equal to or greater than ``b``."""
    if len(a) != len(b):
        raise ValueError(f"exponent length mismatch: {len(a)} vs {len(b)}")
    ka, kb = order.key(a), order.key(b)
    return (ka > kb) - (ka < kb)


def monomial_divides(a: Exponent, b: Exponent) -> bool:
    """True if x^a divides x^b."""
    return all(i <= j for i, j in zip(a, b))


def monomial_lcm(a: Exponent, b: Exponent) -> Exponent:
    return tuple(max(i, j) for i, j in zip(a, b))


def monomial_quotient(b: Exponent, a: Exponent) -> Exponent:
    return tuple(j - i for i, j in zip(a, b))


def _frac(c: Coefficient) -> Fraction:
    return c if isinstance(c, Fraction) else Fraction(c)


class Polynomial:
    """Immutable sparse polynomial with exact rational coefficients."""

    __slots__ = ("_terms", "nvars", "_hash")

    def __init__(self, terms: Mapping[Exponent, Coefficient] | None = None, nvars: int = 0):
        clean: dict[Exponent, Fraction] = {}
        for exp, c in (terms or {}).items():
            exp = tuple(int(e) for e in exp)
            if len(exp) != nvars:
                raise ValueError(f"exponent {exp} does not match ring arity {nvars}")
            if any(e < 0 for e in exp):
                raise ValueError(f"negative exponent in {exp}")
            c = _frac(c)
            if c:
                clean[exp] = clean.get(exp, Fraction(0)) + c
                if not clean[exp]:
                    del clean[exp]
        self._terms = clean
        self.nvars = nvars
        self._hash = None

    @classmethod
    def _raw(cls, terms: dict[Exponent, Fraction], nvars: int) -> "Polynomial":
        # terms must already be clean: correct arity, Fraction values, no zeros
        obj = cls.__new__(cls)
        obj._terms = terms
        obj.nvars = nvars
        obj._hash = None
        return obj

    # constructors

    @classmethod
    def zero(cls, nvars: int) -> "Polynomial":
        return cls._raw({}, nvars)

    @classmethod
    def constant(cls, c: Coefficient, nvars: int) -> "Polynomial":
        c = _frac(c)
        return cls._raw({(0,) * nvars: c} if c else {}, nvars)

    @classmethod
    def variable(cls, i: int, nvars: int) -> "Polynomial":
        if not 0 <= i < nvars:
            raise ValueError(f"variable index {i} out of range for {nvars} variables")
        exp = [0] * nvars
        exp[i] = 1
        return cls._raw({tuple(exp): Fraction(1)}, nvars)

    @classmethod
    def monomial(cls, exp: Exponent, c: Coefficient = 1) -> "Polynomial":
        return cls({tuple(exp): c}, len(exp))

    # accessors

    @property
    def terms(self) -> Mapping[Exponent, Fraction]:
        return MappingProxyType(self._terms)

    def items(self):
        return self._terms.items()

    def __len__(self):
        return len(self._terms)

    def __bool__(self):
        return bool(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def is_constant(self) -> bool:
        return not self._terms or (len(self._terms) == 1 and not any(next(iter(self._terms))))

    def coefficient(self, exp: Exponent) -> Fraction:
        return self._terms.get(tuple(exp), Fraction(0))

    def degree(self) -> int:
        """Total degree; -1 for the zero polynomial."""
        return max((sum(e) for e in self._terms), default=-1)

    def degree_in(self, i: int) -> int:
        return max((e[i] for e in self._terms), default=-1)

    def support_variables(self) -> set[int]:
        return {i for e in self._terms for i, k in enumerate(e) if k}

    def leading_term(self, order: MonomialOrder = GRLEX) -> tuple[Fraction, Exponent]:
        if not self._terms:
            raise ValueError("the zero polynomial has no leading term")
        exp = max(self._terms, key=order.key)
        return self._terms[exp], exp

    def leading_monomial(self, order: MonomialOrder = GRLEX) -> Exponent:
        return self.leading_term(order)[1]

    def leading_coefficient(self, order: MonomialOrder = GRLEX) -> Fraction:
        return self.leading_term(order)[0]

    def monic(self, order: MonomialOrder = GRLEX) -> "Polynomial":
        if not self._terms:
            return self
        lc = self.leading_coefficient(order)
        if lc == 1:
            return self
        return self._raw({e: c / lc for e, c in self._terms.items()}, self.nvars)

    def sorted_terms(self, order: MonomialOrder = GRLEX) -> list[tuple[Exponent, Fraction]]:
        """Terms from largest to smallest monomial."""
        return sorted(self._terms.items(), key=lambda t: order.key(t[0]), reverse=True)

    # arithmetic

    def _coerce(self, other) -> "Polynomial":
        if isinstance(other, Polynomial):
            if other.nvars != self.nvars:
                raise ValueError(f"ring arity mismatch: {self.nvars} vs {other.nvars}")
            return other
        if isinstance(other, (int, Fraction)):
            return Polynomial.constant(other, self.nvars)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        out = dict(self._terms)
        for e, c in other._terms.items():
            v = out.get(e)
            if v is None:
                out[e] = c
            else:
                v += c
                if v:
                    out[e] = v
                else:
                    del out[e]
        return self._raw(out, self.nvars)

    __radd__ = __add__

    def __neg__(self):
        return self._raw({e: -c for e, c in self._terms.items()}, self.nvars)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other + (-self)

    def scale(self, c: Coefficient) -> "Polynomial":
        c = _frac(c)
        if not c:
            return Polynomial.zero(self.nvars)
        return self._raw({e: v * c for e, v in self._terms.items()}, self.nvars)

    def mul_term(self, c: Coefficient, exp: Exponent) -> "Polynomial":
        """Multiply by the single term ``c * x^exp``."""
        c = _frac(c)
        if not c:
            return Polynomial.zero(self.nvars)
        return self._raw(
            {tuple(a + b for a, b in zip(e, exp)): v * c for e, v in self._terms.items()},
            self.nvars,
        )

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        out: dict[Exponent, Fraction] = {}
        for e1, c1 in self._terms.items():
            for e2, c2 in other._terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                out[e] = out.get(e, 0) + c1 * c2
        return self._raw({e: c for e, c in out.items() if c}, self.nvars)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative power")
        result = Polynomial.constant(1, self.nvars)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    # evaluation and substitution

    def evaluate(self, point: Sequence[Coefficient]) -> Fraction:
        if len(point) != self.nvars:
            raise ValueError("point dimension does not match ring arity")
        total = Fraction(0)
        for e, c in self._terms.items():
            term = c
            for x, k in zip(point, e):
                if k:
                    term *= x**k
            total += term
        return total

    __call__ = evaluate

    def substitute(self, images: Sequence["Polynomial"], nvars: int | None = None) -> "Polynomial":
        """Replace variable ``i`` by ``images[i]`` (all in a common target ring)."""
        if len(images) != self.nvars:
            raise ValueError("need one image per variable")
        if nvars is None:
            nvars = images[0].nvars if images else 0
        powers: dict[tuple[int, int], Polynomial] = {}

        def power(i, k):
            key = (i, k)
            if key not in powers:
                powers[key] = images[i] ** k
            return powers[key]

        total = Polynomial.zero(nvars)
        for e, c in self._terms.items():
            term = Polynomial.constant(c, nvars)
            for i, k in enumerate(e):
                if k:
                    term = term * power(i, k)
            total = total + term
        return total

    def reorder(self, mapping: Sequence[int], nvars: int) -> "Polynomial":
        """Move variable ``i`` to index ``mapping[i]`` of an ``nvars``-variable ring.

        Several variables may map to the same target (they are merged).
        """
        out: dict[Exponent, Fraction] = {}
        for e, c in self._terms.items():
            new = [0] * nvars
            for i, k in enumerate(e):
                if k:
                    new[mapping[i]] += k
            t = tuple(new)
            out[t] = out.get(t, 0) + c
        return self._raw({e: c for e, c in out.items() if c}, nvars)

    # comparison and display

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = Polynomial.constant(other, self.nvars)
        if not isinstance(other, Polynomial):
            return NotImplemented
        return self.nvars == other.nvars and self._terms == other._terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.nvars, frozenset(self._terms.items())))
        return self._hash

    def to_str(self, names: Sequence[str] | None = None, order: MonomialOrder = GRLEX) -> str:
        if not self._terms:
            return "0"
        if names is None:
            names = [f"x{i}" for i in range(self.nvars)]
        parts = []
        for exp, c in self.sorted_terms(order):
            factors = []
            for name, k in zip(names, exp):
                if k == 1:
                    factors.append(name)
                elif k > 1:
                    factors.append(f"{name}^{k}")
            mag = abs(c)
            if not factors:
                body = str(mag)
            elif mag == 1:
                body = "*".join(factors)
            else:
                body = f"{mag}*" + "*".join(factors)
            sign = "-" if c < 0 else "+"
            parts.append((sign, body))
        first_sign, first = parts[0]
        out = ("-" if first_sign == "-" else "") + first
        for sign, body in parts[1:]:
            out += f" {sign} {body}"
        return out

    def __repr__(self):
        return f"Polynomial({self.to_str()!r}, nvars={self.nvars})"

    def __str__(self):
        return self.to_str()


def divide(
    f: Polynomial, divisors: Sequence[Polynomial], order: MonomialOrder = GRLEX
) -> tuple[list[Polynomial], Polynomial]:
    """Multivariate division: ``f = sum(q_i * d_i) + r``.

    Divisors are scanned in list order and the scan restarts at the first
    divisor after every reduction step.  No term of ``r`` is divisible by a
    divisor's leading monomial.
    """
    if any(d.is_zero() for d in divisors):
        raise ValueError("division by the zero polynomial")
    n = f.nvars
    leads = [d.leading_term(order) for d in divisors]
    quotients: list[dict[Exponent, Fraction]] = [{} for _ in divisors]
    remainder: dict[Exponent, Fraction] = {}
    p = dict(f._terms)
    key = order.key
    while p:
        lm = max(p, key=key)
        lc = p[lm]
        for i, (dc, dm) in enumerate(leads):
            if monomial_divides(dm, lm):
                qc = lc / dc
                qm = monomial_quotient(lm, dm)
                quotients[i][qm] = quotients[i].get(qm, 0) + qc
                for e, c in divisors[i]._terms.items():
                    t = tuple(a + b for a, b in zip(e, qm))
                    v = p.get(t, 0) - qc * c
                    if v:
                        p[t] = v
                    else:
                        p.pop(t, None)
                break
        else:
            remainder[lm] = lc
            del p[lm]
    qs = [Polynomial._raw({e: c for e, c in q.items() if c}, n) for q in quotients]
    return qs, Polynomial._raw(remainder, n)


def s_polynomial(f: Polynomial, g: Polynomial, order: MonomialOrder = GRLEX) -> Polynomial:
    """``lcm/LT(f) * f - lcm/LT(g) * g`` for ``lcm = lcm(LM(f), LM(g))``."""
    if f.is_zero() or g.is_zero():
        raise ValueError("S-polynomial of the zero polynomial")
    cf, mf = f.leading_term(order)
    cg, mg = g.leading_term(order)
    lcm = monomial_lcm(mf, mg)
    return f.mul_term(1 / cf, monomial_quotient(lcm, mf)) - g.mul_term(1 / cg, monomial_quotient(lcm, mg))


# text grammar

_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z0-9_]*)|(\S))")


def _tokenize(text: str) -> list[tuple[str, str]]:
    tokens = []
    pos = 0
    text = text.strip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            break
        num, name, sym = m.groups()
        if num is not None:
            tokens.append(("num", num))
        elif name is not None:
            tokens.append(("name", name))
        elif sym in "+-*/^()":
            tokens.append(("sym", sym))
        else:
            raise ParseError(f"unexpected character {sym!r} in {text!r}")
        pos = m.end()
    return tokens


class _Parser:
    def __init__(self, text: str, variables: Sequence[str]):
        self.text = text
        self.tokens = _tokenize(text)
        self.pos = 0
        self.index = {v: i for i, v in enumerate(variables)}
        self.n = len(variables)

    def peek(self):
        return self.tokens[self.pos] if self.pos < len(self.tokens) else (None, None)

    def take(self, kind=None, value=None):
        tok = self.peek()
        if tok[0] is None or (kind and tok[0] != kind) or (value and tok[1] != value):
            raise ParseError(f"unexpected token {tok[1]!r} in {self.text!r}")
        self.pos += 1
        return tok

    def parse(self) -> Polynomial:
        if not self.tokens:
            raise ParseError("empty polynomial")
        p = self.expr()
        if self.pos != len(self.tokens):
            raise ParseError(f"trailing input {self.peek()[1]!r} in {self.text!r}")
        return p

    def expr(self):
        p = self.term()
        while self.peek() in (("sym", "+"), ("sym", "-")):
            op = self.take()[1]
            t = self.term()
            p = p + t if op == "+" else p - t
        return p

    def term(self):
        p = self.unary()
        while self.peek() == ("sym", "*"):
            self.take()
            p = p * self.unary()
        return p

    def unary(self):
        if self.peek() == ("sym", "-"):
            self.take()
            return -self.unary()
        if self.peek() == ("sym", "+"):
            self.take()
            return self.unary()
        return self.power()

    def power(self):
        base = self.atom()
        if self.peek() == ("sym", "^"):
            self.take()
            return base ** int(self.take("num")[1])
        return base

    def atom(self):
        kind, value = self.peek()
        if kind == "num":
            self.take()
            c = Fraction(int(value))
            if self.peek() == ("sym", "/"):
                self.take()
                den = int(self.take("num")[1])
                if den == 0:
                    raise ParseError("zero denominator")
                c /= den
            return Polynomial.constant(c, self.n)
        if kind == "name":
            self.take()
            if value not in self.index:
                raise ParseError(f"unknown variable {value!r}")
            return Polynomial.variable(self.index[value], self.n)
        if (kind, value) == ("sym", "("):
            self.take()
            p = self.expr()
            self.take("sym", ")")
            return p
        raise ParseError(f"unexpected token {value!r} in {self.text!r}")


def parse_polynomial(text: str, variables: Sequence[str]) -> Polynomial:
    """Parse e.g. ``"2*x1^2*x2 - 3/2*x2 + 1"`` in the ring over ``variables``."""
    return _Parser(text, list(variables)).parse()


def variables_in(text: str) -> list[str]:
    """Variable names in order of first appearance."""
    seen: list[str] = []
    for kind, value in _tokenize(text):
        if kind == "name" and value not in seen:
            seen.append(value)
    return seen


def poly_sum(polys: Iterable[Polynomial], nvars: int) -> Polynomial:
    total = Polynomial.zero(nvars)
    for p in polys:
        total = total + p
    return total
