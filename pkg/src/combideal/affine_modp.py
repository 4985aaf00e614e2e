"""Linear equations over Z_p: p-expression bases and the truncated basis conversion.

A *p-expression* is a linear form over Z_p read as a function
``Z_p^n -> {0, ..., p-1}`` inside Q.  The family

    F_n = { a_1 x_1 + ... + a_l x_l + x_{l+1} + b  (mod p) :  b <= p-2 }  (l = 0..n-1)

together with the constant 1 is a basis of all functions ``Z_p^n -> Q``.  A
basis element is keyed by ``(coeffs, b)`` with the last nonzero coefficient
equal to 1; the constant is keyed by ``None``.  Expansions are dicts from keys
to rationals (:class:`BasisExpansion`).

A consistent system in reduced row echelon form gives an implicit lex basis
``G1``: ``x_i - f_i`` for pivot variables and the domain polynomial of each
free variable.  Restricting a monomial to the solution set turns it into a
product of p-expressions over the free variables; :func:`convert_truncated_gb`
runs the FGLM-style scan over monomials of degree at most ``d`` and decides
linear dependence by exact solves on the expansion coefficients.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Sequence

from .errors import DegreeBoundError, ParseError
from .groebner import GroebnerBasis, normal_form
from .linalg import IncrementalSpan, solve
from .polyring import GRLEX, Polynomial, divide, monomial_divides, parse_polynomial


def _check_prime(p: int):
    if p < 2 or any(p % q == 0 for q in range(2, int(p**0.5) + 1)):
        raise ValueError(f"{p} is not prime")


@dataclass(frozen=True)
class PExpression:
    """``(sum coeffs[i] * x_i + const) mod p`` over ``len(coeffs)`` variables."""

    p: int
    coeffs: tuple[int, ...]
    const: int = 0

    def __post_init__(self):
        object.__setattr__(self, "coeffs", tuple(int(c) % self.p for c in self.coeffs))
        object.__setattr__(self, "const", int(self.const) % self.p)

    @classmethod
    def variable(cls, i: int, n: int, p: int) -> "PExpression":
        c = [0] * n
        c[i] = 1
        return cls(p, tuple(c), 0)

    @property
    def n(self) -> int:
        return len(self.coeffs)

    def last(self) -> int:
        """Index of the last variable with nonzero coefficient, -1 if constant."""
        for i in range(len(self.coeffs) - 1, -1, -1):
            if self.coeffs[i]:
                return i
        return -1

    def support(self) -> list[int]:
        return [i for i, c in enumerate(self.coeffs) if c]

    def evaluate(self, point: Sequence[int]) -> int:
        return (sum(c * x for c, x in zip(self.coeffs, point)) + self.const) % self.p

    def is_canonical(self) -> bool:
        m = self.last()
        return m >= 0 and self.coeffs[m] == 1 and self.const <= self.p - 2

    def key(self):
        return (self.coeffs, self.const)

    def plus(self, other: "PExpression", scale: int = 1) -> "PExpression":
        """``self + scale * other`` as linear forms mod p."""
        return PExpression(
            self.p, tuple(a + scale * b for a, b in zip(self.coeffs, other.coeffs)), self.const + scale * other.const
        )

    def to_str(self, names: Sequence[str] | None = None) -> str:
        names = names or [f"x{i}" for i in range(self.n)]
        parts = [(f"{c}*" if c != 1 else "") + names[i] for i, c in enumerate(self.coeffs) if c]
        if self.const or not parts:
            parts.append(str(self.const))
        return " (+) ".join(parts)


def key_value(key, point: Sequence[int], p: int) -> int:
    if key is None:
        return 1
    coeffs, b = key
    return (sum(c * x for c, x in zip(coeffs, point)) + b) % p


def key_order(key):
    """Canonical order: the constant first, then level, then (a_1..a_l, b) lexicographically."""
    if key is None:
        return (-1,)
    coeffs, b = key
    m = max(i for i, c in enumerate(coeffs) if c)
    return (m, coeffs[:m], b)


def canonical_basis(nv: int, p: int) -> list:
    """Keys of the basis of functions on ``Z_p^nv``, in canonical order (size p^nv)."""
    keys = [None]
    for level in range(nv):
        for alpha in itertools.product(range(p), repeat=level):
            for b in range(p - 1):
                keys.append((alpha + (1,) + (0,) * (nv - level - 1), b))
    return keys


@dataclass
class BasisExpansion:
    """Rational combination of basis p-expressions over ``n`` variables."""

    p: int
    n: int
    terms: dict = field(default_factory=dict)

    def add(self, key, c):
        if not c:
            return
        v = self.terms.get(key, 0) + c
        if v:
            self.terms[key] = v
        else:
            self.terms.pop(key, None)

    def add_expansion(self, other: "BasisExpansion", scale=1):
        for k, c in other.terms.items():
            self.add(k, c * scale)

    def scaled(self, c) -> "BasisExpansion":
        return BasisExpansion(self.p, self.n, {k: v * c for k, v in self.terms.items()} if c else {})

    def evaluate(self, point: Sequence[int]) -> Fraction:
        return sum((c * key_value(k, point, self.p) for k, c in self.terms.items()), Fraction(0))

    def is_zero(self) -> bool:
        return not self.terms

    def items(self):
        return sorted(self.terms.items(), key=lambda kv: key_order(kv[0]))

    def __eq__(self, other):
        return isinstance(other, BasisExpansion) and (self.p, self.n, self.terms) == (other.p, other.n, other.terms)


def _solve_in_basis(keys: list, nv: int, p: int, values: Sequence) -> list[Fraction]:
    points = list(itertools.product(range(p), repeat=nv))
    a = [[key_value(k, pt, p) for k in keys] for pt in points]
    x = solve(a, values)
    if x is None:
        raise ArithmeticError("basis value matrix is singular")
    return x


def expand_function(fn, nv: int, p: int) -> dict:
    """Coefficients of ``fn: Z_p^nv -> Q`` in the canonical basis (dense solve)."""
    keys = canonical_basis(nv, p)
    values = [Fraction(fn(pt)) for pt in itertools.product(range(p), repeat=nv)]
    return {k: c for k, c in zip(keys, _solve_in_basis(keys, nv, p, values)) if c}


@lru_cache(maxsize=None)
def _univariate_table(p: int) -> dict:
    """(a, b) -> expansion of ``a*u + b`` over {1, u + g}."""
    table = {}
    for a in range(1, p):
        for b in range(p):
            table[(a, b)] = expand_function(lambda pt: (a * pt[0] + b) % p, 1, p)
    return table


@lru_cache(maxsize=None)
def _bivariate_table(p: int) -> dict:
    """(a, b) -> expansion of ``y + a*x + b`` over the basis on (y, x)."""
    table = {}
    for a in range(1, p):
        for b in range(p):
            table[(a, b)] = expand_function(lambda pt: (pt[0] + a * pt[1] + b) % p, 2, p)
    return table


def pexp_sum_to_basis(e: PExpression) -> BasisExpansion:
    """Expand a single p-expression in the canonical basis.

    The last variable is split off as ``y + a_m x_m + b`` with
    ``y = a_1 x_1 + ... + a_{m-1} x_{m-1}``.  The two-variable table turns
    this into terms ``a' y + x_m + g`` (already canonical), ``y + g`` (shorter
    p-expressions, processed next) and a constant.  Pending shorter
    expressions with equal coefficients are merged before being split.
    """
    p, n = e.p, e.n
    out = BasisExpansion(p, n)
    pending: dict[tuple[tuple[int, ...], int], Fraction] = {e.key(): Fraction(1)}
    uni, bi = _univariate_table(p), _bivariate_table(p)
    while pending:
        key = max(pending, key=lambda k: (_last(k[0]), k))
        coef = pending.pop(key)
        if not coef:
            continue
        coeffs, b = key
        m = _last(coeffs)
        if m < 0:
            out.add(None, coef * b)
            continue
        if coeffs[m] == 1 and b <= p - 2:
            out.add(key, coef)
            continue
        a = coeffs[m]
        y = coeffs[:m] + (0,) * (n - m)
        unit = (0,) * m + (1,) + (0,) * (n - m - 1)
        if _last(y) < 0:
            for k, c in uni[(a, b)].items():
                if k is None:
                    out.add(None, coef * c)
                else:
                    out.add((unit, k[1]), coef * c)
            continue
        for k, c in bi[(a, b)].items():
            if k is None:
                out.add(None, coef * c)
                continue
            (cy, cx), g = k
            if cx == 0:
                # y + g: a shorter p-expression, expanded later
                nk = (y, g)
                pending[nk] = pending.get(nk, 0) + coef * c
            else:
                nk = (tuple((cy * v + u) % p for v, u in zip(y, unit)), g)
                out.add(nk, coef * c)
    return out


def _last(coeffs) -> int:
    for i in range(len(coeffs) - 1, -1, -1):
        if coeffs[i]:
            return i
    return -1


@lru_cache(maxsize=None)
def product_table(p: int, d: int) -> dict:
    """Expansion of ``h_1 * ... * h_d`` (values in {0..p-1}) over the basis on d indeterminates."""
    def prod(pt):
        out = 1
        for v in pt:
            out *= v
        return out

    return expand_function(prod, d, p)


def pexp_product_to_basis(hs: Sequence[PExpression], n: int | None = None, p: int | None = None) -> BasisExpansion:
    """Expand a product of p-expressions pointwise in the canonical basis.

    The product of ``d`` indeterminates is expanded once per ``(p, d)`` in the
    basis on ``h_1..h_d``; each term ``a_1 h_1 + ... + h_{t+1} + b`` is then
    rewritten over the x variables and expanded with :func:`pexp_sum_to_basis`.
    """
    hs = list(hs)
    if not hs:
        if n is None or p is None:
            raise ValueError("empty product needs n and p")
        return BasisExpansion(p, n, {None: Fraction(1)})
    p, n = hs[0].p, hs[0].n
    if len(hs) == 1:
        return pexp_sum_to_basis(hs[0])
    out = BasisExpansion(p, n)
    zero = PExpression(p, (0,) * n, 0)
    for key, c in product_table(p, len(hs)).items():
        if key is None:
            out.add(None, c)
            continue
        alphas, b = key
        e = zero
        for a, h in zip(alphas, hs):
            if a:
                e = e.plus(h, a)
        e = PExpression(p, e.coeffs, e.const + b)
        out.add_expansion(pexp_sum_to_basis(e), c)
    return out


# linear systems


@dataclass
class ModPSystem:
    p: int
    variables: list[str]
    equations: list[tuple[tuple[int, ...], int]] = field(default_factory=list)

    def __post_init__(self):
        _check_prime(self.p)
        n = len(self.variables)
        eqs = []
        for coeffs, rhs in self.equations:
            if len(coeffs) != n:
                raise ValueError("equation length does not match variable count")
            eqs.append((tuple(int(c) % self.p for c in coeffs), int(rhs) % self.p))
        self.equations = eqs

    @property
    def n(self) -> int:
        return len(self.variables)

    def satisfied_by(self, point: Sequence[int]) -> bool:
        p = self.p
        return all(sum(c * x for c, x in zip(coeffs, point)) % p == rhs for coeffs, rhs in self.equations)

    def solutions(self) -> list[tuple[int, ...]]:
        """Brute force over Z_p^n (the oracle)."""
        return [pt for pt in itertools.product(range(self.p), repeat=self.n) if self.satisfied_by(pt)]


def _mod_inverse(a: int, p: int) -> int:
    return pow(a, p - 2, p)


def _coeff_mod(c: Fraction, p: int) -> int:
    if c.denominator % p == 0:
        raise ParseError(f"coefficient {c} has no value mod {p}")
    return c.numerator * _mod_inverse(c.denominator % p, p) % p


def parse_system(text: str) -> ModPSystem:
    """``p 3`` / ``vars x1 x2 x3`` / one ``lhs = rhs`` linear equation per line."""
    p = None
    variables: list[str] = []
    raw_eqs: list[str] = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        head = line.split()[0]
        if head == "p" and "=" not in line:
            try:
                p = int(line.split()[1])
            except (IndexError, ValueError):
                raise ParseError(f"line {lineno}: bad prime line") from None
        elif head == "vars":
            variables.extend(line.split()[1:])
        elif "=" in line:
            raw_eqs.append(line)
        else:
            raise ParseError(f"line {lineno}: cannot parse {line!r}")
    if p is None:
        raise ParseError("missing 'p' line")
    try:
        _check_prime(p)
    except ValueError as exc:
        raise ParseError(str(exc)) from None
    eqs = []
    for line in raw_eqs:
        lhs, rhs = line.split("=", 1)
        f = parse_polynomial(lhs, variables) - parse_polynomial(rhs, variables)
        if f.degree() > 1:
            raise ParseError(f"equation is not linear: {line!r}")
        coeffs = []
        for i in range(len(variables)):
            e = [0] * len(variables)
            e[i] = 1
            coeffs.append(_coeff_mod(f.coefficient(tuple(e)), p))
        const = _coeff_mod(f.coefficient((0,) * len(variables)), p)
        eqs.append((tuple(coeffs), (-const) % p))
    return ModPSystem(p, variables, eqs)


def format_system(s: ModPSystem) -> str:
    lines = [f"p {s.p}", "vars " + " ".join(s.variables)]
    for coeffs, rhs in s.equations:
        lhs = " + ".join(f"{c}*{v}" for c, v in zip(coeffs, s.variables))
        lines.append(f"{lhs or '0'} = {rhs}")
    return "\n".join(lines) + "\n"


def rref_rows_mod_p(rows: Sequence[Sequence[int]], p: int) -> tuple[list[list[int]], list[int]]:
    rows = [[v % p for v in r] for r in rows]
    if not rows:
        return [], []
    m, ncols = len(rows), len(rows[0])
    pivots = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, m) if rows[i][c]), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        inv = _mod_inverse(rows[r][c], p)
        rows[r] = [v * inv % p for v in rows[r]]
        for i in range(m):
            if i != r and rows[i][c]:
                f = rows[i][c]
                rows[i] = [(a - f * b) % p for a, b in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
        if r == m:
            break
    return rows, pivots


@dataclass
class ImplicitG1:
    """``x_i <- f_i`` for pivots and the domain polynomial for each free variable.

    ``f_i`` is a p-expression over free variables later than ``x_i``.
    """

    p: int
    n: int
    pivots: dict[int, PExpression]
    free: list[int]

    def explicit(self) -> list[Polynomial]:
        """Expanded lex basis (interpolates each f_i; small systems only)."""
        from .encode import domain_polynomial, interpolate_map

        gens = []
        pts = list(itertools.product(range(self.p), repeat=len(self.free)))
        for i, f in sorted(self.pivots.items()):
            vals = []
            for pt in pts:
                full = [0] * self.n
                for j, v in zip(self.free, pt):
                    full[j] = v
                vals.append(f.evaluate(full))
            interp = interpolate_map(pts, vals, self.p, self.free, self.n) if self.free else Polynomial.constant(vals[0], self.n)
            gens.append(Polynomial.variable(i, self.n) - interp)
        for j in self.free:
            gens.append(domain_polynomial(j, self.p, self.n))
        return gens

    def solution(self, free_values: Sequence[int]) -> tuple[int, ...]:
        full = [0] * self.n
        for j, v in zip(self.free, free_values):
            full[j] = v
        for i, f in self.pivots.items():
            full[i] = f.evaluate(full)
        return tuple(full)


def rref_mod_p(s: ModPSystem) -> ImplicitG1 | None:
    """Row reduce; None when the system is inconsistent."""
    p, n = s.p, s.n
    rows = [list(c) + [r] for c, r in s.equations]
    red, pivots = rref_rows_mod_p(rows, p)
    if n in pivots:
        return None
    free = [j for j in range(n) if j not in pivots]
    exprs = {}
    for row, c in zip(red, pivots):
        coeffs = [0] * n
        for j in free:
            if row[j]:
                coeffs[j] = -row[j]
        exprs[c] = PExpression(p, tuple(coeffs), row[n])
    return ImplicitG1(p, n, exprs, free)


def implicit_G1(rref: ImplicitG1) -> ImplicitG1:
    """The implicit lex basis is the rref data itself; kept for symmetry with the algorithm."""
    return rref


def reduce_monomial_G1(q: Sequence[int], g1: ImplicitG1) -> list[PExpression]:
    """Factors of ``q`` restricted to the solution set, one p-expression per degree unit."""
    factors = []
    for i, e in enumerate(q):
        if not e:
            continue
        if i in g1.pivots:
            factors.extend([g1.pivots[i]] * e)
        else:
            if e >= g1.p:
                raise ValueError("free-variable exponent must be below p; rewrite first")
            factors.extend([PExpression.variable(i, g1.n, g1.p)] * e)
    return factors


def rewrite_free_powers(f: Polynomial, g1: ImplicitG1) -> Polynomial:
    """Reduce free-variable exponents below p using their domain polynomials."""
    from .encode import domain_polynomial

    if all(e[j] < g1.p for e in f.terms for j in g1.free):
        return f
    doms = [domain_polynomial(j, g1.p, g1.n) for j in g1.free]
    return divide(f, doms, GRLEX)[1]


def polynomial_expansion(f: Polynomial, g1: ImplicitG1) -> BasisExpansion:
    """Expansion of ``f`` restricted to the solution set (a function of the free variables)."""
    f = rewrite_free_powers(f, g1)
    out = BasisExpansion(g1.p, g1.n)
    for exp, c in f.terms.items():
        out.add_expansion(monomial_expansion(exp, g1), c)
    return out


def monomial_expansion(q: Sequence[int], g1: ImplicitG1) -> BasisExpansion:
    q = tuple(q)
    if any(q[j] >= g1.p for j in g1.free):
        return polynomial_expansion(Polynomial.monomial(q), g1)
    return _monomial_expansion_cached(q, g1.p, g1.n, tuple(sorted(g1.pivots.items())))


@lru_cache(maxsize=4096)
def _monomial_expansion_cached(q, p, n, pivots_items) -> BasisExpansion:
    pivots = dict(pivots_items)
    factors = []
    for i, e in enumerate(q):
        if e:
            h = pivots[i] if i in pivots else PExpression.variable(i, n, p)
            factors.extend([h] * e)
    return pexp_product_to_basis(factors, n, p)


def monomials_up_to(n: int, d: int) -> list[tuple[int, ...]]:
    """All exponent vectors of total degree <= d in increasing grlex order."""
    out = []
    for exp in itertools.product(range(d + 1), repeat=n):
        if sum(exp) <= d:
            out.append(exp)
    out.sort(key=GRLEX.key)
    return out


@dataclass
class ConversionResult:
    basis: GroebnerBasis
    standard: list[tuple[int, ...]]
    g1: ImplicitG1


def convert_truncated_gb(g1: ImplicitG1, d: int) -> ConversionResult:
    """d-truncated grlex basis G2 and standard monomials B(G2) from the implicit G1.

    Monomials of degree <= d are visited in increasing grlex order; multiples
    of leading monomials already in G2 are skipped.  For the rest, the
    expansion of ``q`` on the solution set is tested against the span of the
    expansions of B(G2): a dependence ``q = sum k_j b_j`` yields the generator
    ``q - sum k_j b_j``, otherwise ``q`` joins B(G2).
    """
    if g1 is None:
        raise ValueError("the system is inconsistent; 1 is in the ideal")
    n = g1.n
    span = IncrementalSpan()
    standard: list[tuple[int, ...]] = []
    gens: list[Polynomial] = []
    lms: list[tuple[int, ...]] = []
    for q in monomials_up_to(n, d):
        if any(monomial_divides(lm, q) for lm in lms):
            continue
        vec = monomial_expansion(q, g1).terms
        combo = span.add(vec)
        if combo is None:
            standard.append(q)
            continue
        g = Polynomial.monomial(q)
        for j, k in combo.items():
            g = g - Polynomial.monomial(standard[j], k)
        gens.append(g)
        lms.append(q)
    return ConversionResult(GroebnerBasis(gens, GRLEX, d), standard, g1)


def decide_modp(f0: Polynomial, s: ModPSystem, d: int | None = None) -> bool:
    """Membership of ``f0`` in the ideal of the solution set of ``s``."""
    if d is None:
        d = max(f0.degree(), 0)
    if f0.degree() > d:
        raise DegreeBoundError(f0.degree(), d)
    g1 = rref_mod_p(s)
    if g1 is None:
        return True
    conv = convert_truncated_gb(g1, d)
    return normal_form(f0, conv.basis).is_zero()


def decide_modp_direct(f0: Polynomial, s: ModPSystem) -> bool:
    """Membership via the expansion of ``f0`` on the solution set being zero."""
    g1 = rref_mod_p(s)
    if g1 is None:
        return True
    return polynomial_expansion(f0, g1).is_zero()


# CSP languages with the affine polymorphism


def relation_equations(tuples: Iterable[Sequence[int]], arity: int, p: int) -> list[tuple[tuple[int, ...], int]] | None:
    """Equations whose solution set is the affine hull of ``tuples`` over Z_p.

    Returns None for an empty relation.  For relations closed under
    ``x - y + z`` the hull is the relation itself.
    """
    tuples = [tuple(t) for t in tuples]
    if not tuples:
        return None
    r0 = tuples[0]
    diffs = [[(a - b) % p for a, b in zip(t, r0)] for t in tuples[1:]]
    red, pivots = rref_rows_mod_p(diffs, p) if diffs else ([], [])
    free = [c for c in range(arity) if c not in pivots]
    eqs = []
    # annihilator of the row space: one vector per free column
    for f in free:
        a = [0] * arity
        a[f] = 1
        for row, c in zip(red, pivots):
            a[c] = (-row[f]) % p
        # a is orthogonal to every row: row[c] = 1 at its pivot, row[f] at f
        eqs.append((tuple(a), sum(x * y for x, y in zip(a, r0)) % p))
    return eqs


def instance_to_system(inst) -> ModPSystem:
    """Linear system with the same solutions as an instance whose relations are affine.

    Raises ``ValueError`` if a relation is not a coset (not closed under the
    affine operation).
    """
    p = inst.domain_size
    _check_prime(p)
    idx = inst.index()
    n = inst.n
    eqs = []
    for c in inst.constraints:
        r = inst.relations[c.relation]
        hull = relation_equations(r.tuples, r.arity, p)
        if hull is None:
            eqs.append(((0,) * n, 1))
            continue
        if _hull_size(hull, r.arity, p) != len(r.tuples):
            raise ValueError(f"relation {r.name} is not an affine subspace of Z_{p}^{r.arity}")
        for a, rhs in hull:
            coeffs = [0] * n
            for pos, v in zip(c.scope, a):
                coeffs[idx[pos]] = (coeffs[idx[pos]] + v) % p
            eqs.append((tuple(coeffs), rhs))
    for v, a in inst.pins:
        coeffs = [0] * n
        coeffs[idx[v]] = 1
        eqs.append((tuple(coeffs), a))
    return ModPSystem(p, list(inst.variables), eqs)


def _hull_size(eqs, arity, p) -> int:
    if not eqs:
        return p**arity
    _, pivots = rref_rows_mod_p([list(a) for a, _ in eqs], p)
    return p ** (arity - len(pivots))


def expansion_matches(expansion: BasisExpansion, fn) -> bool:
    """Pointwise check of an expansion against ``fn`` on all of Z_p^n."""
    p, n = expansion.p, expansion.n
    for pt in itertools.product(range(p), repeat=n):
        if expansion.evaluate(pt) != fn(pt):
            return False
    return True


def product_function(hs: Sequence[PExpression]):
    def fn(pt):
        out = 1
        for h in hs:
            out *= h.evaluate(pt)
        return out

    return fn


def expansion_support_ok(e: PExpression, expansion: BasisExpansion) -> bool:
    """Only basis elements over the variables of ``e`` may appear."""
    allowed = set(e.support())
    for k in expansion.terms:
        if k is None:
            continue
        if any(c and i not in allowed for i, c in enumerate(k[0])):
            return False
    return True
