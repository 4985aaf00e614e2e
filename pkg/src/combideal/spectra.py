"""Matrix facts behind the p-expression basis: ranks, Kronecker sums, eigenvalues.

Ranks are exact (fraction-free elimination over the integers).  Eigenvalue
checks use complex doubles since roots of unity are irrational; they are
spot checks, not load-bearing.
"""

from __future__ import annotations

import cmath
import itertools
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .affine_modp import canonical_basis, key_value
from .errors import CapExceeded
from .linalg import rank_bareiss

DEFAULT_CAP = 5000


@dataclass
class ExactMatrix:
    rows: list[list]

    @property
    def shape(self) -> tuple[int, int]:
        return len(self.rows), (len(self.rows[0]) if self.rows else 0)

    def rank(self) -> int:
        return rank_exact(self)

    def plus_constant(self, c) -> "ExactMatrix":
        return ExactMatrix([[v + c for v in row] for row in self.rows])

    def mod(self, p: int) -> "ExactMatrix":
        return ExactMatrix([[v % p for v in row] for row in self.rows])

    def to_numpy(self) -> np.ndarray:
        return np.array([[complex(v) for v in row] for row in self.rows])

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]

    def __eq__(self, other):
        return isinstance(other, ExactMatrix) and self.rows == other.rows


def rank_exact(m: ExactMatrix | Sequence[Sequence]) -> int:
    rows = m.rows if isinstance(m, ExactMatrix) else m
    return rank_bareiss(rows)


def _cap(size: int, cap: int | None):
    if cap is not None and size > cap:
        raise CapExceeded(size, cap)


def basis_value_matrix(k: int, p: int, cap: int | None = DEFAULT_CAP) -> ExactMatrix:
    """Values of the basis of functions on Z_p^{k+1}: rows are points, columns basis elements."""
    size = p ** (k + 1)
    _cap(size, cap)
    keys = canonical_basis(k + 1, p)
    points = list(itertools.product(range(p), repeat=k + 1))
    return ExactMatrix([[key_value(key, pt, p) for key in keys] for pt in points])


def kronecker_sum(a: ExactMatrix, b: ExactMatrix, p: int) -> ExactMatrix:
    """Entry at row ``i*s + i'`` and column ``j*t + j'`` is ``A(i,j) + B(i',j') mod p``."""
    q, r = a.shape
    s, t = b.shape
    rows = [[0] * (r * t) for _ in range(q * s)]
    for i in range(q):
        for j in range(r):
            aij = a.rows[i][j]
            for i2 in range(s):
                row = rows[i * s + i2]
                brow = b.rows[i2]
                for j2 in range(t):
                    row[j * t + j2] = (aij + brow[j2]) % p
    return ExactMatrix(rows)


def primitive_root(p: int) -> int:
    """Smallest generator of the multiplicative group mod p."""
    if p == 2:
        return 1
    for a in range(2, p):
        if len({pow(a, i, p) for i in range(p - 1)}) == p - 1:
            return a
    raise ValueError(f"no primitive root mod {p}")


def build_Bp(p: int) -> ExactMatrix:
    """Circulant with first row ``1, a, a^2, ..., a^{p-2}`` (powers mod p)."""
    a = primitive_root(p)
    return ExactMatrix([[pow(a, (j - i) % (p - 1), p) for j in range(p - 1)] for i in range(p - 1)])


def build_Cp(p: int) -> ExactMatrix:
    """Circulant addition table: entry ``(j - i) mod p``."""
    return ExactMatrix([[(j - i) % p for j in range(p)] for i in range(p)])


def build_Nk(k: int, p: int, cap: int | None = DEFAULT_CAP) -> ExactMatrix:
    """``C_p (+) B_p (+) ... (+) B_p`` with k copies of ``B_p``, associated to the left."""
    _cap(p * (p - 1) ** k, cap)
    m = build_Cp(p)
    b = build_Bp(p)
    for _ in range(k):
        m = kronecker_sum(m, b, p)
    return m


def expected_Nk_rank_stated(k: int, p: int) -> int:
    return (p - 1) ** k + 1


def expected_Nk_rank_from_eigenvalues(k: int, p: int) -> int:
    """Nonzero eigenvalue count: xi = 1 with all eta = 1, plus every tuple with xi != 1."""
    return (p - 1) ** (k + 1) + 1


def P_value(xi: complex, p: int) -> complex:
    if abs(xi - 1) < 1e-12:
        return p * (p - 1) / 2
    return p / (xi - 1)


def Q_value(eta: complex, xi: complex, p: int) -> complex:
    a = primitive_root(p)
    return sum(eta**i * xi ** pow(a, i, p) for i in range(p - 1))


def eigenvector(etas: Sequence[complex], xi: complex, p: int) -> np.ndarray:
    v = np.array([xi**j for j in range(p)], dtype=complex)
    for eta in etas:
        v = np.kron(v, np.array([eta**i for i in range(p - 1)], dtype=complex))
    return v


@dataclass
class EigenSample:
    xi_index: int
    eta_indices: tuple[int, ...]
    observed: complex
    formula: complex
    literal: complex
    is_eigenvector: bool

    @property
    def formula_ok(self) -> bool:
        return self.is_eigenvector and abs(self.observed - self.formula) < 1e-9

    @property
    def literal_ok(self) -> bool:
        return self.is_eigenvector and abs(self.observed - self.literal) < 1e-9


def eigen_formula_check(k: int, p: int, samples: int | None = None, seed: int = 0) -> list[EigenSample]:
    """Compare ``N_k v = mu v`` against the closed form for root-of-unity tuples.

    ``formula`` is ``P(xi) * prod Q(eta_i, 1/xi)``, the value that matches
    the row and column layout of ``N_k``.  ``literal`` is
    ``P(xi) * prod Q(eta_i, xi)``; the two agree whenever every ``eta_i = 1``
    or ``xi = 1``.  With ``samples=None`` every tuple is checked.
    """
    import random

    n_mat = build_Nk(k, p).to_numpy().real
    xis = [cmath.exp(2j * cmath.pi * s / p) for s in range(p)]
    etas = [cmath.exp(2j * cmath.pi * s / (p - 1)) for s in range(p - 1)]
    combos = [(x, e) for x in range(p) for e in itertools.product(range(p - 1), repeat=k)]
    if samples is not None and samples < len(combos):
        rng = random.Random(seed)
        keep = {(0, (0,) * k)}
        keep.update(rng.sample(combos, samples))
        combos = [c for c in combos if c in keep]
    out = []
    for xi_i, eta_is in combos:
        xi = xis[xi_i]
        es = [etas[e] for e in eta_is]
        v = eigenvector(es, xi, p)
        w = n_mat @ v
        # v[0] = 1, so the eigenvalue candidate is w[0]
        mu = w[0] / v[0]
        is_eig = bool(np.allclose(w, mu * v, atol=1e-9))
        formula = P_value(xi, p)
        literal = P_value(xi, p)
        for e in es:
            formula *= Q_value(e, 1 / xi, p)
            literal *= Q_value(e, xi, p)
        out.append(EigenSample(xi_i, tuple(eta_is), complex(mu), complex(formula), complex(literal), is_eig))
    return out


def f_prime_matrix(k: int, p: int) -> ExactMatrix:
    """Values of ``f'`` for ``f`` in F_k with all ``a_i != 0``, on rows in (Z_p^*)^{k+1}.

    ``f'`` keeps the monomials of ``f`` that contain every variable; as a
    function it is the inclusion-exclusion sum over the coordinates left
    unchanged, ``f'(x) = sum_S (-1)^{k+1-|S|} f(x with coordinates outside S set to 0)``.
    """
    rows_pts = list(itertools.product(range(1, p), repeat=k + 1))
    funcs = [
        (alpha + (1,), b) for alpha in itertools.product(range(1, p), repeat=k) for b in range(p - 1)
    ]
    subsets = [s for r in range(k + 2) for s in itertools.combinations(range(k + 1), r)]

    def fprime(key, x):
        total = 0
        for s in subsets:
            y = [x[i] if i in s else 0 for i in range(k + 1)]
            total += (-1) ** (k + 1 - len(s)) * key_value(key, y, p)
        return total

    return ExactMatrix([[fprime(f, x) for f in funcs] for x in rows_pts])


def build_C3(n: int, cap: int | None = DEFAULT_CAP) -> ExactMatrix:
    """Recursive mod-3 matrix: blocks ``[[C, C, C], [C, C+1, C+2], [C, C+2, C+1]]``."""
    if n < 1:
        raise ValueError("n must be at least 1")
    _cap(3**n, cap)
    c = [[0, 0, 0], [0, 1, 2], [0, 2, 1]]
    for _ in range(n - 1):
        m = len(c)
        pattern = [[0, 0, 0], [0, 1, 2], [0, 2, 1]]
        big = [[0] * (3 * m) for _ in range(3 * m)]
        for bi in range(3):
            for bj in range(3):
                shift = pattern[bi][bj]
                for i in range(m):
                    for j in range(m):
                        big[bi * m + i][bj * m + j] = (c[i][j] + shift) % 3
        c = big
    return ExactMatrix(c)


@dataclass
class RankCheck:
    name: str
    computed: int
    expected: int

    @property
    def ok(self) -> bool:
        return self.computed == self.expected


def verify_basis(p: int, k: int) -> list[RankCheck]:
    """Rank checks for the pair (p, k) used by the CLI ``verify-basis`` command."""
    checks = [
        RankCheck(f"basis_value_matrix(k={k}, p={p})", rank_exact(basis_value_matrix(k, p)), p ** (k + 1)),
        RankCheck(f"N_k rank, stated (k={k}, p={p})", rank_exact(build_Nk(k, p)), expected_Nk_rank_stated(k, p)),
        RankCheck(
            f"N_k rank, eigenvalue count (k={k}, p={p})",
            rank_exact(build_Nk(k, p)),
            expected_Nk_rank_from_eigenvalues(k, p),
        ),
        RankCheck(f"F'_k rank (k={k}, p={p})", rank_exact(f_prime_matrix(k, p)), (p - 1) ** (k + 1)),
    ]
    return checks
