"""Exact linear algebra over Q: rank, solve, null space, incremental spans."""

from __future__ import annotations

from fractions import Fraction
from math import lcm
from typing import Hashable, Mapping, Sequence


def _integer_rows(matrix: Sequence[Sequence]) -> list[list[int]]:
    rows = []
    for row in matrix:
        row = [Fraction(v) for v in row]
        den = 1
        for v in row:
            den = lcm(den, v.denominator)
        rows.append([int(v * den) for v in row])
    return rows


def rank_bareiss(matrix: Sequence[Sequence]) -> int:
    """Rank over Q by fraction-free (Bareiss) elimination on integer rows.

    Rational entries are cleared row by row, which does not change the rank.
    """
    rows = _integer_rows(matrix)
    if not rows:
        return 0
    m, n = len(rows), len(rows[0])
    r = 0
    prev = 1
    for c in range(n):
        piv = next((i for i in range(r, m) if rows[i][c]), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        pr = rows[r]
        pv = pr[c]
        for i in range(r + 1, m):
            ri = rows[i]
            f = ri[c]
            if f == 0:
                # still scale to keep the Bareiss invariant exact
                rows[i] = [(pv * x) // prev for x in ri]
                continue
            rows[i] = [(pv * x - f * y) // prev for x, y in zip(ri, pr)]
        prev = pv
        r += 1
        if r == m:
            break
    return r


rank_exact = rank_bareiss


def rref(matrix: Sequence[Sequence]) -> tuple[list[list[Fraction]], list[int]]:
    """Reduced row echelon form over Q and the pivot columns."""
    rows = [[Fraction(v) for v in row] for row in matrix]
    if not rows:
        return [], []
    m, n = len(rows), len(rows[0])
    pivots = []
    r = 0
    for c in range(n):
        piv = next((i for i in range(r, m) if rows[i][c]), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        inv = 1 / rows[r][c]
        rows[r] = [v * inv for v in rows[r]]
        for i in range(m):
            if i != r and rows[i][c]:
                f = rows[i][c]
                rows[i] = [a - f * b for a, b in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
        if r == m:
            break
    return rows, pivots


def solve(a: Sequence[Sequence], b: Sequence) -> list[Fraction] | None:
    """One solution of ``a x = b`` (free variables set to 0), or None."""
    if not a:
        return []
    n = len(a[0])
    aug = [list(row) + [bv] for row, bv in zip(a, b)]
    red, pivots = rref(aug)
    if n in pivots:
        return None
    x = [Fraction(0)] * n
    for row, c in zip(red, pivots):
        x[c] = row[n]
    return x


def nullspace(a: Sequence[Sequence], ncols: int | None = None) -> list[list[Fraction]]:
    """Basis of ``{x : a x = 0}``."""
    if not a:
        return [[Fraction(int(i == j)) for j in range(ncols or 0)] for i in range(ncols or 0)]
    n = len(a[0])
    red, pivots = rref(a)
    free = [c for c in range(n) if c not in pivots]
    basis = []
    for f in free:
        x = [Fraction(0)] * n
        x[f] = Fraction(1)
        for row, c in zip(red, pivots):
            x[c] = -row[f]
        basis.append(x)
    return basis


class IncrementalSpan:
    """Span of sparse vectors over Q, grown one vector at a time.

    Vectors are mappings from hashable coordinate keys to rationals.  Each
    stored echelon row remembers how it combines the accepted originals, so a
    dependent vector can be expressed over the originals.
    """

    def __init__(self):
        self._rows: list[tuple[Hashable, dict, dict]] = []  # (pivot, row, combo over originals)
        self.size = 0

    def _reduce(self, vec: Mapping) -> tuple[dict, dict]:
        # rows never contain pivots of older rows, so one pass in row order suffices
        v = {k: Fraction(c) for k, c in vec.items() if c}
        combo: dict[int, Fraction] = {}
        for pivot, row, rcombo in self._rows:
            f = v.get(pivot)
            if not f:
                continue
            for kk, c in row.items():
                nv = v.get(kk, 0) - f * c
                if nv:
                    v[kk] = nv
                else:
                    v.pop(kk, None)
            for j, c in rcombo.items():
                nc = combo.get(j, 0) + f * c
                if nc:
                    combo[j] = nc
                else:
                    combo.pop(j, None)
        return v, combo

    def express(self, vec: Mapping) -> dict[int, Fraction] | None:
        """Coefficients over accepted originals reproducing ``vec``, or None."""
        v, combo = self._reduce(vec)
        return None if v else combo

    def add(self, vec: Mapping) -> dict[int, Fraction] | None:
        """Accept ``vec`` if independent (returns None) else return its expression."""
        v, combo = self._reduce(vec)
        if not v:
            return combo
        idx = self.size
        self.size += 1
        pivot = min(v, key=repr) if len(v) > 1 else next(iter(v))
        inv = 1 / v[pivot]
        row = {k: c * inv for k, c in v.items()}
        # row = (vec - sum combo_j orig_j) / v[pivot]
        rcombo = {j: -c * inv for j, c in combo.items()}
        rcombo[idx] = inv
        self._rows.append((pivot, row, rcombo))
        return None
