#!/usr/bin/env python3
"""Rank and eigenvalue tables for the p-expression basis and its companion matrices."""

import argparse

from combideal.spectra import (
    basis_value_matrix,
    build_C3,
    build_Nk,
    eigen_formula_check,
    expected_Nk_rank_from_eigenvalues,
    expected_Nk_rank_stated,
    f_prime_matrix,
    rank_exact,
)

PAIRS = [(2, 1), (2, 2), (3, 1), (3, 2), (5, 1)]


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--c3-max", type=int, default=3)
    args = ap.parse_args()

    print("basis of functions Z_p^(k+1) -> Q")
    for p, k in PAIRS:
        print(f"  p={p} k={k}: rank {rank_exact(basis_value_matrix(k, p))} of {p ** (k + 1)}")

    print("N_k rank: computed, (p-1)^k+1, (p-1)^(k+1)+1")
    for p, k in [(3, 1), (3, 2), (5, 1), (5, 2), (7, 1)]:
        r = rank_exact(build_Nk(k, p))
        print(f"  p={p} k={k}: {r:>4} {expected_Nk_rank_stated(k, p):>4} {expected_Nk_rank_from_eigenvalues(k, p):>4}")

    print("N_k eigenvalues on root-of-unity vectors: P(xi) prod Q(eta, 1/xi) vs P(xi) prod Q(eta, xi)")
    for p, k in [(3, 1), (3, 2), (5, 1)]:
        s = eigen_formula_check(k, p)
        print(
            f"  p={p} k={k}: {sum(x.formula_ok for x in s)}/{len(s)} vs {sum(x.literal_ok for x in s)}/{len(s)}"
        )

    print("F'_k rank")
    for p, k in [(2, 1), (3, 1), (3, 2), (5, 1)]:
        print(f"  p={p} k={k}: {rank_exact(f_prime_matrix(k, p))} of {(p - 1) ** (k + 1)}")

    print("C_n mod 3: rank, rank with +1 on every entry")
    for n in range(1, args.c3_max + 1):
        c = build_C3(n)
        print(f"  n={n}: {rank_exact(c)} {rank_exact(c.plus_constant(1))}  (3^n = {3**n})")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
