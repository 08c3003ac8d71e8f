"""Independent reference computations used only by the tests."""

from __future__ import annotations

from itertools import permutations

import sympy

from gcdga.scalars import GaussianRational


def permutation_sign(seq) -> int:
    """Sign of the sorting permutation by explicit inversion count; 0 on repeats."""
    seq = list(seq)
    if len(set(seq)) != len(seq):
        return 0
    inv = sum(1 for i in range(len(seq)) for j in range(i + 1, len(seq)) if seq[i] > seq[j])
    return -1 if inv % 2 else 1


def to_sympy(x: GaussianRational):
    return sympy.Rational(x.re.numerator, x.re.denominator) + sympy.I * sympy.Rational(x.im.numerator, x.im.denominator)


def sympy_matrix(m):
    return sympy.Matrix([[to_sympy(x) for x in row] for row in m]) if m else sympy.zeros(0, 0)


def sympy_rank(m) -> int:
    if not m or not m[0]:
        return 0
    return sympy_matrix(m).rank(simplify=True)


def leibniz_det(m):
    """Determinant from the permutation expansion."""
    n = len(m)
    total = GaussianRational(0)
    for perm in permutations(range(n)):
        term = GaussianRational(permutation_sign(perm))
        for i, p in enumerate(perm):
            term = term * m[i][p]
        total = total + term
    return total


def form_on_basis(form, idx, n):
    """``form(b_{i1}, ..., b_{ik})`` through the determinant convention, from the term dict alone."""
    total = GaussianRational(0)
    for key, c in form.terms.items():
        if sorted(key) == sorted(idx):
            total = total + c * permutation_sign(list(idx))
    return total
