"""Structural identities shared by the property suites and the acceptance gate."""

from __future__ import annotations

import random
from itertools import combinations

from gcdga.exterior import Multivector
from gcdga.gerstenhaber import GCAContext, derivation_of_bracket_residual, identity21_residual
from gcdga.lie import jacobiator
from gcdga.scalars import GaussianRational

POOL = (-2, -1, 1, 2)


def random_scalar(rng: random.Random) -> GaussianRational:
    if rng.random() < 0.3:
        return GaussianRational(rng.choice(POOL), rng.choice(POOL))
    return GaussianRational(rng.choice(POOL))


def random_element(rng: random.Random, rank: int, degree: int, terms: int = 3) -> Multivector:
    if degree > rank:
        return Multivector.zero(rank)
    out = {}
    for _ in range(terms):
        key = tuple(sorted(rng.sample(range(rank), degree)))
        out[key] = random_scalar(rng)
    return Multivector(rank, out)


def sgn(k: int) -> int:
    return -1 if k % 2 else 1


def structural_failures(ctx: GCAContext, rng: random.Random, samples: int = 4) -> list[str]:
    """Every identity named in the invariant suite, on generators and random homogeneous elements."""
    bad: list[str] = []
    spec = ctx.spec
    n = spec.dim
    for i, j, k in combinations(range(n), 3):
        if any(not c.is_zero() for c in jacobiator(spec, i, j, k)):
            bad.append(f"jacobi {i}{j}{k}")
    if ctx.differential_square_residuals():
        bad.append("dbar^2")
    r = ctx.rank
    gens = [ctx.generator(a) for a in range(r)]
    for a in range(r):
        for b in range(a, r):
            if derivation_of_bracket_residual(ctx, gens[a], gens[b]):
                bad.append(f"bialgebroid {a},{b}")
    for _ in range(samples):
        p, q, s = (rng.randint(0, min(3, r)) for _ in range(3))
        A = random_element(rng, r, p)
        B = random_element(rng, r, q)
        C = random_element(rng, r, s)
        # graded antisymmetry and Jacobi for the degree -1 bracket
        if ctx.schouten(A, B) != ctx.schouten(B, A).scale(-sgn((p - 1) * (q - 1))):
            bad.append(f"antisymmetry {p},{q}")
        lhs = ctx.schouten(A, ctx.schouten(B, C))
        rhs = ctx.schouten(ctx.schouten(A, B), C) + ctx.schouten(B, ctx.schouten(A, C)).scale(sgn((p - 1) * (q - 1)))
        if lhs != rhs:
            bad.append(f"graded jacobi {p},{q},{s}")
        # Leibniz
        if ctx.schouten(A, B ^ C) != (ctx.schouten(A, B) ^ C) + (B ^ ctx.schouten(A, C)).scale(sgn((p - 1) * q)):
            bad.append(f"leibniz {p},{q},{s}")
        # dbar derivation of wedge and of the bracket
        if ctx.dbar(A ^ B) != (ctx.dbar(A) ^ B) + (A ^ ctx.dbar(B)).scale(sgn(p)):
            bad.append(f"dbar wedge {p},{q}")
        if p >= 1 and derivation_of_bracket_residual(ctx, A, B):
            bad.append(f"dbar bracket {p},{q}")
        # wedge graded-commutativity and associativity
        if (A ^ B) != (B ^ A).scale(sgn(p * q)):
            bad.append(f"wedge commutativity {p},{q}")
        if ((A ^ B) ^ C) != (A ^ (B ^ C)):
            bad.append("wedge associativity")
        # identity (21): bivector G, l in L, all generator pairs of Lbar
        if r >= 2:
            G = random_element(rng, r, 2)
            ell = random_element(rng, r, 1, terms=2)
            for a, b in combinations(range(r), 2):
                if not identity21_residual(ctx, G, ell, a, b).is_zero():
                    bad.append(f"identity21 {a},{b}")
                    break
    return bad
