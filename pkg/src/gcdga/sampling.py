"""Random generators for valid inputs, used by the property suites and scripts.

Everything is driven by an explicit ``random.Random`` so hypothesis can feed seeds.
"""

from __future__ import annotations

import random
from typing import Sequence

from . import linalg
from .constructions import SymplecticConnectionData
from .exterior import Multivector
from .gerstenhaber import GCAContext
from .lie import LieAlgebraSpec
from .scalars import I, ONE, ZERO, GaussianRational

Matrix = linalg.Matrix

SMALL = (-2, -1, 0, 0, 1, 2)


def _q(rng: random.Random, pool=SMALL, complex_ok: bool = False) -> GaussianRational:
    re = rng.choice(pool)
    if complex_ok and rng.random() < 0.5:
        return GaussianRational(re, rng.choice(pool))
    return GaussianRational(re)


def random_invertible(rng: random.Random, n: int, real: bool = True) -> Matrix:
    """Product of elementary shears and a permutation, so entries stay small."""
    P = linalg.identity(n)
    for _ in range(rng.randint(1, 2 * n)):
        i, j = rng.sample(range(n), 2) if n > 1 else (0, 0)
        if i == j:
            continue
        c = _q(rng, (-1, 1), complex_ok=not real)
        for r in range(n):
            P[r][j] = P[r][j] + c * P[r][i]
    perm = list(range(n))
    rng.shuffle(perm)
    return [P[p] for p in perm]


# complex structures -------------------------------------------------------------

def realify(k: int, brackets: dict[tuple[int, int], dict[int, GaussianRational]], names: Sequence[str] | None = None) -> LieAlgebraSpec:
    """Underlying real algebra of a complex one on ``f_1..f_k``, basis ``f_j, i f_j``, with ``J`` = multiplication by ``i``."""
    n = 2 * k
    br: dict[tuple[int, int], dict[int, GaussianRational]] = {}

    def add(a, b, k_, c):
        if not c.is_zero():
            row = br.setdefault((a, b), {})
            row[k_] = row.get(k_, ZERO) + c

    for (p, q), row in brackets.items():
        for t, c in row.items():
            c = GaussianRational.coerce(c)
            re, im = GaussianRational(c.re), GaussianRational(c.im)
            # [f_p, f_q] = c f_t, [f_p, i f_q] = [i f_p, f_q] = i c f_t, [i f_p, i f_q] = -c f_t
            for (a, b, fac) in ((p, q, ONE), (p, k + q, I), (k + p, q, I), (k + p, k + q, -ONE)):
                val = c * fac
                add(a, b, t, GaussianRational(val.re))
                add(a, b, k + t, GaussianRational(val.im))
    J = linalg.zeros(n, n)
    for j in range(k):
        J[k + j][j] = ONE
        J[j][k + j] = -ONE
    names = names or tuple(f"f{j + 1}" for j in range(k)) + tuple(f"g{j + 1}" for j in range(k))
    return LieAlgebraSpec(n, tuple(names), br, J)


def random_almost_abelian_complex(rng: random.Random, k: int) -> dict:
    """``[f_1, f_j] = sum_i A_ij f_i`` on ``f_2..f_k``; always Jacobi."""
    br = {}
    for j in range(1, k):
        row = {i: _q(rng, complex_ok=True) for i in range(1, k)}
        row = {i: c for i, c in row.items() if not c.is_zero()}
        if row:
            br[(0, j)] = row
    return br


def heisenberg_complex() -> dict:
    return {(0, 1): {2: ONE}}


def random_abelian_complex(rng: random.Random, n: int) -> LieAlgebraSpec:
    """Abelian ``R^n`` with a conjugated standard ``J``."""
    k = n // 2
    J0 = linalg.zeros(n, n)
    for j in range(k):
        J0[k + j][j] = ONE
        J0[j][k + j] = -ONE
    P = random_invertible(rng, n)
    J = linalg.matmul(linalg.matmul(linalg.inverse(P), J0), P)
    return LieAlgebraSpec(n, tuple(f"b{i + 1}" for i in range(n)), {}, J)


def random_valid_spec(rng: random.Random, max_dim: int = 6) -> LieAlgebraSpec:
    """A Jacobi-valid algebra with integrable ``J`` in even dimension ``<= max_dim``."""
    kind = rng.choice(["almost-abelian", "almost-abelian", "heisenberg", "semidirect", "abelian"])
    kmax = max(1, max_dim // 2)
    if kind == "abelian" or kmax == 1:
        spec = random_abelian_complex(rng, 2 * rng.randint(1, kmax))
    elif kind == "heisenberg" and kmax >= 3:
        spec = realify(3, heisenberg_complex())
    elif kind == "semidirect" and max_dim >= 4:
        from .constructions import semidirect_spec

        spec = semidirect_spec(random_connection(rng, 2))
    else:
        k = rng.randint(2, kmax)
        spec = realify(k, random_almost_abelian_complex(rng, k))
    if rng.random() < 0.7:
        spec = spec.change_basis(random_invertible(rng, spec.dim))
    return spec


# connections --------------------------------------------------------------------

def _conn(g: LieAlgebraSpec, gamma: dict, omega: Matrix | None = None, metric: Matrix | None = None) -> SymplecticConnectionData:
    m = g.dim
    G = [[[ZERO] * m for _ in range(m)] for _ in range(m)]
    for (i, c, r), v in gamma.items():
        G[i][r][c] = GaussianRational.coerce(v)
    if omega is None:
        omega = [[ZERO, ONE], [-ONE, ZERO]]
    om = Multivector(m, {(k, l): omega[k][l] for k in range(m) for l in range(k + 1, m) if not omega[k][l].is_zero()})
    if metric is None:
        metric = [[ZERO, ONE], [ONE, ZERO]]
    return SymplecticConnectionData(g, om, G, metric)


def kodaira_connection(a=1) -> SymplecticConnectionData:
    g = LieAlgebraSpec(2, ("e1", "e2"), {})
    return _conn(g, {(0, 0, 1): a})


def solvable_connection(s) -> SymplecticConnectionData:
    """``[e_1, e_2] = e_2`` with ``gamma(e_1) = diag(-s, s)`` and ``gamma(e_2) e_1 = (s - 1) e_2``; flat iff ``s in {1/2, 1}``."""
    s = GaussianRational.coerce(s)
    g = LieAlgebraSpec(2, ("e1", "e2"), {(0, 1): {1: ONE}})
    return _conn(g, {(0, 0, 0): -s, (0, 1, 1): s, (1, 0, 1): s - ONE})


def transform_connection(data: SymplecticConnectionData, P: Matrix) -> SymplecticConnectionData:
    """Same connection in the basis ``e'_j = sum_i P[i][j] e_i``."""
    m = data.m
    P = linalg.coerce_matrix(P)
    Pinv = linalg.inverse(P)
    g2 = data.g_spec.change_basis(P)
    cols = [[P[i][j] for i in range(m)] for j in range(m)]
    gamma = []
    for a in range(m):
        ga = data.gamma_matrix(cols[a])
        gamma.append(linalg.matmul(linalg.matmul(Pinv, ga), P))
    W = [[data.omega_value(cols[k], cols[l]) for l in range(m)] for k in range(m)]
    om = Multivector(m, {(k, l): W[k][l] for k in range(m) for l in range(k + 1, m) if not W[k][l].is_zero()})
    metric = None
    if data.metric is not None:
        metric = [[data.metric_value(cols[k], cols[l]) for l in range(m)] for k in range(m)]
    return SymplecticConnectionData(g2, om, gamma, metric)


def direct_sum(a: SymplecticConnectionData, b: SymplecticConnectionData) -> SymplecticConnectionData:
    ma, mb = a.m, b.m
    m = ma + mb
    br = dict(a.g_spec.brackets)
    for (i, j), row in b.g_spec.brackets.items():
        br[(ma + i, ma + j)] = {ma + k: c for k, c in row.items()}
    g = LieAlgebraSpec(m, tuple(f"e{i + 1}" for i in range(m)), br)
    gamma = [[[ZERO] * m for _ in range(m)] for _ in range(m)]
    for src, off, mm in ((a, 0, ma), (b, ma, mb)):
        for i in range(mm):
            for r in range(mm):
                for c in range(mm):
                    gamma[off + i][off + r][off + c] = src.gamma[i][r][c]
    terms = dict(a.omega.terms)
    terms.update({tuple(ma + k for k in key): c for key, c in b.omega.terms.items()})
    metric = linalg.zeros(m, m)
    for src, off, mm in ((a, 0, ma), (b, ma, mb)):
        for k in range(mm):
            for l in range(mm):
                metric[off + k][off + l] = src.metric[k][l]
    return SymplecticConnectionData(g, Multivector(m, terms), gamma, metric)


def random_base_connection(rng: random.Random) -> SymplecticConnectionData:
    kind = rng.randrange(4)
    if kind == 0:
        data = kodaira_connection(rng.choice([1, 2, -1, GaussianRational(1) / 2]))
    elif kind == 1:
        data = solvable_connection(1)
    elif kind == 2:
        data = solvable_connection(GaussianRational(1) / 2)
    else:
        g = LieAlgebraSpec(2, ("e1", "e2"), {})
        data = _conn(g, {})
    scale = rng.choice([1, 2, -1, GaussianRational(1, 0) / 3])
    return SymplecticConnectionData(data.g_spec, data.omega.scale(scale), data.gamma, data.metric)


def random_connection(rng: random.Random, m: int = 2) -> SymplecticConnectionData:
    """A flat torsion-free symplectic connection on an ``m``-dimensional algebra, ``m in {2, 4}``."""
    if m == 2:
        data = random_base_connection(rng)
    elif m == 4:
        data = direct_sum(random_base_connection(rng), random_base_connection(rng))
    else:
        raise ValueError("only dimensions 2 and 4 are generated")
    if rng.random() < 0.7:
        data = transform_connection(data, random_invertible(rng, m))
    if rng.random() < 0.5:
        data = SymplecticConnectionData(data.g_spec, data.omega, data.gamma, random_metric(rng, m))
    return data


def random_metric(rng: random.Random, m: int) -> Matrix:
    """Nondegenerate symmetric ``m x m`` matrix with small rational entries."""
    while True:
        P = random_invertible(rng, m)
        D = [[GaussianRational(rng.choice([1, -1, 2])) if r == c else ZERO for c in range(m)] for r in range(m)]
        G = linalg.matmul(linalg.matmul(linalg.transpose(P), D), P)
        if not linalg.determinant(G).is_zero():
            return G


# closed bivectors ---------------------------------------------------------------

def closed_bivector_space(ctx: GCAContext) -> list[Multivector]:
    from .cohomology import build_complex

    cx = build_complex(ctx)
    if len(cx.matrices) <= 2:
        rows = linalg.identity(len(cx.bases[2]))
    else:
        rows = linalg.kernel(cx.matrices[2], len(cx.bases[2]))
    return [cx.from_coords(v, 2) for v in rows]


def central_bivector_space(ctx: GCAContext, within: Sequence[Multivector]) -> list[Multivector]:
    """Elements of ``span(within)`` commuting with every generator."""
    if not within:
        return []
    eqs = []
    for a in range(ctx.rank):
        gen = ctx.generator(a)
        imgs = [ctx.schouten(x, gen) for x in within]
        keys = sorted({k for im in imgs for k in im.terms})
        for key in keys:
            eqs.append([im.coefficient(key) for im in imgs])
    if not eqs:
        return list(within)
    out = []
    for c in linalg.kernel(eqs, len(within)):
        x = Multivector.zero(ctx.rank)
        for ci, w in zip(c, within):
            x = x + w.scale(ci)
        out.append(x)
    return out


def random_closed_bivector(rng: random.Random, ctx: GCAContext, central_bias: float = 0.5) -> Multivector:
    closed = closed_bivector_space(ctx)
    pool = closed
    if rng.random() < central_bias:
        central = central_bivector_space(ctx, closed)
        if central:
            pool = central
    x = Multivector.zero(ctx.rank)
    for b in pool:
        x = x + b.scale(_q(rng, complex_ok=True))
    return x
