"""The differential Gerstenhaber algebra of an invariant complex structure.

``L = h^{1,0} + h^{*(0,1)}`` is spanned by ``z_1..z_n, zbar^1..zbar^n`` (in
that order); ``Lbar`` by the conjugates ``z^1..z^n, zbar_1..zbar_n``, so that
the pairing ``sigma(X + a)(Y + b) = a(Y) + b(X)`` makes generator ``k`` of
``L`` dual to generator ``k`` of ``Lbar``. Sections of the doubled space are
pairs ``(X, alpha)`` of coefficient lists on the real basis and its dual.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from functools import cached_property
from itertools import combinations
from typing import Callable, Iterable, Sequence

from . import linalg
from .exterior import (
    Index,
    Multivector,
    contract,
    extend_derivation,
    extend_homomorphism,
    parse_monomial,
    sort_with_sign,
)
from .lie import (
    ComplexSplitting,
    LieAlgebraSpec,
    StructureError,
    Vector,
    ce_differential,
    require_valid,
    split,
)
from .scalars import ONE, ZERO, GaussianRational

Section = tuple[list[GaussianRational], list[GaussianRational]]


class ConsistencyError(RuntimeError):
    """An identity that must hold for valid input failed: a bug trap."""


# the doubled space --------------------------------------------------------------

def courant(spec: LieAlgebraSpec, u: Section, v: Section) -> Section:
    """Invariant Courant bracket ``[X, Y] + i_X d(beta) - i_Y d(alpha)``."""
    (X, a), (Y, b) = u, v
    d = spec.dim
    vec = spec.bracket(X, Y)
    form = [ZERO] * d
    for Z, theta, sign in ((X, b, ONE), (Y, a, -ONE)):
        if all(c.is_zero() for c in Z) or all(c.is_zero() for c in theta):
            continue
        dtheta = ce_differential(spec, Multivector.from_vector(theta))
        piece = contract(Multivector.from_vector(Z), dtheta)
        for k, c in piece.terms.items():
            form[k[0]] = form[k[0]] + sign * c
    return vec, form


def pairing(u: Section, v: Section) -> GaussianRational:
    """``sigma(u)(v) = alpha(Y) + beta(X)``."""
    (X, a), (Y, b) = u, v
    return _dot(a, Y) + _dot(b, X)


def _dot(a, b) -> GaussianRational:
    s = ZERO
    for x, y in zip(a, b):
        if not x.is_zero() and not y.is_zero():
            s = s + x * y
    return s


def section_add(u: Section, v: Section, c: GaussianRational = ONE) -> Section:
    return [x + c * y for x, y in zip(u[0], v[0])], [x + c * y for x, y in zip(u[1], v[1])]


def section_scale(u: Section, c: GaussianRational) -> Section:
    return [c * x for x in u[0]], [c * x for x in u[1]]


def section_conjugate(u: Section) -> Section:
    return [x.conjugate() for x in u[0]], [x.conjugate() for x in u[1]]


def zero_section(d: int) -> Section:
    return [ZERO] * d, [ZERO] * d


# generic DGA on a free exterior algebra -----------------------------------------

class GradedBracketAlgebra:
    """Exterior algebra on ``rank`` generators with a degree -1 bracket and a
    degree +1 differential, both fixed by their values on generators.

    The bracket extends to the Schouten bracket
    ``[x1..xp, y1..yq] = sum (-1)^(i+j) [xi, yj] ^ X_i ^ Y_j`` (hats omitted),
    and the differential to an odd derivation of the wedge product.
    Brackets with scalars vanish: every section here is invariant.
    """

    rank: int
    names: tuple[str, ...]
    bracket_table: tuple[tuple[Multivector, ...], ...]
    differential_table: tuple[Multivector, ...]

    def generator(self, a: int, c=1) -> Multivector:
        return Multivector.generator(self.rank, a, c)

    def element(self, terms: dict) -> Multivector:
        """Build from ``{("z_1", "z_2"): "i"}`` or ``{"z_1^z_2": "i"}``."""
        out = {}
        for key, c in terms.items():
            if isinstance(key, str):
                idx = parse_monomial(key, self.names)
            else:
                idx = tuple(self.names.index(k) if isinstance(k, str) else int(k) for k in key)
            mv = Multivector(self.rank, {idx: c})
            for k, v in mv.terms.items():
                out[k] = out.get(k, ZERO) + v
        return Multivector(self.rank, out)

    def format(self, mv: Multivector) -> str:
        return mv.format(self.names)

    @cached_property
    def _sparse_bracket(self):
        return [[list(self.bracket_table[a][b].terms.items()) for b in range(self.rank)] for a in range(self.rank)]

    def schouten(self, a: Multivector, b: Multivector) -> Multivector:
        self._check(a)
        self._check(b)
        table = self._sparse_bracket
        out: dict[Index, GaussianRational] = {}
        for ka, ca in a.terms.items():
            for kb, cb in b.terms.items():
                if not ka or not kb:
                    continue
                c0 = ca * cb
                for i, x in enumerate(ka):
                    rest_a = ka[:i] + ka[i + 1:]
                    for j, y in enumerate(kb):
                        br = table[x][y]
                        if not br:
                            continue
                        rest = rest_a + kb[:j] + kb[j + 1:]
                        c1 = -c0 if (i + j) % 2 else c0
                        for kc, cc in br:
                            sign, idx = sort_with_sign(kc + rest)
                            if sign == 0:
                                continue
                            v = c1 * cc if sign > 0 else -(c1 * cc)
                            new = out.get(idx, ZERO) + v
                            if new.is_zero():
                                out.pop(idx, None)
                            else:
                                out[idx] = new
        return Multivector._raw(self.rank, out)

    def differential(self, a: Multivector) -> Multivector:
        self._check(a)
        return extend_derivation(a, self.differential_table, odd=True)

    def _check(self, a: Multivector) -> None:
        if not isinstance(a, Multivector):
            raise TypeError(f"expected Multivector, got {type(a).__name__}")
        if a.ambient_dim != self.rank:
            raise ValueError(f"element lives on {a.ambient_dim} generators, algebra has {self.rank}")

    def adjoint_matrix(self, x: Multivector) -> linalg.Matrix:
        """Matrix of ``y -> [x, y]`` on generators (``x`` of degree 1)."""
        cols = [self.schouten(x, self.generator(b)).vector() for b in range(self.rank)]
        return linalg.transpose(cols)

    def differential_square_residuals(self) -> dict[int, Multivector]:
        out = {}
        for a in range(self.rank):
            r = self.differential(self.differential_table[a])
            if r:
                out[a] = r
        return out

    def dump(self) -> dict:
        names = self.names
        return {
            "generators": list(names),
            "bracket": {
                f"{names[a]},{names[b]}": self.bracket_table[a][b].to_json()
                for a, b in combinations(range(self.rank), 2)
                if self.bracket_table[a][b]
            },
            "differential": {
                names[a]: self.differential_table[a].to_json()
                for a in range(self.rank)
                if self.differential_table[a]
            },
        }


# the compiled complex-structure algebra -----------------------------------------

@dataclass(frozen=True, eq=False)
class GCAContext(GradedBracketAlgebra):
    spec: LieAlgebraSpec
    splitting: ComplexSplitting
    names: tuple[str, ...]
    dual_names: tuple[str, ...]
    L_sections: tuple[Section, ...]
    Lbar_sections: tuple[Section, ...]
    bracket_table: tuple[tuple[Multivector, ...], ...]
    dual_bracket_table: tuple[tuple[Multivector, ...], ...]
    dbar_table: tuple[Multivector, ...]
    sigma_table: tuple[tuple[GaussianRational, ...], ...] = field(repr=False)

    @property
    def n(self) -> int:
        return self.splitting.n

    @property
    def rank(self) -> int:
        return 2 * self.splitting.n

    @property
    def differential_table(self) -> tuple[Multivector, ...]:
        return self.dbar_table

    # coordinates ------------------------------------------------------------
    def L_coords(self, u: Section) -> list[GaussianRational]:
        """Coordinates of a section of ``L``; raises if ``u`` is not in ``L``."""
        X, a = u
        sp = self.splitting
        coords = [_dot(z, X) for z in sp.holo_dual] + [_dot(a, zb) for zb in sp.antiholo]
        if self.L_section(coords) != (list(X), list(a)):
            raise StructureError("section does not lie in L")
        return coords

    def Lbar_coords(self, u: Section) -> list[GaussianRational]:
        X, a = u
        sp = self.splitting
        coords = [_dot(a, z) for z in sp.holo] + [_dot(zb, X) for zb in sp.antiholo_dual]
        if self.Lbar_section(coords) != (list(X), list(a)):
            raise StructureError("section does not lie in Lbar")
        return coords

    def L_section(self, coords: Sequence[GaussianRational]) -> Section:
        return _combine(self.L_sections, coords, self.spec.dim)

    def Lbar_section(self, coords: Sequence[GaussianRational]) -> Section:
        return _combine(self.Lbar_sections, coords, self.spec.dim)

    def section_of(self, x: Multivector) -> Section:
        """Degree-one element of ``L`` as a section of the doubled space."""
        return self.L_section(x.vector())

    def conjugate(self, x: Multivector) -> Multivector:
        """Complex conjugation ``wedge L -> wedge Lbar`` in the dual generator indexing."""
        n = self.n
        perm = [(a + n) % (2 * n) for a in range(2 * n)]
        return x.conjugate().reindex(perm)

    def contract_dual(self, lbar: Multivector, x: Multivector) -> Multivector:
        """Interior product of ``lbar`` in ``wedge Lbar`` into ``x`` in ``wedge L`` via sigma."""
        return contract(lbar, x, [list(r) for r in self.sigma_table])

    def evaluate(self, x: Multivector, args: Sequence[int]) -> GaussianRational:
        """Value of ``x`` on the dual generators ``args`` (determinant convention)."""
        probe = Multivector.monomial(self.rank, args)
        return self.contract_dual(probe, x).terms.get((), ZERO)

    # types ------------------------------------------------------------------
    def type_of(self, idx: Index) -> tuple[int, int]:
        """``(p, q)``: number of vector and of form factors in a monomial."""
        p = sum(1 for a in idx if a < self.n)
        return p, len(idx) - p

    def type_part(self, x: Multivector, p: int, q: int) -> Multivector:
        return x.filter(lambda k: self.type_of(k) == (p, q))

    def dbar(self, a: Multivector) -> Multivector:
        return self.differential(a)


def _combine(basis: Sequence[Section], coords: Sequence[GaussianRational], d: int) -> Section:
    X = [ZERO] * d
    a = [ZERO] * d
    for c, (Y, b) in zip(coords, basis):
        if c.is_zero():
            continue
        for k in range(d):
            if not Y[k].is_zero():
                X[k] = X[k] + c * Y[k]
            if not b[k].is_zero():
                a[k] = a[k] + c * b[k]
    return X, a


def compile(spec: LieAlgebraSpec) -> GCAContext:
    """Assemble the tables of ``DGA(J)`` for an integrable invariant ``J``."""
    require_valid(spec)
    sp = split(spec)
    n, d = sp.n, spec.dim
    zero = [ZERO] * d
    L_secs = tuple([(list(z), list(zero)) for z in sp.holo] + [(list(zero), list(w)) for w in sp.antiholo_dual])
    Lbar_secs = tuple([(list(zero), list(w)) for w in sp.holo_dual] + [(list(z), list(zero)) for z in sp.antiholo])
    names = tuple([f"z_{j + 1}" for j in range(n)] + [f"zbar^{j + 1}" for j in range(n)])
    dual_names = tuple([f"z^{j + 1}" for j in range(n)] + [f"zbar_{j + 1}" for j in range(n)])
    r = 2 * n
    sigma = tuple(tuple(pairing(u, v) for v in L_secs) for u in Lbar_secs)
    if [list(row) for row in sigma] != linalg.identity(r):
        raise ConsistencyError("L and Lbar frames are not dual under sigma")
    ctx_partial = _Coords(sp, L_secs, Lbar_secs, d)
    table = []
    for a in range(r):
        row = []
        for b in range(r):
            w = courant(spec, L_secs[a], L_secs[b])
            row.append(Multivector(r, {(k,): c for k, c in enumerate(ctx_partial.L(w))}))
        table.append(tuple(row))
    dual_table = []
    for a in range(r):
        row = []
        for b in range(r):
            w = courant(spec, Lbar_secs[a], Lbar_secs[b])
            row.append(Multivector(r, {(k,): c for k, c in enumerate(ctx_partial.Lbar(w))}))
        dual_table.append(tuple(row))
    # (dbar l)(lbar_a, lbar_b) = -sigma(l)([lbar_a, lbar_b]); generator c is dual to generator c
    dbar = []
    for c in range(r):
        terms = {}
        for a, b in combinations(range(r), 2):
            val = dual_table[a][b].terms.get((c,), ZERO)
            if not val.is_zero():
                terms[(a, b)] = -val
        dbar.append(Multivector(r, terms))
    ctx = GCAContext(
        spec=spec,
        splitting=sp,
        names=names,
        dual_names=dual_names,
        L_sections=L_secs,
        Lbar_sections=Lbar_secs,
        bracket_table=tuple(table),
        dual_bracket_table=tuple(dual_table),
        dbar_table=tuple(dbar),
        sigma_table=sigma,
    )
    for a in range(r):
        for b in range(r):
            if table[a][b] != -table[b][a]:
                raise ConsistencyError(f"bracket table not antisymmetric at ({names[a]}, {names[b]})")
    bad = ctx.differential_square_residuals()
    if bad:
        raise ConsistencyError("dbar does not square to zero on " + ", ".join(names[a] for a in bad))
    return ctx


class _Coords:
    # coordinate extraction before the context exists
    def __init__(self, sp, L_secs, Lbar_secs, d):
        self.sp, self.L_secs, self.Lbar_secs, self.d = sp, L_secs, Lbar_secs, d

    def L(self, u: Section) -> list[GaussianRational]:
        X, a = u
        coords = [_dot(z, X) for z in self.sp.holo_dual] + [_dot(a, zb) for zb in self.sp.antiholo]
        if _combine(self.L_secs, coords, self.d) != (list(X), list(a)):
            raise StructureError("L is not closed under the Courant bracket")
        return coords

    def Lbar(self, u: Section) -> list[GaussianRational]:
        X, a = u
        coords = [_dot(a, z) for z in self.sp.holo] + [_dot(zb, X) for zb in self.sp.antiholo_dual]
        if _combine(self.Lbar_secs, coords, self.d) != (list(X), list(a)):
            raise StructureError("Lbar is not closed under the Courant bracket")
        return coords


def schouten(ctx: GradedBracketAlgebra, a: Multivector, b: Multivector) -> Multivector:
    return ctx.schouten(a, b)


def dbar(ctx: GradedBracketAlgebra, a: Multivector) -> Multivector:
    return ctx.differential(a)


# bialgebroid compatibility ------------------------------------------------------

def bialgebroid_residuals(ctx: GradedBracketAlgebra, second_sign: int = 1) -> dict[tuple[int, int], Multivector]:
    """Nonzero values of ``d[a, b] - [da, b] - s [a, db]`` over generator pairs.

    With ``s = +1`` this is the derivation rule for degree-one elements
    (``d`` is a degree-one derivation of the bracket of degree -1).
    """
    out = {}
    for a in range(ctx.rank):
        ga = ctx.generator(a)
        for b in range(a, ctx.rank):
            gb = ctx.generator(b)
            lhs = ctx.differential(ctx.schouten(ga, gb))
            rhs = ctx.schouten(ctx.differential(ga), gb) + ctx.schouten(ga, ctx.differential(gb)).scale(second_sign)
            res = lhs - rhs
            if res:
                out[(a, b)] = res
    return out


def derivation_of_bracket_residual(ctx: GradedBracketAlgebra, a: Multivector, b: Multivector) -> Multivector:
    """``d[a, b] - [da, b] - (-1)^(|a|-1) [a, db]`` for homogeneous ``a``."""
    deg = a.degree()
    if not isinstance(deg, int):
        deg = 1
    sign = -1 if (deg - 1) % 2 else 1
    return ctx.differential(ctx.schouten(a, b)) - ctx.schouten(ctx.differential(a), b) - ctx.schouten(a, ctx.differential(b)).scale(sign)


def identity21_residual(ctx: GCAContext, gamma: Multivector, ell: Multivector, a: int, b: int) -> GaussianRational:
    """``[G, l](lbar_a, lbar_b) - sigma([G lbar_a, l])(lbar_b) + sigma([G lbar_b, l])(lbar_a)``.

    ``G lbar`` is the first-slot contraction of the bivector ``G`` with ``lbar``.
    """
    lhs = ctx.evaluate(ctx.schouten(gamma, ell), (a, b))
    ga = ctx.contract_dual(Multivector.generator(ctx.rank, a), gamma)
    gb = ctx.contract_dual(Multivector.generator(ctx.rank, b), gamma)
    t1 = ctx.evaluate(ctx.schouten(ga, ell), (b,))
    t2 = ctx.evaluate(ctx.schouten(gb, ell), (a,))
    return lhs - t1 + t2


# endomorphisms of L -------------------------------------------------------------

@dataclass(frozen=True)
class Endomorphism:
    """Linear map of ``L`` given by ``matrix[i][j]`` = coefficient of ``g_i`` in ``phi(g_j)``.

    On ``wedge L`` it acts as an even derivation (``apply``) or, for maps
    like ``1 + phi``, multiplicatively (``apply_homomorphism``).
    """

    matrix: tuple[tuple[GaussianRational, ...], ...]

    def __post_init__(self):
        m = tuple(tuple(GaussianRational.coerce(x) for x in row) for row in self.matrix)
        if any(len(row) != len(m) for row in m):
            raise ValueError("endomorphism matrix must be square")
        object.__setattr__(self, "matrix", m)

    @property
    def rank(self) -> int:
        return len(self.matrix)

    @classmethod
    def zero(cls, r: int) -> "Endomorphism":
        return cls(tuple(tuple(ZERO for _ in range(r)) for _ in range(r)))

    @classmethod
    def identity(cls, r: int) -> "Endomorphism":
        return cls(tuple(tuple(row) for row in linalg.identity(r)))

    @classmethod
    def from_images(cls, images: Sequence[Multivector]) -> "Endomorphism":
        r = len(images)
        cols = [img.vector() if img else [ZERO] * r for img in images]
        return cls(tuple(tuple(row) for row in linalg.transpose(cols)))

    @cached_property
    def images(self) -> tuple[Multivector, ...]:
        r = self.rank
        return tuple(Multivector(r, {(i,): self.matrix[i][j] for i in range(r)}) for j in range(r))

    def image(self, j: int) -> Multivector:
        return self.images[j]

    def apply(self, x: Multivector) -> Multivector:
        return extend_derivation(x, self.images, odd=False)

    def power(self, k: int, x: Multivector) -> Multivector:
        for _ in range(k):
            if not x:
                break
            x = self.apply(x)
        return x

    def apply_homomorphism(self, x: Multivector) -> Multivector:
        return extend_homomorphism(x, self.images)

    def __add__(self, other: "Endomorphism") -> "Endomorphism":
        return Endomorphism(tuple(tuple(a + b for a, b in zip(r1, r2)) for r1, r2 in zip(self.matrix, other.matrix)))

    def scale(self, c) -> "Endomorphism":
        c = GaussianRational.coerce(c)
        return Endomorphism(tuple(tuple(c * a for a in row) for row in self.matrix))

    def compose(self, other: "Endomorphism") -> "Endomorphism":
        m = linalg.matmul([list(r) for r in self.matrix], [list(r) for r in other.matrix])
        return Endomorphism(tuple(tuple(r) for r in m))

    def is_zero(self) -> bool:
        return all(x.is_zero() for row in self.matrix for x in row)

    def to_json(self) -> list:
        return [[x.to_wire() for x in row] for row in self.matrix]

    @classmethod
    def from_json(cls, data) -> "Endomorphism":
        return cls(tuple(tuple(GaussianRational.coerce(x) for x in row) for row in data))


def complex_vector_names(n: int) -> tuple[str, ...]:
    """Basis ``z_1..z_n, zbar_1..zbar_n`` of the complexified algebra."""
    return tuple([f"z_{j + 1}" for j in range(n)] + [f"zbar_{j + 1}" for j in range(n)])


def endomorphism_from_bivector(ctx: GCAContext, bivector: Multivector) -> Endomorphism:
    """Map ``zeta -> i_zeta P`` (first slot) restricted to ``h^{*(0,1)} -> h^{1,0}``.

    ``bivector`` lives on ``z_1..z_n, zbar_1..zbar_n``. Only its mixed
    ``h^{1,0} ^ h^{0,1}`` part maps ``zbar^j`` into ``h^{1,0}``; other
    parts are discarded.
    """
    n = ctx.n
    if bivector.ambient_dim != 2 * n:
        raise ValueError("bivector must live on the complexified algebra")
    r = 2 * n
    m = [[ZERO] * r for _ in range(r)]
    for (p, q), c in bivector.terms.items():
        # i_zeta (u ^ w) = zeta(u) w - zeta(w) u
        if p < n <= q:
            m[p][q] = m[p][q] - c
    return Endomorphism(tuple(tuple(row) for row in m))


def bivector_from_endomorphism(ctx: GCAContext, phi: Endomorphism) -> Multivector:
    """Inverse of :func:`endomorphism_from_bivector` on the ``h^{*(0,1)} -> h^{1,0}`` block."""
    n = ctx.n
    terms = {}
    for p in range(n):
        for q in range(n, 2 * n):
            c = phi.matrix[p][q]
            if not c.is_zero():
                terms[(p, q)] = -c
    return Multivector(2 * n, terms)


def endo_decompose(ctx: GCAContext, phi: Endomorphism) -> tuple[Endomorphism, Endomorphism, Endomorphism, Endomorphism]:
    """Blocks ``(phi1, phi2, phi3, phi4)``: ``End(h10)``, ``End(h*01)``,
    ``h10 -> h*01`` and ``h*01 -> h10``."""
    n = ctx.n
    r = 2 * n
    if phi.rank != r:
        raise ValueError("endomorphism size does not match the context")

    def block(keep: Callable[[int, int], bool]) -> Endomorphism:
        return Endomorphism(tuple(tuple(phi.matrix[i][j] if keep(i, j) else ZERO for j in range(r)) for i in range(r)))

    return (
        block(lambda i, j: i < n and j < n),
        block(lambda i, j: i >= n and j >= n),
        block(lambda i, j: i >= n and j < n),
        block(lambda i, j: i < n and j >= n),
    )


def dump_context(ctx: GCAContext) -> str:
    data = ctx.dump()
    data["dual_generators"] = list(ctx.dual_names)
    data["algebra"] = ctx.spec.to_json()
    return json.dumps(data, indent=2, sort_keys=True)
