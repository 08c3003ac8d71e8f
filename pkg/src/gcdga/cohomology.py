"""Cohomology of square-zero derivations on a free exterior algebra, induced
maps, the transported symplectic algebra, and the derived-center test."""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Callable, Sequence

from . import linalg
from .exterior import Multivector, monomial_basis
from .gerstenhaber import ConsistencyError, Endomorphism, GradedBracketAlgebra
from .lie import LieAlgebraSpec, StructureError, ce_differential, require_valid
from .scalars import ZERO, GaussianRational

Operator = Callable[[Multivector], Multivector]


class CommutationError(ValueError):
    def __init__(self, message, degree=None, witness=None):
        super().__init__(message)
        self.degree = degree
        self.witness = witness


# complexes ----------------------------------------------------------------------

@dataclass
class CochainComplex:
    """``matrices[k]`` maps degree ``k`` to degree ``k + 1`` in monomial bases."""

    rank: int
    bases: list[list[tuple[int, ...]]]
    matrices: list[linalg.Matrix]

    @property
    def dimension_per_degree(self) -> list[int]:
        return [len(b) for b in self.bases]

    def to_coords(self, x: Multivector, k: int) -> list[GaussianRational]:
        return [x.terms.get(idx, ZERO) for idx in self.bases[k]]

    def from_coords(self, coords: Sequence[GaussianRational], k: int) -> Multivector:
        return Multivector(self.rank, {idx: c for idx, c in zip(self.bases[k], coords)})


def _operator_matrix(op: Operator, rank: int, src: list, dst: list, dst_degree: int) -> linalg.Matrix:
    pos = {idx: i for i, idx in enumerate(dst)}
    m = linalg.zeros(len(dst), len(src))
    for j, idx in enumerate(src):
        image = op(Multivector.monomial(rank, idx))
        for k, c in image.terms.items():
            if len(k) != dst_degree:
                raise ConsistencyError(f"operator is not homogeneous of the expected degree on {idx}")
            m[pos[k]][j] = c
    return m


def build_complex(source, differential: Operator | None = None) -> CochainComplex:
    """Complex of ``differential`` (default: the algebra's own) on wedge of ``rank`` generators.

    ``source`` is a :class:`GradedBracketAlgebra` or a generator count.
    """
    if isinstance(source, int):
        rank = source
        if differential is None:
            raise ValueError("a bare rank needs an explicit differential")
    else:
        rank = source.rank
        differential = differential or source.differential
    bases = [monomial_basis(rank, k) for k in range(rank + 1)]
    mats = [_operator_matrix(differential, rank, bases[k], bases[k + 1], k + 1) for k in range(rank)]
    for k in range(rank - 1):
        if not linalg.is_zero_matrix(linalg.matmul(mats[k + 1], mats[k])):
            raise ConsistencyError(f"differential does not square to zero in degree {k}")
    return CochainComplex(rank, bases, mats)


@dataclass
class DegreeCohomology:
    degree: int
    dimension: int
    representatives: list[Multivector]
    cycle_rank: int
    boundary_rank: int


@dataclass
class CohomologyBasis:
    complex: CochainComplex
    degrees: list[DegreeCohomology]
    _image_bases: list[list[list[GaussianRational]]] = field(repr=False, default_factory=list)
    _rep_coords: list[list[list[GaussianRational]]] = field(repr=False, default_factory=list)

    @property
    def dimensions(self) -> list[int]:
        return [d.dimension for d in self.degrees]

    def is_closed(self, x: Multivector, k: int) -> bool:
        if k >= self.complex.rank:
            return True
        v = linalg.matvec(self.complex.matrices[k], self.complex.to_coords(x, k))
        return all(c.is_zero() for c in v)

    def is_exact(self, x: Multivector, k: int) -> bool:
        return linalg.span_contains(self._image_bases[k], self.complex.to_coords(x, k))

    def class_coordinates(self, x: Multivector, k: int) -> list[GaussianRational]:
        """Coordinates of the class of a closed ``x`` in the representative basis."""
        if not self.is_closed(x, k):
            raise ValueError("element is not closed")
        reps = self._rep_coords[k]
        image = self._image_bases[k]
        cols = reps + image
        target = self.complex.to_coords(x, k)
        if not cols:
            return []
        sol = linalg.solve(linalg.transpose(cols), target)
        if sol is None:
            raise ConsistencyError("closed element outside representatives plus image")
        return sol[: len(reps)]

    def to_json(self) -> dict:
        return {
            "dimensions": self.dimensions,
            "representatives": {str(d.degree): [r.to_json() for r in d.representatives] for d in self.degrees},
        }


def cohomology(cx: CochainComplex) -> CohomologyBasis:
    """Kernel bases from reduced echelon form, pruned modulo the image; ranks by Bareiss."""
    degrees, images, reps_all = [], [], []
    for k in range(cx.rank + 1):
        n_k = len(cx.bases[k])
        if k < cx.rank:
            kern = linalg.kernel(cx.matrices[k], n_k)
        else:
            kern = linalg.identity(n_k)
        image = [] if k == 0 else linalg.transpose(cx.matrices[k - 1]) if cx.matrices[k - 1] else []
        image = [row for row in image if any(not c.is_zero() for c in row)]
        image_rank = linalg.rank(image) if image else 0
        chosen: list[list[GaussianRational]] = []
        current = [list(r) for r in image]
        current_rank = image_rank
        for v in kern:
            trial = current + [v]
            r = linalg.rank(trial)
            if r > current_rank:
                chosen.append(v)
                current, current_rank = trial, r
        degrees.append(
            DegreeCohomology(k, len(chosen), [cx.from_coords(v, k) for v in chosen], len(kern), image_rank)
        )
        images.append(image)
        reps_all.append(chosen)
    return CohomologyBasis(cx, degrees, images, reps_all)


# induced maps -------------------------------------------------------------------

@dataclass
class InducedMapReport:
    matrices: list[linalg.Matrix]
    ranks: list[int]
    source_dims: list[int]
    target_dims: list[int]

    @property
    def bijective_per_degree(self) -> list[bool]:
        return [s == t == r for s, t, r in zip(self.source_dims, self.target_dims, self.ranks)]

    @property
    def isomorphism(self) -> bool:
        return all(self.bijective_per_degree)

    def to_json(self) -> dict:
        return {
            "isomorphism": self.isomorphism,
            "bijective_per_degree": self.bijective_per_degree,
            "source_dims": self.source_dims,
            "target_dims": self.target_dims,
            "ranks": self.ranks,
            "matrices": [[[c.to_wire() for c in row] for row in m] for m in self.matrices],
        }


def as_operator(chain_map) -> Operator:
    if isinstance(chain_map, Endomorphism):
        return chain_map.apply_homomorphism
    return chain_map


def induced_map(source: CochainComplex, target: CochainComplex, chain_map) -> InducedMapReport:
    """Matrices of the map in cohomology; ``chain_map`` must commute with both differentials."""
    if source.rank != target.rank:
        raise ValueError("complexes live on different generator counts")
    op = as_operator(chain_map)
    rank = source.rank
    F = [_operator_matrix(op, rank, source.bases[k], target.bases[k], k) for k in range(rank + 1)]
    for k in range(rank):
        lhs = linalg.matmul(F[k + 1], source.matrices[k])
        rhs = linalg.matmul(target.matrices[k], F[k])
        if lhs != rhs:
            for j, idx in enumerate(source.bases[k]):
                col_l = [row[j] for row in lhs]
                col_r = [row[j] for row in rhs]
                if col_l != col_r:
                    raise CommutationError(
                        f"map does not commute with the differentials in degree {k}", k, idx
                    )
    hs, ht = cohomology(source), cohomology(target)
    mats, ranks = [], []
    for k in range(rank + 1):
        cols = []
        for rep in hs.degrees[k].representatives:
            img = target.from_coords(linalg.matvec(F[k], source.to_coords(rep, k)), k)
            cols.append(ht.class_coordinates(img, k))
        m = linalg.transpose(cols, ht.degrees[k].dimension) if cols else [[] for _ in range(ht.degrees[k].dimension)]
        mats.append(m)
        ranks.append(linalg.rank(m) if cols and m and m[0] else 0)
    return InducedMapReport(mats, ranks, hs.dimensions, ht.dimensions)


def cohomology_bracket(alg: GradedBracketAlgebra, basis: CohomologyBasis, p: int, i: int, q: int, j: int) -> list[GaussianRational]:
    """Experimental: class of ``[r_i, r_j]`` for representatives in degrees ``p`` and ``q``.

    Well defined when the differential is a derivation of the bracket, which
    the compatibility identity guarantees for the algebras built here.
    """
    a = basis.degrees[p].representatives[i]
    b = basis.degrees[q].representatives[j]
    return basis.class_coordinates(alg.schouten(a, b), p + q - 1)


# the transported symplectic algebra --------------------------------------------

def dual_names(names: Sequence[str]) -> tuple[str, ...]:
    out = []
    for nm in names:
        m = re.fullmatch(r"([A-Za-z_]+)(\d+)", nm)
        out.append(f"{m.group(1)}^{m.group(2)}" if m else f"{nm}*")
    return tuple(out)


class SymplecticDGA(GradedBracketAlgebra):
    """``wedge h*`` with the bracket ``[i_x w, i_y w] = i_[x,y] w`` and differential ``d``."""

    def __init__(self, spec: LieAlgebraSpec, omega: Multivector):
        require_valid(spec)
        d = spec.dim
        if omega.ambient_dim != d or omega.degree() not in (2,):
            raise StructureError("omega must be a 2-form on the algebra")
        # W[k][j] = coefficient of b^k in i_{b_j} omega = omega(b_j, b_k)
        W = linalg.zeros(d, d)
        for (p, q), c in omega.terms.items():
            W[q][p] = W[q][p] + c
            W[p][q] = W[p][q] - c
        try:
            Winv = linalg.inverse(W)
        except ZeroDivisionError:
            raise StructureError("omega is degenerate") from None
        if ce_differential(spec, omega):
            raise StructureError("omega is not closed")
        self.spec = spec
        self.omega = omega
        self.rank = d
        self.names = dual_names(spec.basis_names)
        self.flat = W
        preimages = [[row[a] for row in Winv] for a in range(d)]  # x_a with i_{x_a} omega = b^a
        table = []
        for a in range(d):
            row = []
            for b in range(d):
                br = spec.bracket(preimages[a], preimages[b])
                row.append(Multivector.from_vector(linalg.matvec(W, br)))
            table.append(tuple(row))
        self.bracket_table = tuple(table)
        self.differential_table = tuple(
            ce_differential(spec, Multivector.generator(d, a)) for a in range(d)
        )


def symplectic_dga(spec: LieAlgebraSpec, omega: Multivector) -> SymplecticDGA:
    return SymplecticDGA(spec, omega)


# derived-center obstruction -----------------------------------------------------

@dataclass
class SideDiagnostic:
    derived_basis: list[Multivector]
    center_basis: list[Multivector]
    center_closed: bool | None

    def to_json(self, names) -> dict:
        return {
            "derived_dimension": len(self.derived_basis),
            "derived_basis": [x.format(names) for x in self.derived_basis],
            "center": [x.format(names) for x in self.center_basis],
            "center_closed": self.center_closed,
        }


@dataclass
class DiagnosticReport:
    side_a: SideDiagnostic
    side_b: SideDiagnostic

    @property
    def verdict(self) -> str:
        a, b = self.side_a.center_closed, self.side_b.center_closed
        if a is None or b is None or a == b:
            return "inconclusive"
        return "not quasi-isomorphic"

    @property
    def obstructed(self) -> bool:
        return self.verdict == "not quasi-isomorphic"


def analyze_side(alg: GradedBracketAlgebra) -> SideDiagnostic:
    r = alg.rank
    spans = [alg.bracket_table[a][b].vector() for a in range(r) for b in range(a + 1, r)]
    spans = [v for v in spans if any(not c.is_zero() for c in v)]
    if not spans:
        return SideDiagnostic([], [], None)
    R, piv = linalg.rref(spans)
    derived = [R[i] for i in range(len(piv))]
    # center of the derived subalgebra: sum c_i d_i with [sum c_i d_i, d_j] = 0 for all j
    dvecs = [Multivector.from_vector(v) for v in derived]
    eqs = []
    for dj in dvecs:
        cols = [alg.schouten(di, dj).vector() for di in dvecs]
        for row in linalg.transpose(cols):
            eqs.append(row)
    coeffs = linalg.kernel(eqs, len(dvecs)) if eqs else linalg.identity(len(dvecs))
    center = []
    for c in coeffs:
        v = [ZERO] * r
        for ci, di in zip(c, derived):
            v = [x + ci * y for x, y in zip(v, di)]
        center.append(Multivector.from_vector(v))
    closed = all(alg.differential(z).is_zero() for z in center)
    return SideDiagnostic([Multivector.from_vector(v) for v in derived], center, closed)


def derived_center_diagnostic(a: GradedBracketAlgebra, b: GradedBracketAlgebra) -> DiagnosticReport:
    """Compare closedness of the center of the first derived subalgebra on both sides.

    A mismatch certifies that no quasi-isomorphism exists; agreement proves nothing.
    """
    return DiagnosticReport(analyze_side(a), analyze_side(b))
