"""Lie algebras by structure constants, complex structures, and the
Chevalley-Eilenberg differential on the dual exterior algebra."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from functools import cached_property
from itertools import combinations
from pathlib import Path
from typing import Iterable, Mapping, Sequence

from . import linalg
from .exterior import Multivector, evaluate_form, extend_derivation, parse_monomial
from .scalars import I, ONE, ZERO, GaussianRational

HALF = GaussianRational(1, 0) / 2
Vector = list[GaussianRational]


class SpecError(ValueError):
    """Malformed algebra data (bad shapes, indices, scalars)."""


class ValidationError(ValueError):
    """Structure constants fail Jacobi, or J fails J^2 = -1."""

    def __init__(self, message, report=None):
        super().__init__(message)
        self.report = report


class StructureError(ValueError):
    """Missing or non-integrable complex structure, degenerate forms, and the like."""


@dataclass(frozen=True)
class LieAlgebraSpec:
    """Finite-dimensional Lie algebra over Q(i), optionally with a complex structure.

    ``brackets[(i, j)]`` for ``i < j`` maps ``k`` to ``c^k_{ij}``, the
    coefficient of basis ``k`` in ``[b_i, b_j]``. ``complex_structure[r][c]``
    is the coefficient of ``b_r`` in ``J b_c``.
    """

    dim: int
    basis_names: tuple[str, ...]
    brackets: Mapping[tuple[int, int], Mapping[int, GaussianRational]] = field(default_factory=dict)
    complex_structure: tuple[tuple[GaussianRational, ...], ...] | None = None
    real: bool = True

    def __post_init__(self):
        if self.dim <= 0:
            raise SpecError("dimension must be positive")
        if len(self.basis_names) != self.dim or len(set(self.basis_names)) != self.dim:
            raise SpecError("basis names must be distinct and match the dimension")
        clean: dict[tuple[int, int], dict[int, GaussianRational]] = {}
        for (i, j), row in self.brackets.items():
            if not (0 <= i < self.dim and 0 <= j < self.dim):
                raise SpecError(f"bracket index ({i}, {j}) out of range")
            if i == j:
                if any(not GaussianRational.coerce(c).is_zero() for c in row.values()):
                    raise SpecError(f"[b{i}, b{i}] must vanish")
                continue
            sign = ONE
            if i > j:
                i, j, sign = j, i, -ONE
            target = clean.setdefault((i, j), {})
            for k, c in row.items():
                if not 0 <= k < self.dim:
                    raise SpecError(f"bracket target {k} out of range")
                c = GaussianRational.coerce(c) * sign
                new = target.get(k, ZERO) + c
                if new.is_zero():
                    target.pop(k, None)
                else:
                    target[k] = new
        clean = {key: row for key, row in clean.items() if row}
        object.__setattr__(self, "brackets", clean)
        if self.complex_structure is not None:
            J = tuple(tuple(GaussianRational.coerce(x) for x in row) for row in self.complex_structure)
            if len(J) != self.dim or any(len(r) != self.dim for r in J):
                raise SpecError("J must be a dim x dim matrix")
            object.__setattr__(self, "complex_structure", J)
        if self.real:
            has_complex = any(not c.is_real() for row in clean.values() for c in row.values())
            if self.complex_structure is not None:
                has_complex = has_complex or any(not x.is_real() for r in self.complex_structure for x in r)
            if has_complex:
                raise SpecError("spec flagged real has non-real constants")

    # structure constants ----------------------------------------------------
    def constant(self, i: int, j: int, k: int) -> GaussianRational:
        if i == j:
            return ZERO
        if i < j:
            return self.brackets.get((i, j), {}).get(k, ZERO)
        return -self.brackets.get((j, i), {}).get(k, ZERO)

    @cached_property
    def _sparse(self) -> dict[int, list[tuple[int, list[tuple[int, GaussianRational]]]]]:
        by_first: dict[int, list] = {}
        for (i, j), row in self.brackets.items():
            items = [(k, c) for k, c in sorted(row.items()) if not c.is_zero()]
            if items:
                by_first.setdefault(i, []).append((j, items))
                by_first.setdefault(j, []).append((i, [(k, -c) for k, c in items]))
        return by_first

    def bracket(self, u: Sequence[GaussianRational], v: Sequence[GaussianRational]) -> Vector:
        """Bracket of two (complexified) vectors given by coefficient lists."""
        out = [ZERO] * self.dim
        for i, row in self._sparse.items():
            if u[i].is_zero():
                continue
            for j, items in row:
                if v[j].is_zero():
                    continue
                c = u[i] * v[j]
                for k, s in items:
                    out[k] = out[k] + c * s
        return out

    def basis_vector(self, i: int) -> Vector:
        return [ONE if k == i else ZERO for k in range(self.dim)]

    def J(self, v: Sequence[GaussianRational]) -> Vector:
        if self.complex_structure is None:
            raise StructureError("no complex structure present")
        return linalg.matvec([list(r) for r in self.complex_structure], list(v))

    def is_abelian(self) -> bool:
        return not self.brackets

    @cached_property
    def report(self) -> "ValidationReport":
        return validate(self)

    def with_complex_structure(self, J) -> "LieAlgebraSpec":
        return LieAlgebraSpec(self.dim, self.basis_names, self.brackets, J, self.real)

    def permuted(self, perm: Sequence[int]) -> "LieAlgebraSpec":
        """Same algebra with old basis ``i`` renamed to position ``perm[i]``."""
        n = self.dim
        names = [None] * n
        for i, p in enumerate(perm):
            names[p] = self.basis_names[i]
        br = {}
        for (i, j), row in self.brackets.items():
            br[(perm[i], perm[j])] = {perm[k]: c for k, c in row.items()}
        J = None
        if self.complex_structure is not None:
            Jm = [[ZERO] * n for _ in range(n)]
            for r in range(n):
                for c in range(n):
                    Jm[perm[r]][perm[c]] = self.complex_structure[r][c]
            J = Jm
        return LieAlgebraSpec(n, tuple(names), br, J, self.real)

    def change_basis(self, P: Sequence[Sequence], names: Sequence[str] | None = None) -> "LieAlgebraSpec":
        """Same algebra in the basis ``b'_j = sum_i P[i][j] b_i``."""
        n = self.dim
        P = linalg.coerce_matrix(P)
        Pinv = linalg.inverse(P)
        cols = [[P[i][j] for i in range(n)] for j in range(n)]
        br = {}
        for a in range(n):
            for b in range(a + 1, n):
                row = linalg.matvec(Pinv, self.bracket(cols[a], cols[b]))
                row = {k: c for k, c in enumerate(row) if not c.is_zero()}
                if row:
                    br[(a, b)] = row
        J = None
        if self.complex_structure is not None:
            J = linalg.matmul(linalg.matmul(Pinv, [list(r) for r in self.complex_structure]), P)
        real = self.real and all(x.is_real() for r in P for x in r)
        return LieAlgebraSpec(n, tuple(names or self.basis_names), br, J, real)

    # serialization ----------------------------------------------------------
    def to_json(self) -> dict:
        data = {
            "dim": self.dim,
            "basis": list(self.basis_names),
            "brackets": [
                [i, j, [[k, c.to_wire()] for k, c in sorted(row.items())]]
                for (i, j), row in sorted(self.brackets.items())
            ],
            "real": self.real,
        }
        if self.complex_structure is not None:
            data["J"] = [[x.to_wire() for x in row] for row in self.complex_structure]
        return data

    @classmethod
    def from_json(cls, data: Mapping) -> "LieAlgebraSpec":
        try:
            dim = int(data["dim"])
            names = tuple(str(x) for x in data.get("basis", [f"x{i + 1}" for i in range(dim)]))
            brackets: dict[tuple[int, int], dict[int, GaussianRational]] = {}
            for pos, entry in enumerate(data.get("brackets", [])):
                try:
                    i, j, row = entry
                    target = brackets.setdefault((int(i), int(j)), {})
                    for k, c in row:
                        target[int(k)] = target.get(int(k), ZERO) + GaussianRational.coerce(c)
                except (TypeError, ValueError) as exc:
                    raise SpecError(f"brackets[{pos}]: {exc}") from exc
            J = data.get("J")
            if J is not None:
                try:
                    J = [[GaussianRational.coerce(x) for x in row] for row in J]
                except (TypeError, ValueError) as exc:
                    raise SpecError(f"J: {exc}") from exc
            return cls(dim, names, brackets, J, bool(data.get("real", True)))
        except KeyError as exc:
            raise SpecError(f"missing key {exc}") from exc

    @classmethod
    def load(cls, path) -> "LieAlgebraSpec":
        return cls.from_json(json.loads(Path(path).read_text()))


def make_spec(names: Sequence[str], brackets: Mapping[tuple[str, str], Mapping[str, object]],
              J: Mapping[str, Mapping[str, object]] | None = None, real: bool = True) -> LieAlgebraSpec:
    """Build a spec from named data: ``{("e1", "v1"): {"v2": 1}}``, ``J={"e1": {"v1": 1}}``."""
    pos = {name: i for i, name in enumerate(names)}
    br = {}
    for (a, b), row in brackets.items():
        br[(pos[a], pos[b])] = {pos[k]: GaussianRational.coerce(c) for k, c in row.items()}
    Jm = None
    if J is not None:
        n = len(names)
        Jm = [[ZERO] * n for _ in range(n)]
        for src, row in J.items():
            for dst, c in row.items():
                Jm[pos[dst]][pos[src]] = GaussianRational.coerce(c)
    return LieAlgebraSpec(len(names), tuple(names), br, Jm, real)


# validation ---------------------------------------------------------------------

@dataclass
class ValidationReport:
    jacobi_violations: list[tuple[tuple[int, int, int], Vector]] = field(default_factory=list)
    j_squared_ok: bool | None = None
    integrability_violations: list[tuple[tuple[int, int], Vector]] = field(default_factory=list)

    @property
    def jacobi_ok(self) -> bool:
        return not self.jacobi_violations

    @property
    def integrable(self) -> bool | None:
        if self.j_squared_ok is None:
            return None
        return bool(self.j_squared_ok) and not self.integrability_violations

    @property
    def valid(self) -> bool:
        return self.jacobi_ok and self.j_squared_ok is not False

    def messages(self, names: Sequence[str]) -> list[str]:
        out = []
        for (i, j, l), res in self.jacobi_violations:
            out.append(f"Jacobi fails on ({names[i]}, {names[j]}, {names[l]}): residual {_fmt_vec(res, names)}")
        if self.j_squared_ok is False:
            out.append("J^2 != -1")
        for (a, b), res in self.integrability_violations:
            out.append(f"[z_{a + 1}, z_{b + 1}] has a (0,1) component {_fmt_vec(res, names)}")
        return out

    def to_json(self, names: Sequence[str]) -> dict:
        return {
            "valid": self.valid,
            "jacobi_ok": self.jacobi_ok,
            "j_squared_ok": self.j_squared_ok,
            "integrable": self.integrable,
            "jacobi_violations": [
                {"triple": [names[i] for i in t], "residual": [c.to_wire() for c in res]}
                for t, res in self.jacobi_violations
            ],
            "integrability_violations": [
                {"pair": list(p), "residual": [c.to_wire() for c in res]}
                for p, res in self.integrability_violations
            ],
        }


def _fmt_vec(v: Sequence[GaussianRational], names: Sequence[str]) -> str:
    return Multivector.from_vector(v).format(names)


def jacobiator(spec: LieAlgebraSpec, i: int, j: int, l: int) -> Vector:
    x, y, z = spec.basis_vector(i), spec.basis_vector(j), spec.basis_vector(l)
    br = spec.bracket
    terms = (br(x, br(y, z)), br(y, br(z, x)), br(z, br(x, y)))
    return [a + b + c for a, b, c in zip(*terms)]


def validate(spec: LieAlgebraSpec) -> ValidationReport:
    report = ValidationReport()
    for i, j, l in combinations(range(spec.dim), 3):
        res = jacobiator(spec, i, j, l)
        if any(not c.is_zero() for c in res):
            report.jacobi_violations.append(((i, j, l), res))
    if spec.complex_structure is None:
        return report
    Jm = [list(r) for r in spec.complex_structure]
    J2 = linalg.matmul(Jm, Jm)
    minus_one = [[-x for x in row] for row in linalg.identity(spec.dim)]
    report.j_squared_ok = J2 == minus_one
    if not report.j_squared_ok:
        return report
    holo = _holomorphic_frame(spec)
    for a, b in combinations(range(len(holo)), 2):
        w = spec.bracket(holo[a], holo[b])
        # (0,1) projection: (w + iJw)/2
        Jw = spec.J(w)
        proj = [(x + I * y) * HALF for x, y in zip(w, Jw)]
        if any(not c.is_zero() for c in proj):
            report.integrability_violations.append(((a, b), proj))
    return report


def _real_directions(spec: LieAlgebraSpec) -> list[int]:
    """Greedy choice of basis indices ``x_j`` with ``{x_j, J x_j}`` a basis."""
    chosen: list[int] = []
    rows: list[Vector] = []
    for k in range(spec.dim):
        cand = rows + [spec.basis_vector(k), spec.J(spec.basis_vector(k))]
        if linalg.rank(cand) == len(cand):
            chosen.append(k)
            rows = cand
        if len(rows) == spec.dim:
            break
    if len(rows) != spec.dim:
        raise StructureError("could not find a J-adapted basis")
    return chosen


def _holomorphic_frame(spec: LieAlgebraSpec) -> list[Vector]:
    out = []
    for k in _real_directions(spec):
        x = spec.basis_vector(k)
        Jx = spec.J(x)
        out.append([(a - I * b) * HALF for a, b in zip(x, Jx)])
    return out


def require_valid(spec: LieAlgebraSpec) -> None:
    rep = spec.report
    if not rep.valid:
        raise ValidationError("; ".join(rep.messages(spec.basis_names)), rep)


# Chevalley-Eilenberg ------------------------------------------------------------

def ce_generator_images(spec: LieAlgebraSpec) -> list[Multivector]:
    """``d x^k`` for each dual basis element, from ``d theta(x, y) = -theta([x, y])``."""
    n = spec.dim
    images = []
    for k in range(n):
        terms = {}
        for (i, j), row in spec.brackets.items():
            c = row.get(k)
            if c is not None:
                terms[(i, j)] = -c
        images.append(Multivector(n, terms))
    return images


def ce_differential(spec: LieAlgebraSpec, form: Multivector) -> Multivector:
    require_valid(spec)
    if form.ambient_dim != spec.dim:
        raise SpecError("form does not live on this algebra's dual")
    return extend_derivation(form, _ce_images(spec), odd=True)


_CE_CACHE: dict[int, list[Multivector]] = {}


def _ce_images(spec: LieAlgebraSpec) -> list[Multivector]:
    key = id(spec)
    hit = _CE_CACHE.get(key)
    if hit is None or hit[0] is not spec:
        hit = (spec, ce_generator_images(spec))
        _CE_CACHE[key] = hit
    return hit[1]


def dual_form(spec: LieAlgebraSpec, name: str, coeff=1) -> Multivector:
    return Multivector.generator(spec.dim, spec.basis_names.index(name), coeff)


def named_form(spec: LieAlgebraSpec, terms: Mapping[str, object]) -> Multivector:
    """Forms written as ``{"e1^v2": -1, "v1^e2": -1}`` in dual-basis names."""
    out = {}
    for key, c in terms.items():
        idx = parse_monomial(key, spec.basis_names)
        mv = Multivector(spec.dim, {idx: c})
        for k, v in mv.terms.items():
            out[k] = out.get(k, ZERO) + v
    return Multivector(spec.dim, out)


# complex splitting --------------------------------------------------------------

@dataclass(frozen=True)
class ComplexSplitting:
    """Frames of the +i and -i eigenspaces and the dual coframes.

    ``holo[j] = (x_j - i J x_j) / 2``; ``antiholo[j] = (x_j + i J x_j) / 2``;
    ``holo_dual[j]`` and ``antiholo_dual[j]`` are the dual covectors, given as
    coefficient lists on the dual basis of the real basis.
    """

    n: int
    real_directions: tuple[int, ...]
    holo: tuple[tuple[GaussianRational, ...], ...]
    antiholo: tuple[tuple[GaussianRational, ...], ...]
    holo_dual: tuple[tuple[GaussianRational, ...], ...]
    antiholo_dual: tuple[tuple[GaussianRational, ...], ...]

    @property
    def frame(self) -> list[Vector]:
        return [list(v) for v in self.holo + self.antiholo]

    @property
    def coframe(self) -> list[Vector]:
        return [list(v) for v in self.holo_dual + self.antiholo_dual]

    def pairing_table(self) -> linalg.Matrix:
        """``coframe[a](frame[b])``; the identity by construction."""
        return [[_dot(a, b) for b in self.frame] for a in self.coframe]

    def frame_coords(self, v: Sequence[GaussianRational]) -> Vector:
        return [_dot(a, v) for a in self.coframe]

    def form_to_coframe(self, form: Multivector) -> Multivector:
        """Rewrite a form on the real basis in the coframe (z^1..z^n, zbar^1..zbar^n)."""
        frame = self.frame
        m = 2 * self.n
        out = {}
        for k, part in form.homogeneous_parts().items():
            for idx in combinations(range(m), k):
                c = evaluate_form(part, [frame[a] for a in idx])
                if not c.is_zero():
                    out[idx] = c
        return Multivector(m, out)

    def form_from_coframe(self, form: Multivector) -> Multivector:
        """Inverse of :meth:`form_to_coframe`."""
        d = 2 * self.n
        images = [Multivector.from_vector(v) for v in self.coframe]
        from .exterior import extend_homomorphism

        return extend_homomorphism(form, images) if form.terms else Multivector(d)


def _dot(a: Sequence[GaussianRational], b: Sequence[GaussianRational]) -> GaussianRational:
    s = ZERO
    for x, y in zip(a, b):
        if not x.is_zero() and not y.is_zero():
            s = s + x * y
    return s


def split(spec: LieAlgebraSpec) -> ComplexSplitting:
    if spec.complex_structure is None:
        raise StructureError("split needs a complex structure J")
    require_valid(spec)
    if spec.dim % 2:
        raise StructureError("odd-dimensional algebra cannot carry J")
    rep = spec.report
    if not rep.integrable:
        raise StructureError("J is not integrable: " + "; ".join(rep.messages(spec.basis_names)))
    dirs = _real_directions(spec)
    holo, anti = [], []
    for k in dirs:
        x = spec.basis_vector(k)
        Jx = spec.J(x)
        holo.append(tuple((a - I * b) * HALF for a, b in zip(x, Jx)))
        anti.append(tuple((a + I * b) * HALF for a, b in zip(x, Jx)))
    frame = [list(v) for v in holo + anti]
    # columns of `frame^T` are frame vectors; rows of its inverse are the dual covectors
    cof = linalg.inverse(linalg.transpose(frame))
    n = len(dirs)
    return ComplexSplitting(
        n=n,
        real_directions=tuple(dirs),
        holo=tuple(holo),
        antiholo=tuple(anti),
        holo_dual=tuple(tuple(r) for r in cof[:n]),
        antiholo_dual=tuple(tuple(r) for r in cof[n:]),
    )
