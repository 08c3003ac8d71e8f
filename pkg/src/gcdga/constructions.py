"""Semi-direct products from flat torsion-free symplectic connections.

For ``(g, omega)`` and ``gamma: g -> End(V)`` with ``V`` the underlying space
of ``g``, the algebra ``h = g x V`` has basis ``e_1..e_m, v_1..v_m`` with
``J e_i = v_i``. The forms ``Omega_1..Omega_4`` and ``Omega_c`` are built on
the dual basis, and ``Lambda = Omega_c^{-1}`` lives in ``wedge^2 L``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field, replace
from fractions import Fraction
from itertools import combinations, product
from pathlib import Path
from typing import Mapping, Sequence

from . import linalg
from .cohomology import (
    build_complex,
    cohomology,
    derived_center_diagnostic,
    induced_map,
    symplectic_dga,
)
from .deformation import (
    DeformedAlgebra,
    PreconditionError,
    b_field_residuals,
    check_compatible_pair,
    deformed_lbar_sections,
    graph_sections,
    holomorphic_poisson_check,
    real_sections,
    same_subspace,
)
from .exterior import Multivector, evaluate_form, form_from_bilinear
from .gerstenhaber import (
    Endomorphism,
    GCAContext,
    bivector_from_endomorphism,
    compile,
    complex_vector_names,
)
from .lie import LieAlgebraSpec, SpecError, ValidationError, ce_differential
from .scalars import I, ONE, ZERO, GaussianRational

Matrix = linalg.Matrix


# input data ---------------------------------------------------------------------

@dataclass(frozen=True)
class SymplecticConnectionData:
    """``gamma[i][r][c]`` is the coefficient of ``e_r`` in ``gamma(e_i) e_c``;
    ``metric[k][l] = g(e_k, e_l)``."""

    g_spec: LieAlgebraSpec
    omega: Multivector
    gamma: tuple[tuple[tuple[GaussianRational, ...], ...], ...]
    metric: tuple[tuple[GaussianRational, ...], ...] | None = None
    v_names: tuple[str, ...] | None = None

    def __post_init__(self):
        m = self.g_spec.dim
        gam = tuple(tuple(tuple(GaussianRational.coerce(x) for x in row) for row in mat) for mat in self.gamma)
        if len(gam) != m or any(len(mat) != m or any(len(r) != m for r in mat) for mat in gam):
            raise SpecError("gamma must be m matrices of size m x m")
        object.__setattr__(self, "gamma", gam)
        if self.omega.ambient_dim != m:
            raise SpecError("omega must be a 2-form on g")
        if self.metric is not None:
            g = tuple(tuple(GaussianRational.coerce(x) for x in row) for row in self.metric)
            if len(g) != m or any(len(r) != m for r in g):
                raise SpecError("metric must be m x m")
            object.__setattr__(self, "metric", g)
        if self.v_names is None:
            object.__setattr__(self, "v_names", tuple(_v_name(n, i) for i, n in enumerate(self.g_spec.basis_names)))

    @property
    def m(self) -> int:
        return self.g_spec.dim

    def gamma_apply(self, x: Sequence[GaussianRational], y: Sequence[GaussianRational]) -> list[GaussianRational]:
        """``gamma(x) y`` for coefficient vectors on ``e_1..e_m``."""
        m = self.m
        out = [ZERO] * m
        for i in range(m):
            if x[i].is_zero():
                continue
            mat = self.gamma[i]
            for c in range(m):
                if y[c].is_zero():
                    continue
                f = x[i] * y[c]
                for r in range(m):
                    if not mat[r][c].is_zero():
                        out[r] = out[r] + f * mat[r][c]
        return out

    def gamma_matrix(self, x: Sequence[GaussianRational]) -> Matrix:
        m = self.m
        out = linalg.zeros(m, m)
        for i in range(m):
            if not x[i].is_zero():
                for r in range(m):
                    for c in range(m):
                        out[r][c] = out[r][c] + x[i] * self.gamma[i][r][c]
        return out

    def omega_value(self, x, y) -> GaussianRational:
        return evaluate_form(self.omega, [x, y])

    def metric_value(self, x, y) -> GaussianRational:
        if self.metric is None:
            raise DataError("no metric supplied")
        return _bilinear(self.metric, x, y)

    def is_zero_connection(self) -> bool:
        return all(x.is_zero() for mat in self.gamma for row in mat for x in row)

    def rescaled_metric(self, factor) -> "SymplecticConnectionData":
        """Same data with ``g`` multiplied by ``factor`` (e.g. ``-4 mu``)."""
        if self.metric is None:
            raise DataError("no metric supplied")
        f = GaussianRational.coerce(factor)
        return replace(self, metric=tuple(tuple(f * x for x in row) for row in self.metric))

    # serialization ----------------------------------------------------------
    def to_json(self) -> dict:
        data = self.g_spec.to_json()
        data["omega"] = self.omega.to_json()
        data["gamma"] = [
            [i, c, [[r, self.gamma[i][r][c].to_wire()] for r in range(self.m) if not self.gamma[i][r][c].is_zero()]]
            for i in range(self.m)
            for c in range(self.m)
            if any(not self.gamma[i][r][c].is_zero() for r in range(self.m))
        ]
        if self.metric is not None:
            data["metric"] = [[x.to_wire() for x in row] for row in self.metric]
        data["v_basis"] = list(self.v_names)
        return data

    @classmethod
    def from_json(cls, data: Mapping) -> "SymplecticConnectionData":
        g_spec = LieAlgebraSpec.from_json(data)
        m = g_spec.dim
        try:
            omega = Multivector.from_json(m, data["omega"])
        except KeyError:
            raise SpecError("connection data needs an 'omega' block") from None
        except (TypeError, ValueError) as exc:
            raise SpecError(f"omega: {exc}") from exc
        gamma = [[[ZERO] * m for _ in range(m)] for _ in range(m)]
        for pos, entry in enumerate(data.get("gamma", [])):
            try:
                i, c, col = entry
                for r, val in col:
                    gamma[int(i)][int(r)][int(c)] = gamma[int(i)][int(r)][int(c)] + GaussianRational.coerce(val)
            except (TypeError, ValueError, IndexError) as exc:
                raise SpecError(f"gamma[{pos}]: {exc}") from exc
        metric = data.get("metric")
        if metric is not None:
            try:
                metric = [[GaussianRational.coerce(x) for x in row] for row in metric]
            except (TypeError, ValueError) as exc:
                raise SpecError(f"metric: {exc}") from exc
        v_names = data.get("v_basis")
        return cls(g_spec, omega, gamma, metric, tuple(v_names) if v_names else None)

    @classmethod
    def load(cls, path) -> "SymplecticConnectionData":
        return cls.from_json(json.loads(Path(path).read_text()))


class DataError(ValueError):
    pass


def _v_name(name: str, i: int) -> str:
    if name and name[0] == "e" and name[1:].isdigit():
        return "v" + name[1:]
    return f"v{i + 1}"


def _bilinear(mat, x, y) -> GaussianRational:
    s = ZERO
    for k, xk in enumerate(x):
        if xk.is_zero():
            continue
        for l, yl in enumerate(y):
            if not yl.is_zero() and not mat[k][l].is_zero():
                s = s + xk * mat[k][l] * yl
    return s


def _unit(m: int, i: int) -> list[GaussianRational]:
    return [ONE if k == i else ZERO for k in range(m)]


# validation ---------------------------------------------------------------------

@dataclass
class ConnectionReport:
    algebra_valid: bool = True
    torsion: list[tuple[int, int]] = field(default_factory=list)
    symplectic: list[tuple[int, int, int]] = field(default_factory=list)
    flat: list[tuple[int, int]] = field(default_factory=list)
    omega_nondegenerate: bool = True
    omega_closed: bool = True
    metric_ok: bool | None = None

    @property
    def valid(self) -> bool:
        return (
            self.algebra_valid
            and not (self.torsion or self.symplectic or self.flat)
            and self.omega_nondegenerate
            and self.omega_closed
            and self.metric_ok is not False
        )

    def to_json(self) -> dict:
        return {
            "valid": self.valid,
            "algebra_valid": self.algebra_valid,
            "torsion_free_violations": [list(p) for p in self.torsion],
            "symplectic_violations": [list(p) for p in self.symplectic],
            "flatness_violations": [list(p) for p in self.flat],
            "omega_nondegenerate": self.omega_nondegenerate,
            "omega_closed": self.omega_closed,
            "metric_ok": self.metric_ok,
        }


def validate_connection(data: SymplecticConnectionData) -> ConnectionReport:
    rep = ConnectionReport()
    spec = data.g_spec
    rep.algebra_valid = spec.report.valid
    m = data.m
    E = [_unit(m, i) for i in range(m)]
    for i, j in product(range(m), repeat=2):
        lhs = [a - b for a, b in zip(data.gamma_apply(E[i], E[j]), data.gamma_apply(E[j], E[i]))]
        if i < j and lhs != spec.bracket(E[i], E[j]):
            rep.torsion.append((i, j))
        if i == j and any(not c.is_zero() for c in lhs):
            rep.torsion.append((i, j))
    for i, j, k in product(range(m), repeat=3):
        val = data.omega_value(data.gamma_apply(E[i], E[j]), E[k]) + data.omega_value(E[j], data.gamma_apply(E[i], E[k]))
        if not val.is_zero():
            rep.symplectic.append((i, j, k))
    for i, j in combinations(range(m), 2):
        lhs = data.gamma_matrix(spec.bracket(E[i], E[j]))
        gi, gj = data.gamma_matrix(E[i]), data.gamma_matrix(E[j])
        comm = [[a - b for a, b in zip(r1, r2)] for r1, r2 in zip(linalg.matmul(gi, gj), linalg.matmul(gj, gi))]
        if lhs != comm:
            rep.flat.append((i, j))
    W = _form_matrix(data.omega, m)
    rep.omega_nondegenerate = not linalg.determinant(W).is_zero()
    if rep.algebra_valid:
        rep.omega_closed = ce_differential(spec, data.omega).is_zero()
    if data.metric is not None:
        g = [list(r) for r in data.metric]
        rep.metric_ok = g == linalg.transpose(g) and not linalg.determinant(g).is_zero()
    return rep


def _form_matrix(form: Multivector, n: int) -> Matrix:
    """``M[k][l] = form(b_k, b_l)``."""
    M = linalg.zeros(n, n)
    for (p, q), c in form.part(2).terms.items():
        M[p][q] = M[p][q] + c
        M[q][p] = M[q][p] - c
    return M


# the semi-direct product --------------------------------------------------------

@dataclass(frozen=True, eq=False)
class SemidirectPackage:
    data: SymplecticConnectionData
    h_spec: LieAlgebraSpec
    ctx: GCAContext
    Omega1: Multivector
    Omega2: Multivector
    Omega3: Multivector
    Omega4: Multivector | None
    Delta: tuple[tuple[GaussianRational, ...], ...] | None
    Omega_c: Multivector
    Lambda: Multivector
    jmath: tuple[tuple[GaussianRational, ...], ...] | None

    @property
    def m(self) -> int:
        return self.data.m

    def split_vector(self, v: Sequence[GaussianRational]) -> tuple[list, list]:
        return list(v[: self.m]), list(v[self.m:])

    def join(self, x: Sequence[GaussianRational], u: Sequence[GaussianRational]) -> list[GaussianRational]:
        return list(x) + list(u)

    def holo(self, a: Sequence[GaussianRational], sign: int = -1) -> list[GaussianRational]:
        """``(a, sign * i * a)``: ``sign = -1`` gives ``h^{1,0}``, ``+1`` gives ``h^{0,1}``."""
        s = I if sign > 0 else -I
        return self.join(a, [s * x for x in a])


def semidirect_spec(data: SymplecticConnectionData) -> LieAlgebraSpec:
    m = data.m
    g = data.g_spec
    names = tuple(g.basis_names) + tuple(data.v_names)
    brackets: dict[tuple[int, int], dict[int, GaussianRational]] = {}
    for (i, j), row in g.brackets.items():
        brackets[(i, j)] = dict(row)
    for i in range(m):
        for c in range(m):
            col = {m + r: data.gamma[i][r][c] for r in range(m) if not data.gamma[i][r][c].is_zero()}
            if col:
                brackets[(i, m + c)] = col
    J = linalg.zeros(2 * m, 2 * m)
    for i in range(m):
        J[m + i][i] = ONE
        J[i][m + i] = -ONE
    real = g.real and all(x.is_real() for mat in data.gamma for row in mat for x in row)
    return LieAlgebraSpec(2 * m, names, brackets, J, real)


def _h_form(m: int, value) -> Multivector:
    def b(p: int, q: int):
        x = [ZERO] * m
        u = [ZERO] * m
        y = [ZERO] * m
        v = [ZERO] * m
        (x if p < m else u)[p % m] = ONE
        (y if q < m else v)[q % m] = ONE
        return value(x, u, y, v)

    return form_from_bilinear(2 * m, b)


def jmath_matrix(data: SymplecticConnectionData) -> Matrix:
    """``j`` with ``g(j a, b) = omega(a, b)``; column ``a`` is ``j e_a``."""
    G = [list(r) for r in data.metric]
    W = _form_matrix(data.omega, data.m)
    return linalg.matmul(linalg.inverse(G), linalg.transpose(W))


def build_semidirect(data: SymplecticConnectionData) -> SemidirectPackage:
    rep = validate_connection(data)
    if not rep.valid:
        raise ValidationError("invalid connection data: " + json.dumps(rep.to_json()), rep)
    m = data.m
    h = semidirect_spec(data)
    ctx = compile(h)
    w = data.omega_value
    O1 = _h_form(m, lambda x, u, y, v: -w(x, v) - w(u, y))
    O2 = _h_form(m, lambda x, u, y, v: w(x, y) - w(u, v))
    O3 = _h_form(m, lambda x, u, y, v: w(x, y) + w(u, v))
    O4 = Delta = jm = None
    if data.metric is not None:
        g = data.metric_value
        O4 = _h_form(m, lambda x, u, y, v: g(x, v) - g(y, u))
        Delta = tuple(
            tuple(
                (data.metric[p % m][q % m] if (p < m) == (q < m) else ZERO)
                for q in range(2 * m)
            )
            for p in range(2 * m)
        )
        jm = tuple(tuple(r) for r in jmath_matrix(data))
    Oc = O1 + O2.scale(I)
    Lam = holomorphic_inverse(ctx, Oc)
    return SemidirectPackage(data, h, ctx, O1, O2, O3, O4, Delta, Oc, Lam, jm)


def holomorphic_inverse(ctx: GCAContext, form: Multivector) -> Multivector:
    """The bivector ``P`` in ``wedge^2 h^{1,0}`` with ``i_alpha P = form^{-1}(alpha)``.

    ``form`` maps ``V -> i_V form`` from ``h^{1,0}`` onto ``h^{*(1,0)}``.
    """
    sp = ctx.splitting
    n = sp.n
    M = [[evaluate_form(form, [sp.holo[a], sp.holo[b]]) for a in range(n)] for b in range(n)]
    try:
        N = linalg.inverse(M)
    except ZeroDivisionError:
        raise ValueError("form is degenerate on h^{1,0}") from None
    return Multivector(ctx.rank, {(b, c): N[c][b] for b, c in combinations(range(n), 2)})


def mixed_inverse(ctx: GCAContext, form: Multivector) -> Endomorphism:
    """Endomorphism of ``L``: zero on ``h^{1,0}``, inverse of ``V -> i_V form`` on ``h^{*(0,1)}``."""
    sp = ctx.splitting
    n = sp.n
    # M[b][a]: coefficient of zbar^b in i_{z_a} form
    M = [[evaluate_form(form, [sp.holo[a], sp.antiholo[b]]) for a in range(n)] for b in range(n)]
    try:
        N = linalg.inverse(M)
    except ZeroDivisionError:
        raise ValueError("form is degenerate as a map h^{1,0} -> h^{*(0,1)}") from None
    r = 2 * n
    out = [[ZERO] * r for _ in range(r)]
    for a in range(n):
        for b in range(n):
            out[a][n + b] = N[a][b]
    return Endomorphism(tuple(tuple(row) for row in out))


# pseudo-Kahler ------------------------------------------------------------------

@dataclass
class PseudoKahlerReport:
    dOmega4: Multivector
    criterion_violations: list[tuple[int, int, int]]

    @property
    def closed(self) -> bool:
        return self.dOmega4.is_zero()

    @property
    def criterion_holds(self) -> bool:
        return not self.criterion_violations

    @property
    def agree(self) -> bool:
        return self.closed == self.criterion_holds

    @property
    def verdict(self) -> bool:
        return self.closed and self.criterion_holds


def kahler_criterion(data: SymplecticConnectionData, x, y, w) -> GaussianRational:
    g, ga = data.metric_value, data.gamma_apply
    return g(ga(x, y), w) - g(ga(y, x), w) - g(x, ga(y, w)) + g(y, ga(x, w))


def pseudo_kahler_check(pkg: SemidirectPackage) -> PseudoKahlerReport:
    if pkg.Omega4 is None:
        raise DataError("pseudo-Kahler test needs a metric")
    d4 = ce_differential(pkg.h_spec, pkg.Omega4)
    m = pkg.m
    E = [_unit(m, i) for i in range(m)]
    bad = [(i, j, k) for i, j, k in product(range(m), repeat=3) if not kahler_criterion(pkg.data, E[i], E[j], E[k]).is_zero()]
    return PseudoKahlerReport(d4, bad)


# the mu constraint --------------------------------------------------------------

@dataclass
class MuSolution:
    mu: GaussianRational | None
    phi: Endomorphism
    central: bool = False

    def phi_bivector(self, ctx: GCAContext) -> Multivector:
        return bivector_from_endomorphism(ctx, self.phi)


def _jmath_apply(pkg: SemidirectPackage, a) -> list[GaussianRational]:
    return linalg.matvec([list(r) for r in pkg.jmath], a)


def mu_constraint(pkg: SemidirectPackage) -> list[tuple[int, int, list[GaussianRational], list[GaussianRational]]]:
    """Per basis pair ``(a, b)``: ``j(gamma(a) b)`` and ``gamma(j a)(j b)``."""
    m = pkg.m
    E = [_unit(m, i) for i in range(m)]
    data = pkg.data
    out = []
    for a, b in product(range(m), repeat=2):
        lhs = _jmath_apply(pkg, data.gamma_apply(E[a], E[b]))
        rhs = data.gamma_apply(_jmath_apply(pkg, E[a]), _jmath_apply(pkg, E[b]))
        out.append((a, b, lhs, rhs))
    return out


def assemble_phi(pkg: SemidirectPackage, mu) -> Endomorphism:
    """``-i/4 Omega_3^{-1} + mu Omega_4^{-1}``."""
    mu = GaussianRational.coerce(mu)
    p3 = mixed_inverse(pkg.ctx, pkg.Omega3).scale(-I / 4)
    return p3 + mixed_inverse(pkg.ctx, pkg.Omega4).scale(mu)


def mu_constraint_solve(pkg: SemidirectPackage, require_pseudo_kahler: bool = True) -> MuSolution | None:
    """Solve ``j(gamma(a) b) = -4 mu gamma(j a)(j b)`` for one real ``mu`` over all pairs."""
    if pkg.Omega4 is None:
        raise DataError("the mu constraint needs a metric")
    if require_pseudo_kahler and not pseudo_kahler_check(pkg).verdict:
        raise PreconditionError("the mu constraint needs a pseudo-Kahler pair")
    if pkg.data.is_zero_connection():
        return MuSolution(None, Endomorphism.zero(pkg.ctx.rank), central=True)
    mu = None
    for _, _, lhs, rhs in mu_constraint(pkg):
        for l, r in zip(lhs, rhs):
            r4 = r * -4
            if r4.is_zero():
                if not l.is_zero():
                    return None
                continue
            cand = l / r4
            if mu is None:
                mu = cand
            elif cand != mu:
                return None
    if mu is None or not mu.is_real():
        return None
    return MuSolution(mu, assemble_phi(pkg, mu))


def normalize_metric(data: SymplecticConnectionData, mu) -> SymplecticConnectionData:
    """Multiply ``g`` by ``-4 mu`` so that the constraint reads ``j(gamma(a) b) = gamma(j a)(j b)``."""
    return data.rescaled_metric(GaussianRational.coerce(mu) * -4)


# the structural lemmas ----------------------------------------------------------

@dataclass
class LemmaReport:
    failures: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures


def lambda_lemma(pkg: SemidirectPackage) -> LemmaReport:
    """``[L, L] = 0``, ``dbar L = 0`` and ``L(a, b) = -Omega_c(Omega_c^{-1} a, Omega_c^{-1} b)``."""
    ctx, lam = pkg.ctx, pkg.Lambda
    rep = LemmaReport()
    if ctx.schouten(lam, lam):
        rep.failures.append("[Lambda, Lambda] != 0")
    if ctx.dbar(lam):
        rep.failures.append("dbar Lambda != 0")
    n = ctx.n
    sp = ctx.splitting

    def to_vec(x: Multivector) -> list[GaussianRational]:
        v = [ZERO] * pkg.h_spec.dim
        for (k,), c in x.terms.items():
            if k >= n:
                raise AssertionError("inverse of Omega_c left h^{1,0}")
            v = [p + c * q for p, q in zip(v, sp.holo[k])]
        return v

    for a, b in product(range(n), repeat=2):
        lhs = ctx.evaluate(lam, (a, b))
        va = to_vec(ctx.contract_dual(Multivector.generator(ctx.rank, a), lam))
        vb = to_vec(ctx.contract_dual(Multivector.generator(ctx.rank, b), lam))
        if lhs != -evaluate_form(pkg.Omega_c, [va, vb]):
            rep.failures.append(f"Lambda(z^{a + 1}, z^{b + 1}) identity")
    return rep


def _contract_vec(form: Multivector, v) -> list[GaussianRational]:
    from .exterior import contract

    out = [ZERO] * form.ambient_dim
    for (k,), c in contract(Multivector.from_vector(v), form).part(1).terms.items():
        out[k] = c
    return out


def technical_lemma(pkg: SemidirectPackage) -> LemmaReport:
    """The five frame identities relating ``Omega_3``, ``Omega_4``, ``Omega_c`` and the bracket."""
    if pkg.Omega4 is None:
        raise DataError("these identities need a metric")
    rep = LemmaReport()
    m = pkg.m
    spec = pkg.h_spec
    data = pkg.data
    E = [_unit(m, i) for i in range(m)]
    half = GaussianRational(Fraction(1, 2))

    def proj(w, sign):
        Jw = spec.J(w)
        s = I if sign > 0 else -I
        return [(x + s * y) * half for x, y in zip(w, Jw)]

    for a in range(m):
        ea = E[a]
        ja = _jmath_apply(pkg, ea)
        lhs = _contract_vec(pkg.Omega3, pkg.holo(ea, -1))
        rhs = [-I * c for c in _contract_vec(pkg.Omega4, pkg.holo(ja, -1))]
        if lhs != rhs:
            rep.failures.append(f"Omega_3 vs Omega_4 on h10 at a={a}")
        lhs = _contract_vec(pkg.Omega3, pkg.holo(ea, +1))
        rhs = [I * c for c in _contract_vec(pkg.Omega4, pkg.holo(ja, +1))]
        if lhs != rhs:
            rep.failures.append(f"Omega_3 vs Omega_4 on h01 at a={a}")
        lhs = _contract_vec(pkg.Omega_c, pkg.holo(ea, -1))
        rhs = [c * -2 for c in _contract_vec(pkg.Omega4, pkg.holo(ja, +1))]
        if lhs != rhs:
            rep.failures.append(f"Omega_c vs Omega_4 at a={a}")
        for b in range(m):
            eb = E[b]
            br = spec.bracket(pkg.holo(ea, -1), pkg.holo(eb, +1))
            gba = data.gamma_apply(eb, ea)
            if proj(br, -1) != pkg.join([-x for x in gba], [I * x for x in gba]):
                rep.failures.append(f"(1,0) bracket component at ({a},{b})")
            gab = data.gamma_apply(ea, eb)
            if proj(br, +1) != pkg.join(gab, [I * x for x in gab]):
                rep.failures.append(f"(0,1) bracket component at ({a},{b})")
    return rep


# B-field identification ---------------------------------------------------------

@dataclass
class BFieldReport:
    automorphism_failures: list[tuple[int, int, str]]
    graph_matches: bool

    @property
    def ok(self) -> bool:
        return not self.automorphism_failures and self.graph_matches


def b_field_identification(pkg: SemidirectPackage) -> BFieldReport:
    """``e^{Omega_1}`` is a Courant automorphism, and ``L_{conj Lambda}`` equals
    ``e^{Omega_1}`` applied to the graph ``{V - i i_V Omega_2}``."""
    ctx = pkg.ctx
    d = pkg.h_spec.dim
    secs = real_sections(d) + list(ctx.L_sections)
    fails = b_field_residuals(ctx, pkg.Omega1, secs)
    from .deformation import b_field_transform

    graph = [b_field_transform(ctx, pkg.Omega1, s) for s in graph_sections(d, pkg.Omega2, -I)]
    deformed = deformed_lbar_sections(ctx, pkg.Lambda)
    return BFieldReport(fails, same_subspace(graph, deformed))


# the full chain -----------------------------------------------------------------

@dataclass
class Stage:
    name: str
    passed: bool
    detail: dict = field(default_factory=dict)


@dataclass
class PipelineReport:
    stages: list[Stage] = field(default_factory=list)
    verdict: str = "undetermined"
    package: SemidirectPackage | None = None
    solution: MuSolution | None = None

    def stage(self, name: str) -> Stage | None:
        return next((s for s in self.stages if s.name == name), None)

    def to_json(self) -> dict:
        return {
            "verdict": self.verdict,
            "stages": [{"name": s.name, "passed": s.passed, **s.detail} for s in self.stages],
        }


def weak_mirror_pipeline(data: SymplecticConnectionData) -> PipelineReport:
    rep = PipelineReport()
    crep = validate_connection(data)
    rep.stages.append(Stage("validate", crep.valid, crep.to_json()))
    if not crep.valid:
        rep.verdict = "invalid input"
        return rep
    pkg = build_semidirect(data)
    rep.package = pkg
    ctx = pkg.ctx
    poisson = holomorphic_poisson_check(ctx, pkg.Lambda)
    rep.stages.append(
        Stage(
            "build",
            poisson.holomorphic_poisson and pkg.h_spec.report.integrable,
            {"Lambda": ctx.format(pkg.Lambda), "holomorphic_poisson": poisson.holomorphic_poisson},
        )
    )
    if not data.is_zero_connection() and pkg.Omega4 is None:
        rep.stages.append(Stage("pseudo-kahler", False, {"reason": "no metric supplied"}))
        rep.verdict = "undetermined"
        return rep
    if pkg.Omega4 is not None:
        pk = pseudo_kahler_check(pkg)
        rep.stages.append(
            Stage(
                "pseudo-kahler",
                pk.verdict,
                {"dOmega4": pk.dOmega4.format(_dual(pkg.h_spec)), "criterion_agrees": pk.agree},
            )
        )
        if not pk.verdict:
            rep.verdict = _obstruction_verdict(rep, pkg)
            return rep
    sol = mu_constraint_solve(pkg) if pkg.Omega4 is not None else MuSolution(None, Endomorphism.zero(ctx.rank), True)
    rep.solution = sol
    if sol is None:
        rep.stages.append(Stage("mu", False, {"reason": "no single real mu satisfies the constraint"}))
        rep.verdict = _obstruction_verdict(rep, pkg)
        return rep
    rep.stages.append(
        Stage(
            "mu",
            True,
            {"mu": str(sol.mu) if sol.mu is not None else None, "central": sol.central,
             "phi": sol.phi_bivector(ctx).format(complex_vector_names(ctx.n))},
        )
    )
    cp = check_compatible_pair(ctx, pkg.Lambda, sol.phi)
    rep.stages.append(Stage("compatible", cp.verdict, cp.to_json()))
    if not cp.verdict:
        rep.verdict = "not compatible"
        return rep
    if not sol.phi.compose(sol.phi).is_zero():
        raise AssertionError("phi of this block type must square to zero")
    Phi = Endomorphism.identity(ctx.rank) + sol.phi
    iso = induced_map(build_complex(DeformedAlgebra(ctx, pkg.Lambda)), build_complex(ctx), Phi)
    rep.stages.append(Stage("isomorphism", iso.isomorphism, {"dimensions": iso.target_dims}))
    bf = b_field_identification(pkg)
    rep.stages.append(Stage("b-field", bf.ok, {"graph_matches": bf.graph_matches}))
    sym = symplectic_dga(pkg.h_spec, pkg.Omega2)
    sym_dims = cohomology(build_complex(sym)).dimensions
    diag = derived_center_diagnostic(ctx, sym)
    same = sym_dims == iso.target_dims and not diag.obstructed
    rep.stages.append(Stage("symplectic", same, {"dimensions": sym_dims, "diagnostic": diag.verdict}))
    rep.verdict = "isomorphic" if all(s.passed for s in rep.stages) else "inconsistent"
    return rep


def _dual(spec: LieAlgebraSpec):
    from .cohomology import dual_names

    return dual_names(spec.basis_names)


def _obstruction_verdict(rep: PipelineReport, pkg: SemidirectPackage) -> str:
    sym = symplectic_dga(pkg.h_spec, pkg.Omega2)
    diag = derived_center_diagnostic(pkg.ctx, sym)
    rep.stages.append(
        Stage(
            "diagnostic",
            diag.obstructed,
            {
                "verdict": diag.verdict,
                "complex_side": diag.side_a.to_json(pkg.ctx.names),
                "symplectic_side": diag.side_b.to_json(sym.names),
            },
        )
    )
    return diag.verdict
