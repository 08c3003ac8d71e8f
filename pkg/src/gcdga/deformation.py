"""Deformations by sections of wedge^2 L: Maurer-Cartan, compatible pairs,
the integrability series, type decomposition and B-field transforms.

All identities are checked on generators and generator pairs. Each one is
linear in its arguments and of derivation type, so by the Leibniz rule the
generator checks are equivalent to the identities on all of wedge L.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from math import comb, factorial
from typing import Sequence

from . import linalg
from .exterior import Multivector, contract, wedge
from .gerstenhaber import (
    Endomorphism,
    GCAContext,
    GradedBracketAlgebra,
    Section,
    courant,
    pairing,
)
from .lie import ce_differential
from .scalars import ZERO, GaussianRational

Witness = tuple[tuple[str, ...], Multivector]


class DegreeError(ValueError):
    pass


class TypeComponentError(ValueError):
    pass


class ClosednessError(ValueError):
    pass


class PreconditionError(ValueError):
    pass


def _require_degree(x: Multivector, degree: int, what: str) -> None:
    d = x.degree()
    if d is not None and d != degree:
        raise DegreeError(f"{what} must be homogeneous of degree {degree}, got {d}")


def _half() -> GaussianRational:
    return GaussianRational(Fraction(1, 2))


# Maurer-Cartan ------------------------------------------------------------------

def maurer_cartan(ctx: GCAContext, gamma: Multivector) -> Multivector:
    """``dbar G + 1/2 [G, G]``."""
    _require_degree(gamma, 2, "gamma")
    return ctx.dbar(gamma) + ctx.schouten(gamma, gamma).scale(_half())


@dataclass(frozen=True)
class DeformedValue:
    value: Multivector
    warning: str | None = None


class DeformedAlgebra(GradedBracketAlgebra):
    """Same bracket as ``ctx``; differential ``dbar + [G, -]``."""

    def __init__(self, ctx: GCAContext, gamma: Multivector):
        _require_degree(gamma, 2, "gamma")
        self.base = ctx
        self.gamma = gamma
        self.rank = ctx.rank
        self.names = ctx.names
        self.bracket_table = ctx.bracket_table
        self.differential_table = tuple(
            ctx.dbar_table[a] + ctx.schouten(gamma, ctx.generator(a)) for a in range(ctx.rank)
        )
        self.mc_residual = maurer_cartan(ctx, gamma)

    @property
    def integrable(self) -> bool:
        return self.mc_residual.is_zero()


@dataclass
class Deformation:
    gamma: Multivector
    mc_residual: Multivector
    deformed_dbar_table: tuple[Multivector, ...]

    @property
    def integrable(self) -> bool:
        return self.mc_residual.is_zero()


def deformation(ctx: GCAContext, gamma: Multivector) -> Deformation:
    alg = DeformedAlgebra(ctx, gamma)
    return Deformation(gamma, alg.mc_residual, alg.differential_table)


def deformed_dbar(ctx: GCAContext, gamma: Multivector, a: Multivector) -> DeformedValue:
    """``dbar a + [G, a]``; carries a warning when ``G`` is not Maurer-Cartan."""
    mc = maurer_cartan(ctx, gamma)
    value = ctx.dbar(a) + ctx.schouten(gamma, a)
    warning = None
    if mc:
        warning = "gamma fails Maurer-Cartan; the deformed operator does not square to zero"
    return DeformedValue(value, warning)


# compatible pairs ---------------------------------------------------------------

def _gens(ctx: GCAContext) -> list[Multivector]:
    return [ctx.generator(a) for a in range(ctx.rank)]


def _spanning_tests(ctx: GCAContext) -> list[tuple[tuple[str, ...], Multivector]]:
    g = _gens(ctx)
    out = [((ctx.names[a],), g[a]) for a in range(ctx.rank)]
    out += [((ctx.names[a], ctx.names[b]), wedge(g[a], g[b])) for a, b in combinations(range(ctx.rank), 2)]
    return out


@dataclass
class CompatiblePairReport:
    closed_residual: list[Witness] = field(default_factory=list)
    eq1_residuals: list[Witness] = field(default_factory=list)
    eq2_residuals: list[Witness] = field(default_factory=list)
    eq3_residuals: list[Witness] = field(default_factory=list)

    @property
    def verdict(self) -> bool:
        return not (self.closed_residual or self.eq1_residuals or self.eq2_residuals or self.eq3_residuals)

    def to_json(self) -> dict:
        def enc(items):
            return [{"arguments": list(k), "residual": v.to_json()} for k, v in items]

        return {
            "verdict": self.verdict,
            "closed": enc(self.closed_residual),
            "intertwining": enc(self.eq1_residuals),
            "bracket_derivation": enc(self.eq2_residuals),
            "wedge_derivation": enc(self.eq3_residuals),
        }


def check_compatible_pair(ctx: GCAContext, gamma1: Multivector, phi: Endomorphism) -> CompatiblePairReport:
    """Closedness of ``G1`` and the three defining identities of a compatible pair:

    ``dbar(phi A) - phi(dbar A) = [G1, A]``,
    ``[phi A, B] + [A, phi B] = phi [A, B]``,
    ``phi(A ^ B) = phi A ^ B + A ^ phi B``.
    """
    _require_degree(gamma1, 2, "gamma1")
    if phi.rank != ctx.rank:
        raise ValueError("endomorphism size does not match the context")
    rep = CompatiblePairReport()
    closed = ctx.dbar(gamma1)
    if closed:
        rep.closed_residual.append((("gamma1",), closed))
    for label, A in _spanning_tests(ctx):
        res = ctx.dbar(phi.apply(A)) - phi.apply(ctx.dbar(A)) - ctx.schouten(gamma1, A)
        if res:
            rep.eq1_residuals.append((label, res))
    g = _gens(ctx)
    for a in range(ctx.rank):
        for b in range(a, ctx.rank):
            A, B = g[a], g[b]
            lhs = ctx.schouten(phi.apply(A), B) + ctx.schouten(A, phi.apply(B))
            res = lhs - phi.apply(ctx.schouten(A, B))
            if res:
                rep.eq2_residuals.append(((ctx.names[a], ctx.names[b]), res))
            res = phi.apply(wedge(A, B)) - wedge(phi.apply(A), B) - wedge(A, phi.apply(B))
            if res:
                rep.eq3_residuals.append(((ctx.names[a], ctx.names[b]), res))
    return rep


def is_central(ctx: GCAContext, x: Multivector) -> bool:
    """``[x, g] = 0`` for every generator (hence for all of wedge L by Leibniz)."""
    return all(ctx.schouten(x, g).is_zero() for g in _gens(ctx))


# the integrability series -------------------------------------------------------

@dataclass
class SeriesReport:
    order: int
    gamma_coefficients: list[Multivector]
    phi_coefficients: list[Endomorphism]
    mc_failures: dict[int, list[Witness]] = field(default_factory=dict)
    endo_failures: dict[int, list[Witness]] = field(default_factory=dict)
    intertwine_failures: dict[int, list[Witness]] = field(default_factory=dict)
    mc_series_residuals: dict[int, Multivector] = field(default_factory=dict)
    terminates: bool = False

    @property
    def first_failure(self) -> int | None:
        bad = [n for d in (self.mc_failures, self.endo_failures, self.intertwine_failures) for n, v in d.items() if v]
        bad += [n for n, v in self.mc_series_residuals.items() if v]
        return min(bad) if bad else None

    @property
    def ok(self) -> bool:
        return self.first_failure is None

    def to_json(self) -> dict:
        def enc(d):
            return {str(n): [{"arguments": list(k), "residual": v.to_json()} for k, v in items] for n, items in d.items() if items}

        return {
            "order": self.order,
            "ok": self.ok,
            "first_failure": self.first_failure,
            "terminates": self.terminates,
            "gamma_coefficients": [g.to_json() for g in self.gamma_coefficients],
            "phi_coefficients": [p.to_json() for p in self.phi_coefficients],
            "mc": enc(self.mc_failures),
            "endo": enc(self.endo_failures),
            "intertwine": enc(self.intertwine_failures),
            "mc_series": {str(n): v.to_json() for n, v in self.mc_series_residuals.items() if v},
        }


def gamma_series(phi: Endomorphism, gamma1: Multivector, order: int) -> list[Multivector]:
    """Coefficients of ``t^0 .. t^order`` in ``sum (-1)^(n-1) t^n / n! phi^(n-1) G1``."""
    out = [Multivector(gamma1.ambient_dim)]
    power = gamma1
    for n in range(1, order + 1):
        c = GaussianRational(Fraction((-1) ** (n - 1), factorial(n)))
        out.append(power.scale(c))
        power = phi.apply(power)
    return out


def phi_series(phi: Endomorphism, order: int) -> list[Endomorphism]:
    """Matrices ``phi^n / n!`` for ``n = 0 .. order``; on wedge L the sum acts multiplicatively.

    The identity term is included so that ``Phi(0)`` is the identity map.
    """
    out = [Endomorphism.identity(phi.rank)]
    power = Endomorphism.identity(phi.rank)
    for n in range(1, order + 1):
        power = power.compose(phi)
        out.append(power.scale(GaussianRational(Fraction(1, factorial(n)))))
    return out


def integrability_series(ctx: GCAContext, gamma1: Multivector, phi: Endomorphism, order: int = 4,
                         require_compatible: bool = True) -> SeriesReport:
    if order < 1:
        raise ValueError("order must be at least 1")
    if require_compatible:
        pre = check_compatible_pair(ctx, gamma1, phi)
        if not pre.verdict:
            raise PreconditionError("integrability series needs a compatible pair")
    gam = gamma_series(phi, gamma1, order + 1)
    terminates = gam[order + 1].is_zero()
    rep = SeriesReport(order, gam[: order + 1], phi_series(phi, order), terminates=terminates)
    pw = [gamma1]  # pw[k] = phi^k G1
    for _ in range(order):
        pw.append(phi.apply(pw[-1]))
    g = _gens(ctx)
    half = _half()
    for n in range(1, order + 1):
        fails = []
        lhs = ctx.dbar(pw[n - 1])
        rhs = Multivector(ctx.rank)
        for k in range(1, n):
            rhs = rhs + ctx.schouten(pw[k - 1], pw[n - k - 1]).scale(comb(n, k))
        res = lhs - rhs.scale(half)
        if res:
            fails.append((("gamma1",), res))
        rep.mc_failures[n] = fails
        fails = []
        for a in range(ctx.rank):
            for b in range(a, ctx.rank):
                A, B = g[a], g[b]
                label = (ctx.names[a], ctx.names[b])
                for op, tag in ((ctx.schouten, "bracket"), (wedge, "wedge")):
                    total = Multivector(ctx.rank)
                    for k in range(0, n + 1):
                        total = total + op(phi.power(k, A), phi.power(n - k, B)).scale(comb(n, k))
                    res = phi.power(n, op(A, B)) - total
                    if res:
                        fails.append((label + (tag,), res))
        rep.endo_failures[n] = fails
        fails = []
        for a in range(ctx.rank):
            A = g[a]
            lhs = ctx.dbar(phi.power(n, A)) - phi.power(n, ctx.dbar(A))
            rhs = Multivector(ctx.rank)
            for k in range(1, n + 1):
                rhs = rhs + ctx.schouten(pw[k - 1], phi.power(n - k, A)).scale(comb(n, k))
            res = lhs - rhs
            if res:
                fails.append(((ctx.names[a],), res))
        rep.intertwine_failures[n] = fails
    # Maurer-Cartan of Gamma(t), coefficient by coefficient; exact for all orders when the series stops
    top = 2 * order if terminates else order
    coeffs = gamma_series(phi, gamma1, top)
    for m in range(1, top + 1):
        total = ctx.dbar(coeffs[m])
        acc = Multivector(ctx.rank)
        for j in range(1, m):
            acc = acc + ctx.schouten(coeffs[j], coeffs[m - j])
        total = total + acc.scale(half)
        rep.mc_series_residuals[m] = total
    return rep


def homomorphism_residuals(ctx: GCAContext, gamma: Multivector, Phi: Endomorphism) -> list[Witness]:
    """Generator-level failures of ``Phi`` as a map ``DGA(dbar_G) -> DGA(dbar)``.

    ``Phi`` acts multiplicatively, so wedge is preserved automatically; the
    bracket and the intertwining ``Phi(dbar_G A) = dbar(Phi A)`` are checked.
    """
    out = []
    g = _gens(ctx)
    for a in range(ctx.rank):
        A = g[a]
        res = Phi.apply_homomorphism(ctx.dbar(A) + ctx.schouten(gamma, A)) - ctx.dbar(Phi.apply_homomorphism(A))
        if res:
            out.append(((ctx.names[a], "intertwine"), res))
        for b in range(a, ctx.rank):
            B = g[b]
            res = Phi.apply_homomorphism(ctx.schouten(A, B)) - ctx.schouten(Phi.apply_homomorphism(A), Phi.apply_homomorphism(B))
            if res:
                out.append(((ctx.names[a], ctx.names[b], "bracket"), res))
    return out


# types --------------------------------------------------------------------------

def type_decompose_gamma(ctx: GCAContext, gamma1: Multivector) -> tuple[Multivector, Multivector, Multivector]:
    """Components in ``wedge^2 h10``, ``h10 (x) h*01`` and ``wedge^2 h*01``."""
    _require_degree(gamma1, 2, "gamma1")
    return ctx.type_part(gamma1, 2, 0), ctx.type_part(gamma1, 1, 1), ctx.type_part(gamma1, 0, 2)


@dataclass
class PoissonReport:
    dbar_residual: Multivector
    self_bracket: Multivector

    @property
    def holomorphic_poisson(self) -> bool:
        return self.dbar_residual.is_zero() and self.self_bracket.is_zero()


def _require_type(ctx: GCAContext, x: Multivector, p: int, q: int, what: str) -> None:
    if any(ctx.type_of(k) != (p, q) for k in x.terms):
        raise TypeComponentError(f"{what} must be of type ({p},{q})")


def holomorphic_poisson_check(ctx: GCAContext, lam: Multivector) -> PoissonReport:
    _require_type(ctx, lam, 2, 0, "lambda")
    return PoissonReport(ctx.dbar(lam), ctx.schouten(lam, lam))


def closedness_split(ctx: GCAContext, lam: Multivector, section: Multivector) -> tuple[Multivector, Multivector, Multivector]:
    """For ``Z + w`` in ``L``: ``([L, Z], dbar Z + [L, w], dbar w)``.

    The three are the type components of ``dbar_L (Z + w)``; all vanish iff it is closed.
    """
    _require_type(ctx, lam, 2, 0, "lambda")
    _require_degree(section, 1, "section")
    Z = ctx.type_part(section, 1, 0)
    w = ctx.type_part(section, 0, 1)
    return ctx.schouten(lam, Z), ctx.dbar(Z) + ctx.schouten(lam, w), ctx.dbar(w)


# B-fields -----------------------------------------------------------------------

def b_field_transform(ctx: GCAContext, two_form: Multivector, section: Section) -> Section:
    """``X + a -> X + a + i_X B`` for a closed 2-form ``B`` on the real basis."""
    spec = ctx.spec
    if two_form.ambient_dim != spec.dim:
        raise ValueError("two-form must live on the algebra's dual")
    _require_degree(two_form, 2, "B")
    if ce_differential(spec, two_form):
        raise ClosednessError("B-field transform needs a closed 2-form")
    return apply_b_field(two_form, section)


def apply_b_field(two_form: Multivector, section: Section) -> Section:
    X, a = section
    shift = contract(Multivector.from_vector(X), two_form) if any(not c.is_zero() for c in X) else None
    alpha = list(a)
    if shift is not None:
        for k, c in shift.terms.items():
            alpha[k[0]] = alpha[k[0]] + c
    return list(X), alpha


def b_field_residuals(ctx: GCAContext, two_form: Multivector, sections: Sequence[Section]) -> list[tuple[int, int, str]]:
    """Pairs on which ``e^B`` fails to preserve the pairing or the Courant bracket."""
    spec = ctx.spec
    if sections:
        b_field_transform(ctx, two_form, sections[0])
    moved = [apply_b_field(two_form, u) for u in sections]
    out = []
    for i, u in enumerate(sections):
        for j in range(i, len(sections)):
            v = sections[j]
            if pairing(moved[i], moved[j]) != pairing(u, v):
                out.append((i, j, "pairing"))
            if apply_b_field(two_form, courant(spec, u, v)) != courant(spec, moved[i], moved[j]):
                out.append((i, j, "bracket"))
    return out


def real_sections(dim: int) -> list[Section]:
    """Basis vectors then basis covectors of the doubled real space."""
    zero = [ZERO] * dim
    out = []
    for k in range(dim):
        v = list(zero)
        v[k] = GaussianRational(1)
        out.append((v, list(zero)))
    for k in range(dim):
        v = list(zero)
        v[k] = GaussianRational(1)
        out.append((list(zero), v))
    return out


def deformed_lbar_sections(ctx: GCAContext, lam: Multivector) -> list[Section]:
    """Spanning set ``l + i_l conj(L)`` of the deformed bundle ``L_{conj L}``."""
    lam_bar = ctx.conjugate(lam)
    out = []
    for a in range(ctx.rank):
        u = ctx.L_sections[a]
        shift = contract(ctx.generator(a), lam_bar)
        s = ctx.Lbar_section(shift.vector()) if shift else (None, None)
        if shift:
            out.append(([x + y for x, y in zip(u[0], s[0])], [x + y for x, y in zip(u[1], s[1])]))
        else:
            out.append((list(u[0]), list(u[1])))
    return out


def graph_sections(spec_dim: int, two_form: Multivector, coefficient: GaussianRational) -> list[Section]:
    """``V + c i_V B`` over the complexified basis vectors ``V``."""
    out = []
    for X, _ in real_sections(spec_dim)[:spec_dim]:
        shift = contract(Multivector.from_vector(X), two_form)
        alpha = [ZERO] * spec_dim
        for k, c in shift.terms.items():
            alpha[k[0]] = coefficient * c
        out.append((X, alpha))
    return out


def same_subspace(a: Sequence[Section], b: Sequence[Section]) -> bool:
    rows_a = [list(X) + list(al) for X, al in a]
    rows_b = [list(X) + list(al) for X, al in b]
    return linalg.same_span(rows_a, rows_b)
