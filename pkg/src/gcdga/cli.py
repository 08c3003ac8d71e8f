"""Command-line driver.

Exit codes: 0 success, 1 internal error, 2 validation failure, 3 negative
verdict, 4 parse error, 5 structural precondition, 6 unknown fixture.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import Callable

from . import fixtures
from .cohomology import build_complex, cohomology, derived_center_diagnostic, dual_names, symplectic_dga
from .constructions import (
    DataError,
    SymplecticConnectionData,
    build_semidirect,
    mu_constraint_solve,
    pseudo_kahler_check,
    validate_connection,
    weak_mirror_pipeline,
)
from .deformation import (
    DeformedAlgebra,
    PreconditionError,
    check_compatible_pair,
    integrability_series,
    maurer_cartan,
)
from .exterior import Multivector
from .gerstenhaber import (
    Endomorphism,
    GCAContext,
    compile,
    complex_vector_names,
    endomorphism_from_bivector,
)
from .lie import LieAlgebraSpec, SpecError, StructureError, ValidationError

EXIT_OK, EXIT_INTERNAL, EXIT_INVALID, EXIT_NEGATIVE, EXIT_PARSE, EXIT_STRUCTURE, EXIT_FIXTURE = 0, 1, 2, 3, 4, 5, 6


class ParseError(ValueError):
    pass


class Outcome:
    def __init__(self, code: int, text: str, payload: dict):
        self.code, self.text, self.payload = code, text, payload


# input ------------------------------------------------------------------------

def read_json(path: str):
    try:
        raw = Path(path).read_text()
    except OSError as exc:
        raise ParseError(f"{path}: {exc.strerror}") from exc
    try:
        return json.loads(raw)
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}:{exc.lineno}:{exc.colno}: {exc.msg}") from exc


def _located(path: str, fn: Callable, data):
    try:
        return fn(data)
    except (SpecError, ValueError, KeyError, TypeError, IndexError) as exc:
        if isinstance(exc, (ValidationError, StructureError)):
            raise
        raise ParseError(f"{path}: {exc}") from exc


def load_spec(path: str) -> tuple[LieAlgebraSpec, Multivector | None]:
    data = read_json(path)
    spec = _located(path, LieAlgebraSpec.from_json, data)
    omega = None
    if isinstance(data, dict) and "omega" in data:
        omega = _located(path, lambda d: Multivector.from_json(spec.dim, d["omega"]), data)
    return spec, omega


def load_connection(path: str) -> SymplecticConnectionData:
    return _located(path, SymplecticConnectionData.from_json, read_json(path))


def load_gamma(path: str, ctx: GCAContext) -> Multivector:
    data = read_json(path)

    def parse(d):
        if isinstance(d, dict):
            return ctx.element(d.get("terms", {}))
        return Multivector.from_json(ctx.rank, d)

    return _located(path, parse, data)


def load_phi(path: str, ctx: GCAContext) -> Endomorphism:
    data = read_json(path)

    def parse(d):
        if isinstance(d, dict) and "bivector" in d:
            names = complex_vector_names(ctx.n)
            from .exterior import parse_monomial

            terms = {parse_monomial(k, names): v for k, v in d["bivector"].items()}
            return endomorphism_from_bivector(ctx, Multivector(ctx.rank, terms))
        rows = d["matrix"] if isinstance(d, dict) else d
        phi = Endomorphism.from_json(rows)
        if len(phi.matrix) != ctx.rank or any(len(r) != ctx.rank for r in phi.matrix):
            raise ValueError(f"phi must be a {ctx.rank} x {ctx.rank} matrix")
        return phi

    return _located(path, parse, data)


def context_for(spec: LieAlgebraSpec) -> GCAContext:
    if not spec.report.valid:
        raise ValidationError("spec fails validation: " + "; ".join(spec.report.messages(spec.basis_names)), spec.report)
    return compile(spec)


def algebra_for(spec: LieAlgebraSpec, omega: Multivector | None):
    """Complex side if ``J`` is given, symplectic side if only ``omega`` is."""
    if spec.complex_structure is not None:
        return context_for(spec)
    if omega is not None:
        if not spec.report.jacobi_ok:
            raise ValidationError("structure constants fail Jacobi", spec.report)
        return symplectic_dga(spec, omega)
    raise StructureError("spec needs a complex structure 'J' or a symplectic form 'omega'")


# commands -----------------------------------------------------------------------

def cmd_validate(args) -> Outcome:
    spec, _ = load_spec(args.spec)
    rep = spec.report
    names = spec.basis_names
    lines = [f"jacobi: {'ok' if rep.jacobi_ok else 'FAIL'}",
             f"J^2 = -1: {rep.j_squared_ok}", f"integrable: {rep.integrable}"]
    lines += ["  " + m for m in rep.messages(names)]
    return Outcome(EXIT_OK if rep.valid else EXIT_INVALID, "\n".join(lines), rep.to_json(names))


def cmd_cohomology(args) -> Outcome:
    spec, omega = load_spec(args.spec)
    alg = algebra_for(spec, omega)
    if args.deform:
        if not isinstance(alg, GCAContext):
            raise StructureError("--deform needs a complex structure")
        gamma = load_gamma(args.deform, alg)
        dalg = DeformedAlgebra(alg, gamma)
        if not dalg.integrable:
            return Outcome(EXIT_NEGATIVE, "Gamma is not Maurer-Cartan; the deformed operator does not square to zero",
                           {"maurer_cartan": False, "residual": dalg.mc_residual.to_json()})
        alg = dalg
    basis = cohomology(build_complex(alg))
    names = alg.names
    lines = [f"H^{d.degree}: {d.dimension}" for d in basis.degrees]
    if args.representatives:
        for d in basis.degrees:
            for r in d.representatives:
                lines.append(f"  [{d.degree}] {r.format(names)}")
    payload = basis.to_json()
    payload["generators"] = list(names)
    return Outcome(EXIT_OK, "\n".join(lines), payload)


def cmd_maurer_cartan(args) -> Outcome:
    spec, _ = load_spec(args.spec)
    ctx = context_for(spec)
    gamma = load_gamma(args.gamma, ctx)
    res = maurer_cartan(ctx, gamma)
    ok = res.is_zero()
    text = f"residual: {ctx.format(res)}\nmaurer-cartan: {ok}"
    return Outcome(EXIT_OK if ok else EXIT_NEGATIVE, text, {"maurer_cartan": ok, "residual": res.to_json()})


def cmd_compatible(args) -> Outcome:
    spec, _ = load_spec(args.spec)
    ctx = context_for(spec)
    gamma, phi = load_gamma(args.gamma, ctx), load_phi(args.phi, ctx)
    rep = check_compatible_pair(ctx, gamma, phi)
    payload = rep.to_json()
    text = f"compatible pair: {rep.verdict}"
    for k in ("closed", "intertwining", "bracket_derivation", "wedge_derivation"):
        if payload[k]:
            text += f"\n  {k}: {len(payload[k])} failing argument tuples"
    return Outcome(EXIT_OK if rep.verdict else EXIT_NEGATIVE, text, payload)


def cmd_series(args) -> Outcome:
    spec, _ = load_spec(args.spec)
    ctx = context_for(spec)
    gamma, phi = load_gamma(args.gamma, ctx), load_phi(args.phi, ctx)
    rep = integrability_series(ctx, gamma, phi, args.order)
    lines = [f"order {args.order}: {'ok' if rep.ok else 'FAIL at n=' + str(rep.first_failure)}",
             f"terminates: {rep.terminates}"]
    for n, g in enumerate(rep.gamma_coefficients):
        lines.append(f"  Gamma_{n} = {ctx.format(g)}")
    return Outcome(EXIT_OK if rep.ok else EXIT_NEGATIVE, "\n".join(lines), rep.to_json())


def cmd_semidirect(args) -> Outcome:
    data = load_connection(args.connection)
    rep = validate_connection(data)
    if not rep.valid:
        return Outcome(EXIT_INVALID, "connection data fails validation", rep.to_json())
    pkg = build_semidirect(data)
    dual = dual_names(pkg.h_spec.basis_names)
    ctx = pkg.ctx
    payload = {
        "h": pkg.h_spec.to_json(),
        "Omega1": pkg.Omega1.format(dual),
        "Omega2": pkg.Omega2.format(dual),
        "Omega3": pkg.Omega3.format(dual),
        "Omega4": pkg.Omega4.format(dual) if pkg.Omega4 is not None else None,
        "Omega_c": pkg.Omega_c.format(dual),
        "Lambda": ctx.format(pkg.Lambda),
    }
    if pkg.Omega4 is not None:
        pk = pseudo_kahler_check(pkg)
        payload["dOmega4"] = pk.dOmega4.format(dual)
        payload["pseudo_kahler"] = pk.verdict
        if pk.verdict:
            sol = mu_constraint_solve(pkg)
            payload["mu"] = None if sol is None or sol.mu is None else str(sol.mu)
            if sol is not None:
                payload["phi"] = sol.phi_bivector(ctx).format(complex_vector_names(ctx.n))
    order = [(f"[{pkg.h_spec.basis_names[i]},{pkg.h_spec.basis_names[j]}]", row) for (i, j), row in sorted(pkg.h_spec.brackets.items())]
    lines = [f"{k} = " + " + ".join(f"({c})*{pkg.h_spec.basis_names[t]}" for t, c in sorted(row.items())) for k, row in order]
    lines += [f"{k}: {v}" for k, v in payload.items() if k != "h"]
    return Outcome(EXIT_OK, "\n".join(lines), payload)


def cmd_pipeline(args) -> Outcome:
    data = load_connection(args.connection)
    rep = weak_mirror_pipeline(data)
    lines = [f"{'PASS' if s.passed else 'FAIL'}  {s.name}" for s in rep.stages]
    lines.append(f"verdict: {rep.verdict}")
    if rep.verdict == "invalid input":
        code = EXIT_INVALID
    else:
        code = EXIT_OK if rep.verdict == "isomorphic" else EXIT_NEGATIVE
    return Outcome(code, "\n".join(lines), rep.to_json())


def cmd_fixture(args) -> Outcome:
    if args.name == "list":
        names = fixtures.available()
        return Outcome(EXIT_OK, "\n".join(names), {"fixtures": names})
    res = fixtures.run_fixture(args.name)
    lines = [c.line() for c in res.checks]
    lines.append(f"fixture {args.name}: {'ok' if res.ok else 'MISMATCH'}")
    return Outcome(EXIT_OK if res.ok else EXIT_NEGATIVE, "\n".join(lines), res.to_json())


def cmd_diagnose(args) -> Outcome:
    sa, oa = load_spec(args.spec_a)
    sb, ob = load_spec(args.spec_b)
    if args.symplectic_b and ob is None:
        raise StructureError("second spec has no 'omega'")
    a = algebra_for(sa, oa)
    b = symplectic_dga(sb, ob) if args.symplectic_b else algebra_for(sb, ob)
    rep = derived_center_diagnostic(a, b)
    payload = {"verdict": rep.verdict, "a": rep.side_a.to_json(a.names), "b": rep.side_b.to_json(b.names)}
    text = "\n".join([
        f"A: center {payload['a']['center']} closed={payload['a']['center_closed']}",
        f"B: center {payload['b']['center']} closed={payload['b']['center_closed']}",
        f"verdict: {rep.verdict}",
    ])
    return Outcome(EXIT_NEGATIVE if rep.obstructed else EXIT_OK, text, payload)


# dispatch ---------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="gcdga", description="Exact computations with invariant Gerstenhaber algebras of Lie algebras.")
    p.add_argument("--json", action="store_true", help="emit machine-readable JSON")
    sub = p.add_subparsers(dest="command", required=True)

    def add(name, fn, help_):
        sp = sub.add_parser(name, help=help_)
        sp.add_argument("--json", action="store_true", default=argparse.SUPPRESS, help="emit machine-readable JSON")
        sp.set_defaults(func=fn)
        return sp

    sp = add("validate", cmd_validate, "check Jacobi, J^2 = -1 and integrability")
    sp.add_argument("spec")
    sp = add("cohomology", cmd_cohomology, "cohomology of the algebra's differential")
    sp.add_argument("spec")
    sp.add_argument("--deform", metavar="GAMMA", help="use the deformed operator of this Maurer-Cartan element")
    sp.add_argument("--representatives", action="store_true")
    sp = add("maurer-cartan", cmd_maurer_cartan, "Maurer-Cartan residual of Gamma")
    sp.add_argument("spec")
    sp.add_argument("gamma")
    sp = add("compatible", cmd_compatible, "test a compatible pair (Gamma_1, phi)")
    sp.add_argument("spec")
    sp.add_argument("gamma")
    sp.add_argument("phi")
    sp = add("series", cmd_series, "check the integrability series to a given order")
    sp.add_argument("spec")
    sp.add_argument("gamma")
    sp.add_argument("phi")
    sp.add_argument("--order", type=int, default=4)
    sp = add("semidirect", cmd_semidirect, "build g x V and its forms from connection data")
    sp.add_argument("connection")
    sp = add("pipeline", cmd_pipeline, "run the staged construction on connection data")
    sp.add_argument("connection")
    sp = add("fixture", cmd_fixture, "run a named fixture ('list' to enumerate)")
    sp.add_argument("name")
    sp = add("diagnose-quasi", cmd_diagnose, "derived-center test between two algebras")
    sp.add_argument("spec_a")
    sp.add_argument("spec_b")
    sp.add_argument("--symplectic-b", action="store_true", help="force the symplectic side for the second spec")
    return p


def main(argv: list[str] | None = None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    args = build_parser().parse_args(argv)
    try:
        res = args.func(args)
    except ParseError as exc:
        return _fail(err, args, EXIT_PARSE, "parse error", str(exc), out)
    except ValidationError as exc:
        return _fail(err, args, EXIT_INVALID, "validation failure", str(exc), out)
    except (StructureError, PreconditionError, DataError) as exc:
        return _fail(err, args, EXIT_STRUCTURE, "structure error", str(exc), out)
    except fixtures.UnknownFixture as exc:
        return _fail(err, args, EXIT_FIXTURE, "unknown fixture", str(exc.args[0]), out)
    if args.json:
        out.write(json.dumps(res.payload, indent=1, sort_keys=True) + "\n")
    else:
        out.write(res.text + "\n")
    return res.code


def _fail(err, args, code: int, kind: str, message: str, out) -> int:
    if args.json:
        out.write(json.dumps({"error": kind, "message": message, "exit": code}) + "\n")
    else:
        err.write(f"{kind}: {message}\n")
    return code


def entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entry()
