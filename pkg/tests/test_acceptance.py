"""Acceptance gate: one function per criterion, each returning named sub-checks.

Run under pytest, or directly with ``python3 tests/test_acceptance.py`` for a
PASS/FAIL line per criterion. Two published values cannot be reproduced from
the published structure equations; they are checked literally in strict xfail
tests and their criteria report FAIL.
"""

from __future__ import annotations

import random
import sys
import time
from fractions import Fraction
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).resolve().parent))

from gcdga import fixtures  # noqa: E402
from gcdga.cohomology import build_complex, derived_center_diagnostic, induced_map, symplectic_dga  # noqa: E402
from gcdga.constructions import (  # noqa: E402
    b_field_identification,
    build_semidirect,
    lambda_lemma,
    mu_constraint_solve,
    pseudo_kahler_check,
    technical_lemma,
    validate_connection,
)
from gcdga.deformation import (  # noqa: E402
    DeformedAlgebra,
    check_compatible_pair,
    integrability_series,
    is_central,
)
from gcdga.exterior import Multivector  # noqa: E402
from gcdga.gerstenhaber import Endomorphism, complex_vector_names, compile  # noqa: E402
from gcdga.lie import ce_differential, named_form  # noqa: E402
from gcdga.sampling import random_closed_bivector, random_connection, random_valid_spec  # noqa: E402
from gcdga.scalars import gq  # noqa: E402
from invariants import structural_failures  # noqa: E402

RESULTS: dict[int, tuple[bool, str]] = {}
LITERAL_GAPS = {
    2: "published dv^1 = e^1^v^2 is not reproducible (derived: e^1^v^1)",
    3: "published dOmega_4 = 2 v^1^e^1^e^2 is not reproducible (derived: -v^1^e^1^e^2)",
}
SEED = 20261014


def _pkg(name: str):
    return build_semidirect(fixtures.connection(name))


def _vec(spec, name: str):
    return [gq(1) if n == name else gq(0) for n in spec.basis_names]


def _d(spec, name: str) -> Multivector:
    return ce_differential(spec, named_form(spec, {name: 1}))


def _phi(pkg, sol) -> str:
    return sol.phi_bivector(pkg.ctx).format(complex_vector_names(pkg.ctx.n))


def _record(n: int, checks: dict[str, bool], started: float) -> dict[str, bool]:
    bad = [k for k, v in checks.items() if not v]
    gap = LITERAL_GAPS.get(n)
    ok = not bad and gap is None
    why = ", ".join(bad) if bad else (gap or "")
    RESULTS[n] = (ok, f"{time.perf_counter() - started:.2f}s" + (f"; {why}" if why else ""))
    return checks


def summary_lines() -> list[str]:
    return [f"criterion {n}: {'PASS' if ok else 'FAIL'} ({detail})" for n, (ok, detail) in sorted(RESULTS.items())]


# criteria -----------------------------------------------------------------------

def criterion_1() -> dict[str, bool]:
    t = time.perf_counter()
    pkg = _pkg("kodaira-thurston")
    spec, ctx = pkg.h_spec, pkg.ctx
    sol = mu_constraint_solve(pkg)
    Phi = Endomorphism.identity(ctx.rank) + sol.phi
    iso = induced_map(build_complex(DeformedAlgebra(ctx, pkg.Lambda)), build_complex(ctx), Phi)
    checks = {
        "[e1,v1] = v2": spec.bracket(_vec(spec, "e1"), _vec(spec, "v1")) == _vec(spec, "v2"),
        "dOmega4 = 0": pseudo_kahler_check(pkg).dOmega4.is_zero(),
        "mu = 1/4": sol.mu == gq(Fraction(1, 4)),
        "phi = i z_1^zbar_2": _phi(pkg, sol) == "(i)*z_1^zbar_2",
        "compatible": check_compatible_pair(ctx, pkg.Lambda, sol.phi).verdict,
        "1+phi iso in degrees 0..4": iso.isomorphism and iso.bijective_per_degree == [True] * 5,
    }
    return _record(1, checks, t)


def criterion_2() -> dict[str, bool]:
    t = time.perf_counter()
    pkg = _pkg("solvable-ex2")
    spec, ctx = pkg.h_spec, pkg.ctx
    sol = mu_constraint_solve(pkg)
    checks = {
        "de2 = -e1^e2": _d(spec, "e2") == named_form(spec, {"e1^e2": -1}),
        "dv1 = e1^v1 (derived)": _d(spec, "v1") == named_form(spec, {"e1^v1": 1}),
        "dv2 = -e1^v2": _d(spec, "v2") == named_form(spec, {"e1^v2": -1}),
        "mu = -1/4": sol.mu == gq(Fraction(-1, 4)),
        "phi = -i z_2^zbar_1": _phi(pkg, sol) == "(-i)*z_2^zbar_1",
        "compatible": check_compatible_pair(ctx, pkg.Lambda, sol.phi).verdict,
    }
    return _record(2, checks, t)


def criterion_3() -> dict[str, bool]:
    t = time.perf_counter()
    pkg = _pkg("solvable-ex3")
    spec, ctx = pkg.h_spec, pkg.ctx
    el = ctx.element
    brackets = {
        ("z_1", "z_2"): el({"z_2": "1/2"}),
        ("z_1", "zbar^1"): el({"zbar^1": "1/4"}),
        ("z_1", "zbar^2"): el({"zbar^2": "-1/4"}),
        ("z_2", "zbar^2"): el({"zbar^1": "1/4"}),
    }
    dbar = {
        "z_1": el({"zbar^1^z_1": "-1/4", "zbar^2^z_2": "-1/4"}),
        "z_2": el({"zbar^1^z_2": "1/4"}),
        "zbar^2": el({"zbar^1^zbar^2": "-1/2"}),
    }
    N = ctx.names
    table_ok = all(
        ctx.bracket_table[a][b] == brackets.get((N[a], N[b]), Multivector.zero(ctx.rank))
        for a in range(ctx.rank) for b in range(a + 1, ctx.rank)
    )
    dbar_ok = all(ctx.dbar_table[a] == dbar.get(N[a], Multivector.zero(ctx.rank)) for a in range(ctx.rank))
    pk = pseudo_kahler_check(pkg)
    S = symplectic_dga(spec, pkg.Omega2)
    sb = lambda a, b: S.bracket_table[S.names.index(a)][S.names.index(b)]
    diag = derived_center_diagnostic(ctx, S)
    checks = {
        "complex bracket table": table_ok,
        "dbar table": dbar_ok,
        "dOmega4 = -v1^e1^e2 (derived)": pk.dOmega4 == named_form(spec, {"v1^e1^e2": -1}),
        "dOmega4 vs criterion agree": pk.agree and not pk.verdict,
        "[[e^1,e^2]] = -e^1": sb("e^1", "e^2") == named_form(spec, {"e1": -1}),
        "[[e^1,v^2]] = -v^1/2": sb("e^1", "v^2") == named_form(spec, {"v1": "-1/2"}),
        "obstruction certified": (
            diag.verdict == "not quasi-isomorphic"
            and [x.format(N) for x in diag.side_a.center_basis] == ["zbar^1"]
            and diag.side_a.center_closed is True
            and [x.format(S.names) for x in diag.side_b.center_basis] == ["v^1"]
            and diag.side_b.center_closed is False
        ),
    }
    return _record(3, checks, t)


def criterion_4() -> dict[str, bool]:
    t = time.perf_counter()
    rng = random.Random(SEED)
    checks = {}
    for name in fixtures.available():
        checks[f"fixture {name}"] = not structural_failures(_pkg(name).ctx, rng)
    bad = []
    for k in range(100):
        ctx = compile(random_valid_spec(rng, 6))
        if structural_failures(ctx, rng):
            bad.append(k)
    checks[f"100 random specs ({len(bad)} failing)"] = not bad
    return _record(4, checks, t)


def criterion_5() -> dict[str, bool]:
    t = time.perf_counter()
    checks = {}
    for name in ("kodaira-thurston", "solvable-ex2"):
        pkg = _pkg(name)
        sol = mu_constraint_solve(pkg)
        rep = integrability_series(pkg.ctx, pkg.Lambda, sol.phi, 4)
        checks[f"{name}: MC/endo/intertwine n<=4"] = not any(
            v for d in (rep.mc_failures, rep.endo_failures, rep.intertwine_failures) for v in d.values()
        ) and sorted(rep.mc_failures) == [1, 2, 3, 4]
        checks[f"{name}: MC of Gamma(t) coefficient-wise"] = rep.terminates and all(
            not r for r in rep.mc_series_residuals.values()
        )
    return _record(5, checks, t)


def criterion_6() -> dict[str, bool]:
    t = time.perf_counter()
    rng = random.Random(SEED + 6)
    agree, central = 0, 0
    for _ in range(50):
        ctx = compile(random_valid_spec(rng, 4))
        g = random_closed_bivector(rng, ctx)
        c = is_central(ctx, g)
        central += c
        agree += check_compatible_pair(ctx, g, Endomorphism.zero(ctx.rank)).verdict == c
    checks = {f"50 closed bivectors ({central} central)": agree == 50, "both outcomes exercised": 0 < central < 50}
    return _record(6, checks, t)


def criterion_7() -> dict[str, bool]:
    t = time.perf_counter()
    rng = random.Random(SEED + 7)
    datas = [(n, fixtures.connection(n)) for n in fixtures.available()]
    datas += [(f"random m={m} #{k}", random_connection(rng, m)) for k, m in enumerate([2] * 12 + [4] * 8)]
    checks = {}
    for label, data in datas:
        if not validate_connection(data).valid:
            checks[label] = False
            continue
        pkg = build_semidirect(data)
        checks[label] = lambda_lemma(pkg).ok and pseudo_kahler_check(pkg).agree and technical_lemma(pkg).ok
    return _record(7, checks, t)


def criterion_8() -> dict[str, bool]:
    t = time.perf_counter()
    checks = {}
    for name in fixtures.available():
        rep = b_field_identification(_pkg(name))
        checks[f"{name}: automorphism"] = not rep.automorphism_failures
        checks[f"{name}: graph span"] = rep.graph_matches
    return _record(8, checks, t)


CRITERIA = {n: globals()[f"criterion_{n}"] for n in range(1, 9)}


# pytest -------------------------------------------------------------------------

@pytest.mark.parametrize("n", range(1, 9))
def test_criterion(n):
    checks = CRITERIA[n]()
    assert all(checks.values()), [k for k, v in checks.items() if not v]


@pytest.mark.xfail(strict=True, reason=LITERAL_GAPS[2])
def test_criterion_2_literal_dv1():
    spec = _pkg("solvable-ex2").h_spec
    assert _d(spec, "v1") == named_form(spec, {"e1^v2": 1})


@pytest.mark.xfail(strict=True, reason=LITERAL_GAPS[3])
def test_criterion_3_literal_dOmega4():
    pkg = _pkg("solvable-ex3")
    assert pseudo_kahler_check(pkg).dOmega4 == named_form(pkg.h_spec, {"v1^e1^e2": 2})


if __name__ == "__main__":
    for n, fn in CRITERIA.items():
        fn()
    print("\n".join(summary_lines()))
    sys.exit(0 if all(ok for ok, _ in RESULTS.values()) else 1)
