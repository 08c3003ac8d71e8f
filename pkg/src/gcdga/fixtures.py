"""Named reference inputs with their expected values.

A fixture file carries the connection data plus two claim blocks: ``published``
(literal published values, tagged) and ``derived`` (independently computed
values, frozen). ``run_fixture`` recomputes everything and reports each claim
against its source, so a mismatch says which one it disagrees with.
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass, field
from functools import cached_property
from importlib import resources
from pathlib import Path
from typing import Any, Callable

from .cohomology import build_complex, cohomology, derived_center_diagnostic, dual_names, symplectic_dga
from .constructions import (
    SemidirectPackage,
    SymplecticConnectionData,
    build_semidirect,
    pseudo_kahler_check,
    weak_mirror_pipeline,
)
from .deformation import check_compatible_pair
from .exterior import Multivector, parse_monomial
from .gerstenhaber import complex_vector_names
from .lie import ce_differential
from .scalars import GaussianRational

ENV_VAR = "GCDGA_FIXTURES"


class UnknownFixture(KeyError):
    pass


def fixture_dir() -> Path:
    override = os.environ.get(ENV_VAR)
    if override:
        return Path(override)
    return Path(str(resources.files("gcdga") / "fixtures"))


def available() -> list[str]:
    return sorted(p.stem for p in fixture_dir().glob("*.json"))


def load(name: str) -> dict:
    path = fixture_dir() / f"{name}.json"
    if not path.exists():
        raise UnknownFixture(name)
    return json.loads(path.read_text())


def _terms(mv: Multivector, names) -> dict[str, str]:
    return {"^".join(names[i] for i in key): str(c) for key, c in sorted(mv.terms.items())}


def _parse(terms: dict, names, rank: int) -> Multivector:
    out = Multivector.zero(rank)
    for key, c in terms.items():
        out = out + Multivector(rank, {parse_monomial(key, names): GaussianRational.coerce(c)})
    return out


class Observables:
    """Lazily computed quantities a fixture can make claims about."""

    def __init__(self, data: SymplecticConnectionData):
        self.data = data

    @cached_property
    def pkg(self) -> SemidirectPackage:
        return build_semidirect(self.data)

    @cached_property
    def pipeline(self):
        return weak_mirror_pipeline(self.data)

    @property
    def ctx(self):
        return self.pkg.ctx

    @property
    def h_names(self):
        return self.pkg.h_spec.basis_names

    @property
    def h_dual(self):
        return dual_names(self.h_names)

    @cached_property
    def symplectic(self):
        return symplectic_dga(self.pkg.h_spec, self.pkg.Omega2)

    # table-valued: {"a,b": {terms}} or {"x": {terms}}
    def real_brackets(self) -> dict:
        spec = self.pkg.h_spec
        out = {}
        for (i, j), row in sorted(spec.brackets.items()):
            out[f"{self.h_names[i]},{self.h_names[j]}"] = {self.h_names[k]: str(c) for k, c in sorted(row.items())}
        return out

    def differentials(self) -> dict:
        spec = self.pkg.h_spec
        out = {}
        for k, nm in enumerate(self.h_dual):
            d = ce_differential(spec, Multivector.generator(spec.dim, k))
            if d:
                out[nm] = _terms(d, self.h_dual)
        return out

    def _pair_table(self, alg, names) -> dict:
        out = {}
        for a in range(alg.rank):
            for b in range(a + 1, alg.rank):
                x = alg.bracket_table[a][b]
                if x:
                    out[f"{names[a]},{names[b]}"] = _terms(x, names)
        return out

    def complex_brackets(self) -> dict:
        return self._pair_table(self.ctx, self.ctx.names)

    def dbar(self) -> dict:
        return {self.ctx.names[a]: _terms(x, self.ctx.names) for a, x in enumerate(self.ctx.dbar_table) if x}

    def symplectic_brackets(self) -> dict:
        return self._pair_table(self.symplectic, self.symplectic.names)

    # scalar-valued
    def dOmega4(self) -> dict:
        return _terms(pseudo_kahler_check(self.pkg).dOmega4, self.h_dual)

    def pseudo_kahler(self) -> bool:
        return pseudo_kahler_check(self.pkg).verdict

    def Lambda(self) -> dict:
        return _terms(self.pkg.Lambda, self.ctx.names)

    def mu(self) -> str | None:
        sol = self.pipeline.solution
        return None if sol is None or sol.mu is None else str(sol.mu)

    def phi(self) -> dict | None:
        sol = self.pipeline.solution
        if sol is None:
            return None
        return _terms(sol.phi_bivector(self.ctx), complex_vector_names(self.ctx.n))

    def compatible(self) -> bool | None:
        sol = self.pipeline.solution
        if sol is None:
            return None
        return check_compatible_pair(self.ctx, self.pkg.Lambda, sol.phi).verdict

    def cohomology_dims(self) -> list[int]:
        return cohomology(build_complex(self.ctx)).dimensions

    def isomorphism(self) -> bool | None:
        st = self.pipeline.stage("isomorphism")
        return None if st is None else st.passed

    def verdict(self) -> str:
        return self.pipeline.verdict

    def diagnostic(self) -> dict:
        rep = derived_center_diagnostic(self.ctx, self.symplectic)
        return {
            "verdict": rep.verdict,
            "complex_derived": [x.format(self.ctx.names) for x in rep.side_a.derived_basis],
            "complex_center": [x.format(self.ctx.names) for x in rep.side_a.center_basis],
            "complex_center_closed": rep.side_a.center_closed,
            "symplectic_derived": [x.format(self.symplectic.names) for x in rep.side_b.derived_basis],
            "symplectic_center": [x.format(self.symplectic.names) for x in rep.side_b.center_basis],
            "symplectic_center_closed": rep.side_b.center_closed,
        }


TABLES = {"real_brackets", "differentials", "complex_brackets", "dbar", "symplectic_brackets"}
FORMS = {
    "dOmega4": lambda o: (o.h_dual, o.pkg.h_spec.dim),
    "Lambda": lambda o: (o.ctx.names, o.ctx.rank),
    "phi": lambda o: (complex_vector_names(o.ctx.n), o.ctx.rank),
}


@dataclass
class ClaimCheck:
    source: str
    key: str
    tag: str
    expected: Any
    actual: Any
    ok: bool
    note: str | None = None

    def line(self) -> str:
        status = "ok" if self.ok else ("KNOWN-CONFLICT" if self.note else "MISMATCH")
        return f"[{self.source}:{self.tag}] {self.key}: {status}" + ("" if self.ok else f" expected={self.expected} actual={self.actual}")


@dataclass
class FixtureResult:
    name: str
    checks: list[ClaimCheck] = field(default_factory=list)

    @property
    def derived_ok(self) -> bool:
        return all(c.ok for c in self.checks if c.source == "derived")

    @property
    def published_ok(self) -> bool:
        return all(c.ok or c.note for c in self.checks if c.source == "published")

    @property
    def ok(self) -> bool:
        return self.derived_ok and self.published_ok

    def to_json(self) -> dict:
        return {
            "fixture": self.name,
            "ok": self.ok,
            "checks": [
                {"source": c.source, "key": c.key, "tag": c.tag, "ok": c.ok, "expected": c.expected,
                 "actual": c.actual, **({"known_conflict": c.note} if c.note else {})}
                for c in self.checks
            ],
        }


def _same_form(obs: Observables, key: str, expected, actual) -> bool:
    if expected is None or actual is None:
        return expected == actual
    names, rank = FORMS[key](obs)
    return _parse(expected, names, rank) == _parse(actual, names, rank)


def _same_table(obs: Observables, key: str, expected: dict, actual: dict, complete: bool) -> bool:
    if complete and set(expected) != set(actual):
        return False
    for k, terms in expected.items():
        got = actual.get(k, {})
        if {a: GaussianRational.coerce(b) for a, b in terms.items()} != {a: GaussianRational.coerce(b) for a, b in got.items()}:
            # fall back to parsing, so ordering or sign-absorbing permutations do not matter
            names = _table_names(obs, key)
            if names is None or _parse(terms, *names) != _parse(got, *names):
                return False
    return True


def _table_names(obs: Observables, key: str):
    if key in ("complex_brackets", "dbar"):
        return obs.ctx.names, obs.ctx.rank
    if key == "symplectic_brackets":
        return obs.symplectic.names, obs.symplectic.rank
    if key == "differentials":
        return obs.h_dual, obs.pkg.h_spec.dim
    return None


def compare(obs: Observables, key: str, expected, complete: bool):
    getter: Callable = getattr(obs, key, None)
    if getter is None:
        raise KeyError(f"unknown observable {key!r}")
    actual = getter()
    if key in TABLES:
        sub = {k: v for k, v in actual.items() if k in expected} if not complete else actual
        return _same_table(obs, key, expected, actual, complete), sub
    if key in FORMS:
        return _same_form(obs, key, expected, actual), actual
    if key == "diagnostic":
        sub = {k: actual.get(k) for k in expected}
        return sub == expected, sub
    if key == "mu" and expected is not None and actual is not None:
        return GaussianRational.coerce(expected) == GaussianRational.coerce(actual), actual
    return expected == actual, actual


def run_fixture(name: str) -> FixtureResult:
    spec = load(name)
    data = SymplecticConnectionData.from_json(spec["connection"])
    obs = Observables(data)
    res = FixtureResult(name)
    for source, complete in (("published", False), ("derived", True)):
        for claim in spec.get(source, []):
            key = claim["key"]
            ok, actual = compare(obs, key, claim["value"], complete and claim.get("complete", True))
            res.checks.append(ClaimCheck(source, key, claim.get("tag", source.upper()), claim["value"], actual, ok,
                                         claim.get("known_conflict")))
    return res


def connection(name: str) -> SymplecticConnectionData:
    return SymplecticConnectionData.from_json(load(name)["connection"])
