import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gcdga import fixtures
from gcdga.constructions import (
    DataError,
    SymplecticConnectionData,
    b_field_identification,
    build_semidirect,
    lambda_lemma,
    mu_constraint_solve,
    normalize_metric,
    pseudo_kahler_check,
    technical_lemma,
    validate_connection,
    weak_mirror_pipeline,
)
from gcdga.deformation import PreconditionError, check_compatible_pair
from gcdga.exterior import Multivector
from gcdga.gerstenhaber import complex_vector_names
from gcdga.lie import LieAlgebraSpec
from gcdga.sampling import _conn, random_connection, solvable_connection
from gcdga.scalars import gq


def phi_terms(pkg, sol):
    return sol.phi_bivector(pkg.ctx).format(complex_vector_names(pkg.ctx.n))


def test_example_mu_and_phi(ex1, ex2):
    s1, s2 = mu_constraint_solve(ex1), mu_constraint_solve(ex2)
    assert s1.mu == gq(Fraction(1, 4))
    assert s2.mu == gq(Fraction(-1, 4))
    assert phi_terms(ex1, s1) == "(i)*z_1^zbar_2"
    assert phi_terms(ex2, s2) == "(-i)*z_2^zbar_1"
    for pkg, sol in ((ex1, s1), (ex2, s2)):
        assert check_compatible_pair(pkg.ctx, pkg.Lambda, sol.phi).verdict
        assert sol.phi.compose(sol.phi).is_zero()


def test_lambda_is_the_same_holomorphic_bivector_everywhere(packages):
    for pkg in packages.values():
        assert pkg.ctx.format(pkg.Lambda) == "(i)*z_1^z_2"


def test_rescaled_metric_squares_mu(ex1, ex2):
    # g -> -4 mu g leaves j unchanged up to 1/(-4 mu), so the new constant is -4 mu^2
    for pkg in (ex1, ex2):
        mu = mu_constraint_solve(pkg).mu
        new = mu_constraint_solve(build_semidirect(normalize_metric(pkg.data, mu)))
        assert new.mu == mu * mu * -4 == gq(Fraction(-1, 4))


def test_the_third_example_is_not_pseudo_kahler(ex3):
    rep = pseudo_kahler_check(ex3)
    assert not rep.closed and not rep.criterion_holds and rep.agree
    with pytest.raises(PreconditionError):
        mu_constraint_solve(ex3)


def test_pseudo_kahler_needs_a_metric(ex1):
    data = SymplecticConnectionData(ex1.data.g_spec, ex1.data.omega, ex1.data.gamma)
    with pytest.raises(DataError):
        pseudo_kahler_check(build_semidirect(data))


def test_pipeline_verdicts():
    names = ["validate", "build", "pseudo-kahler", "mu", "compatible", "isomorphism", "b-field", "symplectic"]
    for fx in ("kodaira-thurston", "solvable-ex2"):
        rep = weak_mirror_pipeline(fixtures.connection(fx))
        assert rep.verdict == "isomorphic"
        assert [s.name for s in rep.stages] == names
        assert all(s.passed for s in rep.stages)
    rep = weak_mirror_pipeline(fixtures.connection("solvable-ex3"))
    assert rep.verdict == "not quasi-isomorphic"
    assert [s.name for s in rep.stages][-1] == "diagnostic"


def test_zero_connection_runs_as_central_case():
    g = LieAlgebraSpec(2, ("e1", "e2"), {})
    rep = weak_mirror_pipeline(_conn(g, {}))
    assert rep.solution.central
    assert rep.verdict == "isomorphic"


def test_invalid_connections_are_rejected():
    bad = solvable_connection(2)
    rep = validate_connection(bad)
    assert rep.flat and not rep.valid
    assert weak_mirror_pipeline(bad).verdict == "invalid input"
    g = LieAlgebraSpec(2, ("e1", "e2"), {})
    # gamma(e1) e2 = e1 but gamma(e2) e1 = 0 gives torsion
    assert validate_connection(_conn(g, {(0, 1, 0): 1})).torsion
    degenerate = SymplecticConnectionData(g, Multivector.zero(2), [[[gq(0)] * 2] * 2] * 2)
    assert not validate_connection(degenerate).omega_nondegenerate


def test_flat_parameters_of_the_solvable_family():
    for s, flat in ((1, True), (Fraction(1, 2), True), (2, False), (0, False)):
        assert validate_connection(solvable_connection(gq(s))).valid is flat


@given(st.integers(0, 10_000), st.sampled_from([2, 2, 4]))
@settings(max_examples=12)
def test_lemmas_on_random_connections(seed, m):
    data = random_connection(random.Random(seed), m)
    assert validate_connection(data).valid
    pkg = build_semidirect(data)
    assert lambda_lemma(pkg).ok
    assert technical_lemma(pkg).ok
    assert pseudo_kahler_check(pkg).agree


@given(st.integers(0, 10_000))
@settings(max_examples=10)
def test_b_field_on_random_planes(seed):
    assert b_field_identification(build_semidirect(random_connection(random.Random(seed), 2))).ok


@given(st.integers(0, 10_000), st.sampled_from([2, 4]))
def test_connection_json_round_trip(seed, m):
    data = random_connection(random.Random(seed), m)
    back = SymplecticConnectionData.from_json(data.to_json())
    assert back.to_json() == data.to_json()
    assert back.gamma == data.gamma and back.metric == data.metric
