import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from gcdga.cohomology import build_complex
from gcdga.deformation import (
    ClosednessError,
    DegreeError,
    DeformedAlgebra,
    PreconditionError,
    TypeComponentError,
    apply_b_field,
    b_field_residuals,
    b_field_transform,
    check_compatible_pair,
    closedness_split,
    deformed_dbar,
    gamma_series,
    holomorphic_poisson_check,
    homomorphism_residuals,
    integrability_series,
    is_central,
    maurer_cartan,
    phi_series,
    real_sections,
    type_decompose_gamma,
)
from gcdga.exterior import Multivector
from gcdga.gerstenhaber import Endomorphism, compile, endomorphism_from_bivector
from gcdga.lie import named_form
from gcdga.sampling import random_closed_bivector, random_valid_spec
from gcdga.scalars import I, gq

seeds = st.integers(0, 10_000)


def phi_of(ctx, terms):
    from gcdga.exterior import parse_monomial
    from gcdga.gerstenhaber import complex_vector_names

    names = complex_vector_names(ctx.n)
    return endomorphism_from_bivector(ctx, Multivector(ctx.rank, {parse_monomial(k, names): gq(v) for k, v in terms.items()}))


@pytest.fixture(scope="module")
def pair1(ex1):
    return ex1.ctx, ex1.Lambda, phi_of(ex1.ctx, {"z_1^zbar_2": "i"})


@pytest.fixture(scope="module")
def pair2(ex2):
    return ex2.ctx, ex2.Lambda, phi_of(ex2.ctx, {"z_2^zbar_1": "-i"})


def test_zero_is_maurer_cartan(packages):
    for pkg in packages.values():
        assert maurer_cartan(pkg.ctx, Multivector.zero(pkg.ctx.rank)).is_zero()


def test_maurer_cartan_needs_a_bivector(ex1):
    with pytest.raises(DegreeError):
        maurer_cartan(ex1.ctx, ex1.ctx.generator(0))


def test_holomorphic_poisson(packages):
    for pkg in packages.values():
        rep = holomorphic_poisson_check(pkg.ctx, pkg.Lambda)
        assert rep.holomorphic_poisson
        assert maurer_cartan(pkg.ctx, pkg.Lambda).is_zero()
    with pytest.raises(TypeComponentError):
        holomorphic_poisson_check(pkg.ctx, pkg.ctx.element({"z_1^zbar^1": 1}))


def test_deformed_operator_squares_to_zero(packages):
    for pkg in packages.values():
        alg = DeformedAlgebra(pkg.ctx, pkg.Lambda)
        assert alg.integrable
        assert not alg.differential_square_residuals()
        build_complex(alg)


def test_non_mc_gamma_warns(ex3):
    ctx = ex3.ctx
    gamma = ctx.element({"z_1^zbar^1": 1})
    assert maurer_cartan(ctx, gamma)
    val = deformed_dbar(ctx, gamma, ctx.generator(0))
    assert val.warning is not None
    assert deformed_dbar(ctx, ex3.Lambda, ctx.generator(0)).warning is None


def test_example_pairs_are_compatible(pair1, pair2):
    for ctx, lam, phi in (pair1, pair2):
        assert check_compatible_pair(ctx, lam, phi).verdict


def test_opposite_slot_convention_breaks_compatibility(pair1, pair2):
    for ctx, lam, phi in (pair1, pair2):
        flipped = phi.scale(gq(-1))
        rep = check_compatible_pair(ctx, lam, flipped)
        assert not rep.verdict
        assert rep.eq1_residuals


@given(seeds)
def test_central_closed_bivectors_give_compatible_pairs(seed):
    rng = random.Random(seed)
    ctx = compile(random_valid_spec(rng, 4))
    g = random_closed_bivector(rng, ctx)
    rep = check_compatible_pair(ctx, g, Endomorphism.zero(ctx.rank))
    assert rep.verdict == is_central(ctx, g)
    assert not rep.closed_residual


def test_series_for_example_pairs(pair1, pair2):
    for ctx, lam, phi in (pair1, pair2):
        rep = integrability_series(ctx, lam, phi, 4)
        assert rep.ok and rep.terminates
        assert all(not r for r in rep.mc_series_residuals.values())
        assert rep.gamma_coefficients[1] == lam
        assert all(c.is_zero() for c in rep.gamma_coefficients[2:])


def test_series_refuses_incompatible_pairs(pair1):
    ctx, lam, phi = pair1
    with pytest.raises(PreconditionError):
        integrability_series(ctx, lam, phi.scale(gq(-1)), 3)
    rep = integrability_series(ctx, lam, phi.scale(gq(-1)), 3, require_compatible=False)
    assert not rep.ok and rep.first_failure == 1


def test_series_coefficients():
    phi = Endomorphism(((gq(0), gq(1)), (gq(0), gq(0))))
    g = Multivector(2, {(0, 1): 1})
    coeffs = gamma_series(phi, g, 3)
    assert coeffs[0].is_zero() and coeffs[1] == g
    assert coeffs[2] == phi.apply(g).scale(gq("-1/2"))
    terms = phi_series(phi, 2)
    assert terms[0] == Endomorphism.identity(2)
    assert terms[1] == phi


@pytest.mark.parametrize("t", ["1", "2", "-1/3", "i"])
def test_one_plus_t_phi_is_a_homomorphism(pair1, t):
    ctx, lam, phi = pair1
    Phi = Endomorphism.identity(ctx.rank) + phi.scale(gq(t))
    assert homomorphism_residuals(ctx, lam.scale(gq(t)), Phi) == []


def test_type_decomposition_of_gamma(ex1):
    ctx = ex1.ctx
    g = ctx.element({"z_1^z_2": 1, "z_2^zbar^1": 2, "zbar^1^zbar^2": 3})
    a, b, c = type_decompose_gamma(ctx, g)
    assert a == ctx.element({"z_1^z_2": 1}) and c == ctx.element({"zbar^1^zbar^2": 3})
    assert a + b + c == g


def test_componentwise_closedness(packages):
    for pkg in packages.values():
        ctx = pkg.ctx
        alg = DeformedAlgebra(ctx, pkg.Lambda)
        for k in range(ctx.rank):
            x = ctx.generator(k)
            parts = closedness_split(ctx, pkg.Lambda, x)
            total = parts[0] + parts[1] + parts[2]
            assert total == alg.differential(x)


def test_b_field_needs_a_closed_form(ex3):
    spec = ex3.h_spec
    not_closed = named_form(spec, {"e1^v2": 1, "e2^v1": 1})
    with pytest.raises(ClosednessError):
        b_field_transform(ex3.ctx, not_closed, real_sections(4)[0])


def test_b_field_preserves_structure(packages):
    for pkg in packages.values():
        secs = real_sections(pkg.h_spec.dim)
        assert b_field_residuals(pkg.ctx, pkg.Omega1, secs) == []


def test_non_closed_shift_breaks_the_bracket(ex3):
    # apply_b_field skips the closedness check; a non-closed form must break the Courant bracket
    from gcdga.gerstenhaber import courant

    spec = ex3.h_spec
    B = named_form(spec, {"e1^v2": 1, "e2^v1": 1})
    secs = real_sections(4)
    bad = 0
    for u in secs:
        for v in secs:
            if apply_b_field(B, courant(spec, u, v)) != courant(spec, apply_b_field(B, u), apply_b_field(B, v)):
                bad += 1
    assert bad
