import random
from math import comb

import pytest
from hypothesis import given
from hypothesis import strategies as st

from gcdga.cohomology import (
    CommutationError,
    build_complex,
    cohomology,
    derived_center_diagnostic,
    induced_map,
    symplectic_dga,
)
from gcdga.deformation import DeformedAlgebra
from gcdga.gerstenhaber import Endomorphism, compile
from gcdga.lie import StructureError, make_spec, named_form
from gcdga.sampling import random_abelian_complex, random_valid_spec
from gcdga.scalars import gq
from oracles import sympy_rank

seeds = st.integers(0, 10_000)


def oracle_dims(cx):
    ranks = [sympy_rank(m) for m in cx.matrices] + [0]
    return [len(cx.bases[k]) - ranks[k] - (ranks[k - 1] if k else 0) for k in range(cx.rank + 1)]


def test_abelian_dims_are_binomial():
    ctx = compile(random_abelian_complex(random.Random(3), 4))
    assert cohomology(build_complex(ctx)).dimensions == [comb(4, k) for k in range(5)]


def test_example_dims(ex1, ex2, ex3):
    assert cohomology(build_complex(ex1.ctx)).dimensions == [1, 3, 4, 3, 1]
    assert cohomology(build_complex(ex2.ctx)).dimensions == [1, 1, 2, 2, 0]
    assert cohomology(build_complex(ex3.ctx)).dimensions == [1, 1, 1, 1, 0]


@given(seeds)
def test_dims_match_sympy_rank_route(seed):
    ctx = compile(random_valid_spec(random.Random(seed)))
    cx = build_complex(ctx)
    dims = cohomology(cx).dimensions
    assert dims == oracle_dims(cx)
    assert sum((-1) ** k * d for k, d in enumerate(dims)) == 0


@given(seeds)
def test_representatives_are_independent_closed_classes(seed):
    rng = random.Random(seed)
    ctx = compile(random_valid_spec(rng, 4))
    basis = cohomology(build_complex(ctx))
    for deg in basis.degrees:
        for i, rep in enumerate(deg.representatives):
            assert basis.is_closed(rep, deg.degree)
            assert not basis.is_exact(rep, deg.degree)
            coords = basis.class_coordinates(rep, deg.degree)
            assert coords == [gq(1) if j == i else gq(0) for j in range(deg.dimension)]


def test_exact_forms_have_zero_class(ex3):
    basis = cohomology(build_complex(ex3.ctx))
    x = ex3.ctx.dbar(ex3.ctx.generator(0))
    assert basis.is_exact(x, 2)
    assert all(c.is_zero() for c in basis.class_coordinates(x, 2))


def test_one_plus_phi_is_a_quasi_isomorphism(ex1):
    ctx = ex1.ctx
    m = [[gq(0)] * 4 for _ in range(4)]
    m[0][3] = gq("-i")
    Phi = Endomorphism.identity(4) + Endomorphism(tuple(tuple(r) for r in m))
    rep = induced_map(build_complex(DeformedAlgebra(ctx, ex1.Lambda)), build_complex(ctx), Phi)
    assert rep.isomorphism
    assert rep.bijective_per_degree == [True] * 5


def test_non_chain_map_is_rejected(ex1):
    ctx = ex1.ctx
    m = [[gq(0)] * 4 for _ in range(4)]
    m[0][3] = gq("i")
    Phi = Endomorphism.identity(4) + Endomorphism(tuple(tuple(r) for r in m))
    with pytest.raises(CommutationError):
        induced_map(build_complex(DeformedAlgebra(ctx, ex1.Lambda)), build_complex(ctx), Phi)


def test_transported_symplectic_brackets(ex3):
    S = symplectic_dga(ex3.h_spec, ex3.Omega2)
    br = lambda a, b: S.bracket_table[S.names.index(a)][S.names.index(b)]
    el = lambda terms: named_form(ex3.h_spec, terms)
    assert S.names == ("e^1", "e^2", "v^1", "v^2")
    assert br("e^1", "e^2") == el({"e1": -1})
    assert br("e^1", "v^2") == el({"v1": "-1/2"})
    assert br("e^2", "v^1") == el({"v1": "1/2"})
    assert br("e^2", "v^2") == el({"v2": "-1/2"})
    assert not S.differential_square_residuals()


def test_symplectic_needs_nondegenerate_closed_form(ex3):
    spec = ex3.h_spec
    with pytest.raises(StructureError):
        symplectic_dga(spec, named_form(spec, {"e1^e2": 1}))
    with pytest.raises(StructureError):
        symplectic_dga(spec, named_form(spec, {"e1^v2": 1, "e2^v1": 1}))


def test_derived_center_obstruction(ex3):
    S = symplectic_dga(ex3.h_spec, ex3.Omega2)
    rep = derived_center_diagnostic(ex3.ctx, S)
    assert rep.verdict == "not quasi-isomorphic"
    assert [x.format(ex3.ctx.names) for x in rep.side_a.center_basis] == ["zbar^1"]
    assert rep.side_a.center_closed is True
    assert [x.format(S.names) for x in rep.side_b.center_basis] == ["v^1"]
    assert rep.side_b.center_closed is False


def test_diagnostic_is_inconclusive_on_isomorphic_sides(ex1, ex2):
    for pkg in (ex1, ex2):
        S = symplectic_dga(pkg.h_spec, pkg.Omega2)
        assert derived_center_diagnostic(pkg.ctx, S).verdict == "inconclusive"


def test_symplectic_and_complex_cohomology_agree_when_mirror(ex1, ex2):
    for pkg in (ex1, ex2):
        S = symplectic_dga(pkg.h_spec, pkg.Omega2)
        assert cohomology(build_complex(S)).dimensions == cohomology(build_complex(pkg.ctx)).dimensions


def test_symplectic_side_is_de_rham():
    # the DGA of a symplectic form has the CE differential, so its cohomology is Lie algebra cohomology
    spec = make_spec(["a", "b"], {("a", "b"): {"b": 1}})
    S = symplectic_dga(spec, named_form(spec, {"a^b": 1}))
    assert cohomology(build_complex(S)).dimensions == [1, 1, 0]
