import json
import random
from itertools import combinations

import pytest
from hypothesis import given
from hypothesis import strategies as st

from gcdga.exterior import Multivector, evaluate_form
from gcdga.lie import (
    LieAlgebraSpec,
    SpecError,
    StructureError,
    ce_differential,
    jacobiator,
    make_spec,
    named_form,
    split,
    validate,
)
from gcdga.sampling import random_invertible, random_valid_spec
from gcdga.scalars import I, ONE, gq
from invariants import random_element

seeds = st.integers(0, 10_000)

NAMES = ["e1", "e2", "v1", "v2"]
J4 = {"e1": {"v1": 1}, "e2": {"v2": 1}, "v1": {"e1": -1}, "v2": {"e2": -1}}


def basis(n):
    return [[ONE if k == i else gq(0) for k in range(n)] for i in range(n)]


def test_kodaira_thurston_differential():
    spec = make_spec(NAMES, {("e1", "v1"): {"v2": 1}}, J4)
    assert spec.report.valid
    assert ce_differential(spec, Multivector.generator(4, 3)) == named_form(spec, {"e1^v1": -1})
    for k in range(3):
        assert ce_differential(spec, Multivector.generator(4, k)).is_zero()


def test_solvable_structure_equations():
    spec = make_spec(NAMES, {("e1", "e2"): {"e2": 1}, ("e1", "v1"): {"v1": "-1/2"},
                             ("e1", "v2"): {"v2": "1/2"}, ("e2", "v1"): {"v2": "-1/2"}}, J4)
    d = lambda k: ce_differential(spec, Multivector.generator(4, k))
    assert d(1) == named_form(spec, {"e1^e2": -1})
    assert d(2) == named_form(spec, {"e1^v1": "1/2"})
    assert d(3) == named_form(spec, {"e1^v2": "-1/2", "e2^v1": "1/2"})


def test_broken_jacobi_is_reported():
    spec = make_spec(["e1", "e2", "e3"], {("e1", "e2"): {"e3": 1}, ("e1", "e3"): {"e2": 1, "e1": 2}, ("e2", "e3"): {"e1": 1}})
    rep = validate(spec)
    assert not rep.jacobi_ok
    assert jacobiator(spec, 0, 1, 2) == [gq(0), gq(0), gq(2)]
    assert rep.messages(spec.basis_names)


def test_non_integrable_structure():
    # Heisenberg plus a line, J e1 = e3, J e2 = e4
    spec = make_spec(["e1", "e2", "e3", "e4"], {("e1", "e2"): {"e3": 1}},
                     {"e1": {"e3": 1}, "e3": {"e1": -1}, "e2": {"e4": 1}, "e4": {"e2": -1}})
    rep = validate(spec)
    assert rep.jacobi_ok and rep.j_squared_ok and rep.integrable is False
    with pytest.raises(StructureError):
        split(spec)


def test_bad_complex_structure_square():
    spec = LieAlgebraSpec(2, ("a", "b"), {}, [[0, 1], [1, 0]])
    assert validate(spec).j_squared_ok is False


def test_spec_rejects_malformed():
    with pytest.raises(SpecError):
        LieAlgebraSpec(2, ("a", "b"), {(0, 5): {0: 1}})
    with pytest.raises(SpecError):
        LieAlgebraSpec(2, ("a", "a"), {})
    with pytest.raises(SpecError):
        LieAlgebraSpec(2, ("a", "b"), {(0, 1): {0: I}}, None, real=True)
    with pytest.raises(SpecError):
        LieAlgebraSpec.from_json({"dim": 2, "brackets": [[0, 1, [[0, "x"]]]]})


@given(seeds)
def test_ce_differential_matches_pairing_formula(seed):
    rng = random.Random(seed)
    spec = random_valid_spec(rng)
    n = spec.dim
    E = basis(n)
    theta = random_element(rng, n, 1)
    d = ce_differential(spec, theta)
    for i, j in combinations(range(n), 2):
        assert evaluate_form(d, [E[i], E[j]]) == -evaluate_form(theta, [spec.bracket(E[i], E[j])])
    beta = random_element(rng, n, 2)
    d2 = ce_differential(spec, beta)
    for i, j, k in combinations(range(n), 3):
        x, y, z = E[i], E[j], E[k]
        ref = (-evaluate_form(beta, [spec.bracket(x, y), z]) + evaluate_form(beta, [spec.bracket(x, z), y])
               - evaluate_form(beta, [spec.bracket(y, z), x]))
        assert evaluate_form(d2, [x, y, z]) == ref


@given(seeds)
def test_ce_squares_to_zero(seed):
    rng = random.Random(seed)
    spec = random_valid_spec(rng)
    for k in range(0, 4):
        x = random_element(rng, spec.dim, k)
        assert ce_differential(spec, ce_differential(spec, x)).is_zero()


@given(seeds)
def test_change_of_basis_preserves_validity(seed):
    rng = random.Random(seed)
    spec = random_valid_spec(rng, 4)
    P = random_invertible(rng, spec.dim)
    other = spec.change_basis(P)
    assert other.report.valid
    # the structure of J is carried along: J' = P^-1 J P
    v = [gq(rng.randint(-2, 2)) for _ in range(spec.dim)]
    from gcdga import linalg

    Pv = linalg.matvec(P, v)
    assert linalg.matvec(P, other.J(v)) == spec.J(Pv)
    assert linalg.matvec(P, other.bracket(v, v)) == spec.bracket(Pv, Pv)


@given(seeds)
def test_json_round_trip(seed):
    spec = random_valid_spec(random.Random(seed))
    again = LieAlgebraSpec.from_json(json.loads(json.dumps(spec.to_json())))
    assert again == spec


def test_permuted_is_relabeling():
    spec = make_spec(NAMES, {("e1", "v1"): {"v2": 1}}, J4)
    p = spec.permuted([3, 2, 1, 0])
    assert p.report.valid
    assert p.basis_names == ("v2", "v1", "e2", "e1")
    assert p.constant(1, 3, 0) == -ONE  # [v1, e1] = -v2


def test_splitting_frame():
    spec = make_spec(NAMES, {("e1", "v1"): {"v2": 1}}, J4)
    sp = split(spec)
    half = gq("1/2")
    assert list(sp.holo[0]) == [half, gq(0), -I * half, gq(0)]
    assert list(sp.holo_dual[0]) == [ONE, gq(0), I, gq(0)]
    for a in range(2):
        for b in range(2):
            val = sum((x * y for x, y in zip(sp.holo_dual[a], sp.holo[b])), gq(0))
            assert val == (ONE if a == b else gq(0))
