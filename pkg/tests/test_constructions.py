import json

import pytest

from polaris import MPoly, parse
from polaris.constructions import (
    DegenerateSpecError,
    GNSpec,
    PermuttiSpec,
    core_multiplicity,
    gn_as_permutti,
    gn_build,
    gn_degrees,
    load_spec,
    permutti_build,
    v_expected,
    z_and_v_check,
    z_expected,
)
from polaris.polarity import hessian_zero_at_points, is_cone


def test_gn_degree_bookkeeping():
    assert gn_degrees(1, 3) == (2, 1)
    assert gn_degrees(1, 5) == (3, 1)
    with pytest.raises(DegenerateSpecError):
        gn_degrees(1, 4)


@pytest.mark.parametrize("bad", [(4, 2, 1, 1, 3), (4, 3, 1, 3, 4), (4, 2, 2, 3, 4), (4, 2, 1, 3, 3)])
def test_gn_spec_rejections(bad):
    with pytest.raises(DegenerateSpecError):
        GNSpec(*bad).validate()


def test_gn_type_421_single_q():
    res = gn_build(GNSpec(4, 2, 1, 3, 4, seed=1))
    assert len(res.Q) == 1
    assert res.Q[0].is_homogeneous() and res.Q[0].degree() == 3
    assert res.f.is_homogeneous() and res.f.degree() == 4
    # Q is the Laplace expansion along the row x_0 .. x_2
    x = MPoly.gens(5)
    assert res.Q[0] == res.M[0][0] * x[0] + res.M[0][1] * x[1] + res.M[0][2] * x[2]


def test_gn_shipped_example_not_a_cone():
    res = gn_build(GNSpec(4, 2, 1, 3, 4, seed=2))
    assert not is_cone(res.f).is_cone
    assert hessian_zero_at_points(res.f, 1000, seed=2)


def test_gn_seeded_is_deterministic():
    a = gn_build(GNSpec(5, 2, 1, 3, 4, seed=7)).f
    b = gn_build(GNSpec(5, 2, 1, 3, 4, seed=7)).f
    c = gn_build(GNSpec(5, 2, 1, 3, 4, seed=8)).f
    assert a == b and a != c


@pytest.mark.parametrize("seed", range(4))
def test_gn_vanishing_hessian_and_core(seed):
    spec = GNSpec(4, 2, 1, 3, 5, seed=seed)
    f = gn_build(spec).f
    assert hessian_zero_at_points(f, 1000, seed=seed)
    assert core_multiplicity(f, spec.t) >= spec.d - spec.mu


def test_gn_equals_permutti_structurally():
    res = gn_build(GNSpec(4, 2, 1, 3, 5, seed=3))
    pspec = gn_as_permutti(res)
    pres = permutti_build(pspec)
    assert pres.f == res.f
    assert pres.Q == res.Q[0]


def test_permutti_examples():
    f = permutti_build(PermuttiSpec(4, 2, 2, 4, seed=1)).f
    assert f.degree() == 4 and hessian_zero_at_points(f, 1000, seed=1)
    assert core_multiplicity(f, 2) == 2
    f = permutti_build(PermuttiSpec(5, 3, 2, 4, seed=3)).f
    assert hessian_zero_at_points(f, 1000, seed=3)


def test_permutti_small_n_is_cone():
    # t = 1 or n <= 2 with mu > r - t - 2 gives a cone
    f = permutti_build(PermuttiSpec(4, 2, 2, 4, seed=0)).f
    assert is_cone(f).is_cone
    f = permutti_build(PermuttiSpec(4, 1, 3, 6, seed=0)).f
    assert is_cone(f).is_cone


@pytest.mark.parametrize("typ", [(4, 2, 3, 6), (5, 2, 3, 6), (5, 3, 4, 8), (4, 2, 3, 7)])
@pytest.mark.parametrize("seed", [0, 1])
def test_permutti_core_multiplicity_exact(typ, seed):
    spec = PermuttiSpec(*typ, seed=seed)
    f = permutti_build(spec).f
    assert core_multiplicity(f, spec.t) == spec.d - spec.mu


def test_core_multiplicity_support_rule():
    f = parse("x0*x3 + x1*x4^2 + x2*x3*x4", 5)
    assert core_multiplicity(f, 2) >= 1


def test_expected_z_v():
    assert z_expected(4, 2) == 3
    assert z_expected(5, 3) == 3
    assert z_expected(5, 2) == 4
    assert v_expected(5, 3) == 2


@pytest.mark.parametrize("typ", [(4, 2, 3, 6), (5, 3, 4, 8), (5, 2, 3, 6)])
def test_z_and_v(typ):
    spec = PermuttiSpec(*typ, seed=0)
    rep = z_and_v_check(permutti_build(spec).f, spec)
    assert rep.ok, rep.to_json()


def test_load_spec_json():
    spec = load_spec(json.dumps({"type": "gn", "r": 4, "t": 2, "m": 1, "n": 3, "d": 4, "seed": 2}))
    assert isinstance(spec, GNSpec) and spec.seed == 2
    spec = load_spec(json.dumps({"type": "permutti", "r": 4, "t": 2, "n": 2, "d": 4,
                                 "M": ["x3", "x4", "x3 + x4"], "P": ["x3^4", "x4^2", "1"]}))
    res = permutti_build(spec)
    assert res.f.is_homogeneous() and res.f.degree() == 4
    with pytest.raises(Exception):
        load_spec('{"type": "other", "r": 4}')
