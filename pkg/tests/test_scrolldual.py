import math

import numpy as np
import pytest

from polaris import MPoly, kernels, parse
from polaris.fflab import polar_degree
from polaris.matrix import field_rank
from polaris.poly import PolyError
from polaris.polarity import is_cone
from polaris.scrolldual import (
    ScrollError,
    build_Y,
    check_out_of_sample,
    dual_interpolate,
    dual_of_Y,
    dual_sample,
    identity_chain,
    InterpolationError,
    inverse_degree,
    lift_dual,
    multiplicity_along,
    required_samples,
    scroll_param,
    serie_verify,
)
from polaris.subhankel import build

P = 32003


def test_scroll_param_s12():
    sp = scroll_param(1, 2)
    s, t, u, v = MPoly.gens(4)
    assert sp.forms == (u * s, u * t, v * s * s, v * s * t, v * t * t)
    assert sp.minors_vanish()


@pytest.mark.parametrize("ab", [(1, 2), (1, 4), (2, 3), (2, 2), (3, 4)])
def test_catalecticant_minors_vanish(ab):
    assert scroll_param(*ab).minors_vanish()


def test_scroll_param_guards():
    with pytest.raises(ScrollError):
        scroll_param(2, 1)
    with pytest.raises(ScrollError):
        scroll_param(1, 1)


def test_s12_dual_is_cubic():
    ch = identity_chain(1, 2)
    samp = dual_sample(ch, required_samples(3, 4), P, seed=0)
    form = dual_interpolate(samp, 3)
    assert (form.kernel_dim_below, form.kernel_dim_at) == (0, 1)


@pytest.mark.parametrize("ab,target", [((1, 2), 3), ((1, 4), 3), ((2, 3), 4)])
def test_build_Y_shapes(ab, target):
    ch = build_Y(*ab, seed=0)
    a, b = ab
    assert ch.target_dim == target == a + 2
    assert len(ch.center_2) == b - a  # dim Psi = b-a-1
    assert len(ch.center_1) == a - 1
    assert field_rank(ch.matrix) == a + 3
    assert (ch.e, ch.mu) == (b, a)
    for st in ch.stages:
        assert field_rank(st) == len(st)


def test_build_Y_center_incidences():
    ch = build_Y(2, 3, seed=1)
    # center_1 lies in <E>, the first a+1 coordinates
    assert all(not any(v[3:]) for v in ch.center_1)
    # Psi lies in Phi = <Lambda, rulings> and misses Lambda
    lam = ch.lambda_basis
    assert field_rank(ch.center_2 + lam) == len(ch.center_2) + 2


def test_build_Y_requires_a_lt_b():
    with pytest.raises(ScrollError):
        build_Y(2, 2)


def test_samples_satisfy_form_and_fresh_points():
    ch, samp, form = dual_of_Y(1, 2, seed=0)
    assert not kernels.eval_mod_p(form.form, samp.points, P).any()
    assert check_out_of_sample(ch, form, seed=5)


@pytest.mark.parametrize("ab", [(1, 2), (1, 3), (1, 4), (2, 3)])
def test_interpolation_degree_is_a_plus_b(ab):
    _, _, form = dual_of_Y(*ab, seed=0)
    assert form.d == sum(ab)
    assert (form.kernel_dim_below, form.kernel_dim_at) == (0, 1)


def test_resample_rate_y23():
    _, samp, _ = dual_of_Y(2, 3, seed=0)
    assert samp.resample_rate < 0.05


def test_interpolation_errors():
    ch = build_Y(1, 2, seed=0)
    samp = dual_sample(ch, 10, P)
    with pytest.raises(InterpolationError):
        dual_interpolate(samp, 3)
    samp = dual_sample(ch, required_samples(2, 3), P)
    with pytest.raises(InterpolationError):
        dual_interpolate(samp, 2)


def test_lift_verifies_and_matches_mod_p():
    ch, _, form = dual_of_Y(1, 3, seed=0)
    lifted = lift_dual(ch, 4, seed=0)
    f = lifted.form
    assert f.is_homogeneous() and f.degree() == 4
    # the lift reduces to a multiple of the F_p interpolant
    fp = f.reduce_mod(P).monic()
    assert fp == form.form.monic()


@pytest.mark.parametrize("ab", [(1, 2), (1, 3), (1, 4), (2, 3)])
def test_multiplicity_along_L_perp(ab):
    a, b = ab
    ch = build_Y(a, b, seed=0)
    d = a + b
    f = lift_dual(ch, d, seed=0).form
    assert multiplicity_along(f, *ch.L_perp_forms()) == d - a  # mu = a


def test_multiplicity_double_line_of_subhankel_cubic():
    f = build(3).f
    assert multiplicity_along(f, parse("x2", 4), parse("x3", 4)) == 2


def test_multiplicity_needs_independent_forms():
    f = build(3).f
    with pytest.raises(PolyError):
        multiplicity_along(f, parse("x2", 4), parse("2*x2", 4))


def test_y12_dual_invariants():
    ch = build_Y(1, 2, seed=0)
    f = lift_dual(ch, 3, seed=0).form
    assert not is_cone(f).is_cone
    assert polar_degree(f, 41).verdict == "delta_eq(1)"


def test_inverse_degree_quadric():
    assert inverse_degree(parse("x0*x3 - x1*x2")).degree == 1


def test_inverse_degree_subhankel_cubic():
    assert inverse_degree(build(3).f).degree == 3


@pytest.mark.parametrize("b,expected", [(2, 3), (3, 5)])
def test_inverse_degree_y1b(b, expected):
    ch = build_Y(1, b, seed=0)
    f = lift_dual(ch, 1 + b, seed=0).form
    res = inverse_degree(f, seed=0)
    assert res.degree == expected == 2 * (1 + b) - 3
    assert res.held_out_ok and res.kernel_dims[expected] == 1


@pytest.mark.parametrize("rd", [(3, 3), (3, 5)])
def test_serie_verify(rd):
    rep = serie_verify(*rd, seed=0)
    assert rep.ok, rep.to_json()
    assert rep.multiplicity == rd[1] - (rd[0] - 2)


def test_serie_guards():
    with pytest.raises(ScrollError):
        serie_verify(5, 8)
    with pytest.raises(ScrollError):
        serie_verify(4, 4)


def test_required_samples():
    assert required_samples(5, 4) == math.ceil(1.2 * math.comb(9, 4))


def test_chain_json_is_plain():
    js = build_Y(2, 3, seed=4).to_json()
    assert js["e"] == 3 and js["mu"] == 2 and js["nu"] == 3
    assert isinstance(js["L"][0][0], int)
    assert np.asarray(js["stages"][0]).ndim == 2
