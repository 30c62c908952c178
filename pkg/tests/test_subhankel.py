import pytest

from polaris import MPoly, parse
from polaris.matrix import monomial_content, no_common_factor_probabilistic
from polaris.polarity import hessian_matrix
from polaris.subhankel import (
    OrderError,
    build,
    hessian_closed_form,
    hilbert_burch_check,
    irreducibility_structure,
    minor_checks,
    presentation_matrix,
    verify_lemma,
    xi,
)


def test_build_small_cases():
    assert build(2).f == parse("x0*x2 - x1^2")
    assert build(3).f == parse("2*x1*x2*x3 - x0*x3^2 - x2^3")
    assert build(3).f == -parse("x2^3 - 2*x1*x2*x3 + x0*x3^2")


def test_matrix_shape_and_zeros():
    b = build(4)
    assert b.M.shape == (4, 4)
    for i in range(4):
        for j in range(4):
            assert b.M[i, j].is_zero() == (i + j > 4)


def test_order_guard():
    with pytest.raises(OrderError):
        build(1)
    with pytest.raises(OrderError):
        build(11)


@pytest.mark.parametrize("r", range(2, 7))
def test_linear_in_x0(r):
    f = build(r).f
    assert f.degree_in(0) == 1
    rep = irreducibility_structure(build(r))
    assert rep.ok


def test_irreducibility_r3_coefficient():
    rep = irreducibility_structure(build(3))
    assert rep.x0_coefficient == parse("-x3^2", 4)
    assert rep.sign == -1


def test_lemma_iii_a_example():
    fs = build(3).partials
    x = MPoly.gens(4)
    assert x[3] * fs[1] == (x[2] * fs[0]).scale(-2)


@pytest.mark.parametrize("r", range(2, 9))
def test_lemma_all_parts(r):
    rep = verify_lemma(build(r))
    assert rep.ok, rep.failures
    assert all(v for k, v in rep.to_json().items() if k.startswith("part"))


def test_lemma_content_example():
    fs = build(4).partials
    assert monomial_content(fs[:3]) == (0, 0, 0, 0, 1)
    assert monomial_content(fs[:2]) == (0, 0, 0, 0, 2)


def test_lemma_cofactor_free_r4():
    fs = build(4).partials
    content = monomial_content(fs[:4])
    assert no_common_factor_probabilistic([g.div_monomial(content) for g in fs[:4]])


def test_presentation_matrix_r2():
    phi = presentation_matrix(2, 1)
    assert phi.shape == (2, 1)
    assert phi[0, 0] == parse("2*x1", 3) and phi[1, 0] == parse("x2", 3)


def test_minors_r2():
    rep = minor_checks(build(2), 1)
    assert rep.delta1 == parse("x2", 3) and rep.delta2 == parse("2*x1", 3)
    assert rep.ok


def test_minors_r3_i2():
    rep = minor_checks(build(3), 2)
    assert rep.delta1 in (parse("x3^2", 4), parse("-x3^2", 4))
    assert rep.delta2_coeff in (3, -3)
    assert rep.ok


@pytest.mark.parametrize("r", range(2, 7))
def test_minors_and_hilbert_burch(r):
    b = build(r)
    for i in range(1, r):
        assert minor_checks(b, i).ok
        hb = hilbert_burch_check(b, i)
        assert hb.ok and hb.syzygy_ok, hb.failures
        assert hb.scalar not in (None, 0)


def test_hilbert_burch_r2():
    hb = hilbert_burch_check(build(2), 1)
    assert hb.scalar == 1
    fs = build(2).partials
    assert (fs[0], fs[1]) == (parse("x2", 3), parse("-2*x1", 3))


def test_hilbert_burch_records_gap():
    js = hilbert_burch_check(build(4), 3).to_json()
    assert "Groebner" in js["gap"] and js["convention"]


@pytest.mark.parametrize("r", range(2, 7))
def test_hessian_closed_form(r):
    rep = hessian_closed_form(build(r))
    assert rep.exponent == (r + 1) * (r - 2)
    assert rep.ok and rep.method == "symbolic"


def test_hessian_closed_form_r2_constant():
    rep = hessian_closed_form(build(2))
    assert rep.c == 2 and rep.exponent == 0


def test_hessian_probabilistic_beyond_symbolic():
    rep = hessian_closed_form(build(7))
    assert rep.ok and rep.method.startswith("probabilistic")


@pytest.mark.parametrize("r", [3, 5])
def test_anti_triangular(r):
    H = hessian_matrix(build(r).f)
    for i in range(r + 1):
        for j in range(r + 1):
            if i + j <= r - 1:
                assert H[i, j].is_zero()


def test_xi_is_sign():
    assert {xi(r) for r in range(2, 9)} <= {1, -1}


@pytest.mark.parametrize("r", range(2, 9))
def test_x0_coefficient_sign_is_xi(r):
    # sign fixed by cofactor expansion: +xi(r) x_r^(r-1)
    rep = irreducibility_structure(build(r))
    assert rep.sign == xi(r)
