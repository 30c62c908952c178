import numpy as np
import pytest

from polaris import parse
from polaris.fflab import (
    BadPrime,
    GuardExceeded,
    count_points,
    enumerate_points,
    extension_family,
    homaloidal_series_suite,
    normalize,
    plane_homaloidal_family,
    point_keys,
    polar_degree,
    thickened_pairs,
)
from polaris.subhankel import build


def test_enumeration_counts_and_uniqueness():
    pts = enumerate_points(2, 7)
    assert pts.shape == (count_points(2, 7), 3) == (57, 3)
    keys = point_keys(pts, 7)
    assert np.unique(keys).size == 57
    first = pts[np.arange(57), np.argmax(pts != 0, axis=1)]
    assert (first == 1).all()


def test_enumeration_guard():
    with pytest.raises(GuardExceeded):
        enumerate_points(5, 101)


def test_normalize_projective():
    rows = np.array([[0, 3, 6], [2, 4, 0], [0, 0, 0]], dtype=np.int64)
    out, nz = normalize(rows, 7)
    assert out[0].tolist() == [0, 1, 2] and out[1].tolist() == [1, 2, 0]
    assert nz.tolist() == [True, True, False]


def test_dolgachev_family():
    fam = plane_homaloidal_family()
    for name in ("smooth_conic", "three_general_lines", "conic_and_tangent_line"):
        est = polar_degree(fam[name], 101, seed=7)
        assert est.verdict == "delta_eq(1)", name
    est = polar_degree(fam["three_concurrent_lines"], 101, seed=7)
    assert est.verdict == "not_dominant"


def test_fermat_cubic_degree_four():
    # a smooth plane cubic has polar degree (d-1)^2 = 4; heuristic verdict only
    est = polar_degree(parse("x0^3 + x1^3 + x2^3"), 101, seed=0)
    assert est.verdict in ("delta_eq(4)", "delta_ge(4)", "delta_ge(2)", "delta_ge(3)")
    assert est.heuristic and est.verdict != "delta_eq(1)"


def test_subhankel_homaloidal():
    est = polar_degree(build(2).f, 101, seed=0)
    assert est.verdict == "delta_eq(1)" and est.singleton_samples >= 200
    est = polar_degree(build(3).f, 41, seed=0)
    assert est.verdict == "delta_eq(1)" and est.image_ratio >= 0.95


def test_fiber_conservation_r2():
    est = polar_degree(parse("x0*x1*x2"), 31, seed=1)
    total = sum(size * count for size, count in est.image_histogram.items())
    assert total == est.nonbase_points


def test_scaling_invariance():
    f = parse("x0*x2^2 - x1^2*x2")
    a = polar_degree(f, 101, seed=3)
    b = polar_degree(f.scale(-7), 101, seed=3)
    assert a.to_json() == b.to_json()


def test_bad_prime():
    with pytest.raises(BadPrime):
        polar_degree(parse("x0^3 + x1^3 + x2^3"), 3)


def test_too_few_samples_inconclusive():
    est = polar_degree(parse("x0*x2 - x1^2"), 7, samples=10_000)
    assert est.verdict == "inconclusive"


def test_map_input():
    x = [parse(s, 3) for s in ("x1*x2", "x0*x2", "x0*x1")]
    assert polar_degree(x, 101).verdict == "delta_eq(1)"


@pytest.mark.parametrize("r", [2, 3])
def test_extension_family(r):
    for name, f in extension_family(r).items():
        assert polar_degree(f).verdict == "delta_eq(1)", name


def test_series_suite_r3():
    rep = homaloidal_series_suite(3)
    assert rep.ok and rep.p == 41


def test_thickened_pairs_agree():
    for name, f, g in thickened_pairs():
        a = polar_degree(f, 101, seed=2)
        b = polar_degree(g, 101, seed=2)
        assert a.verdict == b.verdict, name


def test_histogram_csv():
    est = polar_degree(parse("x0*x2 - x1^2"), 101)
    lines = est.histogram_csv().splitlines()
    assert lines[0] == "fiber_size,count" and lines[1] == f"1,{est.samples}"
