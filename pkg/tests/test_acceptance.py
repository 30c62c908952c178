"""Acceptance criteria, one test per criterion with its wall-clock budget.

Each test prints one ``PASS``/``FAIL`` line; the lines are also collected and
repeated in the pytest terminal summary (see conftest.py). Run directly with
``python3 tests/test_acceptance.py`` for the lines alone.
"""

import json
import random
import time
from contextlib import contextmanager

from polaris import MPoly, cli
from polaris.constructions import (
    GNSpec,
    PermuttiSpec,
    core_multiplicity,
    gn_build,
    permutti_build,
    z_and_v_check,
)
from polaris.fflab import extension_family, plane_homaloidal_family, polar_degree, thickened_pairs
from polaris.poly import monomials_of_degree, poly_sum
from polaris.polarity import hessian, hessian_matrix, hessian_zero_at_points, reciprocity_sides
from polaris.scrolldual import SERIE_GRID, build_Y, inverse_degree, lift_dual, serie_verify
from polaris.subhankel import build, hessian_closed_form, hilbert_burch_check, minor_checks, verify_lemma

RESULTS: list[str] = []


@contextmanager
def criterion(num: int, title: str, limit: float):
    t0 = time.perf_counter()
    status, why = "FAIL", ""
    try:
        yield
        status = "PASS"
    except AssertionError as exc:
        why = f" ({exc})" if str(exc) else ""
        raise
    finally:
        dt = time.perf_counter() - t0
        if status == "PASS" and dt >= limit:
            status, why = "FAIL", " (over time budget)"
        line = f"{status} criterion {num:2d}: {title} [{dt:.1f}s / {limit:.0f}s]{why}"
        RESULTS.append(line)
        print(line)
    assert dt < limit, line


def test_c01_subhankel_lemma():
    with criterion(1, "sub-Hankel lemma identities r=2..8", 30):
        for r in range(2, 9):
            rep = verify_lemma(build(r))
            assert rep.ok, f"r={r}: {rep.failures}"


def test_c02_hessian_closed_form():
    with criterion(2, "Hessian closed form r=2..6", 60):
        for r in range(2, 7):
            b = build(r)
            rep = hessian_closed_form(b)
            assert rep.exponent == (r + 1) * (r - 2) and rep.c not in (None, 0), f"r={r}"
            assert rep.closed_form_ok and rep.method == "symbolic", f"r={r}"
            print(f"  r={r} c={rep.c}")
            H = hessian_matrix(b.f)
            for i in range(r + 1):
                for j in range(r - i):
                    assert H[i, j].is_zero(), f"r={r} entry ({i},{j})"


def test_c03_hilbert_burch():
    with criterion(3, "Hilbert-Burch minors r=2..6", 60):
        for r in range(2, 7):
            b = build(r)
            for i in range(1, r):
                mr = minor_checks(b, i)
                assert mr.delta1_ok and mr.delta2_coprime_to_xr, f"r={r} i={i}"
                hb = hilbert_burch_check(b, i)
                assert hb.ok and hb.scalar not in (None, 0), f"r={r} i={i}"


def test_c04_subhankel_homaloidal():
    with criterion(4, "sub-Hankel f^(2), f^(3) homaloidal", 120):
        for r, p in ((2, 101), (3, 41)):
            est = polar_degree(build(r).f, p, seed=0)
            assert est.verdict == "delta_eq(1)", f"r={r}: {est.verdict}"
            assert est.singleton_samples >= 200 and est.image_ratio >= 0.95, f"r={r}"


def test_c05_dolgachev():
    with criterion(5, "plane homaloidal classification", 60):
        fam = plane_homaloidal_family()
        for name in ("smooth_conic", "three_general_lines", "conic_and_tangent_line"):
            assert polar_degree(fam[name], 101, seed=7).verdict == "delta_eq(1)", name
        f = fam["three_concurrent_lines"]
        assert polar_degree(f, 101, seed=7).verdict == "not_dominant"
        rep = hessian(f, "symbolic")
        assert rep.hessian_det is not None and rep.hessian_det.is_zero()


def test_c06_extension_suite():
    with criterion(6, "extension families r=3 at p=41", 120):
        for name, f in extension_family(3).items():
            assert polar_degree(f, 41).verdict == "delta_eq(1)", name


GN_TYPES = ((4, 2, 1, 3, 4), (4, 2, 1, 3, 5), (5, 2, 1, 3, 4), (5, 3, 1, 3, 4), (4, 2, 1, 5, 6))
PERMUTTI_TYPES = ((4, 2, 2, 4), (4, 2, 3, 6), (5, 3, 2, 4), (5, 2, 3, 6), (5, 3, 4, 8))
ZV_TYPES = ((4, 2, 3, 6), (5, 2, 3, 6), (5, 3, 4, 8))


def test_c07_vanishing_hessians():
    with criterion(7, "GN/Permutti vanishing Hessians, z and v", 300):
        for k in range(10):
            spec = GNSpec(*GN_TYPES[k % 5], seed=k)
            assert hessian_zero_at_points(gn_build(spec).f, 1000, 32003, seed=k), f"GN {spec}"
            pspec = PermuttiSpec(*PERMUTTI_TYPES[k % 5], seed=k)
            assert hessian_zero_at_points(permutti_build(pspec).f, 1000, 32003, seed=k), f"Permutti {pspec}"
        for typ in ZV_TYPES:
            spec = PermuttiSpec(*typ, seed=0)
            rep = z_and_v_check(permutti_build(spec).f, spec)
            assert rep.ok, json.dumps(rep.to_json(), default=str)


def test_c08_core_multiplicity():
    with criterion(8, "core multiplicity", 60):
        for typ in ((4, 2, 3, 6), (5, 2, 3, 6), (5, 3, 4, 8), (4, 2, 3, 7)):
            for seed in range(3):
                spec = PermuttiSpec(*typ, seed=seed)
                assert core_multiplicity(permutti_build(spec).f, spec.t) == spec.d - spec.mu, f"{spec}"
        for typ in GN_TYPES:
            spec = GNSpec(*typ, seed=1)
            assert core_multiplicity(gn_build(spec).f, spec.t) >= spec.d - spec.mu, f"{spec}"


def test_c09_scroll_dual_series():
    with criterion(9, "scroll-dual series grid", 900):
        for r, d in SERIE_GRID:
            rep = serie_verify(r, d, seed=0)
            assert rep.ok, f"(r,d)=({r},{d}): {rep.to_json()}"
            assert rep.kernel_dims == (0, 1) and rep.multiplicity == d - (r - 2)


def test_c10_inverse_degree():
    with criterion(10, "inverse degree of Y(1,2)*, Y(1,3)*", 600):
        for b, expected in ((2, 3), (3, 5)):
            f = lift_dual(build_Y(1, b, seed=0), 1 + b, seed=0).form
            res = inverse_degree(f, seed=0)
            assert res.degree == expected and res.held_out_ok, f"b={b}: {res.degree}"


def _random_form(rng: random.Random) -> MPoly:
    n, d = rng.randint(2, 5), rng.randint(1, 5)
    mons = monomials_of_degree(n, d)
    picked = rng.sample(mons, min(len(mons), rng.randint(1, 8)))
    return MPoly(n, {m: rng.choice([c for c in range(-9, 10) if c]) for m in picked})


def _report_text(argv):
    _, report = cli.run(argv + ["--quiet", "--out", "/dev/null"])
    report = dict(report)
    report.pop("wall_time", None)
    return cli.dumps(report)


def test_c11_property_suites():
    with criterion(11, "reciprocity, Euler, thickened pairs, determinism", 300):
        rng = random.Random(11)
        done = 0
        while done < 50:
            f = _random_form(rng)
            if f.degree() < 2:
                continue
            n, d = f.nvars, f.degree()
            p = [rng.randint(-5, 5) for _ in range(n)]
            q = [rng.randint(-5, 5) for _ in range(n)]
            if not any(p) or not any(q):
                continue
            s = rng.randint(1, d - 1)
            left, right = reciprocity_sides(f, p, q, s)
            assert left == right, f"reciprocity {f} {p} {q} {s}"
            done += 1
        for _ in range(100):
            f = _random_form(rng)
            xs = MPoly.gens(f.nvars)
            assert poly_sum((xs[i] * f.diff(i) for i in range(f.nvars)), f.nvars) == f.scale(f.degree())
        for name, f, g in thickened_pairs():
            assert polar_degree(f, 101, seed=2).verdict == polar_degree(g, 101, seed=2).verdict, name
        for argv in (["suite", "--name", "dolgachev", "--seed", "7"],
                     ["suite", "--name", "ext", "--r", "3", "--seed", "3"],
                     ["scroll-dual", "--a", "1", "--b", "2", "--seed", "5"]):
            assert _report_text(argv) == _report_text(argv), " ".join(argv)


if __name__ == "__main__":
    import sys

    failed = 0
    for name, fn in sorted((k, v) for k, v in dict(globals()).items() if k.startswith("test_c")):
        try:
            fn()
        except AssertionError:
            failed += 1
    sys.exit(1 if failed else 0)
