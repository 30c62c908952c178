"""Command-line front end: runs check pipelines and writes JSON reports.

Exit codes: 0 no failed check, 1 some check failed, 2 usage or input error,
3 every check inconclusive.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from typing import Callable, Optional, Sequence

from . import __version__, constructions, fflab, kernels, polarity, scrolldual, subhankel
from .fields import FieldError, PrimeField
from .poly import MPoly, PolyError, parse

SCHEMA = 1
EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_INCONCLUSIVE = 0, 1, 2, 3
STATUSES = ("pass", "fail", "heuristic-pass", "inconclusive")

DEFAULTS = {
    "degree_primes": {str(k): v for k, v in fflab.DEFAULT_PRIMES.items()},
    "samples": fflab.DEFAULT_SAMPLES,
    "eps": fflab.DEFAULT_EPS,
    "hessian_prime": polarity.HESSIAN_PRIME,
    "hessian_points": 1000,
    "dual_prime": scrolldual.DUAL_PRIME,
    "gauss_prime": 101,
    "seed": 0,
}

GN_SUITE_TYPES = ((4, 2, 1, 3, 4), (4, 2, 1, 3, 5), (5, 2, 1, 3, 4), (5, 3, 1, 3, 4), (4, 2, 1, 5, 6))
PERMUTTI_SUITE_TYPES = ((4, 2, 2, 4), (4, 2, 3, 6), (5, 3, 2, 4), (5, 2, 3, 6), (5, 3, 4, 8))
ZV_TYPES = ((4, 2, 3, 6), (5, 3, 4, 8), (5, 2, 3, 6))


class UsageError(Exception):
    pass


def check(name: str, status: str, payload: Optional[dict] = None) -> dict:
    assert status in STATUSES
    return {"name": name, "status": status, "payload": payload or {}}


def passfail(ok: bool) -> str:
    return "pass" if ok else "fail"


def exit_code(checks: Sequence[dict]) -> int:
    statuses = [c["status"] for c in checks]
    if "fail" in statuses:
        return EXIT_FAIL
    if statuses and all(s == "inconclusive" for s in statuses):
        return EXIT_INCONCLUSIVE
    return EXIT_OK


# individual pipelines (top-level so they can run in worker processes)

def _subhankel_checks(r: int, checks: Sequence[str], seed: int) -> list[dict]:
    b = subhankel.build(r)
    out = [check(f"subhankel.r{r}.f", "pass", {"f": b.f.to_str()})] if "poly" in checks else []
    if "lemma" in checks:
        rep = subhankel.verify_lemma(b, seed)
        out.append(check(f"subhankel.r{r}.lemma", passfail(rep.ok), rep.to_json()))
    if "minors" in checks:
        for i in range(1, r):
            rep = subhankel.minor_checks(b, i)
            out.append(check(f"subhankel.r{r}.minors.i{i}", passfail(rep.ok), rep.to_json()))
    if "hb" in checks:
        for i in range(1, r):
            rep = subhankel.hilbert_burch_check(b, i)
            out.append(check(f"subhankel.r{r}.hilbert_burch.i{i}", passfail(rep.ok and rep.syzygy_ok),
                             rep.to_json()))
    if "hessian" in checks:
        rep = subhankel.hessian_closed_form(b, seed=seed)
        status = passfail(rep.ok)
        if rep.ok and rep.method != "symbolic":
            status = "heuristic-pass"
        out.append(check(f"subhankel.r{r}.hessian", status, rep.to_json()))
    if "irred" in checks:
        rep = subhankel.irreducibility_structure(b)
        out.append(check(f"subhankel.r{r}.irreducibility", passfail(rep.ok), rep.to_json()))
    return out


def _degree_check(name: str, f, p: int, samples: int, seed: int, eps: float, expect: str) -> dict:
    est = fflab.polar_degree(f, p, samples, seed, eps)
    payload = est.to_json()
    payload["expected"] = expect
    if est.verdict == expect:
        return check(name, "pass", payload)
    if est.verdict == "inconclusive":
        return check(name, "inconclusive", payload)
    return check(name, "fail", payload)


def _dolgachev_checks(p: int, samples: int, seed: int, eps: float) -> list[dict]:
    out = []
    for name, f in fflab.plane_homaloidal_family().items():
        if name == "three_concurrent_lines":
            c = _degree_check(f"dolgachev.{name}", f, p, samples, seed, eps, "not_dominant")
            hs = polarity.hessian(f, "symbolic")
            c["payload"]["hessian"] = hs.to_json()
            if c["status"] == "pass" and not hs.symbolic_zero:
                c["status"] = "fail"
            out.append(c)
        else:
            out.append(_degree_check(f"dolgachev.{name}", f, p, samples, seed, eps, "delta_eq(1)"))
    return out


def _nored_checks(p: int, samples: int, seed: int, eps: float) -> list[dict]:
    out = []
    for name, f, g in fflab.thickened_pairs():
        a = fflab.polar_degree(f, p, samples, seed, eps)
        b = fflab.polar_degree(g, p, samples, seed, eps)
        out.append(check(f"nored.{name}", passfail(a.verdict == b.verdict),
                         {"reduced": a.verdict, "thickened": b.verdict, "p": p}))
    return out


def _ext_checks(r: int, p: int, samples: int, seed: int, eps: float) -> list[dict]:
    return [_degree_check(f"ext.r{r}.{name}", f, p, samples, seed, eps, "delta_eq(1)")
            for name, f in fflab.extension_family(r).items()]


def _gn_checks(spec: constructions.GNSpec, points: int) -> list[dict]:
    res = constructions.gn_build(spec)
    f = res.f
    tag = f"gn.{spec.r}.{spec.t}.{spec.m}.{spec.n}.d{spec.d}.s{spec.seed}"
    zero = polarity.hessian_zero_at_points(f, points, seed=spec.seed)
    mult = constructions.core_multiplicity(f, spec.t)
    base = {"f": f.to_str(), "terms": len(f.terms)}
    return [
        check(f"{tag}.vanishing_hessian", passfail(zero),
              {**base, "points": points, "p": polarity.HESSIAN_PRIME, "seed": spec.seed}),
        check(f"{tag}.core_multiplicity", passfail(mult >= spec.d - spec.mu),
              {"multiplicity": mult, "lower_bound": spec.d - spec.mu}),
        check(f"{tag}.cone", "pass", {"is_cone": polarity.is_cone(f).is_cone}),
    ]


def _permutti_checks(spec: constructions.PermuttiSpec, points: int, zv: bool) -> list[dict]:
    res = constructions.permutti_build(spec)
    f = res.f
    tag = f"permutti.{spec.r}.{spec.t}.{spec.n}.d{spec.d}.s{spec.seed}"
    zero = polarity.hessian_zero_at_points(f, points, seed=spec.seed)
    mult = constructions.core_multiplicity(f, spec.t)
    out = [
        check(f"{tag}.vanishing_hessian", passfail(zero),
              {"f": f.to_str(), "points": points, "p": polarity.HESSIAN_PRIME, "seed": spec.seed,
               "reseeds": res.reseeds}),
        check(f"{tag}.core_multiplicity", passfail(mult == spec.d - spec.mu),
              {"multiplicity": mult, "expected": spec.d - spec.mu}),
        check(f"{tag}.cone", "pass", {"is_cone": polarity.is_cone(f).is_cone}),
    ]
    if zv:
        rep = constructions.z_and_v_check(f, spec, seed=spec.seed)
        out.append(check(f"{tag}.z_and_v", passfail(rep.ok), rep.to_json()))
    return out


def _serie_checks(r: int, d: int, seed: int, samples: int) -> list[dict]:
    rep = scrolldual.serie_verify(r, d, seed=seed, samples=samples)
    return [check(f"serie.r{r}.d{d}", passfail(rep.ok), rep.to_json())]


def _scroll_checks(a: int, b: int, p: int, samples: Optional[int], seed: int, verify_degree: bool,
                   inverse: bool, degree_samples: int) -> list[dict]:
    d = a + b
    chain = scrolldual.build_Y(a, b, seed)
    need = scrolldual.required_samples(d, a + 2)
    n = max(samples or need, need)
    samp = scrolldual.dual_sample(chain, n, p, seed)
    tag = f"scroll_dual.Y{a}_{b}"
    try:
        interp = scrolldual.dual_interpolate(samp, d, p)
    except scrolldual.InterpolationError as exc:
        return [check(f"{tag}.interpolate", "fail", {"error": str(exc), "chain": chain.to_json()})]
    out = [
        check(f"{tag}.interpolate", passfail((interp.kernel_dim_below, interp.kernel_dim_at) == (0, 1)),
              {**interp.to_json(), "chain": chain.to_json(), "resample_rate": round(samp.resample_rate, 6)}),
        check(f"{tag}.out_of_sample", passfail(scrolldual.check_out_of_sample(chain, interp, seed=seed)),
              {"points": scrolldual.HELD_OUT}),
    ]
    if not (verify_degree or inverse):
        return out
    lifted = scrolldual.lift_dual(chain, d, seed)
    f = lifted.form
    mult = scrolldual.multiplicity_along(f, *chain.L_perp_forms())
    out.append(check(f"{tag}.lift", "pass", {"form": f.to_str(), "primes": lifted.primes,
                                              "verified_at": lifted.verified_at}))
    out.append(check(f"{tag}.multiplicity_along_L_perp", passfail(mult == d - chain.mu),
                     {"multiplicity": mult, "expected": d - chain.mu}))
    if verify_degree:
        q = fflab.DEFAULT_PRIMES.get(a + 2, 23)
        out.append(_degree_check(f"{tag}.polar_degree", f, q, degree_samples, seed, fflab.DEFAULT_EPS,
                                 "delta_eq(1)"))
    if inverse:
        res = scrolldual.inverse_degree(f, seed=seed)
        payload = res.to_json()
        payload["expected_if_a_is_1"] = 2 * d - 3
        status = "pass" if res.degree is not None else "fail"
        if a == 1 and res.degree != 2 * d - 3:
            status = "fail"
        out.append(check(f"{tag}.inverse_degree", status, payload))
    return out


# dispatch helpers

def _run_tasks(tasks: list[tuple[Callable, tuple]], threads: int) -> list[dict]:
    if threads <= 1 or len(tasks) <= 1:
        results = [fn(*args) for fn, args in tasks]
    else:
        with ProcessPoolExecutor(max_workers=min(threads, len(tasks))) as pool:
            futures = [pool.submit(fn, *args) for fn, args in tasks]
            results = [fut.result() for fut in futures]
    return [c for group in results for c in group]


def _threads(arg: Optional[int]) -> int:
    if arg is not None:
        return max(1, arg)
    env = os.environ.get("POLARIS_THREADS")
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            raise UsageError(f"POLARIS_THREADS must be an integer, got {env!r}")
    return os.cpu_count() or 1


def _prime(p: Optional[int]) -> Optional[int]:
    if p is None:
        return None
    try:
        PrimeField(p)
    except FieldError as exc:
        raise UsageError(str(exc))
    return p


def _read_forms(args) -> list[MPoly]:
    if args.expr:
        texts = [args.expr]
    else:
        try:
            with open(args.poly) as fh:
                texts = [ln for ln in fh.read().splitlines() if ln.strip() and not ln.lstrip().startswith("#")]
        except OSError as exc:
            raise UsageError(f"cannot read {args.poly}: {exc.strerror}")
    if not texts:
        raise UsageError("no polynomial given")
    try:
        polys = [parse(t) for t in texts]
        nvars = args.nvars or max(g.nvars for g in polys)
        return [parse(t, nvars) for t in texts]
    except PolyError as exc:
        raise UsageError(f"parse error: {exc}")


def cmd_subhankel(args) -> tuple[dict, list[dict]]:
    checks = [c.strip() for c in args.checks.split(",") if c.strip()]
    bad = set(checks) - {"lemma", "minors", "hb", "hessian", "irred", "poly"}
    if bad:
        raise UsageError(f"unknown checks: {sorted(bad)}")
    if not 2 <= args.r <= subhankel.MAX_ORDER:
        raise UsageError(f"--r must be in 2..{subhankel.MAX_ORDER}")
    return {"r": args.r, "checks": checks}, _subhankel_checks(args.r, checks, args.seed)


def _spec_from_args(args, kind: str):
    if args.spec:
        try:
            with open(args.spec) as fh:
                spec = constructions.load_spec(fh.read())
        except OSError as exc:
            raise UsageError(f"cannot read {args.spec}: {exc.strerror}")
        except (ValueError, KeyError, PolyError) as exc:
            raise UsageError(f"bad spec file: {exc}")
        return spec
    need = ["r", "t", "n", "d"] + (["m"] if kind == "gn" else [])
    missing = [k for k in need if getattr(args, k) is None]
    if missing:
        raise UsageError(f"missing --{', --'.join(missing)} (or give --spec)")
    if kind == "gn":
        return constructions.GNSpec(args.r, args.t, args.m, args.n, args.d, args.seed)
    return constructions.PermuttiSpec(args.r, args.t, args.n, args.d, args.seed)


def cmd_gn(args):
    spec = _spec_from_args(args, "gn")
    if not isinstance(spec, constructions.GNSpec):
        raise UsageError("spec file is not of type gn")
    try:
        spec.validate()
    except constructions.DegenerateSpecError as exc:
        raise UsageError(str(exc))
    cfg = {"r": spec.r, "t": spec.t, "m": spec.m, "n": spec.n, "d": spec.d, "seed": spec.seed}
    return cfg, _gn_checks(spec, args.points)


def cmd_permutti(args):
    spec = _spec_from_args(args, "permutti")
    if not isinstance(spec, constructions.PermuttiSpec):
        raise UsageError("spec file is not of type permutti")
    try:
        spec.validate()
    except constructions.DegenerateSpecError as exc:
        raise UsageError(str(exc))
    cfg = {"r": spec.r, "t": spec.t, "n": spec.n, "d": spec.d, "seed": spec.seed, "zv": args.zv}
    return cfg, _permutti_checks(spec, args.points, args.zv)


def cmd_degree(args):
    forms = _read_forms(args)
    p = _prime(args.p)
    mapping = forms[0] if len(forms) == 1 else forms
    try:
        est = fflab.polar_degree(mapping, p, args.samples, args.seed, args.eps)
    except (fflab.BadPrime, fflab.GuardExceeded, PolyError) as exc:
        raise UsageError(str(exc))
    if args.histogram:
        with open(args.histogram, "w") as fh:
            fh.write(est.histogram_csv())
    status = {"delta_eq(1)": "pass", "not_dominant": "pass", "inconclusive": "inconclusive"}.get(
        est.verdict, "heuristic-pass")
    cfg = {"forms": [g.to_str() for g in forms], "p": est.p, "samples": args.samples, "eps": args.eps}
    return cfg, [check("degree", status, est.to_json())]


def cmd_scroll_dual(args):
    if not 1 <= args.a < args.b:
        raise UsageError("need 1 <= a < b")
    p = _prime(args.p)
    if p < 101:
        raise UsageError("dual sampling needs p >= 101")
    cfg = {"a": args.a, "b": args.b, "p": p, "samples": args.samples, "verify_degree": args.verify_degree,
           "inverse_degree": args.inverse_degree}
    return cfg, _scroll_checks(args.a, args.b, p, args.samples, args.seed, args.verify_degree,
                               args.inverse_degree, fflab.DEFAULT_SAMPLES)


def cmd_suite(args):
    threads = _threads(args.threads)
    seed, samples, eps = args.seed, args.samples, args.eps
    name = args.name
    cfg: dict = {"name": name, "threads_requested": args.threads}
    if name == "dolgachev":
        p = _prime(args.p) or 101
        cfg["p"] = p
        tasks = [(_dolgachev_checks, (p, samples, seed, eps))]
    elif name == "nored":
        p = _prime(args.p) or 101
        cfg["p"] = p
        tasks = [(_nored_checks, (p, samples, seed, eps))]
    elif name == "ext":
        r = args.r or 3
        if r not in fflab.DEFAULT_PRIMES or r < 2:
            raise UsageError("ext suite supports r in 2..4")
        p = _prime(args.p) or fflab.DEFAULT_PRIMES[r]
        cfg.update(r=r, p=p)
        tasks = [(_ext_checks, (r, p, samples, seed, eps))]
    elif name == "subhankel-all":
        tasks = [(_subhankel_checks, (r, ("lemma",) if r > 6 else ("lemma", "minors", "hb", "hessian", "irred"),
                                      seed)) for r in range(2, 9)]
        cfg["r_lemma"] = [2, 8]
        cfg["r_full"] = [2, 6]
    elif name == "gn-permutti":
        tasks = []
        for k in range(10):
            r, t, m, n, d = GN_SUITE_TYPES[k % len(GN_SUITE_TYPES)]
            tasks.append((_gn_checks, (constructions.GNSpec(r, t, m, n, d, seed + k), args.points)))
        for k in range(10):
            r, t, n, d = PERMUTTI_SUITE_TYPES[k % len(PERMUTTI_SUITE_TYPES)]
            tasks.append((_permutti_checks, (constructions.PermuttiSpec(r, t, n, d, seed + k), args.points, False)))
        for r, t, n, d in ZV_TYPES:
            tasks.append((_permutti_checks, (constructions.PermuttiSpec(r, t, n, d, seed), args.points, True)))
        cfg.update(gn_types=GN_SUITE_TYPES, permutti_types=PERMUTTI_SUITE_TYPES, zv_types=ZV_TYPES)
    elif name == "serie":
        tasks = [(_serie_checks, (r, d, seed, samples)) for r, d in scrolldual.SERIE_GRID]
        cfg["grid"] = scrolldual.SERIE_GRID
    else:  # argparse restricts the choices
        raise UsageError(f"unknown suite {name}")
    return cfg, _run_tasks(tasks, threads)


# parser

def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="polaris", description="Polar maps, Hessians and homaloidal families.")
    ap.add_argument("--version", action="version", version=f"polaris {__version__}")
    sub = ap.add_subparsers(dest="command", required=True)

    def common(sp, samples=True):
        sp.add_argument("--seed", type=int, default=DEFAULTS["seed"])
        sp.add_argument("--out", help="write the JSON report here (default: stdout)")
        sp.add_argument("--csv", help="write flattened per-check rows here")
        sp.add_argument("--quiet", action="store_true", help="no summary lines")
        if samples:
            sp.add_argument("--samples", type=int, default=DEFAULTS["samples"])
            sp.add_argument("--eps", type=float, default=DEFAULTS["eps"])

    sp = sub.add_parser("subhankel", help="sub-Hankel identities for one r")
    sp.add_argument("--r", type=int, required=True)
    sp.add_argument("--checks", default="lemma,minors,hb,hessian,irred")
    common(sp, samples=False)

    for kind in ("gn", "permutti"):
        sp = sub.add_parser(kind, help=f"build a {kind} polynomial and check it")
        sp.add_argument("--spec", help="JSON spec file")
        for k in ("r", "t", "n", "d") + (("m",) if kind == "gn" else ()):
            sp.add_argument(f"--{k}", type=int)
        sp.add_argument("--points", type=int, default=DEFAULTS["hessian_points"])
        if kind == "permutti":
            sp.add_argument("--zv", action="store_true", help="also measure z(f) and v(f)")
        common(sp, samples=False)

    sp = sub.add_parser("degree", help="estimate the degree of a polar map over F_p")
    src = sp.add_mutually_exclusive_group(required=True)
    src.add_argument("--poly", help="file with one form (polar map) or r+1 forms (a map), one per line")
    src.add_argument("--expr", help="polynomial text")
    sp.add_argument("--nvars", type=int)
    sp.add_argument("--p", type=int)
    sp.add_argument("--histogram", help="write fiber_size,count CSV here")
    common(sp)

    sp = sub.add_parser("scroll-dual", help="interpolate the dual of Y(a,b)")
    sp.add_argument("--a", type=int, required=True)
    sp.add_argument("--b", type=int, required=True)
    sp.add_argument("--p", type=int, default=DEFAULTS["dual_prime"])
    sp.add_argument("--samples", type=int)
    sp.add_argument("--seed", type=int, default=DEFAULTS["seed"])
    sp.add_argument("--verify-degree", action="store_true")
    sp.add_argument("--inverse-degree", action="store_true")
    sp.add_argument("--out")
    sp.add_argument("--csv")
    sp.add_argument("--quiet", action="store_true")

    sp = sub.add_parser("suite", help="run a named check suite")
    sp.add_argument("--name", required=True, choices=["dolgachev", "nored", "ext", "subhankel-all",
                                                      "gn-permutti", "serie"])
    sp.add_argument("--p", type=int)
    sp.add_argument("--r", type=int)
    sp.add_argument("--points", type=int, default=DEFAULTS["hessian_points"])
    sp.add_argument("--threads", type=int)
    common(sp)
    return ap


COMMANDS = {"subhankel": cmd_subhankel, "gn": cmd_gn, "permutti": cmd_permutti, "degree": cmd_degree,
            "scroll-dual": cmd_scroll_dual, "suite": cmd_suite}


def _csv_rows(checks: Sequence[dict]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["name", "status", "key", "value"])
    for c in checks:
        flat = _flatten(c["payload"])
        if not flat:
            w.writerow([c["name"], c["status"], "", ""])
        for k, v in flat:
            w.writerow([c["name"], c["status"], k, v])
    return buf.getvalue()


def _flatten(obj, prefix: str = "") -> list[tuple[str, str]]:
    if isinstance(obj, dict):
        out = []
        for k in sorted(obj):
            out += _flatten(obj[k], f"{prefix}.{k}" if prefix else str(k))
        return out
    if isinstance(obj, (list, tuple)):
        return [(prefix, json.dumps(obj, sort_keys=True, default=str))]
    return [(prefix, "" if obj is None else str(obj))]


def dumps(report: dict) -> str:
    return json.dumps(report, sort_keys=True, indent=2, default=str) + "\n"


def run(argv: Optional[Sequence[str]] = None) -> tuple[int, Optional[dict]]:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:  # argparse usage errors and --help/--version
        return (EXIT_USAGE if exc.code else EXIT_OK), None
    t0 = time.perf_counter()
    try:
        config, checks = COMMANDS[args.command](args)
    except UsageError as exc:
        print(f"polaris: error: {exc}", file=sys.stderr)
        return EXIT_USAGE, None
    config = {"command": args.command, "seed": args.seed, **config}
    report = {
        "schema": SCHEMA,
        "tool": "polaris",
        "version": __version__,
        "config": config,
        "defaults": DEFAULTS,
        "backend": kernels.BACKEND,
        "checks": checks,
        "wall_time": round(time.perf_counter() - t0, 3),
    }
    code = exit_code(checks)
    report["exit_code"] = code
    text = dumps(report)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    if args.csv:
        with open(args.csv, "w") as fh:
            fh.write(_csv_rows(checks))
    if not args.quiet:
        stream = sys.stderr if not args.out else sys.stdout
        for c in checks:
            print(f"{c['status']:>14}  {c['name']}", file=stream)
    if not args.out:
        sys.stdout.write(text)
    return code, report


def main(argv: Optional[Sequence[str]] = None) -> int:
    code, _ = run(argv)
    return code


if __name__ == "__main__":
    sys.exit(main())
