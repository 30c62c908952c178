"""Compare the compiled and numpy kernel backends on representative workloads.

    python3 benchmarks/bench_kernels.py [--repeat 5]
"""

import argparse
import timeit

import numpy as np

from polaris import _pykernels, kernels
from polaris.subhankel import build

try:
    from polaris import _ckernels
except ImportError:  # extension not built
    _ckernels = None

P = 32003


def workloads(rng: np.random.Generator) -> dict:
    f = build(5).f
    exps, coeffs = kernels.poly_arrays(f, P)
    pts = rng.integers(0, P, size=(20_000, 6), dtype=np.int64)
    square = rng.integers(0, P, size=(60, 60), dtype=np.int64)
    wide = rng.integers(0, P, size=(120, 200), dtype=np.int64)
    batch = rng.integers(0, P, size=(5_000, 6, 6), dtype=np.int64)
    return {
        "eval_poly (20k pts, f^(5))": lambda m: m.eval_poly_mod_p(exps, coeffs, pts, P),
        "rank (60x60)": lambda m: m.rank_mod_p(square, P),
        "nullspace (120x200)": lambda m: m.nullspace_mod_p(wide, P),
        "batch_det (5000 x 6x6)": lambda m: m.batch_det_mod_p(batch, P),
        "batch_rank (5000 x 6x6)": lambda m: m.batch_rank_mod_p(batch, P),
    }


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()
    backends = [("python", _pykernels)] + ([("cython", _ckernels)] if _ckernels else [])
    print(f"{'workload':28s}" + "".join(f"{name:>12s}" for name, _ in backends) + "     speedup")
    for label, fn in workloads(np.random.default_rng(args.seed)).items():
        outs, times = [], []
        for _, mod in backends:
            outs.append(fn(mod))
            times.append(min(timeit.repeat(lambda: fn(mod), number=1, repeat=args.repeat)))
        same = all(np.array_equal(np.asarray(outs[0]), np.asarray(o)) for o in outs[1:])
        row = f"{label:28s}" + "".join(f"{t * 1e3:10.2f}ms" for t in times)
        if len(times) == 2:
            row += f"  {times[0] / times[1]:8.1f}x"
        print(row + ("" if same else "  MISMATCH"))


if __name__ == "__main__":
    main()
