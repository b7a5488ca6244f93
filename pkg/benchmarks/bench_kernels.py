"""Time the numba kernels against the numpy fallback.

    python3 benchmarks/bench_kernels.py [--repeat 5] [--samples 20000]

Each kernel is run once per backend before timing so numba compile time is
excluded.  Outputs are compared between backends and the script exits 1 on
any mismatch.
"""

import argparse
import sys
import time

import numpy as np

from dyckmoments import kernels


def best_of(fn, repeat):
    fn()
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def cases(samples):
    rng = np.random.default_rng(0)
    off20 = rng.random((samples, 19))
    off7 = rng.random((samples, 6))
    return [
        ("path_masks generalized n=12", lambda: kernels.path_masks(12, kernels.MODE_GENERALIZED)),
        ("path_masks dyck n=12", lambda: kernels.path_masks(12, kernels.MODE_DYCK)),
        ("count_masks dyck n=12", lambda: kernels.count_masks(12, kernels.MODE_DYCK)),
        (f"entry11_powers n=7 k=4 x{samples}", lambda: kernels.entry11_powers(off7, 4)),
        (f"trace_powers n=20 k=8 x{samples}", lambda: kernels.trace_powers(off20, 8)),
    ]


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--samples", type=int, default=20_000)
    args = ap.parse_args(argv)

    if not kernels.HAVE_NUMBA:
        print("numba not installed; nothing to compare")
        return 0
    prev = kernels.backend()
    bad = 0
    print(f"{'kernel':<40}{'numpy [s]':>12}{'numba [s]':>12}{'speedup':>10}")
    try:
        for name, fn in cases(args.samples):
            res, t = {}, {}
            for b in ("numpy", "numba"):
                kernels.use_backend(b)
                res[b] = fn()
                t[b] = best_of(fn, args.repeat)
            x, y = np.asarray(res["numpy"]), np.asarray(res["numba"])
            same = np.allclose(x, y, rtol=1e-12, atol=0) if x.dtype.kind == "f" else np.array_equal(x, y)
            bad += not same
            flag = "" if same else "  MISMATCH"
            print(f"{name:<40}{t['numpy']:>12.4f}{t['numba']:>12.4f}{t['numpy'] / t['numba']:>9.1f}x{flag}", flush=True)
    finally:
        kernels.use_backend(prev)
    return 1 if bad else 0


if __name__ == "__main__":
    sys.exit(main())
