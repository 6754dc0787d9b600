"""Time the compiled kernels against the numpy fallback.

    python3 benchmarks/bench_kernels.py [--repeat 3]

Each kernel is run on the same inputs through both backends; results are
compared before any timing is reported.
"""

import argparse
import time

import numpy as np

from arclab import arcs, expsum, kernels, minor


def _time(fn, repeat):
    best = float("inf")
    out = None
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        best = min(best, time.perf_counter() - t0)
    return best, out


def cases():
    rng = np.random.default_rng(0)
    mats = rng.integers(0, 7, size=(400, 12, 12))
    yield "rank_mod_p x400 (12x12, p=7)", lambda k: [kernels.rank_mod_p(m, 7, impl=k) for m in mats]

    tails = arcs.all_tails(5, 6)
    yield "hankel_levels (5^6 tails)", lambda k: kernels.hankel_levels(tails, 5, impl=k).tolist()

    f0 = expsum.parse_monomials("3,0:1;0,3:1")
    tens = minor._system_tensor(f0, (1, 2, 3, 4, 0, 1), 2, 3, 2, 5)
    yield "multilinear_zero_count (p=5, 4 vars, 2 factors)", \
        lambda k: kernels.multilinear_zero_count(tens, 4, 2, 5, impl=k)

    exps = np.array([[3, 0, 0, 0], [0, 3, 0, 0], [1, 1, 1, 0], [0, 0, 2, 1], [0, 0, 0, 0]])
    coeffs = np.array([1, 1, 2, 3, 1])
    yield "poly_value_table (4 vars, p=11)", \
        lambda k: kernels.poly_value_table(exps, coeffs, 4, 11, impl=k).tolist()


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()
    backends = kernels.available_backends()
    if "cython" not in backends:
        print("compiled backend not built; only the fallback is available")
    names = list(backends)
    print(f"{'kernel':<50}" + "".join(f"{n:>12}" for n in names) + f"{'speedup':>10}")
    for label, fn in cases():
        times, outs = [], []
        for n in names:
            t, out = _time(lambda: fn(backends[n]), args.repeat)
            times.append(t)
            outs.append(out)
        if any(o != outs[0] for o in outs[1:]):
            raise SystemExit(f"backend mismatch on {label}")
        speed = f"{times[0] / times[-1]:>9.1f}x" if len(times) > 1 else ""
        print(f"{label:<50}" + "".join(f"{t * 1000:>10.1f}ms" for t in times) + speed)


if __name__ == "__main__":
    main()
