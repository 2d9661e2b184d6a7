"""Time the compiled and numpy kernels on the mode-sum workload.

Usage: python3 benchmarks/bench_kernels.py [--pairs N] [--qmax Q] [--repeat R]
"""
import argparse
import timeit

import numpy as np

from cavityloss import _kernels_py

try:
    from cavityloss import _kernels as _kernels_c
except ImportError:
    _kernels_c = None


def _inputs(pairs, qmax, seed=0):
    rng = np.random.default_rng(seed)
    u = np.ascontiguousarray(rng.normal(size=pairs))
    v = np.ascontiguousarray(rng.normal(size=pairs))
    theta = rng.uniform(-50, 50, pairs)
    chi = rng.uniform(-0.02, 0.02, pairs)
    amp = rng.normal(size=pairs)
    px = _kernels_py.hermite_table(u, qmax)
    py = _kernels_py.hermite_table(v, qmax)
    return u, v, px, py, theta, chi, amp


def _time(fn, repeat):
    number = 1
    while timeit.timeit(fn, number=number) < 0.05:
        number *= 2
    return min(timeit.repeat(fn, number=number, repeat=repeat)) / number


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--pairs", type=int, default=45)
    ap.add_argument("--qmax", type=int, default=40)
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args(argv)

    u, v, px, py, theta, chi, amp = _inputs(args.pairs, args.qmax)
    backends = {"python": _kernels_py}
    if _kernels_c is not None:
        backends["cython"] = _kernels_c
    else:
        print("compiled kernels not built; timing the numpy fallback only")

    print(f"pairs={args.pairs} qmax={args.qmax} modes={(args.qmax + 1) * (args.qmax + 2) // 2}")
    print(f"{'kernel':<16}{'backend':<10}{'time [us]':>12}")
    results = {}
    for name, mod in backends.items():
        t_h = _time(lambda: mod.hermite_table(u, args.qmax), args.repeat)
        t_o = _time(lambda: mod.mode_overlaps(px, py, theta, chi, amp, args.qmax), args.repeat)
        results[name] = (t_h, t_o)
        print(f"{'hermite_table':<16}{name:<10}{t_h * 1e6:>12.2f}")
        print(f"{'mode_overlaps':<16}{name:<10}{t_o * 1e6:>12.2f}")
    if "cython" in results:
        ph, po = results["python"]
        ch, co = results["cython"]
        print(f"speed-up: hermite_table x{ph / ch:.1f}, mode_overlaps x{po / co:.1f}")
        a = _kernels_c.mode_overlaps(px, py, theta, chi, amp, args.qmax)
        b = _kernels_py.mode_overlaps(px, py, theta, chi, amp, args.qmax)
        print(f"max |difference| in overlaps: {np.max(np.abs(a - b)):.2e}")


if __name__ == "__main__":
    main()
