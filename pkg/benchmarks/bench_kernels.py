"""Time the compiled kernels against the numpy fallback.

Run ``python3 benchmarks/bench_kernels.py``.  Two workloads: a long
detuning grid (numpy's best case) and the short node arrays the adaptive
quadrature feeds in (where per-call overhead dominates).
"""
import argparse
import timeit

import numpy as np

from digs import _kernels_py, analytic
from digs.dressed import mixing_angles

try:
    from digs import _kernels
except ImportError:  # extension not built
    _kernels = None


def workloads():
    angles = mixing_angles(0.02, 0.1, 0.01, 0.1)
    consts = analytic.general_constants(angles, 0.02, 0.01, 2.0, 1.0, 1e-4, 1e-4)
    src = (0.1 / np.sqrt(2), 0.1 / np.sqrt(2), -0.02 + 0j, -0.02 + 0j)
    long_grid = np.linspace(-2, 2, 200001)
    nodes = np.linspace(-0.05, 0.05, 15)
    return {
        "resonant, 2e5 points": lambda m: m.chi_resonant(long_grid, 0.1, 0.8, 0.1, 0.1, 2.0, 1.0, 1e-4, 1e-4),
        "general, 2e5 points": lambda m: m.chi_general(long_grid, 0.0, consts, src),
        "general, 15 nodes x 2000 calls": lambda m: [m.chi_general(nodes, x, consts, src)
                                                     for x in np.linspace(-1, 1, 2000)],
    }


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()
    impls = {"python": _kernels_py}
    if _kernels is not None:
        impls["compiled"] = _kernels
    print(f"{'workload':34s}" + "".join(f"{k:>12s}" for k in impls) + ("    speedup" if len(impls) == 2 else ""))
    for name, fn in workloads().items():
        times = {k: min(timeit.repeat(lambda: fn(m), number=1, repeat=args.repeat)) for k, m in impls.items()}
        row = f"{name:34s}" + "".join(f"{t * 1e3:10.2f}ms" for t in times.values())
        if len(times) == 2:
            row += f"{times['python'] / times['compiled']:10.1f}x"
        print(row)


if __name__ == "__main__":
    main()
