"""Compare the compiled and pure-Python kernels on full cipher circuits.

Usage: python3 benchmarks/bench_kernels.py [--lanes 256] [--repeat 1]
"""

from __future__ import annotations

import argparse
import random
import time

from grovercost import _kernels_py, aes, lowmc
from grovercost.estimate import _DEFAULT_COMPILED

try:
    from grovercost import _kernels
except ImportError:  # extension not built
    _kernels = None


def _best(fn, repeat):
    best, out = float("inf"), None
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        best = min(best, time.perf_counter() - t0)
    return best, out


def bench(name, circ, lanes, repeat):
    op, a, b, c = circ.arrays()
    templates, n_anc, slots = _DEFAULT_COMPILED
    rng = random.Random(1)
    inputs = set(circ.inputs)
    init = [rng.getrandbits(lanes) if w in inputs else 0 for w in range(circ.num_wires)]
    backends = {"python": _kernels_py}
    if _kernels is not None:
        backends["compiled"] = _kernels
    results = {}
    for label, mod in backends.items():
        t_sched, est = _best(lambda: mod.schedule(op, a, b, c, circ.num_wires, list(circ.inputs),
                                                  templates, n_anc, slots, False), repeat)
        t_sim, state = _best(lambda: mod.simulate(op, a, b, c, init, lanes), repeat)
        results[label] = (t_sched, t_sim, est, state)
    same = len({(r[2], tuple(r[3][0])) for r in results.values()}) == 1
    for label, (t_sched, t_sim, _, _) in results.items():
        print(f"{name:<10} {label:<9} {len(op):>9} events  schedule {t_sched:8.3f}s  simulate({lanes}) {t_sim:8.3f}s")
    if len(results) == 2:
        py, cy = results["python"], results["compiled"]
        print(f"{name:<10} speedup   schedule x{py[0] / cy[0]:.1f}  simulate x{py[1] / cy[1]:.1f}  identical={same}")


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--lanes", type=int, default=256)
    ap.add_argument("--repeat", type=int, default=1)
    args = ap.parse_args()
    if _kernels is None:
        print("compiled extension not available; timing the Python kernels only")
    bench("aes128", aes.aes_full(aes.AES128), args.lanes, args.repeat)
    bench("lowmc-l1", lowmc.lowmc_full(lowmc.instance("L1")), args.lanes, args.repeat)


if __name__ == "__main__":
    main()
