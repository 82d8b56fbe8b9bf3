"""Benchmark comparing the compiled kernel core with the NumPy fallback.

Run as `fatou-lab bench` or `python -m fatou_lab.bench`.
"""

import time

import numpy as np

from . import _kernels
from .rng import stream


def _time(fn, *args, repeat: int = 5) -> float:
    best = np.inf
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn(*args)
        best = min(best, time.perf_counter() - t0)
    return best


def run(sizes=(4096, 16384), out=print) -> list:
    backends = _kernels.backends()
    rng = stream(12345)
    rows = []
    for n in sizes:
        v = rng.normal(size=n)
        cases = [
            ("circ_max_1d", lambda mod, v=v, n=n: mod.circ_max_1d(v, n // 64)),
            ("circ_sum_1d", lambda mod, v=v, n=n: mod.circ_sum_1d(v, n // 64)),
            ("slobodeckij_1d",
             lambda mod, v=v, n=n: mod.slobodeckij_1d(v[: min(n, 2048)],
                                                      1.0 / min(n, 2048), 1.0,
                                                      0.5, 2.0)),
            ("min_dist_graph_1d",
             lambda mod, v=v, n=n: mod.min_dist_graph_1d(
                 np.abs(v[:2000]) + 0.1, (v[:2000] % 1.0 + 1.0) % 1.0,
                 v[: min(n, 4096)] * 0.1, 1.0 / min(n, 4096), 1.0)),
        ]
        for name, call in cases:
            times = {b: _time(lambda mod=mod: call(mod))
                     for b, mod in backends.items()}
            base = times.get("numpy", float("nan"))
            comp = times.get("compiled")
            speedup = (base / comp) if comp else float("nan")
            rows.append((n, name, base, comp, speedup))
    out(f"backend in use: {_kernels.BACKEND}")
    out(f"{'n':>7} {'kernel':<20} {'numpy [ms]':>11} {'compiled [ms]':>14} "
        f"{'speedup':>8}")
    for n, name, base, comp, speedup in rows:
        comp_s = f"{comp * 1e3:14.3f}" if comp is not None else f"{'n/a':>14}"
        out(f"{n:>7} {name:<20} {base * 1e3:11.3f} {comp_s} {speedup:8.2f}")
    return rows


if __name__ == "__main__":
    run()
