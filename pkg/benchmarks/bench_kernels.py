"""Time the compiled kernels against the numpy fallback.

Run with `python benchmarks/bench_kernels.py`. Both backends are loaded
directly, so the comparison does not depend on CLIFFGR_PURE.
"""
from __future__ import annotations

import argparse
import timeit

import numpy as np

from cliffgr import _purepy
from cliffgr._tables import CAYLEY, NBLADES, NCOEF

try:
    from cliffgr import _kernels
except ImportError:
    _kernels = None


def cases(rng: np.random.Generator, batch: int, order: int):
    n = NCOEF[order]
    a = rng.standard_normal((batch, NBLADES, n))
    b = rng.standard_normal((batch, NBLADES, n))
    fa = rng.standard_normal((batch, n))
    fb = rng.standard_normal((batch, n))
    return {
        "blade_bilinear": lambda mod: mod.blade_bilinear(a, b, CAYLEY, order),
        "jet_mul": lambda mod: mod.jet_mul(fa, fb, order),
    }


def main() -> None:
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--batch", type=int, default=64)
    p.add_argument("--order", type=int, default=3)
    p.add_argument("--repeat", type=int, default=3)
    args = p.parse_args()
    rng = np.random.default_rng(0)
    backends = {"python": _purepy}
    if _kernels is not None:
        backends["compiled"] = _kernels
    else:
        print("compiled extension not built; timing the fallback only")
    print(f"batch={args.batch} order={args.order}")
    for name, fn in cases(rng, args.batch, args.order).items():
        times = {}
        for label, mod in backends.items():
            fn(mod)  # warm up
            times[label] = min(timeit.repeat(lambda: fn(mod), number=3, repeat=args.repeat)) / 3
        if "compiled" in backends:
            same = np.allclose(fn(_purepy), fn(_kernels), rtol=1e-13, atol=1e-13)
            speed = times["python"] / times["compiled"]
            print(f"{name:16s} python {times['python'] * 1e3:8.3f} ms  compiled {times['compiled'] * 1e3:8.3f} ms  "
                  f"speedup {speed:5.1f}x  agree={same}")
        else:
            print(f"{name:16s} python {times['python'] * 1e3:8.3f} ms")


if __name__ == "__main__":
    main()
