"""Compare the compiled and pure-NumPy kernel backends.

Usage::

    python benchmarks/bench_kernels.py [--repeat N]

Reports the best wall time of each kernel per backend and the speedup.
Backends are also checked to agree before timing.
"""

import argparse
import timeit

import numpy as np

from rotmode.kernels import available_backends
from rotmode.model import ModelParams, spectrum
from rotmode.oracle import generator


def cases(p: ModelParams):
    spec = spectrum(p)
    grid = np.linspace(0.0, 200.0, 20001)
    prop_args = (p.omega1, p.omega2, p.omega, spec.delta, spec.omega_plus_sq, spec.omega_minus_sq, grid)
    rk4_args = (generator(p), np.linspace(0.0, 50.0, 501), 1e-3)
    return {
        "propagator_grid (20001 times)": ("propagator_grid", prop_args),
        "rk4_grid (t=50, dt=1e-3)": ("rk4_grid", rk4_args),
        "trig_kernels (20001 times)": ("trig_kernels", (spec.omega_minus_sq, grid)),
    }


def main(argv=None) -> None:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=5)
    args = parser.parse_args(argv)

    backends = available_backends()
    p = ModelParams(1.0, 0.5, 0.49)
    print(f"backends: {', '.join(sorted(backends))}")
    print(f"{'kernel':34s} " + " ".join(f"{name:>12s}" for name in sorted(backends)) + "   speedup")
    for label, (func, fargs) in cases(p).items():
        results = {name: getattr(mod, func)(*fargs) for name, mod in backends.items()}
        ref = results["python"]
        for name, out in results.items():
            pairs = zip(ref, out) if isinstance(ref, tuple) else [(ref, out)]
            for a, b in pairs:
                if not np.allclose(a, b, rtol=1e-12, atol=1e-12):
                    raise SystemExit(f"{name} disagrees with python on {label}")
        times = {}
        for name, mod in sorted(backends.items()):
            fn = getattr(mod, func)
            times[name] = min(timeit.repeat(lambda: fn(*fargs), number=1, repeat=args.repeat))
        speed = times["python"] / times["cython"] if "cython" in times else float("nan")
        cols = " ".join(f"{times[name] * 1e3:10.2f}ms" for name in sorted(times))
        print(f"{label:34s} {cols}   {speed:6.1f}x")


if __name__ == "__main__":
    main()
