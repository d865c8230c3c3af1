"""Compare the compiled and pure-numpy kernel backends.

Usage: ``python benchmarks/bench_kernels.py [--repeat N]``
"""

from __future__ import annotations

import argparse
import timeit

import numpy as np

from boundfuel import kernels
from boundfuel.channels import LindbladGenerator, apply_all, gadc, lindblad_integrate
from boundfuel.states import fls_state, horodecki_state


def _cases():
    gen = LindbladGenerator.qutrit_amplitude_damping(1.0, 0.5)
    rho9 = horodecki_state(4.2, labeling="decay").data
    rho16 = fls_state(0.7).data
    ch = gadc(0.05, 0.16)
    return {
        "lindblad_rk4 (9x9, 5000 steps)": lambda: lindblad_integrate(rho9, gen, 1.0, dt=2e-4, stride=10),
        "kraus_apply_all (16x16, 4 qubits)": lambda: apply_all(ch, rho16, (2, 2, 2, 2)),
    }


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()
    backends = kernels.available_backends()
    prev = kernels.backend()
    print(f"backends: {', '.join(backends)}")
    results: dict[str, dict[str, float]] = {}
    try:
        for name in backends:
            kernels.set_backend(name)
            for label, fn in _cases().items():
                fn()  # warm-up
                n = 1 if "rk4" in label else 200
                t = min(timeit.repeat(fn, number=n, repeat=args.repeat)) / n
                results.setdefault(label, {})[name] = t
    finally:
        kernels.set_backend(prev)
    width = max(map(len, results))
    print(f"{'case':{width}s}  " + "  ".join(f"{b:>12s}" for b in backends) + "     speedup")
    for label, times in results.items():
        row = "  ".join(f"{times[b] * 1e3:10.3f}ms" for b in backends)
        speed = times.get("python", np.nan) / times.get("compiled", np.nan)
        print(f"{label:{width}s}  {row}  {speed:10.2f}x")


if __name__ == "__main__":
    main()
