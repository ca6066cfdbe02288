"""Compare the compiled kernels with the pure-Python fallback.

Usage::

    python benchmarks/bench_kernels.py [--repeat 5]

Kernel timings call both implementations directly. The end-to-end timing of
``check_conjecture`` runs in subprocesses because the backend is chosen once
at import time.
"""
import argparse
import os
import subprocess
import sys
import timeit

from spinconc._kernels import _pykernels as py
from spinconc.dicke import moments, random_symmetric_state
from spinconc.directional import fibonacci_hemisphere
from spinconc.hamiltonians import ModelParams, build_spin_hamiltonian

try:
    from spinconc._kernels import _ckernels as cy
except ImportError:
    cy = None

END_TO_END = """
import time
from spinconc._kernels import BACKEND
from spinconc.dicke import random_symmetric_state
from spinconc.directional import check_conjecture
states = [random_symmetric_state(2 + s % 9, s) for s in range({n})]
t = time.perf_counter()
for psi in states:
    check_conjecture(psi)
print(BACKEND, (time.perf_counter() - t) / len(states))
"""


def best_of(fn, repeat, number):
    return min(timeit.repeat(fn, repeat=repeat, number=number)) / number


def kernel_cases():
    A = build_spin_hamiltonian(ModelParams.biaxial(0.3, 0.2, -0.1, 0.7, 4096))
    x = random_symmetric_state(4096, 0).amps
    mom = moments(random_symmetric_state(9, 1))
    dirs = fibonacci_hemisphere(2048)
    start = dirs[0]
    return [
        ("banded_matvec (d=4097)", lambda m: m.banded_matvec(A.d0, A.d1, A.d2, x), 200),
        ("directional_values (2048 dirs)", lambda m: m.directional_values(mom.mean, mom.K, float(mom.N), dirs), 50),
        ("refine_direction", lambda m: m.refine_direction(mom.mean, mom.K, float(mom.N), start, 0.05, 1e-10, 2000), 50),
    ]


def end_to_end(pure, n):
    env = dict(os.environ, SPINCONC_PURE_PYTHON="1" if pure else "0")
    out = subprocess.run([sys.executable, "-c", END_TO_END.format(n=n)], env=env,
                         capture_output=True, text=True, check=True)
    backend, seconds = out.stdout.split()
    return backend, float(seconds)


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--states", type=int, default=300, help="states for the end-to-end check")
    args = ap.parse_args(argv)
    if cy is None:
        print("compiled extension not built; run `pip install --no-build-isolation -e .` first")
        return 1
    print(f"{'kernel':34s} {'python':>12s} {'cython':>12s} {'speedup':>8s}")
    for name, call, number in kernel_cases():
        tp = best_of(lambda: call(py), args.repeat, number)
        tc = best_of(lambda: call(cy), args.repeat, number)
        print(f"{name:34s} {tp * 1e6:10.1f}us {tc * 1e6:10.1f}us {tp / tc:7.1f}x")
    rows = dict(end_to_end(pure, args.states) for pure in (True, False))
    tp, tc = rows["python"], rows["cython"]
    print(f"{'check_conjecture (per state)':34s} {tp * 1e6:10.1f}us {tc * 1e6:10.1f}us {tp / tc:7.1f}x")
    return 0


if __name__ == "__main__":
    sys.exit(main())
