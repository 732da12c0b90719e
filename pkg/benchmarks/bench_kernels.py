"""Compare the compiled and pure-Python Laurent kernels, then time a normalization.

    python benchmarks/bench_kernels.py
"""

import random
import timeit

from heiscat import _pykernels
from heiscat.core import Q

try:
    from heiscat import _ckernels
except ImportError:
    _ckernels = None


def laurent(rng, n):
    return {(rng.randint(-6, 6), rng.randint(-6, 6)): Q(rng.randint(-9, 9) or 1, rng.randint(1, 5)) for _ in range(n)}


def bench_kernels(size=40, reps=200):
    rng = random.Random(1)
    pairs = [(laurent(rng, size), laurent(rng, size)) for _ in range(20)]
    backends = [("python", _pykernels)] + ([("cython", _ckernels)] if _ckernels else [])
    for name, mod in backends:
        t = timeit.timeit(lambda: [mod.lmul(a, b) for a, b in pairs], number=reps)
        u = timeit.timeit(lambda: [mod.ladd(a, b) for a, b in pairs], number=reps)
        print(f"{name:7s} lmul {t * 1e3 / reps:8.3f} ms/batch   ladd {u * 1e3 / reps:8.3f} ms/batch")
    if _ckernels:
        for a, b in pairs:
            assert _ckernels.lmul(a, b) == _pykernels.lmul(a, b)
            assert _ckernels.ladd(a, b) == _pykernels.ladd(a, b)
        print("backends agree")
    else:
        print("compiled kernels not built; only the pure-Python backend was timed")


def bench_normalize():
    from heiscat.diagrams import Morphism, normalize
    from heiscat.frobenius import builtin

    for name, k, text in [
        ("C2", 2, "up down up: xpos(1); xneg(2); xpos(1); dot(3,2)"),
        ("dual", -2, "down up: xpos(1); xpos(1); tok(1,c); xpos(1); xpos(1)"),
    ]:
        A = builtin(name)
        f = Morphism.parse(A, text)
        t = timeit.timeit(lambda: normalize(f, k), number=1)
        print(f"normalize {name} k={k} {text!r}: {t:.3f} s (first call, cold memo)")


if __name__ == "__main__":
    bench_kernels()
    bench_normalize()
