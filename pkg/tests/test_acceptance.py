"""Acceptance criteria 1 to 9.

Each test records one PASS/FAIL line; the lines are printed together at the
end of the pytest run, and by ``python tests/test_acceptance.py``.
"""

import time
from functools import lru_cache

from heiscat import verify as V
from heiscat.frobenius import BUILTINS, builtin

from conftest import ACCEPTANCE_LINES

GRID = ("trivial", "C2", "dual")
KS = (-2, -1, 0, 1, 2)
SMALL = tuple(n for n in BUILTINS if builtin(n).dim <= 2)


def _record(n, title, rep, start):
    status = "PASS" if rep.ok else "FAIL"
    line = f"criterion {n}: {status}  {title}  ({rep.passed}/{len(rep.checks)} checks, {time.time() - start:.1f}s)"
    ACCEPTANCE_LINES.append(line)
    print(line)
    if not rep.ok:
        print(rep.text())
    return rep


@lru_cache(maxsize=None)
def _cyclotomic_grid(n_max, samples):
    rep = V.Report("cyclotomic")
    for name in SMALL:
        for l in (1, 2):
            for n in range(n_max + 1):
                rep.extend(V.verify_cyclotomic(builtin(name), l, n, samples))
    return rep


def _only(rep, word):
    out = V.Report(rep.suite)
    out.checks = [c for c in rep.checks if word in c.name]
    return out


def test_criterion_1_relation_grid():
    start = time.time()
    rep = V.Report("relations")
    for name in GRID:
        rep.extend(V.verify_relations(builtin(name), KS))
    _record(1, "relation grid", rep, start)
    assert rep.ok, rep.text()
    assert time.time() - start < 300


def test_criterion_2_grassmannian():
    start = time.time()
    rep = V.Report("grassmannian")
    for name in GRID:
        rep.extend(V.verify_grassmannian(builtin(name), KS, nmax=4))
    _record(2, "infinite Grassmannian and boundary constants", rep, start)
    assert rep.ok, rep.text()


def test_criterion_3_cyclotomic_dimension():
    start = time.time()
    rep = _only(_cyclotomic_grid(3, 100), "dimension")
    _record(3, "cyclotomic dimensions n<=3, l<=2, dim A<=2", rep, start)
    assert rep.ok, rep.text()
    assert V.verify_cyclotomic(builtin("trivial"), 2, 2, 0).checks[0].name.endswith("dimension 8")


def test_criterion_4_trace_of_f():
    start = time.time()
    rep = _only(_cyclotomic_grid(3, 100), "trace")
    _record(4, "trace of f(x_n) vanishes for n<=3", rep, start)
    assert rep.ok, rep.text()


def test_criterion_5_mackey():
    start = time.time()
    # the map lands in QWA_(n+1), so n <= 2 means up to three strands
    rep = _only(_cyclotomic_grid(3, 100), "Mackey")
    _record(5, "Mackey map bijective, round trip on 100 elements, n<=2", rep, start)
    assert rep.ok, rep.text()


def test_criterion_6_oracle():
    start = time.time()
    rep = V.verify_oracle([builtin(n) for n in GRID], samples=200, seed=7, ls=(1, 2), n0s=(0, 1))
    _record(6, "oracle equivalence on 200 random diagrams", rep, start)
    assert rep.ok, rep.text()


def test_criterion_7_independence():
    start = time.time()
    rep = V.verify_independence(builtin("trivial"), l=2)
    _record(7, "positive basis images independent at l=2", rep, start)
    assert rep.ok, rep.text()


def test_criterion_8_banana():
    start = time.time()
    rep = V.Report("banana")
    for name in BUILTINS:
        rep.extend(V.verify_banana(builtin(name), nmax=6))
    _record(8, "e/h duality for n<=6 on all built-ins", rep, start)
    assert rep.ok, rep.text()


def test_criterion_9_symmetry():
    start = time.time()
    rep = V.Report("symmetry")
    for name in GRID:
        for k in KS:
            rep.extend(V.verify_symmetry(builtin(name), k, samples=50, seed=0))
    _record(9, "omega and rotate_star symmetries", rep, start)
    assert rep.ok, rep.text()


if __name__ == "__main__":
    for fn in [v for k, v in sorted(globals().items()) if k.startswith("test_criterion")]:
        try:
            fn()
        except AssertionError:
            pass
