from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from heiscat import _kernels, _pykernels

polys = st.dictionaries(
    st.tuples(st.integers(0, 4), st.integers(-4, 4)),
    st.fractions(min_value=-5, max_value=5, max_denominator=4).filter(bool),
    max_size=6,
)


def test_backend_is_reported():
    assert _kernels.BACKEND in ("python", "cython")


def test_small_product():
    assert _pykernels.lmul({(0, 1): 1}, {(1, 0): 2}) == {(1, 1): 2}
    assert _pykernels.ladd({(0, 1): 1}, {(0, 1): -1}) == {}


@settings(max_examples=100, deadline=None)
@given(polys, polys)
def test_backends_agree(a, b):
    ck = pytest.importorskip("heiscat._ckernels")
    assert ck.lmul(a, b) == _pykernels.lmul(a, b)
    assert ck.ladd(a, b) == _pykernels.ladd(a, b)


@settings(max_examples=100, deadline=None)
@given(polys, polys, polys)
def test_ring_laws(a, b, c):
    mul, add = _pykernels.lmul, _pykernels.ladd
    assert mul(a, b) == mul(b, a)
    assert mul(mul(a, b), c) == mul(a, mul(b, c))
    assert mul(a, add(b, c)) == add(mul(a, b), mul(a, c))
    assert mul(a, {(0, 0): Fraction(1)}) == {k: v for k, v in a.items() if v}
