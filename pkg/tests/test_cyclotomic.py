import random

import pytest
from hypothesis import given, settings, strategies as st

from heiscat import linalg
from heiscat.core import ONE, T, Scalar
from heiscat.cyclotomic import (
    CyclotomicParams,
    cyclotomic_algebra,
    default_params,
    dimension,
    f_of_x,
    mackey_assemble,
    mackey_decompose,
    marbleface_matrix,
    trace,
)
from heiscat.frobenius import builtin
from heiscat.wreath import WreathAlgebra

KK = builtin("trivial")
F = CyclotomicParams.from_scalars(KK, [1, 0, T * T])  # w^2 + t^2


def test_reduce_powers_of_x1():
    C = cyclotomic_algebra(F, 1)
    W = WreathAlgebra(KK, 1)
    assert str(C.reduce(W.x(1, 2))) == "-t^2"
    assert str(C.reduce(W.x(1, 3))) == "-t^2 * x1"
    assert str(C.reduce(W.one())) == "1"


def test_reduce_negative_power():
    C = cyclotomic_algebra(F, 1)
    W = WreathAlgebra(KK, 1)
    inv = C.reduce(W.x(1, -1))
    assert C.reduce(W.x(1)) * inv == C.one()


def test_level_zero_is_zero_algebra():
    C = cyclotomic_algebra(CyclotomicParams.from_scalars(KK, [1]), 2)
    assert C.reduce(WreathAlgebra(KK, 2).one()).is_zero()


def test_dimensions():
    assert dimension(F, 2) == 8
    assert dimension(CyclotomicParams.from_scalars(builtin("C2"), [1, T * T]), 3) == 48
    for name in ("trivial", "C2", "M2"):
        assert dimension(default_params(builtin(name), 2), 0) == 1


def test_traces():
    assert trace(f_of_x(F, 1, 1), F).is_zero()
    C1 = cyclotomic_algebra(F, 1)
    assert trace(C1.one(), F) == cyclotomic_algebra(F, 0).one() * KK.tr(KK.one)
    C2 = cyclotomic_algebra(F, 2)
    assert trace(C2.sigma(1), F).is_zero()


def test_mackey_generator_cases():
    C2 = cyclotomic_algebra(F, 2)
    d = mackey_decompose(C2.sigma(1), F)
    assert [(str(v), str(w)) for v, w in d.sigma_part] == [("1", "1")]
    assert not any(not w.is_zero() for w in d.w_part.values())
    d = mackey_decompose(C2.x(2), F)
    assert d.sigma_part == []
    assert {k: str(v) for k, v in d.w_part.items()} == {(1, 0): "1"}


def test_mackey_matrix_full_rank():
    for name in ("trivial", "C2", "dual"):
        p = default_params(builtin(name), 2)
        for n in (0, 1):
            mat = marbleface_matrix(p, n)
            assert len(mat) == len(mat[0]) == linalg.rank(mat)


def test_params_validation():
    with pytest.raises(ValueError, match="monic"):
        CyclotomicParams.from_scalars(KK, [2, T])
    with pytest.raises(ValueError, match="f_l"):
        CyclotomicParams.from_scalars(KK, [1, 0])
    D = builtin("dual")
    with pytest.raises(ValueError, match="f_l"):
        CyclotomicParams(D, [D.one, D.parse_element("c")])


def test_params_json_round_trip():
    C2 = builtin("C2")
    p = default_params(C2, 2)
    q = CyclotomicParams.from_json(C2, p.to_json())
    assert q.l == p.l and all(a == b for a, b in zip(p.f, q.f))
    assert F.satisfies_action_condition()


def _random(big, rng):
    basis = big.basis()
    terms = {m: Scalar.const(rng.randint(-3, 3) or 1) for m in rng.sample(basis, min(len(basis), rng.randint(1, 4)))}
    return big.element(terms)


@settings(max_examples=40, deadline=None)
@given(st.sampled_from(["trivial", "C2", "dual"]), st.integers(1, 2), st.integers(0, 10**6))
def test_mackey_round_trip(name, n, seed):
    p = default_params(builtin(name), 2)
    u = _random(cyclotomic_algebra(p, n), random.Random(seed))
    assert mackey_assemble(mackey_decompose(u, p), p, n - 1) == u


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10**6))
def test_reduced_product_is_associative(seed):
    rng = random.Random(seed)
    C = cyclotomic_algebra(F, 2)
    a, b, c = (_random(C, rng) for _ in range(3))
    assert (a * b) * c == a * (b * c)


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10**6))
def test_trace_is_linear(seed):
    rng = random.Random(seed)
    C = cyclotomic_algebra(F, 2)
    a, b = _random(C, rng), _random(C, rng)
    assert trace(a + b, F) == trace(a, F) + trace(b, F)
    assert trace(a * (ONE * 3), F) == trace(a, F) * 3
