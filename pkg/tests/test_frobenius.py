import json

import pytest
from hypothesis import given, settings, strategies as st

from heiscat.core import Z, Scalar
from heiscat.frobenius import BUILTINS, FrobeniusError, FrobeniusSuperalgebra, builtin, load


def test_dual_bases():
    C2 = builtin("C2")
    assert [str(C2.dual(i)) for i in range(2)] == ["e", "g"]
    D = builtin("dual")
    assert [str(D.dual(i)) for i in range(2)] == ["c", "1"]


def test_dagger_of_dual_numbers():
    D = builtin("dual")
    assert D.dagger(D.one) == D.parse_element("c") * (2 * Z)
    assert D.dagger(D.basis_element(1)).is_zero()


def test_matrix_algebra_center_and_cocenter():
    M = builtin("M2")
    center, cocenter = M.center_cocenter()
    assert len(center) == 1 and len(cocenter) == 1


def test_teleporter_table_pairs_dual_basis():
    D = builtin("dual")
    rows = D.teleporter_table
    assert [(r.upper, str(r.lower)) for r in rows] == [(0, "c"), (1, "1")]
    assert all(r.coeff == Z for r in rows)


def test_singular_trace_rejected():
    data = builtin("M2").to_json()
    data["trace"] = ["0"] * 4
    with pytest.raises(FrobeniusError, match="not a Frobenius form"):
        FrobeniusSuperalgebra.from_json(data)


def test_json_round_trip(tmp_path):
    for name in BUILTINS:
        A = builtin(name)
        path = tmp_path / f"{name}.json"
        path.write_text(json.dumps(A.to_json()))
        B = load(str(path))
        assert B.basis == A.basis and B.parity == A.parity
        for i in range(A.dim):
            for j in range(A.dim):
                assert str(B.basis_product(i, j)) == str(A.basis_product(i, j))


def test_exterior_algebra_signs():
    E = builtin("ext2")
    c1, c2 = E.parse_element("c1"), E.parse_element("c2")
    assert E.mul(c1, c2) == -E.mul(c2, c1)
    assert E.mul(c1, c1).is_zero()


def _element(A, coords):
    out = A.zero
    for i, c in enumerate(coords[: A.dim]):
        out = out + A.basis_element(i) * Scalar.const(c)
    return out


coords = st.lists(st.integers(-3, 3), min_size=4, max_size=4)


@settings(max_examples=30, deadline=None)
@given(st.sampled_from(sorted(BUILTINS)), coords, coords, coords)
def test_associative_with_unit(name, x, y, w):
    A = builtin(name)
    a, b, c = _element(A, x), _element(A, y), _element(A, w)
    assert A.mul(A.mul(a, b), c) == A.mul(a, A.mul(b, c))
    assert A.mul(A.one, a) == a == A.mul(a, A.one)


@settings(max_examples=30, deadline=None)
@given(st.sampled_from(sorted(BUILTINS)))
def test_dual_basis_property(name):
    A = builtin(name)
    for i in range(A.dim):
        for j in range(A.dim):
            got = A.tr(A.mul(A.dual(i), A.basis_element(j)))
            assert got == (1 if i == j else 0)


@settings(max_examples=30, deadline=None)
@given(st.sampled_from(sorted(BUILTINS)), st.integers(0, 3), st.integers(0, 3))
def test_trace_is_supersymmetric(name, i, j):
    A = builtin(name)
    i, j = i % A.dim, j % A.dim
    a, b = A.basis_element(i), A.basis_element(j)
    sign = -1 if A.parity[i] and A.parity[j] else 1
    assert A.tr(A.mul(a, b)) == sign * A.tr(A.mul(b, a))
