from hypothesis import given, settings, strategies as st

from heiscat.core import T, Z
from heiscat.frobenius import BUILTINS, builtin
from heiscat.symfun import (
    CCW,
    CW,
    MINUS,
    PLUS,
    BubbleSymbol,
    SymElement,
    banana_defect,
    bubble_value,
    e_of,
    genuine_bubble,
    grassmannian_check,
    h_determinant_trivial,
    h_of,
    parse_sym,
    plus_bubble_by_determinant,
)

KK = builtin("trivial")


def test_low_degree_h():
    one = KK.one
    assert h_of(KK, one, 0) == SymElement.scalar(KK, 1)
    assert h_of(KK, one, 1) == e_of(KK, one, 1)
    assert h_of(KK, one, 2) == e_of(KK, one, 1) * e_of(KK, one, 1) - e_of(KK, one, 2)
    assert h_of(KK, one, -1).is_zero()


def test_h_matches_determinant_over_the_field():
    for n in range(6):
        assert h_of(KK, KK.one, n) == h_determinant_trivial(n)


def test_parse_round_trip():
    u = h_of(KK, KK.one, 3)
    assert parse_sym(KK, str(u)) == u


def test_grassmannian_examples():
    assert grassmannian_check(KK, 0, 0, KK.one, KK.one) == SymElement.scalar(KK, -(1 / Z))
    assert grassmannian_check(KK, 1, 2, KK.one, KK.one).is_zero()
    D = builtin("dual")
    assert grassmannian_check(D, 0, 0, D.one, D.one).is_zero()


def test_boundary_bubbles():
    for name in ("trivial", "C2", "dual", "M2"):
        A = builtin(name)
        for i in range(A.dim):
            a = A.basis_element(i)
            want = SymElement.scalar(A, T / Z * A.tr(a))
            for k in (-2, 0, 3):
                assert bubble_value(BubbleSymbol(CCW, PLUS, a, -k), k) == want
                assert bubble_value(BubbleSymbol(CW, MINUS, a, 0), k) == want


def test_low_degree_genuine_bubbles():
    for k in (-1, -2, -3):
        for r in range(-k):
            got = genuine_bubble(KK, CCW, KK.one, r, k)
            want = SymElement.scalar(KK, -(T.inverse() / Z) if r == 0 else 0)
            assert got == want


def test_determinant_formula():
    for name in ("trivial", "C2", "dual"):
        A = builtin(name)
        a = A.basis_element(A.dim - 1)
        for k in (1, 2, 3):
            for r in range(k + 1):
                assert plus_bubble_by_determinant(CCW, a, r, k) == bubble_value(BubbleSymbol(CCW, PLUS, a, r - k), k)
                assert plus_bubble_by_determinant(CW, a, r, -k) == bubble_value(BubbleSymbol(CW, PLUS, a, r - k), -k)


@settings(max_examples=40, deadline=None)
@given(st.sampled_from(sorted(BUILTINS)), st.integers(0, 5), st.integers(0, 3), st.integers(0, 3))
def test_banana_identity(name, n, i, j):
    A = builtin(name)
    a, b = A.basis_element(i % A.dim), A.basis_element(j % A.dim)
    assert banana_defect(A, a, b, n).is_zero()


@settings(max_examples=40, deadline=None)
@given(st.sampled_from(["trivial", "C2", "dual"]), st.integers(-2, 2), st.integers(-3, 3))
def test_grassmannian_off_diagonal(name, k, n):
    A = builtin(name)
    for which in (PLUS, MINUS):
        got = grassmannian_check(A, k, n, A.one, A.basis_element(A.dim - 1), which)
        want = -(A.tr(A.basis_element(A.dim - 1)) / Z) if n == 0 else 0
        assert got == SymElement.scalar(A, want)


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 4), st.integers(0, 4))
def test_sym_ring_is_commutative_over_the_field(p, q):
    a, b = h_of(KK, KK.one, p), e_of(KK, KK.one, q)
    assert a * b == b * a
    assert (a + b) - b == a
