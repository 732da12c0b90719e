from hypothesis import given, settings, strategies as st

from heiscat.core import Z, Scalar
from heiscat.frobenius import builtin
from heiscat.linalg import matmul
from heiscat.wreath import WreathAlgebra, perm_compose, perm_inverse, reduced_word, regular_representation


def test_generator_monomials():
    A = builtin("trivial")
    W = WreathAlgebra(A, 2)
    assert list(W.sigma(1).terms) == [((0, 0), (0, 0), (1, 0))]
    assert list(W.generator("x", 1, -1).terms) == [((-1, 0), (0, 0), (0, 1))]
    D = builtin("dual")
    c = D.parse_element("c")
    assert list(WreathAlgebra(D, 2).token(2, c).terms) == [((0, 0), (0, 1), (0, 1))]


def test_quadratic_relation():
    W = WreathAlgebra(builtin("trivial"), 2)
    s = W.sigma(1)
    assert s * s == s * Z + W.one()
    assert s * W.sigma_inv(1) == W.one()


def test_dot_relations():
    W = WreathAlgebra(builtin("trivial"), 2)
    s, x1, x2 = W.sigma(1), W.x(1), W.x(2)
    assert s * x1 * s == x2
    assert s * x1 == x2 * s - x2 * Z
    assert str(W.parse("s1 * x1")) == "-z * x2 + x2 * s1"


def test_braid_relation():
    for name in ("trivial", "C2", "dual"):
        W = WreathAlgebra(builtin(name), 3)
        s1, s2 = W.sigma(1), W.sigma(2)
        assert s1 * s2 * s1 == s2 * s1 * s2


def test_quadratic_relation_with_teleporter():
    A = builtin("C2")
    W = WreathAlgebra(A, 2)
    s = W.sigma(1)
    assert s * s == W.tau(1) * s * Z + W.one()


def test_regular_representation_is_multiplicative():
    W = WreathAlgebra(builtin("C2"), 2)
    basis, mats = regular_representation(W)
    s = mats[("sigma", 1)]
    lhs = matmul(s, s)
    rhs = matmul(_matrix(W, basis, W.tau(1) * Z), s)
    for i in range(len(basis)):
        for j in range(len(basis)):
            assert lhs[i][j] == rhs[i][j] + (1 if i == j else 0)


def _matrix(W, basis, elem):
    index = {m: k for k, m in enumerate(basis)}
    N = len(basis)
    M = [[Scalar.const(0)] * N for _ in range(N)]
    for k, m in enumerate(basis):
        for mm, c in (elem * W.element({m: Scalar.const(1)})).terms.items():
            M[index[mm]][k] = c
    return M


def test_reduced_word():
    g = (2, 0, 1)
    word = reduced_word(g)
    h = tuple(range(3))
    for i in word:
        h = perm_compose(h, (1, 0, 2) if i == 1 else (0, 2, 1))
    assert h == g or perm_inverse(h) == g


@st.composite
def elements(draw, W):
    out = W.zero()
    for _ in range(draw(st.integers(1, 2))):
        term = W.one() * Scalar.const(draw(st.integers(-2, 2)) or 1)
        for _ in range(draw(st.integers(0, 3))):
            kind = draw(st.sampled_from(["s", "x", "xi", "tok"]))
            i = draw(st.integers(1, W.n))
            if kind == "s":
                term = term * W.sigma(min(i, W.n - 1))
            elif kind == "x":
                term = term * W.x(i)
            elif kind == "xi":
                term = term * W.x(i, -1)
            else:
                term = term * W.token(i, W.A.basis_element(draw(st.integers(0, W.A.dim - 1))))
        out = out + term
    return out


W_C2 = WreathAlgebra(builtin("C2"), 3)


@settings(max_examples=40, deadline=None)
@given(elements(W_C2), elements(W_C2), elements(W_C2))
def test_associativity(u, v, w):
    assert (u * v) * w == u * (v * w)


@settings(max_examples=40, deadline=None)
@given(elements(W_C2), elements(W_C2))
def test_distributivity(u, v):
    s = W_C2.sigma(2)
    assert s * (u + v) == s * u + s * v
    assert (u - v) + v == u
