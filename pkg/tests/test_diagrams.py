import json
import random

import pytest
from hypothesis import given, settings, strategies as st

from heiscat.core import T, Z
from heiscat.diagrams import Morphism, NormalForm, compose, equals, normalize, omega, rotate_star, tensor
from heiscat.frobenius import builtin
from heiscat.relations import relations
from heiscat.straighten import BudgetExceeded
from heiscat.verify import random_diagram

KK = builtin("trivial")


def P(text, A=KK):
    return Morphism.parse(A, text)


def test_identity_normalizes_to_itself():
    assert normalize(P("up: id"), 0).text() == "(1) * [Id]"
    assert normalize(P("1"), 0).text() == "1"


def test_crossing_squared():
    for k in (-1, 0, 2):
        assert normalize(P("up up: xpos(1); xpos(1)"), k).text() == "(z) * [up up: xpos(1)] + (1) * [Id]"


def test_zigzag():
    assert normalize(P("up|cupR(1) ; capR(1)|up"), 0).text() == "(1) * [Id]"


def test_right_curl():
    curl = relations(KK, 0, ["curls"])[0].lhs
    assert normalize(curl, 0) == normalize(Morphism.identity(KK, "up").scale(T.inverse()), 0)
    assert normalize(curl, 2).text() == "0"


def test_impose_bubble_value():
    for name in ("trivial", "C2", "dual"):
        A = builtin(name)
        for i in range(A.dim):
            loop = P(f"1: cupL(1); tok(2,#{i}); capR(1)", A)
            want = Morphism.identity(A, ()).scale(T / Z * A.tr(A.basis_element(i)))
            assert normalize(loop, 1) == normalize(want, 1)


def test_bubble_with_dots_is_a_sym_coefficient():
    assert str(normalize(P("bub(0,cw,0,1,2)"), 1)) == "-z^-1*t^-1*eL[1](1)"


def test_lunch_at_zero_charge():
    for rel in relations(KK, 0, ["lunch"]):
        assert rel.check(0).ok


def test_linear_and_idempotent():
    f = P("up up: xpos(1); dot(2,1); xneg(1)")
    nf = normalize(f, 1)
    assert normalize(f + f, 1) == normalize(f.scale(2), 1)
    assert normalize(nf.to_morphism(), 1) == nf
    assert equals(f, f + Morphism.zero(KK, f.source, f.target), 1)


def test_json_round_trip():
    nf = normalize(P("up up: xpos(1); dot(1,1); xpos(1)"), 0)
    data = json.loads(json.dumps(nf.to_json()))
    assert NormalForm.from_json(KK, data) == nf


def test_tikz_output():
    out = normalize(P("up up: xpos(1)"), 0).to_morphism().tikz()
    assert "\\begin{tikzpicture}" in out and "\\end{tikzpicture}" in out


def test_compose_mismatch():
    with pytest.raises(ValueError, match="cannot compose"):
        compose(P("up: dot(1,1)"), P("down: dot(1,1)"))


def test_tensor_needs_scalar_left_coefficients():
    nf = normalize(P("up: cupR(1); xpos(1)"), 1).to_morphism()
    with pytest.raises(ValueError, match="scalar coefficients"):
        tensor(nf, P("up: dot(1,1)"))


def test_tensor_of_identities():
    assert normalize(tensor(Morphism.identity(KK, "up"), Morphism.identity(KK, "down")), 0).text() == "(1) * [Id]"


def test_odd_tokens_exchange_sign():
    E = builtin("ext2")
    f = P("up up: tok(1,c1) ; tok(2,c1)", E)
    g = P("up up: tok(2,c1) ; tok(1,c1)", E)
    assert f.text() == "(-1) * [up up: tok(2,c1); tok(1,c1)]"
    assert g.text() == "(1) * [up up: tok(2,c1); tok(1,c1)]"


def test_interchange_law():
    a, b = P("up: dot(1,1)"), P("up: tok(1,1)")
    c, d = P("down: dot(1,-1)"), P("down: dot(1,1)")
    lhs = compose(tensor(a, c), tensor(b, d))
    rhs = tensor(compose(a, b), compose(c, d))
    assert normalize(lhs, 0) == normalize(rhs, 0)


def test_omega_generators():
    assert omega(P("up: tok(1,1)")).text() == "(1) * [down: tok(1,1)]"
    assert omega(P("up up: xpos(1)")).text() == "(-1) * [down down: xneg(1)]"


def test_rotate_star_of_cup():
    assert rotate_star(P("1: cupR(1)")).text() == "(1) * [down up: capL(1)]"


def test_step_budget():
    with pytest.raises(BudgetExceeded):
        normalize(P("up up up: xpos(1); xpos(2); xpos(1); dot(3,1); xpos(2)"), 2, budget=3)


def test_parse_errors():
    with pytest.raises(ValueError):
        P("up: frob(1)")
    with pytest.raises(ValueError):
        P("up: capR(1)")


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 10**6), st.sampled_from([-1, 0, 1]))
def test_normalize_idempotent_on_random_diagrams(seed, k):
    f = random_diagram(random.Random(seed), KK, max_width=2, length=4, max_crossings=2)
    nf = normalize(f, k)
    assert normalize(nf.to_morphism(), k) == nf


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 10**6), st.sampled_from([-1, 0, 2]))
def test_normalize_is_linear_on_random_diagrams(seed, k):
    rng = random.Random(seed)
    f = random_diagram(rng, KK, max_width=2, length=4, max_crossings=2)
    g = random_diagram(rng, KK, source=f.source, max_width=2, length=4, max_crossings=2)
    if g.target != f.target:
        return
    lhs = normalize(f.scale(Z) + g, k)
    rhs = normalize(f, k).to_morphism().scale(Z) + normalize(g, k).to_morphism()
    assert lhs == normalize(rhs, k)


def test_genuine_bubble_slice_matches_the_closed_loop():
    for name in ("trivial", "C2"):
        A = builtin(name)
        for i in range(A.dim):
            for dots in (0, 1, 2):
                slice_form = P(f"bub(0,cw,0,#{i},{dots})", A)
                loop = P(f"1: cupL(1); tok(2,#{i}); dot(2,{dots}); capR(1)", A)
                for k in (-1, 1, 2):
                    assert normalize(slice_form, k) == normalize(loop, k)


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10**6), st.sampled_from([1, 2, 3]))
def test_omega_intertwines_opposite_charges(seed, k):
    f = random_diagram(random.Random(seed), KK, max_width=3, length=5, max_crossings=3)
    nf = normalize(f, k)
    assert normalize(omega(f), -k) == normalize(omega(nf.to_morphism()), -k)
