import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from heiscat.core import T
from heiscat.cyclotomic import CyclotomicParams, default_params
from heiscat.diagrams import Morphism, compose
from heiscat.frobenius import builtin
from heiscat.oracle import ActionContext, OracleError, dense, mat_equal, mat_mul
from heiscat.relations import relations
from heiscat.verify import evaluate, oracle_agrees, random_diagram

KK = builtin("trivial")
F = CyclotomicParams.from_scalars(KK, [1, 0, T * T])


def test_dot_matrix_on_up():
    ctx = ActionContext(F, 0)
    m = evaluate(ctx, Morphism.parse(KK, "up: dot(1,1)"))
    assert dense(m, 2, 2) == [[0, -T * T], [1, 0]]


def test_down_at_weight_zero_is_zero_module():
    assert ActionContext(F, 0).eval_object(("d",)) == 0
    assert ActionContext(F, 0).eval_object(("u",)) == 2


def test_specialized_context():
    ctx = ActionContext.default(KK, 1, 0, (3, 2))
    assert dense(evaluate(ctx, Morphism.parse(KK, "up: dot(1,1)")), 1, 1) == [[Fraction(-4)]]


def test_rejected_parameters():
    with pytest.raises(OracleError, match="t\\^2"):
        ActionContext(default_params(KK, 2, t_squared=False))
    with pytest.raises(OracleError, match="even"):
        ActionContext(default_params(builtin("ext2"), 2))


def test_positivity_relations_hold_in_the_action():
    for n0 in (0, 1):
        ctx = ActionContext.default(KK, 1, n0)
        for rel in relations(KK, -1, ["pos", "neg"]):
            assert mat_equal(evaluate(ctx, rel.lhs), evaluate(ctx, rel.rhs)), rel.name


def test_functoriality():
    ctx = ActionContext.default(builtin("C2"), 2, 1)
    f = Morphism.parse(ctx.A, "up up: xpos(1); dot(1,1)")
    g = Morphism.parse(ctx.A, "up up: tok(2,g); xneg(1)")
    assert mat_equal(evaluate(ctx, compose(f, g)), mat_mul(evaluate(ctx, f), evaluate(ctx, g)))


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 10**6), st.sampled_from(["trivial", "C2", "dual"]), st.sampled_from([1, 2]), st.sampled_from([0, 1]))
def test_oracle_agrees_with_normalize(seed, name, l, n0):
    A = builtin(name)
    f = random_diagram(random.Random(seed), A, max_width=2, length=5, max_crossings=2)
    assert oracle_agrees(ActionContext.default(A, l, n0), f)
