import re

import pytest

from heiscat.frobenius import builtin
from heiscat.relations import CATALOG, relations


@pytest.mark.parametrize("k", [-2, -1, 0, 1, 2])
@pytest.mark.parametrize("name", sorted(CATALOG))
def test_relation_family(grid_algebra, name, k):
    for rel in relations(grid_algebra, k, [name]):
        res = rel.check(k)
        assert res.ok, res.diff()


def test_catalog_is_nonempty_on_every_cell():
    for k in (-2, 0, 2):
        names = {re.match("[a-z]+", r.name).group() for r in relations(builtin("C2"), k)}
        assert {"pos", "neg", "skein", "braid", "rightadj", "dog", "bs", "altbraid"} <= names


def test_lunch_only_at_zero_charge():
    A = builtin("trivial")
    assert relations(A, 0, ["lunch"])
    assert not relations(A, 1, ["lunch"])


@pytest.mark.parametrize("k", [-3, 3])
def test_larger_charges(k):
    A = builtin("trivial")
    for rel in relations(A, k, ["pos", "neg", "curls", "morecurls", "altbraid"]):
        res = rel.check(k)
        assert res.ok, res.diff()
