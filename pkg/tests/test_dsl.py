import pytest

from heiscat.dsl import DSLError, elementary, format_word, from_json, parse_slices, parse_word, render_elementary, to_json


def test_words():
    assert parse_word("up down") == ("u", "d")
    assert parse_word("1") == ()
    assert format_word(("u", "d")) == "up down"


def test_positions_count_from_the_right():
    src, slices = parse_slices("up up: xpos(1); dot(2,1)")
    assert elementary(src, slices) == (("u", "u"), [("xpos", 0, None), ("dot", 0, 1)], ("u", "u"))


def test_render_round_trip():
    for text in ("up up: xpos(1); dot(2,1)", "up down: dot(1,-1); cupR(1)", "up|cupR(1) ; capR(1)|up"):
        src, elems, _ = elementary(*parse_slices(text))
        again = render_elementary(src, elems)
        assert elementary(*parse_slices(again))[1] == elems


def test_json_round_trip():
    data = to_json(("u", "u"), [("xpos", 0, None), ("dot", 1, 2)], ("u", "u"))
    assert from_json(data) == (("u", "u"), [("xpos", 0, None), ("dot", 1, 2)], ("u", "u"))


def test_empty_diagram():
    assert parse_slices("1") == ((), [])


@pytest.mark.parametrize("text", ["up: dot(1)", "up: wobble(1)", "up: xpos(1)", "up: capR(1)", "up: dot(1,x)"])
def test_errors(text):
    with pytest.raises(DSLError):
        elementary(*parse_slices(text))
