"""The slice language for diagrams.

A term is ``[WORD:] slice ; slice ; ...`` read bottom to top.  A slice is a
tensor product ``piece | piece | ...`` of pieces, each one of ``up``,
``down``, ``id`` or a generator::

    dot(i,e)  tok(i,b)  xpos(i)  xneg(i)  cupR(i)  capR(i)  cupL(i)  capL(i)
    bub(i,orientation,sign,b,n)

``bub`` is a bubble placed in the region just left of strand ``i`` (``i = 0``
is the far right): ``orientation`` is ``ccw`` or ``cw``, ``sign`` is ``+``,
``-`` (the fake bubble halves) or ``0`` (a genuine bubble), ``b`` its token and
``n`` its dots.

Strand positions count from the right starting at 1, so ``xpos(1)`` crosses
the two rightmost strands of its piece.  A generator piece spans its own
strands plus ``i - 1`` identity strands to their right.  A slice made of a
single piece is padded with identity strands on the left.  ``WORD`` is a
space separated list of ``up``/``down`` (or ``1`` for the empty word); when it
is missing the source is read off the first slice, with unknown strands
taken to point up.

Crossings on strands that do not both point up mean the corresponding
rotation of the upward crossing.
"""

from __future__ import annotations

import json
import re
from typing import List, Optional, Sequence, Tuple

UP, DOWN = "u", "d"
GENS = ("dot", "tok", "xpos", "xneg", "cupR", "capR", "cupL", "capL", "bub")

Piece = Tuple[str, int, object]  # (name, i, arg); name in GENS or 'up'/'down'/'id'


class DSLError(ValueError):
    pass


_PIECE = re.compile(r"^\s*([A-Za-z]+)\s*(?:\(\s*([^)]*)\))?\s*$")


def parse_word(text: str) -> Tuple[str, ...]:
    text = text.strip()
    if text in ("", "1", "()"):
        return ()
    out = []
    for tok in re.split(r"[\s,⊗*]+", text):
        if not tok:
            continue
        t = tok.lower()
        if t in ("up", "u", "↑"):
            out.append(UP)
        elif t in ("down", "d", "↓"):
            out.append(DOWN)
        else:
            raise DSLError(f"unknown object letter {tok!r}")
    return tuple(out)


def format_word(word: Sequence[str]) -> str:
    return " ".join("up" if o == UP else "down" for o in word) or "1"


def _parse_piece(text: str) -> Piece:
    m = _PIECE.match(text)
    if not m:
        raise DSLError(f"cannot parse {text.strip()!r}")
    name, args = m.group(1), m.group(2)
    if name in ("up", "down", "id") and args is None:
        return (name, 0, None)
    if name not in GENS:
        raise DSLError(f"unknown generator {name!r}")
    if args is None:
        raise DSLError(f"{name} needs arguments")
    parts = [a.strip() for a in args.split(",")]
    try:
        i = int(parts[0])
    except ValueError:
        raise DSLError(f"bad strand index in {text.strip()!r}") from None
    if name == "bub":
        return (name, i, _parse_bubble(parts, text))
    if i < 1:
        raise DSLError("strand indices start at 1")
    if name == "dot":
        if len(parts) != 2:
            raise DSLError("dot takes (i, e)")
        try:
            e = int(parts[1])
        except ValueError:
            raise DSLError(f"bad dot exponent in {text.strip()!r}") from None
        return (name, i, e)
    if name == "tok":
        if len(parts) != 2 or not parts[1]:
            raise DSLError("tok takes (i, b)")
        return (name, i, parts[1])
    if len(parts) != 1:
        raise DSLError(f"{name} takes one index")
    return (name, i, None)


def _parse_bubble(parts, text):
    if len(parts) != 5:
        raise DSLError("bub takes (i, orientation, sign, b, n)")
    _, orient, sign, tok, dots = parts
    if orient not in ("ccw", "cw") or sign not in ("+", "-", "0") or not tok:
        raise DSLError(f"bad bubble {text.strip()!r}")
    try:
        n = int(dots)
    except ValueError:
        raise DSLError(f"bad dot count in {text.strip()!r}") from None
    if int(parts[0]) < 0:
        raise DSLError("bubble positions start at 0")
    return (orient, sign, tok, n)


def parse_slices(text: str) -> Tuple[Optional[Tuple[str, ...]], List[List[Piece]]]:
    text = text.strip()
    if text == "1":
        return (), []
    source = None
    head, sep, rest = text.partition(":")
    if sep and "(" not in head:
        source = parse_word(head)
        text = rest
    slices = []
    for chunk in text.split(";"):
        if not chunk.strip():
            continue
        slices.append([_parse_piece(p) for p in chunk.split("|")])
    return source, slices


def piece_widths(piece: Piece) -> Tuple[int, int]:
    """(bottom width, top width) of a piece; 'id' has unknown width (-1)."""
    name, i, _ = piece
    if name in ("up", "down"):
        return 1, 1
    if name == "id":
        return -1, -1
    if name in ("dot", "tok", "bub"):
        return i, i
    if name in ("xpos", "xneg"):
        return i + 1, i + 1
    if name in ("cupR", "cupL"):
        return i - 1, i + 1
    return i + 1, i - 1


def _infer_source(pieces: List[Piece]) -> Tuple[str, ...]:
    out: List[str] = []
    for name, i, _ in pieces:
        if name == "up":
            out.append(UP)
        elif name == "down":
            out.append(DOWN)
        elif name == "id":
            raise DSLError("cannot infer the source word from 'id'; give a WORD: prefix")
        elif name == "capR":
            out.extend([UP, DOWN] + [UP] * (i - 1))
        elif name == "capL":
            out.extend([DOWN, UP] + [UP] * (i - 1))
        else:
            out.extend([UP] * piece_widths((name, i, None))[0])
    return tuple(out)


def elementary(source: Optional[Sequence[str]], slices: List[List[Piece]]):
    """Lower sliced pieces to elementary slices ``(name, left_index, arg)``.

    Returns ``(source, elementary slices, target)``.
    """
    from heiscat.planar import check_slice, word_after

    if source is None:
        source = _infer_source(slices[0]) if slices else ()
    word = tuple(source)
    out = []
    for pieces in slices:
        widths = [piece_widths(p)[0] for p in pieces]
        if len(pieces) == 1:
            if widths[0] == -1:
                continue
            if widths[0] > len(word):
                raise DSLError(f"piece needs {widths[0]} strands, word has {len(word)}")
            offsets = [len(word) - widths[0]]
        else:
            if widths.count(-1) > 1:
                raise DSLError("at most one 'id' piece per slice")
            known = sum(w for w in widths if w != -1)
            if -1 in widths:
                widths[widths.index(-1)] = len(word) - known
            if sum(widths) != len(word) or min(widths) < 0:
                raise DSLError(f"slice widths {widths} do not match the word of width {len(word)}")
            offsets = []
            acc = 0
            for w in widths:
                offsets.append(acc)
                acc += w
        elems = []
        for (name, i, arg), off, w in zip(pieces, offsets, widths):
            if name in ("up", "down"):
                want = UP if name == "up" else DOWN
                if word[off] != want:
                    raise DSLError(f"strand {len(word) - off} points the other way")
                continue
            if name == "id":
                continue
            if name in ("dot", "tok", "bub"):
                elems.append((name, off + w - i, arg))
            elif name in ("xpos", "xneg", "capR", "capL"):
                elems.append((name, off + w - i - 1, arg))
            else:
                elems.append((name, off, arg))
        # right-most pieces first: left indices of the others stay valid
        for sl in reversed(elems):
            try:
                check_slice(word, sl)
            except ValueError as exc:
                raise DSLError(str(exc)) from None
            out.append(sl)
            word = word_after(word, sl)
    return tuple(source), out, word


def render_elementary(source: Sequence[str], elems) -> str:
    """Inverse of :func:`elementary` producing one generator per slice."""
    from heiscat.planar import word_after

    word = tuple(source)
    parts = []
    for name, L, arg in elems:
        m = len(word)
        if name in ("dot", "tok"):
            parts.append(f"{name}({m - L},{arg})")
        elif name == "bub":
            parts.append("bub({},{},{},{},{})".format(m - L, *arg))
        elif name in ("xpos", "xneg", "capR", "capL"):
            parts.append(f"{name}({m - L - 1})")
        else:
            parts.append(f"{name}({m - L + 1})")
        word = word_after(word, (name, L, arg))
    body = "; ".join(parts) if parts else "id"
    return f"{format_word(source)}: {body}"


def to_json(source, elems, target) -> dict:
    return {
        "source": ["up" if o == UP else "down" for o in source],
        "target": ["up" if o == UP else "down" for o in target],
        "slices": [{"gen": n, "i": i, **({} if a is None else {"arg": a})} for n, i, a in elems],
    }


def from_json(data):
    if isinstance(data, str):
        data = json.loads(data)
    from heiscat.planar import check_slice, word_after

    source = tuple(UP if o == "up" else DOWN for o in data["source"])
    word = source
    elems = []
    for s in data["slices"]:
        sl = (s["gen"], int(s["i"]), s.get("arg"))
        if sl[0] not in GENS:
            raise DSLError(f"unknown generator {sl[0]!r}")
        try:
            check_slice(word, sl)
        except ValueError as exc:
            raise DSLError(str(exc)) from None
        elems.append(sl)
        word = word_after(word, sl)
    if "target" in data:
        tgt = tuple(UP if o == "up" else DOWN for o in data["target"])
        if tgt != word:
            raise DSLError("target word does not match the slices")
    return source, elems, word
