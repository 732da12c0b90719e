"""A catalog of relations of the Heisenberg category, as pairs of morphisms.

Each entry is drawn from scratch with :class:`Pic` (strand positions count
from the left, starting at 0) rather than taken from the straightener's rule
tables, so that ``normalize(lhs) == normalize(rhs)`` is a real test.
Teleporters are expanded as ``z * sum_i e_i ⊗ e_i^v``.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product
from typing import Callable, Dict, Iterable, List, Optional

from heiscat.core import ONE, T, Z
from heiscat.diagrams import Morphism, normalize
from heiscat.dsl import DOWN, UP
from heiscat.planar import crossing_over_left, word_after

MAX_DOTS = 3


class Pic:
    """Builds a single diagram slice by slice."""

    def __init__(self, A, word: str):
        self.A = A
        self.source = tuple(UP if c == "u" else DOWN for c in word)
        self.word = self.source
        self.slices = []

    def _add(self, sl):
        self.slices.append(sl)
        self.word = word_after(self.word, sl)
        return self

    def x(self, i: int, over: str) -> "Pic":
        """A crossing of positions ``i, i+1``; ``over`` is ``"L"`` or ``"R"`` (bottom end of the over strand)."""
        left_over = over == "L"
        name = "xpos" if crossing_over_left(self.word, i, True) == left_over else "xneg"
        return self._add((name, i, None))

    def dot(self, i: int, n: int) -> "Pic":
        return self._add(("dot", i, n)) if n else self

    def tok(self, i: int, a) -> "Pic":
        return self._add(("tok", i, a))

    def bub(self, region: int, orientation: str, sign: str, a, dots: int) -> "Pic":
        return self._add(("bub", region, (orientation, sign, a, dots)))

    def cupR(self, i):
        return self._add(("cupR", i, None))

    def cupL(self, i):
        return self._add(("cupL", i, None))

    def capR(self, i):
        return self._add(("capR", i, None))

    def capL(self, i):
        return self._add(("capL", i, None))

    def m(self, coeff=ONE) -> Morphism:
        return Morphism.from_slices(self.A, self.source, self.slices, coeff)


def _sum(A, source, target, terms: Iterable[Morphism]) -> Morphism:
    out = Morphism.zero(A, source, target)
    for t in terms:
        out = out + t
    return out


def _pairs(A):
    """``(e_i, e_i^v)`` for the teleporter sum."""
    return [(A.basis_element(i), A.dual(i)) for i in range(A.dim)]


@dataclass
class Relation:
    name: str
    lhs: Morphism
    rhs: Morphism

    def check(self, k: int) -> "RelationResult":
        left = normalize(self.lhs, k)
        right = normalize(self.rhs, k)
        return RelationResult(self.name, left == right, left, right)


@dataclass
class RelationResult:
    name: str
    ok: bool
    lhs: object
    rhs: object

    def diff(self) -> str:
        if self.ok:
            return ""
        return f"lhs = {self.lhs}\nrhs = {self.rhs}"


# quantum affine wreath relations -----------------------------------------------------------


def skein(A, k):
    lhs = Pic(A, "uu").x(0, "L").m() - Pic(A, "uu").x(0, "R").m()
    rhs = _sum(A, lhs.source, lhs.target, (Pic(A, "uu").tok(0, b).tok(1, bv).m(Z) for b, bv in _pairs(A)))
    yield Relation("skein", lhs, rhs)


def braid(A, k):
    ident = Morphism.identity(A, "up up")
    yield Relation("braid:R2+-", Pic(A, "uu").x(0, "L").x(0, "R").m(), ident)
    yield Relation("braid:R2-+", Pic(A, "uu").x(0, "R").x(0, "L").m(), ident)
    for heights in ((2, 1, 0), (0, 1, 2), (1, 2, 0), (2, 0, 1)):
        yield Relation(f"braid:R3{heights}", _triangle(A, "uuu", "a", heights), _triangle(A, "uuu", "b", heights))
    # dots and tokens move through crossings
    a = A.basis_element(A.dim - 1)
    yield Relation(
        "braid:dot-slide", Pic(A, "uu").x(0, "L").dot(1, 1).x(0, "L").m(), Pic(A, "uu").dot(0, 1).m()
    )
    yield Relation("braid:token-slide", Pic(A, "uu").tok(0, a).x(0, "L").m(), Pic(A, "uu").x(0, "L").tok(1, a).m())
    # tokens teleport
    for c in range(A.dim):
        cc = A.basis_element(c)
        lhs = _sum(A, ("u", "u"), ("u", "u"), (Pic(A, "uu").tok(0, A.mul(cc, b)).tok(1, bv).m(Z) for b, bv in _pairs(A)))
        rhs = _sum(A, ("u", "u"), ("u", "u"), (Pic(A, "uu").tok(0, b).tok(1, A.mul(bv, cc)).m(Z) for b, bv in _pairs(A)))
        yield Relation(f"braid:teleport[{A.basis[c]}]", lhs, rhs)


def _triangle(A, word, shape, heights) -> Morphism:
    """Three crossings ``x(1) x(0) x(1)`` (shape a) or ``x(0) x(1) x(0)`` (shape b) with strand heights."""
    p = Pic(A, word)
    strands = [0, 1, 2]
    for i in ([1, 0, 1] if shape == "a" else [0, 1, 0]):
        p.x(i, "L" if heights[strands[i]] > heights[strands[i + 1]] else "R")
        strands[i], strands[i + 1] = strands[i + 1], strands[i]
    return p.m()


# adjunctions -------------------------------------------------------------------------------------


def rightadj(A, k):
    yield Relation("rightadj:up", Pic(A, "u").cupR(1).capR(0).m(), Morphism.identity(A, "up"))
    yield Relation("rightadj:down", Pic(A, "d").cupR(0).capR(1).m(), Morphism.identity(A, "down"))


def adjfinal(A, k):
    yield Relation("adjfinal:up", Pic(A, "u").cupL(0).capL(1).m(), Morphism.identity(A, "up"))
    yield Relation("adjfinal:down", Pic(A, "d").cupL(1).capL(0).m(), Morphism.identity(A, "down"))


# inversion relations -------------------------------------------------------------------------------


def pos(A, k):
    lhs = Pic(A, "ud").x(0, "L").x(0, "L").m()
    terms = [Morphism.identity(A, "up down")]
    for b, bv in _pairs(A):
        terms.append(Pic(A, "ud").tok(0, b).capR(0).cupL(0).tok(0, bv).m(-T.inverse() * Z))
    for r in range(1, k + 1):
        for s in range(1, k + 1 - r):
            for (b1, v1), (b2, v2) in product(_pairs(A), repeat=2):
                p = Pic(A, "ud").tok(0, v2).dot(0, s).capR(0).bub(0, "ccw", "+", A.mul(b1, b2), -r - s)
                terms.append(p.cupL(0).tok(0, v1).dot(0, r).m(Z * Z))
    yield Relation("pos", lhs, _sum(A, lhs.source, lhs.target, terms))


def neg(A, k):
    lhs = Pic(A, "du").x(0, "R").x(0, "R").m()
    terms = [Morphism.identity(A, "down up")]
    for b, bv in _pairs(A):
        terms.append(Pic(A, "du").tok(1, b).capL(0).cupR(0).tok(1, bv).m(T * Z))
    for r in range(1, -k + 1):
        for s in range(1, -k + 1 - r):
            for (b1, v1), (b2, v2) in product(_pairs(A), repeat=2):
                p = Pic(A, "du").tok(1, v2).dot(1, s).capL(0).bub(0, "cw", "+", A.mul(b1, b2), -r - s)
                terms.append(p.cupR(0).tok(1, v1).dot(1, r).m(Z * Z))
    yield Relation("neg", lhs, _sum(A, lhs.source, lhs.target, terms))


def lunch(A, k):
    if k != 0:
        return
    yield Relation("lunch:du", Pic(A, "du").x(0, "L").x(0, "R").m(), Morphism.identity(A, "down up"))
    yield Relation("lunch:ud", Pic(A, "ud").x(0, "R").x(0, "L").m(), Morphism.identity(A, "up down"))


# curls and bubbles ----------------------------------------------------------------------------------------


def _right_curl(A, over, n=0):
    return Pic(A, "u").cupL(1).x(0, over).dot(1, n).capR(1).m()


def _left_curl(A, over, n=0):
    return Pic(A, "u").cupR(0).x(1, over).dot(1, n).capL(0).m()


def _cw(A, a, n):
    return Pic(A, "").cupL(0).dot(0, n).tok(0, a).capR(0).m()


def _ccw(A, a, n):
    return Pic(A, "").cupR(0).dot(1, n).tok(1, a).capL(0).m()


def _empty(A, c) -> Morphism:
    return Morphism.identity(A, "1").scale(c)


def curls(A, k):
    if k >= 0:
        yield Relation("curls:right", _right_curl(A, "R"), Morphism.identity(A, "up").scale(T.inverse() if k == 0 else 0))
    for n in range(0, k + 1):
        for i in range(A.dim):
            a = A.basis_element(i)
            c = ((T if n == 0 else 0) - (T.inverse() if n == k else 0)) / Z * A.tr(a)
            yield Relation(f"curls:cw[{A.basis[i]},{n}]", _cw(A, a, n), _empty(A, c))


def morecurls(A, k):
    if k <= 0:
        yield Relation("morecurls:left", _left_curl(A, "L"), Morphism.identity(A, "up").scale(T if k == 0 else 0))
    for n in range(0, -k + 1):
        for i in range(A.dim):
            a = A.basis_element(i)
            c = ((T if n == -k else 0) - (T.inverse() if n == 0 else 0)) / Z * A.tr(a)
            yield Relation(f"morecurls:ccw[{A.basis[i]},{n}]", _ccw(A, a, n), _empty(A, c))


def impose(A, k):
    for i in range(A.dim):
        a = A.basis_element(i)
        if k > 0:
            yield Relation(f"impose[{A.basis[i]}]", _cw(A, a, 0), _empty(A, T / Z * A.tr(a)))
        elif k == 0:
            yield Relation(f"impose[{A.basis[i]}]", _cw(A, a, 0), _empty(A, (T - T.inverse()) / Z * A.tr(a)))
        else:
            yield Relation(f"impose[{A.basis[i]}]", _ccw(A, a, -k), _empty(A, T / Z * A.tr(a)))


def _teleported(A, strand_dots, orient, sign, bubble_dots, side):
    """``z sum_b`` (strand with ``x^strand_dots b^v``) teleported to a bubble holding ``b``."""
    terms = []
    for b, bv in _pairs(A):
        p = Pic(A, "u")
        if side == "L":
            p.bub(0, orient, sign, b, bubble_dots)
        p.tok(0, bv).dot(0, strand_dots)
        if side == "R":
            p.bub(1, orient, sign, b, bubble_dots)
        terms.append(p.m(Z))
    return _sum(A, ("u",), ("u",), terms)


def dog(A, k):
    ups = ("u",)
    for n in range(-MAX_DOTS, MAX_DOTS + 1):
        R = range(0, abs(k) + abs(n) + 2)
        # dog1: left curl, positive crossing
        rhs = _sum(A, ups, ups, [_teleported(A, r, "ccw", "+", n - r, "L") for r in R])
        rhs = rhs - _sum(A, ups, ups, [_teleported(A, -r, "ccw", "-", n + r, "L") for r in R if r > 0])
        yield Relation(f"dog1[{n}]", _left_curl(A, "L", n), rhs)
        # dog2: left curl, negative crossing
        rhs = _sum(A, ups, ups, [_teleported(A, r, "ccw", "+", n - r, "L") for r in R if r > 0])
        rhs = rhs - _sum(A, ups, ups, [_teleported(A, -r, "ccw", "-", n + r, "L") for r in R])
        yield Relation(f"dog2[{n}]", _left_curl(A, "R", n), rhs)
        # dog3: right curl, positive crossing
        rhs = _sum(A, ups, ups, [_teleported(A, -r, "cw", "-", n + r, "R") for r in R])
        rhs = rhs - _sum(A, ups, ups, [_teleported(A, r, "cw", "+", n - r, "R") for r in R if r > 0])
        yield Relation(f"dog3[{n}]", _right_curl(A, "L", n), rhs)
        # dog4: right curl, negative crossing
        rhs = _sum(A, ups, ups, [_teleported(A, -r, "cw", "-", n + r, "R") for r in R if r > 0])
        rhs = rhs - _sum(A, ups, ups, [_teleported(A, r, "cw", "+", n - r, "R") for r in R])
        yield Relation(f"dog4[{n}]", _right_curl(A, "R", n), rhs)


def bubble_slides(A, k):
    ups = ("u",)
    for n in range(-MAX_DOTS, MAX_DOTS + 1):
        R = range(1, abs(k) + abs(n) + 2)
        for i in range(A.dim):
            a = A.basis_element(i)
            ad = A.dagger(a)
            name = A.basis[i]
            for label, orient, sign, step in (("bs1", "cw", "+", -1), ("bs2", "ccw", "+", -1), ("bs3", "cw", "-", 1), ("bs4", "ccw", "-", 1)):
                # the bubble starts on the far side: cw bubbles move left to right, ccw ones right to left
                start, end = (0, 1) if orient == "cw" else (1, 0)
                lhs = Pic(A, "u").bub(start, orient, sign, a, n).m()
                terms = [Pic(A, "u").bub(end, orient, sign, a, n).m()]
                for r in R:
                    for b, bv in _pairs(A):
                        p = Pic(A, "u")
                        if orient == "ccw":
                            p.bub(0, orient, sign, b, n + step * r)
                        p.dot(0, -step * r).tok(0, bv).tok(0, ad)
                        if orient == "cw":
                            p.bub(1, orient, sign, b, n + step * r)
                        terms.append(p.m(-Z * r))
                yield Relation(f"{label}[{name},{n}]", lhs, _sum(A, ups, ups, terms))


def altbraid(A, k):
    if k >= 0:
        lhs = _altbraid(A, "L", "a") - _altbraid(A, "L", "b")
        terms = []
        for r, s, t in product(range(k + 1), range(k + 1), range(1, k + 1)):
            if r + s + t > k:
                continue
            for (b1, v1), (b2, v2), (b3, v3) in product(_pairs(A), repeat=3):
                p = Pic(A, "udu").tok(0, v2).dot(1, s).tok(2, v3).dot(2, t).capR(0)
                p.bub(0, "ccw", "+", A.mul(A.mul(b1, b2), b3), -r - s - t)
                p.cupL(0).tok(0, v1).dot(1, r)
                terms.append(p.m(Z * Z * Z))
        yield Relation("altbraid1", lhs, _sum(A, lhs.source, lhs.target, terms))
    if k <= 0:
        lhs = _altbraid(A, "R", "a") - _altbraid(A, "R", "b")
        terms = []
        kk = -k
        for r, s, t in product(range(kk + 1), range(kk + 1), range(1, kk + 1)):
            if r + s + t > kk:
                continue
            for (b1, v1), (b2, v2), (b3, v3) in product(_pairs(A), repeat=3):
                p = Pic(A, "udu").tok(0, v3).dot(0, t).dot(1, s).tok(2, v2).capL(1)
                p.bub(1, "cw", "+", A.mul(A.mul(b1, b2), b3), -r - s - t)
                p.cupR(1).dot(1, r).tok(2, v1)
                terms.append(p.m(Z * Z * Z))
        yield Relation("altbraid2", lhs, _sum(A, lhs.source, lhs.target, terms))


def _altbraid(A, top_end: str, bulge: str) -> Morphism:
    """Up, down, up strands where the two up strands cross and the down strand bulges.

    ``top_end="L"``: the up strand starting on the right is on top, the down
    strand in the middle; ``"R"`` mirrors the heights.  ``bulge`` ``"a"``
    sends the down strand left, ``"b"`` right.
    """
    heights = (0, 1, 2) if top_end == "L" else (2, 1, 0)
    p = Pic(A, "udu")
    strands = [0, 1, 2]
    for i in ([0, 1, 0] if bulge == "a" else [1, 0, 1]):
        p.x(i, "L" if heights[strands[i]] > heights[strands[i + 1]] else "R")
        strands[i], strands[i + 1] = strands[i + 1], strands[i]
    return p.m()


CATALOG: Dict[str, Callable] = {
    "pos": pos,
    "neg": neg,
    "curls": curls,
    "morecurls": morecurls,
    "impose": impose,
    "skein": skein,
    "braid": braid,
    "rightadj": rightadj,
    "adjfinal": adjfinal,
    "lunch": lunch,
    "dog": dog,
    "bs": bubble_slides,
    "altbraid": altbraid,
}


def relations(A, k: int, names: Optional[Iterable[str]] = None) -> List[Relation]:
    out = []
    for key in names or CATALOG:
        out.extend(CATALOG[key](A, k))
    return out


def check_relations(A, k: int, names: Optional[Iterable[str]] = None) -> List[RelationResult]:
    return [rel.check(k) for rel in relations(A, k, names)]
