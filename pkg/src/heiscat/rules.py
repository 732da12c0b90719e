"""Local pictures used by the straightening algorithm.

Every rule is a left hand side picture together with a list of right hand
side terms ``(coefficient, picture, payloads)``.  Payloads are bubbles
sitting in a face of the right hand side picture, given as
``(dart, SymElement)`` with the dart on the face.
"""

from __future__ import annotations

from itertools import permutations, product
from typing import Dict, List, Tuple

from heiscat.core import ONE, T, Z, Scalar
from heiscat.dsl import elementary, parse_slices
from heiscat.local import describe_local
from heiscat.planar import Geometry, PlanarMap, build_scene, crossing_over_left
from heiscat.symfun import CCW, CW, MINUS, PLUS, BubbleSymbol, SymElement, bubble_value

Term = Tuple[Scalar, PlanarMap, List[Tuple[Tuple[int, int], SymElement]]]


def build_picture(A, text: str, token_of=None) -> List[Tuple[Scalar, PlanarMap]]:
    """Planar map(s) of a DSL picture without floating components."""
    if token_of is None:
        token_of = _basis_token(A)
    source, slices = parse_slices(text)
    source, elems, _ = elementary(source, slices)
    geom = Geometry(source, elems)
    out = []
    for c, scene in build_scene(A, geom, token_of):
        if scene.floats:
            raise ValueError("local pictures must be connected to the boundary")
        out.append((c, scene.map))
    return out


def _basis_token(A):
    def token_of(arg):
        if isinstance(arg, str) and arg.startswith("#"):
            return A.basis_element(int(arg[1:]))
        return A.parse_element(arg)

    return token_of


def left_gap(T: PlanarMap):
    return T.left_face_dart()


def right_gap(T: PlanarMap):
    return T.right_face_dart()


class RuleBook:
    """Rules for one algebra and central charge, built lazily and cached."""

    def __init__(self, A, k: int, N: int):
        self.A = A
        self.k = k
        self.N = N
        self._pics: Dict[str, List[Tuple[Scalar, PlanarMap]]] = {}
        self._cache: Dict[object, object] = {}

    # helpers --------------------------------------------------------------------
    def pic(self, text: str) -> PlanarMap:
        """A picture whose tokens are basis elements (single map)."""
        if text not in self._pics:
            self._pics[text] = build_picture(self.A, text)
        maps = self._pics[text]
        if len(maps) != 1 or maps[0][0] != ONE:
            raise ValueError(f"picture {text!r} is not a single basis diagram")
        return maps[0][1]

    def bubble(self, orientation, sign, token: int, dots: int) -> SymElement:
        return bubble_value(BubbleSymbol(orientation, sign, self.A.basis_element(token), dots), self.k, self.N)

    def _casimir(self):
        return list(self.A.casimir.items())

    def _teleporter_bubble(self, orientation, sign, dots_range, strand_text, side, coeff):
        """Sum over r of a strand carrying ``x^r b^v`` teleported to a bubble.

        ``strand_text(r, bv)`` gives the strand picture, ``dots_range`` yields
        ``(r, bubble dots)`` pairs.
        """
        out: List[Term] = []
        for r, n in dots_range:
            for (b, bv), c in self._casimir():
                val = self.bubble(orientation, sign, b, n)
                if val.is_zero():
                    continue
                T_ = self.pic(strand_text(r, bv))
                gap = left_gap(T_) if side == "L" else right_gap(T_)
                if val.is_scalar():
                    out.append((coeff * c * Z * val.scalar_part(), T_, []))
                else:
                    out.append((coeff * c * Z, T_, [(gap, val)]))
        return out

    # skein ------------------------------------------------------------------------
    def crossing(self, sign: int) -> PlanarMap:
        return self.pic("up up: xpos(1)" if sign > 0 else "up up: xneg(1)")

    def skein(self, sign: int) -> List[Term]:
        """Rewrite a crossing of the given sign in terms of the opposite one."""
        key = ("skein", sign)
        if key not in self._cache:
            out: List[Term] = [(ONE, self.crossing(-sign), [])]
            for (b, bv), c in self._casimir():
                out.append((c * Z * sign, self.pic(f"up up: tok(1,#{b}) | tok(1,#{bv})"), []))
            self._cache[key] = out
        return self._cache[key]

    # bigons -------------------------------------------------------------------------
    def bigon_patterns(self) -> List[Tuple[PlanarMap, List[Term]]]:
        """All two-crossing bigons with their reductions (when one applies directly)."""
        key = "bigons"
        if key in self._cache:
            return self._cache[key]
        cas = self._casimir()
        pats = []
        for s1, s2 in product((1, -1), repeat=2):
            nm = {1: "xpos", -1: "xneg"}
            lhs = self.pic(f"up up: {nm[s1]}(1); {nm[s2]}(1)")
            rhs: List[Term] = [(ONE, self.pic("up up: dot(1,0)"), [])]
            if s1 == s2:
                for (b, bv), c in cas:
                    rhs.append((c * Z * s1, self.pic(f"up up: {nm[s1]}(1); tok(1,#{b}) | tok(1,#{bv})"), []))
            pats.append((lhs, rhs))
        # cyclic bigons
        lhs = self.pic("up down: xneg(1); xneg(1)")
        rhs = [(ONE, self.pic("up down: dot(2,0)"), [])]
        for (b, bv), c in cas:
            rhs.append((-(T.inverse()) * Z * c, self.pic(f"up down: tok(2,#{bv}); capR(1); cupL(1); tok(2,#{b})"), []))
        rhs.extend(self._bigon_bubbles("pos"))
        pats.append((lhs, rhs))
        lhs = self.pic("down up: xpos(1); xpos(1)")
        rhs = [(ONE, self.pic("down up: dot(1,0)"), [])]
        for (b, bv), c in cas:
            rhs.append((T * Z * c, self.pic(f"down up: tok(1,#{bv}); capL(1); cupR(1); tok(1,#{b})"), []))
        rhs.extend(self._bigon_bubbles("neg"))
        pats.append((lhs, rhs))
        self._cache[key] = pats
        return pats

    def _bigon_bubbles(self, which) -> List[Term]:
        A, k = self.A, self.k
        out: List[Term] = []
        bound = k if which == "pos" else -k
        cas = self._casimir()
        for r in range(1, bound + 1):
            for s in range(1, bound + 1 - r):
                for (b1, v1), c1 in cas:
                    for (b2, v2), c2 in cas:
                        if which == "pos":
                            text = f"up down: tok(2,#{v2}); dot(2,{s}); capR(1); cupL(1); tok(2,#{v1}); dot(2,{r})"
                        else:
                            text = f"down up: tok(1,#{v2}); dot(1,{s}); capL(1); cupR(1); tok(1,#{v1}); dot(1,{r})"
                        T_ = self.pic(text)
                        prod_ = A.mul(A.basis_element(b1), A.basis_element(b2))
                        orient = CCW if which == "pos" else CW
                        val = bubble_value(BubbleSymbol(orient, PLUS, prod_, -r - s), k, self.N)
                        if val.is_zero():
                            continue
                        gap = left_gap(T_) if which == "pos" else right_gap(T_)
                        coeff = c1 * c2 * Z * Z
                        if val.is_scalar():
                            out.append((coeff * val.scalar_part(), T_, []))
                        else:
                            out.append((coeff, T_, [(gap, val)]))
        return out

    # curls --------------------------------------------------------------------------
    def curl_patterns(self) -> List[Tuple[PlanarMap, List[Term]]]:
        key = "curls"
        if key in self._cache:
            return self._cache[key]
        k = self.k
        span = range(0, abs(k) + 2)

        def strand(r, bv):
            return f"up: tok(1,#{bv}); dot(1,{r})"

        pats = []
        # positive and negative left curls
        lhs = self.pic("up: cupR(2); xpos(1); capL(2)")
        rhs = self._teleporter_bubble(CCW, PLUS, [(r, -r) for r in span], strand, "L", ONE)
        rhs += self._teleporter_bubble(CCW, MINUS, [(-r, r) for r in span if r > 0], strand, "L", -ONE)
        pats.append((lhs, rhs))
        lhs = self.pic("up: cupR(2); xneg(1); capL(2)")
        rhs = self._teleporter_bubble(CCW, PLUS, [(r, -r) for r in span if r > 0], strand, "L", ONE)
        rhs += self._teleporter_bubble(CCW, MINUS, [(-r, r) for r in span], strand, "L", -ONE)
        pats.append((lhs, rhs))
        # positive and negative right curls
        lhs = self.pic("up: cupL(1); xpos(2); capR(1)")
        rhs = self._teleporter_bubble(CW, MINUS, [(-r, r) for r in span], strand, "R", ONE)
        rhs += self._teleporter_bubble(CW, PLUS, [(r, -r) for r in span if r > 0], strand, "R", -ONE)
        pats.append((lhs, rhs))
        lhs = self.pic("up: cupL(1); xneg(2); capR(1)")
        rhs = self._teleporter_bubble(CW, MINUS, [(-r, r) for r in span if r > 0], strand, "R", ONE)
        rhs += self._teleporter_bubble(CW, PLUS, [(r, -r) for r in span], strand, "R", -ONE)
        pats.append((lhs, rhs))
        self._cache[key] = pats
        return pats

    # triangles -------------------------------------------------------------------------
    def triangle_table(self):
        """Description -> (picture, partner picture, heights) for every triangle.

        A triangle picture is ``x(1); x(2); x(1)`` (shape ``a``) or
        ``x(2); x(1); x(2)`` (shape ``b``) on a word of three strands, with
        crossing signs read off from strand heights (a permutation giving the
        height of the strands numbered by their bottom position from the left).
        """
        key = "triangles"
        if key in self._cache:
            return self._cache[key]
        table = {}
        for word in product("ud", repeat=3):
            for heights in permutations(range(3)):
                pa = self._triangle(word, "a", heights)
                pb = self._triangle(word, "b", heights)
                for lhs, rhs in ((pa, pb), (pb, pa)):
                    desc = describe_local(lhs)
                    table.setdefault(desc, (lhs, rhs, word, heights))
        self._cache[key] = table
        return table

    def _triangle(self, word, shape, heights) -> PlanarMap:
        ws = " ".join("up" if o == "u" else "down" for o in word)
        strands = [0, 1, 2]  # strand ids by current position from the left
        w = list(word)
        moves = [1, 0, 1] if shape == "a" else [0, 1, 0]  # left index of each crossing
        parts = []
        for L in moves:
            left_over = heights[strands[L]] > heights[strands[L + 1]]
            positive = (w[L] == w[L + 1]) == left_over
            # position counted from the right
            parts.append(f"{'xpos' if positive else 'xneg'}({3 - L - 1})")
            assert crossing_over_left(w, L, positive) == left_over
            strands[L], strands[L + 1] = strands[L + 1], strands[L]
            w[L], w[L + 1] = w[L + 1], w[L]
        return self.pic(f"{ws}: " + "; ".join(parts))

    def altbraid_rules(self) -> List[Tuple[PlanarMap, List[Term]]]:
        """The alternating braid relation as two rules (one per shape).

        For ``k > 0`` the layering has the up strand starting on the right on
        top, for ``k < 0`` the mirror one; the first right hand side term is
        the other shape.  Empty for ``k = 0``, where cyclic triangles move freely.
        """
        key = "altbraid"
        if key in self._cache:
            return self._cache[key]
        k = self.k
        pats: List[Tuple[PlanarMap, List[Term]]] = []
        if k != 0:
            heights = (0, 1, 2) if k > 0 else (2, 1, 0)
            left = self._triangle(("u", "d", "u"), "b", heights)
            right = self._triangle(("u", "d", "u"), "a", heights)
            corr = self._altbraid_correction()
            pats.append((left, [(ONE, right, [])] + corr))
            pats.append((right, [(ONE, left, [])] + [(-c, T_, p) for c, T_, p in corr]))
        self._cache[key] = pats
        return pats

    def _altbraid_correction(self) -> List[Term]:
        A, k = self.A, self.k
        K = abs(k)
        cas = self._casimir()
        out: List[Term] = []
        for r, s, t in product(range(K + 1), range(K + 1), range(1, K + 1)):
            if r + s + t > K:
                continue
            for ((b1, v1), c1), ((b2, v2), c2), ((b3, v3), c3) in product(cas, repeat=3):
                if k > 0:
                    text = (
                        f"up down up: tok(3,#{v2}); dot(2,{s}); tok(1,#{v3}); dot(1,{t}); "
                        f"capR(2); cupL(2); tok(3,#{v1}); dot(2,{r})"
                    )
                else:
                    text = (
                        f"up down up: tok(3,#{v3}); dot(3,{t}); dot(2,{s}); tok(1,#{v2}); "
                        f"capL(1); cupR(1); dot(2,{r}); tok(1,#{v1})"
                    )
                prod_ = A.mul(A.mul(A.basis_element(b1), A.basis_element(b2)), A.basis_element(b3))
                orient = CCW if k > 0 else CW
                val = bubble_value(BubbleSymbol(orient, PLUS, prod_, -r - s - t), k, self.N)
                if val.is_zero():
                    continue
                T_ = self.pic(text)
                gap = left_gap(T_) if k > 0 else right_gap(T_)
                coeff = c1 * c2 * c3 * Z * Z * Z
                if val.is_scalar():
                    out.append((coeff * val.scalar_part(), T_, []))
                else:
                    out.append((coeff, T_, [(gap, val)]))
        return out


# triangles -------------------------------------------------------------------------------
#
# For a triangular face given by its orbit ``d0, d1, d2``, arc ``i`` is the arc
# through the edge of ``di``; vertex ``i`` (the vertex of ``di``) is where the
# arcs ``i`` and ``i - 1`` cross.


def vertex_arcs(M: PlanarMap, orbit):
    """``(vertex, arc of the 3->1 strand, arc of the 0->2 strand)`` per vertex."""
    tails = [M.edge_of(d)[0] for d in orbit]
    out = []
    for i, d in enumerate(orbit):
        v = d[0]
        p = q = None
        for s in range(4):
            dd = (v, s)
            t = dd if M.is_tail(dd) else M.link[dd]
            if t in tails:
                if s in (1, 3):
                    p = tails.index(t)
                else:
                    q = tails.index(t)
        out.append((v, p, q))
    return out


def triangle_arcs(M: PlanarMap, orbit):
    """The over relation ``{(over arc, under arc)}`` of a triangle."""
    over = set()
    for v, p, q in vertex_arcs(M, orbit):
        over.add((p, q) if M.sign[v] > 0 else (q, p))
    return over


def arc_order(over):
    """Arcs from top to bottom, or None when the over relation is cyclic."""
    for perm in permutations(range(3)):
        pos = {a: i for i, a in enumerate(perm)}
        if all(pos[a] < pos[b] for a, b in over):
            return perm
    return None
