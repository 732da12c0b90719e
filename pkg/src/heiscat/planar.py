"""Combinatorial planar maps for oriented string diagrams.

A map has one boundary vertex ``B`` (id 0), four-valent crossing vertices
and two-valent loop markers for closed strings without crossings.  Darts are
pairs ``(vertex, slot)``; slots run counterclockwise around each vertex and
``link`` pairs the two ends of every edge.

Crossing slots, read in the frame where both strands point up::

    0 = bottom right (in)   1 = top right (out)
    2 = top left (out)      3 = bottom left (in)

so one strand runs 3 -> 1 and the other 0 -> 2.  A crossing is positive when
the 3 -> 1 strand passes over.  The boundary vertex lists its slots clockwise
along the boundary of the rectangle: bottom ports right to left, then top
ports left to right.  The face to the left of a dart ``d`` is the corner
between ``d`` and ``sigma(d)``; faces are orbits of ``d -> sigma^-1(link d)``.

Decorations live on edges, keyed by the tail dart, as ``(dots, token)`` with
``token`` a basis index of the Frobenius algebra.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from heiscat.core import ONE, ZERO, Scalar

B = 0
XING = "X"
LOOP = "L"

Dart = Tuple[int, int]
Deco = Tuple[int, int]

THROUGH = {XING: {3: 1, 0: 2}, LOOP: {0: 1}}
BACK = {XING: {1: 3, 2: 0}, LOOP: {1: 0}}


class PlanarMap:
    __slots__ = ("unit", "nb", "bout", "kind", "sign", "link", "deco", "_next")

    def __init__(self, unit: int, nb: int = 0, bout: Sequence[bool] = ()):
        self.unit = unit
        self.nb = nb
        self.bout = tuple(bout)
        self.kind: Dict[int, str] = {}
        self.sign: Dict[int, int] = {}
        self.link: Dict[Dart, Dart] = {}
        self.deco: Dict[Dart, Deco] = {}
        self._next = 1

    # construction ---------------------------------------------------------
    def copy(self) -> "PlanarMap":
        m = PlanarMap.__new__(PlanarMap)
        m.unit = self.unit
        m.nb = self.nb
        m.bout = self.bout
        m.kind = dict(self.kind)
        m.sign = dict(self.sign)
        m.link = dict(self.link)
        m.deco = dict(self.deco)
        m._next = self._next
        return m

    def add_vertex(self, kind: str, sign: int = 0) -> int:
        v = self._next
        self._next += 1
        self.kind[v] = kind
        if kind == XING:
            self.sign[v] = sign
        return v

    def remove_vertex(self, v: int):
        for s in range(self.degree(v)):
            d = (v, s)
            self.link.pop(d, None)
            self.deco.pop(d, None)
        self.kind.pop(v, None)
        self.sign.pop(v, None)

    def connect(self, tail: Dart, head: Dart, deco: Optional[Deco] = None):
        self.link[tail] = head
        self.link[head] = tail
        self.set_deco(tail, deco)

    def set_deco(self, tail: Dart, deco: Optional[Deco]):
        if deco is None or (deco[0] == 0 and deco[1] == self.unit):
            self.deco.pop(tail, None)
        else:
            self.deco[tail] = deco

    def get_deco(self, tail: Dart) -> Deco:
        return self.deco.get(tail, (0, self.unit))

    # local structure -------------------------------------------------------
    @property
    def nports(self) -> int:
        return len(self.bout)

    def degree(self, v: int) -> int:
        if v == B:
            return len(self.bout)
        return 4 if self.kind[v] == XING else 2

    def vertices(self) -> List[int]:
        return sorted(self.kind)

    def is_tail(self, d: Dart) -> bool:
        v, s = d
        if v == B:
            return self.bout[s]
        if self.kind[v] == XING:
            return s in (1, 2)
        return s == 1

    def sigma(self, d: Dart) -> Dart:
        v, s = d
        return (v, (s + 1) % self.degree(v))

    def sigma_inv(self, d: Dart) -> Dart:
        v, s = d
        return (v, (s - 1) % self.degree(v))

    def face_next(self, d: Dart) -> Dart:
        return self.sigma_inv(self.link[d])

    def through(self, d: Dart) -> Optional[Dart]:
        """The out-dart continuing the strand that enters at ``d``."""
        v, s = d
        if v == B:
            return None
        return (v, THROUGH[self.kind[v]][s])

    def back(self, d: Dart) -> Optional[Dart]:
        v, s = d
        if v == B:
            return None
        return (v, BACK[self.kind[v]][s])

    def darts(self) -> List[Dart]:
        out = [(B, s) for s in range(len(self.bout))]
        for v in self.vertices():
            out.extend((v, s) for s in range(self.degree(v)))
        return out

    def tails(self) -> List[Dart]:
        return [d for d in self.darts() if self.is_tail(d)]

    def edge_of(self, d: Dart) -> Tuple[Dart, Dart]:
        """``(tail, head)`` of the edge containing ``d``."""
        if self.is_tail(d):
            return d, self.link[d]
        return self.link[d], d

    # faces ---------------------------------------------------------------------
    def faces(self) -> Tuple[Dict[Dart, int], List[List[Dart]]]:
        fid: Dict[Dart, int] = {}
        orbits: List[List[Dart]] = []
        for d in self.darts():
            if d in fid:
                continue
            orb = []
            e = d
            while e not in fid:
                fid[e] = len(orbits)
                orb.append(e)
                e = self.face_next(e)
            orbits.append(orb)
        return fid, orbits

    def right_face_dart(self) -> Dart:
        return (B, len(self.bout) - 1)

    def left_face_dart(self) -> Dart:
        return (B, (self.nb - 1) % len(self.bout))

    # strings ------------------------------------------------------------------
    def strings(self) -> List[Tuple[bool, List[Dart]]]:
        """All strings as ``(closed, [tail darts in travel order])``."""
        seen = set()
        out = []
        for s, is_out in enumerate(self.bout):
            if not is_out:
                continue
            path = []
            d = (B, s)
            while True:
                path.append(d)
                seen.add(d)
                h = self.link[d]
                if h[0] == B:
                    break
                d = self.through(h)
            out.append((False, path))
        for d0 in self.tails():
            if d0 in seen or d0[0] == B:
                continue
            path = []
            d = d0
            while d not in seen:
                seen.add(d)
                path.append(d)
                d = self.through(self.link[d])
            out.append((True, path))
        return out

    def components(self) -> List[List[int]]:
        seen = set()
        comps = []
        order = ([B] if self.bout else []) + self.vertices()
        for v0 in order:
            if v0 in seen:
                continue
            comp = [v0]
            seen.add(v0)
            for v in comp:
                for s in range(self.degree(v)):
                    w = self.link[(v, s)][0]
                    if w not in seen:
                        seen.add(w)
                        comp.append(w)
            comps.append(comp)
        return comps

    def crossing_count(self) -> int:
        return sum(1 for k in self.kind.values() if k == XING)

    # signatures -------------------------------------------------------------------
    def signature(self, with_deco: bool = True, with_sign: bool = True):
        """Canonical form of the component of ``B`` (relabels vertices by BFS)."""
        order = {B: 0}
        queue = [B]
        for v in queue:
            for s in range(self.degree(v)):
                w = self.link[(v, s)][0]
                if w not in order:
                    order[w] = len(queue)
                    queue.append(w)
        items = []
        for v in queue:
            kind = "B" if v == B else self.kind[v]
            nbrs = []
            for s in range(self.degree(v)):
                w, s2 = self.link[(v, s)]
                dec = self.deco.get((v, s)) if with_deco else None
                nbrs.append((order[w], s2, dec))
            sg = self.sign.get(v, 0) if with_sign else 0
            items.append((kind, sg, tuple(nbrs)))
        return (self.nb, self.bout, tuple(items))

    def check(self):
        """Consistency assertions (used by tests)."""
        for d, e in self.link.items():
            assert self.link[e] == d, (d, e)
            assert self.is_tail(d) != self.is_tail(e), (d, e)
        for d in self.darts():
            assert d in self.link, d
        for d in self.deco:
            assert self.is_tail(d), d
        fid, orbits = self.faces()
        comps = self.components()
        nv = 1 + len(self.kind) if self.bout else len(self.kind)
        ne = len(self.link) // 2
        # Euler: each component on the sphere has V - E + F = 2
        assert nv - ne + len(orbits) == 2 * len(comps) or not comps, (nv, ne, len(orbits), len(comps))

    def __repr__(self):
        return f"PlanarMap(nb={self.nb}, bout={self.bout}, crossings={self.crossing_count()})"


# decoration arithmetic ------------------------------------------------------------------


def deco_mul(A, later: Deco, earlier: Deco) -> Dict[Deco, Scalar]:
    """``later * earlier`` on one strand (dots commute with tokens)."""
    r = later[0] + earlier[0]
    return {(r, k): c for k, c in A.basis_product(later[1], earlier[1]).items() if c}


def deco_chain(A, decos: Iterable[Deco]) -> Dict[Deco, Scalar]:
    """Product of decorations listed in travel order."""
    acc: Dict[Deco, Scalar] = {(0, A.unit_index()): ONE}
    for d in decos:
        nxt: Dict[Deco, Scalar] = {}
        for e, c in acc.items():
            for f, c2 in deco_mul(A, d, e).items():
                nxt[f] = nxt.get(f, ZERO) + c * c2
        acc = {k: v for k, v in nxt.items() if v}
    return acc


def element_decos(A, r: int, token) -> Dict[Deco, Scalar]:
    """Expand ``x^r * token`` (an AlgebraElement) into basis decorations."""
    return {(r, k): c for k, c in token.support().items()}


# geometry: slices to maps ---------------------------------------------------------------------

# Elementary slices are ``(name, i, arg)`` with ``i`` the 0-based index from the
# left of the first strand involved (for cups: in the word above the slice).

UP, DOWN = "u", "d"


def word_after(word: Sequence[str], sl) -> Tuple[str, ...]:
    name, i, _ = sl
    w = list(word)
    if name in ("dot", "tok", "bub"):
        return tuple(w)
    if name in ("xpos", "xneg"):
        w[i], w[i + 1] = w[i + 1], w[i]
        return tuple(w)
    if name == "cupR":
        return tuple(w[:i] + [DOWN, UP] + w[i:])
    if name == "cupL":
        return tuple(w[:i] + [UP, DOWN] + w[i:])
    if name in ("capR", "capL"):
        return tuple(w[:i] + w[i + 2:])
    raise ValueError(f"unknown slice {name!r}")


def check_slice(word: Sequence[str], sl):
    name, i, _ = sl
    m = len(word)
    if name in ("dot", "tok"):
        ok = 0 <= i < m
    elif name == "bub":
        ok = 0 <= i <= m
    elif name in ("xpos", "xneg"):
        ok = 0 <= i < m - 1
    elif name in ("cupR", "cupL"):
        ok = 0 <= i <= m
    elif name == "capR":
        ok = 0 <= i < m - 1 and word[i] == UP and word[i + 1] == DOWN
    elif name == "capL":
        ok = 0 <= i < m - 1 and word[i] == DOWN and word[i + 1] == UP
    else:
        ok = False
    if not ok:
        raise ValueError(f"slice {name}({i}) does not fit the word {''.join(word) or '1'}")


def crossing_over_left(word: Sequence[str], i: int, positive: bool) -> bool:
    """Whether the strand entering from the bottom left passes over.

    The crossing is read as a rotation of the upward one; the strand in the
    role of the upward bottom-left strand is the bottom-left one exactly when
    both orientations agree.
    """
    p_is_left = word[i] == word[i + 1]
    return p_is_left == positive


class _Seg:
    __slots__ = ("a", "b", "pa", "pb", "event", "over", "edges")

    def __init__(self, a, b, pa, pb):
        self.a, self.b, self.pa, self.pb = a, b, pa, pb
        self.event = None
        self.over = 0
        self.edges = None


class Geometry:
    """Polyline realization of a slice sequence with exact coordinates."""

    def __init__(self, source: Sequence[str], slices: Sequence[Tuple]):
        self.source = tuple(source)
        self.pos: List[Tuple[Fraction, Fraction]] = []
        self.segs: List[_Seg] = []
        self.crossings: List[Tuple[int, int, int]] = []  # (seg1, seg2, over seg)
        self.bubbles: List[Tuple[int, int, object]] = []  # (region, height, bubble)
        word = self.source
        cur = [self._node(j, 0) for j in range(len(word))]
        self.bottom = list(cur)
        h = 0
        for sl in slices:
            check_slice(word, sl)
            cur, word = self._slice(cur, word, sl, h)
            h += 1
        if not slices and word:
            # an identity still needs its strands drawn
            nxt = [self._node(j, 1) for j in range(len(word))]
            for j, o in enumerate(word):
                self._strand(o, cur[j], nxt[j])
            cur = nxt
        self.top = cur
        self.target = word
        self.height = h

    def _node(self, x, y):
        self.pos.append((Fraction(x), Fraction(y)))
        return len(self.pos) - 1

    def _seg(self, a, b):
        s = _Seg(a, b, self.pos[a], self.pos[b])
        self.segs.append(s)
        return s

    def _strand(self, o, lo, hi):
        """Segment between a lower and an upper node, oriented by ``o``."""
        return self._seg(lo, hi) if o == UP else self._seg(hi, lo)

    def _slice(self, cur, word, sl, h):
        name, i, arg = sl
        new_word = word_after(word, sl)
        y1 = h + 1
        half = Fraction(1, 2)
        if name == "bub":
            nxt = [self._node(j, y1) for j in range(len(word))]
            for j in range(len(word)):
                self._strand(word[j], cur[j], nxt[j])
            self.bubbles.append((i, h, arg))
            return nxt, new_word
        if name in ("dot", "tok", "xpos", "xneg"):
            nxt = [self._node(j, y1) for j in range(len(word))]
            if name in ("xpos", "xneg"):
                s1 = self._strand(word[i], cur[i], nxt[i + 1])
                s2 = self._strand(word[i + 1], cur[i + 1], nxt[i])
                left_over = crossing_over_left(word, i, name == "xpos")
                cid = len(self.crossings)
                self.crossings.append((len(self.segs) - 2, len(self.segs) - 1, len(self.segs) - (2 if left_over else 1)))
                s1.event = ("X", cid)
                s2.event = ("X", cid)
                for j in range(len(word)):
                    if j not in (i, i + 1):
                        self._strand(word[j], cur[j], nxt[j])
            else:
                for j in range(len(word)):
                    s = self._strand(word[j], cur[j], nxt[j])
                    if j == i:
                        s.event = ("D", name, arg)
            return nxt, new_word
        if name in ("cupR", "cupL"):
            nxt = [self._node(j, y1) for j in range(len(new_word))]
            apex = self._node(i + half, h + half)
            if name == "cupR":
                self._seg(nxt[i], apex)
                self._seg(apex, nxt[i + 1])
            else:
                self._seg(nxt[i + 1], apex)
                self._seg(apex, nxt[i])
            for j in range(len(word)):
                jj = j if j < i else j + 2
                self._strand(word[j], cur[j], nxt[jj])
            return nxt, new_word
        # caps
        nxt = [self._node(j, y1) for j in range(len(new_word))]
        apex = self._node(i + half, h + half)
        if name == "capR":
            self._seg(cur[i], apex)
            self._seg(apex, cur[i + 1])
        else:
            self._seg(cur[i + 1], apex)
            self._seg(apex, cur[i])
        for j in range(len(word)):
            if j in (i, i + 1):
                continue
            jj = j if j < i else j - 2
            self._strand(word[j], cur[j], nxt[jj])
        return nxt, new_word

    # ports -------------------------------------------------------------------------
    def port_slots(self) -> Dict[int, int]:
        nb = len(self.bottom)
        slots = {}
        for j, nid in enumerate(self.bottom):
            slots[nid] = nb - 1 - j
        for q, nid in enumerate(self.top):
            slots[nid] = nb + q
        return slots

    def bout(self) -> Tuple[bool, ...]:
        nb = len(self.bottom)
        out = [False] * (nb + len(self.top))
        for j, o in enumerate(self.source):
            out[nb - 1 - j] = o == UP
        for q, o in enumerate(self.target):
            out[nb + q] = o == DOWN
        return tuple(out)


def _cross(p, q):
    return p[0] * q[1] - p[1] * q[0]


def _dir(s: _Seg):
    return (s.pb[0] - s.pa[0], s.pb[1] - s.pa[1])


class Scene:
    """A map together with the nesting data of its floating components.

    ``floats`` lists ``(vertices, outer_dart, container_dart)`` where
    ``outer_dart`` lies on the outer face of the component and
    ``container_dart`` on the face containing it (``None`` at top level of a
    map without boundary ports).  ``bubbles`` lists ``(dart, bubble)`` for
    bubble slices, the dart lying on the face holding the bubble.
    """

    def __init__(self, pmap: PlanarMap, floats, bubbles=()):
        self.map = pmap
        self.floats = floats
        self.bubbles = list(bubbles)


def build_scene(A, geom: Geometry, token_of) -> List[Tuple[Scalar, Scene]]:
    """Planar map(s) of a geometric diagram.

    ``token_of(arg)`` turns a token argument into an AlgebraElement.  Token
    decorations that are linear combinations split the result into several
    maps with coefficients.
    """
    unit = A.unit_index()
    slots = geom.port_slots()
    m = PlanarMap(unit, len(geom.bottom), geom.bout())
    out_seg = {}
    in_seg = {}
    for k, s in enumerate(geom.segs):
        out_seg[s.a] = k
        in_seg[s.b] = k
    # crossing vertices
    role = {}
    for cid, (k1, k2, over) in enumerate(geom.crossings):
        s1, s2 = geom.segs[k1], geom.segs[k2]
        p_first = _cross(_dir(s1), _dir(s2)) > 0
        kp, kq = (k1, k2) if p_first else (k2, k1)
        v = m.add_vertex(XING, 1 if over == kp else -1)
        role[kp] = (v, 3, 1)
        role[kq] = (v, 0, 2)
    # walk strings
    edge_tokens: Dict[Dart, List] = {}
    strands = []
    visited = set()
    starts = [nid for nid in slots if nid in out_seg and nid not in in_seg]
    for nid in sorted(starts, key=lambda n: slots[n]):
        path = []
        node = nid
        while node in out_seg:
            k = out_seg[node]
            path.append(k)
            visited.add(k)
            node = geom.segs[k].b
        strands.append((False, path, slots[nid], slots[node]))
    for k0 in range(len(geom.segs)):
        if k0 in visited:
            continue
        path = []
        k = k0
        while k not in visited:
            visited.add(k)
            path.append(k)
            k = out_seg[geom.segs[k].b]
        # start right after a crossing if there is one
        xs = [j for j, kk in enumerate(path) if kk in role]
        if xs:
            path = path[xs[0] + 1:] + path[: xs[0] + 1]
        strands.append((True, path, None, None))

    for closed, path, s_start, s_end in strands:
        if closed and not any(k in role for k in path):
            v = m.add_vertex(LOOP)
            tail = (v, 1)
            decos = []
            for k in path:
                geom.segs[k].edges = (tail, tail)
                _collect(geom.segs[k], decos)
            m.connect(tail, (v, 0))
            edge_tokens[tail] = decos
            continue
        if closed:
            last = path[-1]
            tail = (role[last][0], role[last][2])
        else:
            tail = (B, s_start)
        decos = []
        for k in path:
            s = geom.segs[k]
            if k in role:
                v, din, dout = role[k]
                s.edges = (tail, (v, dout))
                m.connect(tail, (v, din))
                edge_tokens[tail] = decos
                tail = (v, dout)
                decos = []
            else:
                s.edges = (tail, tail)
                _collect(s, decos)
        if not closed:
            m.connect(tail, (B, s_end))
            edge_tokens[tail] = decos
        else:
            # the final segment carries the crossing we started after
            edge_tokens.setdefault(tail, decos)
    floats = _locate_floats(m, geom)
    bubbles = [
        (_region_dart(m, geom, Fraction(2 * i - 1, 2), Fraction(2 * h + 1, 2)), (o, sg, token_of(tok), n))
        for i, h, (o, sg, tok, n) in geom.bubbles
    ]
    # expand decorations
    results = [(ONE, m)]
    for tail, decos in edge_tokens.items():
        if not decos:
            continue
        acc = {(0, unit): ONE}
        for r, tok in decos:
            factor = {(r, unit): ONE} if tok is None else element_decos(A, r, token_of(tok))
            nxt = {}
            for e, c in acc.items():
                for f, c2 in factor.items():
                    for g, c3 in deco_mul(A, f, e).items():
                        nxt[g] = nxt.get(g, ZERO) + c * c2 * c3
            acc = {kk: vv for kk, vv in nxt.items() if vv}
        new = []
        for c, mm in results:
            for dec, c2 in acc.items():
                m2 = mm.copy()
                m2.set_deco(tail, dec)
                new.append((c * c2, m2))
        results = new
    return [(c, Scene(mm, floats, bubbles)) for c, mm in results if c]


def _collect(s: _Seg, decos: List):
    if s.event is None or s.event[0] != "D":
        return
    _, name, arg = s.event
    if name == "dot":
        decos.append((int(arg), None))
    else:
        decos.append((0, arg))


def _x_at(s: _Seg, y0):
    d = _dir(s)
    if d[1] == 0:
        return None
    lo, hi = sorted((s.pa[1], s.pb[1]))
    if not lo < y0 < hi:
        return None
    return s.pa[0] + (y0 - s.pa[1]) * d[0] / d[1]


def _face_dart(m: PlanarMap, s: _Seg, y0):
    """The dart on the face just right of segment ``s`` at height ``y0``."""
    d = _dir(s)
    tail, after = s.edges
    if tail != after:
        # split by a crossing at the midpoint
        lam = (y0 - s.pa[1]) / d[1]
        tail = tail if lam < Fraction(1, 2) else after
    head = m.link[tail]
    return tail if d[1] < 0 else head


def _region_dart(m: PlanarMap, geom: Geometry, x0, y0):
    """A dart on the face containing the point, ``None`` for the outside of a closed diagram."""
    best = None
    for s in geom.segs:
        x = _x_at(s, y0)
        if x is not None and x < x0 and (best is None or x > best[0]):
            best = (x, s)
    if best is None:
        return m.left_face_dart() if m.bout else None
    return _face_dart(m, best[1], y0)


def _locate_floats(m: PlanarMap, geom: Geometry):
    comps = m.components()
    if m.bout:
        main = set(comps[0])
        floating = comps[1:]
    else:
        main = set()
        floating = comps
    if not floating:
        return []
    vcomp = {}
    for ci, comp in enumerate(floating):
        for v in comp:
            vcomp[v] = ci
    seg_comp = []
    for s in geom.segs:
        tail = s.edges[0]
        v = tail[0]
        if v == B or v in main:
            seg_comp.append(-1)
        else:
            seg_comp.append(vcomp[v])

    def face_dart(s: _Seg, y0):
        return _face_dart(m, s, y0)

    x_at = _x_at

    out = []
    for ci, comp in enumerate(floating):
        own = [k for k, c in enumerate(seg_comp) if c == ci]
        k0 = own[0]
        s0 = geom.segs[k0]
        y0 = s0.pa[1] + _dir(s0)[1] / 3
        x0 = x_at(s0, y0)
        best = None
        for k, s in enumerate(geom.segs):
            if seg_comp[k] == ci:
                continue
            x = x_at(s, y0)
            if x is not None and x < x0 and (best is None or x > best[0]):
                best = (x, k)
        if best is None:
            container = m.left_face_dart() if m.bout else None
        else:
            container = face_dart(geom.segs[best[1]], y0)
        # outer face: ray from the far right against own segments
        best = None
        for k in own:
            x = x_at(geom.segs[k], y0)
            if x is not None and (best is None or x > best[0]):
                best = (x, k)
        outer = face_dart(geom.segs[best[1]], y0)
        out.append((list(comp), outer, container))
    return out
