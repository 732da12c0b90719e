"""The straightening algorithm.

A morphism is a linear combination of planar maps with coefficients in
``Sym(A) ⊗ Sym(A)`` (bubbles collected in the rightmost region).  A map is
rewritten until it is a reduced matching whose crossings follow the height
rule below and whose decorations all sit on the last edge of their string;
such maps are the basis elements.

Height rule: strings are ranked by the position of their head on the
boundary (further right is higher, a top end beats a bottom end at the same
position); at every crossing the higher string passes over.

The rewriting is local surgery on the map:

* decorations are slid forward through crossings (the wreath product rule),
* monogons and bigons are removed by the curl and bigon relations (after
  the skein relation has fixed the crossing signs where needed),
* triangles are flipped by the braid relation; a triangle whose strands
  run around it in one direction (for k != 0) is first brought by skein
  flips to the layering of the alternating braid relation, which carries
  explicit correction terms,
* a breadth first search over crossing skeletons chooses the flips: towards
  a monogon or bigon when the map is not reduced, towards the canonical
  skeleton otherwise.

Closed components split off by surgery are cut open, normalized as
endomorphisms of a single strand and closed up again into bubbles; bubbles
are carried to the rightmost region with the bubble slide relations.
"""

from __future__ import annotations

import os
import sys
import threading
from collections import deque
from itertools import permutations
from typing import Dict, List, Optional, Tuple

from heiscat.core import ONE, ZERO, Z, Scalar
from heiscat.local import describe, describe_local, face_region, glue, vertex_region
from heiscat.planar import B, LOOP, XING, PlanarMap
from heiscat.rules import RuleBook, arc_order, triangle_arcs, vertex_arcs
from heiscat.symfun import CCW, CW, DEFAULT_TRUNCATION, MINUS, PLUS, BubbleSymbol, SymElement, bubble_value, genuine_bubble
from heiscat.wreath import WreathAlgebra

DEFAULT_BUDGET = 2_000_000
SEARCH_LIMIT = 50_000


class BudgetExceeded(RuntimeError):
    """The step budget ran out; ``term`` describes the map being rewritten."""

    def __init__(self, message, term=None):
        super().__init__(message)
        self.term = term


def step_budget() -> int:
    raw = os.environ.get("HEISCAT_STEP_BUDGET")
    if raw:
        try:
            return max(1, int(raw))
        except ValueError:
            pass
    return DEFAULT_BUDGET


Key = Tuple[int, Tuple[bool, ...], Tuple[Tuple[int, int, Optional[Tuple[int, int]]], ...]]


def nf_key(M: PlanarMap) -> Key:
    strands = []
    for closed, path in M.strings():
        assert not closed
        last = path[-1]
        strands.append((path[0][1], M.link[last][1], M.deco.get(last)))
    return (M.nb, M.bout, tuple(sorted(strands)))


def run_deep(fn, *args):
    """Run ``fn`` in a thread with a large stack (the rewriting recursion is deep)."""
    out = {}

    def target():
        try:
            out["value"] = fn(*args)
        except BaseException as exc:  # re-raised in the caller
            out["error"] = exc

    old_limit = sys.getrecursionlimit()
    old_size = threading.stack_size()
    sys.setrecursionlimit(max(old_limit, 200_000))
    threading.stack_size(512 * 1024 * 1024)
    try:
        th = threading.Thread(target=target)
        th.start()
        th.join()
    finally:
        threading.stack_size(old_size)
        sys.setrecursionlimit(old_limit)
    if "error" in out:
        raise out["error"]
    return out["value"]


class Normalizer:
    """Straightening for one algebra and central charge (with a memo)."""

    def __init__(self, A, k: int, N: int = DEFAULT_TRUNCATION, budget: Optional[int] = None):
        if not A.is_even:
            raise NotImplementedError("straightening is implemented for purely even algebras")
        self.A = A
        self.k = k
        self.N = N
        self.unit = A.unit_index()
        self.budget = step_budget() if budget is None else budget
        self.steps = 0
        self.rules = RuleBook(A, k, N)
        self.memo: Dict[object, Dict[Key, SymElement]] = {}
        self._next_move: Dict[object, object] = {}
        self._W2 = WreathAlgebra(A, 2)
        self._one = SymElement.scalar(A, ONE)
        self._gen_cache: Dict[object, Tuple[Scalar, Tuple[str, int, int]]] = {}
        self._dag: Dict[int, object] = {}
        self._canon: Dict[object, object] = {}

    # entry points ---------------------------------------------------------------
    def normalize_map(self, M: PlanarMap) -> Dict[Key, SymElement]:
        sig = M.signature()
        hit = self.memo.get(sig)
        if hit is not None:
            return hit
        res = self._norm(M)
        self.memo[sig] = res
        return res

    def normalize_scene(self, coeff, scene) -> Dict[Key, SymElement]:
        """Normal form of ``coeff`` times a scene (map with nested floats)."""
        out: Dict[Key, SymElement] = {}
        coeff = self._sym(coeff)
        payloads = []
        for dart, bub in getattr(scene, "bubbles", ()):
            val = self.bubble_slice_value(bub)
            if dart is None:
                coeff = coeff * val
            else:
                payloads.append((dart, val))
        if coeff.is_zero():
            return out
        for c, M in self.settle(scene.map, scene.floats, payloads):
            _acc(out, self.normalize_map(M), c * coeff)
        return out

    def bubble_slice_value(self, bub) -> SymElement:
        """Value of a bubble slice ``(orientation, sign, token element, dots)``."""
        orient, sign, a, dots = bub
        return bubble_value(BubbleSymbol(orient, sign, a, dots), self.k, self.N)

    # bookkeeping ----------------------------------------------------------------------
    def _tick(self, M):
        self.steps += 1
        if self.steps > self.budget:
            raise BudgetExceeded(f"step budget of {self.budget} exhausted while rewriting {M!r}", M.signature())

    def _sum(self, terms) -> Dict[Key, SymElement]:
        out: Dict[Key, SymElement] = {}
        for c, M in terms:
            if c:
                _acc(out, self.normalize_map(M), c)
        return out

    def _sym(self, c) -> SymElement:
        if isinstance(c, SymElement):
            return c
        return SymElement.scalar(self.A, c)

    # the main loop ------------------------------------------------------------------
    def _norm(self, M: PlanarMap) -> Dict[Key, SymElement]:
        self._tick(M)
        t = self._slide_open(M)
        if t is not None:
            return self._sum(t)
        if not M.kind:
            return {nf_key(M): self._one}
        small = self._small_face(M)
        if small is not None:
            return self._sum(self._reduce_small(M, small))
        if self._is_reduced(M):
            t = self._fix_signs(M)
            if t is not None:
                return self._sum(t)
            target = self._canonical_skeleton(M)
            if M.signature(False, False) == target:
                return {nf_key(M): self._one}
            return self._sum(self._search_step(M, lambda S: S.signature(False, False) == target, ("canon", target)))
        return self._sum(self._search_step(M, _has_small_face, "small"))

    # decorations ------------------------------------------------------------------------
    def _slide_open(self, M: PlanarMap):
        for closed, path in M.strings():
            if closed:
                continue
            for d in path[:-1]:
                if d in M.deco:
                    return self.slide(M, d)
        return None

    def slide(self, M: PlanarMap, d) -> List[Tuple[SymElement, PlanarMap]]:
        """Move the decoration on the edge with tail ``d`` through the crossing at its head."""
        W = self._W2
        v, slot = M.link[d]
        assert M.kind[v] == XING and slot in (0, 3)
        r, tok = M.deco[d]
        idx = 1 if slot == 3 else 0
        rr = [0, 0]
        aa = [self.unit, self.unit]
        rr[idx] = r
        aa[idx] = tok
        mono = W.monomial(rr, aa)
        sign = M.sign[v]
        res = W.mul(W.sigma(1), mono) if sign > 0 else W.mul(W.sigma_inv(1), mono)
        pieces: Dict[Tuple, Scalar] = {}

        def add(key, c):
            pieces[key] = pieces.get(key, ZERO) + c

        for (r2, a2, g), c in res.terms.items():
            if g == (0, 1):
                add(("id", r2, a2), c)
                continue
            add(("x", r2, a2), c)
            if sign < 0:
                extra = W.mul(W.monomial(r2, a2), W.tau(1))
                for (r3, a3, g3), c3 in extra.terms.items():
                    add(("id", r3, a3), c * c3 * Z)
        M1 = M.copy()
        M1.set_deco(d, None)
        verts, ports = vertex_region(M1, v)
        lhs = self.rules.crossing(sign)
        rot = self._match(M1, verts, ports, lhs)
        out = []
        nm = "xpos" if sign > 0 else "xneg"
        for (kind, r2, a2), c in pieces.items():
            if not c:
                continue
            decos = f"dot(2,{r2[1]}); tok(2,#{a2[1]}); dot(1,{r2[0]}); tok(1,#{a2[0]})"
            text = f"up up: {nm}(1); {decos}" if kind == "x" else f"up up: {decos}"
            T = self.rules.pic(text)
            out.extend(self._apply(M1, verts, ports, rot, [(c, T, [])]))
        return out

    # rule application ------------------------------------------------------------------
    def _match(self, M, verts, ports, lhs) -> Optional[int]:
        want = describe_local(lhs)
        for rot in range(len(ports)):
            if describe(M, verts, ports, rot) == want:
                return rot
        return None

    def _apply(self, M, verts, ports, rot, rhs) -> List[Tuple[SymElement, PlanarMap]]:
        out = []
        for coeff, T, payloads in rhs:
            for c2, g in glue(self.A, M, verts, ports, T, rot):
                for c3, M2 in self.resolve(g, payloads):
                    out.append((c3 * (coeff * c2), M2))
        return out

    def skein_flip(self, M, v) -> List[Tuple[SymElement, PlanarMap]]:
        """Change the sign of crossing ``v``; the first term is the flipped map."""
        sign = M.sign[v]
        main = M.copy()
        main.sign[v] = -sign
        verts, ports = vertex_region(M, v)
        rot = self._match(M, verts, ports, self.rules.crossing(sign))
        return [(self._one, main)] + self._apply(M, verts, ports, rot, self.rules.skein(sign)[1:])

    # small faces ---------------------------------------------------------------------------
    def _small_face(self, M):
        fid, orbits = M.faces()
        best = None
        for orb in orbits:
            if len(orb) > 2 or any(d[0] == B for d in orb):
                continue
            vs = {d[0] for d in orb}
            if len(vs) != len(orb):
                continue
            if best is None or len(orb) < len(best):
                best = orb
        return best

    def _reduce_small(self, M, orbit):
        # clear decorations on the edges of the face
        for d in orbit:
            tail = d if M.is_tail(d) else M.link[d]
            if tail in M.deco:
                return self.slide(M, tail)
        verts, ports = face_region(M, orbit)
        pats = self.rules.curl_patterns() if len(orbit) == 1 else self.rules.bigon_patterns()
        for lhs, rhs in pats:
            rot = self._match(M, verts, ports, lhs)
            if rot is not None:
                return self._apply(M, verts, ports, rot, rhs)
        if len(orbit) == 1:
            raise AssertionError("unmatched curl")
        # a cyclic bigon with the wrong signs: flip one crossing
        for v in verts:
            M2 = M.copy()
            M2.sign[v] = -M2.sign[v]
            if any(self._match(M2, verts, ports, lhs) is not None for lhs, _ in pats):
                return self.skein_flip(M, v)
        return self.skein_flip(M, verts[0])

    # reducedness and signs -------------------------------------------------------------------
    def _string_of(self, M):
        """Map tail dart -> string index, and the list of strings."""
        strings = M.strings()
        sid = {}
        for i, (_, path) in enumerate(strings):
            for d in path:
                sid[d] = i
        return sid, strings

    def _crossing_strings(self, M, sid, v):
        """(string of the 3->1 strand, string of the 0->2 strand) at ``v``."""
        return sid[M.link[(v, 3)]], sid[M.link[(v, 0)]]

    def _is_reduced(self, M) -> bool:
        sid, strings = self._string_of(M)
        if any(closed for closed, _ in strings):
            return False
        seen = set()
        for v in M.kind:
            p, q = self._crossing_strings(M, sid, v)
            if p == q:
                return False
            pair = (min(p, q), max(p, q))
            if pair in seen:
                return False
            seen.add(pair)
        return True

    def _ranks(self, M, sid, strings):
        rank = {}
        for i, (_, path) in enumerate(strings):
            h = M.link[path[-1]][1]
            rank[i] = _port_rank(M, h)
        return rank

    def _fix_signs(self, M):
        sid, strings = self._string_of(M)
        rank = self._ranks(M, sid, strings)
        for v in M.vertices():
            p, q = self._crossing_strings(M, sid, v)
            want = 1 if rank[p] > rank[q] else -1
            if M.sign[v] != want:
                return self.skein_flip(M, v)
        return None

    # canonical skeletons --------------------------------------------------------------------
    def _canonical_skeleton(self, M):
        key = nf_key(M)
        skel = (key[0], key[1], tuple((s, h) for s, h, _ in key[2]))
        if skel not in self._canon:
            self._canon[skel] = canonical_map(self.A, skel).signature(False, False)
        return self._canon[skel]

    # triangles -----------------------------------------------------------------------------------
    def _triangles(self, M):
        fid, orbits = M.faces()
        out = []
        for orb in orbits:
            if len(orb) != 3 or any(d[0] == B for d in orb):
                continue
            if len({d[0] for d in orb}) != 3:
                continue
            out.append(orb)
        return out

    def _altbraid_match(self, M, orbit):
        verts, ports = face_region(M, orbit)
        for lhs, rhs in self.rules.altbraid_rules():
            rot = self._match(M, verts, ports, lhs)
            if rot is not None:
                return verts, ports, rot, rhs
        return None

    def _r3_exact(self, M, orbit):
        verts, ports = face_region(M, orbit)
        table = self.rules.triangle_table()
        for rot in range(len(ports)):
            desc = describe(M, verts, ports, rot)
            if desc in table:
                lhs, rhs, _, _ = table[desc]
                return self._apply(M, verts, ports, rot, [(ONE, rhs, [])])
        raise AssertionError("triangle with consistent layering not found in the table")

    # search ------------------------------------------------------------------------------------
    def _search_step(self, M, goal, tag):
        """One flip towards the nearest skeleton satisfying ``goal``."""
        S = _skeleton(M)
        sig = S.signature(False, False)
        key = (tag, sig)
        if key not in self._next_move:
            self._bfs(S, goal, tag)
        move = self._next_move.get(key)
        if move is None:
            raise BudgetExceeded(f"no rewriting path found for {M!r}", M.signature())
        order = canon_order(M)
        dart = (order[move[0]], move[1])
        orb = _orbit_of(M, dart)
        return self.r3_full(M, orb)

    def r3_full(self, M, orbit):
        """Triangle flip keeping the arcs' layering (with skein corrections)."""
        for d in orbit:
            t = d if M.is_tail(d) else M.link[d]
            if t in M.deco:
                return self.slide(M, t)
        order = arc_order(triangle_arcs(M, orbit))
        if order is None:
            return self.skein_flip(M, orbit[0][0])
        if self.k == 0 or not _is_cyclic(M, orbit):
            return self._r3_exact(M, orbit)
        # a cyclic triangle moves by the alternating braid relation; bring it
        # to that layering with skein flips, move it, and flip back
        pairs = self._flips_to_altbraid(M, orbit)
        entries = [(_arc_entry(M, orbit, p), _arc_entry(M, orbit, q)) for _, p, q in pairs]
        out: List[Tuple[SymElement, PlanarMap]] = []
        c, M1 = self._one, M
        for v, _, _ in pairs:
            flipped = self.skein_flip(M1, v)
            out.extend((c * c2, M2) for c2, M2 in flipped[1:])
            c, M1 = c * flipped[0][0], flipped[0][1]
        verts, ports, rot, rhs = self._altbraid_match(M1, orbit)
        out.extend((c * c2, M2) for c2, M2 in self._apply(M1, verts, ports, rot, rhs[1:]))
        ((c2, M3),) = self._apply(M1, verts, ports, rot, rhs[:1])
        c = c * c2
        new = set(M3.kind) - set(M1.kind)
        for pair in entries:
            flipped = self.skein_flip(M3, _meeting_vertex(M3, list(pair), new))
            out.extend((c * c3, M4) for c3, M4 in flipped[1:])
            c, M3 = c * flipped[0][0], flipped[0][1]
        out.append((c, M3))
        return out

    def _flips_to_altbraid(self, M, orbit):
        """Fewest crossings ``(vertex, arc, arc)`` to flip for the alternating braid rule to match."""
        best = None
        arcs = vertex_arcs(M, orbit)
        for perm in permutations(range(3)):
            pos = {a: i for i, a in enumerate(perm)}
            M2 = M.copy()
            pairs = []
            for v, p, q in arcs:
                want = 1 if pos[p] < pos[q] else -1
                if M2.sign[v] != want:
                    M2.sign[v] = want
                    pairs.append((v, p, q))
            if (best is None or len(pairs) < len(best)) and self._altbraid_match(M2, orbit) is not None:
                best = pairs
        if best is None:
            raise AssertionError("cyclic triangle matches no alternating braid layering")
        return best

    def _bfs(self, S0: PlanarMap, goal, tag):
        sig0 = S0.signature(False, False)
        parent = {sig0: None}
        states = {sig0: S0}
        queue = deque([sig0])
        found = None
        while queue:
            sig = queue.popleft()
            S = states[sig]
            if goal(S):
                found = sig
                break
            if len(parent) > SEARCH_LIMIT:
                break
            order = canon_order(S)
            index = {v: i for i, v in enumerate(order)}
            for orb in self._triangles(S):
                S2 = self._skeleton_r3(S, orb)
                sig2 = S2.signature(False, False)
                if sig2 in parent:
                    continue
                d = min(orb, key=lambda dd: (index[dd[0]], dd[1]))
                parent[sig2] = (sig, (index[d[0]], d[1]))
                states[sig2] = S2
                queue.append(sig2)
        if found is None:
            self._next_move[(tag, sig0)] = None
            return
        cur = found
        while parent[cur] is not None:
            prev, move = parent[cur]
            self._next_move[(tag, prev)] = move
            cur = prev

    def _skeleton_r3(self, S, orbit):
        S = S.copy()
        # any consistent layering will do: arc 0 over arc 1 over arc 2
        for v, p, q in vertex_arcs(S, orbit):
            S.sign[v] = 1 if p < q else -1
        verts, ports = face_region(S, orbit)
        table = self.rules.triangle_table()
        for rot in range(len(ports)):
            desc = describe(S, verts, ports, rot)
            if desc in table:
                _, rhs, _, _ = table[desc]
                ((c, g),) = glue(self.A, S, verts, ports, rhs, rot)
                out = g.map
                for v in out.kind:
                    out.sign[v] = 1
                return out
        raise AssertionError("skeleton triangle not in the table")

    # floats and payloads ------------------------------------------------------------------
    def resolve(self, g, payloads) -> List[Tuple[SymElement, PlanarMap]]:
        M2 = g.map
        comps = M2.components()
        if len(comps) == 1 and not payloads:
            return [(self._one, M2)]
        floats, pay = locate(M2, g, payloads)
        return self.settle(M2, floats, pay)

    def settle(self, M, floats, payloads) -> List[Tuple[SymElement, PlanarMap]]:
        """Evaluate floating components and move all bubbles to the right region."""
        vcomp = {}
        for i, (verts, _, _) in enumerate(floats):
            for v in verts:
                vcomp[v] = i

        def depth(i):
            dd = 0
            cont = floats[i][2]
            while cont is not None and cont[0] in vcomp:
                dd += 1
                cont = floats[vcomp[cont[0]]][2]
            return dd

        states = [(self._one, M, list(payloads))]
        for i in sorted(range(len(floats)), key=depth, reverse=True):
            verts, outer, container = floats[i]
            vset = set(verts)
            new_states = []
            for c, MM, pays in states:
                inner = [p for p in pays if p[0][0] in vset]
                rest = [p for p in pays if p[0][0] not in vset]
                branches = [(c, MM)]
                for dart, val in inner:
                    nb = []
                    for cc, m3 in branches:
                        for c4, m4 in self.push(m3, val, dart, outer):
                            nb.append((cc * c4, m4))
                    branches = nb
                for cc, m3 in branches:
                    val = self.closed_value(m3, verts, outer)
                    if val.is_zero():
                        continue
                    m4 = m3.copy()
                    for v in verts:
                        m4.remove_vertex(v)
                    pl = list(rest)
                    if val.is_scalar():
                        cc = cc * val.scalar_part()
                    elif container is None:
                        # the unbounded region of an endomorphism of 1 is already rightmost
                        cc = cc * val
                    else:
                        pl.append((container, val))
                    new_states.append((cc, m4, pl))
            states = new_states
        out = []
        for c, MM, pays in states:
            branches = [(c, MM)]
            target = MM.right_face_dart()
            for dart, val in pays:
                nb = []
                for cc, m3 in branches:
                    for c4, m4 in self.push(m3, val, dart, target):
                        nb.append((cc * c4, m4))
                branches = nb
            out.extend(branches)
        return [(c, m) for c, m in out if c]

    def closed_value(self, M, verts, outer) -> SymElement:
        """Value of a closed component (given by its vertices) as a bubble polynomial."""
        A, k = self.A, self.k
        if len(verts) == 1 and M.kind[verts[0]] == LOOP:
            v = verts[0]
            r, tok = M.get_deco((v, 1))
            orient = CCW if outer == (v, 0) else CW
            return genuine_bubble(A, orient, A.basis_element(tok), r, k, self.N)
        t, h = M.edge_of(outer)
        head_outer = outer == h
        f = PlanarMap(self.unit, 1, (True, False) if head_outer else (False, True))
        for v in verts:
            f.kind[v] = M.kind[v]
            if v in M.sign:
                f.sign[v] = M.sign[v]
            for s in range(M.degree(v)):
                d = (v, s)
                f.link[d] = M.link[d]
                if d in M.deco:
                    f.deco[d] = M.deco[d]
        f._next = M._next
        dec = M.get_deco(t)
        f.deco.pop(t, None)
        if head_outer:
            f.connect((B, 0), h)
            f.connect(t, (B, 1), dec)
            orient = CCW
        else:
            f.connect((B, 1), h)
            f.connect(t, (B, 0), dec)
            orient = CW
        nf = self.normalize_map(f)
        out = SymElement(A, {})
        for key, c in nf.items():
            (_, _, ((_, _, deco),)) = key
            r, tok = deco if deco is not None else (0, self.unit)
            out = out + c * genuine_bubble(A, orient, A.basis_element(tok), r, k, self.N)
        return out

    # bubble slides ------------------------------------------------------------------------
    def _gen_symbol(self, g):
        """(lambda, symbol) with ``bubble_value(symbol) = lambda * gen``."""
        if g not in self._gen_cache:
            side, p, j = g
            rep = self.A.cocenter_basis()[j]
            if side == "L":
                sym = (PLUS, p - self.k, rep)
            else:
                sym = (MINUS, -p, rep)
            val = self._bubble(sym)
            mono = ((g, 1),)
            lam = val.terms[mono]
            assert len(val.terms) == 1
            self._gen_cache[g] = (lam, sym)
        return self._gen_cache[g]

    def _bubble(self, sym) -> SymElement:
        sign, n, tok = sym
        a = tok if not isinstance(tok, int) else self.A.basis_element(tok)
        return bubble_value(BubbleSymbol(CCW, sign, a, n), self.k, self.N)

    def push(self, M, val: SymElement, src, dst) -> List[Tuple[SymElement, PlanarMap]]:
        """Move a bubble polynomial from the face of ``src`` to the face of ``dst``."""
        if val.is_scalar() or src is None or dst is None:
            return [(val, M)]
        path = _dual_path(M, src, dst)
        if not path:
            return [(val, M)]
        out = []
        for mono, c in val.terms.items():
            syms = []
            coeff = c
            for g, e in mono:
                lam, sym = self._gen_symbol(g)
                for _ in range(e):
                    syms.append(sym)
                    coeff = coeff * lam.inverse()
            branches = [(self._sym(coeff), M)]
            for sym in syms:
                nb = []
                for cc, m in branches:
                    for c2, m2 in self._push_symbol(m, sym, path, 0):
                        nb.append((cc * c2, m2))
                branches = nb
            out.extend(branches)
        return out

    def _dagger(self, a: int):
        if a not in self._dag:
            self._dag[a] = self.A.dagger(self.A.basis_element(a))
        return self._dag[a]

    def _push_symbol(self, M, sym, path, pos) -> List[Tuple[SymElement, PlanarMap]]:
        val = self._bubble(sym)
        if val.is_zero():
            return []
        if val.is_scalar() or pos == len(path):
            return [(val, M)]
        A = self.A
        sign, n, tok = sym
        tail, lr = path[pos]
        out = list(self._push_symbol(M, sym, path, pos + 1))
        if sign == PLUS:
            rs = range(1, n + self.k + 1)
        else:
            rs = range(1, -n + 1)
        dag = self._dagger(tok)
        old_r, old_t = M.get_deco(tail)
        for r in rs:
            n2 = n - r if sign == PLUS else n + r
            sr = r if sign == PLUS else -r
            for (b, bv), cb in A.casimir.items():
                tokel = A.mul(A.mul(dag, A.basis_element(bv)), A.basis_element(old_t))
                for t2, ct in tokel.support().items():
                    M2 = M.copy()
                    M2.set_deco(tail, (old_r + sr, t2))
                    coeff = ct * cb * Z * r
                    sym2 = (sign, n2, b)
                    if lr:
                        # left to right: the correction stays on the left and crosses again
                        sub = self._push_symbol(M2, sym2, path, pos)
                    else:
                        coeff = -coeff
                        sub = self._push_symbol(M2, sym2, path, pos + 1)
                    out.extend((c2 * coeff, m2) for c2, m2 in sub)
        return out


# helpers ----------------------------------------------------------------------------------


def _acc(out: Dict[Key, SymElement], nf: Dict[Key, SymElement], c):
    for key, v in nf.items():
        w = v * c
        if key in out:
            w = out[key] + w
        if w.is_zero():
            out.pop(key, None)
        else:
            out[key] = w


def _port_rank(M: PlanarMap, slot: int):
    nb = M.nb
    if slot < nb:
        return (nb - 1 - slot, 0)
    return (slot - nb, 1)


def _has_small_face(M: PlanarMap) -> bool:
    fid, orbits = M.faces()
    for orb in orbits:
        if len(orb) <= 2 and not any(d[0] == B for d in orb) and len({d[0] for d in orb}) == len(orb):
            return True
    return False


def _skeleton(M: PlanarMap) -> PlanarMap:
    S = M.copy()
    S.deco = {}
    for v in S.sign:
        S.sign[v] = 1
    return S


def canon_order(M: PlanarMap) -> List[int]:
    order = {B: 0}
    queue = [B]
    for v in queue:
        for s in range(M.degree(v)):
            w = M.link[(v, s)][0]
            if w not in order:
                order[w] = len(queue)
                queue.append(w)
    return queue


def _orbit_of(M: PlanarMap, dart):
    if dart[0] not in M.kind and dart[0] != B:
        return None
    orb = [dart]
    e = M.face_next(dart)
    while e != dart:
        orb.append(e)
        e = M.face_next(e)
    return orb


def _is_cyclic(M: PlanarMap, orbit) -> bool:
    """Whether the strands run around the triangular face in one direction."""
    tails = [M.is_tail(d) for d in orbit]
    return all(tails) or not any(tails)


def _arc_entry(M: PlanarMap, orbit, a):
    """The outside tail dart whose edge enters the triangle along arc ``a``."""
    t, h = M.edge_of(orbit[a])
    return M.link[M.back(t)]


def _meeting_vertex(M: PlanarMap, entries, new):
    seen = []
    for e in entries:
        vs = set()
        d = e
        for _ in range(4):
            h = M.link[d]
            if h[0] not in new:
                break
            vs.add(h[0])
            d = M.through(h)
        seen.append(vs)
    common = seen[0] & seen[1]
    assert len(common) == 1, (seen, new)
    return common.pop()


def _dual_path(M: PlanarMap, src, dst):
    """Edges crossed going from the face of ``src`` to the face of ``dst``.

    Returns a list of ``(tail dart, left_to_right)``.
    """
    fid, orbits = M.faces()
    f0, f1 = fid[src], fid[dst]
    if f0 == f1:
        return []
    prev = {f0: None}
    queue = deque([f0])
    while queue:
        f = queue.popleft()
        if f == f1:
            break
        for d in orbits[f]:
            t, h = M.edge_of(d)
            if d == t:
                g, lr = fid[h], True
            else:
                g, lr = fid[t], False
            if g not in prev:
                prev[g] = (f, t, lr)
                queue.append(g)
    if f1 not in prev:
        raise ValueError("faces are not connected")
    path = []
    cur = f1
    while prev[cur] is not None:
        f, t, lr = prev[cur]
        path.append((t, lr))
        cur = f
    path.reverse()
    return path


def locate(M2: PlanarMap, g, payloads):
    """Floats of a glued map and the faces of the payloads."""
    fid, orbits = M2.faces()
    comps = M2.components()
    comp_of = {}
    for ci, comp in enumerate(comps):
        for v in comp:
            comp_of[v] = ci
    parent = list(range(len(orbits)))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def union(a, b):
        ra, rb = find(a), find(b)
        if ra != rb:
            parent[ra] = rb

    T = g.T
    tfid, torbits = T.faces()
    tface_rep = {}
    for ti, torb in enumerate(torbits):
        mds = []
        for d in torb:
            if d[0] == B:
                o = g.outer[T.nports - 1 - d[1]]
                if o is not None:
                    mds.append(o)
            else:
                mds.append((g.vmap[d[0]], d[1]))
        for loop_v, tt, th in g.loops:
            if tfid[tt] == ti:
                mds.append((loop_v, 1))
            if tfid[th] == ti:
                mds.append((loop_v, 0))
        for x in mds[1:]:
            union(fid[mds[0]], fid[x])
        if mds:
            tface_rep[ti] = fid[mds[0]]
    # containment by breadth first search from the component of B
    main = comp_of[B]
    group_orbs: Dict[int, List[int]] = {}
    for oi in range(len(orbits)):
        group_orbs.setdefault(find(oi), []).append(oi)
    assigned = {main: None}
    queue = [main]
    floats = []
    group_owner_dart = {}
    for ci in queue:
        for oi, orb in enumerate(orbits):
            if comp_of[orb[0][0]] != ci:
                continue
            gr = find(oi)
            if gr in group_owner_dart:
                continue
            group_owner_dart[gr] = orb[0]
            for oj in group_orbs[gr]:
                cj = comp_of[orbits[oj][0][0]]
                if cj in assigned:
                    continue
                assigned[cj] = orb[0]
                floats.append((list(comps[cj]), orbits[oj][0], orb[0]))
                queue.append(cj)
    if len(assigned) != len(comps):
        raise AssertionError("could not place floating components")
    pays = []
    for tdart, val in payloads:
        ti = tfid[tdart]
        gr = find(tface_rep[ti])
        pays.append((group_owner_dart[gr], val))
    return floats, pays


def canonical_slices(skel):
    """Elementary slices realizing a reduced matching with the height rule."""
    nb, bout, pairs = skel
    n = len(bout)
    from heiscat.planar import DOWN, UP, crossing_over_left

    source = tuple(UP if bout[nb - 1 - j] else DOWN for j in range(nb))
    ntop = n - nb
    target = tuple(DOWN if bout[nb + q] else UP for q in range(ntop))
    # strand id per endpoint
    sid = {}
    heads = {}
    for i, (s, h) in enumerate(pairs):
        sid[s] = i
        sid[h] = i
        heads[i] = h
    rank = {i: _port_rank_raw(nb, h) for i, h in heads.items()}
    bottom_ids = [sid[nb - 1 - j] for j in range(nb)]
    top_ids = [sid[nb + q] for q in range(ntop)]
    is_bottom_pair = {i: (s < nb and h < nb) for i, (s, h) in enumerate(pairs)}
    is_top_pair = {i: (s >= nb and h >= nb) for i, (s, h) in enumerate(pairs)}

    def cross(word, ids, L):
        over_left = rank[ids[L]] > rank[ids[L + 1]]
        positive = (word[L] == word[L + 1]) == over_left
        assert crossing_over_left(word, L, positive) == over_left
        return ("xpos" if positive else "xneg", L, None)

    # bottom part: caps
    slices = []
    word = list(source)
    ids = list(bottom_ids)
    caps = sorted((i for i in set(bottom_ids) if is_bottom_pair[i]), key=lambda i: _span(ids, i))
    for i in caps:
        a = ids.index(i)
        b = len(ids) - 1 - ids[::-1].index(i)
        while b > a + 1:
            slices.append(cross(word, ids, b - 1))
            word[b - 1], word[b] = word[b], word[b - 1]
            ids[b - 1], ids[b] = ids[b], ids[b - 1]
            b -= 1
        name = "capR" if word[a] == UP else "capL"
        slices.append((name, a, None))
        del word[a:a + 2]
        del ids[a:a + 2]
    # top part computed downwards
    tword = list(target)
    tids = list(top_ids)
    cup_moves = []
    cups = sorted((i for i in set(top_ids) if is_top_pair[i]), key=lambda i: _span(tids, i))
    for i in cups:
        a = tids.index(i)
        b = len(tids) - 1 - tids[::-1].index(i)
        moves = []
        while b > a + 1:
            moves.append(b - 1)
            tword[b - 1], tword[b] = tword[b], tword[b - 1]
            tids[b - 1], tids[b] = tids[b], tids[b - 1]
            b -= 1
        name = "cupL" if tword[a] == UP else "cupR"
        cup_moves.append((name, a, moves, list(tword), list(tids)))
        del tword[a:a + 2]
        del tids[a:a + 2]
    # middle: permutation of through strands by bubble sort to the order tids
    goal = {i: p for p, i in enumerate(tids)}
    changed = True
    while changed:
        changed = False
        for L in range(len(ids) - 1):
            if goal[ids[L]] > goal[ids[L + 1]]:
                slices.append(cross(word, ids, L))
                word[L], word[L + 1] = word[L + 1], word[L]
                ids[L], ids[L + 1] = ids[L + 1], ids[L]
                changed = True
    # top part upwards: reverse the cup removal
    for name, a, moves, tw, ti in reversed(cup_moves):
        slices.append((name, a, None))
        w = tw[:]
        d = ti[:]
        # w, d: the state right after creating the cup
        for L in reversed(moves):
            slices.append(cross(w, d, L))
            w[L], w[L + 1] = w[L + 1], w[L]
            d[L], d[L + 1] = d[L + 1], d[L]
    return source, slices


def _span(ids, i):
    a = ids.index(i)
    b = len(ids) - 1 - ids[::-1].index(i)
    return b - a


def _port_rank_raw(nb, slot):
    if slot < nb:
        return (nb - 1 - slot, 0)
    return (slot - nb, 1)


def canonical_map(A, skel) -> PlanarMap:
    from heiscat.planar import Geometry, build_scene

    source, slices = canonical_slices(skel)
    geom = Geometry(source, slices)
    ((c, scene),) = build_scene(A, geom, lambda a: a)
    return scene.map


def key_slices(A, key):
    """Elementary slices of the decorated canonical lift named by a normal-form key."""
    nb, bout, strands = key
    skel = (nb, bout, tuple(sorted((s, h) for s, h, _ in strands)))
    source, slices = canonical_slices(skel)
    bottom, top = [], []
    unit = A.unit_index()
    for _, h, deco in strands:
        if deco is None:
            continue
        r, b = deco
        pos = h - nb if h >= nb else nb - 1 - h
        dest = top if h >= nb else bottom
        if r:
            dest.append(("dot", pos, r))
        if b != unit:
            dest.append(("tok", pos, f"#{b}"))
    return source, bottom + list(slices) + top
