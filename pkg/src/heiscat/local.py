"""Local surgery on planar maps: regions, pattern descriptions and gluing."""

from __future__ import annotations

from typing import Dict, List, Optional, Sequence, Tuple

from heiscat.core import ONE
from heiscat.planar import B, LOOP, PlanarMap, deco_chain

Dart = Tuple[int, int]


# regions ----------------------------------------------------------------------


def face_region(M: PlanarMap, orbit: Sequence[Dart]) -> Tuple[List[int], List[Dart]]:
    """Vertices of a face and the darts leaving it, counterclockwise."""
    verts = []
    for d in orbit:
        if d[0] not in verts:
            verts.append(d[0])
    ports = []
    n = len(orbit)
    for i in range(n):
        d = orbit[i]
        nxt = orbit[(i + 1) % n]
        e = M.sigma(M.link[d])
        while e != nxt:
            ports.append(e)
            e = M.sigma(e)
    return verts, ports


def vertex_region(M: PlanarMap, v: int) -> Tuple[List[int], List[Dart]]:
    return [v], [(v, s) for s in range(M.degree(v))]


def describe(M: PlanarMap, verts: Sequence[int], ports: Sequence[Dart], rot: int = 0):
    """Rotation-sensitive description of a region used for pattern matching."""
    m = len(ports)
    vs = set(verts)
    pidx = {ports[(j + rot) % m]: j for j in range(m)}
    if len(pidx) != m:
        return None
    label: Dict[int, int] = {}
    order: List[int] = []
    for j in range(m):
        v0 = ports[(j + rot) % m][0]
        if v0 in label:
            continue
        label[v0] = len(order)
        order.append(v0)
        for v in order[label[v0]:]:
            for s in range(M.degree(v)):
                if (v, s) in pidx:
                    continue
                w = M.link[(v, s)][0]
                if w in vs and w not in label:
                    label[w] = len(order)
                    order.append(w)
    if len(order) != len(vs):
        return None
    items = []
    for v in order:
        nb = []
        for s in range(M.degree(v)):
            d = (v, s)
            if d in pidx:
                nb.append(("P", pidx[d]))
            else:
                w, s2 = M.link[d]
                if w not in vs:
                    return None
                nb.append((label[w], s2))
        items.append((M.kind[v], M.sign.get(v, 0), tuple(nb)))
    return tuple(items)


def local_ports(T: PlanarMap) -> List[Dart]:
    """Boundary darts of a local picture, counterclockwise."""
    m = T.nports
    return [(B, m - 1 - j) for j in range(m)]


def describe_local(T: PlanarMap):
    ports = [T.link[d] for d in local_ports(T)]
    if any(p[0] == B for p in ports):
        return None
    return describe(T, T.vertices(), ports, 0)


# gluing -----------------------------------------------------------------------------


class Glued:
    """Result of replacing a region by a local picture."""

    def __init__(self, M, vmap, outer, T, loops=()):
        self.map = M
        self.vmap = vmap
        self.outer = outer
        self.T = T
        # closed strings made only of port connections: (loop vertex, T tail, T head)
        self.loops = list(loops)

    def image(self, d: Dart) -> Optional[Dart]:
        """The dart of the glued map standing for a dart of ``T``."""
        v, s = d
        if v == B:
            return self.outer[self.T.nports - 1 - s]
        return (self.vmap[v], s)


def glue(A, M: PlanarMap, verts: Sequence[int], ports: Sequence[Dart], T: PlanarMap, rot: int = 0) -> List[Tuple[object, Glued]]:
    """Remove ``verts`` and glue ``T`` in, T's port ``j`` going to ``ports[j + rot]``."""
    m = len(ports)
    if T.nports != m:
        raise ValueError("port count mismatch")
    vs = set(verts)
    P = [ports[(j + rot) % m] for j in range(m)]
    pindex = {p: j for j, p in enumerate(P)}
    M2 = M.copy()
    # external half edges: port j -> (outside dart or other port, deco, leaves region?)
    ext = []
    for j, p in enumerate(P):
        o = M.link[p]
        out_going = M.is_tail(p)
        dec = M.get_deco(p) if out_going else M.get_deco(o)
        if o[0] in vs:
            ext.append((("P", pindex[o]), dec, out_going))
        else:
            ext.append((("D", o), dec, out_going))
    for v in verts:
        M2.remove_vertex(v)
    vmap = {}
    for v in T.vertices():
        nv = M2.add_vertex(T.kind[v], T.sign.get(v, 0))
        vmap[v] = nv
    # internal edges of T
    for d in T.tails():
        h = T.link[d]
        if d[0] != B and h[0] != B:
            M2.connect((vmap[d[0]], d[1]), (vmap[h[0]], h[1]), T.deco.get(d))
    # port nodes: each has an outside side and a T side
    # side entries: (kind, target, deco, direction) where direction is True when
    # the strand travels from the port node towards the target
    tside = []
    for j in range(m):
        bd = (B, m - 1 - j)
        x = T.link[bd]
        into_t = T.is_tail(bd)
        dec = T.get_deco(bd) if into_t else T.get_deco(x)
        if x[0] == B:
            tside.append((("P", m - 1 - x[1]), dec, into_t))
        else:
            tside.append((("D", (vmap[x[0]], x[1])), dec, into_t))
    outer = [e[0][1] if e[0][0] == "D" else None for e in ext]
    done = [False] * m
    chains = []
    for j in range(m):
        if done[j]:
            continue
        leaves = ext[j][2]
        fwd_side = "ext" if leaves else "t"
        back_side = "t" if leaves else "ext"
        fdecs, head = _walk(ext, tside, j, fwd_side, done)
        if head is None:
            bd = (B, m - 1 - j)
            x = T.link[bd]
            tedge = (bd, x) if T.is_tail(bd) else (x, bd)
            chains.append((None, tedge, fdecs))
            continue
        bdecs, tail = _walk(ext, tside, j, back_side, done)
        chains.append((tail, head, list(reversed(bdecs)) + fdecs))
    loops = []
    for idx, (tail, head, decs) in enumerate(chains):
        if tail is None:
            v = M2.add_vertex(LOOP)
            loops.append((v, head[0], head[1]))
            chains[idx] = ((v, 1), (v, 0), decs)
    results = [(ONE, M2)]
    for tail, head, decs in chains:
        prod = deco_chain(A, [d for d in decs if d is not None])
        new = []
        for c, mm in results:
            items = list(prod.items())
            for idx, (dec, c2) in enumerate(items):
                m3 = mm if idx == len(items) - 1 else mm.copy()
                m3.connect(tail, head, dec)
                new.append((c * c2, m3))
        results = new
    return [(c, Glued(mm, vmap, outer, T, loops)) for c, mm in results if c]


def _walk(ext, tside, j, side, done):
    """Walk from port ``j`` through ``side``; returns (decorations in walk order, end dart)."""
    decs = []
    cur, cur_side = j, side
    while True:
        done[cur] = True
        entry = ext[cur] if cur_side == "ext" else tside[cur]
        (kind, tgt), dec, _ = entry
        decs.append(dec)
        if kind == "D":
            return decs, tgt
        nxt_side = "t" if cur_side == "ext" else "ext"
        cur, cur_side = tgt, nxt_side
        if cur == j and cur_side == side:
            return decs, None
