"""Verification suites shared by the command line and the test suite.

Every suite returns a :class:`Report`: a list of named checks with a short
diff for the failures.  Random inputs come from an explicit seed.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from math import factorial
from typing import Iterable, List, Optional, Sequence

from heiscat import linalg
from heiscat.core import T, ZERO, Z, Scalar
from heiscat.cyclotomic import (
    cyclotomic_algebra,
    default_params,
    dimension,
    f_of_x,
    mackey_assemble,
    mackey_decompose,
    marbleface_matrix,
    trace,
)
from heiscat.diagrams import Morphism, compose, equals, normalize, omega, rotate_star
from heiscat.dsl import DOWN, UP
from heiscat.oracle import ActionContext, mat_add, mat_equal, mat_mul
from heiscat.planar import word_after
from heiscat.relations import relations
from heiscat.symfun import (
    CCW,
    CW,
    MINUS,
    PLUS,
    BubbleSymbol,
    SymElement,
    banana_defect,
    bubble_value,
    grassmannian_check,
    h_from_e,
)


@dataclass
class Check:
    name: str
    ok: bool
    detail: str = ""

    def to_json(self):
        out = {"name": self.name, "ok": self.ok}
        if self.detail:
            out["detail"] = self.detail
        return out


@dataclass
class Report:
    suite: str
    checks: List[Check] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(c.ok for c in self.checks)

    @property
    def passed(self) -> int:
        return sum(c.ok for c in self.checks)

    def add(self, name: str, ok: bool, detail: str = ""):
        self.checks.append(Check(name, bool(ok), "" if ok else detail))

    def extend(self, other: "Report", prefix: str = ""):
        for c in other.checks:
            self.checks.append(Check(prefix + c.name, c.ok, c.detail))

    def text(self, verbose: bool = False) -> str:
        lines = []
        for c in self.checks:
            if verbose or not c.ok:
                lines.append(f"{'PASS' if c.ok else 'FAIL'} {c.name}")
                if c.detail:
                    lines.extend("    " + ln for ln in c.detail.splitlines())
        lines.append(f"{self.suite}: {self.passed}/{len(self.checks)} passed")
        return "\n".join(lines)

    def to_json(self):
        return {
            "suite": self.suite,
            "ok": self.ok,
            "passed": self.passed,
            "total": len(self.checks),
            "checks": [c.to_json() for c in self.checks],
        }


# relations ----------------------------------------------------------------------------------


def verify_relations(A, ks: Iterable[int], names: Optional[Sequence[str]] = None) -> Report:
    rep = Report("relations")
    for k in ks:
        for rel in relations(A, k, names):
            res = rel.check(k)
            rep.add(f"{A.name} k={k} {res.name}", res.ok, res.diff())
    return rep


# infinite Grassmannian ---------------------------------------------------------------------


def verify_grassmannian(A, ks: Iterable[int], nmax: int = 4) -> Report:
    """Bubble pairs against ``-delta_{n,0} tr(ab)/z`` and the boundary constants."""
    rep = Report("grassmannian")
    basis = [A.basis_element(i) for i in range(A.dim)]
    for k in ks:
        for n in range(-nmax, nmax + 1):
            for i, a in enumerate(basis):
                for j, b in enumerate(basis):
                    want = SymElement.scalar(A, -(A.tr(A.mul(a, b)) / Z) if n == 0 else ZERO)
                    for which in (PLUS, MINUS):
                        got = grassmannian_check(A, k, n, a, b, which)
                        rep.add(
                            f"{A.name} k={k} n={n} ({A.basis[i]},{A.basis[j]}) {which}",
                            got == want,
                            f"got {got}, expected {want}",
                        )
        for i, a in enumerate(basis):
            want = SymElement.scalar(A, T * A.tr(a) / Z)
            got = bubble_value(BubbleSymbol(CCW, PLUS, a, -k), k)
            rep.add(f"{A.name} k={k} plus ccw boundary {A.basis[i]}", got == want, f"got {got}")
            got = bubble_value(BubbleSymbol(CW, MINUS, a, 0), k)
            rep.add(f"{A.name} k={k} minus cw boundary {A.basis[i]}", got == want, f"got {got}")
    return rep


# e/h duality ----------------------------------------------------------------------------------


def verify_banana(A, nmax: int = 6) -> Report:
    """``sum (-1)^p e_p(ac) h_q(c^v b) = delta_{n,0} tr(ab)``, with an independent convolution check."""
    rep = Report("banana")
    h_from_e(A, "L", nmax)
    basis = [A.basis_element(i) for i in range(A.dim)]
    for n in range(nmax + 1):
        for i, a in enumerate(basis):
            for j, b in enumerate(basis):
                d = banana_defect(A, a, b, n, "L", nmax)
                rep.add(f"{A.name} n={n} ({A.basis[i]},{A.basis[j]})", d.is_zero(), f"defect {d}")
    return rep


# cyclotomic quotients -----------------------------------------------------------------------


def verify_cyclotomic(A, l: int, n: int, samples: int = 100, seed: int = 0, params=None) -> Report:
    """Dimension count, the trace of ``f(x_n)``, and the Mackey map for ``QWA_n^f``."""
    rep = Report("cyclotomic")
    if params is None:
        params = default_params(A, l)
    l = params.l
    tag = f"{A.name} l={l} n={n}"
    expected = (l * A.dim) ** n * factorial(n)
    got = dimension(params, n)
    rep.add(f"{tag} dimension {expected}", got == expected, f"enumerated {got}")
    if n >= 1:
        u = f_of_x(params, n, n)
        tr = trace(u, params)
        rep.add(f"{tag} trace of f(x_n) vanishes", tr.is_zero(), f"got {tr}")
    if n >= 1:
        m = n - 1
        mat = marbleface_matrix(params, m)
        square = len(mat) == len(mat[0]) if mat else True
        full = square and linalg.rank(mat) == len(mat)
        rep.add(f"{tag} Mackey map is bijective", full, f"{len(mat)} rows, rank {linalg.rank(mat)}")
        rng = random.Random(seed)
        big = cyclotomic_algebra(params, n)
        basis = big.basis()
        bad = 0
        for _ in range(samples):
            terms = {}
            for mono in rng.sample(basis, min(len(basis), rng.randint(1, 4))):
                terms[mono] = Scalar.const(rng.randint(-3, 3) or 1)
            u = big.element(terms)
            back = mackey_assemble(mackey_decompose(u, params), params, m)
            bad += not (back - u).is_zero()
        rep.add(f"{tag} Mackey round trip on {samples} elements", bad == 0, f"{bad} failures")
    return rep


# random diagrams and the oracle --------------------------------------------------------------


class _Strands:
    """Union-find over the strands of a growing diagram, to cap decorations per strand."""

    def __init__(self, m: int):
        self.parent = list(range(m))
        self.ids = list(range(m))
        self.dots = [0] * m
        self.tokens = [0] * m

    def _new(self):
        i = len(self.parent)
        self.parent.append(i)
        self.dots.append(0)
        self.tokens.append(0)
        return i

    def find(self, i):
        while self.parent[i] != i:
            self.parent[i] = self.parent[self.parent[i]]
            i = self.parent[i]
        return i

    def root(self, pos):
        return self.find(self.ids[pos])

    def apply(self, sl):
        name, i, _ = sl
        if name in ("xpos", "xneg"):
            self.ids[i], self.ids[i + 1] = self.ids[i + 1], self.ids[i]
        elif name in ("cupR", "cupL"):
            s = self._new()
            self.ids[i:i] = [s, s]
        elif name in ("capR", "capL"):
            a, b = self.root(i), self.root(i + 1)
            if a != b:
                self.parent[b] = a
                self.dots[a] += self.dots[b]
                self.tokens[a] += self.tokens[b]
            del self.ids[i : i + 2]


def random_diagram(
    rng: random.Random,
    A,
    source: Optional[Sequence[str]] = None,
    max_width: int = 3,
    length: int = 6,
    max_crossings: int = 3,
    max_dots: int = 2,
    max_tokens: int = 1,
) -> Morphism:
    """A random single diagram with bounded crossings and decorations per strand."""
    if source is None:
        source = tuple(rng.choice((UP, DOWN)) for _ in range(rng.randint(0, max_width - 1)))
    word = tuple(source)
    strands = _Strands(len(word))
    slices = []
    crossings = 0
    for _ in range(length):
        m = len(word)
        opts = []
        for i in range(m):
            r = strands.root(i)
            if strands.dots[r] < max_dots:
                opts.append(("dot", i, rng.choice((1, -1))))
            if strands.tokens[r] < max_tokens and A.dim > 1:
                opts.append(("tok", i, rng.randrange(A.dim)))
        if crossings < max_crossings:
            opts += [(nm, i, None) for i in range(m - 1) for nm in ("xpos", "xneg")]
        if m < max_width:
            opts += [(nm, i, None) for i in range(m + 1) for nm in ("cupR", "cupL")]
        for i in range(m - 1):
            if word[i] == UP and word[i + 1] == DOWN:
                opts.append(("capR", i, None))
            if word[i] == DOWN and word[i + 1] == UP:
                opts.append(("capL", i, None))
        if not opts:
            break
        sl = rng.choice(opts)
        if sl[0] == "dot":
            strands.dots[strands.root(sl[1])] += 1
        elif sl[0] == "tok":
            strands.tokens[strands.root(sl[1])] += 1
        elif sl[0] in ("xpos", "xneg"):
            crossings += 1
        strands.apply(sl)
        slices.append(sl)
        word = word_after(word, sl)
    return Morphism.from_slices(A, tuple(source), slices)


def evaluate(ctx: ActionContext, f: Morphism):
    """Matrix of a morphism under the oracle, coefficients included."""
    out = {}
    for term, c in f.terms.items():
        m = mat_mul(ctx.eval_slices(term.source, term.slices), ctx.lift(term.source, (), ctx.sym_matrix(c)))
        out = mat_add(out, m)
    return out


def oracle_agrees(ctx: ActionContext, f: Morphism) -> bool:
    nf = normalize(f, ctx.k)
    return mat_equal(evaluate(ctx, f), evaluate(ctx, nf.to_morphism()))


def verify_oracle(
    algebras: Sequence,
    samples: int = 200,
    seed: int = 0,
    ls: Sequence[int] = (1, 2),
    n0s: Sequence[int] = (0, 1),
    specialize=None,
) -> Report:
    """``eval(f) == eval(normalize(f))`` on random diagrams, cycling through the settings."""
    rep = Report("oracle")
    rng = random.Random(seed)
    cells = [(A, l, n0) for A in algebras for l in ls for n0 in n0s]
    ctxs = {}
    for s in range(samples):
        A, l, n0 = cells[s % len(cells)]
        key = (A.name, l, n0)
        if key not in ctxs:
            ctxs[key] = ActionContext.default(A, l, n0, specialize)
        f = random_diagram(rng, A)
        ok = oracle_agrees(ctxs[key], f)
        rep.add(f"#{s} {A.name} l={l} n0={n0} {f.text()}", ok, "eval(f) != eval(normalize(f))")
    return rep


# symmetries ----------------------------------------------------------------------------------


def generators(A, max_width: int = 2) -> List[Morphism]:
    """Every generating slice on every word of length at most ``max_width``."""
    out = []
    words = [()]
    for _ in range(max_width):
        words += [w + (o,) for w in words if len(w) == len(words[-1]) for o in (UP, DOWN)]
    for w in sorted(set(words), key=lambda w: (len(w), w)):
        m = len(w)
        sls = []
        for i in range(m):
            sls += [("dot", i, 1), ("dot", i, -1)] + [("tok", i, b) for b in range(A.dim)]
        sls += [(nm, i, None) for i in range(m - 1) for nm in ("xpos", "xneg")]
        sls += [(nm, i, None) for i in range(m + 1) for nm in ("cupR", "cupL")]
        for i in range(m - 1):
            if w[i] == UP and w[i + 1] == DOWN:
                sls.append(("capR", i, None))
            if w[i] == DOWN and w[i + 1] == UP:
                sls.append(("capL", i, None))
        for i in range(m + 1):
            for o in (CCW, CW):
                for sg in (PLUS, MINUS, "0"):
                    sls.append(("bub", i, (o, sg, A.dim - 1, 1)))
        out += [Morphism.from_slices(A, w, [sl]) for sl in sls]
    return out


def _same(f: Morphism, g: Morphism, k: int) -> bool:
    return f == g or equals(f, g, k)


def verify_symmetry(A, k: int, samples: int = 50, seed: int = 0) -> Report:
    """``omega`` is an involution; ``rotate_star`` is an involutive anti-automorphism."""
    rep = Report("symmetry")
    rng = random.Random(seed)
    for f in generators(A):
        rep.add(f"{A.name} omega^2 on {f.text()}", _same(omega(omega(f)), f, k), "omega(omega(f)) != f")
        rep.add(f"{A.name} star^2 on {f.text()}", _same(rotate_star(rotate_star(f)), f, k), "star(star(f)) != f")
    for s in range(samples):
        f = random_diagram(rng, A)
        rep.add(f"{A.name} omega^2 #{s}", _same(omega(omega(f)), f, k), f.text())
    for s in range(samples):
        g = random_diagram(rng, A)
        f = random_diagram(rng, A, source=g.target, length=4)
        lhs = rotate_star(compose(f, g))
        rhs = compose(rotate_star(g), rotate_star(f))
        rep.add(f"{A.name} star anti-multiplicative #{s}", _same(lhs, rhs, k), f"f = {f.text()}\ng = {g.text()}")
        rep.add(f"{A.name} star^2 #{s}", _same(rotate_star(rotate_star(g)), g, k), g.text())
    return rep


# linear independence of images -----------------------------------------------------------------


def positive_basis(A, word: Sequence[str], l: int) -> List[Morphism]:
    """Dotted permutations of upward strands with every dot exponent below ``l``."""
    from itertools import permutations, product

    n = len(word)
    out = []
    for perm in permutations(range(n)):
        for dots in product(range(l), repeat=n):
            slices = [("dot", i, d) for i, d in enumerate(dots) if d]
            slices += [("xpos", i, None) for i in _reduced_word(perm)]
            out.append(Morphism.from_slices(A, tuple(word), slices))
    return out


def _reduced_word(perm) -> List[int]:
    """Adjacent transpositions (bubble sort) realizing ``perm``."""
    p = list(perm)
    moves = []
    for end in range(len(p) - 1, 0, -1):
        for i in range(end):
            if p[i] > p[i + 1]:
                p[i], p[i + 1] = p[i + 1], p[i]
                moves.append(i)
    return moves


def verify_independence(A, l: int = 2, words=((UP,), (UP, UP)), n0s: Sequence[int] = (0, 1)) -> Report:
    """Rank of the images of positive basis elements under the cyclotomic action."""
    rep = Report("independence")
    ctxs = [ActionContext.default(A, l, n0) for n0 in n0s]
    for word in words:
        elems = positive_basis(A, word, l)
        rows = []
        for f in elems:
            row = []
            for ctx in ctxs:
                m = evaluate(ctx, f)
                d = ctx.eval_object(word)
                row += [m.get(i, {}).get(j, 0) for i in range(d) for j in range(d)]
            rows.append([Scalar.coerce(x) for x in row])
        r = linalg.rank(rows)
        rep.add(f"{A.name} l={l} End({' '.join(word)}) rank {r} of {len(elems)}", r == len(elems))
    return rep
