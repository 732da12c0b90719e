"""Matrix realization of the action of ``Heis_{-l}`` on cyclotomic module categories.

An object word ``X`` acts on the right regular module ``M`` of ``QWA_n0^f``
by induction (``up``) and restriction (``down``), the rightmost letter acting
first.  Induced modules use the free left basis of ``QWA_(n+1)^f`` over
``QWA_n^f`` fixed in :mod:`heiscat.cyclotomic`, so ``M ⊗ QWA_(n+1)^f`` has the
basis ``v_i ⊗ y``.  Morphisms become sparse matrices; a matrix is a dict from
source basis index to the dict of its image coordinates.

This module knows nothing about the diagram straightener: it reads slices
straight from the diagram language and only uses the algebra layers.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Dict, Optional, Sequence, Tuple

from heiscat import linalg
from heiscat.core import ONE, T, Z, Scalar
from heiscat.cyclotomic import (
    CyclotomicParams,
    cyclotomic_algebra,
    default_params,
    induction_data,
    trace,
)
from heiscat.dsl import DOWN, UP, elementary, parse_slices
from heiscat.frobenius import AlgebraElement
from heiscat.symfun import CCW, GENUINE, BubbleSymbol, SymElement, bubble_value

Matrix = Dict[int, Dict[int, object]]


class OracleError(ValueError):
    pass


# sparse matrices ---------------------------------------------------------------------


def mat_mul(f: Matrix, g: Matrix) -> Matrix:
    """``f ∘ g`` (apply ``g`` first)."""
    out: Matrix = {}
    for i, col in g.items():
        acc: Dict[int, object] = {}
        for j, c in col.items():
            for k, d in f.get(j, {}).items():
                v = acc.get(k)
                acc[k] = c * d if v is None else v + c * d
        acc = {k: v for k, v in acc.items() if v}
        if acc:
            out[i] = acc
    return out


def mat_add(f: Matrix, g: Matrix, c=1) -> Matrix:
    out = {i: dict(col) for i, col in f.items()}
    for i, col in g.items():
        tgt = out.setdefault(i, {})
        for j, v in col.items():
            w = tgt.get(j)
            tgt[j] = v * c if w is None else w + v * c
    return {i: {j: v for j, v in col.items() if v} for i, col in out.items() if any(col.values())}


def mat_scale(f: Matrix, c) -> Matrix:
    if not c:
        return {}
    return {i: {j: v * c for j, v in col.items()} for i, col in f.items()}


def mat_identity(n: int) -> Matrix:
    return {i: {i: 1} for i in range(n)}


def mat_equal(f: Matrix, g: Matrix) -> bool:
    return not mat_add(f, g, -1)


def dense(f: Matrix, nrows: int, ncols: int, zero=0):
    rows = [[zero] * ncols for _ in range(nrows)]
    for i, col in f.items():
        for j, v in col.items():
            rows[j][i] = v
    return rows


# modules ------------------------------------------------------------------------------


class Module:
    """A right ``QWA_n^f``-module with an explicit basis."""

    def __init__(self, ctx: "ActionContext", level: int, dim: int, word: Tuple[str, ...]):
        self.ctx = ctx
        self.level = level
        self.dim = dim
        self.word = word
        self._act: Dict[object, Matrix] = {}

    def act(self, mono) -> Matrix:
        """Right action of a reduced monomial of ``QWA_level^f``."""
        m = self._act.get(mono)
        if m is None:
            m = self._compute_act(mono)
            self._act[mono] = m
        return m

    def act_element(self, terms) -> Matrix:
        out: Matrix = {}
        for mono, c in terms.items():
            out = mat_add(out, self.act(mono), self.ctx.conv(c))
        return out


class Regular(Module):
    def __init__(self, ctx, n0):
        self.alg = cyclotomic_algebra(ctx.params, n0)
        self.basis = self.alg.basis()
        self.index = {m: i for i, m in enumerate(self.basis)}
        super().__init__(ctx, n0, len(self.basis), ())

    def _compute_act(self, mono):
        alg = self.alg
        right = alg.element({mono: ONE})
        out: Matrix = {}
        for i, b in enumerate(self.basis):
            prod = alg.mul(alg.element({b: ONE}), right)
            col = {self.index[m]: self.ctx.conv(c) for m, c in prod.terms.items() if c}
            if col:
                out[i] = col
        return out


class Induced(Module):
    """``V ⊗ QWA_(n+1)^f`` with basis ``(i, y)``, index ``i * ny + y``."""

    def __init__(self, ctx, inner: Module, word):
        self.inner = inner
        self.data = induction_data(ctx.params, inner.level)
        self.ny = len(self.data.gens)
        super().__init__(ctx, inner.level + 1, inner.dim * self.ny, word)

    def _left_products(self, elem) -> Dict[int, Dict[int, Dict]]:
        """``elem * y`` decomposed as ``sum h_y' y'`` for every generator ``y``."""
        big = self.data.big
        out = {}
        for yi, y in enumerate(self.data.gens):
            prod = big.mul(elem, big.element({self.data.gen_mono(y): ONE}))
            out[yi] = {self.data.index[y2]: terms for y2, terms in self.data.decompose(prod).items()}
        return out

    def _compute_act(self, mono):
        big = self.data.big
        out: Matrix = {}
        right = big.element({mono: ONE})
        for yi, y in enumerate(self.data.gens):
            prod = big.mul(big.element({self.data.gen_mono(y): ONE}), right)
            for y2, terms in self.data.decompose(prod).items():
                y2i = self.data.index[y2]
                h = self.inner.act_element(terms)
                for i, col in h.items():
                    tgt = out.setdefault(i * self.ny + yi, {})
                    for j, c in col.items():
                        k = j * self.ny + y2i
                        tgt[k] = tgt[k] + c if k in tgt else c
        return _clean(out)

    def left_mul(self, elem) -> Matrix:
        """``v ⊗ u -> v ⊗ elem u`` for ``elem`` commuting with ``QWA_(n)^f``."""
        out: Matrix = {}
        for yi, parts in self._left_products(elem).items():
            for y2i, terms in parts.items():
                h = self.inner.act_element(terms)
                for i, col in h.items():
                    tgt = out.setdefault(i * self.ny + yi, {})
                    for j, c in col.items():
                        k = j * self.ny + y2i
                        tgt[k] = tgt[k] + c if k in tgt else c
        return _clean(out)


class Restricted(Module):
    def __init__(self, ctx, inner: Module, word):
        self.inner = inner
        if inner.level == 0:
            super().__init__(ctx, 0, 0, word)
            self.zero = True
            return
        self.zero = False
        self.small = cyclotomic_algebra(ctx.params, inner.level - 1)
        self.big = cyclotomic_algebra(ctx.params, inner.level)
        super().__init__(ctx, inner.level - 1, inner.dim, word)

    def _compute_act(self, mono):
        if self.zero:
            return {}
        emb = self.small.embed(self.small.element({mono: ONE}), self.big)
        return self.inner.act_element(emb.terms)


def _clean(m: Matrix) -> Matrix:
    out = {}
    for i, col in m.items():
        col = {j: v for j, v in col.items() if v}
        if col:
            out[i] = col
    return out


# the action ---------------------------------------------------------------------------


class ActionContext:
    """Evaluation data: cyclotomic parameters, base weight and an optional specialization.

    The action is one of ``Heis_{-l}``; ``t^2 = f_l`` is required.
    """

    def __init__(self, params: CyclotomicParams, n0: int = 0, specialize: Optional[Tuple] = None):
        if not params.satisfies_action_condition():
            raise OracleError("the action needs f_l = t^2")
        self.params = params
        self.A = params.A
        if not params.A.is_even:
            raise OracleError("the matrix oracle is implemented for purely even algebras")
        self.l = params.l
        self.k = -params.l
        self.n0 = n0
        self.point = None
        if specialize is not None:
            self.point = (Fraction(specialize[0]), Fraction(specialize[1]))
        self._modules: Dict[Tuple[str, ...], Module] = {}
        self._cupl: Dict[int, Dict] = {}

    @classmethod
    def default(cls, A, l: int, n0: int = 0, specialize=None) -> "ActionContext":
        return cls(default_params(A, l), n0, specialize)

    def conv(self, c):
        if self.point is None:
            return c
        if isinstance(c, Scalar):
            return c.specialize(*self.point)
        return c

    # objects -------------------------------------------------------------------------
    def module(self, word: Sequence[str]) -> Module:
        """The module ``Psi(word)(M)``."""
        word = tuple(word)
        m = self._modules.get(word)
        if m is not None:
            return m
        if not word:
            m = Regular(self, self.n0)
        else:
            inner = self.module(word[1:])
            if inner.dim == 0:
                m = Module(self, inner.level + (1 if word[0] == UP else -1), 0, word)
            elif word[0] == UP:
                m = Induced(self, inner, word)
            else:
                m = Restricted(self, inner, word)
        self._modules[word] = m
        return m

    def eval_object(self, word: Sequence[str]) -> int:
        """Dimension of ``Psi(word)(M)``."""
        return self.module(word).dim

    # functors applied to maps ----------------------------------------------------------
    def lift(self, left: Sequence[str], right: Sequence[str], f: Matrix) -> Matrix:
        """``Psi(1_left)`` applied to a map between modules built on ``right``."""
        out = f
        right = tuple(right)
        for o in reversed(left):
            if not out:
                return {}
            lvl = self._level(right)
            if o == UP:
                ny = len(induction_data(self.params, lvl).gens)
                out = {i * ny + y: {j * ny + y: c for j, c in col.items()} for i, col in out.items() for y in range(ny)}
            elif lvl == 0:
                out = {}
            right = (o,) + right
        return out

    def _level(self, word) -> int:
        return self.n0 + sum(1 if o == UP else -1 for o in word)

    # generators ----------------------------------------------------------------------
    def _gen_local(self, name: str, arg, N: Module, right) -> Matrix:
        """The map of one generator on ``Psi(local source)(N)``."""
        p = self.params
        n = N.level
        if name in ("dotu", "toku"):
            ind = self.module((UP,) + tuple(right))
            big = cyclotomic_algebra(p, n + 1)
            W = big.W
            if name == "dotu":
                elem = big.reduce(W.x(n + 1, arg))
            else:
                terms = {}
                for b, c in arg.support().items():
                    terms[(big.zero_r, big.one_tokens[:n] + (b,), big.id_perm)] = c
                elem = big.element(terms)
            return ind.left_mul(elem)
        if name in ("xpos", "xneg"):
            ind2 = self.module((UP, UP) + tuple(right))
            return self._crossing(ind2, name == "xpos")
        if name == "cupR":
            data = induction_data(p, n)
            ny = len(data.gens)
            y0 = data.index[(0, p.A.unit_index(), n + 1)]
            return {i: {i * ny + y0: 1} for i in range(N.dim)}
        if name == "capR":
            # Ind(Res(N)) -> N, (w, y) -> w * y
            if n == 0:
                return {}
            data = induction_data(p, n - 1)
            ny = len(data.gens)
            out = {}
            for yi, y in enumerate(data.gens):
                g = N.act(data.gen_mono(y))
                for i, col in g.items():
                    out[i * ny + yi] = dict(col)
            return out
        if name == "capL":
            # Res(Ind(N)) -> N, (v, y) -> v * c tr(y)
            data = induction_data(p, n)
            ny = len(data.gens)
            c = -(T.inverse() / Z)
            out = {}
            for yi, y in enumerate(data.gens):
                u = data.big.element({data.gen_mono(y): ONE})
                tr = trace(u, p)
                if tr.is_zero():
                    continue
                h = N.act_element({m: v * c for m, v in tr.terms.items()})
                for i, col in h.items():
                    out[i * ny + yi] = col
            return out
        if name == "cupL":
            # N -> Ind(Res(N)), v -> sum_y v gamma_y ⊗ y
            if n == 0:
                return {}
            data = induction_data(p, n - 1)
            ny = len(data.gens)
            gam = self._cupl_dual(n)
            out: Matrix = {}
            for yi in range(ny):
                h = N.act_element(gam[yi])
                for i, col in h.items():
                    tgt = out.setdefault(i, {})
                    for j, c in col.items():
                        tgt[j * ny + yi] = c
            return out
        raise OracleError(f"unknown generator {name}")

    def _crossing(self, ind2: Induced, positive: bool) -> Matrix:
        """``v ⊗ u -> v ⊗ sigma_(n+1)^{±1} u`` on ``Ind(Ind(N))``."""
        inner = ind2.inner
        N = inner.inner
        n = N.level
        big2 = cyclotomic_algebra(self.params, n + 2)
        W = big2.W
        s = big2.reduce(W.sigma(n + 1) if positive else W.sigma_inv(n + 1))
        d1 = inner.data  # level n -> n+1
        d2 = ind2.data  # level n+1 -> n+2
        ny1, ny2 = len(d1.gens), len(d2.gens)
        out: Matrix = {}
        for y1i, y1 in enumerate(d1.gens):
            g1 = d1.big.embed(d1.big.element({d1.gen_mono(y1): ONE}), big2)
            for y2i, y2 in enumerate(d2.gens):
                g2 = big2.element({d2.gen_mono(y2): ONE})
                u = big2.mul(big2.mul(s, g1), g2)
                for y2b, terms in d2.decompose(u).items():
                    hp = d1.big.element(terms)
                    for y1b, terms1 in d1.decompose(hp).items():
                        h = N.act_element(terms1)
                        col_off = d1.index[y1b] * ny2 + d2.index[y2b]
                        for i, col in h.items():
                            tgt = out.setdefault((i * ny1 + y1i) * ny2 + y2i, {})
                            for j, c in col.items():
                                k = j * ny1 * ny2 + col_off
                                tgt[k] = tgt[k] + c if k in tgt else c
        return _clean(out)

    def _cupl_dual(self, n: int):
        """``gamma_y`` in ``QWA_n^f`` with ``c tr_n(y' gamma_y) = delta``, as term dicts."""
        if n in self._cupl:
            return self._cupl[n]
        p = self.params
        data = induction_data(p, n - 1)
        alg = data.big
        small = data.small
        basis = alg.basis()
        sbasis = small.basis()
        sidx = {m: i for i, m in enumerate(sbasis)}
        c = -(T.inverse() / Z)
        ns = len(sbasis)
        rows = [[Scalar.const(0)] * len(basis) for _ in range(len(data.gens) * ns)]
        for col, m in enumerate(basis):
            me = alg.element({m: ONE})
            for yi, y in enumerate(data.gens):
                u = alg.mul(alg.element({data.gen_mono(y): ONE}), me)
                tr = trace(u, p)
                for sm, v in tr.terms.items():
                    rows[yi * ns + sidx[sm]][col] = v * c
        inv = linalg.inverse(rows)
        unit = sidx[next(iter(small.one().terms))]
        out = {}
        for yi in range(len(data.gens)):
            rhs_row = yi * ns + unit
            terms = {}
            for col, m in enumerate(basis):
                v = inv[col][rhs_row]
                if v:
                    terms[m] = v
            out[yi] = terms
        self._cupl[n] = out
        return out

    # morphisms -------------------------------------------------------------------------
    def slice_matrix(self, word: Sequence[str], sl) -> Matrix:
        name, i, arg = self._resolve_token(sl)
        word = tuple(word)
        from heiscat.planar import word_after

        if not self.module(word).dim or not self.module(word_after(word, sl)).dim:
            return {}
        if name == "bub":
            return self.lift(word[:i], word[i:], self._bubble_slice(arg, word[i:]))
        if name in ("dot", "tok"):
            o = word[i]
            if o == UP:
                local = ("dotu" if name == "dot" else "toku", arg)
                right = word[i + 1:]
                N = self.module(right)
                return self.lift(word[:i], (UP,) + right, self._gen_local(local[0], local[1], N, right))
            # a decoration on a downward strand is its rotation through right cups and caps
            return self.eval_slices(word, _down_deco(i, name, arg))
        if name in ("xpos", "xneg"):
            o1, o2 = word[i], word[i + 1]
            if (o1, o2) == (UP, UP):
                right = word[i + 2:]
                N = self.module(right)
                return self.lift(word[:i], (UP, UP) + right, self._gen_local(name, None, N, right))
            return self.eval_slices(word, _rotated_crossing(word, i, name))
        right = word[i:] if name in ("cupR", "cupL") else word[i + 2:]
        N = self.module(right)
        if name in ("cupR", "cupL"):
            local_top = (DOWN, UP) if name == "cupR" else (UP, DOWN)
            return self.lift(word[:i], local_top + tuple(right), self._gen_local(name, None, N, right))
        return self.lift(word[:i], tuple(right), self._gen_local(name, None, N, right))

    def eval_slices(self, source: Sequence[str], slices) -> Matrix:
        from heiscat.planar import word_after

        word = tuple(source)
        out = mat_identity(self.module(word).dim)
        for sl in slices:
            out = mat_mul(self.slice_matrix(word, sl), out)
            word = word_after(word, sl)
        return out

    def eval_text(self, text: str) -> Tuple[Matrix, Tuple[str, ...], Tuple[str, ...]]:
        src, slices = parse_slices(text)
        source, elems, target = elementary(src, slices)
        return self.eval_slices(source, elems), source, target

    def _resolve_token(self, sl):
        name, i, arg = sl
        if name == "tok" and not isinstance(arg, AlgebraElement):
            arg = token_element(self.A, arg)
        if name == "bub" and not isinstance(arg[2], AlgebraElement):
            arg = (arg[0], arg[1], token_element(self.A, arg[2]), arg[3])
        return (name, i, arg)

    def _bubble_slice(self, bub, right) -> Matrix:
        orient, sign, a, dots = bub
        if sign == GENUINE:
            return self.bubble_matrix(a, dots, right, orient)
        # fake bubbles only exist through their values
        return self.sym_matrix(bubble_value(BubbleSymbol(orient, sign, a, dots), -self.l), right)

    # coefficients ------------------------------------------------------------------------
    def bubble_matrix(self, a: AlgebraElement, dots: int, right=(), orientation: str = CCW) -> Matrix:
        """A bubble with ``dots`` dots and token ``a`` left of the word ``right``."""
        right = tuple(right)
        if orientation == CCW:
            slices = [("cupR", 0, None)]
            if dots:
                slices.append(("dot", 1, dots))
            slices += [("tok", 1, a), ("capL", 0, None)]
        else:
            slices = [("cupL", 0, None)]
            if dots:
                slices.append(("dot", 0, dots))
            slices += [("tok", 0, a), ("capR", 0, None)]
        return self.eval_slices(right, slices)

    def sym_matrix(self, s: SymElement, right=()) -> Matrix:
        """``Psi`` of a ``Sym(A) ⊗ Sym(A)`` element placed left of the word ``right``."""
        A = self.A
        right = tuple(right)
        dim = self.module(right).dim
        out: Matrix = {}
        reps = A.cocenter_basis()
        for mono, c in s.terms.items():
            m = mat_scale(mat_identity(dim), self.conv(c))
            for (side, p, j), e in mono:
                a = A.basis_element(reps[j])
                if side == "L":
                    g = mat_scale(self.bubble_matrix(a, p + self.l, right), self.conv((Z / T) * (1 if p % 2 == 0 else -1)))
                else:
                    g = mat_scale(self.bubble_matrix(a, -p, right), self.conv((Z * T) * (1 if p % 2 == 1 else -1)))
                for _ in range(e):
                    m = mat_mul(g, m)
            out = mat_add(out, m)
        return out


def _down_deco(i: int, name: str, arg):
    """A decoration on a downward strand at position ``i``, via right cup and cap."""
    return [("cupR", i, None), (name, i + 1, arg), ("capR", i + 1, None)]


def _rotated_crossing(word, i, name):
    o1, o2 = word[i], word[i + 1]
    if (o1, o2) == (UP, DOWN):
        return [("cupR", i, None), (name, i + 1, None), ("capR", i + 2, None)]
    if (o1, o2) == (DOWN, UP):
        return [("cupL", i + 2, None), (name, i + 1, None), ("capL", i, None)]
    # both down: rotate the upward crossing by 180 degrees with right cups and caps
    return [
        ("cupR", i, None),
        ("cupR", i + 1, None),
        (name, i + 2, None),
        ("capR", i + 3, None),
        ("capR", i + 2, None),
    ]


def token_element(A, arg) -> AlgebraElement:
    if isinstance(arg, AlgebraElement):
        return arg
    if isinstance(arg, int):
        return A.basis_element(arg)
    s = str(arg).strip()
    if s.startswith("#"):
        return A.basis_element(int(s[1:]))
    return A.parse_element(s)
