"""Cyclotomic quotients ``QWA_n^f`` of quantum affine wreath product algebras.

Elements are kept in the basis ``x^r a sigma_g`` with ``0 <= r_i < l``.  The
quotient is realized as its own left regular representation: multiplying a
reduced element on the left by ``sigma_i`` or a token keeps it reduced, and
``x_j`` is applied as ``sigma_{j-1} ... sigma_1 x_1 sigma_1 ... sigma_{j-1}``
where ``x_1`` is reduced with ``f(x_1) = 0``.
"""

from __future__ import annotations

import json
from functools import lru_cache
from itertools import permutations, product
from typing import Dict, List, Sequence, Tuple

from heiscat.core import ONE, ZERO, Z, Scalar
from heiscat.frobenius import AlgebraElement, FrobeniusSuperalgebra
from heiscat.wreath import (
    Mono,
    WreathAlgebra,
    WreathElement,
    perm_compose,
    perm_inverse,
    reduced_word,
    simple,
)


class CyclotomicParams:
    """``f(w) = f_0 w^l + f_1 w^(l-1) + ... + f_l`` with central even ``f_i``."""

    def __init__(self, A: FrobeniusSuperalgebra, coeffs: Sequence[AlgebraElement]):
        if not coeffs:
            raise ValueError("f needs at least the leading coefficient")
        self.A = A
        self.f = [c if isinstance(c, AlgebraElement) else A.one * Scalar.coerce(c) for c in coeffs]
        self.l = len(self.f) - 1
        if self.f[0] != A.one:
            raise ValueError("f must be monic (f_0 = 1)")
        for i, c in enumerate(self.f):
            if c.parity != 0:
                raise ValueError(f"f_{i} must be even")
            if not A.is_central(c):
                raise ValueError(f"f_{i} must be central")
        last = self.f[-1]
        self.f_last = _unit_multiple(A, last)
        if self.f_last is None or not self.f_last:
            raise ValueError("f_l must be a nonzero scalar multiple of 1")

    @classmethod
    def from_scalars(cls, A, coeffs) -> "CyclotomicParams":
        return cls(A, [A.one * Scalar.coerce(c) for c in coeffs])

    @classmethod
    def from_json(cls, A, data) -> "CyclotomicParams":
        if isinstance(data, str):
            data = json.loads(data)
        coeffs = [A.element(v) for v in data["coefficients"]]
        if len(coeffs) != int(data.get("level", len(coeffs) - 1)) + 1:
            raise ValueError("level does not match the number of coefficients")
        return cls(A, coeffs)

    def to_json(self):
        return {"level": self.l, "coefficients": [[str(c) for c in e.coords] for e in self.f]}

    def satisfies_action_condition(self, t=None) -> bool:
        """True if ``f_l = t^2``, the condition needed for the categorical action."""
        from heiscat.core import T

        t = T if t is None else t
        return self.f_last == t * t

    def __repr__(self):
        return f"CyclotomicParams(l={self.l}, f={[str(c) for c in self.f]})"


def _unit_multiple(A, a):
    u = A.unit_index()
    s = a.support()
    if not s:
        return ZERO
    if set(s) != {u}:
        return None
    return s[u]


def default_params(A, l: int, t_squared=True) -> CyclotomicParams:
    """A generic-looking choice: ``f(w) = w^l + t^2`` (or ``w^l + 2`` when not tied to t)."""
    from heiscat.core import T

    if l == 0:
        return CyclotomicParams.from_scalars(A, [1])
    last = T * T if t_squared else Scalar.const(2)
    coeffs = [1] + [0] * (l - 1) + [last]
    if l >= 2:
        coeffs[1] = Scalar.const(3)
    return CyclotomicParams.from_scalars(A, coeffs)


class CyclotomicAlgebra:
    """``QWA_n^f`` with reduced normal forms."""

    def __init__(self, params: CyclotomicParams, n: int):
        self.p = params
        self.A = params.A
        self.n = n
        self.l = params.l
        self.W = WreathAlgebra(self.A, n)
        self.unit = self.W.unit
        self.zero_r = self.W.zero_r
        self.one_tokens = self.W.one_tokens
        self.id_perm = self.W.id_perm
        self.degenerate = self.l == 0 and n > 0
        fl_inv = 1 / self.p.f_last if self.l else ZERO
        # f_i as token dicts on strand 1
        self._f_tokens = [self._strand1_terms(c) for c in self.p.f]
        self._fl_inv = fl_inv

    def _strand1_terms(self, a: AlgebraElement):
        out = []
        for k, c in a.support().items():
            t = list(self.one_tokens)
            if self.n:
                t[0] = k
            out.append((tuple(t), c))
        return out

    # elements ------------------------------------------------------------
    def element(self, terms) -> "CycElement":
        if self.degenerate:
            return CycElement(self, {})
        return CycElement(self, {m: c for m, c in terms.items() if c})

    def zero(self):
        return CycElement(self, {})

    def one(self):
        return self.element({(self.zero_r, self.one_tokens, self.id_perm): ONE})

    def basis(self) -> List[Mono]:
        """The monomial basis ``{x^r a sigma_g : 0 <= r_i < l}``."""
        if self.degenerate:
            return []
        return [
            (tuple(r), tuple(a), tuple(g))
            for g in permutations(range(self.n))
            for a in product(range(self.A.dim), repeat=self.n)
            for r in product(range(self.l), repeat=self.n)
        ]

    def dimension(self) -> int:
        return len(self.basis())

    def format_mono(self, m):
        return self.W.format_mono(m)

    def generator(self, kind, *args):
        return self.reduce(self.W.generator(kind, *args))

    def sigma(self, i):
        return self.reduce(self.W.sigma(i))

    def x(self, i, e=1):
        return self.reduce(self.W.x(i, e))

    def token(self, i, b):
        return self.reduce(self.W.token(i, b))

    # left action on reduced terms ---------------------------------------------
    def _add(self, out, key, c):
        v = out.get(key)
        out[key] = c if v is None else v + c

    def _lsigma(self, i, terms):
        return self.W._left_sigma(i, terms)

    def _lsigma_inv(self, i, terms):
        a = self.W._left_sigma(i, terms)
        b = self._ltokens_sum(self.W._tau_terms(i), terms)
        out = dict(a)
        for k, v in b.items():
            self._add(out, k, -(v * Z))
        return {k: v for k, v in out.items() if v}

    def _ltokens_sum(self, token_terms, terms):
        out: Dict[Mono, Scalar] = {}
        for (_, t, _), tc in token_terms.items():
            for (r, a, g), c in terms.items():
                for a2, c2 in self.W.token_product(t, a):
                    self._add(out, (r, a2, g), tc * c * c2)
        return {k: v for k, v in out.items() if v}

    def _ltokens(self, t, terms):
        if t == self.one_tokens:
            return terms
        return self.W._left_tokens(t, terms)

    def _lx1(self, e, terms):
        l = self.l
        out: Dict[Mono, Scalar] = {}
        for (r, a, g), c in terms.items():
            r1 = r[0] + e
            if 0 <= r1 < l:
                self._add(out, ((r1,) + r[1:], a, g), c)
                continue
            if r1 == l:
                # x_1^l = -(f_1 x_1^(l-1) + ... + f_l)
                for i in range(1, l + 1):
                    for t, fc in self._f_tokens[i]:
                        for a2, c2 in self.W.token_product(t, a):
                            self._add(out, ((l - i,) + r[1:], a2, g), -(c * fc * c2))
            else:
                # x_1^{-1} = -f_l^{-1} (x_1^(l-1) + f_1 x_1^(l-2) + ... + f_(l-1))
                for i in range(0, l):
                    for t, fc in self._f_tokens[i]:
                        for a2, c2 in self.W.token_product(t, a):
                            self._add(out, ((l - 1 - i,) + r[1:], a2, g), -(c * fc * c2 * self._fl_inv))
        return {k: v for k, v in out.items() if v}

    def _lx(self, j, e, terms):
        if j == 1:
            return self._lx1(e, terms)
        if e > 0:
            return self._lsigma(j - 1, self._lx(j - 1, e, self._lsigma(j - 1, terms)))
        return self._lsigma_inv(j - 1, self._lx(j - 1, e, self._lsigma_inv(j - 1, terms)))

    def _lx_power(self, j, m, terms):
        e = 1 if m > 0 else -1
        for _ in range(abs(m)):
            if not terms:
                break
            terms = self._lx(j, e, terms)
        return terms

    def left_mul_mono(self, mono: Mono, terms):
        if self.degenerate:
            return {}
        r, a, g = mono
        for i in reversed(reduced_word(g)):
            terms = self._lsigma(i, terms)
        terms = self._ltokens(a, terms)
        for j, m in enumerate(r):
            if m:
                terms = self._lx_power(j + 1, m, terms)
        return terms

    # public operations -------------------------------------------------------------
    def reduce(self, u: WreathElement) -> "CycElement":
        """Image of ``u`` in ``QWA_n^f``, in the reduced basis."""
        if self.degenerate:
            return self.zero()
        out: Dict[Mono, Scalar] = {}
        for (r, a, g), c in u.terms.items():
            base = {(self.zero_r, a, g): c}
            for j, m in enumerate(r):
                if m:
                    base = self._lx_power(j + 1, m, base)
            for k, v in base.items():
                self._add(out, k, v)
        return self.element(out)

    def mul(self, u, v) -> "CycElement":
        if self.degenerate:
            return self.zero()
        out: Dict[Mono, Scalar] = {}
        for m, c in u.terms.items():
            for k, val in self.left_mul_mono(m, v.terms).items():
                self._add(out, k, val * c)
        return self.element(out)

    def embed(self, u: "CycElement", target: "CyclotomicAlgebra") -> "CycElement":
        """The inclusion ``QWA_n^f -> QWA_m^f`` on new strands ``n+1..m``."""
        extra = target.n - self.n
        out = {}
        for (r, a, g), c in u.terms.items():
            out[(r + (0,) * extra, a + (self.unit,) * extra, g + tuple(range(self.n, target.n)))] = c
        return target.element(out)

    def restrict_mono(self, m: Mono):
        """Inverse of :meth:`embed` on a monomial of a larger algebra, or ``None`` if not in the image."""
        r, a, g = m
        n = self.n
        if any(r[n:]) or any(x != self.unit for x in a[n:]) or tuple(g[n:]) != tuple(range(n, len(g))):
            return None
        return (tuple(r[:n]), tuple(a[:n]), tuple(g[:n]))


@lru_cache(maxsize=None)
def cyclotomic_algebra(params: CyclotomicParams, n: int) -> CyclotomicAlgebra:
    return CyclotomicAlgebra(params, n)


class CycElement(WreathElement):
    """An element of ``QWA_n^f`` in reduced form."""

    __slots__ = ()

    def __mul__(self, other):
        if isinstance(other, WreathElement):
            return self.alg.mul(self, other)
        s = Scalar.coerce(other)
        return self.alg.element({m: c * s for m, c in self.terms.items()})


# coset data ------------------------------------------------------------------------


def coset_rep(n: int, j: int):
    """``c = s_n s_(n-1) ... s_j`` in ``S_(n+1)`` (identity when ``j = n+1``)."""
    g = tuple(range(n + 1))
    for i in range(n, j - 1, -1):
        g = perm_compose(g, simple(i, n + 1))
    return g


def left_coset_split(g) -> Tuple[Tuple[int, ...], int]:
    """Write ``g = h c_j`` with ``h`` fixing the last strand; return ``(h, j)``."""
    n1 = len(g)
    n = n1 - 1
    j = perm_inverse(g)[n] + 1
    c = coset_rep(n, j)
    h = perm_compose(g, perm_inverse(c))
    assert h[n] == n
    return h[:n], j


def right_coset_split(g) -> Tuple[int, Tuple[int, ...]]:
    """Write ``g = c'_j h`` with ``c'_j = s_j ... s_n`` and ``h`` fixing the last strand."""
    n1 = len(g)
    n = n1 - 1
    j = g[n] + 1
    c = perm_inverse(coset_rep(n, j))
    h = perm_compose(perm_inverse(c), g)
    assert h[n] == n
    return j, h[:n]


class InductionData:
    """``QWA_(n+1)^f`` as a free left ``QWA_n^f``-module.

    The basis is ``y = x_(n+1)^r b^(n+1) sigma_n ... sigma_j`` and every
    reduced monomial ``x^r a sigma_g`` equals ``(+-) (x^r' a' sigma_h) * y``.
    """

    def __init__(self, params: CyclotomicParams, n: int):
        self.small = cyclotomic_algebra(params, n)
        self.big = cyclotomic_algebra(params, n + 1)
        self.n = n
        A = params.A
        self.gens = [
            (r, b, j) for j in range(n + 1, 0, -1) for b in range(A.dim) for r in range(params.l)
        ]
        self.index = {y: k for k, y in enumerate(self.gens)}

    def gen_mono(self, y) -> Mono:
        r, b, j = y
        n = self.n
        big = self.big
        rr = (0,) * n + (r,)
        tt = big.one_tokens[:n] + (b,)
        return (rr, tt, coset_rep(n, j))

    def split(self, m: Mono):
        """``m = sign * small_mono * y``; returns ``(sign, small_mono, y)``."""
        r, a, g = m
        n = self.n
        h, j = left_coset_split(g)
        par = self.big.A.parity
        sign = -1 if par[a[n]] and (sum(par[x] for x in a[:n]) & 1) else 1
        return sign, (r[:n], a[:n], h), (r[n], a[n], j)

    def decompose(self, u: CycElement) -> Dict[Tuple, Dict[Mono, Scalar]]:
        """``u = sum_y u_y * y`` with ``u_y`` in ``QWA_n^f``."""
        out: Dict[Tuple, Dict[Mono, Scalar]] = {}
        for m, c in u.terms.items():
            sign, sm, y = self.split(m)
            d = out.setdefault(y, {})
            d[sm] = d.get(sm, ZERO) + (c if sign == 1 else -c)
        return out


@lru_cache(maxsize=None)
def induction_data(params: CyclotomicParams, n: int) -> InductionData:
    return InductionData(params, n)


# Mackey decomposition and trace ------------------------------------------------------------


class MackeyDecomposition:
    """Result of :func:`mackey_decompose` for ``u`` in ``QWA_(n+1)^f``.

    ``sigma_part`` is a list of pairs ``(v, w)`` with ``u = sum v sigma_n w + ...``
    and ``w_part`` maps ``(r, b)`` to ``w_(r,b)`` in ``QWA_n^f``.
    """

    def __init__(self, sigma_part, w_part):
        self.sigma_part = sigma_part
        self.w_part = w_part


def mackey_decompose(u: CycElement, params: CyclotomicParams) -> MackeyDecomposition:
    big = u.alg
    n = big.n - 1
    small = cyclotomic_algebra(params, n)
    A = params.A
    par = A.parity
    sigma_part: List[Tuple[CycElement, CycElement]] = []
    w_part: Dict[Tuple[int, int], CycElement] = {}

    def add_w(key, elem):
        w_part[key] = w_part[key] + elem if key in w_part else elem

    for (r, a, g), c in u.terms.items():
        s = r[n]
        b = a[n]
        rp, ap = r[:n], a[:n]
        j, h = right_coset_split(g)
        if j == n + 1:
            add_w((s, b), small.element({(rp, ap, h): c}))
            continue
        # u = x^r a sigma_j ... sigma_(n-1) sigma_n sigma_h
        g_v = perm_inverse(coset_rep(n - 1, j)) if j <= n - 1 else tuple(range(n))
        if j == n:
            g_v = tuple(range(n))
        V = small.element({(rp, ap, g_v): ONE})
        pv = sum(par[x] for x in ap) & 1
        sign = -1 if (par[b] and pv) else 1
        cs = c if sign == 1 else -c
        # x_(n+1)^s b^(n+1) sigma_n = sigma_n x_n^s b^(n) + z sum_k tau_n x_n^k x_(n+1)^(s-k) b^(n)
        rw = (0,) * (n - 1) + (s,) if n >= 1 else ()
        tw = small.one_tokens[:-1] + (b,) if n >= 1 else ()
        W_right = small.element({(rw, tw, h): ONE})
        sigma_part.append((V * cs, W_right))
        for k in range(s):
            for (cidx, cv_idx), cc in A.casimir.items():
                # tau_n = sum_c c^(n+1) (c^v)^(n); c^v b on strand n
                prod = A.basis_product(cv_idx, b)
                for e, pc in prod.items():
                    rk = (0,) * (n - 1) + (k,)
                    tk = small.one_tokens[:-1] + (e,)
                    tail = small.mul(V, small.element({(rk, tk, h): ONE}))
                    sg = -1 if (par[cidx] and (pv ^ 0)) else 1
                    # moving c^(n+1) to the left of V
                    add_w((s - k, cidx), tail * (cs * cc * pc * Z * sg))
    return MackeyDecomposition(sigma_part, w_part)


def mackey_assemble(dec: MackeyDecomposition, params: CyclotomicParams, n: int) -> CycElement:
    small = cyclotomic_algebra(params, n)
    big = cyclotomic_algebra(params, n + 1)
    out = big.zero()
    sig = big.sigma(n) if n >= 1 else None
    for v, w in dec.sigma_part:
        out = out + big.mul(big.mul(small.embed(v, big), sig), small.embed(w, big))
    for (r, b), w in dec.w_part.items():
        rr = (0,) * n + (r,)
        tt = big.one_tokens[:n] + (b,)
        out = out + big.mul(big.element({(rr, tt, big.id_perm): ONE}), small.embed(w, big))
    return out


def trace(u: CycElement, params: CyclotomicParams) -> CycElement:
    """``tr_(n+1)^f(u)`` in ``QWA_n^f``."""
    n = u.alg.n - 1
    small = cyclotomic_algebra(params, n)
    dec = mackey_decompose(u, params)
    out = small.zero()
    for (r, b), w in dec.w_part.items():
        if r == 0:
            tb = params.A.trace[b]
            if tb:
                out = out + w * tb
    return out


def dimension(params: CyclotomicParams, n: int) -> int:
    """``(l dim A)^n n!`` computed by enumerating the basis."""
    return cyclotomic_algebra(params, n).dimension()


def f_of_x(params: CyclotomicParams, n: int, j: int) -> CycElement:
    """``f(x_j)`` computed in ``QWA_n^f``."""
    alg = cyclotomic_algebra(params, n)
    W = alg.W
    u = W.zero()
    l = params.l
    for i, c in enumerate(params.f):
        for k, cc in c.support().items():
            u = u + W.x(j, l - i) * W.token(j, k) * cc if l - i else u + W.token(j, k) * cc
    return alg.reduce(u)


def marbleface_matrix(params: CyclotomicParams, n: int):
    """Matrix of the Mackey map into ``QWA_(n+1)^f`` on explicit bases.

    Columns are indexed by ``u (x) y`` (``u`` in the basis of ``QWA_n^f``,
    ``y`` in the left basis of ``QWA_n^f`` over ``QWA_(n-1)^f``) followed by
    ``x_(n+1)^r b^(n+1) w`` for ``w`` in the basis of ``QWA_n^f``.
    """
    small = cyclotomic_algebra(params, n)
    big = cyclotomic_algebra(params, n + 1)
    rows = big.basis()
    index = {m: i for i, m in enumerate(rows)}
    cols = []
    if n >= 1:
        ind = induction_data(params, n - 1)
        sig = big.sigma(n)
        for um in small.basis():
            u = small.embed(small.element({um: ONE}), big)
            us = big.mul(u, sig)
            for y in ind.gens:
                yv = small.embed(small.element({ind.gen_mono(y): ONE}), big)
                cols.append(big.mul(us, yv))
    for r in range(params.l):
        for b in range(params.A.dim):
            rr = (0,) * n + (r,)
            tt = big.one_tokens[:n] + (b,)
            head = big.element({(rr, tt, big.id_perm): ONE})
            for wm in small.basis():
                cols.append(big.mul(head, small.embed(small.element({wm: ONE}), big)))
    mat = [[ZERO] * len(cols) for _ in rows]
    for k, col in enumerate(cols):
        for m, c in col.terms.items():
            mat[index[m]][k] = c
    return mat
