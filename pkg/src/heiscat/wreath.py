"""Normal forms in quantum (affine) wreath product algebras.

A monomial is a triple ``(r, a, g)`` standing for ``x^r * a * sigma_g`` where
``r`` is a tuple of integer exponents, ``a`` a tuple of basis indices of the
Frobenius algebra (one per strand) and ``g`` a permutation in one-line form.
Index ``j`` of each tuple is strand ``j + 1``; strands are numbered from right
to left as in the diagrams.

Products are computed by multiplying on the left one generator at a time.
The only nontrivial rule is the one that moves a crossing past dots::

    sigma_i f = s_i(f) sigma_i + z tau_i D_i(f)

with ``D_i(f) = (s_i f - f) x_{i+1} / (x_i - x_{i+1})``, which is forced by
``sigma_i x_i sigma_i = x_{i+1}`` and the quadratic relation.
"""

from __future__ import annotations

import re
from functools import lru_cache
from typing import Dict, List, Tuple

from heiscat.core import ONE, ZERO, Z, Scalar, parse_scalar
from heiscat.frobenius import FrobeniusSuperalgebra

Mono = Tuple[Tuple[int, ...], Tuple[int, ...], Tuple[int, ...]]


# permutations -------------------------------------------------------------


def perm_length(g) -> int:
    n = len(g)
    return sum(1 for i in range(n) for j in range(i + 1, n) if g[i] > g[j])


def perm_compose(g, h):
    """``(g h)(j) = g(h(j))``."""
    return tuple(g[h[j]] for j in range(len(h)))


def perm_inverse(g):
    inv = [0] * len(g)
    for j, v in enumerate(g):
        inv[v] = j
    return tuple(inv)


def simple(i: int, n: int):
    """The transposition ``s_i`` (1-based) in one-line form."""
    g = list(range(n))
    g[i - 1], g[i] = g[i], g[i - 1]
    return tuple(g)


def left_descent(i: int, g) -> bool:
    """True if ``l(s_i g) < l(g)``."""
    inv = perm_inverse(g)
    return inv[i - 1] > inv[i]


def reduced_word(g) -> List[int]:
    """Reduced word ``[i1, ..., ik]`` with ``g = s_i1 ... s_ik``, leftmost descent first."""
    word = []
    g = tuple(g)
    n = len(g)
    while True:
        for i in range(1, n):
            if left_descent(i, g):
                word.append(i)
                g = perm_compose(simple(i, n), g)
                break
        else:
            return word


# dot slides ---------------------------------------------------------------


def divided_difference(i: int, r: Tuple[int, ...]) -> List[Tuple[int, Tuple[int, ...]]]:
    """``D_i(x^r)`` as a list of ``(sign, exponent)`` pairs."""
    a, b = r[i - 1], r[i]
    if a == b:
        return []
    m = min(a, b)
    d = abs(a - b)
    sign = 1 if b > a else -1
    out = []
    base = list(r)
    for j in range(d):
        e = list(base)
        e[i - 1] = m + j
        e[i] = m + d - 1 - j + 1
        out.append((sign, tuple(e)))
    return out


def swap_exponents(i: int, r):
    r = list(r)
    r[i - 1], r[i] = r[i], r[i - 1]
    return tuple(r)


# the algebra ----------------------------------------------------------------


class WreathAlgebra:
    """``QAWA_n(A; z)``; the finite algebra ``QWA_n`` is the span of ``r = 0``."""

    def __init__(self, A: FrobeniusSuperalgebra, n: int):
        if n < 0:
            raise ValueError("strand count must be nonnegative")
        self.A = A
        self.n = n
        u = A.unit_index()
        if u is None:
            raise ValueError("the unit must be a basis element of A")
        self.unit = u
        self.id_perm = tuple(range(n))
        self.one_tokens = (u,) * n
        self.zero_r = (0,) * n

    # elements -------------------------------------------------------------
    def element(self, terms: Dict[Mono, Scalar]) -> "WreathElement":
        return WreathElement(self, {m: c for m, c in terms.items() if c})

    def zero(self):
        return WreathElement(self, {})

    def one(self):
        return WreathElement(self, {(self.zero_r, self.one_tokens, self.id_perm): ONE})

    def monomial(self, r=None, tokens=None, perm=None, coeff=ONE):
        r = tuple(r) if r is not None else self.zero_r
        tokens = tuple(tokens) if tokens is not None else self.one_tokens
        perm = tuple(perm) if perm is not None else self.id_perm
        return self.element({(r, tokens, perm): Scalar.coerce(coeff)})

    def _check(self, i, top):
        if not 1 <= i <= top:
            raise IndexError(f"strand index {i} out of range 1..{top} for n={self.n}")

    def sigma(self, i: int):
        self._check(i, self.n - 1)
        return self.monomial(perm=simple(i, self.n))

    def sigma_inv(self, i: int):
        return self.sigma(i) - self.tau(i) * Z

    def x(self, i: int, e: int = 1):
        self._check(i, self.n)
        r = [0] * self.n
        r[i - 1] = e
        return self.monomial(r=r)

    def token(self, i: int, b):
        self._check(i, self.n)
        if isinstance(b, str):
            b = self.A.index(b)
        if not isinstance(b, int):
            out = self.zero()
            for j, c in b.support().items():
                out = out + self.token(i, j) * c
            return out
        t = list(self.one_tokens)
        t[i - 1] = b
        return self.monomial(tokens=t)

    def generator(self, kind: str, *args):
        if kind == "sigma":
            return self.sigma(*args)
        if kind == "x":
            return self.x(*args)
        if kind == "token":
            return self.token(*args)
        raise ValueError(f"unknown generator kind {kind!r}")

    def tau(self, i: int):
        self._check(i, self.n - 1)
        return self.element(self._tau_terms(i))

    # token arithmetic ----------------------------------------------------------
    @lru_cache(maxsize=None)
    def _tau_terms(self, i):
        out = {}
        for (b, bv), c in self.A.casimir.items():
            t = list(self.one_tokens)
            t[i] = b
            t[i - 1] = bv
            key = (self.zero_r, tuple(t), self.id_perm)
            out[key] = out.get(key, ZERO) + c
        return out

    @lru_cache(maxsize=None)
    def token_product(self, u: Tuple[int, ...], v: Tuple[int, ...]) -> Tuple[Tuple[Tuple[int, ...], Scalar], ...]:
        """``u * v`` for token tuples, with the super sign."""
        par = self.A.parity
        sign = 0
        for i in range(self.n):
            if par[u[i]]:
                for j in range(i + 1, self.n):
                    sign ^= par[v[j]]
        acc: Dict[Tuple[int, ...], Scalar] = {(): (-ONE if sign else ONE)}
        for i in range(self.n):
            prod = self.A.basis_product(u[i], v[i])
            nxt = {}
            for t, c in acc.items():
                for k, ck in prod.items():
                    key = t + (k,)
                    nxt[key] = nxt.get(key, ZERO) + c * ck
            acc = {t: c for t, c in nxt.items() if c}
        return tuple(acc.items())

    @lru_cache(maxsize=None)
    def permute_tokens(self, g, a) -> Tuple[Tuple[int, ...], int]:
        """``g(a)`` and its superpermutation sign."""
        out = [0] * self.n
        for j in range(self.n):
            out[g[j]] = a[j]
        par = self.A.parity
        sign = 1
        odd = [j for j in range(self.n) if par[a[j]]]
        for p in range(len(odd)):
            for q in range(p + 1, len(odd)):
                if g[odd[p]] > g[odd[q]]:
                    sign = -sign
        return tuple(out), sign

    # left multiplication by generators ------------------------------------------
    def _left_sigma(self, i: int, terms: Dict[Mono, Scalar]) -> Dict[Mono, Scalar]:
        out: Dict[Mono, Scalar] = {}
        s = simple(i, self.n)
        tau = self._tau_terms(i)

        def add(key, c):
            v = out.get(key)
            out[key] = c if v is None else v + c

        for (r, a, g), c in terms.items():
            # sigma_i x^r = x^{s_i r} sigma_i + z tau_i D_i(x^r)
            sa, sgn = self.permute_tokens(s, a)
            cs = c if sgn == 1 else -c
            r2 = swap_exponents(i, r)
            if left_descent(i, g):
                g2 = perm_compose(s, g)
                add((r2, sa, g2), cs)
                for (_, ta, _), tc in tau.items():
                    for a3, c3 in self.token_product(sa, ta):
                        add((r2, a3, g), cs * tc * c3 * Z)
            else:
                add((r2, sa, perm_compose(s, g)), cs)
            for sign, e in divided_difference(i, r):
                for (_, ta, _), tc in tau.items():
                    for a3, c3 in self.token_product(ta, a):
                        add((e, a3, g), c * tc * c3 * Z * sign)
        return {k: v for k, v in out.items() if v}

    def _left_tokens(self, t, terms):
        out: Dict[Mono, Scalar] = {}
        for (r, a, g), c in terms.items():
            for a2, c2 in self.token_product(t, a):
                key = (r, a2, g)
                out[key] = out.get(key, ZERO) + c * c2
        return {k: v for k, v in out.items() if v}

    def _left_x(self, r0, terms):
        return {(tuple(p + q for p, q in zip(r0, r)), a, g): c for (r, a, g), c in terms.items()}

    def left_mul_mono(self, mono: Mono, terms):
        r, a, g = mono
        for i in reversed(reduced_word(g)):
            terms = self._left_sigma(i, terms)
        if a != self.one_tokens:
            terms = self._left_tokens(a, terms)
        if any(r):
            terms = self._left_x(r, terms)
        return terms

    def mul(self, u: "WreathElement", v: "WreathElement") -> "WreathElement":
        if u.alg.n != v.alg.n or u.alg.A is not v.alg.A:
            raise ValueError("strand-count mismatch in product")
        out: Dict[Mono, Scalar] = {}
        for m, c in u.terms.items():
            for k, val in self.left_mul_mono(m, v.terms).items():
                w = val * c
                prev = out.get(k)
                out[k] = w if prev is None else prev + w
        return self.element(out)

    # embeddings ---------------------------------------------------------------
    def embed(self, u: "WreathElement", target: "WreathAlgebra") -> "WreathElement":
        """Image under ``QAWA_n -> QAWA_m`` adding strands on the left (higher indices)."""
        extra = target.n - self.n
        if extra < 0:
            raise ValueError("cannot embed into fewer strands")
        out = {}
        for (r, a, g), c in u.terms.items():
            out[(r + (0,) * extra, a + (self.unit,) * extra, g + tuple(range(self.n, target.n)))] = c
        return target.element(out)

    # text ------------------------------------------------------------------------
    def format_mono(self, m: Mono) -> str:
        r, a, g = m
        parts = []
        for j, e in enumerate(r):
            if e == 1:
                parts.append(f"x{j + 1}")
            elif e:
                parts.append(f"x{j + 1}^{e}")
        for j, b in enumerate(a):
            if b != self.unit:
                parts.append(f"tok({j + 1},{self.A.basis[b]})")
        parts.extend(f"s{i}" for i in reduced_word(g))
        return " * ".join(parts) if parts else "1"

    def parse(self, text: str) -> "WreathElement":
        """Parse ``x1^-2 * tok(2,c) * s1 * s2 + 3*z * ...``."""
        out = self.zero()
        for sign, term in _split_sum(text):
            val = self.one() * sign
            for factor in _split_product(term):
                val = val * self._parse_factor(factor)
            out = out + val
        return out

    def _parse_factor(self, f: str):
        f = f.strip()
        m = re.fullmatch(r"x(\d+)(?:\^\(?(-?\d+)\)?)?", f)
        if m:
            return self.x(int(m.group(1)), int(m.group(2) or 1))
        m = re.fullmatch(r"s(\d+)(?:\^\(?(-?\d+)\)?)?", f)
        if m:
            e = int(m.group(2) or 1)
            base = self.sigma(int(m.group(1))) if e > 0 else self.sigma_inv(int(m.group(1)))
            val = self.one()
            for _ in range(abs(e)):
                val = val * base
            return val
        m = re.fullmatch(r"tok\(\s*(\d+)\s*,\s*([^)]+?)\s*\)", f)
        if m:
            return self.token(int(m.group(1)), self.A.parse_element(m.group(2)))
        m = re.fullmatch(r"tau(\d+)", f)
        if m:
            return self.tau(int(m.group(1)))
        return self.one() * parse_scalar(f)


def _split_sum(text):
    depth = 0
    cur = ""
    sign = 1
    out = []
    prev = ""
    for ch in text:
        if ch in "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        if depth == 0 and ch in "+-" and prev not in ("^", "*", "/", ",", "") and cur.strip():
            out.append((sign, cur))
            sign = 1 if ch == "+" else -1
            cur = ""
            prev = ch
            continue
        if depth == 0 and ch == "-" and not cur.strip():
            sign = -sign
            prev = ch
            continue
        cur += ch
        if not ch.isspace():
            prev = ch
    if cur.strip():
        out.append((sign, cur))
    return out


def _split_product(term):
    depth = 0
    cur = ""
    out = []
    for ch in term:
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        if ch == "*" and depth == 0:
            out.append(cur)
            cur = ""
            continue
        cur += ch
    out.append(cur)
    # re-glue scalar divisions such as "1/z"
    return [p for p in out if p.strip()]


class WreathElement:
    """A finite linear combination of normal-form monomials."""

    __slots__ = ("alg", "terms")

    def __init__(self, alg: WreathAlgebra, terms: Dict[Mono, Scalar]):
        self.alg = alg
        self.terms = terms

    def __add__(self, other):
        out = dict(self.terms)
        for m, c in other.terms.items():
            v = out.get(m)
            out[m] = c if v is None else v + c
        return self.alg.element(out)

    def __neg__(self):
        return WreathElement(self.alg, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, WreathElement):
            return self.alg.mul(self, other)
        s = Scalar.coerce(other)
        return self.alg.element({m: c * s for m, c in self.terms.items()})

    def __rmul__(self, other):
        return self * other

    def __eq__(self, other):
        return isinstance(other, WreathElement) and self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def is_zero(self):
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def max_abs_exponent(self) -> int:
        return max((abs(e) for (r, _, _) in self.terms for e in r), default=0)

    def __str__(self):
        if not self.terms:
            return "0"
        pieces = []
        for m in sorted(self.terms, key=_mono_sort_key):
            c = self.terms[m]
            body = self.alg.format_mono(m)
            if body == "1":
                txt = str(c) if len(c.num) == 1 and c.den is None else c.atom_str()
            elif c == ONE:
                txt = body
            elif c == -ONE:
                txt = "-" + body
            else:
                txt = f"{c.atom_str()} * {body}"
            pieces.append(txt)
        s = pieces[0]
        for p in pieces[1:]:
            s += " - " + p[1:] if p.startswith("-") else " + " + p
        return s

    __repr__ = __str__


def _mono_sort_key(m):
    r, a, g = m
    return (perm_length(g), g, r, a)


# regular representation ------------------------------------------------------------


def finite_basis(W: WreathAlgebra) -> List[Mono]:
    """Monomial basis ``tokens x S_n`` of ``QWA_n``."""
    from itertools import permutations, product

    return [
        (W.zero_r, tuple(a), tuple(g))
        for g in permutations(range(W.n))
        for a in product(range(W.A.dim), repeat=W.n)
    ]


def regular_representation(W: WreathAlgebra):
    """Left-multiplication matrices of the generators of ``QWA_n`` on its monomial basis.

    Returns ``(basis, mats)`` where ``mats`` maps ``("sigma", i)`` and
    ``("token", i, b)`` to square matrices (columns are images of basis vectors).
    """
    basis = finite_basis(W)
    index = {m: k for k, m in enumerate(basis)}
    N = len(basis)

    def matrix_of(elem):
        M = [[ZERO] * N for _ in range(N)]
        for k, m in enumerate(basis):
            img = W.mul(elem, W.element({m: ONE}))
            for mm, c in img.terms.items():
                M[index[mm]][k] = c
        return M

    mats = {}
    for i in range(1, W.n):
        mats[("sigma", i)] = matrix_of(W.sigma(i))
    for i in range(1, W.n + 1):
        for b in range(W.A.dim):
            mats[("token", i, b)] = matrix_of(W.token(i, b))
    return basis, mats


def vector_of(W: WreathAlgebra, basis: List[Mono], u: WreathElement):
    index = {m: k for k, m in enumerate(basis)}
    v = [ZERO] * len(basis)
    for m, c in u.terms.items():
        v[index[m]] = c
    return v


def matvec(M, v):
    return [sum((a * b for a, b in zip(row, v) if a and b), ZERO) for row in M]
