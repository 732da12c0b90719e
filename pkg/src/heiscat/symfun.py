"""The coefficient ring ``Sym(A) ⊗ Sym(A)`` and the bubble dictionary.

``Sym(A)`` is the free supercommutative algebra on ``C(A)[x]``; we use the
generators ``e_n(a_j)`` (``n >= 1``, ``a_j`` running over the chosen cocenter
basis) on each side ``L`` (first tensor factor) and ``R`` (second).  The
complete symmetric functions ``h_n`` are always expanded into ``e``'s.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from functools import lru_cache
from typing import Dict, List, Tuple

from heiscat.core import ONE, ZERO, T, Z, Scalar, parse_scalar
from heiscat.frobenius import AlgebraElement, FrobeniusSuperalgebra

Gen = Tuple[str, int, int]  # (side, degree, cocenter index)
SMono = Tuple[Tuple[Gen, int], ...]

DEFAULT_TRUNCATION = 8


class SymElement:
    """A supercommutative polynomial in the ``E[side, n, j]`` with Scalar coefficients."""

    __slots__ = ("A", "terms")

    def __init__(self, A: FrobeniusSuperalgebra, terms: Dict[SMono, Scalar]):
        self.A = A
        self.terms = {m: c for m, c in terms.items() if c}

    @classmethod
    def scalar(cls, A, c) -> "SymElement":
        c = Scalar.coerce(c)
        return cls(A, {(): c} if c else {})

    @classmethod
    def gen(cls, A, side: str, n: int, j: int) -> "SymElement":
        return cls(A, {(((side, n, j), 1),): ONE})

    def parity_of(self, g: Gen) -> int:
        reps = self.A.cocenter_basis()
        return self.A.parity[reps[g[2]]]

    def is_zero(self):
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def __add__(self, other):
        if not isinstance(other, SymElement):
            other = SymElement.scalar(self.A, other)
        out = dict(self.terms)
        for m, c in other.terms.items():
            out[m] = out[m] + c if m in out else c
        return SymElement(self.A, out)

    __radd__ = __add__

    def __neg__(self):
        return SymElement(self.A, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        if not isinstance(other, SymElement):
            other = SymElement.scalar(self.A, other)
        return self + (-other)

    def __mul__(self, other):
        if not isinstance(other, SymElement):
            s = Scalar.coerce(other)
            return SymElement(self.A, {m: c * s for m, c in self.terms.items()})
        out: Dict[SMono, Scalar] = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                res = _mono_mul(self, m1, m2)
                if res is None:
                    continue
                sign, m = res
                v = c1 * c2 if sign == 1 else -(c1 * c2)
                out[m] = out[m] + v if m in out else v
        return SymElement(self.A, out)

    def __rmul__(self, other):
        s = Scalar.coerce(other)
        return SymElement(self.A, {m: s * c for m, c in self.terms.items()})

    def __eq__(self, other):
        if not isinstance(other, SymElement):
            try:
                other = SymElement.scalar(self.A, other)
            except (TypeError, ValueError):
                return NotImplemented
        return self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def map_scalars(self, fn) -> "SymElement":
        return SymElement(self.A, {m: fn(c) for m, c in self.terms.items()})

    def is_scalar(self) -> bool:
        return all(m == () for m in self.terms)

    def scalar_part(self) -> Scalar:
        return self.terms.get((), ZERO)

    def degree(self) -> int:
        return max((sum(g[1] * e for g, e in m) for m in self.terms), default=0)

    def __str__(self):
        if not self.terms:
            return "0"
        reps = self.A.cocenter_basis()
        pieces = []
        for m in sorted(self.terms, key=lambda m: (len(m), m)):
            c = self.terms[m]
            gens = []
            for (side, n, j), e in m:
                g = f"e{side}[{n}]({self.A.basis[reps[j]]})"
                gens.append(g if e == 1 else f"{g}^{e}")
            body = "*".join(gens)
            if not body:
                txt = str(c)
                txt = txt if (len(c.num) == 1 and c.den is None) else f"({txt})"
            elif c == ONE:
                txt = body
            elif c == -ONE:
                txt = "-" + body
            else:
                txt = f"{c.atom_str()}*{body}"
            pieces.append(txt)
        s = pieces[0]
        for p in pieces[1:]:
            s += " - " + p[1:] if p.startswith("-") else " + " + p
        return s

    __repr__ = __str__

    def to_json(self):
        reps = self.A.cocenter_basis()
        return [
            {"coeff": str(c), "gens": [[side, n, self.A.basis[reps[j]], e] for (side, n, j), e in m]}
            for m, c in sorted(self.terms.items(), key=lambda kv: (len(kv[0]), kv[0]))
        ]

    @classmethod
    def from_json(cls, A, data) -> "SymElement":
        reps = A.cocenter_basis()
        out = SymElement(A, {})
        for item in data:
            term = SymElement.scalar(A, parse_scalar(item["coeff"]))
            for side, n, name, e in item["gens"]:
                j = reps.index(A.index(name))
                for _ in range(e):
                    term = term * SymElement.gen(A, side, n, j)
            out = out + term
        return out


def _mono_mul(x: SymElement, m1: SMono, m2: SMono):
    if not m1:
        return 1, m2
    if not m2:
        return 1, m1
    sign = 1
    # sign from moving odd generators of m2 past odd generators of m1 that sort after them
    odd1 = [g for g, e in m1 if e and x.parity_of(g)]
    for g2, e2 in m2:
        if x.parity_of(g2):
            for g1 in odd1:
                if g1 > g2:
                    sign = -sign
    merged: Dict[Gen, int] = dict(m1)
    for g, e in m2:
        merged[g] = merged.get(g, 0) + e
    for g, e in merged.items():
        if e > 1 and x.parity_of(g):
            return None
    return sign, tuple(sorted(merged.items()))


def parse_sym(A, text: str) -> SymElement:
    """Parse the printed form ``coeff*eL[n](a)*eR[m](b)^2 + ...``."""
    reps = A.cocenter_basis()
    text = text.strip()
    if text == "0":
        return SymElement(A, {})
    out = SymElement(A, {})
    for sign, term in _split_top(text):
        val = SymElement.scalar(A, sign)
        for factor in _split_factors(term):
            m = re.fullmatch(r"e([LR])\[(\d+)\]\(([^()]+)\)(?:\^(\d+))?", factor.strip())
            if m:
                j = reps.index(A.index(m.group(3)))
                g = SymElement.gen(A, m.group(1), int(m.group(2)), j)
                for _ in range(int(m.group(4) or 1)):
                    val = val * g
            else:
                val = val * parse_scalar(factor)
        out = out + val
    return out


def _split_top(text):
    depth, cur, sign, out, prev = 0, "", 1, [], ""
    for ch in text:
        if ch in "([":
            depth += 1
        elif ch in ")]":
            depth -= 1
        if depth == 0 and ch in "+-" and cur.strip() and prev not in "^*/":
            out.append((sign, cur))
            sign = 1 if ch == "+" else -1
            cur = ""
            continue
        if depth == 0 and ch == "-" and not cur.strip():
            sign = -sign
            continue
        cur += ch
        if not ch.isspace():
            prev = ch
    if cur.strip():
        out.append((sign, cur))
    return out


def _split_factors(term):
    depth, cur, out = 0, "", []
    for ch in term:
        if ch in "([":
            depth += 1
        elif ch in ")]":
            depth -= 1
        if ch == "*" and depth == 0:
            out.append(cur)
            cur = ""
            continue
        cur += ch
    out.append(cur)
    return [p for p in out if p.strip()]


# e and h -------------------------------------------------------------------


def e_of(A: FrobeniusSuperalgebra, a: AlgebraElement, n: int, side: str = "L") -> SymElement:
    """``e_n(a)`` on the given side."""
    if n < 0:
        return SymElement(A, {})
    if n == 0:
        return SymElement.scalar(A, A.tr(a))
    out: Dict[SMono, Scalar] = {}
    for j, c in enumerate(A.cocenter_coords(a)):
        if c:
            out[(((side, n, j), 1),)] = c
    return SymElement(A, out)


class HTable:
    """``h_n(b)`` for all basis ``b`` and ``0 <= n <= N``, solved from the e/h duality."""

    def __init__(self, A: FrobeniusSuperalgebra, side: str = "L", N: int = DEFAULT_TRUNCATION):
        self.A = A
        self.side = side
        self.N = N
        d = A.dim
        self.table: List[List[SymElement]] = []
        # n = 0: tr(ac) h_0(c^v b) summed over c equals h_0(ab), so h_0 = tr
        self.table.append([SymElement.scalar(A, A.trace[i]) for i in range(d)])
        for n in range(1, N + 1):
            row = []
            for i in range(d):
                row.append(self._solve(n, i))
            self.table.append(row)

    def h(self, n: int, a: AlgebraElement) -> SymElement:
        if n < 0:
            return SymElement(self.A, {})
        if n > self.N:
            raise ValueError(f"h_{n} exceeds the truncation bound {self.N}")
        out = SymElement(self.A, {})
        for i, c in a.support().items():
            out = out + self.table[n][i] * c
        return out

    def _solve(self, n, i):
        # h_n(b) = sum_c sum_{p=1..n} (-1)^(p-1) e_p(c) h_(n-p)(c^v b)
        A = self.A
        b = A.basis_element(i)
        out = SymElement(A, {})
        for c in range(A.dim):
            cc = A.basis_element(c)
            cvb = A.mul(A.dual(c), b)
            for p in range(1, n + 1):
                term = e_of(A, cc, p, self.side) * self.h(n - p, cvb)
                out = out + term if p % 2 == 1 else out - term
        return out


@lru_cache(maxsize=None)
def h_table(A: FrobeniusSuperalgebra, side: str = "L", N: int = DEFAULT_TRUNCATION) -> HTable:
    return HTable(A, side, N)


def h_from_e(A: FrobeniusSuperalgebra, side: str = "L", N: int = DEFAULT_TRUNCATION):
    """Table ``[[h_n(b_j) for j] for n in 0..N]``."""
    return h_table(A, side, N).table


def h_of(A, a: AlgebraElement, n: int, side: str = "L", N: int = DEFAULT_TRUNCATION) -> SymElement:
    return h_table(A, side, max(N, n)).h(n, a)


def banana_defect(A, a: AlgebraElement, b: AlgebraElement, n: int, side="L", N=DEFAULT_TRUNCATION) -> SymElement:
    """``sum_c sum_{p+q=n} (-1)^p e_p(ac) h_q(c^v b) - delta_{n,0} tr(ab)`` (should vanish)."""
    out = SymElement(A, {})
    for c in range(A.dim):
        ac = A.mul(a, A.basis_element(c))
        cvb = A.mul(A.dual(c), b)
        for p in range(0, n + 1):
            term = e_of(A, ac, p, side) * h_of(A, cvb, n - p, side, N)
            out = out + term if p % 2 == 0 else out - term
    if n == 0:
        out = out - SymElement.scalar(A, A.tr(A.mul(a, b)))
    return out


# bubbles ------------------------------------------------------------------------


CW, CCW = "cw", "ccw"
PLUS, MINUS, GENUINE = "+", "-", "0"


@dataclass(frozen=True)
class BubbleSymbol:
    """A (fake or genuine) bubble: orientation, sign decoration, token, dots."""

    orientation: str
    sign: str
    token: AlgebraElement
    dots: int

    def __post_init__(self):
        if self.orientation not in (CW, CCW):
            raise ValueError("orientation must be 'cw' or 'ccw'")
        if self.sign not in (PLUS, MINUS, GENUINE):
            raise ValueError("sign must be '+', '-' or '0'")


def bubble_value(s: BubbleSymbol, k: int, N: int = DEFAULT_TRUNCATION) -> SymElement:
    """Image of a bubble in ``Sym(A) ⊗ Sym(A)`` at central charge ``k``."""
    A = s.token.alg
    if s.sign == GENUINE:
        return bubble_value(BubbleSymbol(s.orientation, PLUS, s.token, s.dots), k, N) + bubble_value(
            BubbleSymbol(s.orientation, MINUS, s.token, s.dots), k, N
        )
    a, n = s.token, s.dots
    trz = A.tr(a) / Z
    zero = SymElement(A, {})
    if s.sign == PLUS and s.orientation == CCW:
        if n < -k:
            return zero
        if n == -k:
            return SymElement.scalar(A, T * trz)
        p = n + k
        return e_of(A, a, p, "L") * (T / Z * (1 if p % 2 == 0 else -1))
    if s.sign == PLUS and s.orientation == CW:
        if n < k:
            return zero
        if n == k:
            return SymElement.scalar(A, -(T.inverse() * trz))
        return h_of(A, a, n - k, "L", N) * (-(T.inverse() / Z))
    if s.sign == MINUS and s.orientation == CCW:
        if n > 0:
            return zero
        if n == 0:
            return SymElement.scalar(A, -(T.inverse() * trz))
        p = -n
        return e_of(A, a, p, "R") * (T.inverse() / Z * (1 if p % 2 == 1 else -1))
    # minus clockwise
    if n > 0:
        return zero
    if n == 0:
        return SymElement.scalar(A, T * trz)
    return h_of(A, a, -n, "R", N) * (T / Z)


def genuine_bubble(A, orientation: str, a: AlgebraElement, dots: int, k: int, N=DEFAULT_TRUNCATION) -> SymElement:
    return bubble_value(BubbleSymbol(orientation, GENUINE, a, dots), k, N)


def grassmannian_check(A, k: int, n: int, a: AlgebraElement, b: AlgebraElement, which: str = PLUS, N=DEFAULT_TRUNCATION):
    """Teleporter-coupled bubble pairs summed over ``r + s = n``.

    ``which`` selects the (+)-pair or the (-)-pair; the result should be
    ``-delta_{n,0} tr(ab)/z``.
    """
    if which == PLUS:
        rs = range(-k, n - k + 1)
    else:
        rs = range(n, 1)
    out = SymElement(A, {})
    for r in rs:
        s = n - r
        for (c, cv), coeff in A.casimir.items():
            ac = A.mul(a, A.basis_element(c))
            cvb = A.mul(A.basis_element(cv), b)
            left = bubble_value(BubbleSymbol(CCW, which, ac, r), k, N)
            if left.is_zero():
                continue
            right = bubble_value(BubbleSymbol(CW, which, cvb, s), k, N)
            out = out + left * right * (coeff * Z)
    return out


def _superdet(entry, r):
    # Laplace expansion along the first column, factors kept in column order
    def det(rows, col):
        if not rows:
            return None
        out = None
        for idx, row in enumerate(rows):
            minor = det(rows[:idx] + rows[idx + 1:], col + 1)
            term = entry(row, col) if minor is None else entry(row, col) * minor
            term = term if idx % 2 == 0 else -term
            out = term if out is None else out + term
        return out

    return det(list(range(1, r + 1)), 1)


def plus_bubble_by_determinant(orientation: str, a: AlgebraElement, r: int, k: int, N=DEFAULT_TRUNCATION) -> SymElement:
    """Plus bubbles with few dots as determinants of genuine bubbles of the other orientation.

    ``orientation='ccw'`` gives the (+)-ccw bubble with ``r-k`` dots (needs ``r <= k``),
    ``'cw'`` the (+)-cw bubble with ``r+k`` dots (needs ``r <= -k``).
    """
    A = a.alg
    if r < 0:
        return SymElement(A, {})
    if orientation == CCW:
        if r > k:
            raise ValueError("determinant formula needs r <= k")
        prefactor = Z ** (r - 1) * T ** (r + 1)
    else:
        if r > -k:
            raise ValueError("determinant formula needs r <= -k")
        prefactor = -(Z ** (r - 1) * T ** (-r - 1))
    if r == 0:
        return SymElement.scalar(A, A.tr(a) * prefactor)
    d = A.dim
    total = SymElement(A, {})
    for bs in _tuples(d, r - 1):
        def token(j):
            left = a if j == 1 else A.dual(bs[j - 2])
            right = A.one if j == r else A.basis_element(bs[j - 1])
            return A.mul(left, right)

        if orientation == CCW:
            def entry(i, j):
                return genuine_bubble(A, CW, token(j), i - j + k + 1, k, N)
        else:
            def entry(i, j):
                return -genuine_bubble(A, CCW, token(j), i - j - k + 1, k, N)

        total = total + _superdet(entry, r)
    return total * prefactor


def _tuples(d, m):
    if m == 0:
        yield ()
        return
    for head in range(d):
        for rest in _tuples(d, m - 1):
            yield (head,) + rest


def h_determinant_trivial(n: int, A=None) -> SymElement:
    """Classical ``h_n = det(e_{1-i+j})`` for ``A`` the ground field (cross-check)."""
    from heiscat.frobenius import builtin

    A = A or builtin("trivial")
    one = A.one
    if n == 0:
        return SymElement.scalar(A, 1)

    def entry(i, j):
        return e_of(A, one, 1 - i + j, "L")

    def det(rows, cols):
        if not rows:
            return SymElement.scalar(A, 1)
        out = SymElement(A, {})
        c0 = cols[0]
        for idx, r in enumerate(rows):
            minor = det(rows[:idx] + rows[idx + 1:], cols[1:])
            term = entry(r, c0) * minor
            out = out + term if idx % 2 == 0 else out - term
        return out

    return det(list(range(n)), list(range(n)))
