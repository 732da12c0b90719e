"""Exact scalars in Q(z, t) and super sign bookkeeping.

A :class:`Scalar` is stored as ``num / den`` where ``num`` is a Laurent
polynomial in ``z, t`` (a dict from exponent pairs to rationals) and ``den``
is either ``None`` (meaning 1) or an ordinary polynomial with no monomial
factor and leading coefficient 1.  Almost every scalar met in practice has
``den is None``, so arithmetic usually stays inside the Laurent ring and never
needs a multivariate gcd.  The general case falls back to sympy's sparse
polynomial gcd.
"""

from __future__ import annotations

import re
from fractions import Fraction
from typing import Iterable, Union

from heiscat import _kernels

try:  # gmpy2 makes rational arithmetic several times faster
    from gmpy2 import mpq as Q
except ImportError:  # pragma: no cover - exercised only without gmpy2
    Q = Fraction

Number = Union[int, Fraction, "Scalar"]

__all__ = [
    "Scalar",
    "ZERO",
    "ONE",
    "Z",
    "T",
    "SpecializationError",
    "parse_scalar",
    "koszul_sign",
    "parity_sum",
]


class SpecializationError(ZeroDivisionError):
    """Raised when a denominator vanishes at the requested point."""

    def __init__(self, message: str, factor: str):
        super().__init__(message)
        self.factor = factor


def _key(e):
    return e


def _lead(den):
    return max(den)


def _sym_ring():
    from sympy.polys.domains import QQ
    from sympy.polys.rings import ring

    R, _, _ = ring("z,t", QQ)
    return R, QQ


_RING = None


def _ring():
    global _RING
    if _RING is None:
        _RING = _sym_ring()
    return _RING


def _to_sym(d, shift=(0, 0)):
    R, QQ = _ring()
    return R.from_dict({(a + shift[0], b + shift[1]): QQ(int(c.numerator), int(c.denominator)) for (a, b), c in d.items()})


def _from_sym(p):
    return {k: Q(int(v.numerator), int(v.denominator)) for k, v in p.to_dict().items()}


def _minexp(d):
    mz = min(a for a, _ in d)
    mt = min(b for _, b in d)
    return mz, mt


def _shift(d, sz, st):
    if sz == 0 and st == 0:
        return d
    return {(a + sz, b + st): c for (a, b), c in d.items()}


class Scalar:
    """An element of the rational function field Q(z, t)."""

    __slots__ = ("num", "den", "_hash")

    def __init__(self, num=None, den=None, _canonical=False):
        if num is None:
            num = {}
        self.num = num
        self.den = den
        self._hash = None
        if not _canonical:
            self._normalize()

    # construction -------------------------------------------------------
    @classmethod
    def const(cls, c) -> "Scalar":
        c = Q(c.numerator, c.denominator) if isinstance(c, Fraction) else Q(c)
        if c == 0:
            return ZERO
        return cls({(0, 0): c}, None, True)

    @classmethod
    def monomial(cls, c, ez: int = 0, et: int = 0) -> "Scalar":
        c = Q(c)
        if c == 0:
            return ZERO
        return cls({(ez, et): c}, None, True)

    @staticmethod
    def coerce(x) -> "Scalar":
        if isinstance(x, Scalar):
            return x
        if isinstance(x, str):
            return parse_scalar(x)
        return Scalar.const(x)

    def _normalize(self):
        num, den = self.num, self.den
        if den is None:
            return
        if not num:
            self.den = None
            return
        # move monomial content of den into num
        mz, mt = _minexp(den)
        if mz or mt:
            den = _shift(den, -mz, -mt)
            num = _shift(num, -mz, -mt)
        if len(den) == 1:
            ((k, c),) = den.items()
            self.num = {m: v / c for m, v in num.items()} if c != 1 else num
            self.den = None
            return
        nz, nt = _minexp(num)
        a = _to_sym(num, (-nz, -nt))
        b = _to_sym(den)
        g = a.gcd(b)
        if g != 1:
            a = a.exquo(g)
            b = b.exquo(g)
        num = _shift(_from_sym(a), nz, nt)
        den = _from_sym(b)
        mz, mt = _minexp(den)
        if mz or mt:
            den = _shift(den, -mz, -mt)
            num = _shift(num, -mz, -mt)
        lc = den[_lead(den)]
        if lc != 1:
            den = {m: v / lc for m, v in den.items()}
            num = {m: v / lc for m, v in num.items()}
        if len(den) == 1:
            self.num, self.den = num, None
        else:
            self.num, self.den = num, den

    # predicates -----------------------------------------------------------
    def is_zero(self) -> bool:
        return not self.num

    def __bool__(self):
        return bool(self.num)

    def is_laurent(self) -> bool:
        return self.den is None

    def is_constant(self) -> bool:
        return self.den is None and (not self.num or set(self.num) == {(0, 0)})

    def constant_value(self):
        """Return the rational value of a constant scalar."""
        if not self.is_constant():
            raise ValueError(f"{self} is not constant")
        return Fraction(self.num.get((0, 0), 0))

    # arithmetic -------------------------------------------------------------
    def __add__(self, other):
        if not isinstance(other, Scalar):
            if isinstance(other, (int, Fraction)) or type(other) is Q:
                other = Scalar.const(other)
            else:
                return NotImplemented
        if not other.num:
            return self
        if not self.num:
            return other
        if self.den is None and other.den is None:
            return Scalar(_kernels.ladd(self.num, other.num), None, True)
        a_n, a_d = self.num, self.den or {(0, 0): Q(1)}
        b_n, b_d = other.num, other.den or {(0, 0): Q(1)}
        if self.den is not None and other.den is not None and a_d == b_d:
            return Scalar(_kernels.ladd(a_n, b_n), dict(a_d))
        n = _kernels.ladd(_kernels.lmul(a_n, b_d), _kernels.lmul(b_n, a_d))
        return Scalar(n, _kernels.lmul(a_d, b_d))

    __radd__ = __add__

    def __neg__(self):
        return Scalar({m: -c for m, c in self.num.items()}, self.den, True)

    def __sub__(self, other):
        if not isinstance(other, Scalar):
            if isinstance(other, (int, Fraction)) or type(other) is Q:
                other = Scalar.const(other)
            else:
                return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, Scalar):
            if isinstance(other, (int, Fraction)) or type(other) is Q:
                c = Q(other)
                if c == 0:
                    return ZERO
                return Scalar({m: v * c for m, v in self.num.items()}, self.den, True)
            return NotImplemented
        if not self.num or not other.num:
            return ZERO
        n = _kernels.lmul(self.num, other.num)
        if self.den is None and other.den is None:
            return Scalar(n, None, True)
        if self.den is None:
            return Scalar(n, dict(other.den))
        if other.den is None:
            return Scalar(n, dict(self.den))
        return Scalar(n, _kernels.lmul(self.den, other.den))

    __rmul__ = __mul__

    def inverse(self) -> "Scalar":
        if not self.num:
            raise ZeroDivisionError("division by the zero scalar")
        if len(self.num) == 1:
            ((m, c),) = self.num.items()
            inv = {(-m[0], -m[1]): 1 / Q(c)}
            if self.den is None:
                return Scalar(inv, None, True)
            return Scalar(_kernels.lmul(self.den, inv), None, True)
        den = self.den or {(0, 0): Q(1)}
        return Scalar(dict(den), dict(self.num))

    def __truediv__(self, other):
        other = Scalar.coerce(other) if not isinstance(other, Scalar) else other
        return self * other.inverse()

    def __rtruediv__(self, other):
        return Scalar.coerce(other) * self.inverse()

    def __pow__(self, e: int):
        if not isinstance(e, int):
            return NotImplemented
        if e < 0:
            return self.inverse() ** (-e)
        result = ONE
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    # comparison -------------------------------------------------------------
    def __eq__(self, other):
        if not isinstance(other, Scalar):
            try:
                other = Scalar.coerce(other)
            except (TypeError, ValueError):
                return NotImplemented
        return self.num == other.num and self.den == other.den

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((frozenset(self.num.items()), frozenset(self.den.items()) if self.den else None))
        return self._hash

    # substitution -------------------------------------------------------------
    def invert_t(self) -> "Scalar":
        """Substitute t -> 1/t."""
        num = {(a, -b): c for (a, b), c in self.num.items()}
        if self.den is None:
            return Scalar(num, None, True)
        den = {(a, -b): c for (a, b), c in self.den.items()}
        return Scalar(num, den)

    def specialize(self, z0, t0) -> Fraction:
        """Evaluate at rational ``z = z0``, ``t = t0``."""
        z0, t0 = Fraction(z0), Fraction(t0)
        if z0 == 0 or t0 == 0:
            raise SpecializationError("non-generic specialization: z0 and t0 must be nonzero", "z" if z0 == 0 else "t")
        if self.den is not None:
            d = _eval(self.den, z0, t0)
            if d == 0:
                raise SpecializationError(
                    f"non-generic specialization at z={z0}, t={t0}: denominator vanishes",
                    _vanishing_factor(self.den, z0, t0),
                )
            return _eval(self.num, z0, t0) / d
        return _eval(self.num, z0, t0)

    # printing -------------------------------------------------------------
    def __str__(self):
        if self.den is None:
            return _fmt_poly(self.num)
        num = _fmt_poly(self.num)
        den = _fmt_poly(self.den)
        if len(self.num) > 1:
            num = f"({num})"
        return f"{num}/({den})"

    def __repr__(self):
        return f"Scalar({str(self)!r})"

    def atom_str(self) -> str:
        """String safe to use as a factor in a product."""
        s = str(self)
        if self.den is None and len(self.num) == 1:
            return s
        return f"({s})"


def _eval(d, z0, t0):
    total = Fraction(0)
    for (a, b), c in d.items():
        total += Fraction(c) * z0**a * t0**b
    return total


def _vanishing_factor(den, z0, t0):
    from sympy import factor_list, symbols

    zs, ts = symbols("z t")
    expr = sum(Fraction(c) * zs**a * ts**b for (a, b), c in den.items())
    _, factors = factor_list(expr)
    for f, _ in factors:
        if f.subs({zs: z0, ts: t0}) == 0:
            return str(f)
    return str(expr)


def _fmt_mono(a, b):
    parts = []
    for name, e in (("z", a), ("t", b)):
        if e == 1:
            parts.append(name)
        elif e:
            parts.append(f"{name}^{e}")
    return "*".join(parts)


def _fmt_poly(d):
    if not d:
        return "0"
    out = []
    for m in sorted(d, key=lambda m: (-(m[0] + m[1]), -m[0], -m[1])):
        c = Fraction(d[m])
        mono = _fmt_mono(*m)
        neg = c < 0
        c = abs(c)
        if mono:
            body = mono if c == 1 else f"{c}*{mono}"
        else:
            body = str(c)
        if not out:
            out.append(("-" if neg else "") + body)
        else:
            out.append((" - " if neg else " + ") + body)
    return "".join(out)


ZERO = Scalar({}, None, True)
ONE = Scalar({(0, 0): Q(1)}, None, True)
Z = Scalar({(1, 0): Q(1)}, None, True)
T = Scalar({(0, 1): Q(1)}, None, True)


# parsing ------------------------------------------------------------------

_TOKEN = re.compile(r"\s*(?:(\d+)|([zt])|(\*\*|[-+*/^()]))")


class _Parser:
    def __init__(self, text: str):
        self.toks = []
        pos = 0
        text = text.strip()
        while pos < len(text):
            m = _TOKEN.match(text, pos)
            if not m or m.end() == pos:
                raise ValueError(f"cannot parse scalar {text!r} at position {pos}")
            if m.group(1):
                self.toks.append(("int", int(m.group(1))))
            elif m.group(2):
                self.toks.append(("var", m.group(2)))
            else:
                op = m.group(3)
                self.toks.append(("op", "^" if op == "**" else op))
            pos = m.end()
        self.i = 0

    def peek(self):
        return self.toks[self.i] if self.i < len(self.toks) else (None, None)

    def take(self):
        tok = self.peek()
        self.i += 1
        return tok

    def expect(self, op):
        tok = self.take()
        if tok != ("op", op):
            raise ValueError(f"expected {op!r}")

    def parse(self) -> Scalar:
        if not self.toks:
            raise ValueError("empty scalar")
        v = self.expr()
        if self.i != len(self.toks):
            raise ValueError("trailing input in scalar")
        return v

    def expr(self):
        v = self.term()
        while self.peek() in (("op", "+"), ("op", "-")):
            op = self.take()[1]
            w = self.term()
            v = v + w if op == "+" else v - w
        return v

    def term(self):
        v = self.unary()
        while self.peek() in (("op", "*"), ("op", "/")):
            op = self.take()[1]
            w = self.unary()
            v = v * w if op == "*" else v / w
        return v

    def unary(self):
        if self.peek() == ("op", "-"):
            self.take()
            return -self.unary()
        if self.peek() == ("op", "+"):
            self.take()
            return self.unary()
        return self.power()

    def power(self):
        base = self.atom()
        if self.peek() == ("op", "^"):
            self.take()
            sign = 1
            if self.peek() == ("op", "-"):
                self.take()
                sign = -1
            kind, val = self.take()
            if kind == "op" and val == "(":
                if self.peek() == ("op", "-"):
                    self.take()
                    sign = -sign
                kind, val = self.take()
                self.expect(")")
            if kind != "int":
                raise ValueError("exponent must be an integer")
            return base ** (sign * val)
        return base

    def atom(self):
        kind, val = self.take()
        if kind == "int":
            return Scalar.const(val)
        if kind == "var":
            return Z if val == "z" else T
        if (kind, val) == ("op", "("):
            v = self.expr()
            self.expect(")")
            return v
        raise ValueError(f"unexpected token {val!r} in scalar")


def parse_scalar(text: str) -> Scalar:
    """Parse the scalar grammar: integers, z, t, + - * / ^ and parentheses."""
    return _Parser(text).parse()


# super signs ----------------------------------------------------------------


def parity_sum(parities: Iterable[int]) -> int:
    return sum(parities) & 1


def koszul_sign(left_parities: Iterable[int], right_parities: Iterable[int]) -> int:
    """Sign produced when a block with ``right_parities`` moves past ``left_parities``."""
    return -1 if (parity_sum(left_parities) * parity_sum(right_parities)) & 1 else 1
