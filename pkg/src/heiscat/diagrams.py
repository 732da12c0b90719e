"""Morphisms of the Heisenberg category as linear combinations of sliced diagrams.

A :class:`DiagramTerm` is a source word plus elementary slices
``(name, i, arg)`` where ``i`` counts strands from the left (for cups: in the
word above the slice) and a token argument is a basis index.  A
:class:`Morphism` maps terms to right ``Sym(A) ⊗ Sym(A)`` coefficients.

Terms are stored in interchange normal form: horizontally separated slices
are sorted so that the left one sits lower, with the Koszul sign for odd
tokens.  Two terms that differ by the super interchange law therefore
compare equal.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Dict, Iterable, Optional, Sequence, Tuple

from heiscat.core import ONE, Scalar
from heiscat.dsl import DOWN, UP, DSLError, elementary, format_word, parse_slices, parse_word, render_elementary
from heiscat.frobenius import AlgebraElement, FrobeniusSuperalgebra
from heiscat.planar import Geometry, build_scene, check_slice, word_after
from heiscat.symfun import DEFAULT_TRUNCATION, SymElement

Slice = Tuple[str, int, object]
ObjectWord = Tuple[str, ...]


def object_word(text) -> ObjectWord:
    """Parse ``"up down"``-style text (or pass a tuple through)."""
    if isinstance(text, str):
        return parse_word(text)
    out = tuple(text)
    if any(o not in (UP, DOWN) for o in out):
        raise DSLError("object letters must be 'u' or 'd'")
    return out


def dual_word(word: Sequence[str]) -> ObjectWord:
    return tuple(DOWN if o == UP else UP for o in word)


# terms ----------------------------------------------------------------------------------


_WIDTH_CHANGE = {"cupR": 2, "cupL": 2, "capR": -2, "capL": -2}


def _top_range(sl) -> Tuple[int, int]:
    """Positions a slice occupies in the word above it."""
    name, i, _ = sl
    if name == "bub":
        return i, i
    if name in ("dot", "tok"):
        return i, i + 1
    if name in ("xpos", "xneg", "cupR", "cupL"):
        return i, i + 2
    return i, i


def _bottom_range(sl) -> Tuple[int, int]:
    name, i, _ = sl
    if name == "bub":
        return i, i
    if name in ("dot", "tok"):
        return i, i + 1
    if name in ("xpos", "xneg", "capR", "capL"):
        return i, i + 2
    return i, i


def _strictly_left(upper, lower) -> bool:
    """Whether ``upper`` lies entirely to the left of ``lower`` in the word between them."""
    a1, b1 = _top_range(lower)
    a2, b2 = _bottom_range(upper)
    if b2 > a1:
        return False
    return not (a1 == b1 and a2 == b2 and a1 == a2)


def _slice_parity(A: FrobeniusSuperalgebra, sl) -> int:
    if sl[0] == "tok":
        return A.parity[sl[2]]
    if sl[0] == "bub":
        return A.parity[sl[2][2]]
    return 0


def interchange_normal(A: FrobeniusSuperalgebra, slices: Sequence[Slice]) -> Tuple[int, Tuple[Slice, ...]]:
    """Sort horizontally separated slices left-lowest; returns ``(sign, slices)``."""
    out = list(slices)
    sign = 1
    changed = True
    while changed:
        changed = False
        for p in range(len(out) - 1):
            lower, upper = out[p], out[p + 1]
            if _strictly_left(upper, lower):
                shift = _WIDTH_CHANGE.get(upper[0], 0)
                out[p] = upper
                out[p + 1] = (lower[0], lower[1] + shift, lower[2])
                if _slice_parity(A, lower) and _slice_parity(A, upper):
                    sign = -sign
                changed = True
    return sign, tuple(out)


@dataclass(frozen=True)
class DiagramTerm:
    """A sliced diagram: source word and elementary slices, bottom to top."""

    source: ObjectWord
    slices: Tuple[Slice, ...]

    @property
    def target(self) -> ObjectWord:
        w = self.source
        for sl in self.slices:
            w = word_after(w, sl)
        return w

    def check(self):
        w = self.source
        for sl in self.slices:
            check_slice(w, sl)
            w = word_after(w, sl)
        return w

    def crossings(self) -> int:
        return sum(1 for sl in self.slices if sl[0] in ("xpos", "xneg"))

    def text(self, A: Optional[FrobeniusSuperalgebra] = None) -> str:
        return render_elementary(self.source, [_named(A, sl) for sl in self.slices])


def _token_name(A, b):
    return A.basis[b] if A is not None else f"#{b}"


def _named(A, sl):
    name, i, arg = sl
    if name == "tok":
        return (name, i, _token_name(A, arg))
    if name == "bub":
        return (name, i, (arg[0], arg[1], _token_name(A, arg[2]), arg[3]))
    return sl


# morphisms -----------------------------------------------------------------------------


class Morphism:
    """A finite linear combination of diagram terms with ``Sym(A) ⊗ Sym(A)`` coefficients."""

    __slots__ = ("A", "source", "target", "terms")

    def __init__(self, A: FrobeniusSuperalgebra, source, target, terms: Optional[Dict[DiagramTerm, SymElement]] = None):
        self.A = A
        self.source = object_word(source)
        self.target = object_word(target)
        self.terms: Dict[DiagramTerm, SymElement] = {}
        for t, c in (terms or {}).items():
            self._add_term(t, c)

    def _add_term(self, term: DiagramTerm, coeff):
        if term.source != self.source or term.target != self.target:
            raise ValueError("term does not match the morphism's source and target")
        sign, slices = interchange_normal(self.A, term.slices)
        term = DiagramTerm(term.source, slices)
        coeff = _as_sym(self.A, coeff)
        if sign < 0:
            coeff = -coeff
        old = self.terms.get(term)
        new = coeff if old is None else old + coeff
        if new.is_zero():
            self.terms.pop(term, None)
        else:
            self.terms[term] = new

    # construction -----------------------------------------------------------------------
    @classmethod
    def identity(cls, A, word) -> "Morphism":
        w = object_word(word)
        return cls(A, w, w, {DiagramTerm(w, ()): SymElement.scalar(A, ONE)})

    @classmethod
    def zero(cls, A, source, target) -> "Morphism":
        return cls(A, source, target)

    @classmethod
    def from_slices(cls, A, source, slices: Iterable[Slice], coeff=ONE) -> "Morphism":
        """A single diagram; token arguments may be basis indices, names or AlgebraElements."""
        source = object_word(source)
        expanded = [((), SymElement.scalar(A, ONE))]
        w = source
        for sl in slices:
            check_slice(w, sl)
            w = word_after(w, sl)
            name, i, arg = sl
            if name == "tok":
                elem = _token(A, arg)
                expanded = [(p + ((name, i, b),), c * v) for p, c in expanded for b, v in elem.support().items()]
            elif name == "bub":
                o, sg, tok, n = arg
                elem = _token(A, tok)
                expanded = [
                    (p + ((name, i, (o, sg, b, int(n))),), c * v) for p, c in expanded for b, v in elem.support().items()
                ]
            else:
                expanded = [(p + ((name, i, arg),), c) for p, c in expanded]
        out = cls(A, source, w)
        for sl_tuple, c in expanded:
            out._add_term(DiagramTerm(source, sl_tuple), _as_sym(A, coeff) * c)
        return out

    @classmethod
    def parse(cls, A, text: str) -> "Morphism":
        """Parse the slice language; ``+``-separated sums with ``coeff *`` prefixes are allowed."""
        parts = _split_sum(text)
        out = None
        for sign, coeff_text, body in parts:
            src, sl = parse_slices(body)
            source, elems, target = elementary(src, sl)
            coeff = Scalar.coerce(1)
            if coeff_text:
                from heiscat.core import parse_scalar

                coeff = parse_scalar(coeff_text)
            m = cls.from_slices(A, source, elems, coeff * sign)
            out = m if out is None else out + m
        if out is None:
            raise DSLError("empty diagram expression")
        return out

    # arithmetic ---------------------------------------------------------------------------
    def _check_same(self, other: "Morphism"):
        if self.source != other.source or self.target != other.target:
            raise ValueError(
                f"object mismatch: {format_word(self.source)} -> {format_word(self.target)} vs "
                f"{format_word(other.source)} -> {format_word(other.target)}"
            )

    def __add__(self, other: "Morphism") -> "Morphism":
        self._check_same(other)
        out = Morphism(self.A, self.source, self.target, self.terms)
        for t, c in other.terms.items():
            out._add_term(t, c)
        return out

    def __neg__(self) -> "Morphism":
        return Morphism(self.A, self.source, self.target, {t: -c for t, c in self.terms.items()})

    def __sub__(self, other: "Morphism") -> "Morphism":
        return self + (-other)

    def scale(self, c) -> "Morphism":
        """Right multiplication by a scalar or a ``Sym(A) ⊗ Sym(A)`` element."""
        s = _as_sym(self.A, c)
        return Morphism(self.A, self.source, self.target, {t: v * s for t, v in self.terms.items()})

    __mul__ = scale

    def __rmul__(self, c):
        return self.scale(c)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Morphism):
            return NotImplemented
        return (
            self.source == other.source
            and self.target == other.target
            and self.terms.keys() == other.terms.keys()
            and all(self.terms[t] == other.terms[t] for t in self.terms)
        )

    def __hash__(self):
        return hash((self.source, self.target, frozenset(self.terms)))

    def is_zero(self) -> bool:
        return not self.terms

    def crossings(self) -> int:
        return max((t.crossings() for t in self.terms), default=0)

    # output ----------------------------------------------------------------------------------
    def text(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for t in sorted(self.terms, key=lambda t: (len(t.slices), repr(t.slices))):
            parts.append(f"({self.terms[t]}) * [{t.text(self.A)}]")
        return " + ".join(parts)

    __str__ = text

    def __repr__(self):
        return f"Morphism({self.text()})"

    def to_json(self) -> dict:
        return {
            "algebra": self.A.name,
            "source": _word_json(self.source),
            "target": _word_json(self.target),
            "terms": [
                {
                    "coefficient": c.to_json(),
                    "slices": [_slice_json(sl) for sl in t.slices],
                }
                for t, c in self.terms.items()
            ],
        }

    @classmethod
    def from_json(cls, A, data) -> "Morphism":
        if isinstance(data, str):
            data = json.loads(data)
        source = tuple(UP if o == "up" else DOWN for o in data["source"])
        target = tuple(UP if o == "up" else DOWN for o in data["target"])
        out = cls(A, source, target)
        for item in data["terms"]:
            slices = tuple(_slice_from_json(s) for s in item["slices"])
            term = DiagramTerm(source, slices)
            if term.check() != target:
                raise DSLError("term does not end at the stated target")
            out._add_term(term, SymElement.from_json(A, item["coefficient"]))
        return out

    def tikz(self) -> str:
        return "\n".join(
            f"% coefficient {c}\n" + tikz_term(self.A, t) for t, c in self.terms.items()
        )


def _word_json(w):
    return ["up" if o == UP else "down" for o in w]


def _slice_json(sl):
    name, i, arg = sl
    d = {"gen": name, "i": i}
    if name == "bub":
        d["arg"] = {"orientation": arg[0], "sign": arg[1], "token": arg[2], "dots": arg[3]}
    elif arg is not None:
        d["arg"] = arg
    return d


def _slice_from_json(s):
    name, i, arg = s["gen"], int(s["i"]), s.get("arg")
    if name == "bub":
        arg = (arg["orientation"], arg["sign"], int(arg["token"]), int(arg["dots"]))
    elif name in ("dot", "tok"):
        arg = int(arg)
    return (name, i, arg)


def _as_sym(A, c) -> SymElement:
    if isinstance(c, SymElement):
        return c
    return SymElement.scalar(A, Scalar.coerce(c))


def _token(A, arg) -> AlgebraElement:
    if isinstance(arg, AlgebraElement):
        return arg
    if isinstance(arg, int):
        return A.basis_element(arg)
    s = str(arg).strip()
    if s.startswith("#"):
        return A.basis_element(int(s[1:]))
    return A.parse_element(s)


def _split_sum(text: str):
    """Split ``c1 * [d1] + c2 * [d2]`` (brackets optional for a single diagram)."""
    text = text.strip()
    if "[" not in text:
        return [(1, "", text)]
    out = []
    pos = 0
    sign = 1
    n = len(text)
    while pos < n:
        while pos < n and text[pos] in " \t+":
            pos += 1
        if pos < n and text[pos] == "-":
            sign = -1
            pos += 1
            continue
        if pos >= n:
            break
        lb = text.index("[", pos)
        coeff = text[pos:lb].strip()
        if coeff.endswith("*"):
            coeff = coeff[:-1].strip()
        rb = text.index("]", lb)
        out.append((sign, coeff, text[lb + 1:rb]))
        sign = 1
        pos = rb + 1
    return out


# composition and tensor ----------------------------------------------------------------------


def compose(f: Morphism, g: Morphism) -> Morphism:
    """``f ∘ g``: first ``g``, then ``f``."""
    if g.target != f.source:
        raise ValueError(
            f"cannot compose: target {format_word(g.target)} of the first map is not the source "
            f"{format_word(f.source)} of the second"
        )
    out = Morphism(f.A, g.source, f.target)
    for tg, cg in g.terms.items():
        for tf, cf in f.terms.items():
            out._add_term(DiagramTerm(g.source, tg.slices + tf.slices), cg * cf)
    return out


def tensor(f: Morphism, g: Morphism) -> Morphism:
    """``f ⊗ g`` drawn as ``f`` (next to the source of ``g``) followed by ``g``.

    Coefficients act on the far right, so the coefficients of ``f`` must be
    scalars; a bubble between ``f`` and ``g`` would have to slide past ``g``.
    """
    if any(not c.is_scalar() for c in f.terms.values()):
        raise ValueError("tensor needs scalar coefficients on the left factor")
    out = Morphism(f.A, f.source + g.source, f.target + g.target)
    shift = len(f.target)
    for tf, cf in f.terms.items():
        for tg, cg in g.terms.items():
            moved = tuple((n, i + shift, a) for n, i, a in tg.slices)
            out._add_term(DiagramTerm(f.source + g.source, tf.slices + moved), cg * cf)
    return out


# symmetries -----------------------------------------------------------------------------------


def _odd_tokens(A, term: DiagramTerm) -> int:
    return sum(_slice_parity(A, sl) for sl in term.slices)


def _binom2(y: int) -> int:
    return y * (y - 1) // 2


def rotate_star(f: Morphism) -> Morphism:
    """The 180 degree rotation, an anti-automorphism for composition."""
    A = f.A
    out = Morphism(A, _rot_word(f.target), _rot_word(f.source))
    for t, c in f.terms.items():
        words = [t.source]
        for sl in t.slices:
            words.append(word_after(words[-1], sl))
        new = []
        for idx in range(len(t.slices) - 1, -1, -1):
            name, i, arg = t.slices[idx]
            below, above = words[idx], words[idx + 1]
            m_below, m_above = len(below), len(above)
            if name in ("dot", "tok"):
                new.append((name, m_below - 1 - i, arg))
            elif name == "bub":
                new.append((name, m_below - i, arg))
            elif name in ("xpos", "xneg"):
                new.append((name, m_below - 2 - i, arg))
            elif name in ("cupR", "cupL"):
                new.append(({"cupR": "capL", "cupL": "capR"}[name], m_above - 2 - i, None))
            else:
                new.append(({"capR": "cupL", "capL": "cupR"}[name], m_below - 2 - i, None))
        sign = -1 if _binom2(_odd_tokens(A, t)) % 2 else 1
        out._add_term(DiagramTerm(_rot_word(t.target), tuple(new)), c if sign > 0 else -c)
    return out


def _rot_word(w):
    return tuple(DOWN if o == UP else UP for o in reversed(w))


def omega(f: Morphism, invert_t: bool = True) -> Morphism:
    """Reflection in a horizontal line, from charge ``k`` to ``-k``.

    Crossings change sign and each crossing and each left cup or cap
    contributes a factor ``-1``; ``t`` is replaced by ``t^{-1}`` in the
    coefficients so that the result lives in the category with parameter
    ``t`` again.  Coefficients in ``Sym(A) ⊗ Sym(A)`` are mapped by
    ``e_p -> (-1)^p h_p`` on both sides.
    """
    A = f.A
    out = Morphism(A, dual_word(f.target), dual_word(f.source))
    for t, c in f.terms.items():
        new = []
        sign = 1
        for name, i, arg in reversed(t.slices):
            if name in ("xpos", "xneg"):
                new.append(("xneg" if name == "xpos" else "xpos", i, None))
                sign = -sign
            elif name in ("cupR", "cupL", "capR", "capL"):
                swap = {"cupR": "capR", "capR": "cupR", "cupL": "capL", "capL": "cupL"}[name]
                new.append((swap, i, None))
                if name in ("cupL", "capL"):
                    sign = -sign
            elif name == "bub":
                o, sg, b, n = arg
                new.append((name, i, ("cw" if o == "ccw" else "ccw", sg, b, n)))
                sign = -sign
            else:
                new.append((name, i, arg))
        if _binom2(_odd_tokens(A, t)) % 2:
            sign = -sign
        coeff = omega_sym(c, invert_t)
        out._add_term(DiagramTerm(dual_word(t.target), tuple(new)), coeff if sign > 0 else -coeff)
    return out


def omega_sym(s: SymElement, invert_t: bool = True, N: int = DEFAULT_TRUNCATION) -> SymElement:
    """The action of the reflection on ``Sym(A) ⊗ Sym(A)``: ``e_p(a) -> (-1)^p h_p(a)``."""
    from heiscat.symfun import h_of

    A = s.A
    out = SymElement(A, {})
    reps = A.cocenter_basis()
    for mono, c in s.terms.items():
        term = SymElement.scalar(A, c.invert_t() if invert_t else c)
        for (side, p, j), e in mono:
            img = h_of(A, A.basis_element(reps[j]), p, side, max(N, p))
            if p % 2:
                img = -img
            for _ in range(e):
                term = term * img
        out = out + term
    return out


# normal forms -----------------------------------------------------------------------------------------


class NormalForm:
    """Expansion over the decorated canonical lifts with ``Sym(A) ⊗ Sym(A)`` coefficients.

    A key is ``(nb, boundary orientation, ((tail, head, (dots, token)), ...))``
    with boundary slots numbered clockwise: bottom right to left, then top
    left to right.  Decorations sit next to the head of each string.
    """

    def __init__(self, A, source, target, terms: Dict[tuple, SymElement], k: int):
        self.A = A
        self.source = tuple(source)
        self.target = tuple(target)
        self.k = k
        self.terms = {key: c for key, c in terms.items() if not c.is_zero()}

    def __eq__(self, other) -> bool:
        if not isinstance(other, NormalForm):
            return NotImplemented
        return (
            self.source == other.source
            and self.target == other.target
            and self.terms.keys() == other.terms.keys()
            and all(self.terms[key] == other.terms[key] for key in self.terms)
        )

    def __hash__(self):
        return hash((self.source, self.target, frozenset(self.terms)))

    def is_zero(self) -> bool:
        return not self.terms

    def items(self):
        return sorted(self.terms.items(), key=lambda kv: _key_order(kv[0]))

    def lift(self, key) -> DiagramTerm:
        from heiscat.straighten import key_slices

        source, slices = key_slices(self.A, key)
        slices = tuple((n, i, int(a[1:]) if n == "tok" else a) for n, i, a in slices)
        return DiagramTerm(tuple(source), slices)

    def to_morphism(self) -> Morphism:
        out = Morphism(self.A, self.source, self.target)
        for key, c in self.terms.items():
            out._add_term(self.lift(key), c)
        return out

    def scalar(self) -> Optional[SymElement]:
        """The coefficient of the empty diagram for endomorphisms of the unit object."""
        if self.source or self.target:
            return None
        return self.terms.get((0, (), ()), SymElement(self.A, {}))

    def text(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for key, c in self.items():
            t = self.lift(key)
            body = "Id" if not t.slices and t.source else t.text(self.A)
            if not t.source and not t.slices:
                parts.append(f"{c}")
            else:
                parts.append(f"({c}) * [{body}]")
        return " + ".join(parts)

    __str__ = text

    def __repr__(self):
        return f"NormalForm({self.text()})"

    def to_json(self) -> dict:
        return {
            "algebra": self.A.name,
            "k": self.k,
            "source": _word_json(self.source),
            "target": _word_json(self.target),
            "terms": [
                {
                    "coefficient": c.to_json(),
                    "key": [key[0], list(key[1]), [[s, h, list(d) if d is not None else None] for s, h, d in key[2]]],
                    "matching": [[s, h] for s, h, _ in key[2]],
                    "decorations": [list(d) if d is not None else None for _, _, d in key[2]],
                    "slices": [_slice_json(sl) for sl in self.lift(key).slices],
                }
                for key, c in self.items()
            ],
        }


    @classmethod
    def from_json(cls, A, data) -> "NormalForm":
        if isinstance(data, str):
            data = json.loads(data)
        terms = {}
        for t in data["terms"]:
            nb, bout, strands = t["key"]
            key = (nb, tuple(bout), tuple((s, h, tuple(d) if d is not None else None) for s, h, d in strands))
            terms[key] = SymElement.from_json(A, t["coefficient"])
        source = tuple(UP if o == "up" else DOWN for o in data["source"])
        target = tuple(UP if o == "up" else DOWN for o in data["target"])
        return cls(A, source, target, terms, data["k"])


def _key_order(key):
    nb, bout, strands = key
    return (len(strands), tuple((s, h, d or (0, -1)) for s, h, d in strands))


# normalization ---------------------------------------------------------------------------------------------


_NORMALIZERS: Dict[tuple, object] = {}


def normalizer(A, k: int, N: int = DEFAULT_TRUNCATION):
    """A cached straightener for ``(A, k)``; its memo is shared between calls."""
    from heiscat.straighten import Normalizer

    key = (id(A), k, N)
    hit = _NORMALIZERS.get(key)
    if hit is None or hit[1] is not A:
        hit = (Normalizer(A, k, N), A)
        _NORMALIZERS[key] = hit
    return hit[0]


def normalize(f: Morphism, k: int, budget: Optional[int] = None, truncation: int = DEFAULT_TRUNCATION) -> NormalForm:
    """Expand ``f`` over the canonical basis at central charge ``k``.

    ``truncation`` bounds the degree of the complete symmetric functions
    kept when bubbles are expanded.
    """
    from heiscat.straighten import run_deep, step_budget

    A = f.A
    N = normalizer(A, k, truncation)
    N.steps = 0
    N.budget = step_budget() if budget is None else budget
    acc: Dict[tuple, SymElement] = {}
    for term, coeff in f.terms.items():
        geom = Geometry(term.source, term.slices)
        for c, scene in build_scene(A, geom, lambda b: _token(A, b)):
            res = run_deep(N.normalize_scene, c, scene)
            for key, v in res.items():
                v = v * coeff
                old = acc.get(key)
                acc[key] = v if old is None else old + v
    return NormalForm(A, f.source, f.target, acc, k)


def equals(f: Morphism, g: Morphism, k: int) -> bool:
    f._check_same(g)
    return normalize(f - g, k).is_zero()


# TikZ --------------------------------------------------------------------------------------------------


def tikz_term(A, term: DiagramTerm, scale: float = 0.6) -> str:
    """A TikZ picture of one sliced diagram; decorations are drawn where they sit."""
    lines = [f"\\begin{{tikzpicture}}[scale={scale},>=stealth]"]
    word = term.source
    y = 0.0

    def x(j):
        return float(j)

    def arrow(o):
        return "->" if o == UP else "<-"

    for sl in term.slices:
        name, i, arg = sl
        new = word_after(word, sl)
        y1 = y + 1
        if name == "bub":
            for j, o in enumerate(word):
                lines.append(f"  \\draw[{arrow(o)}] ({x(j)},{y}) -- ({x(j)},{y1});")
            o, sg, b, n = arg
            label = A.basis[b] if A is not None and isinstance(b, int) else str(b)
            lines.append(f"  \\draw[{'<-' if o == 'ccw' else '->'}] ({x(i) - 0.5},{y + 0.5}) circle (0.25);")
            lines.append(f"  \\node at ({x(i) - 0.5},{y + 0.5}) {{\\tiny${sg if sg != '0' else ''}$}};")
            lines.append(f"  \\node[anchor=south] at ({x(i) - 0.5},{y + 0.75}) {{\\tiny${label},{n}$}};")
        elif name in ("dot", "tok", "xpos", "xneg"):
            for j, o in enumerate(word):
                if name in ("xpos", "xneg") and j in (i, i + 1):
                    continue
                lines.append(f"  \\draw[{arrow(o)}] ({x(j)},{y}) -- ({x(j)},{y1});")
            if name == "dot":
                lines.append(f"  \\fill ({x(i)},{y + 0.5}) circle (2.5pt);")
                if arg != 1:
                    lines.append(f"  \\node[anchor=west] at ({x(i) + 0.1},{y + 0.5}) {{${arg}$}};")
            elif name == "tok":
                label = A.basis[arg] if A is not None and isinstance(arg, int) else str(arg)
                lines.append(f"  \\filldraw[fill=white] ({x(i)},{y + 0.5}) circle (2.5pt);")
                lines.append(f"  \\node[anchor=west] at ({x(i) + 0.1},{y + 0.5}) {{${label}$}};")
            elif name in ("xpos", "xneg"):
                from heiscat.planar import crossing_over_left

                over_left = crossing_over_left(word, i, name == "xpos")
                a = f"({x(i)},{y}) -- ({x(i + 1)},{y1})"
                b = f"({x(i + 1)},{y}) -- ({x(i)},{y1})"
                oa, ob = arrow(word[i]), arrow(word[i + 1])
                under, over = ((b, ob), (a, oa)) if over_left else ((a, oa), (b, ob))
                lines.append(f"  \\draw[{under[1]}] {under[0]};")
                lines.append(f"  \\draw[white,line width=4pt] {over[0]};")
                lines.append(f"  \\draw[{over[1]}] {over[0]};")
        elif name in ("cupR", "cupL"):
            for j, o in enumerate(word):
                jj = j if j < i else j + 2
                lines.append(f"  \\draw[{arrow(o)}] ({x(j)},{y}) -- ({x(jj)},{y1});")
            left = new[i]
            lines.append(
                f"  \\draw[{arrow(left)}] ({x(i)},{y1}) .. controls ({x(i)},{y + 0.3}) and ({x(i + 1)},{y + 0.3}) .. ({x(i + 1)},{y1});"
                if left == UP
                else f"  \\draw[->] ({x(i + 1)},{y1}) .. controls ({x(i + 1)},{y + 0.3}) and ({x(i)},{y + 0.3}) .. ({x(i)},{y1});"
            )
        else:
            for j, o in enumerate(word):
                if j in (i, i + 1):
                    continue
                jj = j if j < i else j - 2
                lines.append(f"  \\draw[{arrow(o)}] ({x(j)},{y}) -- ({x(jj)},{y1});")
            start, end = (i, i + 1) if word[i] == UP else (i + 1, i)
            lines.append(
                f"  \\draw[->] ({x(start)},{y}) .. controls ({x(start)},{y + 0.7}) and ({x(end)},{y + 0.7}) .. ({x(end)},{y});"
            )
        word = new
        y = y1
    if not term.slices:
        for j, o in enumerate(word):
            lines.append(f"  \\draw[{arrow(o)}] ({x(j)},0) -- ({x(j)},1);")
    lines.append("\\end{tikzpicture}")
    return "\n".join(lines)
