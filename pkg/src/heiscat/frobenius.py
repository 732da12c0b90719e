"""Symmetric Frobenius superalgebras given by structure constants.

An algebra is fixed by a homogeneous basis, the parity of each basis element,
the coordinates of the unit, the products ``b_i b_j`` and the trace of each
basis element.  Everything else (dual basis, dagger, center, cocenter,
teleporter table) is derived once at construction and validated.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from functools import cached_property
from typing import Dict, List, Optional, Sequence, Tuple

from heiscat import linalg
from heiscat.core import ONE, ZERO, Z, Scalar

Coords = Tuple[Scalar, ...]


class FrobeniusError(ValueError):
    """Structure constants that do not define a symmetric Frobenius superalgebra."""


class AlgebraElement:
    """A vector in the algebra, stored as coordinates on the basis."""

    __slots__ = ("alg", "coords", "_hash")

    def __init__(self, alg: "FrobeniusSuperalgebra", coords: Sequence):
        self.alg = alg
        self.coords = tuple(Scalar.coerce(c) for c in coords)
        self._hash = None

    def support(self) -> Dict[int, Scalar]:
        return {i: c for i, c in enumerate(self.coords) if c}

    def is_zero(self):
        return not any(self.coords)

    @property
    def parity(self) -> Optional[int]:
        """Parity if homogeneous (zero counts as even), else ``None``."""
        ps = {self.alg.parity[i] for i, c in enumerate(self.coords) if c}
        if not ps:
            return 0
        return ps.pop() if len(ps) == 1 else None

    def __add__(self, other):
        return AlgebraElement(self.alg, [a + b for a, b in zip(self.coords, other.coords)])

    def __sub__(self, other):
        return AlgebraElement(self.alg, [a - b for a, b in zip(self.coords, other.coords)])

    def __neg__(self):
        return AlgebraElement(self.alg, [-a for a in self.coords])

    def __mul__(self, other):
        if isinstance(other, AlgebraElement):
            return self.alg.mul(self, other)
        return AlgebraElement(self.alg, [a * other for a in self.coords])

    def __rmul__(self, other):
        return AlgebraElement(self.alg, [other * a for a in self.coords])

    def __eq__(self, other):
        return isinstance(other, AlgebraElement) and self.alg is other.alg and self.coords == other.coords

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(self.coords)
        return self._hash

    def __str__(self):
        parts = []
        for i, c in enumerate(self.coords):
            if not c:
                continue
            name = self.alg.basis[i]
            if c == ONE:
                parts.append(name)
            elif c == -ONE:
                parts.append(f"-{name}")
            else:
                parts.append(f"{c.atom_str()}*{name}")
        return " + ".join(parts).replace("+ -", "- ") if parts else "0"

    __repr__ = __str__


@dataclass(frozen=True)
class TeleporterEntry:
    """One summand ``coeff * (upper token ⊗ lower token)`` of a teleporter.

    ``upper`` and ``lower`` are basis indices.  When the teleporter straddles
    morphisms of total parity ``y``, the summand picks up ``(-1)^(y*parity)``.
    """

    upper: int
    lower: AlgebraElement
    coeff: Scalar
    parity: int


class FrobeniusSuperalgebra:
    """A symmetric Frobenius superalgebra with even trace."""

    def __init__(self, name, basis, parity, unit, mult, trace):
        self.name = name
        self.basis = list(basis)
        self.dim = len(self.basis)
        self.parity = [int(p) & 1 for p in parity]
        d = self.dim
        if len(self.parity) != d or len(unit) != d or len(trace) != d:
            raise FrobeniusError("basis, parity, unit and trace must have equal length")
        self.unit_coords = tuple(Scalar.coerce(c) for c in unit)
        self.trace = tuple(Scalar.coerce(c) for c in trace)
        self._mult: List[List[Dict[int, Scalar]]] = []
        for i in range(d):
            row = []
            for j in range(d):
                v = [Scalar.coerce(c) for c in mult[i][j]]
                if len(v) != d:
                    raise FrobeniusError(f"product {self.basis[i]}*{self.basis[j]} has wrong length")
                row.append({k: c for k, c in enumerate(v) if c})
            self._mult.append(row)
        self._validate()
        self._dual = self._compute_dual()

    # basics -------------------------------------------------------------
    def element(self, coords) -> AlgebraElement:
        return AlgebraElement(self, coords)

    def basis_element(self, i: int) -> AlgebraElement:
        return AlgebraElement(self, [ONE if j == i else ZERO for j in range(self.dim)])

    def index(self, name: str) -> int:
        try:
            return self.basis.index(name)
        except ValueError:
            raise KeyError(f"unknown basis element {name!r} of {self.name}") from None

    @cached_property
    def one(self) -> AlgebraElement:
        return AlgebraElement(self, self.unit_coords)

    @cached_property
    def zero(self) -> AlgebraElement:
        return AlgebraElement(self, [ZERO] * self.dim)

    def unit_index(self) -> Optional[int]:
        """Index of the basis element equal to 1, if there is one."""
        s = self.one.support()
        if len(s) == 1:
            (i, c), = s.items()
            if c == ONE:
                return i
        return None

    def basis_product(self, i: int, j: int) -> Dict[int, Scalar]:
        return self._mult[i][j]

    def mul(self, a: AlgebraElement, b: AlgebraElement) -> AlgebraElement:
        out = [ZERO] * self.dim
        for i, ca in a.support().items():
            for j, cb in b.support().items():
                c = ca * cb
                for k, v in self._mult[i][j].items():
                    out[k] = out[k] + c * v
        return AlgebraElement(self, out)

    def tr(self, a: AlgebraElement) -> Scalar:
        total = ZERO
        for i, c in a.support().items():
            total = total + c * self.trace[i]
        return total

    def tr_basis_product(self, i: int, j: int) -> Scalar:
        total = ZERO
        for k, v in self._mult[i][j].items():
            total = total + v * self.trace[k]
        return total

    # validation ------------------------------------------------------------
    def _validate(self):
        d = self.dim
        one = self.one
        for i in range(d):
            bi = self.basis_element(i)
            if self.mul(one, bi) != bi or self.mul(bi, one) != bi:
                raise FrobeniusError(f"unit axiom fails on {self.basis[i]}")
            if self.parity[i] and self.trace[i]:
                raise FrobeniusError(f"trace is not even: tr({self.basis[i]}) != 0 for odd {self.basis[i]}")
        if one.parity != 0:
            raise FrobeniusError("unit must be even")
        for i in range(d):
            for j in range(d):
                p = self.parity[i] ^ self.parity[j]
                for k in self._mult[i][j]:
                    if self.parity[k] != p:
                        raise FrobeniusError(f"product {self.basis[i]}*{self.basis[j]} is not homogeneous of parity {p}")
        for i in range(d):
            bi = self.basis_element(i)
            for j in range(d):
                bij = self.mul(bi, self.basis_element(j))
                for k in range(d):
                    bk = self.basis_element(k)
                    if self.mul(bij, bk) != self.mul(bi, self.mul(self.basis_element(j), bk)):
                        raise FrobeniusError(f"associativity fails on ({self.basis[i]},{self.basis[j]},{self.basis[k]})")
        for i in range(d):
            for j in range(d):
                s = -1 if self.parity[i] & self.parity[j] else 1
                if self.tr_basis_product(i, j) != s * self.tr_basis_product(j, i):
                    raise FrobeniusError(f"trace is not supersymmetric on ({self.basis[i]},{self.basis[j]})")

    @cached_property
    def gram(self) -> List[List[Scalar]]:
        return [[self.tr_basis_product(i, j) for j in range(self.dim)] for i in range(self.dim)]

    def _compute_dual(self) -> List[AlgebraElement]:
        try:
            inv = linalg.inverse(self.gram)
        except ZeroDivisionError:
            raise FrobeniusError("not a Frobenius form: the Gram matrix tr(b_i b_j) is singular") from None
        # tr(b_i^v b_j) = delta_ij with b_i^v = sum_k D[i][k] b_k means D G = I
        return [AlgebraElement(self, inv[i]) for i in range(self.dim)]

    # derived data -------------------------------------------------------------
    def dual_basis(self) -> List[AlgebraElement]:
        """The left dual basis ``b^v`` with ``tr(b^v c) = delta_{b,c}``."""
        return list(self._dual)

    def dual(self, i: int) -> AlgebraElement:
        return self._dual[i]

    def dagger(self, a: AlgebraElement) -> AlgebraElement:
        """``a^† = z * sum_b (-1)^(|a||b|) b a b^v`` for homogeneous ``a``."""
        pa = a.parity
        if pa is None:
            parts = [self.dagger(self._homogeneous_part(a, p)) for p in (0, 1)]
            return parts[0] + parts[1]
        out = self.zero
        for i in range(self.dim):
            term = self.mul(self.mul(self.basis_element(i), a), self._dual[i])
            out = out - term if pa & self.parity[i] else out + term
        return out * Z

    def _homogeneous_part(self, a, p):
        return AlgebraElement(self, [c if self.parity[i] == p else ZERO for i, c in enumerate(a.coords)])

    @cached_property
    def is_even(self) -> bool:
        return not any(self.parity)

    @cached_property
    def teleporter_table(self) -> List[TeleporterEntry]:
        """``z * sum_b b (higher token) ⊗ b^v (lower token)``."""
        return [TeleporterEntry(i, self._dual[i], Z, self.parity[i]) for i in range(self.dim)]

    @cached_property
    def casimir(self) -> Dict[Tuple[int, int], Scalar]:
        """``sum_b b ⊗ b^v`` as a dict over basis index pairs (upper, lower)."""
        out: Dict[Tuple[int, int], Scalar] = {}
        for i in range(self.dim):
            for j, c in self._dual[i].support().items():
                out[(i, j)] = out.get((i, j), ZERO) + c
        return {k: v for k, v in out.items() if v}

    def supercommutator(self, a: AlgebraElement, b: AlgebraElement) -> AlgebraElement:
        s = -1 if (a.parity or 0) & (b.parity or 0) else 1
        return self.mul(a, b) - self.mul(b, a) * s

    @cached_property
    def _cocenter_data(self):
        d = self.dim
        rows = []
        for i in range(d):
            for j in range(d):
                c = self.supercommutator(self.basis_element(i), self.basis_element(j))
                if not c.is_zero():
                    rows.append(list(c.coords))
        # echelon on reversed columns so the complement uses early basis elements
        rev = [list(reversed(r)) for r in rows]
        red, piv = linalg.rref(rev, d) if rev else ([], [])
        piv_cols = [d - 1 - p for p in piv]
        reps = [i for i in range(d) if i not in piv_cols]
        red_rows = [list(reversed(r)) for r in red]
        return reps, list(zip(piv_cols, red_rows))

    def cocenter_basis(self) -> List[int]:
        """Basis indices whose classes form the chosen basis of the cocenter."""
        return list(self._cocenter_data[0])

    def cocenter_coords(self, a: AlgebraElement) -> List[Scalar]:
        """Coordinates of the class of ``a`` on :meth:`cocenter_basis`."""
        reps, rows = self._cocenter_data
        v = list(a.coords)
        for p, row in rows:
            if v[p]:
                f = v[p]
                v = [x - f * y for x, y in zip(v, row)]
        return [v[i] for i in reps]

    def center_basis(self) -> List[AlgebraElement]:
        """Homogeneous basis of the supercenter."""
        out = []
        d = self.dim
        for p in (0, 1):
            idx = [i for i in range(d) if self.parity[i] == p]
            if not idx:
                continue
            rows = []
            for j in range(d):
                bj = self.basis_element(j)
                cols = [self.supercommutator(self.basis_element(i), bj).coords for i in idx]
                for k in range(d):
                    rows.append([col[k] for col in cols])
            for v in linalg.nullspace([r for r in rows if any(r)], len(idx)):
                coords = [ZERO] * d
                for i, c in zip(idx, v):
                    coords[i] = Scalar.coerce(c)
                out.append(AlgebraElement(self, coords))
        return out

    def center_cocenter(self):
        """Return ``(center basis, cocenter representatives)``; checks the pairing."""
        zs = self.center_basis()
        reps = [self.basis_element(i) for i in self.cocenter_basis()]
        pairing = [[self.tr(self.mul(zz, c)) for c in reps] for zz in zs]
        if len(zs) != len(reps) or linalg.rank(pairing) != len(zs):
            raise FrobeniusError("center/cocenter pairing is degenerate")
        return zs, reps

    def is_central(self, a: AlgebraElement) -> bool:
        return all(self.supercommutator(a, self.basis_element(j)).is_zero() for j in range(self.dim))

    def parse_element(self, text: str) -> AlgebraElement:
        """Parse a basis name or ``coeff*name + ...`` sum."""
        from heiscat.core import parse_scalar

        text = text.strip()
        if text in self.basis:
            return self.basis_element(self.index(text))
        out = self.zero
        for sign, chunk in _split_terms(text):
            if "*" in chunk and chunk.rsplit("*", 1)[1].strip() in self.basis:
                coef, name = chunk.rsplit("*", 1)
                c = parse_scalar(coef)
            else:
                name, c = chunk, ONE
            out = out + self.basis_element(self.index(name.strip())) * (c * sign)
        return out

    # serialization --------------------------------------------------------
    def to_json(self) -> dict:
        d = self.dim
        return {
            "name": self.name,
            "basis": self.basis,
            "parity": self.parity,
            "unit": [str(c) for c in self.unit_coords],
            "mult": [[[str(self._mult[i][j].get(k, ZERO)) for k in range(d)] for j in range(d)] for i in range(d)],
            "trace": [str(c) for c in self.trace],
        }

    @classmethod
    def from_json(cls, data) -> "FrobeniusSuperalgebra":
        if isinstance(data, str):
            data = json.loads(data)
        for key in ("basis", "parity", "unit", "mult", "trace"):
            if key not in data:
                raise FrobeniusError(f"algebra JSON is missing {key!r}")
        return cls(data.get("name", "custom"), data["basis"], data["parity"], data["unit"], data["mult"], data["trace"])

    def __repr__(self):
        return f"FrobeniusSuperalgebra({self.name!r}, dim={self.dim})"


def _split_terms(text):
    depth = 0
    cur = ""
    sign = 1
    out = []
    for ch in text:
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        if depth == 0 and ch in "+-" and cur.strip() and not cur.rstrip().endswith(("*", "/", "^")):
            out.append((sign, cur.strip()))
            sign = 1 if ch == "+" else -1
            cur = ""
            continue
        if depth == 0 and ch == "-" and not cur.strip():
            sign = -sign
            continue
        cur += ch
    if cur.strip():
        out.append((sign, cur.strip()))
    return out


# built-in algebras ------------------------------------------------------------


def _table(d, prod):
    mult = []
    for i in range(d):
        row = []
        for j in range(d):
            v = [0] * d
            for k, c in prod(i, j).items():
                v[k] += c
            row.append(v)
        mult.append(row)
    return mult


def trivial() -> FrobeniusSuperalgebra:
    """The ground field with ``tr = id``."""
    return FrobeniusSuperalgebra("trivial", ["1"], [0], [1], [[[1]]], [1])


def group_algebra(d: int) -> FrobeniusSuperalgebra:
    """Group algebra of the cyclic group of order ``d``; trace picks the identity coefficient."""
    if d < 1:
        raise ValueError("group order must be positive")
    names = ["e"] if d == 1 else ["e", "g"] + [f"g{i}" for i in range(2, d)]
    mult = _table(d, lambda i, j: {(i + j) % d: 1})
    unit = [1] + [0] * (d - 1)
    trace = [1] + [0] * (d - 1)
    return FrobeniusSuperalgebra(f"C{d}", names, [0] * d, unit, mult, trace)


def truncated(n: int, odd: bool = False) -> FrobeniusSuperalgebra:
    """``k[c]/(c^n)`` with trace reading off the top coefficient.

    An odd ``c`` is only admissible for ``n == 2``, and even then no even
    nondegenerate trace exists, so ``odd=True`` always fails validation; use
    :func:`exterior` for an odd test algebra.
    """
    if n < 1:
        raise ValueError("n must be positive")
    if odd and n != 2:
        raise FrobeniusError("c may be odd only when n = 2")
    names = ["1", "c"] + [f"c^{i}" for i in range(2, n)]
    names = names[:n]
    mult = _table(n, lambda i, j: {i + j: 1} if i + j < n else {})
    parity = [i % 2 if odd else 0 for i in range(n)]
    unit = [1] + [0] * (n - 1)
    trace = [0] * (n - 1) + [1]
    return FrobeniusSuperalgebra("dual" if n == 2 and not odd else f"trunc{n}", names, parity, unit, mult, trace)


def dual_numbers() -> FrobeniusSuperalgebra:
    return truncated(2)


def exterior() -> FrobeniusSuperalgebra:
    """Exterior algebra on two odd generators, ``tr(c1 c2) = 1``."""
    names = ["1", "c1", "c2", "c1c2"]

    def prod(i, j):
        table = {
            (0, 0): {0: 1}, (0, 1): {1: 1}, (0, 2): {2: 1}, (0, 3): {3: 1},
            (1, 0): {1: 1}, (1, 2): {3: 1},
            (2, 0): {2: 1}, (2, 1): {3: -1},
            (3, 0): {3: 1},
        }
        return table.get((i, j), {})

    return FrobeniusSuperalgebra("ext2", names, [0, 1, 1, 0], [1, 0, 0, 0], _table(4, prod), [0, 0, 0, 1])


def matrix_algebra(m: int = 2) -> FrobeniusSuperalgebra:
    """Full matrix algebra ``M_m`` with the usual trace.

    The basis is ``1`` followed by the matrix units ``E_ij`` except ``E_mm``
    (which is ``1`` minus the other diagonal units), so the unit is a basis
    element.
    """
    units = [(i, j) for i in range(m) for j in range(m) if (i, j) != (m - 1, m - 1)]
    names = ["1"] + [f"E{i + 1}{j + 1}" for i, j in units]
    pos = {u: k + 1 for k, u in enumerate(units)}

    def as_vec(i, j):
        if (i, j) != (m - 1, m - 1):
            return {pos[(i, j)]: 1}
        out = {0: 1}
        for d in range(m - 1):
            out[pos[(d, d)]] = -1
        return out

    def unit_vec(a):
        if a == 0:
            return None
        return units[a - 1]

    def prod(a, b):
        if a == 0:
            return {b: 1}
        if b == 0:
            return {a: 1}
        (i, j), (k, l) = unit_vec(a), unit_vec(b)
        return as_vec(i, l) if j == k else {}

    n = len(names)
    unit = [1] + [0] * (n - 1)
    trace = [m] + [1 if i == j else 0 for i, j in units]
    return FrobeniusSuperalgebra(f"M{m}", names, [0] * n, unit, _table(n, prod), trace)


BUILTINS = {
    "trivial": trivial,
    "C2": lambda: group_algebra(2),
    "C3": lambda: group_algebra(3),
    "dual": dual_numbers,
    "trunc3": lambda: truncated(3),
    "ext2": exterior,
    "M2": lambda: matrix_algebra(2),
}

_CACHE: Dict[str, FrobeniusSuperalgebra] = {}


def builtin(name: str) -> FrobeniusSuperalgebra:
    """Return a cached built-in algebra by name (see ``BUILTINS``)."""
    if name not in BUILTINS:
        raise KeyError(f"unknown algebra {name!r}; choose from {', '.join(BUILTINS)}")
    if name not in _CACHE:
        _CACHE[name] = BUILTINS[name]()
    return _CACHE[name]


def load(source: str) -> FrobeniusSuperalgebra:
    """Load a built-in by name or a JSON file by path."""
    if source in BUILTINS:
        return builtin(source)
    with open(source) as fh:
        return FrobeniusSuperalgebra.from_json(json.load(fh))
