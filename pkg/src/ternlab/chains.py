"""Chains on tuples of tern elements, face maps and boundary operators.

A generator of ``C_n`` is a plain tuple ``(x_0, ..., x_{n+1})`` of length
``n + 2``; degree ``-1`` holds the 1-tuples so that ``d(a, b) = (b) - (a)``
has somewhere to land.  Coefficients are integers.
"""

from __future__ import annotations

from collections.abc import Iterable, Mapping

from .errors import InputError
from .tern import TernTable

VARIANTS = ("L", "R", "full")


def degree_of(t: tuple) -> int:
    return len(t) - 2


class ChainVector:
    """Sparse integer combination of generators of one degree.

    Terms are collected on construction and zero coefficients dropped, so
    two chains are equal exactly when their term maps are equal.
    """

    __slots__ = ("_terms", "degree")

    def __init__(self, degree: int, terms: Mapping | Iterable = ()):
        self.degree = degree
        acc: dict[tuple, int] = {}
        items = terms.items() if isinstance(terms, Mapping) else terms
        for gen, coeff in items:
            gen = tuple(int(x) for x in gen)
            if len(gen) != degree + 2:
                raise InputError(f"generator {gen} does not have degree {degree}")
            acc[gen] = acc.get(gen, 0) + int(coeff)
        self._terms = {g: c for g, c in acc.items() if c}

    @classmethod
    def generator(cls, t: Iterable[int], coeff: int = 1) -> ChainVector:
        t = tuple(t)
        return cls(degree_of(t), [(t, coeff)])

    @classmethod
    def zero(cls, degree: int) -> ChainVector:
        return cls(degree)

    @property
    def terms(self) -> dict[tuple, int]:
        return dict(self._terms)

    def items(self):
        return sorted(self._terms.items())

    def coefficient(self, t: tuple) -> int:
        return self._terms.get(tuple(t), 0)

    def is_zero(self) -> bool:
        return not self._terms

    def __bool__(self):
        return bool(self._terms)

    def __len__(self):
        return len(self._terms)

    def _check(self, other):
        if not isinstance(other, ChainVector):
            return NotImplemented
        if other.degree != self.degree and self._terms and other._terms:
            raise InputError(f"degree mismatch: {self.degree} vs {other.degree}")
        return other

    def __add__(self, other):
        if self._check(other) is NotImplemented:
            return NotImplemented
        deg = self.degree if self._terms else other.degree
        return ChainVector(deg, list(self._terms.items()) + list(other._terms.items()))

    def __sub__(self, other):
        if self._check(other) is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __neg__(self):
        return ChainVector(self.degree, {g: -c for g, c in self._terms.items()})

    def __rmul__(self, k: int):
        return ChainVector(self.degree, {g: k * c for g, c in self._terms.items()})

    __mul__ = __rmul__

    def __eq__(self, other):
        if not isinstance(other, ChainVector):
            return NotImplemented
        if not self._terms and not other._terms:
            return True
        return self.degree == other.degree and self._terms == other._terms

    def __hash__(self):
        return hash((self.degree, frozenset(self._terms.items())))

    def map(self, fn, degree: int) -> ChainVector:
        """Linear extension of ``fn``, which sends a generator to a generator or a chain."""
        out: dict[tuple, int] = {}
        for gen, coeff in self._terms.items():
            img = fn(gen)
            if not isinstance(img, ChainVector):
                img = ChainVector.generator(img)
            for g, c in img._terms.items():
                out[g] = out.get(g, 0) + coeff * c
        return ChainVector(degree, out)

    def __repr__(self):
        if not self._terms:
            return f"ChainVector({self.degree}, 0)"
        return f"ChainVector({self.degree}, {format_chain(self)})"

    def to_json(self) -> dict:
        return {"degree": self.degree, "terms": [{"tuple": list(g), "coeff": c} for g, c in self.items()]}


def format_chain(z: ChainVector) -> str:
    parts = []
    for gen, c in z.items():
        sign = "-" if c < 0 else "+"
        mag = "" if abs(c) == 1 else f"{abs(c)}"
        parts.append(f"{sign} {mag}({','.join(map(str, gen))})")
    if not parts:
        return "0"
    s = " ".join(parts)
    return s[2:] if s.startswith("+ ") else "-" + s[2:]


def substitute(t: tuple, k: int, tbl: TernTable) -> tuple:
    """``x[k]``: replace ``x_k`` by ``x_{k-1} x_k x_{k+1} T``."""
    n = degree_of(t)
    if not 1 <= k <= n:
        raise InputError(f"substitution index {k} outside 1..{n}")
    t = list(t)
    t[k] = tbl.apply(t[k - 1], t[k], t[k + 1])
    return tuple(t)


def _face_index(i: int, t: tuple) -> int:
    n = degree_of(t)
    if n < 0:
        raise InputError("degree -1 generators have no faces")
    if not 0 <= i <= n:
        raise InputError(f"face index {i} outside 0..{n}")
    return n


def face_L(tbl: TernTable, i: int, t: tuple) -> tuple:
    """Left face: coordinates ``1..n+1``, filled right to left.

    ``y_k = x_k`` for ``k > i`` and ``y_k = x_{k-1} x_k y_{k+1} T`` otherwise.
    """
    _face_index(i, t)
    T = tbl.entries
    y = list(t[1:])
    for k in range(i, 0, -1):
        # y[k-1] holds coordinate k
        y[k - 1] = int(T[t[k - 1], t[k], y[k]])
    return tuple(y)


def face_R(tbl: TernTable, i: int, t: tuple) -> tuple:
    """Right face: coordinates ``0..n``, filled left to right.

    ``y_k = x_k`` for ``k <= i`` and ``y_k = y_{k-1} x_k x_{k+1} T`` otherwise.
    """
    n = _face_index(i, t)
    T = tbl.entries
    y = list(t[: n + 1])
    for k in range(i + 1, n + 1):
        y[k] = int(T[y[k - 1], t[k], t[k + 1]])
    return tuple(y)


def face(tbl: TernTable, i: int, t: tuple) -> ChainVector:
    """Combined face ``d_i = d_i^L - d_i^R`` as a chain."""
    return ChainVector(degree_of(t) - 1, [(face_L(tbl, i, t), 1), (face_R(tbl, i, t), -1)])


def reverse(t):
    """Reverse a tuple, or every generator of a chain."""
    if isinstance(t, ChainVector):
        return ChainVector(t.degree, {g[::-1]: c for g, c in t.terms.items()})
    return tuple(t)[::-1]


def boundary_terms(tbl: TernTable, variant: str, t: tuple) -> list[tuple[tuple, int]]:
    """Uncollected signed faces of one generator."""
    n = degree_of(t)
    if n < 0:
        return []
    out = []
    for i in range(n + 1):
        sign = -1 if i % 2 else 1
        if variant in ("L", "full"):
            out.append((face_L(tbl, i, t), sign))
        if variant in ("R", "full"):
            out.append((face_R(tbl, i, t), -sign if variant == "full" else sign))
    return out


def boundary(tbl: TernTable, variant: str, c) -> ChainVector:
    """Apply ``d^L``, ``d^R`` or ``d = d^L - d^R`` to a chain or a single generator."""
    if variant not in VARIANTS:
        raise InputError(f"unknown variant {variant!r}; expected one of {VARIANTS}")
    if not isinstance(c, ChainVector):
        c = ChainVector.generator(c)
    out: dict[tuple, int] = {}
    for gen, coeff in c.terms.items():
        for g, s in boundary_terms(tbl, variant, gen):
            out[g] = out.get(g, 0) + coeff * s
    return ChainVector(c.degree - 1, out)


def is_degenerate(t: tuple) -> bool:
    return any(t[i] == t[i + 2] for i in range(len(t) - 2))


def project_nondegenerate(z: ChainVector) -> ChainVector:
    """Image of ``z`` in the quotient by the degenerate subcomplex."""
    return ChainVector(z.degree, {g: c for g, c in z.terms.items() if not is_degenerate(g)})


def in_degenerate_span(z: ChainVector) -> bool:
    return all(is_degenerate(g) for g in z.terms)
