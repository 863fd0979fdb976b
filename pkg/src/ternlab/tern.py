"""Finite ternary operation tables and the axioms of terns.

A table over the carrier ``{0, ..., q-1}`` stores ``abcT`` as ``entries[a, b, c]``.
Nothing about a table is trusted: axiom status is always recomputed.

Axioms (all quantifiers range over the carrier)::

    A1   abaT = b
    A2L  ab(bacT)T = c
    A2M  a(bcaT)bT = c
    A2R  (cabT)baT = c
    A3L  (abcT)cdT = [ab(bcdT)T](bcdT)dT
    A3R  ab(bcdT)T = a(abcT)[(abcT)cdT]T

A *tern* satisfies all six.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .errors import InputError, ResourceLimitError

AXIOMS = ("A1", "A2L", "A2M", "A2R", "A3L", "A3R")

# number of quantified variables per axiom
_ARITY = {"A1": 2, "A2L": 3, "A2M": 3, "A2R": 3, "A3L": 4, "A3R": 4}

ENUMERATION_BOUND = 4


class TernTable:
    """Immutable ternary operation on ``{0, ..., q-1}``."""

    __slots__ = ("_entries",)

    def __init__(self, entries):
        arr = np.array(entries, dtype=np.int64)
        if arr.ndim == 1:
            q = round(len(arr) ** (1 / 3))
            if q**3 != len(arr):
                raise InputError(f"flat table of length {len(arr)} is not a cube")
            arr = arr.reshape(q, q, q)
        if arr.ndim != 3 or len(set(arr.shape)) != 1 or arr.shape[0] == 0:
            raise InputError(f"table must have shape (q, q, q), got {arr.shape}")
        q = arr.shape[0]
        if arr.min() < 0 or arr.max() >= q:
            raise InputError(f"table entries must lie in 0..{q - 1}")
        arr.flags.writeable = False
        self._entries = arr

    @property
    def order(self) -> int:
        return self._entries.shape[0]

    @property
    def entries(self) -> np.ndarray:
        return self._entries

    def apply(self, a: int, b: int, c: int) -> int:
        q = self.order
        if not (0 <= a < q and 0 <= b < q and 0 <= c < q):
            raise InputError(f"({a}, {b}, {c}) out of range for order {q}")
        return int(self._entries[a, b, c])

    __call__ = apply

    def relabel(self, perm) -> TernTable:
        """Image of the table under the bijection ``x -> perm[x]`` on every slot."""
        perm = np.asarray(perm, dtype=np.int64)
        inv = np.argsort(perm)
        t = self._entries
        return TernTable(perm[t[np.ix_(inv, inv, inv)]])

    def flat(self) -> list[int]:
        return [int(v) for v in self._entries.ravel()]

    def __eq__(self, other):
        if not isinstance(other, TernTable):
            return NotImplemented
        return self.order == other.order and np.array_equal(self._entries, other._entries)

    def __hash__(self):
        return hash(self._entries.tobytes())

    def __repr__(self):
        return f"TernTable(order={self.order})"

    def to_json(self) -> dict:
        return {"order": self.order, "entries": self.flat()}


class GroupTable:
    """A finite group given by its multiplication table, validated on construction."""

    def __init__(self, product):
        arr = np.array(product, dtype=np.int64)
        if arr.ndim == 1:
            g = round(len(arr) ** 0.5)
            if g * g != len(arr):
                raise InputError(f"flat product of length {len(arr)} is not a square")
            arr = arr.reshape(g, g)
        if arr.ndim != 2 or arr.shape[0] != arr.shape[1] or arr.shape[0] == 0:
            raise InputError(f"product must have shape (g, g), got {arr.shape}")
        g = arr.shape[0]
        if arr.min() < 0 or arr.max() >= g:
            raise InputError(f"product entries must lie in 0..{g - 1}")
        idx = np.arange(g)
        if not np.array_equal(arr[arr], arr[:, arr]):
            # arr[arr][x, y, z] = (xy)z, arr[:, arr][x, y, z] = x(yz)
            raise InputError("product is not associative")
        ids = [e for e in range(g) if np.array_equal(arr[e], idx) and np.array_equal(arr[:, e], idx)]
        if not ids:
            raise InputError("product has no identity element")
        e = ids[0]
        inverse = np.full(g, -1, dtype=np.int64)
        for x in range(g):
            hits = np.flatnonzero(arr[x] == e)
            if len(hits) != 1 or arr[hits[0], x] != e:
                raise InputError(f"element {x} has no two-sided inverse")
            inverse[x] = hits[0]
        arr.flags.writeable = False
        inverse.flags.writeable = False
        self.product = arr
        self.identity = e
        self.inverse = inverse

    @property
    def order(self) -> int:
        return self.product.shape[0]

    def mul(self, *xs: int) -> int:
        acc = self.identity
        for x in xs:
            acc = int(self.product[acc, x])
        return acc

    def to_json(self) -> dict:
        return {"order": self.order, "product": [int(v) for v in self.product.ravel()]}


def cyclic_group(n: int) -> GroupTable:
    idx = np.arange(n)
    return GroupTable((idx[:, None] + idx[None, :]) % n)


def symmetric_group(k: int) -> GroupTable:
    """S_k on permutations listed in lexicographic order; ``(p*q)(i) = p(q(i))``."""
    perms = list(itertools.permutations(range(k)))
    index = {p: i for i, p in enumerate(perms)}
    prod = [[index[tuple(p[j] for j in r)] for r in perms] for p in perms]
    return GroupTable(prod)


# -- constructors -----------------------------------------------------------


def make_affine(n: int) -> TernTable:
    """The tern R_n: ``pqrT = p + q - r (mod n)``."""
    if n < 1:
        raise InputError("order must be at least 1")
    i = np.arange(n)
    return TernTable((i[:, None, None] + i[None, :, None] - i[None, None, :]) % n)


GROUP_VARIANTS = ("x*z^-1*y", "a^-1*b*c", "a*b*c^-1", "a*b^-1*c")
_VARIANT_ALIASES = {"tern": "x*z^-1*y", "T": "a^-1*b*c", "Tbar": "a*b*c^-1", "T2": "a*b^-1*c"}


def make_group_tern(group: GroupTable, variant: str = "x*z^-1*y") -> TernTable:
    """Ternary operation derived from a group.

    ``variant`` is one of ``x*z^-1*y`` (the group tern), ``a^-1*b*c``,
    ``a*b*c^-1`` or ``a*b^-1*c``; the aliases ``tern``, ``T``, ``Tbar`` and
    ``T2`` name the same four.
    """
    variant = _VARIANT_ALIASES.get(variant, variant)
    P, inv = group.product, group.inverse
    g = np.arange(group.order)
    a, b, c = g[:, None, None], g[None, :, None], g[None, None, :]
    if variant == "x*z^-1*y":
        t = P[P[a, inv[c]], b]
    elif variant == "a^-1*b*c":
        t = P[P[inv[a], b], c]
    elif variant == "a*b*c^-1":
        t = P[P[a, b], inv[c]]
    elif variant == "a*b^-1*c":
        t = P[P[a, inv[b]], c]
    else:
        raise InputError(f"unknown group variant {variant!r}")
    return TernTable(np.broadcast_to(t, (group.order,) * 3))


def hat(tbl: TernTable) -> TernTable:
    """Argument reversal: ``xyz T^ = zyx T``."""
    return TernTable(np.transpose(tbl.entries, (2, 1, 0)))


# -- axioms -----------------------------------------------------------------


def _axiom_sides(t: np.ndarray, name: str):
    q = t.shape[0]
    n = _ARITY[name]
    grids = np.indices((q,) * n, sparse=True)
    if name == "A1":
        a, b = grids
        return t[a, b, a], np.broadcast_to(b, (q, q))
    if name == "A2L":
        a, b, c = grids
        return t[a, b, t[b, a, c]], np.broadcast_to(c, (q,) * 3)
    if name == "A2M":
        a, b, c = grids
        return t[a, t[b, c, a], b], np.broadcast_to(c, (q,) * 3)
    if name == "A2R":
        a, b, c = grids
        return t[t[c, a, b], b, a], np.broadcast_to(c, (q,) * 3)
    a, b, c, d = grids
    abc = t[a, b, c]
    bcd = t[b, c, d]
    if name == "A3L":
        return t[abc, c, d], t[t[a, b, bcd], bcd, d]
    if name == "A3R":
        return t[a, b, bcd], t[a, abc, t[abc, c, d]]
    raise InputError(f"unknown axiom {name!r}")


def axiom_holds_at(tbl: TernTable, name: str, args) -> bool:
    """Evaluate one instance of an axiom by scalar lookups."""
    T = tbl.apply
    if name == "A1":
        a, b = args
        return T(a, b, a) == b
    if name == "A2L":
        a, b, c = args
        return T(a, b, T(b, a, c)) == c
    if name == "A2M":
        a, b, c = args
        return T(a, T(b, c, a), b) == c
    if name == "A2R":
        a, b, c = args
        return T(T(c, a, b), b, a) == c
    a, b, c, d = args
    if name == "A3L":
        return T(T(a, b, c), c, d) == T(T(a, b, T(b, c, d)), T(b, c, d), d)
    if name == "A3R":
        abc = T(a, b, c)
        return T(a, b, T(b, c, d)) == T(a, abc, T(abc, c, d))
    raise InputError(f"unknown axiom {name!r}")


@dataclass(frozen=True)
class AxiomReport:
    """Per-axiom outcome; a failing axiom maps to its lexicographically first witness."""

    results: dict = field(default_factory=dict)

    def passed(self, name: str) -> bool:
        return self.results[name] is None

    @property
    def all_passed(self) -> bool:
        return all(w is None for w in self.results.values())

    @property
    def failures(self) -> dict:
        return {k: w for k, w in self.results.items() if w is not None}

    def __bool__(self):
        return self.all_passed

    def to_json(self) -> dict:
        return {
            k: {"status": "pass"} if w is None else {"status": "fail", "witness": list(w)}
            for k, w in self.results.items()
        }


def first_witness(tbl: TernTable, name: str):
    lhs, rhs = _axiom_sides(tbl.entries, name)
    diff = np.broadcast_to(lhs != rhs, (tbl.order,) * _ARITY[name])
    bad = np.flatnonzero(diff)
    if len(bad) == 0:
        return None
    return tuple(int(i) for i in np.unravel_index(bad[0], diff.shape))


def check_axioms(tbl: TernTable, axioms=AXIOMS) -> AxiomReport:
    for name in axioms:
        if name not in _ARITY:
            raise InputError(f"unknown axiom {name!r}")
    return AxiomReport({name: first_witness(tbl, name) for name in axioms})


def is_tern(tbl: TernTable) -> bool:
    return check_axioms(tbl).all_passed


@dataclass(frozen=True)
class QuasigroupCheck:
    """Outcome of the Latin-cube test.

    On failure ``witness`` is ``(slot, u, v)``: the section obtained by fixing
    the two arguments other than ``slot`` to ``u`` and ``v`` (in argument
    order) is not a bijection.
    """

    witness: tuple | None = None

    def __bool__(self):
        return self.witness is None


def is_ternary_quasigroup(tbl: TernTable) -> QuasigroupCheck:
    """Every section in each of the three slots must be a permutation.

    For a finite carrier this is equivalent to the four-direction condition:
    any three of ``(x1, x2, x3, x0)`` with ``x1 x2 x3 T = x0`` fix the fourth.
    """
    t = tbl.entries
    q = tbl.order
    target = np.arange(q)
    found = []
    for slot in range(3):
        lines = np.sort(np.moveaxis(t, slot, -1), axis=-1)
        bad = np.argwhere(np.any(lines != target, axis=-1))
        if len(bad):
            u, v = (int(i) for i in bad[0])
            found.append((slot, u, v))
    if not found:
        return QuasigroupCheck()
    # a failure in slot 0 is reported before slot 1, and so on
    return QuasigroupCheck(found[0])


# -- enumeration -------------------------------------------------------------


def _canonical(t: np.ndarray) -> tuple:
    q = t.shape[0]
    best = None
    for perm in itertools.permutations(range(q)):
        p = np.array(perm)
        inv = np.argsort(p)
        key = tuple(p[t[np.ix_(inv, inv, inv)]].ravel().tolist())
        if best is None or key < best:
            best = key
    return best


def canonical_form(tbl: TernTable) -> TernTable:
    """Lexicographically least relabeling of ``tbl``."""
    return TernTable(_canonical(tbl.entries))


def _instances(q: int):
    """Every quantified instance of every axiom as a (name, args) pair."""
    for name in AXIOMS:
        for args in itertools.product(range(q), repeat=_ARITY[name]):
            yield name, args


def _partial_eval(t, name, args):
    """Evaluate an axiom instance on a partial table (-1 = unset).

    Returns True/False when decided, None when some lookup is still unset.
    """

    def T(a, b, c):
        if a < 0 or b < 0 or c < 0:
            return -1
        return t[a][b][c]

    if name == "A1":
        a, b = args
        lhs, rhs = T(a, b, a), b
    elif name == "A2L":
        a, b, c = args
        lhs, rhs = T(a, b, T(b, a, c)), c
    elif name == "A2M":
        a, b, c = args
        lhs, rhs = T(a, T(b, c, a), b), c
    elif name == "A2R":
        a, b, c = args
        lhs, rhs = T(T(c, a, b), b, a), c
    elif name == "A3L":
        a, b, c, d = args
        bcd = T(b, c, d)
        lhs, rhs = T(T(a, b, c), c, d), T(T(a, b, bcd), bcd, d)
    else:
        a, b, c, d = args
        abc = T(a, b, c)
        lhs, rhs = T(a, b, T(b, c, d)), T(a, abc, T(abc, c, d))
    if lhs < 0 or rhs < 0:
        return None
    return lhs == rhs


def enumerate_terns(q: int, require_quasigroup: bool = False, bound: int = ENUMERATION_BOUND) -> list[TernTable]:
    """All terns of order ``q`` up to simultaneous relabeling of every slot.

    Backtracking fills entries in lexicographic order after seeding ``abaT = b``.
    Latin-cube pruning is always sound here: A2L, A2M and A2R each make one
    slot's sections injective, so every tern is a ternary quasigroup and
    ``require_quasigroup`` cannot shrink the result.
    """
    if q < 1:
        raise InputError("order must be at least 1")
    if q > bound:
        raise ResourceLimitError(f"enumeration of order {q} exceeds bound {bound}")

    t = [[[-1] * q for _ in range(q)] for _ in range(q)]
    # used[slot][(u, v)] = set of values already on that line
    used = [[[set() for _ in range(q)] for _ in range(q)] for _ in range(3)]

    def lines(a, b, c):
        return used[0][b][c], used[1][a][c], used[2][a][b]

    def place(a, b, c, v):
        for s in lines(a, b, c):
            if v in s:
                return False
        for s in lines(a, b, c):
            s.add(v)
        t[a][b][c] = v
        return True

    def unplace(a, b, c):
        v = t[a][b][c]
        for s in lines(a, b, c):
            s.discard(v)
        t[a][b][c] = -1

    for a in range(q):
        for b in range(q):
            if not place(a, b, a, b):
                return []

    free = [(a, b, c) for a in range(q) for b in range(q) for c in range(q) if t[a][b][c] < 0]
    found: dict[tuple, TernTable] = {}

    def settle(pending):
        """Split ``pending`` into still-undecided instances; None on a violation."""
        rest = []
        for name, args in pending:
            verdict = _partial_eval(t, name, args)
            if verdict is False:
                return None
            if verdict is None:
                rest.append((name, args))
        return rest

    def recurse(k, pending):
        if k == len(free):
            tbl = TernTable(t)
            if check_axioms(tbl).all_passed and (not require_quasigroup or is_ternary_quasigroup(tbl)):
                key = _canonical(tbl.entries)
                found.setdefault(key, TernTable(key))
            return
        a, b, c = free[k]
        for v in range(q):
            if place(a, b, c, v):
                rest = settle(pending)
                if rest is not None:
                    recurse(k + 1, rest)
                unplace(a, b, c)

    pending = settle(list(_instances(q)))
    if pending is not None:
        recurse(0, pending)
    return [found[k] for k in sorted(found)]


# -- files -------------------------------------------------------------------


def table_from_json(obj: dict) -> TernTable:
    try:
        q = int(obj["order"])
        entries = obj["entries"]
    except (KeyError, TypeError, ValueError) as exc:
        raise InputError(f"malformed table: {exc}") from exc
    if len(entries) != q**3:
        raise InputError(f"expected {q**3} entries for order {q}, got {len(entries)}")
    return TernTable(np.array(entries).reshape(q, q, q))


def group_from_json(obj: dict) -> GroupTable:
    try:
        g = int(obj["order"])
        product = obj["product"]
    except (KeyError, TypeError, ValueError) as exc:
        raise InputError(f"malformed group: {exc}") from exc
    if len(product) != g * g:
        raise InputError(f"expected {g * g} product entries for order {g}, got {len(product)}")
    return GroupTable(np.array(product).reshape(g, g))


def _read_json(path):
    try:
        return json.loads(Path(path).read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        raise InputError(f"cannot read {path}: {exc}") from exc


def load_table(path) -> TernTable:
    """Read a table file; a group file (with ``product``) yields its group tern."""
    obj = _read_json(path)
    if isinstance(obj, dict) and "product" in obj:
        return make_group_tern(group_from_json(obj), obj.get("variant", "x*z^-1*y"))
    return table_from_json(obj)


def load_group(path) -> GroupTable:
    return group_from_json(_read_json(path))
