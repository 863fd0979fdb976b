"""Cochains with values in Z_m, cocycle conditions, pairings and state sums.

A degree-1 cocycle is a function ``f: X^3 -> Z_m`` that vanishes on every
``(a, b, a)`` and kills every boundary ``d(a, b, c, d)``.  Summing
``t^{f(cycle)}`` over all colorings of a diagram gives an element of the group
ring ``Z[Z_m]`` that is unchanged by Reidemeister moves.
"""

from __future__ import annotations

import itertools
import json
from collections import Counter
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .chains import ChainVector, boundary_terms, is_degenerate
from .diagram import Diagram, enumerate_colorings, extract_cycle
from .errors import InputError
from .homology import smith_from_columns
from .tern import TernTable


class Cochain:
    """Function ``X^arity -> Z_m`` stored as a dense array of residues."""

    __slots__ = ("modulus", "values")

    def __init__(self, modulus: int, values):
        if modulus < 2:
            raise InputError("modulus must be at least 2")
        arr = np.array(values, dtype=np.int64) % modulus
        if arr.ndim < 1 or len(set(arr.shape)) != 1:
            raise InputError(f"cochain values must be a cube array, got shape {arr.shape}")
        arr.flags.writeable = False
        self.modulus = int(modulus)
        self.values = arr

    @classmethod
    def zero(cls, q: int, modulus: int, arity: int = 3) -> Cochain:
        return cls(modulus, np.zeros((q,) * arity, dtype=np.int64))

    @classmethod
    def from_terms(cls, q: int, modulus: int, terms, arity: int = 3) -> Cochain:
        """Sum of ``value * chi_tuple`` over ``(tuple, value)`` pairs."""
        arr = np.zeros((q,) * arity, dtype=np.int64)
        for args, v in terms:
            args = tuple(args)
            if len(args) != arity or not all(0 <= a < q for a in args):
                raise InputError(f"bad cochain argument {args} for order {q}, arity {arity}")
            arr[args] += v
        return cls(modulus, arr)

    @property
    def order(self) -> int:
        return self.values.shape[0]

    @property
    def arity(self) -> int:
        return self.values.ndim

    def __call__(self, *args) -> int:
        return int(self.values[args])

    def __eq__(self, other):
        if not isinstance(other, Cochain):
            return NotImplemented
        return self.modulus == other.modulus and np.array_equal(self.values, other.values)

    def __add__(self, other):
        return Cochain(self.modulus, self.values + other.values)

    def __sub__(self, other):
        return Cochain(self.modulus, self.values - other.values)

    def __rmul__(self, k: int):
        return Cochain(self.modulus, k * self.values)

    def __repr__(self):
        return f"Cochain(modulus={self.modulus}, support={len(self.support())})"

    def support(self) -> list[tuple[tuple, int]]:
        idx = np.argwhere(self.values)
        return [(tuple(int(i) for i in ix), int(self.values[tuple(ix)])) for ix in idx]

    def to_json(self) -> dict:
        return {
            "modulus": self.modulus,
            "order": self.order,
            "terms": [{"triple" if self.arity == 3 else "tuple": list(a), "value": v} for a, v in self.support()],
        }


def cochain_from_json(obj, q: int) -> Cochain:
    try:
        m = int(obj["modulus"])
        raw = obj["terms"]
    except (KeyError, TypeError, ValueError) as exc:
        raise InputError(f"malformed cochain: {exc}") from exc
    if "order" in obj and int(obj["order"]) != q:
        raise InputError(f"cochain is for order {obj['order']}, table has order {q}")
    terms = []
    for t in raw:
        args = t.get("triple", t.get("tuple"))
        if args is None or "value" not in t:
            raise InputError(f"malformed cochain term {t!r}")
        terms.append((tuple(args), int(t["value"])))
    arity = len(terms[0][0]) if terms else int(obj.get("arity", 3))
    return Cochain.from_terms(q, m, terms, arity)


def load_cochain(path, q: int) -> Cochain:
    try:
        obj = json.loads(Path(path).read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        raise InputError(f"cannot read {path}: {exc}") from exc
    return cochain_from_json(obj, q)


# -- cocycle conditions -------------------------------------------------------


@dataclass(frozen=True)
class CocycleCheck:
    """``condition`` is ``"degenerate"`` or ``"boundary"`` on failure, ``None`` on success."""

    condition: str | None = None
    witness: tuple | None = None

    def __bool__(self):
        return self.condition is None

    def to_json(self) -> dict:
        if self.condition is None:
            return {"status": "pass"}
        return {"status": "fail", "condition": self.condition, "witness": list(self.witness)}


def _first(mask: np.ndarray):
    bad = np.flatnonzero(mask)
    if len(bad) == 0:
        return None
    return tuple(int(i) for i in np.unravel_index(bad[0], mask.shape))


def check_cocycle(tbl: TernTable, f: Cochain) -> CocycleCheck:
    """Check ``f(a, b, a) = 0`` and the six-term condition over every quadruple.

    Cochains of arity other than 3 are checked against the boundary operator
    directly: vanishing on degenerate tuples and ``f(d x) = 0`` for all ``x``.
    """
    if f.order != tbl.order:
        raise InputError(f"cochain order {f.order} does not match table order {tbl.order}")
    if f.arity != 3:
        return _check_cocycle_generic(tbl, f)
    T, F, m, q = tbl.entries, f.values, f.modulus, tbl.order
    a, b = np.indices((q, q), sparse=True)
    w = _first(np.broadcast_to(F[a, b, a] % m != 0, (q, q)))
    if w is not None:
        return CocycleCheck("degenerate", w)
    a, b, c, d = np.indices((q,) * 4, sparse=True)
    abc = T[a, b, c]
    bcd = T[b, c, d]
    total = F[b, c, d] - F[a, abc, T[abc, c, d]] - F[abc, c, d] + F[a, b, bcd] + F[T[a, b, bcd], bcd, d] - F[a, b, c]
    w = _first(np.broadcast_to(total % m != 0, (q,) * 4))
    if w is not None:
        return CocycleCheck("boundary", w)
    return CocycleCheck()


def _check_cocycle_generic(tbl: TernTable, f: Cochain) -> CocycleCheck:
    q, k = tbl.order, f.arity
    for args in itertools.product(range(q), repeat=k):
        if is_degenerate(args) and f(*args) % f.modulus:
            return CocycleCheck("degenerate", args)
    for args in itertools.product(range(q), repeat=k + 1):
        if evaluate(f, boundary_terms(tbl, "full", args)) % f.modulus:
            return CocycleCheck("boundary", args)
    return CocycleCheck()


def evaluate(f: Cochain, terms) -> int:
    """``sum(coeff * f(gen))`` reduced mod m, for a chain or (gen, coeff) pairs."""
    if isinstance(terms, ChainVector):
        terms = terms.terms.items()
    return sum(c * int(f.values[g]) for g, c in terms) % f.modulus


def pair(f: Cochain, z: ChainVector) -> int:
    """Evaluate a cochain on a chain of matching degree."""
    if z and z.degree != f.arity - 2:
        raise InputError(f"cannot pair an arity-{f.arity} cochain with a degree-{z.degree} chain")
    if any(max(g) >= f.order for g in z.terms):
        raise InputError("chain has entries outside the cochain's carrier")
    return evaluate(f, z)


def coboundary(tbl: TernTable, g, modulus: int) -> Cochain:
    """``(dg)(a, b, c) = g(b, c) - g(a, abcT) - g(abcT, c) + g(a, b)`` for ``g: X^2 -> Z_m``."""
    G = np.asarray(g, dtype=np.int64)
    q = tbl.order
    if G.shape != (q, q):
        raise InputError(f"g must have shape ({q}, {q})")
    a, b, c = np.indices((q,) * 3, sparse=True)
    abc = tbl.entries[a, b, c]
    return Cochain(modulus, G[b, c] - G[a, abc] - G[abc, c] + G[a, b])


# -- solution spaces mod m ----------------------------------------------------


def _kernel_mod(rows: list[dict[int, int]], ncols: int, m: int) -> list[np.ndarray]:
    """Generators of ``{x in Z_m^ncols : A x = 0 mod m}`` for sparse rows ``A``."""
    columns = [{} for _ in range(ncols)]
    for i, row in enumerate(rows):
        for j, v in row.items():
            columns[j][i] = v
    snf = smith_from_columns(len(rows), columns, transforms=True)
    gens = []
    for i in range(ncols):
        scale = m // np.gcd(snf.divisors[i], m) if i < snf.rank else 1
        vec = np.zeros(ncols, dtype=np.int64)
        for k, v in snf.V_cols[i].items():
            vec[k] = (scale * v) % m
        if vec.any():
            gens.append(vec)
    return gens


def solve_mod(columns: list[np.ndarray], target: np.ndarray, m: int) -> np.ndarray | None:
    """Some ``c`` with ``sum(c_i * columns[i]) = target (mod m)``, or ``None``."""
    target = np.asarray(target, dtype=np.int64).ravel() % m
    n = len(target)
    if not columns:
        return np.zeros(0, dtype=np.int64) if not target.any() else None
    cols = [{i: int(v) for i, v in enumerate(np.asarray(c).ravel()) if v} for c in columns]
    snf = smith_from_columns(n, cols, transforms=True)
    ut = snf.apply_U({i: int(v) for i, v in enumerate(target) if v})
    # solve d_i y_i = (U t)_i mod m, then c = V y
    y = {}
    for i, val in ut.items():
        val %= m
        if not val:
            continue
        if i >= snf.rank:
            return None
        d = snf.divisors[i]
        g = int(np.gcd(d, m))
        if val % g:
            return None
        inv = pow(d // g, -1, m // g) if m // g > 1 else 0
        y[i] = (val // g * inv) % (m // g)
    c = np.zeros(len(cols), dtype=np.int64)
    for i, yi in y.items():
        for k, v in snf.V_cols[i].items():
            c[k] += v * yi
    return c % m


@dataclass
class CocycleSpace:
    """Generators of the cocycle group and of its coboundary subgroup.

    ``coboundaries`` holds ``(g, dg)`` pairs so every generator can be traced
    back to the 2-cochain it comes from.
    """

    modulus: int
    cocycles: list[Cochain]
    coboundaries: list[tuple[np.ndarray, Cochain]]

    def contains(self, f: Cochain) -> bool:
        return solve_mod([c.values for c in self.cocycles], f.values, self.modulus) is not None

    def is_coboundary(self, f: Cochain) -> bool:
        return solve_mod([h.values for _, h in self.coboundaries], f.values, self.modulus) is not None


def cocycle_space(tbl: TernTable, modulus: int, arity: int = 3) -> CocycleSpace:
    """Solve both cocycle conditions as a linear system over Z_m."""
    q = tbl.order
    size = q**arity
    index = {t: i for i, t in enumerate(itertools.product(range(q), repeat=arity))}
    rows: list[dict[int, int]] = []
    for t, i in index.items():
        if is_degenerate(t):
            rows.append({i: 1})
    for x in itertools.product(range(q), repeat=arity + 1):
        row: dict[int, int] = {}
        for g, s in boundary_terms(tbl, "full", x):
            j = index[g]
            row[j] = row.get(j, 0) + s
        row = {j: v for j, v in row.items() if v}
        if row:
            rows.append(row)
    cocycles = [Cochain(modulus, v.reshape((q,) * arity)) for v in _kernel_mod(rows, size, modulus)]

    coboundaries = []
    if arity == 3:
        # image of the integer coboundary map; column (a, b) is d(chi_(a,b))
        basis2 = list(itertools.product(range(q), repeat=2))
        int_cols = []
        for a, b in basis2:
            chi = np.zeros((q, q), dtype=np.int64)
            chi[a, b] = 1
            int_cols.append(_integer_coboundary(tbl, chi))
        snf = smith_from_columns(size, int_cols, transforms=True)
        for i in range(snf.rank):
            if snf.divisors[i] % modulus == 0:
                continue
            g = np.zeros((q, q), dtype=np.int64)
            for k, v in snf.V_cols[i].items():
                g[basis2[k]] = v
            g %= modulus
            dg = coboundary(tbl, g, modulus)
            if dg.values.any() and check_cocycle(tbl, dg):
                coboundaries.append((g, dg))
    return CocycleSpace(modulus, cocycles, coboundaries)


def _integer_coboundary(tbl: TernTable, g: np.ndarray) -> dict[int, int]:
    q = tbl.order
    a, b, c = np.indices((q,) * 3, sparse=True)
    abc = tbl.entries[a, b, c]
    vals = (g[b, c] - g[a, abc] - g[abc, c] + g[a, b]).ravel()
    return {i: int(v) for i, v in enumerate(vals) if v}


# -- state sums -----------------------------------------------------------------


class GroupRingElement:
    """Element of ``Z[Z_m]``; ``multiplicities[k]`` is the coefficient of ``t^k``."""

    __slots__ = ("modulus", "multiplicities")

    def __init__(self, modulus: int, multiplicities):
        mult = Counter()
        items = multiplicities.items() if isinstance(multiplicities, dict) else enumerate(multiplicities)
        for k, n in items:
            mult[int(k) % modulus] += int(n)
        self.modulus = modulus
        self.multiplicities = tuple(mult.get(k, 0) for k in range(modulus))

    @property
    def total(self) -> int:
        return sum(self.multiplicities)

    def __eq__(self, other):
        if not isinstance(other, GroupRingElement):
            return NotImplemented
        return self.modulus == other.modulus and self.multiplicities == other.multiplicities

    def __hash__(self):
        return hash((self.modulus, self.multiplicities))

    def __repr__(self):
        return f"GroupRingElement({self.modulus}, {list(self.multiplicities)})"

    def __str__(self):
        parts = []
        for k, n in enumerate(self.multiplicities):
            if not n:
                continue
            if k == 0:
                parts.append(f"{n}")
            else:
                power = "t" if k == 1 else f"t^{k}"
                parts.append(power if n == 1 else f"{n}{power}")
        return " + ".join(parts) if parts else "0"

    def to_json(self) -> dict:
        return {"modulus": self.modulus, "multiplicities": list(self.multiplicities), "polynomial": str(self)}


def state_sum(d: Diagram, tbl: TernTable, f: Cochain, check: bool = True) -> GroupRingElement:
    """``sum over colorings c of t^{f(cycle(c))}``."""
    if f.arity != d.dimension + 2:
        raise InputError(f"a dimension {d.dimension} diagram needs an arity-{d.dimension + 2} cochain")
    if check:
        result = check_cocycle(tbl, f)
        if not result:
            raise InputError(f"cochain is not a cocycle ({result.condition} condition fails at {result.witness})")
    counts = Counter(pair(f, extract_cycle(d, tbl, c)) for c in enumerate_colorings(d, tbl))
    return GroupRingElement(f.modulus, dict(counts))
