"""Boundary matrices, Smith normal form over the integers, and homology groups.

Three complexes are available for each differential (``L``, ``R``, ``full``):
the full chain complex, the degenerate subcomplex spanned by tuples with
``x_i = x_{i+2}``, and the normalized quotient.  The quotient is realized on
the non-degenerate generators by discarding degenerate terms, which is exact
because the degenerate subcomplex is spanned by a subset of the basis.
"""

from __future__ import annotations

import itertools
import math
import os
from dataclasses import dataclass, field
from functools import reduce

from .chains import VARIANTS, ChainVector, boundary, boundary_terms, is_degenerate, project_nondegenerate
from .errors import AxiomError, InputError, ResourceLimitError, TernlabError
from .tern import TernTable, check_axioms

SUBCOMPLEXES = ("full", "degenerate", "normalized")

DEFAULT_MAX_GENERATORS = 10**6
MAX_GENERATORS_ENV = "TERNLAB_MAX_GENERATORS"

# axioms under which the degenerate span is closed under each differential
_CLOSURE_AXIOMS = {"L": ("A1", "A2L"), "R": ("A1", "A2R"), "full": ("A1", "A2L", "A2R")}


def max_generators() -> int:
    raw = os.environ.get(MAX_GENERATORS_ENV)
    if raw is None:
        return DEFAULT_MAX_GENERATORS
    try:
        return int(raw)
    except ValueError as exc:
        raise InputError(f"{MAX_GENERATORS_ENV} must be an integer, got {raw!r}") from exc


class NotACycleError(TernlabError):
    """Raised by :func:`cycle_class` when the chain has nonzero boundary."""

    def __init__(self, boundary: ChainVector):
        super().__init__(f"not a cycle; boundary is {boundary!r}")
        self.boundary = boundary


@dataclass(frozen=True)
class ComplexSelector:
    variant: str = "full"
    subcomplex: str = "full"

    def __post_init__(self):
        if self.variant not in VARIANTS:
            raise InputError(f"unknown variant {self.variant!r}")
        if self.subcomplex not in SUBCOMPLEXES:
            raise InputError(f"unknown subcomplex {self.subcomplex!r}")

    def required_axioms(self) -> tuple[str, ...]:
        if self.subcomplex == "full":
            return ()
        return _CLOSURE_AXIOMS[self.variant]

    def check(self, tbl: TernTable) -> None:
        needed = self.required_axioms()
        if not needed:
            return
        failures = check_axioms(tbl, needed).failures
        if failures:
            missing = ", ".join(f"{k} (witness {w})" for k, w in failures.items())
            raise AxiomError(f"{self.subcomplex} complex for variant {self.variant} needs {missing}")


# tern homology: combined differential on the normalized quotient
TERN = ComplexSelector("full", "normalized")


def basis(q: int | TernTable, n: int, subcomplex: str = "full") -> list[tuple]:
    """Generators of degree ``n`` in lexicographic order."""
    if isinstance(q, TernTable):
        q = q.order
    if n < -1:
        return []
    if subcomplex not in SUBCOMPLEXES:
        raise InputError(f"unknown subcomplex {subcomplex!r}")
    size = q ** (n + 2)
    limit = max_generators()
    if size > limit:
        raise ResourceLimitError(f"degree {n} over {q} elements has {size} generators (limit {limit})")
    gens = itertools.product(range(q), repeat=n + 2)
    if subcomplex == "degenerate":
        return [g for g in gens if is_degenerate(g)]
    if subcomplex == "normalized":
        return [g for g in gens if not is_degenerate(g)]
    return list(gens)


@dataclass
class BoundaryMatrix:
    """Sparse integer matrix of the differential out of degree ``degree``.

    ``columns[j]`` maps row indices to entries of the image of ``col_basis[j]``.
    """

    degree: int
    row_basis: list[tuple]
    col_basis: list[tuple]
    columns: list[dict[int, int]]

    @property
    def shape(self) -> tuple[int, int]:
        return len(self.row_basis), len(self.col_basis)

    def nnz(self) -> int:
        return sum(len(c) for c in self.columns)

    def to_dense(self) -> list[list[int]]:
        m, n = self.shape
        out = [[0] * n for _ in range(m)]
        for j, col in enumerate(self.columns):
            for i, v in col.items():
                out[i][j] = v
        return out

    def is_zero(self) -> bool:
        return not any(self.columns)

    def __matmul__(self, other: BoundaryMatrix) -> list[dict[int, int]]:
        """Columns of ``self @ other`` as sparse dicts."""
        if len(self.col_basis) != len(other.row_basis):
            raise InputError("matrix shapes do not compose")
        out = []
        for col in other.columns:
            acc: dict[int, int] = {}
            for k, v in col.items():
                for i, w in self.columns[k].items():
                    acc[i] = acc.get(i, 0) + v * w
            out.append({i: v for i, v in acc.items() if v})
        return out


def build_matrix(tbl: TernTable, n: int, sel: ComplexSelector = TERN) -> BoundaryMatrix:
    """Matrix of the differential ``C_n -> C_{n-1}`` for the selected complex."""
    sel.check(tbl)
    cols = basis(tbl, n, sel.subcomplex)
    rows = basis(tbl, n - 1, sel.subcomplex)
    index = {g: i for i, g in enumerate(rows)}
    columns = []
    for gen in cols:
        terms: dict[tuple, int] = {}
        for g, s in boundary_terms(tbl, sel.variant, gen):
            terms[g] = terms.get(g, 0) + s
        col: dict[int, int] = {}
        for g, v in terms.items():
            if not v:
                continue
            i = index.get(g)
            if i is None:
                if sel.subcomplex == "degenerate":
                    raise AxiomError(f"boundary of degenerate {gen} leaves the degenerate span at {g}")
                # normalized: degenerate terms vanish in the quotient
                continue
            col[i] = v
        columns.append(col)
    return BoundaryMatrix(n, rows, cols, columns)


# -- Smith normal form ---------------------------------------------------------


@dataclass
class SmithForm:
    """Elementary divisors ``d_1 | d_2 | ...`` and optional unimodular witnesses.

    When transforms were requested, ``U @ M @ V`` is diagonal with the divisors
    leading the diagonal.  ``U`` is stored as sparse rows and ``V`` as sparse
    columns.
    """

    shape: tuple[int, int]
    divisors: list[int]
    U_rows: list[dict[int, int]] | None = None
    V_cols: list[dict[int, int]] | None = None

    @property
    def rank(self) -> int:
        return len(self.divisors)

    @property
    def torsion(self) -> list[int]:
        return [d for d in self.divisors if d > 1]

    def U(self) -> list[list[int]]:
        m = self.shape[0]
        out = [[0] * m for _ in range(m)]
        for i, row in enumerate(self.U_rows):
            for j, v in row.items():
                out[i][j] = v
        return out

    def V(self) -> list[list[int]]:
        n = self.shape[1]
        out = [[0] * n for _ in range(n)]
        for j, col in enumerate(self.V_cols):
            for i, v in col.items():
                out[i][j] = v
        return out

    def apply_U(self, vec: dict[int, int]) -> dict[int, int]:
        """``U @ vec`` for a sparse vector."""
        out = {}
        for i, row in enumerate(self.U_rows):
            s = sum(v * vec[j] for j, v in row.items() if j in vec)
            if s:
                out[i] = s
        return out


def _add_scaled(dst: dict, src: dict, k: int) -> None:
    for key, v in src.items():
        nv = dst.get(key, 0) + k * v
        if nv:
            dst[key] = nv
        else:
            dst.pop(key, None)


class _Eliminator:
    def __init__(self, shape, columns, transforms):
        m, n = shape
        self.rows = [{} for _ in range(m)]
        self.cols = [set() for _ in range(n)]
        for j, col in enumerate(columns):
            for i, v in col.items():
                if v:
                    self.rows[i][j] = v
                    self.cols[j].add(i)
        self.transforms = transforms
        if transforms:
            self.U = [{i: 1} for i in range(m)]
            self.V = [{j: 1} for j in range(n)]

    def row_add(self, dst, src, k):
        """row[dst] += k * row[src]"""
        if not k:
            return
        rd = self.rows[dst]
        for j, v in self.rows[src].items():
            nv = rd.get(j, 0) + k * v
            if nv:
                if j not in rd:
                    self.cols[j].add(dst)
                rd[j] = nv
            else:
                del rd[j]
                self.cols[j].discard(dst)
        if self.transforms:
            _add_scaled(self.U[dst], self.U[src], k)

    def col_add(self, dst, src, k):
        """col[dst] += k * col[src]"""
        if not k:
            return
        for i in list(self.cols[src]):
            r = self.rows[i]
            nv = r.get(dst, 0) + k * r[src]
            if nv:
                if dst not in r:
                    self.cols[dst].add(i)
                r[dst] = nv
            else:
                del r[dst]
                self.cols[dst].discard(i)
        if self.transforms:
            _add_scaled(self.V[dst], self.V[src], k)

    def negate_row(self, r):
        self.rows[r] = {j: -v for j, v in self.rows[r].items()}
        if self.transforms:
            self.U[r] = {j: -v for j, v in self.U[r].items()}


def _nearest_quotient(a: int, p: int) -> int:
    """Integer ``k`` minimizing ``|a - k p|``."""
    k, r = divmod(a, p)
    if 2 * abs(r) > abs(p):
        k += 1
    return k


def _to_columns(M) -> tuple[tuple[int, int], list[dict[int, int]]]:
    if isinstance(M, BoundaryMatrix):
        return M.shape, M.columns
    rows = [list(map(int, r)) for r in M]
    m = len(rows)
    n = len(rows[0]) if m else 0
    columns = [{i: rows[i][j] for i in range(m) if rows[i][j]} for j in range(n)]
    return (m, n), columns


def smith_normal_form(M, transforms: bool = False) -> SmithForm:
    """Smith normal form of an integer matrix with exact arithmetic.

    ``M`` is a :class:`BoundaryMatrix` or a dense sequence of rows.
    Elimination prefers unit pivots in sparse columns, otherwise pivots on an
    entry of least absolute value, and restores divisibility of the remaining
    block before moving on, so the divisors come out ordered by divisibility.
    """
    shape, columns = _to_columns(M)
    return smith_from_columns(shape[0], columns, transforms)


def smith_from_columns(nrows: int, columns: list[dict[int, int]], transforms: bool = False) -> SmithForm:
    """:func:`smith_normal_form` for a matrix given as sparse columns."""
    shape = (nrows, len(columns))
    E = _Eliminator(shape, columns, transforms)
    m, n = shape
    active = set(range(m))
    live_cols = {c for c in range(n) if E.cols[c]}
    pivots: list[tuple[int, int]] = []
    divisors: list[int] = []

    def choose_pivot():
        # a unit in the sparsest possible column limits both fill-in and entry growth
        order = sorted((c for c in live_cols if E.cols[c]), key=lambda c: len(E.cols[c]))
        live_cols.intersection_update(order)
        if not order:
            return None
        for c in order:
            units = [r for r in E.cols[c] if abs(E.rows[r][c]) == 1]
            if units:
                return min(units, key=lambda r: len(E.rows[r])), c
        best = None
        for c in order:
            for r in E.cols[c]:
                key = (abs(E.rows[r][c]), len(E.rows[r]) * len(E.cols[c]))
                if best is None or key < best[0]:
                    best = (key, r, c)
        return best[1], best[2]

    while True:
        found = choose_pivot()
        if found is None:
            break
        r, c = found
        while True:
            p = E.rows[r][c]
            for r2 in [x for x in E.cols[c] if x != r]:
                E.row_add(r2, r, -_nearest_quotient(E.rows[r2][c], p))
            for c2 in [x for x in E.rows[r] if x != c]:
                E.col_add(c2, c, -_nearest_quotient(E.rows[r][c2], p))
            if len(E.cols[c]) == 1 and len(E.rows[r]) == 1:
                if abs(p) != 1:
                    bad = next(
                        (r2 for r2 in active if r2 != r and any(v % p for v in E.rows[r2].values())),
                        None,
                    )
                    if bad is not None:
                        E.row_add(r, bad, 1)
                        continue
                break
            # a remainder survived; pivot on the least entry of row r or column c
            cand = [(abs(v), r, c2) for c2, v in E.rows[r].items()]
            cand += [(abs(E.rows[r2][c]), r2, c) for r2 in E.cols[c]]
            _, r, c = min(cand)
        if E.rows[r][c] < 0:
            E.negate_row(r)
        divisors.append(E.rows[r][c])
        pivots.append((r, c))
        active.discard(r)
        live_cols.discard(c)

    U_rows = V_cols = None
    if transforms:
        prow = [r for r, _ in pivots]
        pcol = [c for _, c in pivots]
        seen_r, seen_c = set(prow), set(pcol)
        row_order = prow + [r for r in range(m) if r not in seen_r]
        col_order = pcol + [c for c in range(n) if c not in seen_c]
        U_rows = [E.U[r] for r in row_order]
        V_cols = [E.V[c] for c in col_order]
    return SmithForm(shape, divisors, U_rows, V_cols)


# -- homology -----------------------------------------------------------------


@dataclass(frozen=True)
class HomologyGroup:
    """Finitely generated abelian group ``Z^rank + Z_{d_1} + ...`` with ``d_1 | d_2 | ...``."""

    rank: int
    torsion: tuple[int, ...] = field(default_factory=tuple)

    def __post_init__(self):
        object.__setattr__(self, "torsion", tuple(int(d) for d in self.torsion))
        if self.rank < 0 or any(d < 2 for d in self.torsion):
            raise InputError(f"invalid homology data {self.rank}, {self.torsion}")
        if any(b % a for a, b in zip(self.torsion, self.torsion[1:])):
            raise InputError(f"torsion {self.torsion} is not a divisibility chain")

    def is_trivial(self) -> bool:
        return self.rank == 0 and not self.torsion

    def __str__(self):
        parts = []
        if self.rank:
            parts.append("Z" if self.rank == 1 else f"Z^{self.rank}")
        parts += [f"Z_{d}" for d in self.torsion]
        return " + ".join(parts) if parts else "0"

    def to_json(self) -> dict:
        return {"rank": self.rank, "torsion": list(self.torsion)}


def _require_complex(tbl: TernTable) -> None:
    failures = check_axioms(tbl, ("A3L", "A3R")).failures
    if failures:
        raise AxiomError(f"differentials square to zero only under A3L and A3R; failing: {failures}")


def homology_groups(tbl: TernTable, max_degree: int, sel: ComplexSelector = TERN) -> dict[int, HomologyGroup]:
    """``H_n`` for ``n = -1 .. max_degree``."""
    _require_complex(tbl)
    sel.check(tbl)
    # SNF of the differential out of each degree; out of degree -1 it is zero
    forms = {-1: None}
    for n in range(max_degree + 2):
        forms[n] = smith_normal_form(build_matrix(tbl, n, sel))
    out = {}
    for n in range(-1, max_degree + 1):
        dim = len(basis(tbl, n, sel.subcomplex))
        outgoing = forms[n].rank if forms[n] is not None else 0
        incoming = forms[n + 1]
        out[n] = HomologyGroup(dim - outgoing - incoming.rank, tuple(incoming.torsion))
    return out


def homology(tbl: TernTable, n: int, sel: ComplexSelector = TERN) -> HomologyGroup:
    if n < -1:
        raise InputError("homology is defined for n >= -1")
    _require_complex(tbl)
    sel.check(tbl)
    dim = len(basis(tbl, n, sel.subcomplex))
    outgoing = smith_normal_form(build_matrix(tbl, n, sel)).rank if n >= 0 else 0
    incoming = smith_normal_form(build_matrix(tbl, n + 1, sel))
    return HomologyGroup(dim - outgoing - incoming.rank, tuple(incoming.torsion))


def cycle_class(tbl: TernTable, z: ChainVector, sel: ComplexSelector = TERN) -> int | float:
    """Order of the homology class of ``z``: least ``k >= 1`` with ``k z`` a boundary.

    Returns ``math.inf`` when no multiple bounds.  Raises :class:`NotACycleError`
    when ``z`` is not a cycle of the selected complex.  For the normalized
    complex ``z`` is first projected to the quotient.
    """
    sel.check(tbl)
    n = z.degree
    if sel.subcomplex == "normalized":
        z = project_nondegenerate(z)
    elif sel.subcomplex == "degenerate" and any(not is_degenerate(g) for g in z.terms):
        raise InputError("chain is not in the degenerate subcomplex")
    dz = boundary(tbl, sel.variant, z)
    if sel.subcomplex == "normalized":
        dz = project_nondegenerate(dz)
    if dz:
        raise NotACycleError(dz)
    if not z:
        return 1
    B = build_matrix(tbl, n + 1, sel)
    index = {g: i for i, g in enumerate(B.row_basis)}
    vec = {index[g]: c for g, c in z.terms.items()}
    snf = smith_normal_form(B, transforms=True)
    w = snf.apply_U(vec)
    r = snf.rank
    if any(i >= r for i in w):
        return math.inf
    orders = [d // math.gcd(d, w.get(i, 0)) for i, d in enumerate(snf.divisors)]
    return reduce(math.lcm, orders, 1)
