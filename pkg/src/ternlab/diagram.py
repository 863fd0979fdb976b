"""Combinatorial codes for colored knot and knotted-surface diagrams.

A diagram is given by its regions and, for each crossing (dimension 1) or
double point stratum (dimension 2), the four surrounding regions ``x, y, z, w``
with the coloring rule ``c(w) = c(x) c(y) c(z) T``.  Around a crossing the
regions sit in cyclic order ``w, x, y, z``: the over-arc lies between ``w|x``
and ``y|z``, the under-arc between ``x|y`` and ``z|w``.

Geometry is not modeled.  Whoever writes the file asserts that the code comes
from a real diagram, including which regions form each ascending path.
"""

from __future__ import annotations

import itertools
import json
import warnings
from dataclasses import dataclass, field
from pathlib import Path

from .chains import ChainVector, boundary, project_nondegenerate
from .errors import InputError
from .tern import TernTable, is_ternary_quasigroup

QUAD_KEYS = ("x", "y", "z", "w")


@dataclass(frozen=True)
class Crossing:
    sign: int
    quad: tuple  # (x, y, z, w)
    ascending: tuple  # (r1, r2, r3)

    def over_pairs(self):
        x, y, z, w = self.quad
        return ({w, x}, {y, z})

    def under_pairs(self):
        x, y, z, w = self.quad
        return ({x, y}, {z, w})


@dataclass(frozen=True)
class Stratum:
    quad: tuple  # (x, y, z, w)


@dataclass(frozen=True)
class TriplePoint:
    sign: int
    ascending: tuple  # (R0, R1, R2, R3)


@dataclass(frozen=True)
class Diagram:
    dimension: int
    regions: tuple
    crossings: tuple = ()
    strata: tuple = ()
    triple_points: tuple = ()
    name: str | None = field(default=None, compare=False)

    @property
    def relations(self) -> tuple:
        """Quadruples ``(x, y, z, w)`` of region ids constrained by ``w = xyzT``."""
        if self.dimension == 1:
            return tuple(c.quad for c in self.crossings)
        return tuple(s.quad for s in self.strata)

    def to_json(self) -> dict:
        out = {"dimension": self.dimension, "regions": list(self.regions)}
        if self.name:
            out["name"] = self.name
        if self.dimension == 1:
            out["crossings"] = [
                {"sign": c.sign, "quad": dict(zip(QUAD_KEYS, c.quad)), "ascending": list(c.ascending)}
                for c in self.crossings
            ]
        else:
            out["strata"] = [{"quad": dict(zip(QUAD_KEYS, s.quad))} for s in self.strata]
            out["triple_points"] = [{"sign": t.sign, "ascending": list(t.ascending)} for t in self.triple_points]
        return out


def validate_diagram(d: Diagram) -> None:
    """Raise :class:`InputError` unless every structural invariant holds."""
    if d.dimension not in (1, 2):
        raise InputError(f"dimension must be 1 or 2, got {d.dimension}")
    if len(set(d.regions)) != len(d.regions):
        raise InputError("region ids must be distinct")
    known = set(d.regions)

    def check_ids(ids, what):
        for r in ids:
            if r not in known:
                raise InputError(f"{what} references unknown region {r!r}")

    def check_sign(sign, what):
        if sign not in (1, -1):
            raise InputError(f"{what} has sign {sign!r}; expected 1 or -1")

    if d.dimension == 1:
        if d.strata or d.triple_points:
            raise InputError("a dimension 1 diagram has crossings, not strata or triple points")
        for k, c in enumerate(d.crossings):
            what = f"crossing {k}"
            check_sign(c.sign, what)
            if len(c.quad) != 4:
                raise InputError(f"{what} quad must have 4 regions")
            if len(c.ascending) != 3:
                raise InputError(f"{what} ascending path must have 3 regions")
            check_ids(c.quad, what)
            check_ids(c.ascending, what)
            r1, r2, r3 = c.ascending
            if {r1, r2} not in c.under_pairs():
                raise InputError(f"{what}: {r1!r} and {r2!r} are not separated by the under-arc")
            if {r2, r3} not in c.over_pairs():
                raise InputError(f"{what}: {r2!r} and {r3!r} are not separated by the over-arc")
            if _position(c) is None:
                raise InputError(f"{what}: ascending path does not run around the crossing")
    else:
        if d.crossings:
            raise InputError("a dimension 2 diagram has strata and triple points, not crossings")
        for k, s in enumerate(d.strata):
            if len(s.quad) != 4:
                raise InputError(f"stratum {k} quad must have 4 regions")
            check_ids(s.quad, f"stratum {k}")
        for k, t in enumerate(d.triple_points):
            what = f"triple point {k}"
            check_sign(t.sign, what)
            if len(t.ascending) != 4:
                raise InputError(f"{what} ascending path must have 4 regions")
            check_ids(t.ascending, what)


def _position(c: Crossing):
    """Index in the cyclic order ``w, x, y, z`` where the ascending path starts.

    An ascending path is three consecutive regions: under-arc step, then
    over-arc step.  With a region repeated around the crossing the set test
    in :func:`validate_diagram` can pass for a path that is not consecutive,
    so the cyclic walk is confirmed here.
    """
    x, y, z, w = c.quad
    ring = (w, x, y, z)
    for start in range(4):
        for step in (1, -1):
            path = (ring[start], ring[(start + step) % 4], ring[(start + 2 * step) % 4])
            # the first step must cross the under-arc: x|y or z|w
            first = {(start % 4), (start + step) % 4}
            if first in ({1, 2}, {3, 0}) and path == tuple(c.ascending):
                return start
    return None


def _parse_quad(obj, what):
    if isinstance(obj, dict):
        try:
            return tuple(obj[k] for k in QUAD_KEYS)
        except KeyError as exc:
            raise InputError(f"{what} quad is missing {exc}") from exc
    if isinstance(obj, (list, tuple)) and len(obj) == 4:
        return tuple(obj)
    raise InputError(f"{what} quad must be an object with keys x, y, z, w")


def diagram_from_json(obj) -> Diagram:
    if not isinstance(obj, dict):
        raise InputError("diagram must be a JSON object")
    try:
        dimension = obj["dimension"]
        regions = tuple(obj["regions"])
    except KeyError as exc:
        raise InputError(f"diagram is missing {exc}") from exc
    try:
        crossings = tuple(
            Crossing(int(c["sign"]), _parse_quad(c["quad"], f"crossing {k}"), tuple(c["ascending"]))
            for k, c in enumerate(obj.get("crossings", ()))
        )
        strata = tuple(Stratum(_parse_quad(s["quad"], f"stratum {k}")) for k, s in enumerate(obj.get("strata", ())))
        triples = tuple(TriplePoint(int(t["sign"]), tuple(t["ascending"])) for t in obj.get("triple_points", ()))
    except (KeyError, TypeError, ValueError) as exc:
        raise InputError(f"malformed diagram record: {exc}") from exc
    d = Diagram(dimension, regions, crossings, strata, triples, name=obj.get("name"))
    validate_diagram(d)
    return d


def parse_diagram(text: str) -> Diagram:
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"malformed JSON: {exc}") from exc
    return diagram_from_json(obj)


def load_diagram(path) -> Diagram:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc}") from exc
    return parse_diagram(text)


def torus_diagram(n: int) -> Diagram:
    """Standard diagram of the (2, n) torus link with both strands oriented alike.

    Regions: the outer region ``a``, the central region ``c`` and the lobes
    ``b1 .. bn``.  Crossing ``i`` sits between lobes ``b_i`` and ``b_{i+1}``;
    its ascending path runs from ``a`` through ``b_i`` to ``c``.
    ``n = 3`` is the positive trefoil.
    """
    if n < 1:
        raise InputError("need at least one crossing")
    lobes = [f"b{i}" for i in range(1, n + 1)]
    crossings = tuple(Crossing(1, ("a", lobes[i], "c", lobes[(i + 1) % n]), ("a", lobes[i], "c")) for i in range(n))
    return Diagram(1, ("a", lobes[0], "c", *lobes[1:]), crossings, name=f"torus(2,{n})")


# -- colorings ---------------------------------------------------------------


def _check_table(tbl: TernTable) -> None:
    if not is_ternary_quasigroup(tbl):
        warnings.warn("table is not a ternary quasigroup; colorings may not behave under moves", stacklevel=3)


def is_coloring(d: Diagram, tbl: TernTable, coloring: dict) -> bool:
    return all(coloring[w] == tbl.apply(coloring[x], coloring[y], coloring[z]) for x, y, z, w in d.relations)


def enumerate_colorings(d: Diagram, tbl: TernTable) -> list[dict]:
    """All colorings, by backtracking over regions in file order.

    A relation with exactly one uncolored region narrows that region to the
    values solving it, which for a quasigroup is a single value.
    """
    _check_table(tbl)
    T = tbl.entries
    q = tbl.order
    regions = list(d.regions)
    rels = d.relations
    touching = {r: [] for r in regions}
    for rel in rels:
        for r in set(rel):
            touching[r].append(rel)

    color: dict = {}
    out: list[dict] = []

    def consistent(r):
        for x, y, z, w in touching[r]:
            placed = x in color and y in color and z in color and w in color
            if placed and T[color[x], color[y], color[z]] != color[w]:
                return False
        return True

    def forced():
        """(region, allowed values) for the most constrained open region, if any relation pins one."""
        best = None
        for rel in rels:
            open_ = {r for r in rel if r not in color}
            if len(open_) != 1:
                continue
            (r,) = open_
            allowed = []
            for v in range(q):
                color[r] = v
                x, y, z, w = rel
                if T[color[x], color[y], color[z]] == color[w]:
                    allowed.append(v)
                del color[r]
            if best is None or len(allowed) < len(best[1]):
                best = (r, allowed)
                if len(allowed) <= 1:
                    break
        return best

    def recurse():
        if len(color) == len(regions):
            out.append({r: color[r] for r in regions})
            return
        pick = forced()
        if pick is None:
            r = next(r for r in regions if r not in color)
            values = range(q)
        else:
            r, values = pick
        for v in values:
            color[r] = v
            if consistent(r):
                recurse()
            del color[r]

    recurse()
    return out


def brute_force_colorings(d: Diagram, tbl: TernTable) -> list[dict]:
    """Every coloring found by trying all ``q ** len(regions)`` assignments."""
    out = []
    for values in itertools.product(range(tbl.order), repeat=len(d.regions)):
        c = dict(zip(d.regions, values))
        if is_coloring(d, tbl, c):
            out.append(c)
    return out


def extract_cycle(d: Diagram, tbl: TernTable, coloring: dict) -> ChainVector:
    """Signed sum of colored ascending paths (degree 1 for knots, 2 for surfaces)."""
    if d.dimension == 1:
        terms = [(tuple(coloring[r] for r in c.ascending), c.sign) for c in d.crossings]
        return ChainVector(1, terms)
    terms = [(tuple(coloring[r] for r in t.ascending), t.sign) for t in d.triple_points]
    return ChainVector(2, terms)


@dataclass(frozen=True)
class CycleCheck:
    """Result of :func:`verify_cycle`; falsy when the projected boundary is nonzero."""

    boundary: ChainVector

    def __bool__(self):
        return self.boundary.is_zero()


def verify_cycle(d: Diagram | None, tbl: TernTable, z: ChainVector) -> CycleCheck:
    """Is ``z`` a cycle of the normalized complex?  ``d`` is only for symmetry with the other calls."""
    return CycleCheck(project_nondegenerate(boundary(tbl, "full", z)))
