"""Face-map identity checks shared by the unit and acceptance tests.

Each checker returns a list of failing cases; empty means the identity held.
"""

import itertools
import random

from ternlab.chains import boundary, face, face_L, face_R, reverse
from ternlab.tern import hat

FACES = {"L": face_L, "R": face_R}


def exhaustive(q, n):
    return itertools.product(range(q), repeat=n + 2)


def sampled(q, n, count, seed):
    rnd = random.Random(seed)
    return (tuple(rnd.randrange(q) for _ in range(n + 2)) for _ in range(count))


def _combined(tbl, i):
    return lambda g: face(tbl, i, g)


def presimplicial(tbl, x, kind):
    n = len(x) - 2
    bad = []
    for i, j in itertools.combinations(range(n + 1), 2):
        if kind == "full":
            lhs = face(tbl, j, x).map(_combined(tbl, i), n - 2)
            rhs = face(tbl, i, x).map(_combined(tbl, j - 1), n - 2)
        else:
            d = FACES[kind]
            lhs, rhs = d(tbl, i, d(tbl, j, x)), d(tbl, j - 1, d(tbl, i, x))
        if lhs != rhs:
            bad.append((kind, i, j, x))
    return bad


def mixed(tbl, x):
    """``d_i^R d_j^L = d_{j-1}^L d_i^R`` and ``d_i^L d_j^R = d_{j-1}^R d_i^L`` for ``i < j``."""
    n = len(x) - 2
    bad = []
    for i, j in itertools.combinations(range(n + 1), 2):
        if face_R(tbl, i, face_L(tbl, j, x)) != face_L(tbl, j - 1, face_R(tbl, i, x)):
            bad.append(("RL", i, j, x))
        if face_L(tbl, i, face_R(tbl, j, x)) != face_R(tbl, j - 1, face_L(tbl, i, x)):
            bad.append(("LR", i, j, x))
    return bad


def precubical(tbl, x):
    """Faces numbered from 1 on ``D_{n+1} = C_n``, both families, every pair ``i < j``."""
    n = len(x) - 2
    fam = {0: face_L, 1: face_R}
    bad = []
    for i, j in itertools.combinations(range(1, n + 2), 2):
        for e, d in itertools.product((0, 1), repeat=2):
            lhs = fam[e](tbl, i - 1, fam[d](tbl, j - 1, x))
            rhs = fam[d](tbl, j - 2, fam[e](tbl, i - 1, x))
            if lhs != rhs:
                bad.append((e, d, i, j, x))
    return bad


def square_zero(tbl, x):
    if len(x) < 3:
        return []
    return [(v, x) for v in ("L", "R", "full") if boundary(tbl, v, boundary(tbl, v, x))]


def conversion(tbl, x):
    n = len(x) - 2
    th = hat(tbl)
    bad = [(i, x) for i in range(n + 1) if face_R(tbl, i, x) != reverse(face_L(th, n - i, reverse(x)))]
    lhs = boundary(tbl, "R", x)
    rhs = (-1) ** n * reverse(boundary(th, "L", reverse(x)))
    if lhs != rhs:
        bad.append(("boundary", x))
    return bad


ALL = {
    "presimplicial L": lambda t, x: presimplicial(t, x, "L"),
    "presimplicial R": lambda t, x: presimplicial(t, x, "R"),
    "presimplicial combined": lambda t, x: presimplicial(t, x, "full"),
    "mixed commutation": mixed,
    "precubical": precubical,
    "boundary squares to zero": square_zero,
    "conversion": conversion,
}


def run_all(tbl, gens):
    """Failures per identity over the given generators."""
    gens = list(gens)
    return {name: [b for x in gens for b in check(tbl, x)] for name, check in ALL.items()}
