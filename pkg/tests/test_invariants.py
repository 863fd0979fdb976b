import itertools
import json

import numpy as np
import pytest

from ternlab import InputError
from ternlab.chains import ChainVector
from ternlab.diagram import Diagram, diagram_from_json, load_diagram, torus_diagram
from ternlab.invariants import (
    Cochain,
    GroupRingElement,
    check_cocycle,
    coboundary,
    cochain_from_json,
    cocycle_space,
    load_cochain,
    pair,
    solve_mod,
    state_sum,
)

from . import oracles
from .test_cli import DATA
from .test_diagram import SURFACE

CHI_TERMS = [
    ((2, 0, 1), 1),
    ((0, 2, 1), 1),
    ((1, 0, 2), 1),
    ((1, 1, 0), 1),
    ((2, 1, 0), 1),
    ((0, 1, 2), -1),
    ((0, 0, 2), -1),
]
TREFOIL_CYCLE = ChainVector(1, {(0, 1, 2): 1, (0, 2, 2): 1, (0, 0, 2): 1})


@pytest.fixture(scope="module")
def phi():
    return Cochain.from_terms(3, 3, CHI_TERMS)


def oracle_is_cocycle(tbl, f):
    q = tbl.order
    if any(f(a, b, a) for a in range(q) for b in range(q)):
        return False
    for x in itertools.product(range(q), repeat=4):
        if sum(c * f(*g) for g, c in oracles.boundary(tbl, x).items()) % f.modulus:
            return False
    return True


def test_bundled_cochain_matches_listing(phi):
    assert load_cochain(DATA / "paper_cocycle.json", 3) == phi


def test_phi_is_cocycle(r3, phi):
    assert check_cocycle(r3, phi)
    assert oracle_is_cocycle(r3, phi)


def test_phi_pairs_to_one(phi):
    assert pair(phi, TREFOIL_CYCLE) == 1


def test_cocycle_failures(r3, phi):
    bad = Cochain.from_terms(3, 3, [((0, 1, 0), 1)])
    check = check_cocycle(r3, bad)
    assert check.condition == "degenerate" and check.witness == (0, 1)
    bad = Cochain.from_terms(3, 3, [((0, 1, 2), 1)])
    check = check_cocycle(r3, bad)
    assert check.condition == "boundary"
    assert not oracle_is_cocycle(r3, bad)
    assert check_cocycle(r3, phi).to_json() == {"status": "pass"}


def test_random_cochains_agree_with_oracle(r3, rng):
    space = cocycle_space(r3, 3)
    for _ in range(40):
        if rng.random() < 0.5:
            f = Cochain(3, np.array([rng.randrange(3) for _ in range(27)]).reshape(3, 3, 3))
        else:
            coeffs = [rng.randrange(3) for _ in space.cocycles]
            f = Cochain(3, sum((k * c.values for k, c in zip(coeffs, space.cocycles)), np.zeros((3, 3, 3), int)))
        assert bool(check_cocycle(r3, f)) == oracle_is_cocycle(r3, f)


def test_arity_four_cocycles(r3):
    space = cocycle_space(r3, 3, arity=4)
    assert space.cocycles
    for f in space.cocycles[:5]:
        assert check_cocycle(r3, f)
    bad = Cochain.from_terms(3, 3, [((0, 1, 0, 2), 1)], arity=4)
    assert check_cocycle(r3, bad).condition == "degenerate"


def test_cocycle_space(r3, phi):
    space = cocycle_space(r3, 3)
    assert all(check_cocycle(r3, f) for f in space.cocycles)
    assert space.contains(phi)
    assert not space.contains(Cochain.from_terms(3, 3, [((0, 1, 2), 1)]))
    assert not space.is_coboundary(phi)
    for g, dg in space.coboundaries:
        assert dg == coboundary(r3, g, 3)
        assert pair(dg, TREFOIL_CYCLE) == 0


def test_coboundaries_are_cocycles(r3, rng):
    for _ in range(20):
        g = np.array([[rng.randrange(5) for _ in range(3)] for _ in range(3)])
        assert check_cocycle(r3, coboundary(r3, g, 5))


def test_solve_mod():
    cols = [np.array([2, 0]), np.array([0, 3])]
    assert solve_mod(cols, np.array([4, 3]), 6) is not None
    assert solve_mod(cols, np.array([1, 0]), 6) is None
    c = solve_mod(cols, np.array([2, 3]), 6)
    assert np.array_equal((c[0] * cols[0] + c[1] * cols[1]) % 6, [2, 3])


def test_cochain_json(tmp_path, phi):
    p = tmp_path / "f.json"
    p.write_text(json.dumps(phi.to_json()))
    assert load_cochain(p, 3) == phi
    with pytest.raises(InputError):
        cochain_from_json({"modulus": 3, "order": 4, "terms": []}, 3)
    with pytest.raises(InputError):
        cochain_from_json({"modulus": 3, "terms": [{"triple": [0, 5, 1], "value": 1}]}, 3)
    with pytest.raises(InputError):
        cochain_from_json({"terms": []}, 3)
    with pytest.raises(InputError):
        Cochain(1, np.zeros((2, 2, 2)))


def test_pair_validation(phi):
    with pytest.raises(InputError):
        pair(phi, ChainVector.generator((0, 1)))
    with pytest.raises(InputError):
        pair(phi, ChainVector.generator((0, 1, 5)))


def test_group_ring_element():
    e = GroupRingElement(3, {0: 9, 1: 18})
    assert str(e) == "9 + 18t"
    assert e.total == 27
    assert e.to_json() == {"modulus": 3, "multiplicities": [9, 18, 0], "polynomial": "9 + 18t"}
    assert str(GroupRingElement(4, [0, 1, 0, 2])) == "t + 2t^3"
    assert GroupRingElement(3, {4: 1}) == GroupRingElement(3, [0, 1, 0])


def test_trefoil_state_sum(r3, phi):
    d = load_diagram(DATA / "trefoil.json")
    s = state_sum(d, r3, phi)
    assert s.total == 27
    assert list(s.multiplicities) == [9, 18, 0]


def oracle_state_sum(d, tbl, f):
    paths = [c.ascending for c in d.crossings]
    signs = [c.sign for c in d.crossings]
    return oracles.state_sum(d.regions, d.relations, paths, signs, tbl, tbl.order, f, f.modulus)


@pytest.mark.parametrize("n", range(1, 6))
def test_state_sum_matches_oracle(n, r3, phi):
    d = torus_diagram(n)
    assert list(state_sum(d, r3, phi).multiplicities) == oracle_state_sum(d, r3, phi)


def test_state_sum_ignores_coboundaries(r3, phi, rng):
    d = torus_diagram(3)
    base = state_sum(d, r3, phi)
    for _ in range(5):
        g = np.array([[rng.randrange(3) for _ in range(3)] for _ in range(3)])
        assert state_sum(d, r3, phi + coboundary(r3, g, 3)) == base


def test_kink_does_not_change_state_sum(r3, phi):
    unknot = Diagram(1, ("a", "b"))
    assert state_sum(torus_diagram(1), r3, phi) == state_sum(unknot, r3, phi)


def test_state_sum_rejects_non_cocycle(r3):
    with pytest.raises(InputError):
        state_sum(torus_diagram(3), r3, Cochain.from_terms(3, 3, [((0, 1, 2), 1)]))
    with pytest.raises(InputError):
        state_sum(diagram_from_json(SURFACE), r3, Cochain.zero(3, 3))


def test_surface_state_sum_with_zero_cocycle(r3):
    d = diagram_from_json(SURFACE)
    s = state_sum(d, r3, Cochain.zero(3, 3, arity=4))
    assert s.multiplicities[0] == s.total > 0
