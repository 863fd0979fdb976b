"""Homology of ternary algebras (terns) and cocycle invariants of knot diagrams."""

from .chains import ChainVector, boundary, face_L, face_R
from .diagram import Diagram, enumerate_colorings, extract_cycle, load_diagram, torus_diagram
from .errors import AxiomError, InputError, ResourceLimitError, TernlabError
from .homology import TERN, ComplexSelector, HomologyGroup, cycle_class, homology, homology_groups, smith_normal_form
from .invariants import Cochain, check_cocycle, cocycle_space, load_cochain, pair, state_sum
from .tern import TernTable, check_axioms, load_table, make_affine, make_group_tern

__all__ = [
    "TERN",
    "AxiomError",
    "ChainVector",
    "Cochain",
    "ComplexSelector",
    "Diagram",
    "HomologyGroup",
    "InputError",
    "ResourceLimitError",
    "TernTable",
    "TernlabError",
    "boundary",
    "check_axioms",
    "check_cocycle",
    "cocycle_space",
    "cycle_class",
    "enumerate_colorings",
    "extract_cycle",
    "face_L",
    "face_R",
    "homology",
    "homology_groups",
    "load_cochain",
    "load_diagram",
    "load_table",
    "make_affine",
    "make_group_tern",
    "pair",
    "smith_normal_form",
    "state_sum",
    "torus_diagram",
]
