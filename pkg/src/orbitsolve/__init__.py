"""Exact solvability of orbit-finite systems of linear equations over equality atoms."""
from .atoms import Fresh, Perm, PermGroup, group_closure
from .basis import Basis, BasisCoords, decompose, expand_tight, normalize_domain, recombine
from .dsl import ParseError, format_system, parse
from .finsolve import Instance, cog, delta, finsolve, locally_solvable, reduce_dimension
from .linvec import FinVector, SymMatrix, SymVector, inner, is_exact, mat_vec
from .oracle import necessary_check, pool_search, sandwich
from .orbits import (
    Element, OrbitDecl, OrbitSet, Pattern, canonicalize, enumerate_s_orbits,
    enumerate_tight_orbit_families, match, unify, var,
)
from .ring import QQ, ZZ, Zmod, smith_normal_form, solve_finite
from .solve import build_tilde_matrix, solve, verify

__all__ = [
    "Fresh", "Perm", "PermGroup", "group_closure",
    "Basis", "BasisCoords", "decompose", "expand_tight", "normalize_domain", "recombine",
    "ParseError", "format_system", "parse",
    "Instance", "cog", "delta", "finsolve", "locally_solvable", "reduce_dimension",
    "FinVector", "SymMatrix", "SymVector", "inner", "is_exact", "mat_vec",
    "necessary_check", "pool_search", "sandwich",
    "Element", "OrbitDecl", "OrbitSet", "Pattern", "canonicalize", "enumerate_s_orbits",
    "enumerate_tight_orbit_families", "match", "unify", "var",
    "QQ", "ZZ", "Zmod", "smith_normal_form", "solve_finite",
    "build_tilde_matrix", "solve", "verify",
]
