"""The tight-orbit basis of LIN(B) and finitary coordinates over it."""
from __future__ import annotations

from dataclasses import dataclass, field

from .orbits import (
    Element, OrbitDecl, OrbitSet, TightFamily, concrete, element_to_tight,
    enumerate_tight_orbit_families, n_vars, pattern_key, refine, tight_to_element,
)
from .linvec import FinVector, SymVector


@dataclass(frozen=True)
class Component:
    """One orbit of a domain, embedded into the whole by extension with zero."""

    orbit: OrbitDecl
    families: tuple[TightFamily, ...]
    # an equivariant orbit is already tight for the empty support
    tightening: str = "identity"


def normalize_domain(B: OrbitSet) -> list[Component]:
    basis, fams = enumerate_tight_orbit_families(B)
    return [Component(o, tuple(f for f in fams.values() if f.orbit_id == o.id)) for o in B]


@dataclass(frozen=True)
class Basis:
    """Index set of all tight orbits of ``domain``, one orbit per family."""

    domain: OrbitSet
    index: OrbitSet
    families: dict

    @classmethod
    def of(cls, domain: OrbitSet) -> Basis:
        index, fams = enumerate_tight_orbit_families(domain)
        return cls(domain, index, fams)

    def element(self, orbit_id: str, pattern) -> Element:
        """Basis index of the tight orbit ``pattern`` (relative to its own atoms)."""
        return tight_to_element(self.domain[orbit_id], pattern)

    def tight(self, e: Element) -> tuple[str, tuple[int, ...]]:
        fam = self.families[e.orbit_id]
        return fam.orbit_id, element_to_tight(fam, self.domain[fam.orbit_id], e.tuple)


def expand_tight(domain: OrbitSet, orbit_id: str, pattern, S=None) -> SymVector:
    """Characteristic vector of the tight orbit ``pattern`` written over support ``S``."""
    own = concrete(pattern)
    S = own if S is None else frozenset(S)
    if not own <= S:
        raise ValueError("support must contain the tight orbit's atoms")
    decl = domain[orbit_id]
    return SymVector(domain, frozenset(S), {(orbit_id, q): 1 for q in refine(decl, pattern, own, S)})


@dataclass(frozen=True)
class BasisCoords:
    basis: Basis
    coords: dict = field(default_factory=dict)

    @property
    def basis_set(self) -> OrbitSet:
        return self.basis.index

    def as_finvector(self) -> FinVector:
        return FinVector(self.basis.index, dict(self.coords))

    def items(self):
        return sorted(self.coords.items(), key=lambda kv: (kv[0].orbit_id, kv[0].tuple))

    def tight_items(self):
        """``((orbit_id, tight pattern), value)`` pairs."""
        return [(self.basis.tight(e), v) for e, v in self.items()]


def decompose(v: SymVector, basis: Basis | None = None) -> BasisCoords:
    """Coordinates of ``v`` over the tight-orbit basis.

    Repeatedly takes a nonzero orbit of maximal dimension, records its value
    on the tight orbit with the same pattern and subtracts that tight orbit.
    """
    basis = Basis.of(v.domain) if basis is None else basis
    S = v.support
    rest = dict(v.entries)
    coords: dict = {}
    while rest:
        (oid, p) = min(rest, key=lambda k: (-n_vars(k[1]), k[0], pattern_key(k[1])))
        c = rest[(oid, p)]
        e = basis.element(oid, p)
        coords[e] = coords.get(e, 0) + c
        for q in refine(v.domain[oid], p, concrete(p), S):
            nv = rest.get((oid, q), 0) - c
            if nv:
                rest[(oid, q)] = nv
            else:
                rest.pop((oid, q), None)
    return BasisCoords(basis, {e: c for e, c in coords.items() if c})


def recombine(c: BasisCoords, support=()) -> SymVector:
    S = set(support)
    for e in c.coords:
        S |= set(e.tuple)
    total = SymVector(c.basis.domain, frozenset(S), {})
    for e, val in c.coords.items():
        oid, pat = c.basis.tight(e)
        total = total + expand_tight(c.basis.domain, oid, pat, S).scale(val)
    return total
