"""Orbit-finite sets given by (arity, group) declarations, and equality-type patterns.

An element of a declared orbit ``(k, G)`` is the ``G``-class of a non-repeating
``k``-tuple of atoms, stored as its lexicographically least member.

A pattern is a tuple whose entries are concrete atoms (positive ints) or
variables.  Variable ``i`` is encoded as the int ``-1 - i``.  Read relative to a
finite atom set ``S`` containing its concrete atoms, a pattern stands for the
``S``-orbit of elements obtained by sending the variables to pairwise distinct
atoms outside ``S``.
"""
from __future__ import annotations

import itertools
from collections.abc import Iterable, Sequence
from dataclasses import dataclass
from typing import NamedTuple

from .atoms import PermGroup, act, group_closure

_VAR_BASE = 1 << 60


def var(i: int) -> int:
    return -1 - i


def is_var(e: int) -> bool:
    return e < 0


def var_index(e: int) -> int:
    return -1 - e


def entry_key(e: int) -> int:
    # concrete atoms sort below variables
    return e if e > 0 else _VAR_BASE - e


def pattern_key(entries: Sequence[int]) -> tuple[int, ...]:
    return tuple(entry_key(e) for e in entries)


def variables(entries: Iterable[int]) -> list[int]:
    """Distinct variables in order of first occurrence."""
    seen = []
    for e in entries:
        if e < 0 and e not in seen:
            seen.append(e)
    return seen


def concrete(entries: Iterable[int]) -> frozenset[int]:
    return frozenset(e for e in entries if e > 0)


def n_vars(entries: Iterable[int]) -> int:
    return sum(1 for e in entries if e < 0)


def renumber(entries: Sequence[int], start: dict[int, int] | None = None) -> tuple[int, ...]:
    """Rename variables to ``0, 1, ...`` by first occurrence."""
    names = {} if start is None else start
    out = []
    for e in entries:
        if e < 0:
            if e not in names:
                names[e] = var(len(names))
            out.append(names[e])
        else:
            out.append(e)
    return tuple(out)


def check_pattern(entries: Sequence[int]) -> None:
    atoms = [e for e in entries if e > 0]
    vs = [e for e in entries if e < 0]
    if any(e == 0 for e in entries):
        raise ValueError("0 is neither an atom nor a variable")
    if len(set(atoms)) != len(atoms):
        raise ValueError(f"repeated concrete atom in pattern {format_entries(entries)}")
    if len(set(vs)) != len(vs):
        raise ValueError(f"repeated variable in pattern {format_entries(entries)}")


def format_entries(entries: Sequence[int], blank: str | None = None) -> str:
    names = "xyzuvw"
    parts = []
    for e in entries:
        if e > 0:
            parts.append(str(e))
        elif blank is not None:
            parts.append(blank)
        else:
            i = var_index(e)
            parts.append(names[i] if i < len(names) else f"x{i}")
    return "(" + ",".join(parts) + ")"


def instantiate(entries: Sequence[int], atoms: Sequence[int]) -> tuple[int, ...]:
    """Replace variable ``i`` by ``atoms[i]``."""
    return tuple(e if e > 0 else atoms[-1 - e] for e in entries)


# --- orbit declarations -------------------------------------------------------


@dataclass(frozen=True)
class OrbitDecl:
    """The equivariant orbit ATOMS^(k)/G."""

    id: str
    arity: int
    group: PermGroup

    def __post_init__(self):
        if self.group.degree != self.arity:
            raise ValueError(f"group degree {self.group.degree} != arity {self.arity}")

    @classmethod
    def make(cls, id: str, arity: int, generators: Iterable = ()) -> OrbitDecl:
        return cls(id, arity, group_closure(generators, arity))

    def canonical_tuple(self, t: Sequence[int]) -> tuple[int, ...]:
        t = tuple(t)
        if len(t) != self.arity or len(set(t)) != len(t) or any(a < 1 for a in t):
            raise ValueError(f"{t} is not a non-repeating {self.arity}-tuple of atoms")
        return min(act(t, g) for g in self.group.elements)

    def element(self, *atoms: int) -> Element:
        return Element(self.id, self.canonical_tuple(atoms))

    def class_of(self, t: Sequence[int]) -> list[tuple[int, ...]]:
        return sorted({act(tuple(t), g) for g in self.group.elements})

    def canonical(self, entries: Sequence[int]) -> tuple[int, ...]:
        return canonical(entries, self.group)

    def __repr__(self):
        return f"OrbitDecl({self.id!r}, k={self.arity}, |G|={len(self.group)})"


class Element(NamedTuple):
    orbit_id: str
    tuple: tuple[int, ...]


@dataclass(frozen=True)
class OrbitSet:
    """Disjoint union of declared orbits."""

    orbits: tuple[OrbitDecl, ...]

    def __post_init__(self):
        ids = [o.id for o in self.orbits]
        if len(set(ids)) != len(ids):
            raise ValueError(f"duplicate orbit ids in {ids}")

    @classmethod
    def of(cls, *orbits: OrbitDecl) -> OrbitSet:
        return cls(tuple(orbits))

    def __getitem__(self, orbit_id: str) -> OrbitDecl:
        for o in self.orbits:
            if o.id == orbit_id:
                return o
        raise KeyError(orbit_id)

    def __contains__(self, orbit_id):
        return any(o.id == orbit_id for o in self.orbits)

    def __iter__(self):
        return iter(self.orbits)

    def __len__(self):
        return len(self.orbits)

    @property
    def max_arity(self) -> int:
        return max((o.arity for o in self.orbits), default=0)


# --- canonical forms ----------------------------------------------------------


def canonical(entries: Sequence[int], group: PermGroup) -> tuple[int, ...]:
    """Least ``G``-image of the pattern, variables renumbered by first occurrence."""
    best = None
    best_key = None
    for g in group.elements:
        cand = renumber(act(entries, g))
        key = pattern_key(cand)
        if best_key is None or key < best_key:
            best, best_key = cand, key
    return best


def canonicalize(entries: Sequence[int], group: PermGroup) -> tuple[int, ...]:
    check_pattern(entries)
    return canonical(entries, group)


def canonical_product(blocks: Sequence[tuple[Sequence[int], PermGroup]]) -> tuple[tuple[int, ...], ...]:
    """Canonical form of a tuple of patterns sharing one variable namespace.

    Each block is minimized under its own group; earlier blocks take
    precedence and variables are renumbered across the concatenation.
    """
    states = [((), {})]
    for entries, group in blocks:
        best_key = None
        nxt = []
        for done, names in states:
            for g in group.elements:
                local = dict(names)
                cand = renumber(act(entries, g), local)
                key = pattern_key(cand)
                if best_key is None or key < best_key:
                    best_key = key
                    nxt = [(done + (cand,), local)]
                elif key == best_key:
                    nxt.append((done + (cand,), local))
        # dedupe states with identical prefix and naming
        uniq = {}
        for done, names in nxt:
            uniq.setdefault((done, tuple(sorted(names.items()))), (done, names))
        states = list(uniq.values())
    return states[0][0]


def s_pattern(orbit: OrbitDecl, t: Sequence[int], S: Iterable[int]) -> tuple[int, ...]:
    """Canonical pattern of the ``S``-orbit containing the tuple ``t``."""
    S = set(S)
    names: dict[int, int] = {}
    entries = []
    for a in t:
        if a in S:
            entries.append(a)
        else:
            if a not in names:
                names[a] = var(len(names))
            entries.append(names[a])
    return canonical(entries, orbit.group)


def _partial_injections(n_slots: int, atoms: Sequence[int]):
    """All ways to send each slot to None or to an atom, injectively."""
    def rec(i, used):
        if i == n_slots:
            yield ()
            return
        for rest in rec(i + 1, used):
            yield (None,) + rest
        for a in atoms:
            if a not in used:
                for rest in rec(i + 1, used | {a}):
                    yield (a,) + rest
    yield from rec(0, frozenset())


def substitutions(entries: Sequence[int], new_atoms: Sequence[int]) -> list[tuple[int, ...]]:
    """Patterns obtained by sending some variables injectively into ``new_atoms``.

    Results are renumbered but not minimized under any group.
    """
    vs = variables(entries)
    out = []
    for choice in _partial_injections(len(vs), sorted(new_atoms)):
        sub = {v: a for v, a in zip(vs, choice) if a is not None}
        out.append(renumber(tuple(sub.get(e, e) for e in entries)))
    return out


def refine(orbit: OrbitDecl, entries: Sequence[int], old_support: Iterable[int],
           new_support: Iterable[int]) -> list[tuple[int, ...]]:
    """The ``new_support``-orbits making up the ``old_support``-orbit ``entries``."""
    new_atoms = sorted(set(new_support) - set(old_support))
    if not new_atoms:
        return [canonical(entries, orbit.group)]
    pats = {canonical(p, orbit.group) for p in substitutions(entries, new_atoms)}
    return sorted(pats, key=pattern_key)


def enumerate_s_orbits(orbit: OrbitDecl, S: Iterable[int]) -> list[tuple[int, ...]]:
    """All canonical ``S``-orbit patterns of the orbit, in canonical order."""
    return refine(orbit, tuple(var(i) for i in range(orbit.arity)), (), S)


def match(orbit: OrbitDecl, entries: Sequence[int], S: Iterable[int],
          element: Sequence[int]) -> dict[int, int] | None:
    """A variable assignment under which the pattern instantiates to ``element``.

    Keys are variable indices.  When several group elements fit, the first in
    the group's element order wins; ``match_all`` lists them all.
    """
    found = match_all(orbit, entries, S, element)
    return found[0] if found else None


def unify(orbit: OrbitDecl, p: Sequence[int], q: Sequence[int], S: Iterable[int],
          p_support: Iterable[int] | None = None,
          q_support: Iterable[int] | None = None) -> list[tuple[int, ...]]:
    """``S``-orbit patterns contained in both ``p`` and ``q``.

    Each pattern is read relative to its own support, which defaults to its
    concrete atoms.  ``S`` must contain both supports.
    """
    S = frozenset(S)
    ps = frozenset(concrete(p)) if p_support is None else frozenset(p_support)
    qs = frozenset(concrete(q)) if q_support is None else frozenset(q_support)
    if not (ps <= S and qs <= S):
        raise ValueError("S must contain both pattern supports")
    left = set(refine(orbit, p, ps, S))
    right = set(refine(orbit, q, qs, S))
    return sorted(left & right, key=pattern_key)


# --- tight orbits -------------------------------------------------------------


@dataclass(frozen=True)
class TightFamily:
    """One equivariant family of tight orbits of a declared orbit.

    ``positions`` are the concrete positions of the representative profile;
    ``decl`` is the orbit (arity ``len(positions)``, induced group) whose
    elements index the family's members.
    """

    orbit_id: str
    positions: tuple[int, ...]
    decl: OrbitDecl

    @property
    def id(self) -> str:
        return self.decl.id


def family_id(orbit: OrbitDecl, positions: Iterable[int]) -> str:
    pos = set(positions)
    return orbit.id + "[" + "".join("a" if i in pos else "_" for i in range(orbit.arity)) + "]"


def _profile_classes(orbit: OrbitDecl) -> list[tuple[int, ...]]:
    k = orbit.arity
    reps = []
    seen = set()
    for j in range(k + 1):
        for P in itertools.combinations(range(k), j):
            if P in seen:
                continue
            cls = {tuple(sorted(g[i] for i in P)) for g in orbit.group.elements}
            seen |= cls
            reps.append(min(cls))
    return reps


def _induced_generators(orbit: OrbitDecl, P: tuple[int, ...]) -> list[tuple[int, ...]]:
    index = {p: i for i, p in enumerate(P)}
    Pset = set(P)
    gens = set()
    for h in orbit.group.elements:
        if {h[p] for p in P} == Pset:
            gens.add(tuple(index[h[p]] for p in P))
    return sorted(gens)


def tight_families(orbit: OrbitDecl) -> list[TightFamily]:
    out = []
    for P in _profile_classes(orbit):
        decl = OrbitDecl(family_id(orbit, P), len(P),
                         PermGroup(len(P), _induced_generators(orbit, P)))
        out.append(TightFamily(orbit.id, P, decl))
    return out


def enumerate_tight_orbit_families(orbits: OrbitSet) -> tuple[OrbitSet, dict[str, TightFamily]]:
    """Orbit set indexing all tight orbits, plus the family metadata by id."""
    fams = [f for o in orbits for f in tight_families(o)]
    return OrbitSet(tuple(f.decl for f in fams)), {f.id: f for f in fams}


def tight_to_element(orbit: OrbitDecl, entries: Sequence[int]) -> Element:
    """Family element indexing the tight orbit with pattern ``entries``.

    The tight orbit is read relative to its own concrete atoms.
    """
    Q = {i for i, e in enumerate(entries) if e > 0}
    for fam in tight_families(orbit):
        if len(fam.positions) != len(Q):
            continue
        for g in orbit.group.elements:
            if {i for i in range(orbit.arity) if g[i] in Q} == set(fam.positions):
                moved = act(tuple(entries), g)
                alpha = tuple(moved[p] for p in fam.positions)
                return fam.decl.element(*alpha)
    raise AssertionError("tight orbit outside every family")


def element_to_tight(fam: TightFamily, parent: OrbitDecl, alpha: Sequence[int]) -> tuple[int, ...]:
    """Canonical pattern of the tight orbit indexed by ``alpha`` in ``fam``."""
    entries = [0] * parent.arity
    it = iter(alpha)
    nxt = 0
    for i in range(parent.arity):
        if i in fam.positions:
            entries[i] = next(it)
        else:
            entries[i] = var(nxt)
            nxt += 1
    return canonical(entries, parent.group)


@dataclass(frozen=True)
class Pattern:
    """A canonical pattern tagged with its orbit id."""

    orbit_id: str
    entries: tuple[int, ...]

    @classmethod
    def make(cls, orbit: OrbitDecl, *items) -> Pattern:
        """Build from ints (atoms) and strings (variable names)."""
        return cls(orbit.id, orbit.canonical(parse_items(items)))

    @property
    def n_vars(self) -> int:
        return n_vars(self.entries)

    @property
    def atoms(self) -> frozenset[int]:
        return concrete(self.entries)

    def __str__(self):
        return self.orbit_id + format_entries(self.entries)


def parse_items(items: Iterable) -> tuple[int, ...]:
    """Mixed ints (atoms) and variable names into raw pattern entries."""
    names: dict[str, int] = {}
    out = []
    for it in items:
        if isinstance(it, str):
            if it not in names:
                names[it] = var(len(names))
            out.append(names[it])
        else:
            out.append(int(it))
    check_pattern(out)
    return tuple(out)


def match_all(orbit: OrbitDecl, entries: Sequence[int], S: Iterable[int],
              element: Sequence[int]) -> list[dict[int, int]]:
    """Every distinct assignment under which the pattern hits ``element``."""
    S = set(S)
    element = tuple(element)
    out = []
    for g in orbit.group.elements:
        t = act(element, g)
        assign: dict[int, int] = {}
        ok = True
        for e, a in zip(entries, t):
            if e > 0:
                ok = e == a
            else:
                ok = a not in S and assign.setdefault(var_index(e), a) == a
            if not ok:
                break
        if ok and assign not in out:
            out.append(assign)
    return out


def product_canonical(row_decl: OrbitDecl, col_decl: OrbitDecl, row: Sequence[int],
                      col: Sequence[int]) -> tuple[tuple[int, ...], tuple[int, ...]]:
    r, c = canonical_product([(row, row_decl.group), (col, col_decl.group)])
    return r, c


def refine_product(row_decl: OrbitDecl, col_decl: OrbitDecl, row: Sequence[int],
                   col: Sequence[int], old_support: Iterable[int],
                   new_support: Iterable[int]) -> list[tuple[tuple[int, ...], tuple[int, ...]]]:
    """Product analogue of ``refine``: variables are shared between row and col."""
    new_atoms = sorted(set(new_support) - set(old_support))
    k = len(row)
    out = set()
    for joint in substitutions(tuple(row) + tuple(col), new_atoms):
        out.add(product_canonical(row_decl, col_decl, joint[:k], joint[k:]))
    return sorted(out, key=lambda rc: (pattern_key(rc[0]), pattern_key(rc[1])))
