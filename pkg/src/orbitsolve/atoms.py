"""Atoms, finite-support permutations and small permutation groups.

Atoms are the positive integers.  Numeric order on atoms is only ever used to
make outputs canonical; no algorithm depends on it.
"""
from __future__ import annotations

from collections.abc import Iterable, Mapping

MAX_DEGREE = 8


class Perm:
    """A permutation of atoms that moves only finitely many of them."""

    __slots__ = ("_map",)

    def __init__(self, mapping: Mapping[int, int] | None = None):
        moved = {a: b for a, b in (mapping or {}).items() if a != b}
        if set(moved) != set(moved.values()):
            raise ValueError(f"not a finite permutation: {dict(mapping or {})}")
        for a in moved:
            if not isinstance(a, int) or a < 1:
                raise ValueError(f"atoms are positive integers, got {a!r}")
        self._map = moved

    @classmethod
    def swap(cls, a: int, b: int) -> Perm:
        return cls({a: b, b: a})

    @classmethod
    def from_injection(cls, mapping: Mapping[int, int]) -> Perm:
        """Extend a finite injection to a permutation.

        Image atoms outside the key set are sent back along the chains of the
        injection, so the result agrees with ``mapping`` on its keys.
        """
        mapping = dict(mapping)
        if len(set(mapping.values())) != len(mapping):
            raise ValueError("mapping is not injective")
        full = dict(mapping)
        keys = set(mapping)
        inverse = {v: k for k, v in mapping.items()}
        for b in mapping.values():
            if b in keys:
                continue
            # walk back from b to the start of its chain
            a = b
            while a in inverse:
                a = inverse[a]
            full[b] = a
        return cls(full)

    def __call__(self, a: int) -> int:
        return self._map.get(a, a)

    @property
    def moved(self) -> dict[int, int]:
        return dict(self._map)

    def compose(self, other: Perm) -> Perm:
        """``self ∘ other``: apply ``other`` first."""
        keys = set(self._map) | set(other._map)
        return Perm({a: self(other(a)) for a in keys})

    def inverse(self) -> Perm:
        return Perm({b: a for a, b in self._map.items()})

    def __eq__(self, other):
        return isinstance(other, Perm) and self._map == other._map

    def __hash__(self):
        return hash(frozenset(self._map.items()))

    def __repr__(self):
        return f"Perm({self._map})"


IDENTITY = Perm()


def apply(p: Perm, x):
    """Rename every atom occurring in ``x`` by ``p``.

    Works structurally on ints (atoms), tuples, lists, sets and frozensets;
    other objects must provide ``rename(p)``.  Non-positive ints are left
    alone so that pattern variables survive.
    """
    if isinstance(x, bool):
        return x
    if isinstance(x, int):
        return p(x) if x > 0 else x
    if isinstance(x, tuple):
        return tuple(apply(p, y) for y in x)
    if isinstance(x, list):
        return [apply(p, y) for y in x]
    if isinstance(x, frozenset):
        return frozenset(apply(p, y) for y in x)
    if isinstance(x, set):
        return {apply(p, y) for y in x}
    if hasattr(x, "rename"):
        return x.rename(p)
    raise TypeError(f"cannot rename atoms in {type(x).__name__}")


def support_of(x) -> frozenset[int]:
    """Atoms of a ground tuple, or the declared support of a symbolic object."""
    if hasattr(x, "support"):
        return frozenset(x.support)
    if isinstance(x, int):
        return frozenset([x]) if x > 0 else frozenset()
    if isinstance(x, (tuple, list, set, frozenset)):
        out = set()
        for y in x:
            out |= support_of(y)
        return frozenset(out)
    raise TypeError(f"no support for {type(x).__name__}")


class Fresh:
    """Counter handing out atoms above everything seen so far."""

    def __init__(self, *avoid: Iterable[int]):
        top = 0
        for group in avoid:
            for a in group:
                top = max(top, a)
        self.next = top + 1

    def avoid(self, atoms: Iterable[int]) -> None:
        for a in atoms:
            if a >= self.next:
                self.next = a + 1

    def take(self, n: int = 1) -> list[int]:
        out = list(range(self.next, self.next + n))
        self.next += n
        return out

    def one(self) -> int:
        return self.take(1)[0]


# --- permutations of positions {0..k-1}, stored as image tuples ---------------

def perm_compose(g: tuple[int, ...], h: tuple[int, ...]) -> tuple[int, ...]:
    """``g ∘ h`` on positions."""
    return tuple(g[i] for i in h)


def perm_inverse(g: tuple[int, ...]) -> tuple[int, ...]:
    inv = [0] * len(g)
    for i, j in enumerate(g):
        inv[j] = i
    return tuple(inv)


def act(t: tuple, g: tuple[int, ...]) -> tuple:
    """Coordinate action ``t ∘ g``: position ``i`` receives ``t[g[i]]``."""
    return tuple(t[i] for i in g)


def parse_cycles(text: str, degree: int) -> tuple[int, ...]:
    """Parse ``"(1 2)(3 4)"`` (1-based) into an image tuple on ``0..degree-1``."""
    img = list(range(degree))
    text = text.strip()
    if not text or text == "()":
        return tuple(img)
    if not (text.startswith("(") and text.endswith(")")):
        raise ValueError(f"malformed cycle notation: {text!r}")
    for chunk in text[1:-1].split(")("):
        pts = [int(s) for s in chunk.replace(",", " ").split()]
        if len(set(pts)) != len(pts) or any(not 1 <= p <= degree for p in pts):
            raise ValueError(f"malformed cycle ({chunk}) for degree {degree}")
        for a, b in zip(pts, pts[1:] + pts[:1]):
            img[a - 1] = b - 1
    _check_perm(tuple(img), degree)
    return tuple(img)


def _check_perm(g, degree):
    if len(g) != degree or sorted(g) != list(range(degree)):
        raise ValueError(f"not a permutation of {{1..{degree}}}: {g}")


class PermGroup:
    """A subgroup of S_k, materialized as its full element list."""

    def __init__(self, degree: int, generators: Iterable[tuple[int, ...]] = ()):
        if degree > MAX_DEGREE:
            raise ValueError(f"group degree {degree} exceeds cap {MAX_DEGREE}")
        gens = [tuple(g) for g in generators]
        for g in gens:
            _check_perm(g, degree)
        self.degree = degree
        self.generators = tuple(gens)
        identity = tuple(range(degree))
        seen = {identity}
        frontier = [identity]
        while frontier:
            nxt = []
            for h in frontier:
                for g in gens:
                    gh = perm_compose(g, h)
                    if gh not in seen:
                        seen.add(gh)
                        nxt.append(gh)
            frontier = nxt
        self.elements = tuple(sorted(seen))

    @classmethod
    def symmetric(cls, degree: int) -> PermGroup:
        gens = []
        if degree >= 2:
            gens.append((1, 0) + tuple(range(2, degree)))
            gens.append(tuple(range(1, degree)) + (0,))
        return cls(degree, gens)

    @classmethod
    def trivial(cls, degree: int) -> PermGroup:
        return cls(degree)

    def __len__(self):
        return len(self.elements)

    def __contains__(self, g):
        return tuple(g) in set(self.elements)

    def is_trivial(self) -> bool:
        return len(self.elements) == 1

    def __eq__(self, other):
        return isinstance(other, PermGroup) and self.degree == other.degree \
            and self.elements == other.elements

    def __hash__(self):
        return hash((self.degree, self.elements))

    def __repr__(self):
        return f"PermGroup(degree={self.degree}, order={len(self)})"


def group_closure(generators: Iterable, degree: int) -> PermGroup:
    """Smallest subgroup of S_degree containing ``generators``.

    Generators may be 0-based image tuples or 1-based cycle strings.
    """
    gens = [parse_cycles(g, degree) if isinstance(g, str) else tuple(g)
            for g in generators]
    return PermGroup(degree, gens)
