"""Finitely supported vectors and matrices over declared orbit sets.

A ``SymVector`` with support ``S`` stores one value per ``S``-orbit, keyed by
``(orbit_id, canonical pattern)``; orbits that are absent have value zero.
A ``SymMatrix`` does the same for ``S``-orbits of ``rows x cols``, keyed by
``(row_id, col_id, (row pattern, col pattern))`` with shared variables.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from collections.abc import Iterable

from .atoms import Fresh, Perm
from .orbits import (
    Element, OrbitSet, canonical, check_pattern, concrete, enumerate_s_orbits,
    format_entries, instantiate, match_all, n_vars, pattern_key, product_canonical,
    refine, refine_product, renumber, s_pattern, var_index,
)


class DomainMismatch(ValueError):
    pass


def _nonzero(v) -> bool:
    return bool(v)


@dataclass(frozen=True)
class FinVector:
    """Finitary vector: finitely many nonzero values on ground elements."""

    domain: OrbitSet
    entries: dict = field(default_factory=dict)

    @classmethod
    def make(cls, domain: OrbitSet, items: Iterable) -> FinVector:
        out: dict = {}
        for (oid, t), v in items:
            e = domain[oid].element(*t)
            out[e] = out.get(e, 0) + v
        return cls(domain, {e: v for e, v in out.items() if _nonzero(v)})

    @property
    def support(self) -> frozenset[int]:
        return frozenset(a for e in self.entries for a in e.tuple)

    def to_sym(self) -> SymVector:
        return SymVector.make(self.domain, self.support,
                              {(e.orbit_id, e.tuple): v for e, v in self.entries.items()})


@dataclass(frozen=True)
class SymVector:
    domain: OrbitSet
    support: frozenset
    entries: dict = field(default_factory=dict)

    @classmethod
    def make(cls, domain: OrbitSet, support: Iterable[int], items) -> SymVector:
        """Build from ``{(orbit_id, raw pattern): value}`` or a list of pairs.

        Concrete atoms of the patterns are added to the support.  Patterns
        naming the same orbit are summed.
        """
        if isinstance(items, dict):
            items = items.items()
        items = list(items)
        S = set(support)
        for (oid, p), _ in items:
            S |= concrete(p)
        S = frozenset(S)
        out: dict = {}
        for (oid, p), v in items:
            check_pattern(p)
            if len(p) != domain[oid].arity:
                raise ValueError(f"pattern {format_entries(p)} has wrong arity for {oid}")
            key = (oid, canonical(p, domain[oid].group))
            out[key] = out.get(key, 0) + v
        return cls(domain, S, {k: v for k, v in out.items() if _nonzero(v)})

    @classmethod
    def zero(cls, domain: OrbitSet) -> SymVector:
        return cls(domain, frozenset(), {})

    @classmethod
    def constant(cls, domain: OrbitSet, value, orbit_id: str | None = None) -> SymVector:
        ids = [o.id for o in domain] if orbit_id is None else [orbit_id]
        return cls.make(domain, (), {(i, renumber([-1 - j for j in range(domain[i].arity)])): value
                                     for i in ids})

    @classmethod
    def unit(cls, domain: OrbitSet, orbit_id: str, t, value=1) -> SymVector:
        return cls.make(domain, t, {(orbit_id, tuple(t)): value})

    def is_zero(self) -> bool:
        return not self.entries

    def items(self):
        return sorted(self.entries.items(), key=lambda kv: (kv[0][0], pattern_key(kv[0][1])))

    def refine_to(self, S: Iterable[int]) -> SymVector:
        S = frozenset(S)
        if not self.support <= S:
            raise ValueError("refinement target must contain the support")
        if S == self.support:
            return self
        out = {}
        for (oid, p), v in self.entries.items():
            for q in refine(self.domain[oid], p, self.support, S):
                out[(oid, q)] = v
        return SymVector(self.domain, S, out)

    def eval(self, orbit_id: str, t) -> object:
        decl = self.domain[orbit_id]
        decl.canonical_tuple(t)
        return self.entries.get((orbit_id, s_pattern(decl, t, self.support)), 0)

    def _check(self, other: SymVector):
        if self.domain != other.domain:
            raise DomainMismatch("vectors live over different orbit sets")

    def __add__(self, other: SymVector) -> SymVector:
        self._check(other)
        S = self.support | other.support
        a, b = self.refine_to(S), other.refine_to(S)
        out = dict(a.entries)
        for k, v in b.entries.items():
            out[k] = out[k] + v if k in out else v
        return SymVector(self.domain, S, {k: v for k, v in out.items() if _nonzero(v)})

    def scale(self, c) -> SymVector:
        out = {k: c * v for k, v in self.entries.items()}
        return SymVector(self.domain, self.support, {k: v for k, v in out.items() if _nonzero(v)})

    def __neg__(self) -> SymVector:
        return self.scale(-1)

    def __sub__(self, other: SymVector) -> SymVector:
        return self + (-other)

    def __eq__(self, other):
        if not isinstance(other, SymVector) or self.domain != other.domain:
            return NotImplemented
        S = self.support | other.support
        return self.refine_to(S).entries == other.refine_to(S).entries

    __hash__ = None

    def rename(self, p: Perm) -> SymVector:
        support = frozenset(p(a) for a in self.support)
        out = {}
        for (oid, pat), v in self.entries.items():
            moved = tuple(p(e) if e > 0 else e for e in pat)
            out[(oid, canonical(moved, self.domain[oid].group))] = v
        return SymVector(self.domain, support, out)

    def shrink(self) -> SymVector:
        """Drop support atoms that the entries do not need.

        Tries removing each atom that occurs in no stored pattern; keeps the
        removal when refining back reproduces the same vector.
        """
        v = self
        used = set()
        for (_, p) in v.entries:
            used |= concrete(p)
        for a in sorted(v.support - used):
            S = v.support - {a}
            cand = {}
            ok = True
            for (oid, p), val in v.entries.items():
                if a in p:
                    ok = False
                    break
                # p over S is the union of its refinements; require all of them present
                cand[(oid, p)] = val
            if not ok:
                continue
            smaller = SymVector(v.domain, S, cand)
            if smaller.refine_to(v.support).entries == v.entries:
                v = smaller
        return v

    def __str__(self):
        if not self.entries:
            return "0"
        parts = [f"{v}*{oid}{format_entries(p)}" for (oid, p), v in self.items()]
        return " + ".join(parts) + f"  [S={sorted(self.support)}]"


@dataclass(frozen=True)
class SymMatrix:
    rows: OrbitSet
    cols: OrbitSet
    support: frozenset
    entries: dict = field(default_factory=dict)

    @classmethod
    def make(cls, rows: OrbitSet, cols: OrbitSet, support: Iterable[int], items) -> SymMatrix:
        """Build from ``{(row_id, row_pat, col_id, col_pat): value}`` or pairs.

        Variables are shared between the row and column pattern of a rule.
        Rules landing on the same product orbit are summed.
        """
        if isinstance(items, dict):
            items = items.items()
        items = list(items)
        S = set(support)
        for (rid, rp, cid, cp), _ in items:
            S |= concrete(rp) | concrete(cp)
        out: dict = {}
        for (rid, rp, cid, cp), v in items:
            key = cls.product_key(rows, cols, rid, rp, cid, cp)
            out[key] = out.get(key, 0) + v
        return cls(rows, cols, frozenset(S), {k: v for k, v in out.items() if _nonzero(v)})

    @staticmethod
    def product_key(rows: OrbitSet, cols: OrbitSet, rid, rp, cid, cp):
        rd, cd = rows[rid], cols[cid]
        if len(rp) != rd.arity or len(cp) != cd.arity:
            raise ValueError("pattern arity does not match its set")
        check_pattern(rp)
        check_pattern(cp)
        return (rid, cid, product_canonical(rd, cd, rp, cp))

    @classmethod
    def zero(cls, rows: OrbitSet, cols: OrbitSet) -> SymMatrix:
        return cls(rows, cols, frozenset(), {})

    def items(self):
        return sorted(self.entries.items(),
                      key=lambda kv: (kv[0][0], kv[0][1], pattern_key(kv[0][2][0]),
                                      pattern_key(kv[0][2][1])))

    def refine_to(self, S: Iterable[int]) -> SymMatrix:
        S = frozenset(S)
        if not self.support <= S:
            raise ValueError("refinement target must contain the support")
        if S == self.support:
            return self
        out = {}
        for (rid, cid, (r, c)), v in self.entries.items():
            for rc in refine_product(self.rows[rid], self.cols[cid], r, c, self.support, S):
                out[(rid, cid, rc)] = v
        return SymMatrix(self.rows, self.cols, S, out)

    def eval(self, row: Element, col: Element):
        r = self.row(row)
        return r.eval(col.orbit_id, col.tuple)

    def row(self, b: Element) -> SymVector:
        """The row vector ``A(b, _)`` over the columns."""
        rd = self.rows[b.orbit_id]
        t = rd.canonical_tuple(b.tuple)
        S = self.support | frozenset(t)
        out: dict = {}
        for (rid, cid, (r, c)), v in self.entries.items():
            if rid != b.orbit_id:
                continue
            for assign in match_all(rd, r, self.support, t):
                col = renumber(tuple(assign.get(var_index(e), e) if e < 0 else e for e in c))
                key = (cid, canonical(col, self.cols[cid].group))
                if key in out and out[key] != v:
                    raise AssertionError("overlapping product orbits")
                out[key] = v
        return SymVector(self.cols, S, out)

    def col(self, c: Element) -> SymVector:
        """The column vector ``A(_, c)`` over the rows."""
        cd = self.cols[c.orbit_id]
        t = cd.canonical_tuple(c.tuple)
        S = self.support | frozenset(t)
        out: dict = {}
        for (rid, cid, (r, cp)), v in self.entries.items():
            if cid != c.orbit_id:
                continue
            for assign in match_all(cd, cp, self.support, t):
                row = renumber(tuple(assign.get(var_index(e), e) if e < 0 else e for e in r))
                key = (rid, canonical(row, self.rows[rid].group))
                if key in out and out[key] != v:
                    raise AssertionError("overlapping product orbits")
                out[key] = v
        return SymVector(self.rows, S, out)

    def rename(self, p: Perm) -> SymMatrix:
        out = {}
        for (rid, cid, (r, c)), v in self.entries.items():
            mr = tuple(p(e) if e > 0 else e for e in r)
            mc = tuple(p(e) if e > 0 else e for e in c)
            out[(rid, cid, product_canonical(self.rows[rid], self.cols[cid], mr, mc))] = v
        return SymMatrix(self.rows, self.cols, frozenset(p(a) for a in self.support), out)

    def __str__(self):
        if not self.entries:
            return "0"
        return " + ".join(f"{v}*[{rid}{format_entries(r)} x {cid}{format_entries(c)}]"
                          for (rid, cid, (r, c)), v in self.items())


def inner(x: SymVector, y: SymVector):
    """``sum_b x(b) y(b)``, or ``None`` when infinitely many terms are nonzero."""
    x._check(y)
    S = x.support | y.support
    a, b = x.refine_to(S), y.refine_to(S)
    total = 0
    for key, v in a.entries.items():
        if key in b.entries:
            if n_vars(key[1]):
                return None
            total = total + v * b.entries[key]
    return total


@dataclass(frozen=True)
class ExactnessReport:
    exact: bool
    violation: tuple | None = None

    def __bool__(self):
        return self.exact


def is_exact(A: SymMatrix, x: SymVector) -> ExactnessReport:
    """Whether ``A x`` is well defined.

    Over the joint support every pair ``(b, c)`` with ``A(b,c) x(c) != 0`` must
    have ``sup(c)`` inside ``sup(b)`` plus the support; a column variable that
    is missing from the row pattern breaks this.
    """
    if x.domain != A.cols:
        raise DomainMismatch("vector is not over the matrix columns")
    S = A.support | x.support
    Ar, xr = A.refine_to(S), x.refine_to(S)
    for (rid, cid, (r, c)), v in Ar.items():
        cstd = canonical(renumber(c), A.cols[cid].group)
        xv = xr.entries.get((cid, cstd))
        if not xv:
            continue
        loose = [e for e in c if e < 0 and e not in r]
        if loose:
            return ExactnessReport(False, ((rid, r), (cid, c), var_index(loose[0])))
    return ExactnessReport(True)


def _representatives(decl, pattern, fresh: Fresh):
    atoms = fresh.take(n_vars(pattern))
    return instantiate(pattern, atoms)


def mat_vec(A: SymMatrix, x: SymVector):
    """``A x`` as a vector over the rows, or ``None`` if it is ill defined.

    Computed by grounding one representative per orbit of the rows and
    checking a second one for constancy.
    """
    if not is_exact(A, x):
        return None
    S = A.support | x.support
    out = {}
    for decl in A.rows:
        for p in enumerate_s_orbits(decl, S):
            fresh = Fresh(S)
            values = []
            for _ in range(2):
                t = _representatives(decl, p, fresh)
                val = inner(A.row(Element(decl.id, decl.canonical_tuple(t))), x)
                if val is None:
                    raise AssertionError("exact product with an ill-defined row")
                values.append(val)
                if not n_vars(p):
                    break
            if values[0] != values[-1]:
                raise AssertionError("row value not constant on an orbit")
            if _nonzero(values[0]):
                out[(decl.id, p)] = values[0]
    return SymVector(A.rows, frozenset(S), out)
