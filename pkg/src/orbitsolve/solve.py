"""General (finitely supported) solvability via the extended matrix of tight columns."""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from .atoms import Fresh, Perm, act
from .finsolve import InternalError, decide, lift_terms, span_instance
from .linvec import ExactnessReport, SymMatrix, SymVector, is_exact, mat_vec
from .orbits import OrbitDecl, enumerate_s_orbits, renumber
from .ring import Ring

__all__ = ["ExactnessReport", "is_exact", "build_tilde_matrix", "solve", "verify",
           "SolveResult", "TildeColumn"]


@dataclass(frozen=True)
class TildeColumn:
    """A tight orbit ``w`` of the columns and the product ``A w``.

    ``w`` is read relative to ``sup(A)`` plus the ``carrier`` atoms; its
    renamings fixing ``sup(A)`` give the whole family.
    """

    orbit_id: str
    pattern: tuple
    carrier: frozenset
    w: SymVector
    column: SymVector


@dataclass
class TildeMatrix:
    base: frozenset
    columns: list
    excluded: list = field(default_factory=list)


def _family_key(decl: OrbitDecl, entries, base) -> tuple:
    """Same key iff the patterns agree up to renaming atoms outside ``base``."""
    best = None
    for g in decl.group.elements:
        moved = act(tuple(entries), g)
        news: dict = {}
        key = []
        for e in moved:
            if e > 0 and e in base:
                key.append((0, e))
            elif e > 0:
                key.append((1, news.setdefault(e, len(news))))
            else:
                key.append((2, e))
        key = _renumber_vars(key)
        if best is None or key < best:
            best = key
    return tuple(best)


def _renumber_vars(key):
    names: dict = {}
    out = []
    for k, r in key:
        if k == 2:
            out.append((2, names.setdefault(r, len(names))))
        else:
            out.append((k, r))
    return tuple(out)


def tight_candidates(decl: OrbitDecl, base, fresh: Fresh):
    """One tight orbit per family of tight orbits under renamings fixing ``base``.

    Each is a ``base``-orbit pattern with some of its variables replaced by
    new atoms.
    """
    base = frozenset(base)
    seen = set()
    out = []
    for p in enumerate_s_orbits(decl, base):
        vs = sorted({e for e in p if e < 0}, reverse=True)
        for r in range(len(vs) + 1):
            for Q in itertools.combinations(vs, r):
                news = fresh.take(len(Q))
                sub = dict(zip(Q, news))
                q = renumber(tuple(sub.get(e, e) for e in p))
                key = _family_key(decl, q, base)
                if key in seen:
                    continue
                seen.add(key)
                out.append((q, frozenset(news)))
    return out


def build_tilde_matrix(A: SymMatrix, t: SymVector | None = None) -> TildeMatrix:
    """Columns ``A w`` for every family of tight column orbits with ``A w`` defined."""
    T = A.support
    fresh = Fresh(T, t.support if t is not None else ())
    cols, excluded = [], []
    for decl in A.cols:
        for q, news in tight_candidates(decl, T, fresh):
            w = SymVector.make(A.cols, T | news, {(decl.id, q): 1})
            if not is_exact(A, w):
                excluded.append((decl.id, q, news))
                continue
            col = mat_vec(A, w)
            cols.append(TildeColumn(decl.id, q, news, w, col))
    return TildeMatrix(T, cols, excluded)


@dataclass
class SolveResult:
    solvable: bool
    witness: SymVector | None = None
    trace: list = field(default_factory=list)


def verify(A: SymMatrix, x: SymVector, t: SymVector) -> bool:
    if not is_exact(A, x):
        return False
    got = mat_vec(A, x)
    return got is not None and got == t


def _in_ring(A, t, ring):
    A = SymMatrix(A.rows, A.cols, A.support, {k: ring.coerce(v) for k, v in A.entries.items()})
    t = SymVector(t.domain, t.support, {k: ring.coerce(v) for k, v in t.entries.items()})
    return A, t


def solve(A: SymMatrix, t: SymVector, ring: Ring, witness: bool = True) -> SolveResult:
    if t.domain != A.rows:
        raise ValueError("target is not over the matrix rows")
    A, t = _in_ring(A, t, ring)
    tilde = build_tilde_matrix(A, t)
    enc = span_instance(A.rows, [c.column for c in tilde.columns],
                        [c.carrier for c in tilde.columns], tilde.base, t, ring)
    dec = decide(enc.instance, witness)
    trace = [{"tilde_columns": len(tilde.columns), "excluded_families": len(tilde.excluded)}]
    trace += dec.trace
    if not dec.solvable or not witness:
        return SolveResult(dec.solvable, None, trace)
    top = set(A.support) | set(t.support)
    for c in tilde.columns:
        top |= c.carrier
    top |= {a for _, _, m in dec.terms for a in m.values()}
    fresh = Fresh(top)
    x = SymVector(A.cols, frozenset(), {})
    for q, r, m in lift_terms(enc, dec.terms, fresh):
        col = tilde.columns[r]
        moved = col.w.rename(Perm.from_injection(m))
        x = x + moved.scale(q)
    if not verify(A, x, t):
        raise InternalError("solution fails verification")
    return SolveResult(True, x.shrink(), trace)
