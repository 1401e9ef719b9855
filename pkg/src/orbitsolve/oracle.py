"""Independent one-sided checks for the solvers.

``pool_search`` looks for a solution built from tight orbits whose atoms come
from a finite pool; any hit is verified, so a hit proves solvability.
``necessary_check`` runs conditions every solvable system satisfies, so a
failure proves unsolvability.  Neither ever claims the other direction.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass

from .finsolve import Instance, local_systems, span_instance, to_instance
from .linvec import FinVector, SymMatrix, SymVector, is_exact, mat_vec
from .orbits import canonical, enumerate_s_orbits, pattern_key, var
from .ring import Ring, solve_finite
from .solve import build_tilde_matrix, verify


def default_pool(A: SymMatrix, t: SymVector) -> int:
    k = max(A.rows.max_arity, A.cols.max_arity)
    return len(A.support | t.support) + 3 * k


def pool_tight_orbits(decl, pool, finitary=False):
    """Canonical tight-orbit patterns of ``decl`` whose atoms lie in ``pool``."""
    pool = sorted(pool)
    out = set()
    k = decl.arity
    sizes = [k] if finitary else range(k + 1)
    for j in sizes:
        for P in itertools.combinations(range(k), j):
            for atoms in itertools.permutations(pool, j):
                entries = [0] * k
                it = iter(atoms)
                nv = 0
                for i in range(k):
                    if i in P:
                        entries[i] = next(it)
                    else:
                        entries[i] = var(nv)
                        nv += 1
                out.add(canonical(entries, decl.group))
    return sorted(out, key=pattern_key)


def pool_search(A: SymMatrix, t: SymVector, ring: Ring, m: int | None = None,
                finitary: bool = False):
    """A verified solution using tight orbits over the pool ``{1..m}``, or ``None``."""
    m = default_pool(A, t) if m is None else m
    pool = set(range(1, m + 1)) | A.support | t.support
    A = SymMatrix(A.rows, A.cols, A.support, {k: ring.coerce(v) for k, v in A.entries.items()})
    t = SymVector(t.domain, t.support, {k: ring.coerce(v) for k, v in t.entries.items()})
    if t.is_zero():
        return SymVector.zero(A.cols)
    cands, cols = [], []
    for decl in A.cols:
        for p in pool_tight_orbits(decl, pool, finitary):
            w = SymVector.make(A.cols, (), {(decl.id, p): 1})
            if not is_exact(A, w):
                continue
            col = mat_vec(A, w)
            if col.is_zero():
                continue
            cands.append(w)
            cols.append(col.refine_to(pool))
    if not cands:
        return None
    tt = t.refine_to(pool)
    rows = sorted({k for c in cols for k in c.entries} | set(tt.entries),
                  key=lambda k: (k[0], pattern_key(k[1])))
    M = [[ring.coerce(c.entries.get(r, 0)) for c in cols] for r in rows]
    b = [ring.coerce(tt.entries.get(r, 0)) for r in rows]
    x = solve_finite(ring, M, b)
    if x is None:
        return None
    sol = SymVector.zero(A.cols)
    for q, w in zip(x, cands):
        if q:
            sol = sol + w.scale(q)
    if not verify(A, sol, t):
        raise AssertionError("pool solution failed verification")
    return sol


def label_sums(v: dict) -> dict:
    out: dict = {}
    for (lab, _), val in v.items():
        out[lab] = out.get(lab, 0) + val
    return {k: v for k, v in out.items() if v}


def instance_necessary(inst: Instance) -> bool:
    """Local solvability plus the per-label sum condition.

    Summing all entries of one label is linear and unchanged by renaming
    atoms, so the target's sums must be a combination of the representatives'.
    """
    if not inst.t:
        return True
    if not local_systems(inst).ok:
        return False
    sums = [label_sums(v) for v in inst.reps]
    ts = label_sums(inst.t)
    labs = sorted(set(ts).union(*[set(s) for s in sums]))
    if not inst.reps:
        return False
    M = [[inst.ring.coerce(s.get(lab, 0)) for s in sums] for lab in labs]
    b = [inst.ring.coerce(ts.get(lab, 0)) for lab in labs]
    return solve_finite(inst.ring, M, b) is not None


def necessary_check(A: SymMatrix, t: SymVector, ring: Ring, finitary: bool = False) -> bool:
    if t.is_zero():
        return True
    A = SymMatrix(A.rows, A.cols, A.support, {k: ring.coerce(v) for k, v in A.entries.items()})
    t = SymVector(t.domain, t.support, {k: ring.coerce(v) for k, v in t.entries.items()})
    if finitary:
        enc, _ = to_instance(A, t, ring)
    else:
        tilde = build_tilde_matrix(A, t)
        enc = span_instance(A.rows, [c.column for c in tilde.columns],
                            [c.carrier for c in tilde.columns], tilde.base, t, ring)
    return instance_necessary(enc.instance)


@dataclass(frozen=True)
class Sandwich:
    sufficient_yes: bool
    necessary_yes: bool
    witness: SymVector | None = None

    @property
    def forced(self):
        if self.sufficient_yes:
            return True
        if not self.necessary_yes:
            return False
        return None

    def admits(self, answer: bool) -> bool:
        """Whether ``answer`` is consistent with both one-sided checks."""
        if answer and not self.necessary_yes:
            return False
        if not answer and self.sufficient_yes:
            return False
        return True


def sandwich(A: SymMatrix, t: SymVector, ring: Ring, m: int | None = None,
             finitary: bool = False) -> Sandwich:
    w = pool_search(A, t, ring, m, finitary)
    nec = necessary_check(A, t, ring, finitary)
    if w is not None and not nec:
        raise AssertionError("oracle contradiction: verified solution but a failed necessary check")
    return Sandwich(w is not None, nec, w)


def as_finvector(x: SymVector) -> FinVector:
    """Read a finitary symbolic vector as a list of ground elements."""
    items = []
    for (oid, p), v in x.entries.items():
        if any(e < 0 for e in p):
            raise ValueError("vector is not finitary")
        items.append(((oid, p), v))
    return FinVector.make(x.domain, items)


__all__ = ["pool_search", "necessary_check", "sandwich", "Sandwich", "default_pool",
           "instance_necessary", "pool_tight_orbits", "as_finvector", "enumerate_s_orbits"]
