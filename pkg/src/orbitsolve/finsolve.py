"""Finitary solvability: is ``t`` a finite combination of columns of ``A``?

The problem is first turned into an *instance*: finitary vectors whose
entries are indexed by ``(label, tuple)`` where every label has a fixed arity
and tuples are non-repeating atom tuples of that arity.  The instance asks
whether ``t`` is a finite linear combination of renamings ``pi(v)`` of the
representatives ``v``.  Each round checks local solvability and then removes
the top arity by relocating it onto a fixed atom set ``S`` and stripping
``S`` away.  At arity zero only a finite system is left.

Witnesses are pulled back through every round and checked exactly at each
level.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from .atoms import Fresh
from .basis import Basis, decompose
from .linvec import FinVector, SymMatrix, SymVector, mat_vec
from .orbits import Element, enumerate_s_orbits, instantiate, n_vars
from .ring import Ring, solve_finite


class InternalError(AssertionError):
    """A self-check failed; the result must not be trusted."""


# --- finitary labelled vectors: {(label, tuple): value} -----------------------


def add_into(out: dict, v: dict, c=1) -> dict:
    for key, val in v.items():
        nv = out.get(key, 0) + c * val
        if nv:
            out[key] = nv
        else:
            out.pop(key, None)
    return out


def vec_atoms(v: dict) -> set[int]:
    return {a for (_, t) in v for a in t}


def rename(v: dict, m) -> dict:
    """Apply an atom map (dict or callable) to every tuple of ``v``."""
    f = m if callable(m) else m.__getitem__
    return {(lab, tuple(f(a) for a in t)): val for (lab, t), val in v.items()}


def restrict(v: dict, labels, atoms=None) -> dict:
    """Entries with a label in ``labels`` and, if given, atom set ``atoms``."""
    return {(lab, t): val for (lab, t), val in v.items()
            if lab in labels and (atoms is None or frozenset(t) == atoms)}


def groups(v: dict, labels) -> list[frozenset]:
    """Atom sets of the tuples of ``v`` carrying one of ``labels``."""
    seen = {frozenset(t) for (lab, t) in v if lab in labels}
    return sorted(seen, key=sorted)


def canonical_key(v: dict, limit: int = 6):
    """A key equal for two vectors that differ by an atom renaming.

    Exact (minimum over all renamings) up to ``limit`` atoms; beyond that it
    only identifies equal vectors.
    """
    atoms = sorted(vec_atoms(v))
    items = [(lab, t, str(val)) for (lab, t), val in v.items()]
    if len(atoms) > limit:
        return tuple(sorted(items))
    best = None
    for perm in itertools.permutations(range(1, len(atoms) + 1)):
        m = dict(zip(atoms, perm))
        key = tuple(sorted((lab, tuple(m[a] for a in t), s) for lab, t, s in items))
        if best is None or key < best:
            best = key
    return best


# --- cogs and the relocation operator -----------------------------------------


def _subsets(xs):
    xs = sorted(xs)
    for r in range(len(xs) + 1):
        yield from itertools.combinations(xs, r)


def cog(w: dict, sigma: dict) -> dict:
    """Alternating sum over ``I`` of ``w`` with the atoms of ``I`` moved by ``sigma``.

    ``sigma`` is a bijection from a k-set ``A`` to a disjoint k-set; every
    tuple of ``w`` must consist of atoms of ``A``.
    """
    A = set(sigma)
    if set(sigma.values()) & A or len(set(sigma.values())) != len(A):
        raise ValueError("sigma must be a bijection onto a disjoint set")
    for (_, t) in w:
        if not set(t) <= A:
            raise ValueError(f"tuple {t} is not over {sorted(A)}")
    out: dict = {}
    for I in _subsets(A):
        I = set(I)
        sign = -1 if len(I) % 2 else 1
        add_into(out, rename(w, lambda a: sigma[a] if a in I else a), sign)
    return out


def order_bijection(A, S, order) -> dict:
    """Order-preserving bijection from ``A`` (ordered by ``order``) onto sorted ``S``."""
    rank = {a: i for i, a in enumerate(order)}
    return dict(zip(sorted(A, key=lambda a: rank[a]), sorted(S)))


def delta(w: dict, S, order, labels=None) -> dict:
    """Sum of the cogs of ``w`` restricted to each k-set, relocated onto ``S``.

    ``order`` lists the atoms of ``w`` from least to greatest.
    """
    S = set(S)
    if vec_atoms(w) & S:
        raise ValueError("S must avoid the atoms of w")
    labels = {lab for lab, _ in w} if labels is None else labels
    out: dict = {}
    for A in groups(w, labels):
        add_into(out, cog(restrict(w, labels, A), order_bijection(A, S, order)))
    return out


# --- instances ----------------------------------------------------------------


@dataclass
class Instance:
    """``t`` in the finite span of the renamings of ``reps``?

    ``labels`` maps every label to its arity.  ``base`` lists atoms that the
    final witness must avoid (used when the instance encodes a system with a
    nonempty support).
    """

    labels: dict
    reps: list
    t: dict
    ring: Ring
    base: frozenset = frozenset()

    def __post_init__(self):
        for v in self.reps + [self.t]:
            for (lab, tup) in v:
                if len(tup) != self.labels[lab] or len(set(tup)) != len(tup):
                    raise ValueError(f"bad entry {(lab, tup)}")

    @property
    def arity(self) -> int:
        used = {lab for v in self.reps + [self.t] for (lab, _) in v}
        return max((self.labels[lab] for lab in used), default=0)

    @property
    def components(self) -> list[tuple[int, int]]:
        """``(arity, width)`` pairs, one per occurring arity."""
        used = {lab for v in self.reps + [self.t] for (lab, _) in v}
        widths: dict = {}
        for lab in used:
            widths[self.labels[lab]] = widths.get(self.labels[lab], 0) + 1
        return sorted(widths.items())

    def main_labels(self) -> set:
        k = self.arity
        return {lab for lab, a in self.labels.items() if a == k}

    def atoms(self) -> set[int]:
        out = vec_atoms(self.t)
        for v in self.reps:
            out |= vec_atoms(v)
        return out

    def summary(self) -> dict:
        return {"arity": self.arity, "components": [list(c) for c in self.components],
                "representatives": len(self.reps), "target_entries": len(self.t)}


@dataclass
class LocalResult:
    ok: bool
    # k-set -> list of (coef, rep index, bijection from a k-set of the rep onto it)
    solutions: dict = field(default_factory=dict)
    failed: frozenset | None = None


def local_systems(inst: Instance) -> LocalResult:
    """Solve the restriction of the instance to each k-set met by the target."""
    k = inst.arity
    main = inst.main_labels()
    ring = inst.ring
    result = LocalResult(True)
    if k == 0:
        return result
    rep_groups = [groups(v, main) for v in inst.reps]
    for A in groups(inst.t, main):
        target = restrict(inst.t, main, A)
        cols, prov, seen = [], [], set()
        for r, v in enumerate(inst.reps):
            for A0 in rep_groups[r]:
                part = restrict(v, main, A0)
                src = sorted(A0)
                for img in itertools.permutations(sorted(A)):
                    beta = dict(zip(src, img))
                    col = rename(part, beta)
                    key = frozenset(col.items())
                    if key in seen:
                        continue
                    seen.add(key)
                    cols.append(col)
                    prov.append((r, beta))
        rows = sorted({key for c in cols for key in c} | set(target))
        M = [[ring.coerce(c.get(key, 0)) for c in cols] for key in rows]
        b = [ring.coerce(target.get(key, 0)) for key in rows]
        x = solve_finite(ring, M, b) if cols else None
        if x is None:
            return LocalResult(False, result.solutions, A)
        result.solutions[A] = [(q, r, beta) for q, (r, beta) in zip(x, prov) if q]
    return result


def locally_solvable(inst: Instance) -> bool:
    return local_systems(inst).ok


def order_signatures(v: dict, labels) -> list[dict]:
    """Distinct ways a total order on the atoms can order each k-set of ``v``.

    Each signature maps a k-set to its atoms listed from least to greatest.
    """
    gs = groups(v, labels)
    atoms = sorted(set().union(*gs)) if gs else []
    seen = {}
    for perm in itertools.permutations(atoms):
        rank = {a: i for i, a in enumerate(perm)}
        sig = tuple(tuple(sorted(A, key=rank.__getitem__)) for A in gs)
        seen.setdefault(sig, None)
    return [dict(zip(gs, sig)) for sig in seen]


def _delta_sig(w: dict, S, sig: dict, labels) -> dict:
    out: dict = {}
    for A, ordered in sig.items():
        add_into(out, cog(restrict(w, labels, A), dict(zip(ordered, sorted(S)))))
    return out


@dataclass
class Step:
    """Bookkeeping for one reduction round."""

    k: int
    S: tuple
    local: dict
    # for each new representative: (parent index, order signature)
    origin: list
    parent_reps: list
    parent_t: dict
    main: set
    orders: int = 0


def _strip(v: dict, S: set, main: set, labels: dict, new_labels: dict, check: bool) -> dict:
    out: dict = {}
    for (lab, t), val in v.items():
        if lab in main:
            if check and not set(t) & S:
                raise InternalError("main entry left outside S after relocation")
            shape = tuple(a if a in S else 0 for a in t)
            key = (lab, shape)
            if key not in new_labels:
                new_labels[key] = max(list(labels) + [x for x in new_labels.values()] + [-1]) + 1
            nt = tuple(a for a in t if a not in S)
            add_into(out, {(new_labels[key], nt): val})
        else:
            if check and set(t) & S:
                raise InternalError("lower entry meets S")
            add_into(out, {(lab, t): val})
    return out


def reduce_dimension(inst: Instance, check: bool = True, local: LocalResult | None = None):
    """One round: an equisolvable instance of smaller arity, plus its ``Step``."""
    k = inst.arity
    if k == 0:
        raise ValueError("nothing to reduce at arity 0")
    if check:
        local = local_systems(inst) if local is None else local
        if not local.ok:
            raise ValueError("instance is not locally solvable")
    main = inst.main_labels()
    used = inst.atoms()
    S = []
    a = 1
    while len(S) < k:
        if a not in used:
            S.append(a)
        a += 1
    Sset = set(S)

    new_reps, origin, seen = [], [], set()
    n_orders = 0
    for r, v in enumerate(inst.reps):
        w = restrict(v, main)
        sigs = order_signatures(w, main) if w else [{}]
        n_orders += len(sigs)
        for sig in sigs:
            vbar = add_into(dict(v), _delta_sig(w, Sset, sig, main), -1)
            if not vbar:
                continue
            new_reps.append((vbar, r, sig))
    tmain = restrict(inst.t, main)
    tbar = add_into(dict(inst.t), delta(tmain, Sset, sorted(vec_atoms(tmain)), main), -1)

    labels = {lab: ar for lab, ar in inst.labels.items() if lab not in main}
    new_labels: dict = {}
    t_new = _strip(tbar, Sset, main, inst.labels, new_labels, check)
    reps = []
    for vbar, r, sig in new_reps:
        sv = _strip(vbar, Sset, main, inst.labels, new_labels, check)
        key = canonical_key(sv)
        if key in seen:
            continue
        seen.add(key)
        reps.append(sv)
        origin.append((r, sig))
    for (lab, shape), nid in new_labels.items():
        labels[nid] = sum(1 for a in shape if a == 0)
    out = Instance(labels, reps, t_new, inst.ring, inst.base)
    step = Step(k, tuple(S), local.solutions if local else {}, origin,
                inst.reps, inst.t, main, n_orders)
    return out, step


# --- driver -------------------------------------------------------------------


@dataclass
class Decision:
    solvable: bool
    # level-0 combination: list of (coef, rep index, atom map on the rep's atoms)
    terms: list | None = None
    trace: list = field(default_factory=list)


def _merge(terms):
    acc: dict = {}
    for q, r, m in terms:
        key = (r, tuple(sorted(m.items())))
        acc[key] = acc.get(key, 0) + q
    return [(q, r, dict(m)) for (r, m), q in acc.items() if q]


def _combine(reps, terms) -> dict:
    out: dict = {}
    for q, r, m in terms:
        add_into(out, rename(reps[r], m), q)
    return out


def _avoid(terms, bad: set, fresh: Fresh):
    """Rename atoms of ``bad`` occurring in the images to fresh atoms."""
    hit = sorted({a for _, _, m in terms for a in m.values() if a in bad})
    swap = dict(zip(hit, fresh.take(len(hit))))
    return [(q, r, {x: swap.get(y, y) for x, y in m.items()}) for q, r, m in terms]


def _extend(m: dict, atoms, fresh: Fresh) -> dict:
    m = dict(m)
    for a in sorted(atoms):
        if a not in m:
            m[a] = fresh.one()
    return m


def _pull_back(terms, step: Step, fresh: Fresh, ring) -> list:
    S = set(step.S)
    terms = _avoid(terms, S, fresh)
    out = []
    for q, j, m in terms:
        r, sig = step.origin[j]
        v = step.parent_reps[r]
        pm = _extend(m, vec_atoms(v), fresh)
        out.append((q, r, pm))
        for A, ordered in sig.items():
            moved = [pm[a] for a in ordered]
            sigma = dict(zip(moved, sorted(S)))
            for I in _subsets(moved):
                sign = -1 if len(I) % 2 else 1
                sw = {a: sigma[a] for a in I}
                out.append((-q * sign, r, {x: sw.get(y, y) for x, y in pm.items()}))
    # the target's own relocation, rebuilt from the local solutions
    tmain = restrict(step.parent_t, step.main)
    order0 = sorted(vec_atoms(tmain))
    for A in groups(tmain, step.main):
        sigma = order_bijection(A, S, order0)
        for lam, r, beta in step.local[A]:
            v = step.parent_reps[r]
            pm = _extend(beta, vec_atoms(v), fresh)
            for I in _subsets(A):
                sign = -1 if len(I) % 2 else 1
                sw = {a: sigma[a] for a in I}
                out.append((lam * sign, r, {x: sw.get(y, y) for x, y in pm.items()}))
    out = _merge(out)
    if _combine(step.parent_reps, out) != {k: v for k, v in step.parent_t.items()}:
        raise InternalError("pulled-back combination does not reproduce the target")
    return out


def decide(inst: Instance, witness: bool = True) -> Decision:
    trace = []
    if not inst.t:
        return Decision(True, [], [{"level": 0, **inst.summary(), "note": "zero target"}])
    steps = []
    cur = inst
    while True:
        entry = {"level": len(steps), **cur.summary()}
        trace.append(entry)
        if not cur.t:
            terms = []
            break
        if cur.arity == 0:
            labs = sorted({lab for v in cur.reps + [cur.t] for lab, _ in v})
            M = [[cur.ring.coerce(v.get((lab, ()), 0)) for v in cur.reps] for lab in labs]
            b = [cur.ring.coerce(cur.t.get((lab, ()), 0)) for lab in labs]
            x = solve_finite(cur.ring, M, b) if cur.reps else None
            entry["finite_system"] = [len(labs), len(cur.reps)]
            if x is None:
                entry["result"] = "unsolvable"
                return Decision(False, None, trace)
            terms = [(q, r, {}) for r, q in enumerate(x) if q]
            break
        local = local_systems(cur)
        entry["locally_solvable"] = local.ok
        if not local.ok:
            entry["failed_set"] = sorted(local.failed)
            return Decision(False, None, trace)
        nxt, step = reduce_dimension(cur, check=True, local=local)
        entry["S"] = list(step.S)
        entry["order_signatures"] = step.orders
        steps.append(step)
        cur = nxt
    if not witness:
        return Decision(True, None, trace)
    top = set(inst.base) | inst.atoms()
    for st in steps:
        top |= set(st.S) | vec_atoms(st.parent_t)
        for v in st.parent_reps:
            top |= vec_atoms(v)
    top |= cur.atoms()
    fresh = Fresh(top)
    if _combine(cur.reps, terms) != cur.t:
        raise InternalError("finite solution does not reproduce the target")
    for step in reversed(steps):
        terms = _pull_back(terms, step, fresh, inst.ring)
    terms = _avoid(terms, set(inst.base), fresh)
    if _combine(inst.reps, terms) != inst.t:
        raise InternalError("witness does not reproduce the target")
    return Decision(True, terms, trace)


# --- from systems to instances ------------------------------------------------


@dataclass
class Encoding:
    """How an instance was built from column representatives."""

    instance: Instance
    base: frozenset
    carriers: list
    label_names: dict


def span_instance(rows, columns, carriers, base, t: SymVector, ring: Ring) -> Encoding:
    """Encode ``t`` in the finite span of the renamings (fixing ``base``) of ``columns``.

    Every vector is written in the tight-orbit basis of ``rows``, each family
    is unfolded onto plain tuples, and the atoms of ``base`` are moved out of
    the tuples into the labels.
    """
    base = frozenset(base)
    basis = Basis.of(rows)
    names: dict = {}

    def encode(v: SymVector) -> dict:
        out: dict = {}
        for e, c in decompose(v, basis).coords.items():
            decl = basis.index[e.orbit_id]
            for alpha in decl.class_of(e.tuple):
                shape = tuple(a if a in base else 0 for a in alpha)
                lab = names.setdefault((e.orbit_id, shape), len(names))
                add_into(out, {(lab, tuple(a for a in alpha if a not in base)): ring.coerce(c)})
        return out

    reps = [encode(c) for c in columns]
    target = encode(t)
    labels = {lab: sum(1 for a in shape if a == 0) for (_, shape), lab in names.items()}
    inst = Instance(labels, reps, target, ring, base)
    return Encoding(inst, base, list(carriers), {v: k for k, v in names.items()})


def column_representatives(A: SymMatrix, fresh: Fresh) -> list[Element]:
    """One ground column per orbit of the columns under renamings fixing ``sup(A)``."""
    out = []
    for decl in A.cols:
        for p in enumerate_s_orbits(decl, A.support):
            t = instantiate(p, fresh.take(n_vars(p)))
            out.append(Element(decl.id, decl.canonical_tuple(t)))
    return out


def to_instance(A: SymMatrix, t: SymVector, ring: Ring):
    if t.domain != A.rows:
        raise ValueError("target is not over the matrix rows")
    T = A.support
    fresh = Fresh(T, t.support)
    cols = column_representatives(A, fresh)
    vectors = [A.col(c) for c in cols]
    carriers = [frozenset(c.tuple) - T for c in cols]
    enc = span_instance(A.rows, vectors, carriers, T, t, ring)
    return enc, cols


@dataclass
class FinResult:
    solvable: bool
    witness: FinVector | None = None
    trace: list = field(default_factory=list)


def lift_terms(enc: Encoding, terms, fresh: Fresh):
    """Atom maps on each column carrier, moved off the base atoms."""
    out = []
    for q, r, m in terms:
        out.append((q, r, _extend(m, enc.carriers[r], fresh)))
    return out


def finsolve(A: SymMatrix, t: SymVector, ring: Ring, witness: bool = True) -> FinResult:
    t = SymVector(t.domain, t.support, {k: ring.coerce(v) for k, v in t.entries.items()})
    A = SymMatrix(A.rows, A.cols, A.support, {k: ring.coerce(v) for k, v in A.entries.items()})
    enc, cols = to_instance(A, t, ring)
    dec = decide(enc.instance, witness)
    if not dec.solvable or not witness:
        return FinResult(dec.solvable, None, dec.trace)
    top = set(A.support) | set(t.support) | {a for c in cols for a in c.tuple}
    top |= {a for _, _, m in dec.terms for a in m.values()}
    fresh = Fresh(top)
    terms = lift_terms(enc, dec.terms, fresh)
    items = []
    for q, r, m in terms:
        c = cols[r]
        items.append(((c.orbit_id, tuple(m.get(a, a) for a in c.tuple)), q))
    x = FinVector.make(A.cols, items)
    got = mat_vec(A, x.to_sym())
    if got is None or got != t:
        raise InternalError("finitary witness fails verification")
    return FinResult(True, x, dec.trace)
