"""Random small systems for property and acceptance tests."""
import random

from orbitsolve.linvec import SymMatrix, SymVector, mat_vec
from orbitsolve.orbits import OrbitDecl, OrbitSet, var
from orbitsolve.atoms import PermGroup


def random_decl(rng, name, max_k=2):
    k = rng.randint(0, max_k) if max_k else 0
    if k == 0:
        k = rng.randint(1, max_k) if rng.random() < 0.8 else 0
    group = PermGroup.symmetric(k) if k >= 2 and rng.random() < 0.35 else PermGroup(k)
    return OrbitDecl(name, k, group)


def random_orbit_set(rng, prefix, n_max=2, max_k=2):
    return OrbitSet(tuple(random_decl(rng, f"{prefix}{i}", max_k)
                          for i in range(rng.randint(1, n_max))))


def random_joint(rng, kr, kc, atoms):
    """Row and column patterns sharing variables, with atoms from ``atoms``."""
    pool = list(atoms) + [var(i) for i in range(kr + kc)]
    row = rng.sample(pool, kr)
    # columns may reuse row entries (sharing) or take unused ones
    rest = [e for e in pool if e not in row]
    col = []
    for _ in range(kc):
        choices = [e for e in row + rest if e not in col]
        if rng.random() < 0.5:
            shared = [e for e in row if e not in col]
            if shared:
                choices = shared
        col.append(rng.choice(choices))
    return tuple(row), tuple(col)


def random_system(rng, max_atoms=3, max_rules=3, n_max=2, max_k=2):
    rows = random_orbit_set(rng, "B", n_max, max_k)
    cols = random_orbit_set(rng, "C", n_max, max_k)
    atoms = list(range(1, rng.randint(0, max_atoms) + 1))
    items = {}
    for _ in range(rng.randint(0, max_rules)):
        rd, cd = rng.choice(rows.orbits), rng.choice(cols.orbits)
        r, c = random_joint(rng, rd.arity, cd.arity, atoms)
        items[(rd.id, r, cd.id, c)] = rng.choice([-2, -1, 1, 1, 2])
    A = SymMatrix.make(rows, cols, atoms, items)
    t = random_target(rng, A, atoms)
    return A, t


def random_tight(rng, cols, atoms):
    decl = rng.choice(cols.orbits)
    pool = list(atoms) + [7, 8]
    pat = []
    nv = 0
    for _ in range(decl.arity):
        if rng.random() < 0.5:
            pat.append(var(nv))
            nv += 1
        else:
            pat.append(rng.choice([a for a in pool if a not in pat]))
    return SymVector.make(cols, (), {(decl.id, tuple(pat)): 1})


def random_target(rng, A, atoms):
    mode = rng.random()
    if mode < 0.45:
        # image of a random combination, often solvable
        x = SymVector.zero(A.cols)
        for _ in range(rng.randint(1, 2)):
            x = x + random_tight(rng, A.cols, atoms).scale(rng.choice([-1, 1, 2]))
        t = mat_vec(A, x)
        if t is not None:
            return t
    t = SymVector.zero(A.rows)
    for _ in range(rng.randint(0, 2)):
        decl = rng.choice(A.rows.orbits)
        pool = list(atoms) + [var(i) for i in range(decl.arity)]
        pat = tuple(rng.sample(pool, decl.arity))
        t = t + SymVector.make(A.rows, atoms, {(decl.id, pat): rng.choice([-1, 1, 2, 3])})
    return t
