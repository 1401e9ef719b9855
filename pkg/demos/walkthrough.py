"""
Solving orbit-finite linear systems
===================================

Run from the repository root:  python demos/walkthrough.py
"""
from fractions import Fraction
from pathlib import Path

from orbitsolve import QQ, ZZ, finsolve, solve, verify
from orbitsolve.atoms import PermGroup
from orbitsolve.basis import decompose
from orbitsolve.dsl import parse
from orbitsolve.finsolve import Instance, cog, decide, reduce_dimension
from orbitsolve.linvec import SymVector, mat_vec
from orbitsolve.orbits import OrbitDecl, OrbitSet, enumerate_s_orbits, var

HERE = Path(__file__).resolve().parent / "systems"
x, y = var(0), var(1)

# Orbits and patterns.  Ordered pairs of distinct atoms split into 7 orbits
# once the atoms 1 and 2 are fixed; '_' marks a free atom.
pairs = OrbitDecl("C", 2, PermGroup(2))
for p in enumerate_s_orbits(pairs, {1, 2}):
    print("  orbit", "".join("_" if e < 0 else str(e) for e in p))

# A vector with finite support is one value per orbit.  Here: 2 everywhere,
# plus 3 on pairs starting with atom 1, written in the tight basis.
C = OrbitSet.of(pairs)
v = SymVector.constant(C, 2) + SymVector.make(C, (), {("C", (1, x)): 3})
print("v =", v)
print("coordinates:", decompose(v).tight_items())

# x(a,b) + x(b,a) = 1 over unordered pairs: one half works, integers do not,
# and no finite combination of unit vectors does either.
s = parse((HERE / "pairs_half.sys").read_text())
res = solve(s.A, s.t, QQ)
print("pairs_half over Q:", res.solvable, res.witness)
print("pairs_half over Z:", solve(s.A, s.t, ZZ).solvable)
print("pairs_half finitary over Q:", finsolve(s.A, s.t, QQ).solvable)
half = SymVector.constant(s.A.cols, Fraction(1, 2))
print("A * (1/2) =", mat_vec(s.A, half))

# sum over c of x(a,c) = 1 for every atom a: the constant 1 gives an
# undefined product, but a row of ones at a fixed atom plus one corrective
# pair is an integer solution.
s = parse((HERE / "first_coordinate.sys").read_text())
res = solve(s.A, s.t, ZZ)
print("first_coordinate over Z:", res.solvable, res.witness)
known = SymVector.make(s.A.cols, (), {("C", (x, 1)): 1}) + SymVector.make(s.A.cols, (), {("C", (1, 2)): 1})
print("hand-made witness verifies:", verify(s.A, known, s.t))
print("constant 1 verifies:", verify(s.A, SymVector.constant(s.A.cols, 1), s.t))

# Unordered pairs instead of ordered ones: no solution at all.
s = parse((HERE / "two_sets.sys").read_text())
print("two_sets over Q:", solve(s.A, s.t, QQ).solvable)

# x(a,b) - 2 x(b,c) + x(c,a) = 1, with the reduction trace.
s = parse((HERE / "triangle.sys").read_text())
res = solve(s.A, s.t, QQ)
print("triangle over Q:", res.solvable)
for step in res.trace:
    print("   ", step)

# The relocation step on its own: the alternating sum moves a vector on
# {1,2} to {3,4} while staying inside the span of its renamings.
w = {(0, (1, 2)): 1, (0, (2, 1)): 2}
print("cog:", sorted(cog(w, {1: 3, 2: 4}).items()))

# One reduction round by hand: t = e1 + e2 against renamings of e1.
inst = Instance({0: 1}, [{(0, (1,)): 1}], {(0, (1,)): 1, (0, (2,)): 1}, ZZ)
red, step = reduce_dimension(inst)
print("fixed atoms", step.S, "-> reduced target", red.t, "reps", red.reps)
print("decision:", decide(inst).solvable)
two = Instance({0: 1}, [{(0, (1,)): 2}], {(0, (1,)): 1}, ZZ)
print("2q = 1 over Z:", decide(two).solvable)
