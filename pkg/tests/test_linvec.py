import random
from fractions import Fraction

from hypothesis import given, settings, strategies as st

from orbitsolve.atoms import PermGroup
from orbitsolve.linvec import SymMatrix, SymVector, inner, is_exact, mat_vec
from orbitsolve.orbits import Element, OrbitDecl, OrbitSet, enumerate_s_orbits, var
from orbitsolve.solve import verify

from oracles import ground_elements, ground_inner, ground_row_product, value
from randsys import random_system

x, y, z = var(0), var(1), var(2)
P2 = OrbitSet.of(OrbitDecl("C", 2, PermGroup(2)))
ONE = OrbitSet.of(OrbitDecl("B", 1, PermGroup(1)))
U2 = OrbitSet.of(OrbitDecl("B", 2, PermGroup.symmetric(2)))


def pairs_half():
    # over unordered rows the rules (a,b)->(a,b) and (a,b)->(b,a) are one product orbit
    return SymMatrix.make(U2, P2, (), {("B", (x, y), "C", (x, y)): 1})


def first_coordinate():
    return SymMatrix.make(ONE, P2, (), {("B", (x,), "C", (x, y)): 1})


def test_eval_examples():
    one = SymVector.constant(P2, 1)
    assert one.eval("C", (3, 4)) == 1
    v = SymVector.make(P2, (), {("C", (1, x)): 1})
    assert v.eval("C", (1, 9)) == 1 and v.eval("C", (9, 1)) == 0
    assert SymVector.zero(P2).eval("C", (1, 2)) == 0


def test_arithmetic_examples():
    one = SymVector.constant(P2, 1)
    assert one + SymVector.zero(P2) == one
    assert (one + one.scale(-1)).is_zero()
    s = one + SymVector.make(P2, (), {("C", (1, x)): 1})
    assert s.support == {1}
    assert s.entries == {("C", (1, x)): 2, ("C", (x, 1)): 1, ("C", (x, y)): 1}


def test_row_examples():
    r = pairs_half().row(Element("B", (1, 2)))
    assert r == SymVector.make(P2, (), {("C", (1, 2)): 1}) + SymVector.make(P2, (), {("C", (2, 1)): 1})
    assert first_coordinate().row(Element("B", (1,))) == SymVector.make(P2, (), {("C", (1, x)): 1})
    assert SymMatrix.zero(ONE, P2).row(Element("B", (1,))).is_zero()


def test_inner_examples():
    a = SymVector.make(P2, (), {("C", (1, x)): 1})
    assert inner(a, SymVector.constant(P2, 1)) is None
    assert inner(a, SymVector.make(P2, (), {("C", (x, 3)): 1})) == 1
    assert inner(a, SymVector.zero(P2)) == 0


def test_mat_vec_examples():
    half = SymVector.constant(P2, Fraction(1, 2))
    assert mat_vec(pairs_half(), half) == SymVector.constant(U2, 1)
    w = SymVector.make(P2, (), {("C", (x, 1)): 1}) + SymVector.make(P2, (), {("C", (1, 2)): 1})
    assert mat_vec(first_coordinate(), w) == SymVector.constant(ONE, 1)
    assert mat_vec(first_coordinate(), SymVector.zero(P2)).is_zero()
    assert mat_vec(first_coordinate(), SymVector.constant(P2, 1)) is None
    assert verify(first_coordinate(), SymVector.zero(P2), SymVector.zero(ONE))


def test_exactness_examples():
    assert not is_exact(first_coordinate(), SymVector.constant(P2, 1))
    assert is_exact(first_coordinate(), SymVector.make(P2, (), {("C", (3, 4)): 1}))
    assert is_exact(first_coordinate(), SymVector.make(P2, (), {("C", (y, 5)): 1}))


GROUPS = [PermGroup(1), PermGroup(2), PermGroup.symmetric(2), PermGroup(3, [(1, 2, 0)])]


def random_vector(rng, domain, max_atoms=3):
    S = set(rng.sample(range(1, 5), rng.randint(0, max_atoms)))
    items = {}
    for decl in domain:
        for p in enumerate_s_orbits(decl, S):
            if rng.random() < 0.5:
                items[(decl.id, p)] = rng.randint(-3, 3)
    return SymVector.make(domain, S, {k: v for k, v in items.items() if v})


@st.composite
def domains(draw):
    G = draw(st.sampled_from(GROUPS))
    return OrbitSet.of(OrbitDecl("C", G.degree, G))


@settings(max_examples=40, deadline=None)
@given(domains(), st.integers(0, 10**6))
def test_eval_respects_refinement(dom, seed):
    rng = random.Random(seed)
    v = random_vector(rng, dom)
    w = v.refine_to(v.support | {7, 8})
    pool = set(v.support) | {7, 8, 9, 10}
    for t in ground_elements(dom["C"], pool):
        assert v.eval("C", t) == w.eval("C", t) == value(v, "C", t, pool)


@settings(max_examples=40, deadline=None)
@given(domains(), st.integers(0, 10**6))
def test_add_scale_pointwise(dom, seed):
    rng = random.Random(seed)
    v, w = random_vector(rng, dom), random_vector(rng, dom)
    c = rng.randint(-3, 3)
    s = v + w.scale(c)
    pool = set(v.support | w.support) | {7, 8, 9}
    for t in ground_elements(dom["C"], pool):
        assert s.eval("C", t) == v.eval("C", t) + c * w.eval("C", t)


@settings(max_examples=40, deadline=None)
@given(domains(), st.integers(0, 10**6))
def test_inner_symmetric_bilinear_and_grounded(dom, seed):
    rng = random.Random(seed)
    a, b, c = (random_vector(rng, dom) for _ in range(3))
    ab = inner(a, b)
    assert ab == inner(b, a)
    defined, val = ground_inner(a, b)
    assert (ab is not None) == defined
    if defined:
        assert ab == val
    ac, bc = inner(a, c), inner(b, c)
    sc = inner(a + b.scale(2), c)
    if ac is not None and bc is not None:
        assert sc == ac + 2 * bc


def test_mat_vec_against_ground_rows():
    rng = random.Random(11)
    checked = 0
    for _ in range(60):
        A, t = random_system(rng, max_atoms=2, max_rules=3, max_k=2)
        v = random_vector(rng, A.cols, max_atoms=2)
        out = mat_vec(A, v)
        S = A.support | v.support
        for decl in A.rows:
            for p in enumerate_s_orbits(decl, S):
                b = tuple(a if a > 0 else 20 - a for a in p)
                defined, val = ground_row_product(A, v, decl.id, b)
                if out is None:
                    continue
                assert defined
                assert out.eval(decl.id, b) == val
                checked += 1
        if out is None:
            # some ground row must see a column outside its own support
            bad = False
            for decl in A.rows:
                for p in enumerate_s_orbits(decl, S):
                    b = tuple(a if a > 0 else 20 - a for a in p)
                    bad = bad or not ground_row_product(A, v, decl.id, b)[0]
            assert bad
    assert checked > 50


def test_tight_support_contains_defining_atoms():
    # a vector over the tight family of (1, _) must be supported by a set containing 1
    v = SymVector.make(P2, (), {("C", (1, x)): 2})
    assert 1 in v.shrink().support
    assert v.shrink() == v
