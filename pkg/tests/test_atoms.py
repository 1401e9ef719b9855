import pytest
from hypothesis import given, strategies as st

from orbitsolve.atoms import (
    Fresh, Perm, PermGroup, act, apply, group_closure, parse_cycles, perm_compose,
    support_of,
)


def test_apply_examples():
    assert apply(Perm(), (1, 2, 3)) == (1, 2, 3)
    assert apply(Perm.swap(1, 5), (1, 2)) == (5, 2)
    assert apply(Perm({1: 2, 2: 3, 3: 1}), (1, 2, 3)) == (2, 3, 1)


def test_support_examples():
    assert support_of((1, 2, 3)) == {1, 2, 3}
    assert support_of(()) == frozenset()


def test_group_examples():
    assert len(PermGroup(3, [(1, 2, 0)])) == 3
    assert len(PermGroup(2)) == 1
    assert len(PermGroup(2, [parse_cycles("(1 2)", 2)])) == 2
    assert len(PermGroup.symmetric(4)) == 24


def test_bad_perm_rejected():
    with pytest.raises(ValueError):
        Perm({1: 2, 2: 2})
    with pytest.raises(ValueError):
        PermGroup(2, [(0, 0)])


def test_from_injection_extends_to_bijection():
    p = Perm.from_injection({1: 5, 2: 1})
    assert p(1) == 5 and p(2) == 1
    assert sorted(p(a) for a in (1, 2, 5)) == [1, 2, 5]


def test_fresh_avoids():
    f = Fresh({1, 2, 4})
    got = f.take(3)
    assert not set(got) & {1, 2, 4} and len(set(got)) == 3
    assert f.one() not in got


atom = st.integers(1, 8)
perm_dicts = st.permutations(list(range(1, 9))).map(lambda xs: Perm(dict(zip(range(1, 9), xs))))


@given(perm_dicts, perm_dicts, st.lists(atom, max_size=5))
def test_apply_composes(p, q, xs):
    x = tuple(xs)
    assert apply(p, apply(q, x)) == apply(p.compose(q), x)


@given(perm_dicts, st.lists(atom, max_size=5, unique=True))
def test_support_equivariant(p, xs):
    x = tuple(xs)
    assert support_of(apply(p, x)) == {p(a) for a in support_of(x)}


@given(st.integers(1, 5), st.data())
def test_closure_idempotent(k, data):
    gens = data.draw(st.lists(st.permutations(list(range(k))).map(tuple), max_size=2))
    G = group_closure(gens, k)
    again = group_closure(G.elements, k)
    assert set(again.elements) == set(G.elements)
    for g in G.elements:
        for h in G.elements:
            assert perm_compose(g, h) in G


@given(st.permutations(list(range(4))).map(tuple), st.permutations(list(range(4))).map(tuple))
def test_act_is_group_action(g, h):
    t = (5, 6, 7, 8)
    assert act(act(t, g), h) == act(t, perm_compose(g, h))
