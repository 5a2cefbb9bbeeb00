from __future__ import annotations

import itertools
import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import gen, perm
from permclosure.errors import DegreeMismatch, NotAnOrbit, NotASubgroup, OrderCapExceeded
from permclosure.perm_core import (
    PermGroup,
    Permutation,
    all_subgroups,
    are_conjugate_subgroups,
    centralizer,
    format_group,
    group_generate,
    is_pronormal,
    left_regular_representation,
    orbits,
    parse_group,
    regular_cyclic_subgroups,
    support,
    symmetric_group,
    transitive_constituent,
    transitive_subgroups,
)

perms = st.integers(1, 7).flatmap(lambda n: st.permutations(range(n)).map(Permutation))


def perm_pair(n):
    return st.tuples(st.permutations(range(n)).map(Permutation), st.permutations(range(n)).map(Permutation))


# -- permutations ---------------------------------------------------------


def test_composition_is_right_to_left():
    p, q = perm(3, "(0 1)"), perm(3, "(1 2)")
    assert (p * q)(1) == p(q(1)) == 2


@given(perms)
def test_inverse_gives_identity(p):
    assert p * p.inverse() == Permutation.identity(p.degree)
    assert p.inverse() * p == Permutation.identity(p.degree)


@given(st.integers(2, 7).flatmap(perm_pair))
def test_conjugation_preserves_cycle_type(pair):
    g, h = pair
    assert (g.inverse() * h * g).cycle_type() == h.cycle_type()


def test_cycle_notation_round_trip():
    p = perm(6, "(0 3 1)(4 5)")
    assert Permutation.parse(6, str(p)) == p
    assert str(Permutation.identity(3)) == "()"


def test_rejects_non_bijection():
    with pytest.raises(ValueError):
        Permutation([0, 0, 1])


def test_degree_mismatch():
    with pytest.raises(DegreeMismatch):
        perm(3, "(0 1)") * perm(4, "(0 1)")
    with pytest.raises(DegreeMismatch):
        group_generate(4, [perm(3, "(0 1)")])


# -- group_generate ---------------------------------------------------------


def test_generate_examples():
    assert gen(3, "(0 1 2)").order == 3
    assert gen(4, "(0 1 2 3)", "(0 2)").order == 8
    assert group_generate(1, []).order == 1


def test_elements_sorted_and_closed():
    G = gen(4, "(0 1 2 3)", "(0 2)")
    els = G.elements
    assert [e.images for e in els] == sorted(e.images for e in els)
    assert Permutation.identity(4) in G
    for a, b in itertools.product(els, repeat=2):
        assert a * b in G
    assert all(a.inverse() in G for a in els)


def test_order_cap():
    with pytest.raises(OrderCapExceeded):
        group_generate(6, [perm(6, "(0 1 2 3 4 5)"), perm(6, "(0 1)")], cap=100)


@given(st.integers(1, 6).flatmap(lambda n: st.lists(st.permutations(range(n)).map(Permutation), max_size=3)
                                 .map(lambda gs: (n, gs))))
@settings(max_examples=40, deadline=None)
def test_order_divides_factorial_and_orbit_stabilizer(arg):
    n, gs = arg
    G = group_generate(n, gs)
    assert math.factorial(n) % G.order == 0
    for x in range(n):
        orb = orbits(G).cell_of(x)
        stab = sum(1 for g in G.elements if g(x) == x)
        assert len(orb) * stab == G.order


# -- orbits and constituents -------------------------------------------------


def test_orbits_examples():
    assert orbits(gen(4, "(0 1)")).cells == ((0, 1), (2,), (3,))
    assert orbits(gen(4, "(0 1 2 3)")).cells == ((0, 1, 2, 3),)
    assert orbits(gen(4, "(0 1)(2 3)", "(0 2)(1 3)")).cells == ((0, 1, 2, 3),)


def test_orbits_do_not_materialize():
    G = PermGroup(12, [perm(12, "(0 1 2 3 4 5 6 7 8 9 10 11)"), perm(12, "(0 1)")], cap=10)
    assert len(orbits(G).cells) == 1
    assert not G.is_materialized


def test_transitive_constituent_examples():
    assert transitive_constituent(gen(4, "(0 1)"), {0, 1}) == symmetric_group(2)
    C = transitive_constituent(gen(5, "(0 1)(2 3 4)"), {2, 3, 4})
    assert C == gen(3, "(0 1 2)")
    G = gen(4, "(0 1 2 3)", "(0 2)")
    assert transitive_constituent(G, range(4)) == G
    with pytest.raises(NotAnOrbit):
        transitive_constituent(gen(4, "(0 1)"), {0, 2})


# -- regular cyclic groups -----------------------------------------------------


def test_left_regular_representation():
    Z4 = left_regular_representation(4)
    assert Z4.generators[0].images == (1, 2, 3, 0)
    assert left_regular_representation(1).order == 1
    Z6 = left_regular_representation(6)
    assert Z6.order == 6 and orbits(Z6).cells == ((0, 1, 2, 3, 4, 5),)


def test_regular_cyclic_subgroups_examples():
    subs = regular_cyclic_subgroups(symmetric_group(3))
    assert subs == [gen(3, "(0 1 2)")]
    Z4 = left_regular_representation(4)
    assert regular_cyclic_subgroups(Z4) == [Z4]
    assert regular_cyclic_subgroups(gen(4, "(0 1)(2 3)", "(0 2)(1 3)")) == []


@pytest.mark.parametrize("n", [4, 5, 6])
def test_regular_cyclic_subgroups_match_definition(n):
    G = symmetric_group(n) if n < 6 else gen(6, "(0 1 2 3 4 5)", "(0 5)(1 4)(2 3)", "(0 3)")
    found = {H.key() for H in regular_cyclic_subgroups(G)}
    expected = {
        H.key() for H in all_subgroups(G)
        if H.order == n and H.is_transitive() and any(g.order() == n for g in H.elements)
    }
    assert found == expected


# -- conjugacy and pronormality --------------------------------------------------


def test_conjugate_subgroups_examples(s4):
    S3 = symmetric_group(3)
    H1, H2 = gen(3, "(0 1)"), gen(3, "(1 2)")
    g = are_conjugate_subgroups(S3, H1, H2)
    assert g is not None
    assert {(g.inverse() * h * g) for h in H1.elements} == set(H2.elements)
    assert are_conjugate_subgroups(S3, H1, H1) == Permutation.identity(3)
    assert are_conjugate_subgroups(s4, gen(4, "(0 1)"), gen(4, "(0 1)(2 3)")) is None


def test_conjugate_requires_subgroups():
    with pytest.raises(NotASubgroup):
        are_conjugate_subgroups(gen(3, "(0 1 2)"), gen(3, "(0 1)"), gen(3, "(0 1)"))


def _pronormal_by_definition(G, H):
    Hs = set(H.elements)
    for g in G.elements:
        conj = [g.inverse() * h * g for h in H.elements]
        J = group_generate(G.degree, list(H.generators) + conj)
        if not any({k.inverse() * c * k for c in conj} == Hs for k in J.elements):
            return False
    return True


def test_pronormal_examples(s4):
    S3 = symmetric_group(3)
    assert is_pronormal(S3, S3)
    res = is_pronormal(S3, gen(3, "(0 1)"))
    assert res and res.witnesses
    H = gen(4, "(0 1)(2 3)")
    assert bool(is_pronormal(s4, H)) == _pronormal_by_definition(s4, H)


@pytest.mark.parametrize("H", ["(0 1)", "(0 1)(2 3)", "(0 1 2)", "(0 1 2 3)"])
def test_pronormal_witnesses_are_valid(s4, H):
    H = gen(4, H)
    res = is_pronormal(s4, H)
    assert bool(res) == _pronormal_by_definition(s4, H)
    if res:
        Hs = set(H.elements)
        for g, k in res.witnesses.items():
            assert {k.inverse() * g.inverse() * h * g * k for h in H.elements} == Hs
    else:
        assert res.violator in s4


# -- subgroup enumeration ---------------------------------------------------------


def test_transitive_subgroups_examples(s4):
    Z4 = left_regular_representation(4)
    assert transitive_subgroups(Z4) == [Z4]
    assert sorted(H.order for H in transitive_subgroups(symmetric_group(3))) == [3, 6]
    orders = sorted(H.order for H in transitive_subgroups(s4))
    # three cyclic, one Klein, three dihedral, A4, S4
    assert orders == [4, 4, 4, 4, 8, 8, 8, 12, 24]


def _lattice_by_brute_force(G):
    """Join-closure of every cyclic subgroup, computed from generator lists."""
    seen = {}
    for g in G.elements:
        H = group_generate(G.degree, [g])
        seen[H.key()] = H
    frontier = list(seen.values())
    while frontier:
        new = []
        for A in frontier:
            for B in list(seen.values()):
                J = group_generate(G.degree, list(A.elements) + list(B.elements))
                if J.key() not in seen:
                    seen[J.key()] = J
                    new.append(J)
        frontier = new
    return seen


@pytest.mark.parametrize("n", [3, 4, 5])
def test_transitive_subgroups_against_oracle(n):
    G = symmetric_group(n)
    if n == 5:
        # keep the oracle affordable: the Frobenius group of order 20
        G = gen(5, "(0 1 2 3 4)", "(1 2 4 3)")
    oracle = {k for k, H in _lattice_by_brute_force(G).items() if H.is_transitive()}
    assert {H.key() for H in transitive_subgroups(G)} == oracle


# -- centralizer and support --------------------------------------------------------


def test_centralizer_examples(s4):
    for n in (3, 4):
        S = symmetric_group(n)
        assert centralizer(S, S).order == 1
    assert centralizer(s4, group_generate(4, [])) == s4
    Z4 = left_regular_representation(4)
    assert centralizer(s4, Z4) == Z4


def test_support_examples():
    assert support(perm(4, "(0 1)(2 3)")) == {0, 1, 2, 3}
    assert support(Permutation.identity(4)) == frozenset()
    assert support(gen(5, "(0 1)", "(1 2)")) == {0, 1, 2}


# -- text format --------------------------------------------------------------------


def test_parse_group_format():
    G = parse_group("# dihedral\ndegree 4\n(0 1 2 3)\n\n(0 2)\n")
    assert G.degree == 4 and G.order == 8
    assert parse_group(format_group(G)) == G
    assert parse_group("degree 3\n()\n").order == 1
