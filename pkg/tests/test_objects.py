from __future__ import annotations

import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import gen, perm
from permclosure.blocks import BlockSystem
from permclosure.closures import closedness, decompose_wreath_symmetric, is_52_closed
from permclosure.errors import (
    IdentityInConnectionSet,
    IntersectsSubgroup,
    NonUnitElement,
    NotDoubleCosetClosed,
    ParseError,
)
from permclosure.objects import (
    ColoredTupleSystem,
    Digraph,
    IncidenceStructure,
    SetSystem,
    automorphism_group,
    automorphisms_brute_force,
    cayley_digraph,
    classify_incidence,
    cyclic_configuration,
    digraph_wreath,
    double_coset_digraph,
    format_object,
    girth_and_bipartite_search,
    is_automorphism,
    is_m_intersecting,
    isomorphism,
    parse_object,
    quotient_digraph,
    relabel,
    set_system_of,
    twin_partition,
    unit_circulant,
)
from permclosure.perm_core import (
    Permutation,
    group_generate,
    left_regular_representation,
    regular_cyclic_subgroups,
    symmetric_group,
)
from permclosure.perm_core import _units

K2 = Digraph.from_edges(2, [(0, 1)])
K2bar = Digraph.empty(2)
C4 = cayley_digraph(4, {1, 3})
FANO = cyclic_configuration(7, [0, 1, 3])


def full_aut(X):
    A = automorphism_group(X)
    return group_generate(X.n, A.generators)


def petersen():
    outer = [(i, (i + 1) % 5) for i in range(5)]
    inner = [(5 + i, 5 + (i + 2) % 5) for i in range(5)]
    spokes = [(i, i + 5) for i in range(5)]
    return Digraph.from_edges(10, outer + inner + spokes)


def digraphs(max_n=6):
    return st.integers(2, max_n).flatmap(
        lambda n: st.sets(st.tuples(st.integers(0, n - 1), st.integers(0, n - 1)).filter(lambda a: a[0] != a[1]))
        .map(lambda arcs: Digraph(n, frozenset(arcs))))


def tuple_systems(max_n=6):
    def build(n):
        tup = st.tuples(st.lists(st.integers(0, n - 1), min_size=1, max_size=min(3, n - 1), unique=True),
                        st.sampled_from("ab"))
        return st.lists(tup, max_size=6).map(lambda ts: ColoredTupleSystem(n, tuple((tuple(p), c) for p, c in ts)))
    return st.integers(3, max_n).flatmap(build)


# -- constructions --------------------------------------------------------------------


def test_cayley_digraph_examples():
    assert cayley_digraph(3, {1}).arcs == {(0, 1), (1, 2), (2, 0)}
    assert C4 == Digraph.from_edges(4, [(0, 1), (1, 2), (2, 3), (3, 0)])
    assert cayley_digraph(5, set()) == Digraph.empty(5)
    with pytest.raises(IdentityInConnectionSet):
        cayley_digraph(4, {0, 1})


def test_cayley_digraph_of_permutation_group():
    S3 = symmetric_group(3)
    D = cayley_digraph(S3, [perm(3, "(0 1)"), perm(3, "(1 2)")])
    # two involutions alternate around a hexagon
    assert D.n == 6 and len(D.arcs) == 12
    assert isomorphism(D, cayley_digraph(6, {1, 5})) is not None
    assert full_aut(D).order == 12


def test_unit_circulant_examples():
    assert unit_circulant(4, {1, 3}) == C4
    K5 = unit_circulant(5, {1, 2, 3, 4})
    assert len(K5.arcs) == 20
    with pytest.raises(NonUnitElement):
        unit_circulant(6, {2})


def test_double_coset_digraph_examples():
    S3 = symmetric_group(3)
    trivial = group_generate(3, [])
    S = [perm(3, "(0 1 2)")]
    D = double_coset_digraph(S3, trivial, S)
    assert isomorphism(D, cayley_digraph(S3, S)) is not None
    H = gen(3, "(0 1)")
    HsH = {h * perm(3, "(0 1 2)") * k for h in H.elements for k in H.elements}
    D = double_coset_digraph(S3, H, sorted(HsH, key=lambda p: p.images))
    assert D.n == 3
    assert double_coset_digraph(S3, H, []) == Digraph.empty(3)
    with pytest.raises(NotDoubleCosetClosed):
        double_coset_digraph(S3, H, [perm(3, "(0 1 2)")])
    with pytest.raises(IntersectsSubgroup):
        double_coset_digraph(S3, H, [perm(3, "(0 1)")])


def test_digraph_wreath_examples():
    W = digraph_wreath(K2, K2bar)
    assert W == Digraph.from_edges(4, [(0, 2), (0, 3), (1, 2), (1, 3)])
    assert isomorphism(W, C4) is not None
    single = Digraph.empty(1)
    assert digraph_wreath(C4, single) == C4
    assert digraph_wreath(K2bar, K2) == Digraph.from_edges(4, [(0, 1), (2, 3)])


def test_quotient_digraph_examples():
    Q = quotient_digraph(C4, BlockSystem(4, [(0, 2), (1, 3)]))
    assert Q == K2
    assert quotient_digraph(C4, BlockSystem.singletons(4)) == C4
    assert quotient_digraph(Digraph.empty(4), BlockSystem(4, [(0, 1), (2, 3)])) == K2bar


def test_twin_partition_examples():
    tp = twin_partition(C4)
    assert tp.cells == ((0, 2), (1, 3)) and tp.reducible
    tp = twin_partition(cayley_digraph(5, {1}))
    assert not tp.reducible and len(tp.cells) == 5
    tp = twin_partition(Digraph.empty(4))
    assert tp.cells == ((0, 1, 2, 3),)


def test_girth_and_bipartite_examples():
    assert girth_and_bipartite_search(petersen(), 2) == (5, False)
    assert girth_and_bipartite_search(C4, 2) == (4, True)
    assert girth_and_bipartite_search(cayley_digraph(3, {1}), 2) == (3, False)
    g, _ = girth_and_bipartite_search(Digraph.from_edges(4, [(0, 1), (1, 2)]), 2)
    assert g == float("inf")


def test_set_systems():
    S = set_system_of(C4)
    assert S.sorted_sets() == [(0, 1), (0, 3), (1, 2), (2, 3)]
    assert is_m_intersecting(S, 1)
    T = ColoredTupleSystem(4, (((0, 1, 2), "a"),))
    assert set_system_of(T).sorted_sets() == [(0, 1, 2)]
    assert all(is_m_intersecting(set_system_of(T), m) for m in range(3))
    assert not is_m_intersecting(SetSystem(4, frozenset([frozenset({0, 1, 2}), frozenset({0, 1, 3})])), 1)


@given(digraphs())
def test_arc_sets_are_1_intersecting(D):
    assert is_m_intersecting(set_system_of(D), 1)


def test_classify_incidence_examples():
    r = classify_incidence(FANO)
    assert r.configuration == (3, 3) and r.partial_sg and r.connected and r.kind == "both"
    r = classify_incidence(IncidenceStructure(3, (frozenset({0, 1}),)))
    assert r.kind == "neither"
    two = IncidenceStructure(6, (frozenset({0, 1, 2}), frozenset({3, 4, 5})))
    r = classify_incidence(two)
    assert r.partial_sg and not r.connected and len(r.components) == 2


# -- automorphisms and isomorphisms ----------------------------------------------------------


def test_automorphism_examples():
    for n in range(2, 9):
        A = full_aut(cayley_digraph(n, {1}))
        assert A == left_regular_representation(n)
    for n in range(1, 7):
        assert full_aut(Digraph.empty(n)) == symmetric_group(n)
    assert automorphism_group(FANO).order == 168
    assert full_aut(FANO).order == 168
    assert automorphism_group(petersen()).order == 120


def test_fano_against_brute_force():
    S7 = symmetric_group(7)
    lines = set(FANO.lines)
    count = sum(1 for g in S7.elements if {frozenset(g(p) for p in L) for L in lines} == lines)
    assert count == 168


@given(digraphs())
@settings(max_examples=60, deadline=None)
def test_automorphisms_match_brute_force(D):
    A = full_aut(D)
    assert A == automorphisms_brute_force(D)
    assert automorphism_group(D).order == A.order


@given(tuple_systems())
@settings(max_examples=40, deadline=None)
def test_tuple_automorphisms_match_brute_force(T):
    assert full_aut(T) == automorphisms_brute_force(T)


@given(digraphs(), st.data())
@settings(max_examples=40, deadline=None)
def test_isomorphism_finds_relabelings(D, data):
    g = Permutation(data.draw(st.permutations(range(D.n))))
    E = relabel(D, g)
    h = isomorphism(D, E)
    assert h is not None and relabel(D, h) == E


def test_isomorphism_examples():
    D = cayley_digraph(4, {1})
    assert isomorphism(D, D) == Permutation.identity(4)
    E = relabel(D, perm(4, "(0 1)"))
    assert isomorphism(D, E) is not None
    h = isomorphism(cayley_digraph(5, {1}), cayley_digraph(5, {2}))
    assert h is not None
    assert isomorphism(cayley_digraph(5, {1}), cayley_digraph(5, {1, 2})) is None


def test_tuple_isomorphism_relabels_colours():
    T = ColoredTupleSystem(4, (((0, 1), "a"), ((2, 3), "b")))
    U = ColoredTupleSystem(4, (((0, 1), "b"), ((2, 3), "a")))
    assert isomorphism(T, U) is not None
    # automorphisms keep each colour
    assert not is_automorphism(T, perm(4, "(0 2)(1 3)"))


# -- properties of the objects --------------------------------------------------------------


@given(tuple_systems())
@settings(max_examples=40, deadline=None)
def test_aut_of_tuples_inside_aut_of_sets(T):
    A, C = full_aut(T), full_aut(set_system_of(T))
    assert A.is_subgroup_of(C)


def circulant_tuple_systems(n):
    """Colored tuple systems made of the translates of one base tuple and,
    optionally, the translates of a differently coloured pair."""
    bases = [(0,) + t for k in (1, 2) for t in itertools.permutations(range(1, n), k)]
    out = []
    for base in bases:
        for extra in [None] + list(range(1, n)):
            items = [(tuple((b + i) % n for b in base), "a") for i in range(n)]
            if extra is not None:
                items += [((i, (i + extra) % n), "b") for i in range(n)]
            out.append(ColoredTupleSystem(n, tuple(items)))
    return out


@pytest.mark.parametrize("n", range(4, 9))
def test_1_intersecting_transitive_tuple_systems_are_52_closed(n):
    checked = 0
    for T in circulant_tuple_systems(n):
        if not is_m_intersecting(set_system_of(T), 1):
            continue
        A = full_aut(T)
        assert A.is_transitive()
        assert is_52_closed(A), T
        checked += 1
    assert checked > 0


def test_connected_sg_designs_have_98_closed_aut():
    for n in (7, 8):
        for base in itertools.combinations(range(1, n), 2):
            I = cyclic_configuration(n, (0,) + base)
            r = classify_incidence(I)
            if r.partial_sg and r.connected:
                assert closedness(full_aut(I), "9/8"), (n, base)


@pytest.mark.parametrize("n", range(2, 9))
def test_unit_circulants_are_32_closed_with_structure(n):
    units = _units(n)
    for k in range(len(units) + 1):
        for S in itertools.combinations(units, k):
            D = unit_circulant(n, S)
            A = full_aut(D)
            assert closedness(A, "3/2")
            if closedness(A, "9/8"):
                continue
            tp = twin_partition(D)
            d = decompose_wreath_symmetric(A)
            assert tp.reducible and d is not None and d.m >= 2
            assert d.quotient.degree == 1 or closedness(d.quotient, "9/8")


def test_sparse_connected_circulants_have_98_closed_aut():
    for n in range(4, 9):
        p = min(q for q in range(2, n + 1) if n % q == 0)
        for k in range(1, 4):
            for S in itertools.combinations(range(1, n), k):
                D = cayley_digraph(n, S)
                if not D.is_weakly_connected():
                    continue
                if girth_and_bipartite_search(D, p)[1]:
                    continue
                assert closedness(full_aut(D), "9/8"), (n, S)


@given(digraphs(6))
@settings(max_examples=60, deadline=None)
def test_sabidussi_regular_cyclic_iff_circulant(D):
    n = D.n
    A = full_aut(D)
    has_regular = bool(regular_cyclic_subgroups(A)) if A.is_transitive() else False
    circulant = any(isomorphism(D, cayley_digraph(n, S)) is not None
                    for k in range(n) for S in itertools.combinations(range(1, n), k)
                    if len(S) * n == len(D.arcs))
    assert has_regular == circulant


@given(digraphs(7))
@settings(max_examples=60, deadline=None)
def test_twin_classes_are_blocks(D):
    A = full_aut(D)
    tp = twin_partition(D)
    if A.is_transitive():
        assert BlockSystem(D.n, tp.cells).is_block_system_of(A)


# -- formats -------------------------------------------------------------------------------


def test_object_formats_round_trip():
    T = ColoredTupleSystem(5, (((0, 1, 2), "red"), ((3, 4), "blue")))
    for X in (C4, FANO, T):
        assert parse_object(format_object(X)) == X
    assert parse_object("3\n0 1\n# comment\n1 2\n") == Digraph(3, frozenset({(0, 1), (1, 2)}))
    with pytest.raises(ParseError):
        parse_object("3\n0 0\n")
    with pytest.raises(ParseError):
        parse_object("")
