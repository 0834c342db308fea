from itertools import combinations

import networkx as nx
import pytest

from syncplanar.automata import from_table, gen_cerny, gen_random
from syncplanar.errors import DrawingInvalid, ParseError
from syncplanar.planar import (
    Drawing,
    TransitionDigraph,
    check_drawing,
    compute_drawing,
    convex_drawing,
    is_planar,
    parse_drawing,
    planarity_test,
    render_drawing,
)

from oracles import brute_planar, is_planar_rotation


def k5_automaton():
    # letter c sends q to q+c+1 mod 5: together the four letters realize K5
    return from_table([[(q + c + 1) % 5 for c in range(4)] for q in range(5)])


def test_examples():
    for n in range(2, 9):
        ok, rotation = planarity_test(gen_cerny(n))
        assert ok and is_planar_rotation(rotation)
    k5 = k5_automaton()
    g = TransitionDigraph.of(k5).simple_graph()
    assert g.number_of_edges() == 10 > 3 * 5 - 6
    assert planarity_test(k5) == (False, None)
    assert is_planar(from_table([[0, 0, 0]]))


def test_loops_and_parallel_arcs_ignored():
    m = from_table([[0, 1, 1], [0, 1, 0]])
    g = TransitionDigraph.of(m).simple_graph()
    assert sorted(g.edges) == [(0, 1)]
    assert len(TransitionDigraph.of(m).arcs) == 6


def test_agrees_with_brute_force_on_small_graphs():
    for g in nx.graph_atlas_g()[1:]:
        if g.number_of_nodes() > 6:
            break
        ok, rotation = planarity_test(g)
        assert ok == brute_planar(g.nodes, g.edges)
        if ok:
            assert is_planar_rotation(rotation)


def test_agrees_with_brute_force_on_labeled_five_vertex_graphs():
    pairs = list(combinations(range(5), 2))
    for mask in range(1 << len(pairs)):
        edges = [pairs[i] for i in range(len(pairs)) if mask >> i & 1]
        g = nx.Graph()
        g.add_nodes_from(range(5))
        g.add_edges_from(edges)
        assert is_planar(g) == brute_planar(range(5), edges)


def test_planar_input_gets_empty_crossing_table():
    d = compute_drawing(gen_cerny(6))
    assert d.crossings == {} and d.rotation is not None


def test_convex_interleaved_chords_cross_once():
    # arcs 0->2 and 1->3 interleave in convex position; 2->2 and 3->3 are loops
    m = from_table([[2], [3], [2], [3]])
    d = convex_drawing(m)
    assert len(d.crossings) == 1
    (a, pa, b, pb), = d.crossings.values()
    assert {a, b} == {(0, 0), (1, 0)} and pa == pb == 0
    assert d.sequence((0, 0)) == [(0, (1, 0))]
    assert d.sequence((1, 0)) == [(0, (0, 0))]


def test_parallel_copies_cross_separately():
    # both letters of 0 go to 2, both letters of 1 go to 3
    m = from_table([[2, 2], [3, 3], [2, 2], [3, 3]])
    d = convex_drawing(m)
    check_drawing(d, m)
    assert len(d.crossings) == 4
    assert d.crossing_counts()[(0, 0)] == 2


@pytest.mark.parametrize("n", [5, 6, 7, 8])
def test_random_binary_drawings_are_good(n):
    for seed in range(10):
        m = gen_random(n, 2, seed)
        d = convex_drawing(m, seed)
        check_drawing(d, m, per_arc_limit=2 * n)
        if is_planar(m):
            assert compute_drawing(m).crossings == {}


def test_k5_drawing():
    m = k5_automaton()
    d = compute_drawing(m)
    check_drawing(d, m)
    assert d.crossings


def test_check_drawing_rejects():
    arcs = ((0, 0), (1, 0), (2, 0), (3, 0))
    m = from_table([[2], [3], [0], [1]])
    with pytest.raises(DrawingInvalid):
        check_drawing(Drawing(arcs, {0: ((0, 0), 0, (0, 0), 1)}))
    with pytest.raises(DrawingInvalid):
        check_drawing(Drawing(arcs, {0: ((0, 0), 0, (1, 0), 0), 1: ((1, 0), 1, (0, 0), 1)}))
    with pytest.raises(DrawingInvalid):
        check_drawing(Drawing(arcs, {0: ((0, 0), 1, (1, 0), 0)}))
    # arcs 0->2 and 2->0 share endpoints, so they may not cross
    with pytest.raises(DrawingInvalid):
        check_drawing(Drawing(arcs, {0: ((0, 0), 0, (2, 0), 0)}), m)
    with pytest.raises(DrawingInvalid):
        check_drawing(Drawing(arcs[:3], {}), m)


def test_drawing_roundtrip():
    m = gen_random(6, 2, 4)
    d = convex_drawing(m)
    text = render_drawing(d, m)
    back = parse_drawing(text, m)
    assert back.crossings == d.crossings
    assert render_drawing(back, m) == text


def test_drawing_parse_errors():
    m = gen_cerny(3)
    with pytest.raises(ParseError):
        parse_drawing("arc 0:a\n", m)
    with pytest.raises(ParseError):
        parse_drawing("drw v1\narc 9:a\n", m)
    with pytest.raises(ParseError):
        parse_drawing("drw v1\nbogus\n", m)
