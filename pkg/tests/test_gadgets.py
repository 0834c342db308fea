from itertools import combinations, product

import pytest

from syncplanar.automata import extended_delta, from_table, gen_cerny, gen_random, render
from syncplanar.errors import SubsetNotSynchronizable
from syncplanar.gadgets import (
    BLOCK,
    build_clock,
    build_instance,
    decide_subset_sync_via_planar,
    lift_f,
    minimal_strings,
    planarize,
    render_map,
)
from syncplanar.planar import compute_drawing, convex_drawing, is_planar
from syncplanar.sync import subset_min_word

from oracles import f_image


def direct(m, states, t):
    try:
        return subset_min_word(m, states).length <= t
    except SubsetNotSynchronizable:
        return False


# a-arc 0->2 crosses b-arc 1->3 in convex position; everything else loops
MIXED = from_table([[2, 0], [1, 3], [2, 2], [3, 3]])
# a-arc 0->2 crosses a-arc 1->3
SAME = from_table([[2, 0], [3, 1], [2, 2], [3, 3]])


def test_lift_f_examples():
    assert lift_f((), 3) == ()
    a0, a1, b0, b1 = range(4)
    block_a = (a0, a1, a1, a0)
    block_b = (b0, b1, b1, b0)
    assert lift_f((0, 1), 1) == block_a * 2 + block_b * 2
    assert lift_f((0,), 2) == block_a * 4
    assert len(lift_f((0, 1, 1), 3)) == 8 * 3 * 3
    assert lift_f((1, 0), 2) == f_image((1, 0), 2)


def test_planarize_planar_input_is_a_subdivision():
    m = gen_cerny(3)
    n_net, pmap = planarize(m, compute_drawing(m))
    assert pmap.identified == []
    assert n_net.alphabet == ("a0", "a1", "b0", "b1")
    inner = set()
    for (q, c), path in pmap.paths.items():
        assert len(path) == 8 * m.n + 1
        assert path[0] == pmap.rho[q] and path[-1] == pmap.rho[m.table[q][c]]
        for i, (u, v) in enumerate(zip(path, path[1:])):
            assert n_net.table[u][2 * c + BLOCK[i % 4]] == v
        assert not inner & set(path[1:-1])
        inner |= set(path[1:-1])
    assert is_planar(n_net)


def test_planarize_cerny2_alphabet():
    n_net, _ = planarize(gen_cerny(2))
    assert n_net.sigma == 4


def test_mixed_letter_crossing_structure():
    d = convex_drawing(MIXED)
    assert len(d.crossings) == 1
    n_net, pmap = planarize(MIXED, d)
    (_, x, y), = pmap.identified
    a1, b1 = 1, 3
    assert n_net.table[x][a1] == y and n_net.table[x][b1] == y
    e, f = pmap.paths[0, 0], pmap.paths[1, 1]
    assert set(e) & set(f) == {x, y}
    assert e.index(x) + 1 == e.index(y) and f.index(x) + 1 == f.index(y)
    assert is_planar(n_net)


def test_same_letter_crossing_merges_parallel_arcs():
    n_net, pmap = planarize(SAME, convex_drawing(SAME))
    (_, x, y), = pmap.identified
    assert n_net.table[x][1] == y
    assert set(pmap.paths[0, 0]) & set(pmap.paths[1, 0]) == {x, y}
    assert is_planar(n_net)


@pytest.mark.parametrize("m", [MIXED, SAME, gen_cerny(4)] + [gen_random(n, 2, s) for n in (4, 5, 6) for s in range(6)])
def test_traversal_is_faithful(m):
    """Reading f(x) from rho(q) lands on rho(delta(q, x)), with or without crossings."""
    d = convex_drawing(m)
    n_net, pmap = planarize(m, d)
    assert is_planar(n_net)
    for q in range(m.n):
        for word in product(range(2), repeat=2):
            end = extended_delta(n_net, lift_f(word, m.n), pmap.rho[q])
            assert end == pmap.rho[extended_delta(m, word, q)]


def test_planarize_rejects_non_binary():
    with pytest.raises(ValueError):
        planarize(from_table([[0, 0, 0]]))


@pytest.mark.parametrize("m,n", [(1, 1), (1, 2), (2, 1), (2, 2), (3, 1)])
def test_clock_contract(m, n):
    clock = build_clock(m, n)
    length, strings = minimal_strings(clock.dfa, clock.entry, clock.exit)
    assert length == 8 * m * n == clock.period
    assert strings == {f_image(w, n) for w in product(range(2), repeat=m)}


def test_clock_counts():
    clock = build_clock(1, 1)
    assert len(minimal_strings(clock.dfa, clock.entry, clock.exit)[1]) == 2
    clock = build_clock(2, 2)
    length, strings = minimal_strings(clock.dfa, clock.entry, clock.exit)
    assert (length, len(strings)) == (32, 4)


def test_segment_identification_breaks_the_contract():
    clock = build_clock(1, 1, variant="segment")
    _, strings = minimal_strings(clock.dfa, clock.entry, clock.exit)
    assert strings != {f_image(w, 1) for w in product(range(2), repeat=1)}


def test_clock_rejects_bad_arguments():
    with pytest.raises(ValueError):
        build_clock(0, 1)
    with pytest.raises(ValueError):
        build_clock(1, 1, variant="other")


def test_instance_shape():
    c2 = gen_cerny(2)
    inst = build_instance(c2, None, {0, 1}, 3, 0)
    assert inst.budget == 48
    assert len(inst.states) == 3
    for steps in (1, 2):
        for p in range(2):
            assert is_planar(build_instance(c2, None, {0, 1}, steps, p).dfa)


def test_instance_leaves_network_untouched():
    m = gen_cerny(3)
    planarized = planarize(m)
    before = render(planarized[0])
    for steps in range(3):
        build_instance(m, None, {0, 1}, steps, 1, planarized=planarized)
    assert render(planarized[0]) == before
    assert render(planarize(m)[0]) == before
    assert render_map(planarize(m)[1], m) == render_map(planarized[1], m)


def test_decide_examples():
    const = from_table([[0, 1], [0, 0]])
    assert decide_subset_sync_via_planar(const, {0, 1}, 1)
    assert not decide_subset_sync_via_planar(gen_cerny(2), {0, 1}, 0)
    c3 = gen_cerny(3)
    assert not decide_subset_sync_via_planar(c3, {1, 2}, 2)
    assert decide_subset_sync_via_planar(c3, {1, 2}, 3)


def test_equivalence_small():
    for seed in range(20):
        m = gen_random(3, 2, seed)
        for states in combinations(range(3), 2):
            for steps in range(4):
                assert decide_subset_sync_via_planar(m, states, steps) == direct(m, states, steps)


def test_equivalence_with_crossings():
    for m in (MIXED, SAME, gen_random(4, 2, 4)):
        d = convex_drawing(m)
        assert d.crossings
        for states in combinations(range(4), 2):
            for steps in range(3):
                assert decide_subset_sync_via_planar(m, states, steps, d) == direct(m, states, steps)
