import math
from itertools import combinations

import pytest

from syncplanar.automata import from_table, gen_cerny, gen_random, parse_word, render_word
from syncplanar.errors import ExactCapExceeded, NotSynchronizing, SubsetNotSynchronizable
from syncplanar.sync import (
    EXACT_STATE_CAP,
    build_kpower,
    exact_reset_word,
    greedy_reset_word,
    hardest_subset,
    is_reset_word,
    is_synchronizing,
    kmerge_approx,
    pair_distances,
    subset_min_word,
    subset_sync_within,
    synchronizes,
)

from oracles import least_sync_word, min_sync_length, synchronizing

ONE = from_table([[0]])
LOOPS = from_table([[0], [1]])


def word(m, text):
    return parse_word(m, text)


def test_is_reset_word_examples():
    c3 = gen_cerny(3)
    assert is_reset_word(ONE, ())
    assert is_reset_word(c3, word(c3, "baab"))
    assert not is_reset_word(c3, word(c3, "ba"))


def test_is_synchronizing_examples():
    assert all(is_synchronizing(gen_cerny(n)) for n in range(2, 9))
    assert not is_synchronizing(LOOPS)
    assert is_synchronizing(ONE)


def test_exact_examples():
    assert exact_reset_word(ONE).word == ()
    c3 = gen_cerny(3)
    res = exact_reset_word(c3)
    assert render_word(c3, res.word) == "baab" and res.method == "exact"
    assert exact_reset_word(gen_cerny(4)).length == 9


def test_exact_errors():
    with pytest.raises(NotSynchronizing):
        exact_reset_word(LOOPS)
    big = gen_cerny(EXACT_STATE_CAP + 1)
    with pytest.raises(ExactCapExceeded):
        exact_reset_word(big)


def test_exact_matches_enumeration_n3():
    """Every synchronizing 2-letter 3-state automaton: length and lexicographic word."""
    for seed in range(150):
        m = gen_random(3, 2, seed)
        if not synchronizing(m.table, 2):
            continue
        res = exact_reset_word(m)
        assert res.word == least_sync_word(m.table, 2, range(3), res.length)


def test_greedy_examples():
    const = from_table([[0, 1], [0, 0], [0, 2]])
    assert greedy_reset_word(const).word == (0,)
    assert greedy_reset_word(ONE).word == ()
    length = greedy_reset_word(gen_cerny(3)).length
    assert 4 <= length <= 18
    with pytest.raises(NotSynchronizing):
        greedy_reset_word(LOOPS)


def test_kpower_examples():
    c3 = gen_cerny(3)
    kp = build_kpower(c3, 2)
    assert len(kp.nodes) == 6
    assert kp.arcs[frozenset({1, 2}), 0] == frozenset({2, 0})
    assert kp.goal == {frozenset({q}) for q in range(3)}
    k1 = build_kpower(c3, 1)
    assert all(k1.arcs[frozenset({q}), c] == frozenset({c3.table[q][c]}) for q in range(3) for c in range(2))


def test_subset_examples():
    c3 = gen_cerny(3)
    assert subset_min_word(c3, {2}).word == ()
    assert render_word(c3, subset_min_word(c3, {0, 1}).word) == "b"
    assert render_word(c3, subset_min_word(c3, {1, 2}).word) == "aab"
    with pytest.raises(SubsetNotSynchronizable):
        subset_min_word(LOOPS, {0, 1})


def test_subset_budget_and_pruning_agree():
    for seed in range(40):
        m = gen_random(5, 2, seed)
        for states in combinations(range(5), 3):
            want = min_sync_length(m.table, 2, states, 6)
            for t in range(5):
                expect = want is not None and want <= t
                assert subset_sync_within(m, states, t) == expect
                assert subset_sync_within(m, states, t, prune=False) == expect


def test_pair_distances_limit():
    c4 = gen_cerny(4)
    full = pair_distances(c4)
    capped = pair_distances(c4, limit=2)
    for p, q in combinations(range(4), 2):
        d = int(full[p, q])
        assert d == min_sync_length(c4.table, 2, (p, q), 9)
        assert (int(capped[p, q]) == d) == (d <= 2)


def test_hardest_examples():
    c3 = gen_cerny(3)
    subset, value = hardest_subset(c3, 1)
    assert len(subset) == 1 and value == 0
    assert hardest_subset(c3, 2) == (frozenset({1, 2}), 3)
    assert hardest_subset(LOOPS, 2) == (frozenset({0, 1}), math.inf)


def test_hardest_matches_explicit_max():
    for seed in range(12):
        m = gen_random(5, 2, seed)
        for k in (2, 3):
            subset, value = hardest_subset(m, k)
            lengths = {}
            for size in range(1, k + 1):
                for s in combinations(range(5), size):
                    try:
                        lengths[s] = subset_min_word(m, s).length
                    except SubsetNotSynchronizable:
                        lengths[s] = math.inf
            assert value == max(lengths.values())
            assert lengths[tuple(sorted(subset))] == value


def test_kmerge_examples():
    c3 = gen_cerny(3)
    assert kmerge_approx(c3, {1}, 2).word == ()
    res = kmerge_approx(c3, range(3), 2)
    assert res.length <= 8 and is_reset_word(c3, res.word)
    assert kmerge_approx(c3, {1, 2}, 3).length == 3
    with pytest.raises(ValueError):
        kmerge_approx(c3, {1, 2}, 1)
    with pytest.raises(SubsetNotSynchronizable):
        kmerge_approx(LOOPS, {0, 1}, 2)


def test_kmerge_ratio():
    for seed in range(30):
        m = gen_random(5, 2, seed)
        states = range(5)
        try:
            exact = subset_min_word(m, states).length
        except SubsetNotSynchronizable:
            continue
        for k in (2, 3):
            res = kmerge_approx(m, states, k)
            assert synchronizes(m, res.word, states)
            assert res.length <= math.ceil(4 / (k - 1)) * exact
