"""Reset words: exact (subset BFS), greedy pair merging, k-power subset search.

All searches expand letters in alphabet order and keep the first visit of a
node, so among shortest words the lexicographically least one is returned.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from itertools import combinations
from math import comb, inf

import numpy as np

from .automata import Dfa, image
from .errors import ExactCapExceeded, NotSynchronizing, SubsetNotSynchronizable

EXACT_STATE_CAP = 24
SUBSET_NODE_CAP = 10**8

UNMERGEABLE = np.iinfo(np.int32).max


@dataclass(frozen=True)
class ResetResult:
    word: tuple
    method: str

    @property
    def length(self) -> int:
        return len(self.word)


def is_reset_word(m: Dfa, word) -> bool:
    return len(image(m, word, range(m.n))) == 1


def synchronizes(m: Dfa, word, states) -> bool:
    return len(image(m, word, states)) == 1


# --- pair automaton ----------------------------------------------------------

def pair_distances(m: Dfa, limit: int | None = None) -> np.ndarray:
    """Shortest merge length of every pair of states.

    Entry ``[p, q]`` is the length of a shortest word sending ``p`` and ``q`` to
    the same state, or ``UNMERGEABLE``.  Backward BFS from the diagonal of the
    pair automaton.  With ``limit`` the search stops at that depth, so
    distances above ``limit`` read as unmergeable.
    """
    n = m.n
    pre = [[[] for _ in range(n)] for _ in range(m.sigma)]
    for q, row in enumerate(m.table):
        for c, t in enumerate(row):
            pre[c][t].append(q)
    dist = [[UNMERGEABLE] * n for _ in range(n)]
    for q in range(n):
        dist[q][q] = 0
    frontier = [(q, q) for q in range(n)]
    depth = 0
    while frontier and (limit is None or depth < limit):
        depth += 1
        nxt = []
        for p, q in frontier:
            for c in range(m.sigma):
                for p2 in pre[c][p]:
                    for q2 in pre[c][q]:
                        if dist[p2][q2] == UNMERGEABLE:
                            dist[p2][q2] = dist[q2][p2] = depth
                            nxt.append((p2, q2))
        frontier = nxt
    return np.array(dist, dtype=np.int64).reshape(n, n)


def is_synchronizing(m: Dfa) -> bool:
    """Every pair of states can be merged."""
    if m.n == 1:
        return True
    return not bool((pair_distances(m) == UNMERGEABLE).any())


def _pair_word(m: Dfa, dist: np.ndarray, p: int, q: int) -> tuple:
    word = []
    table = m.table
    while p != q:
        d = dist[p, q]
        for c in range(m.sigma):
            p2, q2 = table[p][c], table[q][c]
            if dist[p2, q2] == d - 1:
                word.append(c)
                p, q = p2, q2
                break
    return tuple(word)


# --- full reset --------------------------------------------------------------

def _mask_images(m: Dfa):
    """Per letter, per 8-bit chunk, the image mask of every byte value."""
    chunks = (m.n + 7) // 8
    tables = []
    for c in range(m.sigma):
        per_chunk = []
        for k in range(chunks):
            row = [0] * 256
            for byte in range(1, 256):
                low = byte & -byte
                q = 8 * k + low.bit_length() - 1
                img = 0 if q >= m.n else 1 << m.table[q][c]
                row[byte] = row[byte ^ low] | img
            per_chunk.append(row)
        tables.append(per_chunk)
    return tables


def exact_reset_word(m: Dfa, cap: int | None = EXACT_STATE_CAP) -> ResetResult:
    """Shortest (then lexicographically least) reset word via BFS over state subsets.

    ``cap`` bounds the state count; pass ``None`` for automata known to reach
    few subsets (the search only visits reachable ones).
    """
    if cap is not None and m.n > cap:
        raise ExactCapExceeded(f"exact solver refuses n={m.n} > {cap}")
    if not is_synchronizing(m):
        raise NotSynchronizing("automaton has an unmergeable pair")
    full = (1 << m.n) - 1
    if m.n == 1:
        return ResetResult((), "exact")
    tables = _mask_images(m)
    chunks = len(tables[0])
    parent = {full: None}
    queue = deque([full])
    while queue:
        node = queue.popleft()
        for c, per_chunk in enumerate(tables):
            img = 0
            x = node
            for k in range(chunks):
                byte = x & 0xFF
                if byte:
                    img |= per_chunk[k][byte]
                x >>= 8
            if img in parent:
                continue
            parent[img] = (node, c)
            if img & (img - 1) == 0:
                return ResetResult(_unwind(parent, img), "exact")
            queue.append(img)
    raise NotSynchronizing("no singleton reachable")  # unreachable when pairs merge


def _unwind(parent, node) -> tuple:
    word = []
    while parent[node] is not None:
        node, c = parent[node]
        word.append(c)
    return tuple(reversed(word))


def greedy_reset_word(m: Dfa) -> ResetResult:
    """Repeatedly apply a shortest word merging some pair of the current set."""
    dist = pair_distances(m)
    if m.n > 1 and (dist == UNMERGEABLE).any():
        raise NotSynchronizing("automaton has an unmergeable pair")
    current = set(range(m.n))
    word = []
    while len(current) > 1:
        _, p, q = min((int(dist[p, q]), p, q) for p, q in combinations(sorted(current), 2))
        piece = _pair_word(m, dist, p, q)
        word.extend(piece)
        current = set(image(m, piece, current))
    return ResetResult(tuple(word), "greedy")


# --- k-power automaton -------------------------------------------------------

@dataclass(frozen=True)
class KPowerAutomaton:
    base: Dfa
    k: int
    nodes: tuple  # frozensets, sorted by (size, members)
    arcs: dict  # (node, letter) -> node

    @property
    def goal(self) -> frozenset:
        return frozenset(a for a in self.nodes if len(a) == 1)


def build_kpower(m: Dfa, k: int) -> KPowerAutomaton:
    if not 1 <= k <= m.n:
        raise ValueError(f"k must lie in 1..{m.n}")
    nodes = tuple(frozenset(c) for size in range(1, k + 1) for c in combinations(range(m.n), size))
    arcs = {}
    for node in nodes:
        for c in range(m.sigma):
            arcs[node, c] = frozenset(m.table[q][c] for q in node)
    return KPowerAutomaton(m, k, nodes, arcs)


def _check_subset_cap(m: Dfa, size: int):
    total = sum(comb(m.n, i) for i in range(1, size + 1))
    if total > SUBSET_NODE_CAP:
        raise ExactCapExceeded(f"k-power automaton would have {total} nodes")


class _SearchTooLarge(Exception):
    pass


def _subset_search(m: Dfa, start: tuple, budget, lower_bound, max_nodes=None):
    table = m.table
    sigma = m.sigma
    parent = {start: None}
    frontier = [start]
    depth = 0
    while frontier:
        if budget is not None and depth >= budget:
            break
        depth += 1
        nxt = []
        for node in frontier:
            for c in range(sigma):
                img = tuple(sorted({table[q][c] for q in node}))
                if img in parent:
                    continue
                if lower_bound is not None and budget is not None and lower_bound(img) > budget - depth:
                    continue
                parent[img] = (node, c)
                if len(img) == 1:
                    return _unwind(parent, img)
                nxt.append(img)
        if max_nodes is not None and len(parent) > max_nodes:
            raise _SearchTooLarge
        frontier = nxt
    return None


def _start_tuple(m: Dfa, states) -> tuple:
    start = tuple(sorted(set(states)))
    if not start:
        raise ValueError("state set must be nonempty")
    if any(not 0 <= q < m.n for q in start):
        raise ValueError(f"state out of range in {start}")
    _check_subset_cap(m, len(start))
    return start


def subset_min_word(m: Dfa, states, budget: int | None = None, lower_bound=None) -> ResetResult:
    """Shortest word collapsing ``states`` to one state.

    Forward BFS in the k-power automaton from ``states``.  With ``budget`` the
    search stops at that depth and raises if nothing was found; ``lower_bound``
    (a callable on sorted state tuples, admissible) prunes nodes that cannot
    finish in the remaining budget.
    """
    start = _start_tuple(m, states)
    if len(start) == 1:
        return ResetResult((), "exact")
    word = _subset_search(m, start, budget, lower_bound)
    if word is not None:
        return ResetResult(word, "exact")
    if budget is not None:
        raise SubsetNotSynchronizable(f"{set(start)} cannot be synchronized within {budget}")
    raise SubsetNotSynchronizable(f"{set(start)} cannot be synchronized")


# plain search first; the pair table only pays off on large searches
PRUNE_AFTER_NODES = 50_000


def subset_sync_within(m: Dfa, states, budget: int, prune: bool = True) -> bool:
    """Decide whether ``states`` synchronize with a word of length <= ``budget``."""
    start = _start_tuple(m, states)
    if len(start) == 1:
        return True
    if prune and len(start) > 2:
        try:
            return _subset_search(m, start, budget, None, max_nodes=PRUNE_AFTER_NODES) is not None
        except _SearchTooLarge:
            pass
        dist = pair_distances(m, limit=budget)

        def bound(node):
            return max((int(dist[p, q]) for p, q in combinations(node, 2)), default=0)

        return _subset_search(m, start, budget, bound) is not None
    return _subset_search(m, start, budget, None) is not None


def hardest_subset(m: Dfa, k: int):
    """Subset of size <= k with the longest minimal synchronizing word.

    One backward multi-source BFS from the singletons of the k-power
    automaton.  Returns ``(subset, length)``; length is ``math.inf`` when some
    subset can never be merged (and that subset is returned).
    """
    power = build_kpower(m, k)
    _check_subset_cap(m, k)
    preds = {node: [] for node in power.nodes}
    for (node, _), target in power.arcs.items():
        preds[target].append(node)
    dist = {node: 0 for node in power.nodes if len(node) == 1}
    queue = deque(sorted(dist, key=sorted))
    while queue:
        node = queue.popleft()
        for pred in preds[node]:
            if pred not in dist:
                dist[pred] = dist[node] + 1
                queue.append(pred)
    ordered = sorted(power.nodes, key=lambda a: (len(a), sorted(a)))
    stuck = [a for a in ordered if a not in dist]
    if stuck:
        return stuck[0], inf
    best = max(dist.values())
    return next(a for a in ordered if dist[a] == best), best


def kmerge_approx(m: Dfa, states, k: int) -> ResetResult:
    """Merge ``min(k, |S|)`` states at a time, always picking the cheapest group."""
    if k < 2:
        raise ValueError("kmerge needs k >= 2")
    current = frozenset(states)
    word = []
    while len(current) > 1:
        best = None
        for group in combinations(sorted(current), min(k, len(current))):
            try:
                piece = subset_min_word(m, group).word
            except SubsetNotSynchronizable:
                continue
            key = (len(piece), piece, group)
            if best is None or key < best:
                best = key
        if best is None:
            raise SubsetNotSynchronizable(f"no {k}-subset of {sorted(current)} can be merged")
        piece = best[1]
        word.extend(piece)
        current = image(m, piece, current)
    return ResetResult(tuple(word), "kmerge")
