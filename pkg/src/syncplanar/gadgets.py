"""Crossing elimination for binary automata, clock gadgets and planar instances.

Every arc ``e = (p --x--> q)`` of a binary automaton M becomes a path of
``8n`` arcs in N, cut into ``2n`` segments of four arcs labelled
``(x,0) (x,1) (x,1) (x,0)``.  A crossing of ``e`` and ``f`` sits inside one
segment of each; the third and fourth node of ``e``'s segment are identified
with the second and third node of ``f``'s.  Missing letters become loops.

The clock ``C_m`` has two tracks per block (one per base letter) that share
the block's first node, so the only shortest entry-to-exit words are the
block words ``f(W)``.  Attaching it at ``rho(p)`` turns a subset question on M
into a subset question on the planar automaton ``N_{m,p}``.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field

from .automata import Dfa, validate
from .errors import CrossingBudgetExceeded, DrawingInvalid
from .planar import Drawing, check_drawing, compute_drawing
from .sync import subset_sync_within

CLOCK_VARIANTS = ("first", "segment")


def lifted_alphabet(alphabet) -> tuple:
    """``{a,b} x {0,1}`` as letter names ``a0 a1 b0 b1``."""
    return tuple(f"{x}{bit}" for x in alphabet for bit in (0, 1))


def _lift(c: int, bit: int) -> int:
    return 2 * c + bit


BLOCK = (0, 1, 1, 0)


def lift_f(word, n: int) -> tuple:
    """Block homomorphism: letter ``x`` becomes ``((x,0)(x,1)(x,1)(x,0))^(2n)``."""
    if n < 1:
        raise ValueError("n must be positive")
    out = []
    for c in word:
        out.extend(_lift(c, bit) for _ in range(2 * n) for bit in BLOCK)
    return tuple(out)


@dataclass
class PlanarizationMap:
    rho: tuple  # state of M -> node of N
    paths: dict  # arc (state, letter) -> tuple of 8n+1 nodes of N
    identified: list = field(default_factory=list)  # (crossing id, node, node)


@dataclass
class _Builder:
    """Nodes plus partial transition maps; finalised into a total Dfa."""

    alphabet: tuple
    out: list = field(default_factory=list)

    def node(self) -> int:
        self.out.append({})
        return len(self.out) - 1

    def arc(self, src: int, letter: int, dst: int) -> None:
        prev = self.out[src].get(letter)
        if prev is not None and prev != dst:
            raise DrawingInvalid(f"gadget produced two {self.alphabet[letter]}-arcs out of node {src}")
        self.out[src][letter] = dst

    def dfa(self) -> Dfa:
        trans = []
        for v, arcs in enumerate(self.out):
            for c in range(len(self.alphabet)):
                trans.append((v, c, arcs.get(c, v)))
        return validate({"n": len(self.out), "alphabet": self.alphabet, "transitions": trans})


def planarize(m: Dfa, drawing: Drawing | None = None):
    """Build the planar automaton N over ``{a,b} x {0,1}`` and its map from M."""
    if m.sigma != 2:
        raise ValueError("planarize needs a binary automaton")
    if drawing is None:
        drawing = compute_drawing(m)
    n = m.n
    segments = 2 * n
    check_drawing(drawing, m)
    counts = drawing.crossing_counts()
    worst = max(counts.values(), default=0)
    if worst > segments:
        raise CrossingBudgetExceeded(f"an arc has {worst} crossings; at most {segments} fit")

    b = _Builder(lifted_alphabet(m.alphabet))
    rho = tuple(b.node() for _ in range(n))
    arcs = [(q, c) for q in range(n) for c in range(2)]
    # v[arc][i][j] for segment i in 0..2n-1 and point j in 0..3, plus the end node
    points = {}
    for arc in arcs:
        q, c = arc
        grid = [[None] * 4 for _ in range(segments)]
        grid[0][0] = rho[q]
        points[arc] = grid

    identified = []
    for cid in sorted(drawing.crossings):
        a, pa, f, pf = drawing.crossings[cid]
        e, pe, f, pf = (a, pa, f, pf) if a < f else (f, pf, a, pa)
        ge, gf = points[e][pe], points[f][pf]
        x, y = b.node(), b.node()
        ge[2], ge[3] = x, y
        gf[1], gf[2] = x, y
        identified.append((cid, x, y))
    for arc in arcs:
        for seg in points[arc]:
            for j in range(4):
                if seg[j] is None:
                    seg[j] = b.node()

    paths = {}
    for arc in arcs:
        q, c = arc
        target = rho[m.table[q][c]]
        grid = points[arc]
        path = [v for seg in grid for v in seg] + [target]
        for i, (src, dst) in enumerate(zip(path, path[1:])):
            b.arc(src, _lift(c, BLOCK[i % 4]), dst)
        paths[arc] = tuple(path)
    return b.dfa(), PlanarizationMap(rho, paths, identified)


# --- clock -------------------------------------------------------------------

@dataclass
class Clock:
    """Clock gadget as a standalone automaton: ``entry`` is w(p), ``exit`` is phi(p)."""

    dfa: Dfa
    entry: int
    exit: int
    m: int
    n: int

    @property
    def period(self) -> int:
        return 8 * self.m * self.n


def _clock_builder(b: _Builder, m: int, n: int, exit_node: int, variant: str) -> int:
    if variant not in CLOCK_VARIANTS:
        raise ValueError(f"clock variant must be one of {CLOCK_VARIANTS}")
    segments = 2 * n
    starts = [b.node() for _ in range(m)] + [exit_node]
    for k in range(m):
        shared = [starts[k]]
        if variant == "segment":
            shared += [b.node() for _ in range(3)]
        for c in range(2):
            track = list(shared)
            while len(track) < 4 * segments:
                track.append(b.node())
            track.append(starts[k + 1])
            for i, (src, dst) in enumerate(zip(track, track[1:])):
                b.arc(src, _lift(c, BLOCK[i % 4]), dst)
    return starts[0]


def build_clock(m: int, n: int, variant: str = "first") -> Clock:
    if m < 1 or n < 1:
        raise ValueError("build_clock needs m >= 1 and n >= 1")
    b = _Builder(lifted_alphabet(("a", "b")))
    exit_node = b.node()
    entry = _clock_builder(b, m, n, exit_node, variant)
    return Clock(b.dfa(), entry, exit_node, m, n)


def minimal_strings(m: Dfa, source: int, target: int):
    """All shortest words driving ``source`` to ``target`` (exhaustive BFS)."""
    dist = {source: 0}
    queue = deque([source])
    while queue:
        v = queue.popleft()
        for c in range(m.sigma):
            w = m.table[v][c]
            if w not in dist:
                dist[w] = dist[v] + 1
                queue.append(w)
    if target not in dist:
        return None, set()
    words = {source: {()}}
    layer = [source]
    for d in range(dist[target]):
        nxt = {}
        for v in layer:
            for c in range(m.sigma):
                w = m.table[v][c]
                if dist.get(w) == d + 1:
                    nxt.setdefault(w, set()).update(x + (c,) for x in words[v])
        words.update(nxt)
        layer = list(nxt)
    return dist[target], words[target]


# --- instances ---------------------------------------------------------------

@dataclass(frozen=True)
class SynchInstance:
    dfa: Dfa
    states: frozenset
    budget: int


def build_instance(m: Dfa, drawing, states, steps: int, p: int, planarized=None, variant: str = "first") -> SynchInstance:
    """The instance ``(N_{m,p}, rho(S) + {w(p)}, 8 m n)``."""
    n_net, pmap = planarized if planarized is not None else planarize(m, drawing)
    if not 0 <= p < m.n:
        raise ValueError(f"state {p} out of range")
    b = _Builder(n_net.alphabet)
    for v in range(n_net.n):
        b.node()
        for c in range(n_net.sigma):
            b.arc(v, c, n_net.table[v][c])
    anchor = pmap.rho[p]
    entry = anchor if steps == 0 else _clock_builder(b, steps, m.n, anchor, variant)
    distinguished = frozenset(pmap.rho[q] for q in states) | {entry}
    return SynchInstance(b.dfa(), distinguished, 8 * steps * m.n)


def decide_subset_sync_via_planar(m: Dfa, states, steps: int, drawing=None, variant: str = "first") -> bool:
    """Turing reduction: some ``p`` makes ``I_{p,m,S}`` synchronizable within budget."""
    planarized = planarize(m, drawing)
    for p in range(m.n):
        inst = build_instance(m, None, states, steps, p, planarized=planarized, variant=variant)
        if subset_sync_within(inst.dfa, inst.states, inst.budget):
            return True
    return False


def render_map(pmap: PlanarizationMap, m: Dfa) -> str:
    lines = [f"rho {q} {v}" for q, v in enumerate(pmap.rho)]
    for (q, c), path in pmap.paths.items():
        lines.append(f"path {q}:{m.alphabet[c]} " + " ".join(map(str, path)))
    return "\n".join(lines) + "\n"
