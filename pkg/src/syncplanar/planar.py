"""Planarity of transition digraphs and good drawings with crossings.

Non-planar automata are drawn in convex position: state ``i`` sits at
``(x_i, x_i**2)`` and every arc is a straight chord, so two arcs cross at most
once and arcs sharing an endpoint never cross.  Crossing points and their
order along each arc are computed with :class:`fractions.Fraction`.
Parallel and antiparallel arcs are thin lenses around the same chord; copies
of one chord never cross each other, and at a chord-chord crossing the copies
form a grid whose order follows the side each copy is offset to.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations

import networkx as nx

from .automata import Dfa
from .errors import DegenerateLayout, DrawingInvalid, ParseError

MAX_LAYOUT_ATTEMPTS = 16


@dataclass(frozen=True)
class TransitionDigraph:
    n: int
    alphabet: tuple
    arcs: tuple  # (source, letter index, target), one per (state, letter)

    @classmethod
    def of(cls, m: Dfa) -> "TransitionDigraph":
        arcs = tuple((q, c, m.table[q][c]) for q in range(m.n) for c in range(m.sigma))
        return cls(m.n, m.alphabet, arcs)

    def simple_graph(self) -> nx.Graph:
        """Underlying simple graph: loops dropped, parallel arcs collapsed."""
        g = nx.Graph()
        g.add_nodes_from(range(self.n))
        g.add_edges_from((p, q) for p, _, q in self.arcs if p != q)
        return g

    def arc_name(self, arc) -> str:
        return f"{arc[0]}:{self.alphabet[arc[1]]}"


def _as_digraph(g) -> TransitionDigraph:
    return TransitionDigraph.of(g) if isinstance(g, Dfa) else g


def planarity_test(g):
    """Return ``(is_planar, embedding)``; the embedding is a rotation system or ``None``."""
    simple = g if isinstance(g, nx.Graph) else _as_digraph(g).simple_graph()
    planar, embedding = nx.check_planarity(simple)
    if not planar:
        return False, None
    rotation = {v: list(embedding.neighbors_cw_order(v)) for v in embedding.nodes}
    return True, rotation


def is_planar(g) -> bool:
    return planarity_test(g)[0]


# --- drawings ----------------------------------------------------------------

@dataclass
class Drawing:
    """Combinatorial record of a good drawing.

    ``crossings`` maps a crossing id to ``(arc_a, pos_a, arc_b, pos_b)``: the two
    arcs involved and the crossing's index in each arc's sequence.  Arcs are
    ``(state, letter index)`` pairs.
    """

    arcs: tuple
    crossings: dict = field(default_factory=dict)
    rotation: dict | None = None

    def sequence(self, arc) -> list:
        """Crossing records ``(crossing id, other arc)`` along ``arc`` from its source."""
        entries = []
        for cid, (a, pa, b, pb) in self.crossings.items():
            if a == arc:
                entries.append((pa, cid, b))
            if b == arc:
                entries.append((pb, cid, a))
        return [(cid, other) for _, cid, other in sorted(entries)]

    def crossing_counts(self) -> dict:
        counts = {arc: 0 for arc in self.arcs}
        for a, _, b, _ in self.crossings.values():
            counts[a] += 1
            counts[b] += 1
        return counts

    def max_crossings(self) -> int:
        return max(self.crossing_counts().values(), default=0)


def check_drawing(d: Drawing, g=None, per_arc_limit: int | None = None) -> None:
    """Raise :class:`DrawingInvalid` unless ``d`` is a consistent good drawing."""
    arcs = set(d.arcs)
    if g is not None:
        g = _as_digraph(g)
        expected = {(p, c) for p, c, _ in g.arcs}
        if arcs != expected:
            raise DrawingInvalid("drawing arcs do not match the automaton's transitions")
    positions = {arc: [] for arc in d.arcs}
    pairs = set()
    for cid, (a, pa, b, pb) in d.crossings.items():
        if a not in arcs or b not in arcs:
            raise DrawingInvalid(f"crossing {cid} names an unknown arc")
        if a == b:
            raise DrawingInvalid(f"crossing {cid}: arc crosses itself")
        key = frozenset((a, b))
        if key in pairs:
            raise DrawingInvalid(f"arcs {a} and {b} cross more than once")
        pairs.add(key)
        positions[a].append(pa)
        positions[b].append(pb)
    for arc, pos in positions.items():
        if sorted(pos) != list(range(len(pos))):
            raise DrawingInvalid(f"crossing positions along {arc} are not 0..{len(pos) - 1}")
        if per_arc_limit is not None and len(pos) > per_arc_limit:
            raise DrawingInvalid(f"arc {arc} has {len(pos)} crossings > {per_arc_limit}")
    if g is not None:
        ends = {(p, c): (p, q) for p, c, q in g.arcs}
        for cid, (a, _, b, _) in d.crossings.items():
            if set(ends[a]) & set(ends[b]) or ends[a][0] == ends[a][1] or ends[b][0] == ends[b][1]:
                raise DrawingInvalid(f"crossing {cid} joins arcs that share an endpoint or a loop")


def _cross(u, v):
    return u[0] * v[1] - u[1] * v[0]


def _dot(u, v):
    return u[0] * v[0] + u[1] * v[1]


def convex_drawing(g, seed: int = 0) -> Drawing:
    """Straight-line drawing in convex position (crossings are kept)."""
    g = _as_digraph(g)
    rng = random.Random(seed)
    xs = [Fraction(i) for i in range(g.n)]
    for attempt in range(MAX_LAYOUT_ATTEMPTS):
        drawing = _convex_attempt(g, xs)
        if drawing is not None:
            return drawing
        # re-space abscissas; any strictly increasing choice stays convex
        xs = []
        x = Fraction(0)
        for _ in range(g.n):
            xs.append(x)
            x += 1 + Fraction(rng.randrange(1, 997), 997)
    raise DegenerateLayout(f"three chords stayed concurrent after {MAX_LAYOUT_ATTEMPTS} layouts")


def _convex_attempt(g: TransitionDigraph, xs):
    pts = [(x, x * x) for x in xs]
    chords = {}
    for p, c, q in g.arcs:
        if p != q:
            chords.setdefault((min(p, q), max(p, q)), []).append((p, c))
    for arcs in chords.values():
        arcs.sort()
    keys = sorted(chords)
    # t0 of each crossing, in canonical (low -> high) direction of each chord
    hits = {key: [] for key in keys}
    for s1, s2 in combinations(keys, 2):
        (a, b), (c, d) = s1, s2
        if len({a, b, c, d}) < 4:
            continue
        if not (a < c < b < d or c < a < d < b):
            continue
        p, r = pts[a], (pts[b][0] - pts[a][0], pts[b][1] - pts[a][1])
        q, s = pts[c], (pts[d][0] - pts[c][0], pts[d][1] - pts[c][1])
        denom = _cross(r, s)
        qp = (q[0] - p[0], q[1] - p[1])
        t = _cross(qp, s) / denom
        u = _cross(qp, r) / denom
        hits[s1].append((t, s2, denom))
        hits[s2].append((u, s1, -denom))
    for key in keys:
        ts = [t for t, _, _ in hits[key]]
        if len(ts) != len(set(ts)):
            return None
    # sequence of (arc, other arc) per arc, in the arc's own direction
    crossing_of = {}
    seqs = {}
    for key in keys:
        lo, _ = key
        for k, arc in enumerate(chords[key]):
            entries = []
            for t, other, denom in hits[key]:
                for l, other_arc in enumerate(chords[other]):
                    # copies of the other chord are met in offset order; the side
                    # depends on the orientation of the two chords
                    entries.append((t, l if denom < 0 else -l, other_arc))
            entries.sort()
            if arc[0] != lo:
                entries.reverse()
            seqs[arc] = [other_arc for _, _, other_arc in entries]
    arcs = tuple((p, c) for p, c, _ in g.arcs)
    crossings = {}
    next_id = 0
    for arc in arcs:
        for pos, other in enumerate(seqs.get(arc, [])):
            pair = (min(arc, other), max(arc, other))
            if pair in crossing_of:
                continue
            crossing_of[pair] = next_id
            next_id += 1
    for (a, b), cid in crossing_of.items():
        crossings[cid] = (a, seqs[a].index(b), b, seqs[b].index(a))
    return Drawing(arcs, crossings)


def compute_drawing(g, seed: int = 0) -> Drawing:
    """Good drawing of ``g``; planar inputs get a crossing-free embedding."""
    g = _as_digraph(g)
    planar, rotation = planarity_test(g)
    if planar:
        return Drawing(tuple((p, c) for p, c, _ in g.arcs), {}, rotation)
    return convex_drawing(g, seed)


# --- "drw v1" ----------------------------------------------------------------

def render_drawing(d: Drawing, g) -> str:
    g = _as_digraph(g)
    lines = ["drw v1"]
    for arc in d.arcs:
        lines.append(f"arc {g.arc_name(arc)}")
    for cid in sorted(d.crossings):
        a, pa, b, pb = d.crossings[cid]
        lines.append(f"crossing {cid} {g.arc_name(a)} {pa} {g.arc_name(b)} {pb}")
    return "\n".join(lines) + "\n"


def parse_drawing(text: str, g) -> Drawing:
    g = _as_digraph(g)
    by_name = {g.arc_name((p, c)): (p, c) for p, c, _ in g.arcs}

    def arc(name):
        if name not in by_name:
            raise ParseError(f"unknown arc id {name!r}")
        return by_name[name]

    lines = [ln.strip() for ln in text.splitlines() if ln.strip() and not ln.strip().startswith("#")]
    if not lines or lines[0] != "drw v1":
        raise ParseError("missing 'drw v1' header")
    arcs, crossings = [], {}
    for ln in lines[1:]:
        parts = ln.split()
        if parts[0] == "arc" and len(parts) == 2:
            arcs.append(arc(parts[1]))
        elif parts[0] == "crossing" and len(parts) == 6:
            try:
                cid, pa, pb = int(parts[1]), int(parts[3]), int(parts[5])
            except ValueError:
                raise ParseError(f"bad crossing line {ln!r}") from None
            if cid in crossings:
                raise DrawingInvalid(f"crossing id {cid} repeated")
            crossings[cid] = (arc(parts[2]), pa, arc(parts[4]), pb)
        else:
            raise ParseError(f"unrecognised line {ln!r}")
    d = Drawing(tuple(arcs) if arcs else tuple((p, c) for p, c, _ in g.arcs), crossings)
    check_drawing(d, g)
    return d
