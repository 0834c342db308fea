"""Reductions into subset synchronization and reset length, plus brute-force oracles.

* longest common subsequence -> subset synchronization (subsequence acceptors
  glued to a counter chain),
* alphabet binarization with fixed-width big-endian letter codes,
* SAT-UNSAT pairs -> reset length ``k+2 / k+3 / k+4``, in a general and a
  planar flavour.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from itertools import product
from math import ceil, log2

from .automata import Dfa, validate
from .errors import BudgetExceeded, EmptyCnf, ParseError, TooManyVariables
from .gadgets import SynchInstance

SAT_VAR_CAP = 20
LCS_ENUM_CAP = 10**6


# --- CNF ---------------------------------------------------------------------

@dataclass(frozen=True)
class Cnf:
    """Variables ``1..k``; each clause is a frozenset of nonzero signed ints."""

    k: int
    clauses: tuple

    def __post_init__(self):
        if not self.clauses:
            raise EmptyCnf("formula has no clauses")
        for clause in self.clauses:
            for lit in clause:
                if lit == 0 or abs(lit) > self.k:
                    raise ParseError(f"literal {lit} outside variables 1..{self.k}")

    @property
    def n(self) -> int:
        return len(self.clauses)


def cnf(k: int, clauses) -> Cnf:
    return Cnf(k, tuple(frozenset(c) for c in clauses))


def parse_dimacs(text: str) -> Cnf:
    k = None
    declared = None
    clauses = []
    pending = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("c") or line.startswith("%"):
            continue
        if line.startswith("p"):
            parts = line.split()
            if len(parts) != 4 or parts[1] != "cnf":
                raise ParseError(f"line {lineno}: expected 'p cnf <vars> <clauses>'")
            try:
                k, declared = int(parts[2]), int(parts[3])
            except ValueError:
                raise ParseError(f"line {lineno}: bad problem line") from None
            continue
        if k is None:
            raise ParseError(f"line {lineno}: clause before the 'p cnf' line")
        for tok in line.split():
            try:
                lit = int(tok)
            except ValueError:
                raise ParseError(f"line {lineno}: bad literal {tok!r}") from None
            if lit == 0:
                clauses.append(pending)
                pending = []
            else:
                pending.append(lit)
    if pending:
        clauses.append(pending)
    if k is None:
        raise ParseError("missing 'p cnf' line")
    if declared is not None and declared != len(clauses):
        raise ParseError(f"header declares {declared} clauses, found {len(clauses)}")
    return cnf(k, clauses)


def render_dimacs(phi: Cnf) -> str:
    lines = [f"p cnf {phi.k} {phi.n}"]
    for clause in phi.clauses:
        lits = sorted(clause, key=lambda x: (abs(x), x))
        lines.append(" ".join(str(x) for x in lits + [0]))
    return "\n".join(lines) + "\n"


def evaluate(phi: Cnf, assignment) -> bool:
    """``assignment[j-1]`` is the truth value of variable ``j``."""
    return all(any((lit > 0) == bool(assignment[abs(lit) - 1]) for lit in clause) for clause in phi.clauses)


def sat_brute(phi: Cnf) -> bool:
    if phi.k > SAT_VAR_CAP:
        raise TooManyVariables(f"{phi.k} variables > {SAT_VAR_CAP}")
    return any(evaluate(phi, bits) for bits in product((False, True), repeat=phi.k))


def random_cnf(rng: random.Random, k: int, n: int, width: int = 3) -> Cnf:
    clauses = []
    for _ in range(n):
        size = rng.randint(1, max(1, min(width, k)))
        vs = rng.sample(range(1, k + 1), size)
        clauses.append([v if rng.random() < 0.5 else -v for v in vs])
    return cnf(k, clauses)


# --- LCS -----------------------------------------------------------------------

@dataclass(frozen=True)
class LcsInstance:
    words: tuple
    alphabet: tuple
    m: int

    def __post_init__(self):
        if not self.words:
            raise ValueError("need at least one string")
        if self.m < 0:
            raise ValueError("target length must be nonnegative")
        extra = set("".join(self.words)) - set(self.alphabet)
        if extra:
            raise ValueError(f"letters {sorted(extra)} not in the alphabet")


def lcs_instance(words, m: int, alphabet=None) -> LcsInstance:
    words = tuple(words)
    if alphabet is None:
        alphabet = sorted(set("".join(words))) or ["a"]
    return LcsInstance(words, tuple(alphabet), m)


def parse_lcs(text: str) -> LcsInstance:
    m = None
    words = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if line.startswith("#"):
            continue
        if line.startswith("m="):
            try:
                m = int(line[2:])
            except ValueError:
                raise ParseError(f"line {lineno}: bad header {line!r}") from None
            continue
        if m is None:
            if not line:
                continue
            raise ParseError(f"line {lineno}: expected 'm=<int>' header first")
        words.append(line)
    if m is None:
        raise ParseError("missing 'm=<int>' header")
    if not words:
        raise ParseError("no strings given")
    return lcs_instance(words, m)


def render_lcs(x: LcsInstance) -> str:
    return "\n".join([f"m={x.m}", *x.words]) + "\n"


def is_subsequence(u, w) -> bool:
    it = iter(w)
    return all(ch in it for ch in u)


def lcs_brute(x: LcsInstance) -> bool:
    total = len(x.alphabet) ** x.m
    if total > LCS_ENUM_CAP:
        raise BudgetExceeded(f"|alphabet|^m = {total} > {LCS_ENUM_CAP}")
    return any(all(is_subsequence(u, w) for w in x.words) for u in product(x.alphabet, repeat=x.m))


def random_lcs(rng: random.Random, max_k=3, max_len=5, max_sigma=3, max_m=4) -> LcsInstance:
    sigma = rng.randint(1, max_sigma)
    alphabet = tuple("abc"[:sigma])
    k = rng.randint(1, max_k)
    words = tuple("".join(rng.choice(alphabet) for _ in range(rng.randint(0, max_len))) for _ in range(k))
    return LcsInstance(words, alphabet, rng.randint(0, max_m))


@dataclass(frozen=True)
class SubseqAcceptor:
    dfa: Dfa
    initial: int
    accepting: frozenset

    @property
    def sink(self) -> int:
        return self.dfa.n - 1

    def accepts(self, text) -> bool:
        q = self.initial
        for ch in text:
            q = self.dfa.table[q][self.dfa.letter_index(ch)]
        return q in self.accepting


def subsequence_automaton(w: str, alphabet) -> SubseqAcceptor:
    """States ``0..|w|`` (matched prefix length) plus a rejecting sink ``|w|+1``."""
    alphabet = tuple(alphabet)
    sink = len(w) + 1
    trans = []
    for i in range(len(w) + 1):
        for a in alphabet:
            j = w.find(a, i)
            trans.append((i, a, sink if j < 0 else j + 1))
    trans.extend((sink, a, sink) for a in alphabet)
    m = validate({"n": len(w) + 2, "alphabet": alphabet, "transitions": trans})
    return SubseqAcceptor(m, 0, frozenset(range(len(w) + 1)))


LCS_VARIANTS = ("repaired", "verbatim")


def lcs_to_synch(x: LcsInstance, variant: str = "repaired", sep: str = "d") -> SynchInstance:
    """Acceptors for every string, a collector ``q`` and a counter ``p_1..p_{m+1}``.

    ``d`` sends accepting states to ``q``.  In the verbatim wiring a rejecting
    state reading ``d`` jumps to ``p_1``, where the counter token can meet it
    cheaply; the repaired wiring keeps rejected tokens in their sink instead.
    """
    if variant not in LCS_VARIANTS:
        raise ValueError(f"variant must be one of {LCS_VARIANTS}")
    if sep in x.alphabet:
        raise ValueError(f"separator {sep!r} already in the alphabet")
    omega = x.alphabet + (sep,)
    d = len(x.alphabet)
    trans = []
    starts = []
    offset = 0
    blocks = []
    for w in x.words:
        acc = subsequence_automaton(w, x.alphabet)
        blocks.append((offset, acc))
        starts.append(offset + acc.initial)
        offset += acc.dfa.n
    q = offset
    p = [None] + [q + j for j in range(1, x.m + 2)]  # p[1..m+1]
    for base, acc in blocks:
        for s in range(acc.dfa.n):
            for c in range(d):
                trans.append((base + s, c, base + acc.dfa.table[s][c]))
            if s in acc.accepting:
                trans.append((base + s, d, q))
            elif variant == "verbatim":
                trans.append((base + s, d, p[1]))
            else:
                trans.append((base + s, d, base + s))
    for c in range(d + 1):
        trans.append((q, c, q))
    for j in range(1, x.m + 1):
        for c in range(d):
            trans.append((p[j], c, p[j + 1]))
        trans.append((p[j], d, p[1]))
    for c in range(d):
        trans.append((p[x.m + 1], c, p[1]))
    trans.append((p[x.m + 1], d, q))
    m = validate({"n": q + x.m + 2, "alphabet": omega, "transitions": trans})
    return SynchInstance(m, frozenset(starts) | {p[1]}, x.m + 1)


# --- binarization ----------------------------------------------------------------

def binarize(m: Dfa, states, t: int):
    """Read each letter as a ``d``-bit big-endian code; returns ``(dfa, states', d*t)``."""
    if m.sigma < 2:
        raise ValueError("binarize needs at least two letters")
    d = ceil(log2(m.sigma))
    prefixes = [""]
    for length in range(1, d):
        prefixes.extend("".join(bits) for bits in product("01", repeat=length))
    index = {u: i for i, u in enumerate(prefixes)}
    width = len(prefixes)

    def node(q, u):
        return q * width + index[u]

    trans = []
    for q in range(m.n):
        for u in prefixes:
            for bit in "01":
                ux = u + bit
                if len(ux) < d:
                    target = node(q, ux)
                else:
                    letter = min(int(ux, 2), m.sigma - 1)
                    target = node(m.table[q][letter], "")
                trans.append((node(q, u), bit, target))
    out = validate({"n": m.n * width, "alphabet": ("0", "1"), "transitions": trans})
    return out, frozenset(node(q, "") for q in states), d * t


# --- SAT-UNSAT -> reset length -------------------------------------------------------

HOLD = "h"


def _align(alpha: Cnf, beta: Cnf):
    """Rename beta's variables above alpha's and pad both to the same clause count."""
    a = alpha.k
    shifted = [frozenset(lit + a if lit > 0 else lit - a for lit in c) for c in beta.clauses]
    left = list(alpha.clauses)
    right = shifted
    n = max(len(left), len(right))
    left += [left[-1]] * (n - len(left))
    right += [right[-1]] * (n - len(right))
    return a, a + beta.k, left, right


def _ou_automaton(alpha: Cnf, beta: Cnf, planar: bool):
    """Shared wiring of both constructions.

    Clause ``i`` has an A row ``p_T, p_F, p_1..p_k, .., s`` and a B row
    ``q_T, q_F, q_1..q_k, .., s``.  Letters are ``0``, ``1`` and the hold letter.
    Position ``r`` of a row (``p_T`` is 0) for ``1 <= r <= k`` reads variable
    ``X_r``.  A satisfied alpha literal jumps from the A row two steps ahead
    onto the B row; a satisfied beta literal jumps from the B row one step
    ahead onto the A row.  ``hold`` freezes ``p_F``/``q_F`` and advances
    everything else, which lines all clause tokens up before the assignment.
    """
    a, k, left, right = _align(alpha, beta)
    n = len(left)
    names = []

    def new(name):
        names.append(name)
        return len(names) - 1

    s = new("s")
    shared = None if planar else (new("t1"), new("t2"))
    rows = []
    for i in range(1, n + 1):
        arow = [new(f"p{i},T"), new(f"p{i},F")] + [new(f"p{i},{j}") for j in range(1, k + 1)]
        brow = [new(f"q{i},T"), new(f"q{i},F")] + [new(f"q{i},{j}") for j in range(1, k + 1)]
        if planar:
            arow += [new(f"p{i},{k + 1}"), new(f"p{i},{k + 2}")]
            brow += [new(f"q{i},{k + 1}")]
        else:
            arow += list(shared)
            brow += [shared[1]]
        rows.append((arow + [s], brow + [s]))

    ZERO, ONE, H = 0, 1, 2
    table = {}
    for c in (ZERO, ONE, H):
        table[s, c] = s
    if not planar:
        t1, t2 = shared
        for c in (ZERO, ONE, H):
            table[t1, c] = t2
            table[t2, c] = s

    def literal_letter(clause, var):
        if var in clause:
            return ONE
        if -var in clause:
            return ZERO
        return None

    for (arow, brow), ca, cb in zip(rows, left, right):
        for row, other, first, last, jump, clause in (
            (arow, brow, 1, a, 2, ca),
            (brow, arow, a + 1, k, 1, cb),
        ):
            for r, state in enumerate(row[:-1]):
                if (state, ZERO) in table:
                    continue  # shared tail, wired above
                for c in (ZERO, ONE, H):
                    table[state, c] = row[r + 1]
                if r == 0:
                    continue
                if r == 1:
                    table[state, H] = state
                if 1 <= r <= k and first <= r <= last:
                    lit = literal_letter(clause, r)
                    if lit is not None:
                        # same distance to s as position r + 1 + jump of this row
                        table[state, lit] = other[r + 1 + jump - (len(row) - len(other))]
    trans = [(v, c, table[v, c]) for v in range(len(names)) for c in (ZERO, ONE, H)]
    return validate({"n": len(names), "alphabet": ("0", "1", HOLD), "transitions": trans}), k, names


def ou_construct(alpha: Cnf, beta: Cnf):
    """Automaton whose reset length is ``k+2`` (both satisfiable), ``k+3``
    (alpha satisfiable, beta not) or ``k+4`` (alpha unsatisfiable)."""
    m, k, _ = _ou_automaton(alpha, beta, planar=False)
    return m, k + 3


def ou_planarize(alpha: Cnf, beta: Cnf):
    """As :func:`ou_construct`, with the shared tail split per clause so the
    transition graph is planar."""
    m, k, _ = _ou_automaton(alpha, beta, planar=True)
    return m, k + 3


def ou_state_names(alpha: Cnf, beta: Cnf, planar: bool = False) -> list:
    return _ou_automaton(alpha, beta, planar)[2]


def ou_expected(alpha: Cnf, beta: Cnf) -> int:
    """Reset length the construction must have, read off the SAT oracle."""
    k = alpha.k + beta.k
    if not sat_brute(alpha):
        return k + 4
    return k + 2 if sat_brute(beta) else k + 3
