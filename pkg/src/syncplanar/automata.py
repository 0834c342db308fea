"""Deterministic finite automata: representation, word action and the "dfa v1" text format.

States and letters are dense 0-based indices.  Letter names only matter at
the serialization boundary.  State sets are plain ``frozenset`` objects; the
k-power construction collapses repeated states, so sets (not multisets) are
all the engine ever needs.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .errors import DuplicateTransition, IndexOutOfRange, MissingTransition, ParseError

Word = tuple  # tuple[int, ...]
StateSet = frozenset  # frozenset[int]


@dataclass(frozen=True)
class Dfa:
    """Total deterministic automaton.

    ``table[q][c]`` is the target of state ``q`` under letter index ``c``.
    Build instances through :func:`validate` (or the generators) so the
    invariants hold.
    """

    n: int
    alphabet: tuple
    table: tuple

    @property
    def sigma(self) -> int:
        return len(self.alphabet)

    @property
    def states(self) -> frozenset:
        return frozenset(range(self.n))

    def delta(self, q: int, c: int) -> int:
        return self.table[q][c]

    def letter_index(self, name: str) -> int:
        try:
            return self.alphabet.index(name)
        except ValueError:
            raise ParseError(f"unknown letter {name!r}") from None

    def column(self, c: int) -> tuple:
        """Target of every state under letter ``c``."""
        return tuple(row[c] for row in self.table)

    def canonical_id(self) -> str:
        """Base-n digits of the table read in (state, letter) order."""
        digits = "0123456789abcdefghijklmnopqrstuvwxyz"
        if self.n > len(digits):
            return ".".join(str(t) for row in self.table for t in row)
        return "".join(digits[t] for row in self.table for t in row)


def validate(raw) -> Dfa:
    """Turn a raw description into a :class:`Dfa`.

    ``raw`` is a mapping with keys ``n``, ``alphabet`` (letter names) and
    ``transitions`` (iterable of ``(state, letter, target)``; the letter may be
    a name or an index).
    """
    n = int(raw["n"])
    alphabet = tuple(str(a) for a in raw["alphabet"])
    if n < 1:
        raise IndexOutOfRange(None, None, "automaton needs at least one state")
    if not alphabet:
        raise IndexOutOfRange(None, None, "alphabet is empty")
    if len(set(alphabet)) != len(alphabet):
        raise ParseError(f"letter names must be distinct: {alphabet}")
    sigma = len(alphabet)
    table = [[None] * sigma for _ in range(n)]
    for state, letter, target in raw["transitions"]:
        if isinstance(letter, str):
            if letter not in alphabet:
                raise IndexOutOfRange(state, letter, "unknown letter")
            c = alphabet.index(letter)
        else:
            c = int(letter)
            if not 0 <= c < sigma:
                raise IndexOutOfRange(state, letter, "letter index")
        name = alphabet[c]
        if not 0 <= state < n:
            raise IndexOutOfRange(state, name, "source state")
        if not 0 <= target < n:
            raise IndexOutOfRange(state, name, f"target {target} >= {n}")
        if table[state][c] is not None:
            raise DuplicateTransition(state, name)
        table[state][c] = target
    for q in range(n):
        for c in range(sigma):
            if table[q][c] is None:
                raise MissingTransition(q, alphabet[c])
    return Dfa(n, alphabet, tuple(tuple(row) for row in table))


def from_table(table: Sequence[Sequence[int]], alphabet: Iterable[str] | None = None) -> Dfa:
    table = [list(row) for row in table]
    sigma = len(table[0]) if table else 0
    if alphabet is None:
        alphabet = default_alphabet(sigma)
    trans = [(q, c, t) for q, row in enumerate(table) for c, t in enumerate(row)]
    return validate({"n": len(table), "alphabet": list(alphabet), "transitions": trans})


def default_alphabet(sigma: int) -> tuple:
    if sigma <= 26:
        return tuple("abcdefghijklmnopqrstuvwxyz"[:sigma])
    return tuple(f"x{i}" for i in range(sigma))


def extended_delta(m: Dfa, word: Iterable[int], q: int) -> int:
    table = m.table
    for c in word:
        q = table[q][c]
    return q


def image(m: Dfa, word: Iterable[int], states: Iterable[int]) -> frozenset:
    word = tuple(word)
    return frozenset(extended_delta(m, word, q) for q in states)


def gen_cerny(n: int) -> Dfa:
    """The classic slowly synchronizing family: ``a`` rotates, ``b`` sends 0 to 1."""
    if n < 2:
        raise ValueError("gen_cerny needs n >= 2")
    table = [((q + 1) % n, 1 if q == 0 else q) for q in range(n)]
    return from_table(table, ("a", "b"))


def gen_random(n: int, sigma: int, seed: int) -> Dfa:
    rng = random.Random(seed)
    table = [[rng.randrange(n) for _ in range(sigma)] for _ in range(n)]
    return from_table(table)


# --- words -----------------------------------------------------------------

def _compact(alphabet) -> bool:
    return all(len(a) == 1 for a in alphabet)


def render_word(m_or_alphabet, word: Iterable[int]) -> str:
    alphabet = getattr(m_or_alphabet, "alphabet", m_or_alphabet)
    names = [alphabet[c] for c in word]
    return "".join(names) if _compact(alphabet) else " ".join(names)


def parse_word(m_or_alphabet, text: str) -> Word:
    alphabet = tuple(getattr(m_or_alphabet, "alphabet", m_or_alphabet))
    text = text.strip()
    if text in ("", "ε", "-"):
        return ()
    tokens = list(text.replace(" ", "")) if _compact(alphabet) else text.split()
    out = []
    for tok in tokens:
        if tok not in alphabet:
            raise ParseError(f"unknown letter {tok!r} in word {text!r}")
        out.append(alphabet.index(tok))
    return tuple(out)


# --- "dfa v1" --------------------------------------------------------------

@dataclass
class DfaDocument:
    """A parsed "dfa v1" file: the automaton plus named subsets and an optional budget."""

    dfa: Dfa
    subsets: dict = field(default_factory=dict)
    budget: int | None = None


def render(m: Dfa, subsets: dict | None = None, budget: int | None = None) -> str:
    lines = [f"dfa {m.n} {m.sigma}", "letters " + " ".join(m.alphabet)]
    for q in range(m.n):
        for c, name in enumerate(m.alphabet):
            lines.append(f"trans {q} {name} {m.table[q][c]}")
    for name, states in (subsets or {}).items():
        lines.append(f"subset {name} " + " ".join(str(q) for q in sorted(states)))
    if budget is not None:
        lines.append(f"# budget {budget}")
    return "\n".join(lines) + "\n"


def parse(text: str) -> DfaDocument:
    header = None
    letters = None
    trans = []
    subsets = {}
    budget = None
    for lineno, raw_line in enumerate(text.splitlines(), 1):
        line = raw_line.strip()
        if line.startswith("#"):
            parts = line[1:].split()
            if len(parts) == 2 and parts[0] == "budget":
                budget = _int(parts[1], lineno)
            continue
        if not line:
            continue
        parts = line.split()
        kind = parts[0]
        if kind == "dfa":
            if header is not None or len(parts) != 3:
                raise ParseError(f"line {lineno}: malformed or repeated header")
            header = (_int(parts[1], lineno), _int(parts[2], lineno))
        elif kind == "letters":
            letters = parts[1:]
        elif kind == "trans":
            if len(parts) != 4:
                raise ParseError(f"line {lineno}: expected 'trans <state> <letter> <target>'")
            trans.append((_int(parts[1], lineno), parts[2], _int(parts[3], lineno)))
        elif kind == "subset":
            if len(parts) < 3:
                raise ParseError(f"line {lineno}: subset needs a name and at least one state")
            subsets[parts[1]] = frozenset(_int(p, lineno) for p in parts[2:])
        else:
            raise ParseError(f"line {lineno}: unknown directive {kind!r}")
    if header is None or letters is None:
        raise ParseError("missing 'dfa' header or 'letters' line")
    n, sigma = header
    if len(letters) != sigma:
        raise ParseError(f"header declares {sigma} letters, found {len(letters)}")
    m = validate({"n": n, "alphabet": letters, "transitions": trans})
    for name, states in subsets.items():
        bad = [q for q in states if not 0 <= q < n]
        if bad:
            raise IndexOutOfRange(bad[0], None, f"subset {name!r}")
    return DfaDocument(m, subsets, budget)


def _int(tok: str, lineno: int) -> int:
    try:
        return int(tok)
    except ValueError:
        raise ParseError(f"line {lineno}: expected an integer, got {tok!r}") from None
