"""Synchronizing automata: reset words, subset synchronization and planar reductions."""

from .automata import Dfa, gen_cerny, gen_random, validate
from .sync import exact_reset_word, greedy_reset_word, is_synchronizing, subset_min_word

__version__ = "0.1.0"

__all__ = [
    "Dfa",
    "exact_reset_word",
    "gen_cerny",
    "gen_random",
    "greedy_reset_word",
    "is_synchronizing",
    "subset_min_word",
    "validate",
]
