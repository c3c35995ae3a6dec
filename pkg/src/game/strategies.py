from __future__ import annotations
import logging
from abc import ABC, abstractmethod
from typing import Tuple

import numpy as np

from config.config import Config
from src.utils.utils import GameError
from .models import GameState

logger = logging.getLogger(__name__)


def balancing_choice(state: GameState, a: int) -> int:
    """Least-loaded urn among U \\ {a}, smallest index on ties; a itself if none is left."""
    candidates = [i for i in state.untouched if i != a]
    if not candidates:
        return a
    return min(candidates, key=lambda i: (state.loads[i], i))


def player_balancing(state: GameState, a: int) -> Tuple[int, GameState]:
    """Answer the adversary's pick ``a`` and apply the move."""
    if state.over:
        raise GameError("game is already over")
    if not 0 <= a < state.k:
        raise GameError(f"urn {a} not in [0, {state.k})")
    if state.loads[a] < 1:
        raise GameError(f"urn {a} is empty")
    b = balancing_choice(state, a)
    return b, state.move(a, b)


class Adversary(ABC):
    """Picks a non-empty urn each step."""

    name = "adversary"

    @abstractmethod
    def pick(self, state: GameState) -> int: ...


def adversary_greedy(state: GameState) -> int:
    """A ball outside U whenever there is one, else the fullest untouched urn."""
    outside = [i for i in range(state.k) if i not in state.untouched and state.loads[i] >= 1]
    if outside:
        return outside[0]
    return min(state.untouched, key=lambda i: (-state.loads[i], i))


class GreedyAdversary(Adversary):
    name = "greedy"

    def pick(self, state):
        return adversary_greedy(state)


class RandomAdversary(Adversary):
    name = "random"

    def __init__(self, seed: int = 0):
        self.rng = np.random.default_rng(Config.seed_or(seed))

    def pick(self, state):
        legal = state.legal_picks()
        return int(legal[self.rng.integers(len(legal))])


class OptimalAdversary(Adversary):
    """Maximizes the remaining length against the balancing player (brute force)."""

    name = "optimal"

    def pick(self, state):
        from .values import game_value_bruteforce
        best, best_value = None, -1
        for a in state.legal_picks():
            _, nxt = player_balancing(state, a)
            value = game_value_bruteforce(nxt)
            if value > best_value:
                best, best_value = a, value
        return best


def create_adversary(name: str, seed: int = 0) -> Adversary:
    if name == "greedy":
        return GreedyAdversary()
    if name == "random":
        return RandomAdversary(seed)
    if name == "optimal":
        return OptimalAdversary()
    raise ValueError(f"Unknown adversary: {name}")
