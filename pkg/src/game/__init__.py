from .models import GameState, GameStep, generalized_init
from .strategies import (
    Adversary,
    GreedyAdversary,
    adversary_greedy,
    OptimalAdversary,
    RandomAdversary,
    balancing_choice,
    create_adversary,
    player_balancing,
)
from .values import game_value, game_value_bruteforce, table_violations, play, game_bound

__all__ = [
    "GameState",
    "GameStep",
    "generalized_init",
    "Adversary",
    "GreedyAdversary",
    "adversary_greedy",
    "OptimalAdversary",
    "RandomAdversary",
    "balancing_choice",
    "create_adversary",
    "player_balancing",
    "game_value",
    "game_value_bruteforce",
    "table_violations",
    "play",
    "game_bound",
]
