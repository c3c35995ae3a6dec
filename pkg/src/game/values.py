from __future__ import annotations
import logging
import math
from functools import lru_cache
from typing import Callable, Dict, List, Optional, Tuple

from config.config import Config
from src.utils.utils import GameError, InstanceTooLargeError, min_log
from .models import GameState, GameStep
from .strategies import Adversary, player_balancing

logger = logging.getLogger(__name__)

Player = Callable[[GameState, int], Tuple[int, GameState]]


def game_bound(k: int, delta: int) -> float:
    """k·min{ln Δ, ln k} + k."""
    return k * min_log(delta, k) + k


@lru_cache(maxsize=None)
def _value(N: int, u: int, k: int, delta: int) -> int:
    if delta * u - N <= 0:
        return 0
    # N >= 1 here whenever u >= 1 and the game lasts
    options = [
        _value(N - math.ceil(N / u) + 1, u - 1, k, delta),
        _value(N - N // u + 1, u - 1, k, delta),
    ]
    if N < k:
        options.append(_value(N + 1, u, k, delta))
    return 1 + max(options)


def game_value(N: int, u: int, k: int, delta: int) -> int:
    """Remaining length R(N, u) under the balancing player."""
    if not 0 <= u <= k or N < 0 or N > k:
        raise GameError(f"(N={N}, u={u}) outside the table for k={k}")
    return _value(N, u, k, delta)


def game_value_bruteforce(state: GameState) -> int:
    """Exact remaining length, balancing player against a maximizing adversary."""
    if state.k > Config.BRUTEFORCE_MAX or state.delta > Config.BRUTEFORCE_MAX:
        raise InstanceTooLargeError(f"brute force limited to k, delta <= {Config.BRUTEFORCE_MAX}")
    memo: Dict[tuple, int] = _BRUTE_MEMO.setdefault((state.k, state.delta), {})
    return _search(state, memo)


_BRUTE_MEMO: Dict[Tuple[int, int], Dict[tuple, int]] = {}


def _search(state: GameState, memo: Dict[tuple, int]) -> int:
    key = state.key()
    if key in memo:
        return memo[key]
    if state.over:
        memo[key] = 0
        return 0
    best = 0
    for a in state.legal_picks():
        _, nxt = player_balancing(state, a)
        best = max(best, 1 + _search(nxt, memo))
    memo[key] = best
    return best


def play(player: Player, adversary: Adversary, init: GameState,
         max_steps: Optional[int] = None) -> Tuple[int, List[GameStep]]:
    """Alternate adversary pick and player placement until every urn of U holds Δ balls."""
    state = init
    steps: List[GameStep] = []
    cap = max_steps or 10 * (state.k + 1) * (state.delta + 1)
    while not state.over:
        if len(steps) >= cap:
            raise GameError(f"game exceeded {cap} steps")
        a = adversary.pick(state)
        if a not in state.legal_picks():
            raise GameError(f"{adversary.name} adversary picked illegal urn {a}")
        b, state = player(state, a)
        steps.append(GameStep(t=state.t, a=a, b=b, loads=list(state.loads), untouched=sorted(state.untouched)))
    logger.debug("game k=%d delta=%d ended after %d steps", init.k, init.delta, len(steps))
    return len(steps), steps


def table_violations(k: int, delta: int) -> List[str]:
    """Check monotonicity in N and the R(N,u) = 1 + R(N+1,u) identity over the whole table."""
    problems = []
    for u in range(0, k + 1):
        for N in range(0, k + 1):
            if N < k and game_value(N + 1, u, k, delta) > game_value(N, u, k, delta):
                problems.append(f"R({N + 1},{u}) > R({N},{u})")
            if N < k and delta * u - N > 0 and game_value(N, u, k, delta) != 1 + game_value(N + 1, u, k, delta):
                problems.append(f"R({N},{u}) != 1 + R({N + 1},{u})")
    return problems
