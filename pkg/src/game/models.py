from __future__ import annotations
from dataclasses import dataclass
from typing import FrozenSet, List, Tuple

from pydantic import BaseModel, ConfigDict

from src.utils.utils import GameError


@dataclass(frozen=True)
class GameState:
    """Urn loads (0-based urns), untouched urns U, parameters k and Δ, step t."""
    loads: Tuple[int, ...]
    untouched: FrozenSet[int]
    k: int
    delta: int
    t: int = 0

    @classmethod
    def standard(cls, k: int, delta: int) -> "GameState":
        if k < 1 or delta < 1:
            raise GameError(f"need k >= 1 and delta >= 1, got k={k}, delta={delta}")
        return cls(tuple([1] * k), frozenset(range(k)), k, delta)

    @property
    def total(self) -> int:
        return sum(self.loads)

    @property
    def balls_in_u(self) -> int:
        return sum(self.loads[i] for i in self.untouched)

    @property
    def u(self) -> int:
        return len(self.untouched)

    @property
    def slack(self) -> int:
        """Room left in the untouched urns; positive while the game lasts."""
        return self.delta * self.u - self.balls_in_u

    @property
    def over(self) -> bool:
        return all(self.loads[i] >= self.delta for i in self.untouched)

    def legal_picks(self) -> List[int]:
        return [i for i, n in enumerate(self.loads) if n >= 1]

    def move(self, a: int, b: int) -> "GameState":
        if not 0 <= a < self.k or not 0 <= b < self.k:
            raise GameError(f"urn out of range: a={a}, b={b}, k={self.k}")
        if self.loads[a] < 1:
            raise GameError(f"adversary picked empty urn {a}")
        loads = list(self.loads)
        loads[a] -= 1
        loads[b] += 1
        return GameState(tuple(loads), self.untouched - {a}, self.k, self.delta, self.t + 1)

    def key(self) -> Tuple[Tuple[int, ...], Tuple[int, ...]]:
        """Symmetry-reduced key: sorted loads inside U, sorted loads outside."""
        inside = tuple(sorted(self.loads[i] for i in self.untouched))
        outside = tuple(sorted(n for i, n in enumerate(self.loads) if i not in self.untouched))
        return inside, outside


def generalized_init(k: int, u: int, delta: int = 2) -> GameState:
    """One urn with k−u balls, u singleton urns forming U, the rest empty."""
    if not 1 <= u <= k - 1:
        raise GameError(f"untouched count must lie in [1, k-1], got u={u} for k={k}")
    loads = tuple([k - u] + [1] * u + [0] * (k - u - 1))
    return GameState(loads, frozenset(range(1, u + 1)), k, delta)


class GameStep(BaseModel):
    model_config = ConfigDict(extra="forbid")

    t: int
    a: int
    b: int
    loads: List[int]
    untouched: List[int]
