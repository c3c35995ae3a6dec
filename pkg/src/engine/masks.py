from __future__ import annotations
import logging
from abc import ABC, abstractmethod
from collections import Counter
from fractions import Fraction
from typing import Iterable, List, Optional, Sequence

import numpy as np

from config.config import Config
from src.utils.file_utils import read_mask_rows

logger = logging.getLogger(__name__)


class MobilityMask(ABC):
    """Per-round movement permissions; realized rows are kept for A(M).

    Adaptive masks read the algorithm's state and only exist for rounds played.
    """

    name = "mask"
    adaptive = False

    def __init__(self, k: int):
        self.k = k
        self.rows: List[List[int]] = []

    def row(self, t: int, context=None) -> List[int]:
        """Permission bits for round t (1-based, drawn in order)."""
        while len(self.rows) < t:
            bits = [int(b) for b in self._draw(len(self.rows) + 1, context)]
            if len(bits) != self.k:
                raise ValueError(f"mask row has {len(bits)} bits, expected {self.k}")
            self.rows.append(bits)
        return self.rows[t - 1]

    @abstractmethod
    def _draw(self, t: int, context) -> Sequence[int]: ...


class AllOnes(MobilityMask):
    name = "ones"

    def _draw(self, t, context):
        return [1] * self.k


class BernoulliMask(MobilityMask):
    """Each robot may move independently with probability p."""

    name = "bernoulli"

    def __init__(self, k: int, p: float, seed: int = 0):
        super().__init__(k)
        if not 0.0 <= p <= 1.0:
            raise ValueError(f"bernoulli probability out of range: {p}")
        self.p = p
        self.rng = np.random.default_rng(Config.seed_or(seed))

    def _draw(self, t, context):
        return (self.rng.random(self.k) < self.p).astype(int).tolist()


class RoundRobinMask(MobilityMask):
    name = "roundrobin"

    def _draw(self, t, context):
        bits = [0] * self.k
        bits[(t - 1) % self.k] = 1
        return bits


class RowsMask(MobilityMask):
    """Explicit rows; rounds past the last row are all-ones."""

    name = "rows"

    def __init__(self, k: int, rows: Iterable[Sequence[int]]):
        super().__init__(k)
        self._given = [list(r) for r in rows]

    def _draw(self, t, context):
        if t <= len(self._given):
            return self._given[t - 1]
        return [1] * self.k

    @classmethod
    def from_file(cls, path, k: int) -> "RowsMask":
        mask = cls(k, read_mask_rows(path, k))
        mask.name = "file"
        return mask


class BlockedRobotsMask(MobilityMask):
    """The listed robots never move."""

    name = "blocked"

    def __init__(self, k: int, blocked: Iterable[int]):
        super().__init__(k)
        self.blocked = set(blocked)

    def _draw(self, t, context):
        return [0 if i in self.blocked else 1 for i in range(self.k)]


class BlockHeaviestAnchorMask(MobilityMask):
    """Adaptive adversary freezing every robot of the most loaded non-root anchor."""

    name = "block-heaviest-anchor"
    adaptive = True

    def _draw(self, t, context):
        anchors = context.anchors() if context is not None else {}
        root = context.view.world.root if context is not None else 0
        load = Counter(v for v in anchors.values() if v != root)
        if not load:
            return [1] * self.k
        target = min(load, key=lambda v: (-load[v], v))
        return [0 if anchors.get(i) == target else 1 for i in range(self.k)]


def mean_mobility(mask: MobilityMask, up_to_round: int) -> Fraction:
    """A(M) over rounds 1..up_to_round; oblivious masks draw missing rows first."""
    if not mask.adaptive and up_to_round > 0:
        mask.row(up_to_round)
    return Fraction(sum(sum(r) for r in mask.rows[:up_to_round]), mask.k)


def parse_mask(spec: Optional[str], k: int, seed: int = 0) -> MobilityMask:
    """Build a mask from its CLI form: ones | bernoulli:p | roundrobin | file:path | heaviest."""
    if not spec or spec == "ones":
        return AllOnes(k)
    kind, _, arg = spec.partition(":")
    if kind == "bernoulli":
        return BernoulliMask(k, float(arg), seed=seed)
    if kind == "roundrobin":
        return RoundRobinMask(k)
    if kind == "file":
        return RowsMask.from_file(arg, k)
    if kind == "heaviest":
        return BlockHeaviestAnchorMask(k)
    raise ValueError(f"Unknown mask: {spec}")
