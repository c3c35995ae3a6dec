from __future__ import annotations
from collections import Counter
from dataclasses import dataclass, field
from enum import Enum
from typing import Dict, List, Optional, Tuple

from pydantic import BaseModel, ConfigDict, Field


class MoveKind(str, Enum):
    EDGE = "edge"
    UP = "up"
    STAY = "stay"


@dataclass(frozen=True, slots=True)
class Move:
    kind: MoveKind
    edge: Optional[int] = None

    @classmethod
    def along(cls, edge: int) -> "Move":
        return cls(MoveKind.EDGE, edge)


UP = Move(MoveKind.UP)
STAY = Move(MoveKind.STAY)


@dataclass(slots=True)
class MoveRecord:
    robot: int
    src: int
    dst: int
    edge: int


@dataclass(slots=True)
class RoundRecord:
    round: int
    moves: List[MoveRecord] = field(default_factory=list)
    discovered: List[int] = field(default_factory=list)
    idle: List[int] = field(default_factory=list)
    blocked: List[int] = field(default_factory=list)
    edge_events: List[Tuple[int, str, int]] = field(default_factory=list)   # (edge, down|up, robot)
    closed: List[int] = field(default_factory=list)
    reanchors: List[Tuple[int, int, int]] = field(default_factory=list)     # (robot, node, depth)
    phase: Optional[str] = None
    active_count: Optional[int] = None
    stage: Optional[int] = None
    suspended: bool = False

    @property
    def moved(self) -> bool:
        return bool(self.moves)

    def to_dict(self) -> dict:
        out = {
            "round": self.round,
            "moves": [{"robot": m.robot, "from": m.src, "to": m.dst, "edge": m.edge} for m in self.moves],
            "discovered": self.discovered,
            "idle": self.idle,
        }
        if self.blocked:
            out["blocked"] = self.blocked
        if self.edge_events:
            out["edge_events"] = [list(ev) for ev in self.edge_events]
        if self.closed:
            out["closed"] = self.closed
        if self.reanchors:
            out["reanchors"] = [list(r) for r in self.reanchors]
        for key in ("phase", "active_count", "stage"):
            value = getattr(self, key)
            if value is not None:
                out[key] = value
        if self.suspended:
            out["suspended"] = True
        return out

    @classmethod
    def from_dict(cls, raw: dict) -> "RoundRecord":
        return cls(
            round=raw["round"],
            moves=[MoveRecord(m["robot"], m["from"], m["to"], m["edge"]) for m in raw.get("moves", [])],
            discovered=list(raw.get("discovered", [])),
            idle=list(raw.get("idle", [])),
            blocked=list(raw.get("blocked", [])),
            edge_events=[tuple(ev) for ev in raw.get("edge_events", [])],
            closed=list(raw.get("closed", [])),
            reanchors=[tuple(r) for r in raw.get("reanchors", [])],
            phase=raw.get("phase"),
            active_count=raw.get("active_count"),
            stage=raw.get("stage"),
            suspended=raw.get("suspended", False),
        )


@dataclass
class RunTrace:
    """Everything one engine run produced, round by round."""
    algorithm: str
    k: int
    n: int
    m: int
    depth: int
    max_degree: int
    is_tree: bool = True
    rounds: List[RoundRecord] = field(default_factory=list)
    final_positions: List[int] = field(default_factory=list)
    rounds_executed: int = 0
    completion_round: Optional[int] = None
    halted_at: Optional[int] = None
    mask_rows: List[List[int]] = field(default_factory=list)
    extras: Dict[str, object] = field(default_factory=dict)

    @property
    def runtime(self) -> int:
        return sum(1 for r in self.rounds if r.moved)

    @property
    def edge_events(self) -> int:
        return sum(len(r.edge_events) for r in self.rounds)

    @property
    def idle_rounds(self) -> int:
        return sum(1 for r in self.rounds if r.idle)

    def move_counts(self) -> List[int]:
        counts = [0] * self.k
        for r in self.rounds:
            for mv in r.moves:
                counts[mv.robot] += 1
        return counts

    def reanchor_histogram(self) -> Dict[int, int]:
        """Anchor assignments to depth >= 1, by depth."""
        hist: Counter = Counter()
        for r in self.rounds:
            for _, _, depth in r.reanchors:
                if depth >= 1:
                    hist[depth] += 1
        return dict(sorted(hist.items()))

    def header(self) -> dict:
        return {
            "algorithm": self.algorithm, "k": self.k, "n": self.n, "m": self.m,
            "D": self.depth, "Delta": self.max_degree, "is_tree": self.is_tree,
            "rounds_executed": self.rounds_executed, "completion_round": self.completion_round,
            "halted_at": self.halted_at, "final_positions": self.final_positions,
        }


#################################################################
# Exchanged records
#################################################################

class Base(BaseModel):
    model_config = ConfigDict(
        use_enum_values=False,
        extra="forbid"
    )


class Violation(Base):
    check: str
    detail: str
    round: Optional[int] = None


class AuditReport(Base):
    checks: List[str] = Field(default_factory=list)
    violations: List[Violation] = Field(default_factory=list)
    suspended_rounds: int = 0

    @property
    def ok(self) -> bool:
        return not self.violations

    def add(self, check: str, detail: str, round: Optional[int] = None) -> None:
        self.violations.append(Violation(check=check, detail=detail, round=round))

    def merge(self, other: "AuditReport") -> "AuditReport":
        self.checks.extend(c for c in other.checks if c not in self.checks)
        self.violations.extend(other.violations)
        self.suspended_rounds += other.suspended_rounds
        return self

    def raise_for_violations(self) -> None:
        from src.utils.utils import AuditError
        if self.violations:
            first = self.violations[0]
            raise AuditError(f"{len(self.violations)} violation(s); first: [{first.check}] {first.detail}", report=self)


class RunSummary(Base):
    algorithm: str
    k: int
    n: int
    m: int
    D: int
    Delta: int
    runtime: int
    edge_events: int
    idle_rounds: int
    bound: float
    bound_ok: bool
    reanchors: Dict[int, int] = Field(default_factory=dict)
    move_counts: List[int] = Field(default_factory=list)
    memory_peak_bits: Optional[int] = None
