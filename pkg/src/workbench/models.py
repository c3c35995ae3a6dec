from __future__ import annotations
from typing import Any, Dict, List, Optional

from pydantic import Field

from src.engine.models import Base

SUMMARY_COLUMNS = ["n", "D", "Delta", "k", "algorithm", "seed", "runtime", "edge_events", "bound", "bound_ok"]
EXTRA_COLUMNS = ["generator", "checks_ok", "violations", "memory_peak_bits"]


class GeneratorSpec(Base):
    """A tree or grid generator and its parameters.

    A parameter whose value is the string ``"k"`` takes the robot count of
    the cell, so ``spider(k="k", D=8)`` grows one leg per robot.
    """
    name: str
    params: Dict[str, Any] = Field(default_factory=dict)

    def resolve(self, k: int, seed: int) -> Dict[str, Any]:
        params = {key: (k if value == "k" else value) for key, value in self.params.items()}
        if self.name in ("random", "grid"):
            params.setdefault("seed", seed)
        return params

    def label(self) -> str:
        inner = ",".join(f"{key}={value}" for key, value in sorted(self.params.items()))
        return f"{self.name}({inner})"


class AlgorithmSpec(Base):
    name: str
    params: Dict[str, Any] = Field(default_factory=dict)


class ExperimentSpec(Base):
    """Matrix of generators × algorithms × k × seeds; fully determines every run."""
    generators: List[GeneratorSpec] = Field(default_factory=list)
    algorithms: List[AlgorithmSpec] = Field(default_factory=list)
    ks: List[int] = Field(default_factory=list)
    seeds: List[int] = Field(default_factory=lambda: [0])
    output: Optional[str] = None
    workers: Optional[int] = None


class SummaryRow(Base):
    n: int
    D: int
    Delta: int
    k: int
    algorithm: str
    seed: int
    runtime: int
    edge_events: int
    bound: float
    bound_ok: bool
    generator: str = ""
    checks_ok: bool = True
    violations: str = ""
    memory_peak_bits: Optional[int] = None

    @property
    def ok(self) -> bool:
        return self.bound_ok and self.checks_ok
