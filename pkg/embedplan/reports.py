import hashlib
from pathlib import Path
from typing import Literal, Optional

from .model import FrozenModel
from .planner.report import CostReport, PlanReport
from .simulator import SimulationReport

PlannerName = Literal["heuristic", "oracle"]


class RunReport(FrozenModel):
    """Everything a plan run produced, keyed by the digest of its input spec."""

    spec_digest: str
    planner: PlannerName
    allow_cartesian: bool
    plan: PlanReport
    cost: CostReport
    simulation: Optional[SimulationReport] = None
    planner_seconds: float = 0.0

    def to_json(self) -> str:
        return self.model_dump_json(indent=2) + "\n"

    def digest(self) -> str:
        """Digest of the deterministic part of the report."""
        stable = self.model_dump_json(exclude={"planner_seconds"})
        return hashlib.sha256(stable.encode("utf-8")).hexdigest()

    def write(self, path: Path) -> None:
        path.write_text(self.to_json(), encoding="utf-8")
