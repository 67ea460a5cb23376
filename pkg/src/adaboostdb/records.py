"""Per-run training logs shared by every trainer."""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import asdict, dataclass, field, fields

from .core import CostPair, Ensemble


@dataclass(frozen=True)
class RoundLog:
    round: int
    stump_index: int
    alpha: float
    eps_pos: float
    eps_neg: float
    a: float
    b: float
    roots_computed_cum: int
    stumps_evaluated_cum: int
    wall_nanos_cum: int
    # ln of each class's share of the exponential bound after this round
    log_acc_pos: float
    log_acc_neg: float

    @property
    def bound(self) -> float:
        return math.exp(self.log_acc_pos) + math.exp(self.log_acc_neg)


@dataclass
class RunRecord:
    algo: str
    cost: CostPair
    ensemble: Ensemble
    per_round: list[RoundLog] = field(default_factory=list)
    initial_log_acc: tuple[float, float] = (math.log(0.5), math.log(0.5))
    pool_size: int = 0
    # totals include work done in a final round that selected nothing
    roots_computed: int = 0
    wall_nanos: int = 0

    def totals(self) -> dict:
        return {"roots_computed": self.roots_computed, "wall_nanos": self.wall_nanos}

    def to_dict(self) -> dict:
        return {
            "algo": self.algo,
            "cost": self.cost.as_list(),
            "pool_size": self.pool_size,
            "totals": self.totals(),
            "initial_log_acc": list(self.initial_log_acc),
            "per_round": [asdict(r) for r in self.per_round],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)

    def to_csv(self) -> str:
        buf = io.StringIO()
        names = [f.name for f in fields(RoundLog)]
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(names)
        for r in self.per_round:
            w.writerow([repr(getattr(r, k)) if isinstance(getattr(r, k), float) else getattr(r, k)
                        for k in names])
        return buf.getvalue()
