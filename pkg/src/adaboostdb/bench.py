"""Benchmark matrix over (dataset, algo, cost) cells: root counts and timing."""

from __future__ import annotations

import hashlib
import json
import statistics
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field

from .core import PAPER_GRID, CostPair, InputError
from .data import SynthSpec, gen_synth, load_csv
from .train import ALGOS, TrainConfig, run
from .weak import build_stump_pool

IMPROVEMENTS = (("CS->DBN", "cs", "db_nocs"), ("DBN->DB", "db_nocs", "db"), ("CS->DB", "cs", "db"))


@dataclass(frozen=True)
class BenchMatrix:
    algos: tuple[str, ...] = ("cs", "db_nocs", "db")
    costs: tuple[CostPair, ...] = PAPER_GRID
    # each entry: a CSV path string or a synthetic spec dict
    datasets: tuple = ({"kind": "bayes"},)
    repeats: int = 1
    rounds: int = 100
    thresholds: object = "all-midpoints"
    positive_label: str = "1"

    def __post_init__(self):
        if not self.algos or not self.costs or not self.datasets:
            raise InputError("bench matrix dimensions must be nonempty")
        bad = [a for a in self.algos if a not in ALGOS]
        if bad:
            raise InputError(f"unknown algos {bad}")
        if int(self.repeats) != self.repeats or self.repeats < 1:
            raise InputError("repeats must be >= 1")
        if int(self.rounds) != self.rounds or self.rounds < 1:
            raise InputError("rounds must be >= 1")

    def describe(self) -> dict:
        d = asdict(self)
        d["costs"] = [c.as_list() for c in self.costs]
        return d

    def config_hash(self) -> str:
        blob = json.dumps(self.describe(), sort_keys=True).encode()
        return hashlib.sha256(blob).hexdigest()[:16]


def dataset_name(ref) -> str:
    if isinstance(ref, str):
        return ref
    spec = SynthSpec.from_dict(ref)
    return f"{spec.kind}-{spec.n_pos}+{spec.n_neg}-s{spec.seed}"


def load_ref(ref, positive_label="1"):
    if isinstance(ref, str):
        return load_csv(ref, positive_label=positive_label)
    return gen_synth(SynthSpec.from_dict(ref))[0]


@dataclass
class CellResult:
    dataset: str
    algo: str
    cost: str
    rounds_done: int = 0
    roots_computed: int = 0
    median_seconds: float = float("nan")
    error: str = ""
    times: list = field(default_factory=list)


def run_cell(ref, algo: str, cost: CostPair, m: BenchMatrix) -> CellResult:
    out = CellResult(dataset_name(ref), algo, cost.label)
    try:
        ds = load_ref(ref, m.positive_label)
        pool = build_stump_pool(ds, m.thresholds)
        for _ in range(m.repeats):
            rec = run(ds, TrainConfig(cost, m.rounds, m.thresholds, algo=algo), pool=pool)
            out.times.append(rec.wall_nanos / 1e9)
        out.rounds_done = len(rec.per_round)
        out.roots_computed = rec.roots_computed
        out.median_seconds = statistics.median(out.times)
    except Exception as exc:  # recorded per cell
        out.error = f"{type(exc).__name__}: {exc}"
    return out


def run_matrix(m: BenchMatrix, workers: int = 1, sequential_timing: bool = False) -> list[CellResult]:
    cells = [(ref, a, c) for ref in m.datasets for a in m.algos for c in m.costs]
    if workers <= 1 or sequential_timing:
        return [run_cell(ref, a, c, m) for ref, a, c in cells]
    with ProcessPoolExecutor(max_workers=workers) as ex:
        futs = [ex.submit(run_cell, ref, a, c, m) for ref, a, c in cells]
        return [f.result() for f in futs]


def improvements(results: list[CellResult]) -> list[dict]:
    """Percent reductions of summed zeros and time between algorithm pairs, per dataset."""
    rows = []
    for ds in dict.fromkeys(r.dataset for r in results):
        tot = {}
        for r in results:
            if r.dataset == ds and not r.error:
                z, t = tot.get(r.algo, (0, 0.0))
                tot[r.algo] = (z + r.roots_computed, t + r.median_seconds)
        for label, src, dst in IMPROVEMENTS:
            if src in tot and dst in tot:
                (zs, ts), (zd, td) = tot[src], tot[dst]
                rows.append({
                    "dataset": ds, "improvement": label,
                    "zeros_pct": 100.0 * (1 - zd / zs) if zs else float("nan"),
                    "time_pct": 100.0 * (1 - td / ts) if ts else float("nan"),
                })
    return rows


def format_table(results: list[CellResult], impr: list[dict], header: dict) -> str:
    lines = [f"# {k}: {v}" for k, v in header.items()]
    lines.append(f"{'dataset':<28} {'algo':<8} {'cost':<9} {'rounds':>6} {'zeros':>12} {'seconds':>10}")
    for r in results:
        tail = f"  ERROR {r.error}" if r.error else ""
        lines.append(f"{r.dataset:<28} {r.algo:<8} {r.cost:<9} {r.rounds_done:>6} "
                     f"{r.roots_computed:>12} {r.median_seconds:>10.4f}{tail}")
    if impr:
        lines.append("")
        lines.append(f"{'dataset':<28} {'improvement':<10} {'zeros %':>9} {'time %':>9}")
        for row in impr:
            lines.append(f"{row['dataset']:<28} {row['improvement']:<10} "
                         f"{row['zeros_pct']:>9.2f} {row['time_pct']:>9.2f}")
    return "\n".join(lines) + "\n"
