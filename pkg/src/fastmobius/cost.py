"""Addition-count cost model, closed-form costs, and the benchmark harness."""

from __future__ import annotations

import csv
import io
import logging
import math
import time
from dataclasses import asdict, dataclass, field
from itertools import combinations
from pathlib import Path
from typing import Iterator, Sequence

import numpy as np

from .counters import OpCounter, StageCount
from .evidence import combine_to_plausibility
from .graph import Graph, MAlgorithm, compose
from .setfun import Frame, Kind, SetFunction, check_capacity
from .transforms import TransformKind, fast_array, naive_array

log = logging.getLogger(__name__)


def cost_of_graph(g: Graph) -> int:
    """Sum over targets of ``max(0, #preimage - 1)``."""
    sizes = g.preimage_sizes()
    return int(np.maximum(sizes - 1, 0).sum())


def cost_of_malgorithm(alg: MAlgorithm) -> int:
    alg._require_graphs()
    return sum(cost_of_graph(g) for g in alg.stages)


def stage_merges(alg: MAlgorithm) -> Iterator[tuple[tuple[int, ...], MAlgorithm]]:
    """Every way of composing runs of adjacent stages into single graphs.

    Yields ``(block_sizes, algorithm)``; the all-ones split is ``alg`` itself
    and the single block is the composite.
    """
    n = len(alg)
    for k in range(n):
        for cuts in combinations(range(1, n), k):
            bounds = (0, *cuts, n)
            stages = []
            for a, b in zip(bounds, bounds[1:]):
                g = alg.stages[a]
                for h in alg.stages[a + 1 : b]:
                    g = compose(g, h)
                stages.append(g)
            yield tuple(b - a for a, b in zip(bounds, bounds[1:])), MAlgorithm(stages)


# -- closed forms -----------------------------------------------------------


def truncate(x: float, digits: int = 0) -> float:
    """Cut (not round) to ``digits`` decimals, as the printed tables do."""
    scale = 10**digits
    return math.floor(x * scale) / scale


@dataclass(frozen=True)
class AnalyticRow:
    n: int
    subsets: int
    cost_obvious: int
    cost_hasse: int
    cost_hasse_full: int
    naive_combination: tuple[int, int]
    naive_plausibility: tuple[int, int]
    fast_commonality: tuple[int, int]
    fast_product: tuple[int, int]
    fast_plausibility: tuple[int, int]

    @property
    def ratio(self) -> float:
        return self.cost_obvious / self.cost_hasse

    @property
    def slow_additions(self) -> int:
        return self.naive_combination[0] + self.naive_plausibility[0]

    @property
    def fast_additions(self) -> int:
        return self.fast_commonality[0] + self.fast_plausibility[0]

    @property
    def addition_ratio(self) -> float:
        return self.slow_additions / self.fast_additions

    @property
    def multiplication_ratio(self) -> float:
        return self.naive_combination[1] / self.fast_product[1]


def analytic_costs(n: int) -> AnalyticRow:
    """Predicted operation counts for a frame of ``n`` elements.

    Steps of the combination pipeline are ``(additions, multiplications)``.
    """
    check_capacity(n)
    p = 1 << n
    return AnalyticRow(
        n=n,
        subsets=p,
        cost_obvious=3**n - 2 * p + 1,
        cost_hasse=n * (p >> 1) - n,
        cost_hasse_full=n * (p >> 1),
        naive_combination=(p * (p - 1), p * p),
        naive_plausibility=(3**n - p, 0),
        fast_commonality=(n * p, 0),
        fast_product=(0, p),
        fast_plausibility=(n * ((p >> 1) - 1), 0),
    )


COST_COLUMNS = ["n", "subsets", "cost_obvious", "cost_hasse", "ratio"]
PIPELINE_COLUMNS = ["n", "addition_ratio", "multiplication_ratio"]


def cost_table(ns: Sequence[int]) -> list[dict]:
    rows = []
    for n in ns:
        r = analytic_costs(n)
        rows.append(
            {"n": n, "subsets": r.subsets, "cost_obvious": r.cost_obvious, "cost_hasse": r.cost_hasse,
             "ratio": truncate(r.ratio, 1)}
        )
    return rows


def pipeline_table(ns: Sequence[int]) -> list[dict]:
    rows = []
    for n in ns:
        r = analytic_costs(n)
        rows.append(
            {"n": n, "addition_ratio": int(truncate(r.addition_ratio)),
             "multiplication_ratio": int(r.multiplication_ratio)}
        )
    return rows


def to_csv(rows: list[dict], columns: Sequence[str] | None = None) -> str:
    columns = list(columns or (rows[0].keys() if rows else []))
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=columns, extrasaction="ignore", lineterminator="\n")
    writer.writeheader()
    writer.writerows(rows)
    return buf.getvalue()


def to_text(rows: list[dict], columns: Sequence[str] | None = None) -> str:
    """Right-aligned plain-text table."""
    columns = list(columns or (rows[0].keys() if rows else []))
    cells = [[str(c) for c in columns]] + [[_fmt(row.get(c)) for c in columns] for row in rows]
    widths = [max(len(r[i]) for r in cells) for i in range(len(columns))]
    return "\n".join("  ".join(v.rjust(w) for v, w in zip(r, widths)) for r in cells) + "\n"


def _fmt(v) -> str:
    if v is None:
        return "-"
    if isinstance(v, float):
        return f"{v:.6g}"
    return str(v)


# -- benchmark harness ------------------------------------------------------


@dataclass
class BenchConfig:
    n_min: int = 5
    n_max: int = 10
    trials: int = 3
    arms: tuple[str, ...] = ("naive", "fast")
    workload: str = "transform"  # "transform": mass -> bel; "pipeline": (m1, m2) -> Pl
    naive_max_n: int = 15
    seed: int = 0


@dataclass
class CostReport:
    n: int
    arm: str
    workload: str
    additions: int
    multiplications: int
    per_stage: list[StageCount] = field(default_factory=list)
    analytic: tuple[int, int] | None = None
    wall_time: float = 0.0

    @property
    def matches_analytic(self) -> bool | None:
        if self.analytic is None:
            return None
        return (self.additions, self.multiplications) == self.analytic


def random_bba(frame: Frame, rng: np.random.Generator, exclude_empty: bool = True) -> SetFunction:
    """Dirichlet-distributed masses (on nonempty subsets by default)."""
    w = rng.dirichlet(np.ones(frame.size - exclude_empty))
    values = np.concatenate([[0.0], w]) if exclude_empty else w
    return SetFunction(frame, values, Kind.MASS)


def _expected(n: int, arm: str, workload: str) -> tuple[int, int]:
    r = analytic_costs(n)
    if workload == "transform":
        return (r.cost_obvious if arm == "naive" else r.cost_hasse), 0
    if arm == "naive":
        return r.slow_additions, r.naive_combination[1]
    return r.fast_additions, r.fast_product[1]


def _run_once(n: int, arm: str, workload: str, rng: np.random.Generator) -> tuple[OpCounter, float]:
    frame = Frame.of_size(n)
    counter = OpCounter()
    if workload == "transform":
        m = random_bba(frame, rng)
        t0 = time.perf_counter()
        if arm == "fast":
            fast_array(TransformKind.MASS_TO_BEL, m.values, counter)
        else:
            naive_array(TransformKind.MASS_TO_BEL, m.values, counter)
    elif workload == "pipeline":
        m1, m2 = random_bba(frame, rng), random_bba(frame, rng)
        t0 = time.perf_counter()
        combine_to_plausibility(m1, m2, algo=arm, counter=counter)
    else:
        raise ValueError(f"unknown workload {workload!r}")
    return counter, time.perf_counter() - t0


def run_benchmark(config: BenchConfig) -> list[CostReport]:
    """Measure counters and wall time per ``(n, arm)``.

    Counts are identical across trials; wall time is the median.
    """
    for n in (config.n_min, config.n_max):
        check_capacity(n)
    rng = np.random.default_rng(config.seed)
    reports = []
    for n in range(config.n_min, config.n_max + 1):
        for arm in config.arms:
            if arm not in ("naive", "fast"):
                raise ValueError(f"unknown arm {arm!r}")
            if arm == "naive" and n > config.naive_max_n:
                log.info("skipping naive arm at n=%d (naive_max_n=%d)", n, config.naive_max_n)
                continue
            times, counts = [], set()
            counter = None
            for _ in range(max(1, config.trials)):
                counter, dt = _run_once(n, arm, config.workload, rng)
                times.append(dt)
                counts.add((counter.additions, counter.multiplications))
            if len(counts) != 1:
                raise RuntimeError(f"operation counts varied across trials: {counts}")
            reports.append(
                CostReport(
                    n=n,
                    arm=arm,
                    workload=config.workload,
                    additions=counter.additions,
                    multiplications=counter.multiplications,
                    per_stage=counter.per_stage,
                    analytic=_expected(n, arm, config.workload),
                    wall_time=float(np.median(times)),
                )
            )
    return reports


def benchmark_rows(reports: list[CostReport]) -> list[dict]:
    """Flatten reports into one CSV row per ``(n, arm)``."""
    rows = []
    for r in reports:
        row = {k: v for k, v in asdict(r).items() if k not in ("per_stage", "analytic")}
        row["analytic_additions"], row["analytic_multiplications"] = r.analytic or (None, None)
        row["matches_analytic"] = r.matches_analytic
        rows.append(row)
    return rows


def comparison_rows(reports: list[CostReport]) -> list[dict]:
    """Cost-table rows whose cost columns are the measured counters."""
    by_n: dict[int, dict[str, CostReport]] = {}
    for r in reports:
        by_n.setdefault(r.n, {})[r.arm] = r
    rows = []
    for n, arms in sorted(by_n.items()):
        naive, fast = arms.get("naive"), arms.get("fast")
        row = {"n": n, "subsets": 1 << n,
               "cost_obvious": naive.additions if naive else None,
               "cost_hasse": fast.additions if fast else None,
               "ratio": truncate(naive.additions / fast.additions, 1) if naive and fast else None,
               "naive_seconds": naive.wall_time if naive else None,
               "fast_seconds": fast.wall_time if fast else None}
        rows.append(row)
    return rows


def write_csv(rows: list[dict], path: str | Path, columns: Sequence[str] | None = None) -> None:
    Path(path).write_text(to_csv(rows, columns))


def pipeline_comparison_rows(reports: list[CostReport]) -> list[dict]:
    """Ratio rows for the combination pipeline, from measured counters."""
    by_n: dict[int, dict[str, CostReport]] = {}
    for r in reports:
        by_n.setdefault(r.n, {})[r.arm] = r
    rows = []
    for n, arms in sorted(by_n.items()):
        slow, fast = arms.get("naive"), arms.get("fast")
        both = slow is not None and fast is not None
        rows.append(
            {"n": n,
             "addition_ratio": int(truncate(slow.additions / fast.additions)) if both else None,
             "multiplication_ratio": slow.multiplications // fast.multiplications if both else None,
             "slow_additions": slow.additions if slow else None,
             "fast_additions": fast.additions if fast else None,
             "naive_seconds": slow.wall_time if slow else None,
             "fast_seconds": fast.wall_time if fast else None}
        )
    return rows
