"""Deterministic CSV, SVG and JSON artifacts for runs and sweeps.

Nothing here records timestamps, hostnames or worker counts, so the same
(problem, config, seed) always produces the same bytes.
"""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import asdict
from typing import Iterable

from .catalog import LayoutInstance
from .evolution import HISTORY_COLUMNS, RunResult
from .experiments import ProblemInstance, RunStats
from .geometry import ContainerDisk, PlacedShape

__all__ = [
    "KIND_COLORS",
    "SWEEP_COLUMNS",
    "history_csv",
    "layout_svg",
    "run_summary",
    "batch_summary",
    "sweep_rows",
    "sweep_csv",
    "dumps_json",
]

# fuel green, energy yellow, everything else blue
KIND_COLORS = {"fuel": "#2ca02c", "energy": "#e6c619", "diverse": "#1f77b4"}
ZONE_COLOR = "#f4a6c6"

SWEEP_COLUMNS = (
    "occupation_rate",
    "method",
    "successful_runs",
    "final_objective_median",
    "final_iqr",
    "first_feasible_generation_mean",
)


def _num(v) -> str:
    v = float(v)
    if math.isnan(v):
        return "nan"
    if math.isinf(v):
        return "inf" if v > 0 else "-inf"
    return repr(v)


def _clean(v):
    """JSON-safe copy: non-finite floats become null, tuples become lists."""
    if isinstance(v, float):
        return v if math.isfinite(v) else None
    if isinstance(v, dict):
        return {str(k): _clean(x) for k, x in v.items()}
    if isinstance(v, (list, tuple)):
        return [_clean(x) for x in v]
    if hasattr(v, "item"):  # numpy scalar
        return _clean(v.item())
    return v


def dumps_json(obj) -> str:
    return json.dumps(_clean(obj), indent=2, sort_keys=True, allow_nan=False) + "\n"


def history_csv(run: RunResult) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(HISTORY_COLUMNS)
    for rec in run.history:
        row = rec.row()
        w.writerow([row[0], *(_num(v) for v in row[1:8]), row[8], row[9]])
    return buf.getvalue()


def _f(x: float) -> str:
    return f"{x:.4f}"


def _shape_element(shape: PlacedShape, fill: str, cls: str) -> str:
    x, y = shape.center
    if shape.is_disk:
        return f'<circle class="{cls}" cx="{_f(x)}" cy="{_f(y)}" r="{_f(shape.radius)}" fill="{fill}"/>'
    pts = " ".join(f"{_f(px)},{_f(py)}" for px, py in shape.vertices())
    return f'<polygon class="{cls}" points="{pts}" fill="{fill}"/>'


def layout_svg(layout: LayoutInstance, container: ContainerDisk, zones: Iterable[PlacedShape] = (),
               size: int = 600) -> str:
    """One element for the plate, one per exclusion zone and one per placed part.

    Coordinates stay in plate units; a group transform flips y so the plate
    frame reads with +y up.
    """
    big_r = container.outer_radius
    cx, cy = container.center
    margin = 0.05 * big_r
    half = big_r + margin
    lines = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{size}" height="{size}" '
        f'viewBox="{_f(cx - half)} {_f(-cy - half)} {_f(2 * half)} {_f(2 * half)}">',
        '<g transform="scale(1,-1)" stroke="#333333" stroke-width="{}">'.format(_f(big_r / 300.0)),
        f'<circle class="container" cx="{_f(cx)}" cy="{_f(cy)}" r="{_f(big_r)}" fill="none"/>',
    ]
    for z in zones:
        lines.append(_shape_element(z, ZONE_COLOR, "zone"))
    for part in layout.parts:
        fill = KIND_COLORS.get(part.kind, KIND_COLORS["diverse"])
        lines.append(_shape_element(part.shape, fill, f"part {part.kind}"))
    lines += ["</g>", "</svg>"]
    return "\n".join(lines) + "\n"


def run_summary(problem: ProblemInstance, run: RunResult) -> dict:
    best = run.best
    return {
        "seed": run.config.seed,
        "method": run.method,
        "feasible": best.feasible,
        "best_objective": best.objective,
        "best_violations": dict(zip(("h1", "h2", "h3", "g1", "g3"), best.violations.as_tuple())),
        "best_total_violation": best.total,
        "best_selection": [problem.catalog[i].subdivisions[k] for i, k in enumerate(best.selection)],
        "first_feasible_generation": run.first_feasible_generation,
        "configurations_all": run.configurations_all,
        "configurations_feasible": run.configurations_feasible,
        "generations_run": len(run.history) - 1,
    }


def batch_summary(problem: ProblemInstance, method: str, runs: list[RunResult], stats: RunStats) -> dict:
    cfg = asdict(runs[0].config)
    cfg.pop("seed")
    cfg.pop("workers")  # parallelism never changes results, so it stays out of artifacts
    return {
        "problem": problem.name,
        "method": method,
        "occupation_rate": problem.occupation_rate,
        "container_radius": problem.container.outer_radius,
        "configuration_count": problem.layout.space.size,
        "gene_count": problem.layout.length,
        "config": cfg,
        "seeds": [r.config.seed for r in runs],
        "stats": stats.to_dict(),
        "runs": [run_summary(problem, r) for r in runs],
    }


def sweep_rows(entries: Iterable[tuple[float, str, RunStats]]) -> list[dict]:
    """One row per (occupation rate, method) with the four comparison metrics."""
    rows = []
    for rate, method, st in entries:
        rows.append({
            "occupation_rate": rate,
            "method": method,
            "successful_runs": st.success_count,
            "final_objective_median": st.final_median,
            "final_iqr": st.final_iqr,
            "first_feasible_generation_mean": st.mean_first_feasible,
        })
    return rows


def sweep_csv(rows: list[dict]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(SWEEP_COLUMNS)
    for r in rows:
        out = []
        for c in SWEEP_COLUMNS:
            v = r[c]
            out.append("" if v is None else (_num(v) if isinstance(v, float) else v))
        w.writerow(out)
    return buf.getvalue()
