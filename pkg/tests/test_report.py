import csv
import io
import json
import math
import xml.etree.ElementTree as ET

import numpy as np
import pytest

from vsdslayout import plotting, report
from vsdslayout.catalog import LayoutInstance, PlacedPart
from vsdslayout.evolution import evolve
from vsdslayout.experiments import compute_stats, run_batch, toy_case, toy_config
from vsdslayout.geometry import ContainerDisk, PlacedShape


@pytest.fixture(scope="module")
def toy_batch():
    return run_batch(toy_case(), "tags", toy_config("tags", generations=10), [0, 1])


def test_history_csv_round_trip(toy_batch):
    run = toy_batch.runs[0]
    rows = list(csv.reader(io.StringIO(report.history_csv(run))))
    assert len(rows) == 12
    for rec, row in zip(run.history, rows[1:]):
        vals = [float(v) for v in row]
        ref = rec.row()
        assert vals[0] == ref[0] and vals[-2:] == list(ref[-2:])
        for a, b in zip(vals[1:8], ref[1:8]):
            assert (math.isnan(a) and math.isnan(b)) or a == b


def test_json_has_no_nan():
    text = report.dumps_json({"a": float("nan"), "b": [float("inf"), 1.5], "c": np.float64(2.0)})
    assert json.loads(text) == {"a": None, "b": [None, 1.5], "c": 2.0}


def test_svg_is_well_formed_and_colored():
    lay = LayoutInstance((
        PlacedPart(PlacedShape.disk((10, 0), 5), 1, "fuel", "F1"),
        PlacedPart(PlacedShape.rectangle((-10, 0), 4, 6, 0.3), 1, "energy", "E1"),
        PlacedPart(PlacedShape.disk((0, 10), 2), 1, "diverse", "D1"),
    ))
    zone = PlacedShape.rectangle((0, -20), 5, 5)
    root = ET.fromstring(report.layout_svg(lay, ContainerDisk(40), [zone]))
    ns = "{http://www.w3.org/2000/svg}"
    shapes = [e for e in root.iter() if e.tag in (ns + "circle", ns + "polygon")]
    assert len(shapes) == 5
    fills = {e.get("class"): e.get("fill") for e in shapes}
    assert fills["part fuel"] == report.KIND_COLORS["fuel"]
    assert fills["part energy"] == report.KIND_COLORS["energy"]
    assert fills["zone"] == report.ZONE_COLOR
    assert len(next(e for e in shapes if e.get("class") == "part energy").get("points").split()) == 4


def test_batch_summary_fields(toy_batch):
    s = report.batch_summary(toy_batch.problem, "tags", toy_batch.runs, toy_batch.stats)
    assert s["configuration_count"] == 4 and s["gene_count"] == 12
    assert "workers" not in s["config"] and "seed" not in s["config"]
    assert s["seeds"] == [0, 1]
    run = s["runs"][0]
    assert set(run["best_violations"]) == {"h1", "h2", "h3", "g1", "g3"}
    assert all(k in (1, 2) for k in run["best_selection"])
    json.loads(report.dumps_json(s))


def test_sweep_table(toy_batch):
    rows = report.sweep_rows([(0.3, "tags", toy_batch.stats), (0.5, "tags", compute_stats(toy_batch.runs[:1]))])
    text = report.sweep_csv(rows)
    parsed = list(csv.DictReader(io.StringIO(text)))
    assert tuple(parsed[0]) == report.SWEEP_COLUMNS
    assert [r["occupation_rate"] for r in parsed] == ["0.3", "0.5"]


def test_sweep_table_blank_when_never_feasible():
    run = evolve(toy_case(), "tags", toy_config("tags", generations=0, pop_size=2, tournament_size=1))
    st = compute_stats([run])
    if st.success_count:
        pytest.skip("initial population happened to be feasible")
    row = list(csv.DictReader(io.StringIO(report.sweep_csv(report.sweep_rows([(0.3, "tags", st)])))))[0]
    assert row["first_feasible_generation_mean"] == ""


def test_figures_render(toy_batch, tmp_path):
    p = toy_batch.problem
    best = toy_batch.runs[0].best
    lay = p.decode(best.chromosome.genes, best.selection)
    for name, fig in (
        ("c", plotting.convergence_figure(toy_batch.stats, toy_batch.runs, "t")),
        ("k", plotting.configurations_figure(toy_batch.stats, "t")),
        ("l", plotting.layout_figure(lay, p.container, (), "t")),
    ):
        path = tmp_path / f"{name}.png"
        plotting.save(fig, str(path))
        assert path.read_bytes()[:4] == b"\x89PNG"
