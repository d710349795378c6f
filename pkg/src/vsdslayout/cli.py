"""Command-line front end.

    vsdslayout run       one method, several seeds: convergence CSVs, layout SVGs, summary JSON
    vsdslayout sweep     several occupation rates and methods on the satellite case
    vsdslayout validate  schema check and derived counts for a catalog file

Exit codes: 0 success, 1 configuration or usage error, 2 runtime failure.
Artifacts are assembled in memory and written only once every run has
finished, so a failing command leaves the output directory untouched.
"""

from __future__ import annotations

import argparse
import json
import logging
import math
import os
import sys
from dataclasses import dataclass, field, fields

from . import report
from .catalog import CatalogError, build_gene_layout, load_catalog
from .evolution import METHODS, GAConfig
from .experiments import OCCUPATION_RATES, ProblemInstance, run_batch, satellite_case, satellite_config, toy_case, toy_config
from .geometry import ContainerDisk

log = logging.getLogger("vsdslayout")

PROBLEMS = ("toy", "satellite")
EXIT_OK, EXIT_CONFIG, EXIT_RUNTIME = 0, 1, 2

_GA_FIELDS = {f.name for f in fields(GAConfig)}
_RUN_KEYS = {"problem", "method", "methods", "or", "occupation_rates", "seed", "runs", "out", "catalog", "figures"}

# flag name -> GAConfig field
_FLAG_TO_FIELD = {"pop": "pop_size", "gens": "generations", "pf": "pf", "workers": "workers"}


class ConfigError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_CONFIG, f"{self.prog}: error: {message}\n")


@dataclass
class RunConfig:
    problem: str = "toy"
    methods: list = field(default_factory=lambda: ["tags"])
    occupation_rates: list = field(default_factory=lambda: [0.3])
    seed: int = 0
    runs: int = 1
    out: str = "results"
    catalog: str | None = None
    figures: bool = True
    ga: dict = field(default_factory=dict)

    @property
    def seeds(self) -> list[int]:
        return list(range(self.seed, self.seed + self.runs))

    def validate(self) -> None:
        errs = []
        if self.problem not in PROBLEMS:
            errs.append(f"problem must be one of {', '.join(PROBLEMS)}, got {self.problem!r}")
        if not self.methods:
            errs.append("at least one method is required")
        for m in self.methods:
            if m not in METHODS:
                errs.append(f"unknown method {m!r}; expected one of {', '.join(METHODS)}")
        for r in self.occupation_rates:
            if not (isinstance(r, (int, float)) and 0.0 < r < 1.0):
                errs.append(f"occupation rate must lie in (0, 1), got {r!r}")
        if self.runs < 1:
            errs.append("runs must be >= 1")
        if self.catalog is not None and not os.path.isfile(self.catalog):
            errs.append(f"catalog file not found: {self.catalog}")
        if errs:
            raise ConfigError("; ".join(errs))

    def ga_config(self, method: str) -> GAConfig:
        base = toy_config(method) if self.problem == "toy" else satellite_config()
        try:
            cfg = base.with_(**self.ga)
            cfg.validate()
        except (TypeError, ValueError) as exc:
            raise ConfigError(str(exc)) from None
        return cfg


def _read_config_file(path: str) -> dict:
    try:
        with open(path, encoding="utf-8") as fh:
            doc = json.load(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read config file: {exc}") from None
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config file is not valid JSON: {exc}") from None
    if not isinstance(doc, dict):
        raise ConfigError("config file must hold a JSON object")
    unknown = sorted(set(doc) - _RUN_KEYS - _GA_FIELDS)
    if unknown:
        raise ConfigError(f"unknown config key(s): {', '.join(unknown)}")
    return doc


def _parse_rates(text: str) -> list[float]:
    items = [t for t in text.replace(",", " ").split() if t]
    try:
        return [float(t) for t in items]
    except ValueError:
        raise ConfigError(f"occupation rates must be numbers, got {text!r}") from None


def build_run_config(args, sweep: bool = False) -> RunConfig:
    """Merge defaults, the optional config file and explicit flags (flags win)."""
    rc = RunConfig()
    if sweep:
        rc.problem = "satellite"
        rc.methods = ["tags", "dv-int"]
        rc.occupation_rates = list(OCCUPATION_RATES)
    doc = _read_config_file(args.config) if getattr(args, "config", None) else {}
    for key in ("problem", "seed", "runs", "out", "catalog", "figures"):
        if key in doc:
            setattr(rc, key, doc[key])
    if "method" in doc:
        rc.methods = [doc["method"]]
    if "methods" in doc:
        rc.methods = list(doc["methods"])
    for key in ("or", "occupation_rates"):
        if key in doc:
            v = doc[key]
            rc.occupation_rates = list(v) if isinstance(v, list) else [v]
    rc.ga = {k: v for k, v in doc.items() if k in _GA_FIELDS and k not in _RUN_KEYS}

    if args.problem is not None:
        rc.problem = args.problem
    if args.method:
        rc.methods = list(args.method)
    if getattr(args, "rates", None) is not None:
        rc.occupation_rates = _parse_rates(args.rates)
        if not rc.occupation_rates:
            raise ConfigError("the occupation-rate list is empty")
    for key in ("seed", "runs", "out", "catalog"):
        if getattr(args, key, None) is not None:
            setattr(rc, key, getattr(args, key))
    if args.no_figures:
        rc.figures = False
    for flag, name in _FLAG_TO_FIELD.items():
        v = getattr(args, flag, None)
        if v is not None:
            rc.ga[name] = v
    if getattr(args, "stop_when_feasible", False):
        rc.ga["stop_when_feasible"] = True
    rc.validate()
    return rc


def _problem(rc: RunConfig, rate: float) -> ProblemInstance:
    try:
        if rc.problem == "toy":
            return toy_case(rc.catalog)
        return satellite_case(rate, rc.catalog)
    except CatalogError as exc:
        raise ConfigError("catalog errors: " + "; ".join(exc.errors)) from None
    except ValueError as exc:
        raise ConfigError(str(exc)) from None


def _batch_artifacts(problem: ProblemInstance, method: str, cfg: GAConfig, rc: RunConfig, prefix: str):
    """Run the batch and return ({relative path: bytes}, stats)."""
    batch = run_batch(problem, method, cfg, rc.seeds)
    files: dict[str, bytes] = {}
    zones = problem.constraints.exclusion_zones
    for run in batch.runs:
        s = run.config.seed
        files[f"{prefix}run_seed{s}.csv"] = report.history_csv(run).encode()
        lay = problem.decode(run.best.chromosome.genes, run.best.selection)
        files[f"{prefix}best_layout_seed{s}.svg"] = report.layout_svg(lay, problem.container, zones).encode()
    summary = report.batch_summary(problem, method, batch.runs, batch.stats)
    files[f"{prefix}summary.json"] = report.dumps_json(summary).encode()
    if rc.figures:
        files.update(_figures(problem, batch, prefix))
    return files, batch.stats


def _figures(problem, batch, prefix) -> dict[str, bytes]:
    import io

    from . import plotting

    out = {}
    title = f"{problem.name}, {batch.method}"
    best = batch.runs[batch.stats.best_run].best
    lay = problem.decode(best.chromosome.genes, best.selection)
    for name, fig in (
        ("convergence", plotting.convergence_figure(batch.stats, batch.runs, title)),
        ("configurations", plotting.configurations_figure(batch.stats, title)),
        ("best_layout", plotting.layout_figure(lay, problem.container, problem.constraints.exclusion_zones, title)),
    ):
        buf = io.BytesIO()
        plotting.save(fig, buf)
        out[f"{prefix}figures/{name}.png"] = buf.getvalue()
    return out


def _write_all(root: str, files: dict[str, bytes]) -> None:
    for rel in sorted(files):
        path = os.path.join(root, rel)
        os.makedirs(os.path.dirname(path) or ".", exist_ok=True)
        with open(path, "wb") as fh:
            fh.write(files[rel])


def _or_tag(rate: float) -> str:
    return f"or{round(rate * 100):02d}"


def cmd_run(args) -> int:
    rc = build_run_config(args)
    if len(rc.methods) != 1:
        raise ConfigError("run takes exactly one method; use sweep to compare methods")
    if rc.problem == "satellite" and len(rc.occupation_rates) != 1:
        raise ConfigError("run takes one occupation rate; use sweep for several")
    method = rc.methods[0]
    cfg = rc.ga_config(method)
    problem = _problem(rc, rc.occupation_rates[0])
    files, stats = _batch_artifacts(problem, method, cfg, rc, "")
    _write_all(rc.out, files)
    best = stats.best_objective
    print(f"{problem.name} {method}: {stats.success_count}/{stats.n_runs} runs feasible, "
          f"best objective {best:.6g}" if math.isfinite(best) else
          f"{problem.name} {method}: no feasible layout in {stats.n_runs} run(s)")
    print(f"wrote {len(files)} file(s) to {rc.out}")
    return EXIT_OK


def cmd_sweep(args) -> int:
    rc = build_run_config(args, sweep=True)
    if rc.problem != "satellite":
        raise ConfigError("sweep varies the occupation rate and needs --problem satellite")
    if not rc.occupation_rates:
        raise ConfigError("the occupation-rate list is empty")
    cfgs = {m: rc.ga_config(m) for m in rc.methods}
    problems = {r: _problem(rc, r) for r in rc.occupation_rates}
    files: dict[str, bytes] = {}
    entries = []
    for rate in rc.occupation_rates:
        for m in rc.methods:
            f, st = _batch_artifacts(problems[rate], m, cfgs[m], rc, f"{_or_tag(rate)}/{m}/")
            files.update(f)
            entries.append((rate, m, st))
            log.info("%s %s done", _or_tag(rate), m)
    rows = report.sweep_rows(entries)
    files["sweep_summary.csv"] = report.sweep_csv(rows).encode()
    files["sweep_summary.json"] = report.dumps_json(rows).encode()
    _write_all(rc.out, files)
    print(report.sweep_csv(rows), end="")
    print(f"wrote {len(files)} file(s) to {rc.out}")
    return EXIT_OK


def cmd_validate(args) -> int:
    try:
        cat = load_catalog(args.catalog)
    except OSError as exc:
        print(f"error: cannot read {args.catalog}: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except CatalogError as exc:
        print(f"{args.catalog}: {len(exc.errors)} error(s)", file=sys.stderr)
        for e in exc.errors:
            print(f"  - {e}", file=sys.stderr)
        return EXIT_CONFIG
    layout = build_gene_layout(cat, cat.container_radius or 1.0, "cartesian")
    print(f"catalog: {cat.name or args.catalog}")
    print(f"components: {len(cat)}")
    print(f"configurations: {cat.space.size}, genes: {layout.length}")
    print(f"total area: {cat.total_area:.6g}")
    print(f"total mass: {cat.total_mass:.6g}")
    if cat.container_radius is not None:
        c = ContainerDisk(cat.container_radius)
        print(f"container radius: {c.outer_radius:.6g}, occupation rate: {cat.total_area / c.area:.6g}")
    return EXIT_OK


def _add_common(p: argparse.ArgumentParser, sweep: bool) -> None:
    p.add_argument("--config", help="JSON file with run settings and GA fields; flags override it")
    p.add_argument("--problem", choices=PROBLEMS)
    if sweep:
        p.add_argument("--method", action="append", choices=tuple(METHODS),
                       help="repeat to compare methods (default: tags and dv-int)")
        p.add_argument("--or", dest="rates", metavar="RATES",
                       help="comma separated occupation rates (default: "
                            + ",".join(str(r) for r in OCCUPATION_RATES) + ")")
    else:
        p.add_argument("--method", action="append", choices=tuple(METHODS))
        p.add_argument("--or", dest="rates", metavar="RATE", help="occupation rate for the satellite case")
    p.add_argument("--pop", type=int, help="population size")
    p.add_argument("--gens", type=int, help="number of generations")
    p.add_argument("--runs", type=int, help="number of seeds, starting at --seed")
    p.add_argument("--seed", type=int, help="first seed")
    p.add_argument("--pf", type=float, help="stochastic-ranking objective-comparison probability")
    p.add_argument("--workers", type=int, help="evaluation threads (results do not depend on it)")
    p.add_argument("--catalog", help="catalog JSON replacing the built-in one")
    p.add_argument("--out", help="output directory")
    p.add_argument("--stop-when-feasible", action="store_true", help="end each run at its first feasible layout")
    p.add_argument("--no-figures", action="store_true", help="skip the PNG figures")


def make_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="vsdslayout", description="Hidden-gene GA for variable-size layout problems.")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    p = sub.add_parser("run", help="run one method over several seeds")
    _add_common(p, sweep=False)
    p.set_defaults(func=cmd_run)
    p = sub.add_parser("sweep", help="compare methods across occupation rates")
    _add_common(p, sweep=True)
    p.set_defaults(func=cmd_sweep)
    p = sub.add_parser("validate", help="check a catalog file and print derived counts")
    p.add_argument("catalog")
    p.set_defaults(func=cmd_validate)
    return parser


def main(argv=None) -> int:
    args = make_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(message)s")
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except Exception as exc:  # noqa: BLE001
        log.debug("runtime failure", exc_info=True)
        print(f"runtime failure: {exc}", file=sys.stderr)
        return EXIT_RUNTIME


if __name__ == "__main__":
    sys.exit(main())
