"""Command-line entry point: gen, train, bench, eval, envelope.

Exit codes: 0 success, 2 usage or validation error, 1 runtime failure.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
from pathlib import Path

from . import __version__
from .bench import BenchMatrix, format_table, improvements, run_matrix
from .core import PAPER_GRID, CostPair, Ensemble, InputError
from .data import SynthSpec, gen_synth, load_csv, load_spec, save_csv, tomllib
from .evaluate import (CostLine, GaussianScenario, bayes_classifier, kfold_eval, lower_envelope,
                       rates, rates_from_predictions)
from .train import ALGOS, TrainConfig, run


def parse_costs(text: str) -> tuple[CostPair, ...]:
    """``paper-grid`` or a comma list of ``p:n`` ratios, e.g. ``1:10,1:1,10:1``."""
    if text == "paper-grid":
        return PAPER_GRID
    out = []
    for item in text.split(","):
        parts = item.strip().split(":")
        if len(parts) != 2:
            raise InputError(f"cost {item!r} is not of the form p:n")
        out.append(CostPair.from_ratio(*parts))
    if not out:
        raise InputError("empty cost list")
    return tuple(out)


def parse_thresholds(text: str):
    if text == "all-midpoints":
        return text
    try:
        k = int(text)
    except ValueError:
        raise InputError(f"--thresholds must be 'all-midpoints' or an integer, got {text!r}") from None
    if k < 1:
        raise InputError("--thresholds must be >= 1")
    return k


def _costs_of(args) -> tuple[CostPair, ...]:
    if getattr(args, "costs", None):
        return parse_costs(args.costs)
    return (CostPair.from_ratio(args.cp, args.cn),)


def _write_csv(path: Path, header, rows) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        w.writerows(rows)


def _load_ensemble(path) -> Ensemble:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise InputError(f"cannot read model {path}: {exc}") from exc
    try:
        return Ensemble.from_json(text)
    except ValueError as exc:
        raise InputError(f"bad model file {path}: {exc}") from exc


def _load_data(args):
    return load_csv(args.data, args.label_column, args.positive_label)


# -- commands -------------------------------------------------------------

def cmd_gen(args) -> int:
    spec = load_spec(args.config) if args.config else SynthSpec(
        args.kind, args.n_pos, args.n_neg, args.seed, {}, args.angles)
    ds, pts = gen_synth(spec)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    save_csv(ds, out / "data.csv")
    _write_csv(out / "points.csv", ["x", "y", "label"],
               [[repr(float(p[0])), repr(float(p[1])), int(y)] for p, y in zip(pts, ds.labels)])
    (out / "spec.json").write_text(json.dumps({
        "kind": spec.kind, "n_pos": spec.n_pos, "n_neg": spec.n_neg, "seed": spec.seed,
        "params": spec.params, "n_angles": spec.n_angles, "prng": "numpy PCG64",
    }, indent=2) + "\n", encoding="utf-8")
    return 0


def cmd_train(args) -> int:
    ds = _load_data(args)
    cfg = TrainConfig(CostPair.from_ratio(args.cp, args.cn), args.rounds,
                      parse_thresholds(args.thresholds), args.seed, args.algo, args.init)
    rec = run(ds, cfg)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    (out / "ensemble.json").write_text(rec.ensemble.to_json() + "\n", encoding="utf-8")
    (out / "record.json").write_text(rec.to_json() + "\n", encoding="utf-8")
    with open(out / "record.csv", "w", newline="", encoding="utf-8") as fh:
        fh.write(rec.to_csv())
    print(f"{args.algo} {cfg.cost}: {len(rec.per_round)} rounds, "
          f"{rec.roots_computed} roots, {rec.wall_nanos / 1e9:.3f} s")
    return 0


def _bench_matrix(args) -> BenchMatrix:
    conf = {}
    if args.config:
        p = Path(args.config)
        try:
            raw = p.read_bytes()
            conf = tomllib.loads(raw.decode()) if p.suffix == ".toml" else json.loads(raw)
        except OSError as exc:
            raise InputError(f"cannot read config {p}: {exc}") from exc
        except ValueError as exc:
            raise InputError(f"cannot parse config {p}: {exc}") from exc
        conf = conf.get("bench", conf)
    costs = conf.get("costs", args.costs or "paper-grid")
    if isinstance(costs, str):
        costs = parse_costs(costs)
    else:
        costs = tuple(CostPair.from_ratio(*c) for c in costs)
    datasets = tuple(conf.get("datasets", ())) + tuple(args.data or ())
    if not datasets:
        datasets = ({"kind": "bayes", "seed": args.seed},)
    algos = conf.get("algos", args.algos.split(","))
    return BenchMatrix(
        algos=tuple(algos), costs=costs, datasets=datasets,
        repeats=int(conf.get("repeats", args.repeats)),
        rounds=int(conf.get("rounds", args.rounds)),
        thresholds=parse_thresholds(str(conf.get("thresholds", args.thresholds))),
        positive_label=str(conf.get("positive_label", args.positive_label)),
    )


def cmd_bench(args) -> int:
    m = _bench_matrix(args)
    results = run_matrix(m, args.workers, args.sequential_timing)
    impr = improvements(results)
    header = {"tool": f"adaboostdb {__version__}", "seed": args.seed,
              "config_hash": m.config_hash(), "rounds": m.rounds, "repeats": m.repeats,
              "thresholds": m.thresholds}
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    _write_csv(out / "bench.csv",
               ["dataset", "algo", "cost", "rounds_done", "roots_computed", "median_seconds", "error"],
               [[r.dataset, r.algo, r.cost, r.rounds_done, r.roots_computed,
                 repr(r.median_seconds), r.error] for r in results])
    _write_csv(out / "improvements.csv", ["dataset", "improvement", "zeros_pct", "time_pct"],
               [[r["dataset"], r["improvement"], repr(r["zeros_pct"]), repr(r["time_pct"])]
                for r in impr])
    (out / "provenance.json").write_text(
        json.dumps({**header, "matrix": m.describe()}, indent=2, default=str) + "\n", encoding="utf-8")
    table = format_table(results, impr, header)
    (out / "bench.txt").write_text(table, encoding="utf-8")
    sys.stdout.write(table)
    if all(r.error for r in results):
        print("every bench cell failed", file=sys.stderr)
        return 1
    return 0


RATE_HEADER = ["cost", "fn", "fp", "ce", "nec"]


def _rate_row(cost, rp):
    return [cost.label, repr(rp.fn_rate), repr(rp.fp_rate), repr(rp.ce), repr(rp.nec)]


def cmd_eval(args) -> int:
    ds = _load_data(args)
    costs = _costs_of(args)
    rows = []
    if args.model:
        ens = _load_ensemble(args.model)
        rows = [_rate_row(c, rates(ens, ds, c)) for c in costs]
    else:
        for c in costs:
            cfg = TrainConfig(c, args.rounds, parse_thresholds(args.thresholds), args.seed,
                              args.algo, args.init)
            rows.append(_rate_row(c, kfold_eval(ds, cfg, args.folds, args.seed)))
    _write_csv(Path(args.out), RATE_HEADER, rows)
    return 0


def cmd_envelope(args) -> int:
    ds = _load_data(args)
    families: dict[str, list[CostLine]] = {}
    for spec in args.family or ():
        name, _, paths = spec.partition("=")
        if not paths:
            raise InputError(f"--family expects name=model1.json,model2.json, got {spec!r}")
        members = [p for p in paths.split(",") if p]
        if not members:
            raise InputError(f"family {name!r} is empty")
        families[name] = [CostLine.of(rates(e, ds, e.cost)) for e in map(_load_ensemble, members)]
    if args.bayes:
        sc = GaussianScenario.from_params(load_spec(args.bayes).params, ds.pos_count / ds.n)
        lines = []
        for c in _costs_of(args):
            pred = bayes_classifier(sc, c).predict_features(ds.features, ds.d)
            lines.append(CostLine.of(rates_from_predictions(pred, ds.labels, c)))
        families["bayes"] = lines
    if not families:
        raise InputError("envelope needs at least one nonempty family")
    envs = {k: lower_envelope(v, args.grid) for k, v in families.items()}
    names = list(envs)
    rows = [[repr(envs[names[0]][i][0])] + [repr(envs[k][i][1]) for k in names]
            for i in range(args.grid + 1)]
    _write_csv(Path(args.out), ["pcf"] + names, rows)
    return 0


# -- parser ---------------------------------------------------------------

def _add_data(p):
    p.add_argument("data", help="CSV file (features then label by default)")
    p.add_argument("--label-column", default="last")
    p.add_argument("--positive-label", default="1")


def _add_train_opts(p):
    p.add_argument("--algo", choices=ALGOS, default="db")
    p.add_argument("--rounds", type=int, default=100)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--thresholds", default="all-midpoints",
                   help="'all-midpoints' or thresholds per feature")
    p.add_argument("--init", choices=("default", "uniform", "balanced"), default="default")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="adaboostdb", description=__doc__.splitlines()[0])
    ap.add_argument("--version", action="version", version=__version__)
    sub = ap.add_subparsers(dest="cmd", required=True)

    p = sub.add_parser("gen", help="generate a synthetic dataset")
    p.add_argument("config", nargs="?", help="TOML/JSON synthetic spec")
    p.add_argument("--kind", choices=("bayes", "twoclouds"), default="bayes")
    p.add_argument("--n-pos", type=int, default=500)
    p.add_argument("--n-neg", type=int, default=500)
    p.add_argument("--angles", type=int, default=16)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True, help="output directory")
    p.set_defaults(fn=cmd_gen)

    p = sub.add_parser("train", help="train one ensemble")
    _add_data(p)
    _add_train_opts(p)
    p.add_argument("--cp", default="1")
    p.add_argument("--cn", default="1")
    p.add_argument("--out", required=True, help="output directory")
    p.set_defaults(fn=cmd_train)

    p = sub.add_parser("bench", help="run the algorithm x cost x dataset matrix")
    p.add_argument("config", nargs="?", help="TOML/JSON matrix config")
    p.add_argument("--data", action="append", help="CSV dataset (repeatable)")
    p.add_argument("--positive-label", default="1")
    p.add_argument("--algos", default="cs,db_nocs,db")
    p.add_argument("--costs", default=None, help="paper-grid or p:n list")
    p.add_argument("--rounds", type=int, default=100)
    p.add_argument("--repeats", type=int, default=1)
    p.add_argument("--thresholds", default="all-midpoints")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--sequential-timing", action="store_true",
                   help="run cells one at a time for clean timings")
    p.add_argument("--out", required=True, help="output directory")
    p.set_defaults(fn=cmd_bench)

    p = sub.add_parser("eval", help="rates of a model, or k-fold CV per cost")
    _add_data(p)
    _add_train_opts(p)
    p.add_argument("--model", help="ensemble JSON; omit for k-fold CV")
    p.add_argument("--folds", type=int, default=3)
    p.add_argument("--costs", default=None)
    p.add_argument("--cp", default="1")
    p.add_argument("--cn", default="1")
    p.add_argument("--out", required=True, help="output CSV")
    p.set_defaults(fn=cmd_eval)

    p = sub.add_parser("envelope", help="lower envelopes of classifier families")
    _add_data(p)
    p.add_argument("--family", action="append", help="name=model1.json,model2.json")
    p.add_argument("--bayes", help="synthetic spec whose Bayes rules form a family")
    p.add_argument("--costs", default="paper-grid")
    p.add_argument("--grid", type=int, default=1000)
    p.add_argument("--out", required=True, help="output CSV")
    p.set_defaults(fn=cmd_envelope)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except Exception as exc:
        print(f"runtime failure: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
