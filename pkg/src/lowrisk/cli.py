"""Command-line interface: extract, train, predict, evaluate.

Every run writes its effective configuration next to (or inside) its output
artifacts, so any result can be reproduced from the artifact alone. Data
goes to files; diagnostics go to stderr.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

from lowrisk import dataset as ds
from lowrisk.classifier import LfrClassifier, Variant
from lowrisk.discretize import VOCABULARY, DiscretizationModel, itemize
from lowrisk.errors import LowriskError, VocabularyMismatchError
from lowrisk.evaluation import (
    PredictionRow,
    emit_report,
    evaluate_cross_project,
    evaluate_within_project,
    write_prediction_dump,
)
from lowrisk.java.analyzer import analyze_source, iter_java_files
from lowrisk.mining import MiningConfig
from lowrisk.pipeline import PipelineConfig, train_on

_CONFIG_KEYS = {
    "min_support": float,
    "min_confidence": float,
    "max_antecedent_len": int,
    "smote_over": int,
    "smote_under": int,
    "smote_k": int,
    "no_smote": bool,
    "budget_strict": float,
    "budget_lenient": float,
    "folds": int,
    "seed": int,
}


def _add_config_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--config", type=Path, help="JSON config file; flags override it")
    parser.add_argument("--min-support", type=float, dest="min_support")
    parser.add_argument("--min-confidence", type=float, dest="min_confidence")
    parser.add_argument("--max-antecedent-len", type=int, dest="max_antecedent_len")
    parser.add_argument("--smote-over", type=int, dest="smote_over")
    parser.add_argument("--smote-under", type=int, dest="smote_under")
    parser.add_argument("--smote-k", type=int, dest="smote_k")
    parser.add_argument("--no-smote", action="store_const", const=True, dest="no_smote")
    parser.add_argument("--budget-strict", type=float, dest="budget_strict")
    parser.add_argument("--budget-lenient", type=float, dest="budget_lenient")
    parser.add_argument("--folds", type=int, dest="folds")
    parser.add_argument("--seed", type=int, dest="seed")


def _pipeline_config(args: argparse.Namespace) -> PipelineConfig:
    """Defaults, overridden by the config file, overridden by explicit flags."""
    values: dict = {}
    if args.config:
        try:
            values.update(json.loads(args.config.read_text(encoding="utf-8")))
        except (OSError, json.JSONDecodeError) as exc:
            raise LowriskError(f"cannot read config file {args.config}: {exc}")
        unknown = set(values) - set(_CONFIG_KEYS)
        if unknown:
            raise LowriskError(f"unknown config key(s): {', '.join(sorted(unknown))}")
    for key in _CONFIG_KEYS:
        flag_value = getattr(args, key, None)
        if flag_value is not None:
            values[key] = flag_value
    mining_kwargs = {
        k: values.pop(k)
        for k in ("min_support", "min_confidence", "max_antecedent_len")
        if k in values
    }
    return PipelineConfig(mining=MiningConfig(**mining_kwargs), **values)


def _write_run_sidecar(out_path: Path, payload: dict) -> None:
    sidecar = out_path.with_suffix(out_path.suffix + ".run.json")
    sidecar.write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n", encoding="utf-8")


# -- extract ----------------------------------------------------------------


def _analyze_one_file(job: tuple[str, str, str]) -> tuple:
    root, rel, project = job
    text = (Path(root) / rel).read_text(encoding="utf-8")
    analyzed, skipped = analyze_source(text, rel, project)
    return rel, analyzed, skipped


def cmd_extract(args: argparse.Namespace) -> int:
    root = Path(args.root)
    if not root.is_dir():
        print(f"error: source root {root} is not a directory", file=sys.stderr)
        return 1
    include = args.include or ["**/*.java"]
    for pattern in include + (args.exclude or []):
        if not pattern or pattern.startswith(("/", "\\")):
            print(f"usage error: invalid glob pattern {pattern!r}", file=sys.stderr)
            return 2
    try:
        files = iter_java_files(root, include, args.exclude or [])
    except (ValueError, NotImplementedError) as exc:
        print(f"usage error: invalid glob pattern: {exc}", file=sys.stderr)
        return 2
    if not files:
        print("warning: no Java files matched; writing an empty dataset", file=sys.stderr)
    jobs = [(str(root), p.relative_to(root).as_posix(), args.project) for p in files]
    failures: list[tuple[str, str]] = []
    skipped_methods: list[str] = []
    methods = []
    results = []
    if args.jobs > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            for job, outcome in zip(jobs, pool.map(_try_analyze, jobs)):
                results.append((job[1], outcome))
    else:
        results = [(job[1], _try_analyze(job)) for job in jobs]
    for rel, outcome in results:
        if isinstance(outcome, str):
            failures.append((rel, outcome))
            continue
        _, analyzed, skipped = outcome
        methods.extend(analyzed)
        skipped_methods.extend(
            f"{s.identity.file_path}:{s.identity.type_name}.{s.identity.method_name}: {s.reason}"
            for s in skipped
        )
    methods.sort(key=lambda m: m.identity)

    faulty_keys = ds.read_label_file(args.labels) if args.labels else set()
    records = []
    for m in methods:
        faulty = m.identity.key() in faulty_keys
        records.append(
            ds.MethodRecord(
                m.identity,
                m.metrics,
                m.categories,
                faulty=faulty,
                snapshot=ds.Snapshot.FAULTY if faulty else ds.Snapshot.CURRENT,
            )
        )
    out = Path(args.out)
    ds.write_csv(records, out)
    for rel, message in failures:
        print(f"skipped (parse error): {rel}: {message}", file=sys.stderr)
    for line in skipped_methods:
        print(f"skipped (method): {line}", file=sys.stderr)
    _write_run_sidecar(
        out,
        {
            "command": "extract",
            "root": str(root),
            "project": args.project,
            "include": include,
            "exclude": args.exclude or [],
            "labels": str(args.labels) if args.labels else None,
            "files_analyzed": len(files) - len(failures),
            "parse_failures": [list(f) for f in failures],
            "skipped_methods": skipped_methods,
            "methods": len(records),
        },
    )
    print(f"wrote {len(records)} method records to {out}", file=sys.stderr)
    return 0


def _try_analyze(job: tuple[str, str, str]):
    try:
        return _analyze_one_file(job)
    except (LowriskError, UnicodeDecodeError) as exc:
        return str(exc)


# -- train -------------------------------------------------------------------


def _load_projects(paths) -> dict[str, list[ds.UnifiedMethod]]:
    records = []
    for path in paths:
        records.extend(ds.read_csv(path))
    datasets: dict[str, list] = {}
    for rec in records:
        datasets.setdefault(rec.identity.project, []).append(rec)
    return {name: ds.build_unified(rows) for name, rows in sorted(datasets.items())}


def cmd_train(args: argparse.Namespace) -> int:
    config = _pipeline_config(args)
    datasets = _load_projects(args.csv)
    methods = [m for name in sorted(datasets) for m in datasets[name]]
    trained = train_on(methods, config, scope=("train",))
    payload = {
        "discretization": trained.discretization.to_json(),
        "vocabulary": list(VOCABULARY),
        "mining_config": config.mining.to_json(),
        "rules": [r.to_json() for r in trained.rules],
        "variants": {
            variant.value: {"budget": clf.budget, "n": clf.n}
            for variant, clf in trained.classifiers.items()
        },
        "training_meta": trained.meta,
        "run_config": config.to_json(),
    }
    out = Path(args.out)
    out.write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n", encoding="utf-8")
    trained.discretization.save(out.with_suffix(".discretization.json"))
    print(
        f"trained on {len(methods)} methods; {len(trained.rules)} rules; "
        f"n_strict={trained.classifiers[Variant.STRICT].n} "
        f"n_lenient={trained.classifiers[Variant.LENIENT].n}",
        file=sys.stderr,
    )
    return 0


# -- predict -----------------------------------------------------------------


def _classifier_from_payload(payload: dict, variant: Variant) -> tuple[DiscretizationModel, LfrClassifier]:
    if tuple(payload.get("vocabulary", ())) != VOCABULARY:
        raise VocabularyMismatchError(
            "classifier file was built with a different item vocabulary"
        )
    model = DiscretizationModel.from_json(payload["discretization"])
    entry = payload["variants"][variant.value]
    clf = LfrClassifier.from_json(
        {
            "rules": payload["rules"],
            "n": entry["n"],
            "variant": variant.value,
            "budget": entry["budget"],
            "vocabulary": payload["vocabulary"],
            "training_meta": payload.get("training_meta", {}),
        }
    )
    return model, clf


def cmd_predict(args: argparse.Namespace) -> int:
    payload = json.loads(Path(args.classifier).read_text(encoding="utf-8"))
    variant = Variant(args.variant)
    model, clf = _classifier_from_payload(payload, variant)
    methods = [m for _, rows in _load_projects([args.target]).items() for m in rows]
    rows = []
    for m in methods:
        idx = clf.matched_rule_index(itemize(m, model))
        ident = m.identity
        rows.append(
            PredictionRow(
                project=ident.project,
                file_path=ident.file_path,
                type_name=ident.type_name,
                method_name=ident.method_name,
                param_signature=";".join(ident.param_signature),
                variant=variant.value,
                predicted_lfr=idx is not None,
                faulty=m.faulty,
                matched_rule_index=idx,
            )
        )
    out = Path(args.out)
    write_prediction_dump(rows, out)
    _write_run_sidecar(
        out,
        {
            "command": "predict",
            "classifier": str(args.classifier),
            "variant": variant.value,
            "target": str(args.target),
            "methods": len(rows),
            "predicted_lfr": sum(1 for r in rows if r.predicted_lfr),
        },
    )
    print(f"wrote {len(rows)} predictions to {out}", file=sys.stderr)
    return 0


# -- evaluate ----------------------------------------------------------------


def _eval_within_worker(item):
    name, methods, config = item
    reports, dump = evaluate_within_project(methods, name, config)
    return name, list(reports.values()), dump


def _eval_cross_worker(item):
    datasets, target, config = item
    reports, dump = evaluate_cross_project(datasets, target, config)
    return target, list(reports.values()), dump


def cmd_evaluate(args: argparse.Namespace) -> int:
    config = _pipeline_config(args)
    datasets = _load_projects(args.csv)
    if args.mode == "cross" and len(datasets) < 2:
        print("error: cross-project evaluation needs at least 2 projects", file=sys.stderr)
        return 1
    names = sorted(datasets)
    if args.mode == "within":
        items = [(name, datasets[name], config) for name in names]
        worker = _eval_within_worker
    else:
        items = [(datasets, target, config) for target in names]
        worker = _eval_cross_worker
    results = []
    if args.jobs > 1 and len(items) > 1:
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            results = list(pool.map(worker, items))
    else:
        results = [worker(item) for item in items]
    results.sort(key=lambda r: r[0])
    reports = [rep for _, reps, _ in results for rep in reps]
    dump = [row for _, _, rows in results for row in rows]

    out_dir = Path(args.out_dir)
    formats = [f.strip() for f in args.formats.split(",") if f.strip()]
    written = emit_report(reports, out_dir, mode=args.mode, config=config, formats=formats)
    if args.dump_predictions:
        dump_path = out_dir / "predictions.csv"
        write_prediction_dump(dump, dump_path)
        written.append(dump_path)
    _write_run_sidecar(
        out_dir / "report",
        {
            "command": "evaluate",
            "mode": args.mode,
            "inputs": [str(p) for p in args.csv],
            "projects": names,
            "config": config.to_json(),
        },
    )
    for path in written:
        print(f"wrote {path}", file=sys.stderr)
    return 0


# -- entry point ---------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="lowrisk",
        description="Identify low-fault-risk Java methods from code metrics.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("extract", help="compute method metrics from a Java source tree")
    p.add_argument("--root", required=True, help="project root directory")
    p.add_argument("--project", required=True, help="project name recorded in the CSV")
    p.add_argument("--include", action="append", help="glob pattern (repeatable)")
    p.add_argument("--exclude", action="append", help="glob pattern (repeatable)")
    p.add_argument("--labels", type=Path, help="fault-label CSV keyed by identity columns")
    p.add_argument("--out", required=True, type=Path, help="output metrics CSV")
    p.add_argument("--jobs", type=int, default=os.cpu_count() or 1)
    p.set_defaults(func=cmd_extract)

    p = sub.add_parser("train", help="train strict and lenient classifiers from metrics CSVs")
    p.add_argument("csv", nargs="+", type=Path, help="labeled metrics CSV(s)")
    p.add_argument("--out", required=True, type=Path, help="output classifier JSON")
    _add_config_flags(p)
    p.set_defaults(func=cmd_train)

    p = sub.add_parser("predict", help="classify methods of a target CSV")
    p.add_argument("--classifier", required=True, type=Path)
    p.add_argument("--variant", choices=[v.value for v in Variant], default="strict")
    p.add_argument("--target", required=True, type=Path)
    p.add_argument("--out", required=True, type=Path)
    p.set_defaults(func=cmd_predict)

    p = sub.add_parser("evaluate", help="within-project CV or cross-project evaluation")
    p.add_argument("csv", nargs="+", type=Path, help="labeled metrics CSV(s)")
    p.add_argument("--mode", choices=["within", "cross"], required=True)
    p.add_argument("--out-dir", required=True, type=Path)
    p.add_argument("--formats", default="csv,json", help="comma list: csv,json,markdown-table")
    p.add_argument("--dump-predictions", action="store_true")
    p.add_argument("--jobs", type=int, default=os.cpu_count() or 1)
    _add_config_flags(p)
    p.set_defaults(func=cmd_evaluate)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except LowriskError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (OSError, json.JSONDecodeError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
