"""Batch command-line front end.

Exit codes: 0 success, 1 partial sweep-cell failure, 2 input/validation
error, 3 numeric/training failure. Every run echoes its resolved
configuration and seed on stderr before doing work.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import io, metrics, protocol, svm
from .backend import backend_name
from .errors import InputError, ParseError, ProtocolError, TrainingError, WisigError

EXIT_OK = 0
EXIT_PARTIAL = 1
EXIT_INPUT = 2
EXIT_TRAINING = 3


def _echo(args: argparse.Namespace, extra: dict | None = None) -> None:
    resolved = {k: v for k, v in sorted(vars(args).items()) if k != "func"}
    if extra:
        resolved.update(extra)
    resolved["backend"] = backend_name()
    print(f"resolved config: {json.dumps(resolved, default=str)}", file=sys.stderr)


def _parse_range(text: str) -> tuple[int, int]:
    try:
        lo, hi = text.split("-", 1)
        return int(lo), int(hi)
    except ValueError as exc:
        raise InputError(f"expected a range like 1-10, got {text!r}") from exc


def _protocol_config(args) -> protocol.ProtocolConfig:
    overrides = {}
    if args.dataset == "synthetic":
        if args.dev_range is None or args.exploit_range is None:
            raise InputError("synthetic dataset needs --dev-range and --exploit-range")
        overrides["development_writers"] = _parse_range(args.dev_range)
        overrides["exploitation_writers"] = _parse_range(args.exploit_range)
    for flag, key in (
        ("m_within", "m_genuine_for_within"),
        ("refs_between", "refs_for_between"),
        ("impostors", "impostors_per_writer"),
        ("reference_size", "reference_size"),
        ("q_genuine", "q_genuine"),
        ("q_simple", "q_simple"),
        ("q_skilled", "q_skilled"),
        ("q_random", "q_random"),
    ):
        value = getattr(args, flag, None)
        if value is not None:
            overrides[key] = value
    if getattr(args, "replications", None) is not None:
        overrides["replications"] = args.replications
    return protocol.config_for(args.dataset, seed=args.seed, **overrides)


def _svm_config(args) -> svm.SvmConfig:
    return svm.SvmConfig(
        gamma=args.gamma,
        c=args.c,
        tolerance=getattr(args, "tolerance", 1e-3),
        max_iterations=getattr(args, "max_iter", None),
    )


def _add_protocol_flags(p, with_replications=True):
    p.add_argument("--dataset", required=True, choices=protocol.DATASET_KINDS)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--dev-range", help="synthetic only, e.g. 11-30")
    p.add_argument("--exploit-range", help="synthetic only, e.g. 1-10")
    p.add_argument("--m-within", type=int, help="genuine signatures per writer for within pairs")
    p.add_argument("--refs-between", type=int)
    p.add_argument("--impostors", type=int)
    p.add_argument("--reference-size", type=int)
    p.add_argument("--q-genuine", type=int)
    p.add_argument("--q-simple", type=int)
    p.add_argument("--q-skilled", type=int)
    p.add_argument("--q-random", type=int)
    if with_replications:
        p.add_argument("--replications", type=int, default=5)


def _add_svm_flags(p):
    p.add_argument("--gamma", type=float, default=svm.DEFAULT_GAMMA)
    p.add_argument("--c", type=float, default=svm.DEFAULT_C)
    p.add_argument("--tolerance", type=float, default=1e-3)
    p.add_argument("--max-iter", type=int, default=None)


def cmd_gen_synthetic(args) -> int:
    _echo(args)
    dataset = protocol.generate_synthetic(
        n_writers=args.writers,
        m_per_writer=args.genuine_per_writer,
        dim=args.dim,
        separation=args.separation,
        skilled_offset=args.skilled_offset,
        n_simple=args.simple_per_writer,
        n_skilled=args.skilled_per_writer,
        rng_seed=args.seed,
    )
    io.save_features(dataset, args.out)
    print(f"wrote {len(dataset.samples)} samples ({args.writers} writers, dim {args.dim}) to {args.out}")
    return EXIT_OK


def cmd_build_learning_set(args) -> int:
    _echo(args)
    dataset = io.load_features(args.features)
    config = _protocol_config(args)
    rng = protocol.substream(args.seed, "learning-set")
    vectors = protocol.build_learning_set(dataset, config, rng)
    n_within = sum(1 for v in vectors if v.klass == "within")
    n_between = len(vectors) - n_within
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write("klass," + ",".join(f"f{i}" for i in range(vectors[0].dim)) + "\n")
            for v in vectors:
                fh.write(v.klass + "," + ",".join(repr(float(x)) for x in v.values) + "\n")
    print(f"within={n_within} between={n_between} total={len(vectors)}")
    return EXIT_OK


def cmd_train(args) -> int:
    _echo(args)
    dataset = io.load_features(args.features)
    config = _protocol_config(args)
    rng = protocol.substream(args.seed, "train", "learning")
    learning_set = protocol.build_learning_set(dataset, config, rng)
    model = svm.train(learning_set, _svm_config(args))
    svm.save_model(model, args.out)
    import numpy as np

    X = np.stack([v.values for v in learning_set])
    y = np.array([1.0 if v.klass == "within" else -1.0 for v in learning_set])
    acc = float(np.mean(np.sign(svm.decision_scores(model, X)) == y))
    print(
        f"model written to {args.out}: {model.n_support} support vectors, "
        f"training accuracy {acc:.4f}"
    )
    return EXIT_OK


def cmd_evaluate(args) -> int:
    _echo(args)
    dataset = io.load_features(args.features)
    model = svm.load_model(args.model)
    if model.dim != dataset.dim:
        raise InputError(f"model dim {model.dim} does not match feature dim {dataset.dim}")
    config = _protocol_config(args)
    result = protocol.run_cell(
        dataset, config, args.fusion, args.n_reference, model.config, model=model
    )
    table = io.render_table([result])
    sys.stdout.write(table)
    if args.out:
        io.write_report([result], args.out, format=args.format)
    return EXIT_OK


def cmd_sweep(args) -> int:
    plan_kv = io.read_plan(args.plan)
    features = args.features or plan_kv.get("features")
    if not features:
        raise InputError("no features file: pass --features or set features= in the plan")
    dataset_kind = plan_kv.get("dataset", "synthetic")
    seed = int(plan_kv.get("seed", 0))
    replications = int(plan_kv.get("replications", 5))
    rules = tuple(
        r.strip() for r in plan_kv.get("fusion_rules", "max").split(",") if r.strip()
    )
    sweep = tuple(
        int(v) for v in plan_kv.get("n_reference_sweep", "").split(",") if v.strip()
    )
    if not sweep or not rules:
        raise InputError("plan must list a nonempty n_reference_sweep and fusion_rules")
    overrides = {"n_reference_sweep": sweep, "replications": replications}
    for key in (
        "m_genuine_for_within",
        "refs_for_between",
        "impostors_per_writer",
        "reference_size",
        "q_genuine",
        "q_simple",
        "q_skilled",
        "q_random",
    ):
        if key in plan_kv:
            overrides[key] = int(plan_kv[key])
    for key in ("development_writers", "exploitation_writers"):
        if key in plan_kv:
            overrides[key] = _parse_range(plan_kv[key])
    config = protocol.config_for(dataset_kind, seed=seed, **overrides)
    svm_config = svm.SvmConfig(
        gamma=float(plan_kv.get("gamma", svm.DEFAULT_GAMMA)),
        c=float(plan_kv.get("c", svm.DEFAULT_C)),
    )
    _echo(args, extra={"plan": plan_kv})
    dataset = io.load_features(features)
    plan = protocol.ExperimentPlan(config=config, fusion_rules=rules, svm_config=svm_config)
    results = []
    failures = []
    for rule, n_ref in plan.cells():
        try:
            results.append(
                protocol.run_cell(dataset, config, rule, n_ref, svm_config)
            )
        except WisigError as exc:
            failures.append((rule, n_ref, str(exc)))
            print(f"cell (rule={rule}, n_reference={n_ref}) failed: {exc}", file=sys.stderr)
    if results:
        sys.stdout.write(io.render_table(results))
        if args.out:
            io.write_report(results, args.out, format=args.format)
    return EXIT_PARTIAL if failures else EXIT_OK


def cmd_report(args) -> int:
    _echo(args)
    rows = io.read_machine_report(args.infile)
    results = []
    for row in rows:
        summary = {
            name: None if row.get(name) is None else (row[name]["mean"], row[name]["std"])
            for name in metrics.METRIC_FIELDS
        }
        results.append(
            protocol.CellResult(
                fusion_rule=row["fusion_rule"],
                n_reference=row["n_reference"],
                reports=(),
                summary=summary,
            )
        )
    table = io.render_table(results)
    sys.stdout.write(table)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(table)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="wisig",
        description="Writer-independent signature verification in dissimilarity space",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen-synthetic", help="generate a synthetic feature CSV")
    p.add_argument("--writers", type=int, required=True)
    p.add_argument("--genuine-per-writer", type=int, required=True)
    p.add_argument("--simple-per-writer", type=int, default=10)
    p.add_argument("--skilled-per-writer", type=int, default=10)
    p.add_argument("--dim", type=int, default=32)
    p.add_argument("--separation", type=float, default=10.0)
    p.add_argument("--skilled-offset", type=float, default=3.0)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_gen_synthetic)

    p = sub.add_parser("build-learning-set", help="build the within/between learning set")
    p.add_argument("--features", required=True)
    _add_protocol_flags(p, with_replications=False)
    p.add_argument("--out")
    p.set_defaults(func=cmd_build_learning_set)

    p = sub.add_parser("train", help="train the writer-independent classifier")
    p.add_argument("--features", required=True)
    _add_protocol_flags(p, with_replications=False)
    _add_svm_flags(p)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_train)

    p = sub.add_parser("evaluate", help="score the questioned set against references")
    p.add_argument("--features", required=True)
    p.add_argument("--model", required=True)
    _add_protocol_flags(p)
    p.add_argument("--fusion", choices=("max", "mean", "median", "min"), default="max")
    p.add_argument("--n-reference", type=int, required=True)
    p.add_argument("--out")
    p.add_argument("--format", choices=("table", "machine"), default="machine")
    p.set_defaults(func=cmd_evaluate)

    p = sub.add_parser("sweep", help="run an experiment plan over rules and reference sizes")
    p.add_argument("--plan", required=True)
    p.add_argument("--features")
    p.add_argument("--out")
    p.add_argument("--format", choices=("table", "machine"), default="machine")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("report", help="render a machine report as a table")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--out")
    p.set_defaults(func=cmd_report)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except TrainingError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_TRAINING
    except (InputError, ParseError, ProtocolError, FileNotFoundError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
