"""Command-line interface.

Subcommands:

* ``run``         - full experiment from a config file
* ``train``       - train one network on one split
* ``prune``       - weight-eliminate and node-prune a trained network
* ``eval``        - accuracy of a saved network on a chosen split
* ``export-dot``  - DOT rendering of a saved network
* ``gradcheck``   - finite-difference verification of the gradients
* ``synth-data``  - write the stand-in benchmark files
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import replace
from pathlib import Path

import numpy as np

from . import synth
from .data import SPECS, load_bundle
from .errors import ConfigurationError, DatasetError, DivergenceError, ParseError, ShapeError
from .harness import export_dot, load_config, run_experiment
from .network import NetworkConfig, deserialize, init_network, serialize
from .objective import PenaltyParams, finite_diff_check
from .pruning import PruneParams, eliminate_weights, prune_dead_hidden, prune_dead_inputs
from .training import TrainParams, accuracy, train

GRADCHECK_TOLERANCE = 1e-5


def _add_data_args(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--dataset", required=True, choices=sorted(SPECS))
    parser.add_argument("--data", required=True, type=Path, help="benchmark data file")
    parser.add_argument("--split-seed", type=int, default=1)


def _add_penalty_args(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--eps1", type=float, default=0.1)
    parser.add_argument("--eps2", type=float, default=1e-5)
    parser.add_argument("--beta", type=float, default=10.0)


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="nnprune",
        description="Train, simplify, and inspect small feedforward classifiers.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="run an experiment from a config file")
    p_run.add_argument("--config", required=True, type=Path)
    p_run.add_argument("--jobs", type=int, default=1)
    p_run.add_argument("--out", type=Path, default=None, help="override output_dir")

    p_train = sub.add_parser("train", help="train a fresh network on one split")
    _add_data_args(p_train)
    _add_penalty_args(p_train)
    p_train.add_argument("--hidden", type=int, default=3)
    p_train.add_argument("--epochs", type=int, default=500)
    p_train.add_argument("--lr", type=float, default=0.1)
    p_train.add_argument("--init-range", type=float, default=1.0)
    p_train.add_argument("--seed", type=int, default=1, help="weight init seed")
    p_train.add_argument("--out", required=True, type=Path, help="network JSON output")
    p_train.add_argument(
        "--trace", type=Path, default=None,
        help="write per-epoch CSV telemetry: epoch,objective,train_accuracy",
    )

    p_prune = sub.add_parser("prune", help="simplify a trained network")
    _add_data_args(p_prune)
    _add_penalty_args(p_prune)
    p_prune.add_argument("--net", required=True, type=Path)
    p_prune.add_argument("--eta1", type=float, default=0.35)
    p_prune.add_argument("--eta2", type=float, default=0.10)
    p_prune.add_argument("--tolerance", type=float, default=0.02)
    p_prune.add_argument("--retrain-epochs", type=int, default=100)
    p_prune.add_argument("--lr", type=float, default=0.1)
    p_prune.add_argument("--out", required=True, type=Path)
    p_prune.add_argument("--trace-out", type=Path, default=None, help="JSONL audit log")

    p_eval = sub.add_parser("eval", help="accuracy of a saved network")
    _add_data_args(p_eval)
    p_eval.add_argument("--net", required=True, type=Path)
    p_eval.add_argument(
        "--split", choices=("train", "validation", "test"), default="test"
    )

    p_dot = sub.add_parser("export-dot", help="DOT rendering of a saved network")
    p_dot.add_argument("--net", required=True, type=Path)
    p_dot.add_argument("--out", type=Path, default=None, help="default: stdout")

    p_grad = sub.add_parser("gradcheck", help="finite-difference gradient check")
    p_grad.add_argument("--seed", type=int, default=42)
    p_grad.add_argument("--step", type=float, default=1e-6)
    p_grad.add_argument("--arch", default="9-3-2", help="architecture, e.g. 9-3-2")
    p_grad.add_argument("--examples", type=int, default=10)

    p_synth = sub.add_parser("synth-data", help="write stand-in benchmark files")
    p_synth.add_argument("--out", required=True, type=Path)
    p_synth.add_argument("--seed", type=int, default=synth.DEFAULT_SEED)

    return parser


def _cmd_run(args) -> int:
    config = load_config(args.config)
    if args.out is not None:
        config = replace(config, output_dir=args.out)
    report = run_experiment(config, jobs=args.jobs)
    sys.stdout.write(report.to_text())
    print(f"report written to {Path(config.output_dir) / 'report.json'}")
    return 0


def _cmd_train(args) -> int:
    spec = SPECS[args.dataset]
    bundle = load_bundle(args.data, spec, args.split_seed)
    config = NetworkConfig(
        n_inputs=spec.n_attributes,
        n_hidden=args.hidden,
        n_outputs=spec.n_classes,
        init_range=args.init_range,
        seed=args.seed,
    )
    tparams = TrainParams(learning_rate=args.lr, epochs=args.epochs)
    penalty = PenaltyParams(eps1=args.eps1, eps2=args.eps2, beta=args.beta)
    net, records = train(init_network(config), bundle.train, tparams, penalty)
    args.out.write_text(serialize(net) + "\n", encoding="utf-8")
    if args.trace is not None:
        with args.trace.open("w", encoding="utf-8") as fh:
            fh.write("epoch,objective,train_accuracy\n")
            for r in records:
                fh.write(f"{r.epoch},{r.objective_value!r},{r.train_accuracy!r}\n")
    print(
        f"trained {config.n_inputs}-{config.n_hidden}-{config.n_outputs}: "
        f"train acc {accuracy(net, bundle.train):.5f}, "
        f"validation acc {accuracy(net, bundle.validation):.5f}"
    )
    return 0


def _cmd_prune(args) -> int:
    spec = SPECS[args.dataset]
    bundle = load_bundle(args.data, spec, args.split_seed)
    net = deserialize(args.net.read_text(encoding="utf-8"))
    tparams = TrainParams(learning_rate=args.lr, epochs=0)
    penalty = PenaltyParams(eps1=args.eps1, eps2=args.eps2, beta=args.beta)
    params = PruneParams(
        eta1=args.eta1,
        eta2=args.eta2,
        accuracy_drop_tolerance=args.tolerance,
        retrain_max_epochs=args.retrain_epochs,
    )
    pruned, trace = eliminate_weights(net, bundle, tparams, penalty, params)
    pruned, _ = prune_dead_hidden(pruned)
    pruned, _ = prune_dead_inputs(pruned)
    args.out.write_text(serialize(pruned) + "\n", encoding="utf-8")
    if args.trace_out is not None:
        args.trace_out.write_text(trace.to_jsonl(), encoding="utf-8")
    print(
        f"pruned to {pruned.architecture(active_only=True)} "
        f"({pruned.n_unmasked()} connections), "
        f"validation acc {accuracy(pruned, bundle.validation):.5f}"
    )
    return 0


def _cmd_eval(args) -> int:
    spec = SPECS[args.dataset]
    bundle = load_bundle(args.data, spec, args.split_seed)
    net = deserialize(args.net.read_text(encoding="utf-8"))
    split = getattr(bundle, args.split)
    print(f"{args.split} accuracy: {accuracy(net, split):.5f}")
    return 0


def _cmd_export_dot(args) -> int:
    net = deserialize(args.net.read_text(encoding="utf-8"))
    text = export_dot(net)
    if args.out is None:
        sys.stdout.write(text)
    else:
        args.out.write_text(text, encoding="utf-8")
    return 0


def _cmd_synth_data(args) -> int:
    synth.write_all(args.out, seed=args.seed)
    print(f"wrote stand-in files to {args.out}")
    return 0


def _cmd_gradcheck(args) -> int:
    try:
        n, h, o = (int(x) for x in args.arch.split("-"))
    except ValueError:
        print(f"error: bad architecture {args.arch!r}, expected like '9-3-2'", file=sys.stderr)
        return 2
    rng = np.random.default_rng(args.seed)
    net = init_network(NetworkConfig(n, h, o, init_range=1.0, seed=args.seed))
    inputs = rng.random((args.examples, n))
    classes = rng.integers(0, o, size=args.examples)
    targets = np.zeros((args.examples, o))
    targets[np.arange(args.examples), classes] = 1.0
    worst = finite_diff_check(net, inputs, targets, PenaltyParams(), step=args.step)
    print(f"max relative error: {worst:.3e}")
    return 0 if worst < GRADCHECK_TOLERANCE else 1


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    handlers = {
        "run": _cmd_run,
        "train": _cmd_train,
        "prune": _cmd_prune,
        "eval": _cmd_eval,
        "export-dot": _cmd_export_dot,
        "gradcheck": _cmd_gradcheck,
        "synth-data": _cmd_synth_data,
    }
    try:
        return handlers[args.command](args)
    except FileNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (ConfigurationError, DatasetError, ParseError, ShapeError, DivergenceError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
