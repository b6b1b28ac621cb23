"""Command-line interface: train, optimize, eval, sweep, profile, serve, convert, plot."""
from __future__ import annotations

import argparse
import os
import statistics
import sys
from pathlib import Path

from . import evaluate, persist
from .corpus import load_stopwords, strip_boilerplate, tokenize_sentences
from .errors import LexblendError
from .inference import ModelParams
from .model import TrainConfig, TrainedModel, corpus_fingerprint, train_model
from .optimize import run_optimization
from .service import ADDR_ENV_VAR, DEFAULT_ADDR, DEFAULT_TOP_M, create_server

DEFAULT_HISTORY = 3
FOLD_SEED = 0


def _read_corpus_dir(corpus_dir: Path, stopwords) -> tuple[list, bytes]:
    files = sorted(p for p in corpus_dir.iterdir() if p.is_file() and p.suffix == ".txt")
    if not files:
        raise LexblendError(f"no .txt files in {corpus_dir}")
    sentences = []
    named = []
    for path in files:
        text = path.read_text("utf-8", errors="replace")
        named.append((path.name, text))
        body = strip_boilerplate(text)
        sentences.extend(tokenize_sentences(body, stopwords, source_id=path.name))
    return sentences, corpus_fingerprint(named)


def cmd_train(args) -> int:
    stopwords = load_stopwords(args.stopwords)
    sentences, fingerprint = _read_corpus_dir(Path(args.corpus_dir), stopwords)
    config = TrainConfig(
        max_distance=args.max_distance,
        svd_rank=args.svd_rank,
        min_nonstop=args.min_nonstop,
        epsilon=args.epsilon,
        svd_seed=args.seed,
    )
    model = train_model(sentences, config, fingerprint=fingerprint)
    params = ModelParams.neutral(history=args.max_distance)
    persist.save(model, params, args.model)
    print(f"sentences: {len(sentences)}")
    print(f"vocabulary: {len(model.vocab)} words, {model.vocab.total_tokens} tokens")
    print(f"graphs: distances 0..{model.graphs.max_distance - 1}")
    print(f"semantic rank: {model.srt.rank}")
    print(f"model written to {args.model}")
    return 0


def _load(path) -> tuple[TrainedModel, ModelParams]:
    return persist.load(path)


def _fold_for(configs, config_id):
    for fold in configs:
        if fold.config_id == config_id:
            return fold
    raise LexblendError(f"no fold configuration {config_id}")


def cmd_optimize(args) -> int:
    model, params = _load(args.model)
    items = evaluate.load_challenge(args.challenge)
    folds = evaluate.make_folds(items, seed=args.fold_seed)
    config_ids = [f.config_id for f in folds] if args.config == "all" else [int(args.config)]

    import random

    results = []
    for config_id in config_ids:
        fold = _fold_for(folds, config_id)
        opt_items = [items[i] for i in fold.opt_indices]
        steps = evaluate.to_train_steps(opt_items, model.vocab)
        if args.init == "random":
            init = ModelParams.random(
                history=args.history,
                rng=random.Random(args.seed + config_id),
                eta_alpha=args.eta_alpha,
                eta_lambda=args.eta_lambda,
            )
        else:
            init = params.copy()
            init.eta_alpha = args.eta_alpha
            init.eta_lambda = args.eta_lambda
        fitted, trace = run_optimization(
            model, steps, init, epochs=args.epochs, history=args.history
        )
        trace_path = args.trace or f"{args.model}.trace-cfg{config_id}.csv"
        if args.config == "all" and args.trace:
            trace_path = f"{args.trace}.cfg{config_id}.csv"
        trace.write_csv(trace_path)
        errors = trace.epoch_errors
        first = f"{errors[0]:.4f}" if errors else "n/a"
        last = f"{errors[-1]:.4f}" if errors else "n/a"
        print(
            f"config {config_id}: alpha {fitted.alpha:.4f}, "
            f"epoch error {first} -> {last}, trace {trace_path}"
        )
        results.append(fitted)

    if len(results) == 1:
        final = results[0]
    else:
        final = results[0].copy()
        final.alpha = statistics.fmean(p.alpha for p in results)
        final.lambda_before = [
            statistics.fmean(p.lambda_before[i] for p in results)
            for i in range(len(final.lambda_before))
        ]
        final.lambda_after = [
            statistics.fmean(p.lambda_after[i] for p in results)
            for i in range(len(final.lambda_after))
        ]
        print(f"stored mean parameters over {len(results)} configs (alpha {final.alpha:.4f})")
    persist.save(model, final, args.model)
    return 0


def cmd_eval(args) -> int:
    model, params = _load(args.model)
    items = evaluate.load_challenge(args.challenge)
    folds = evaluate.make_folds(items, seed=args.fold_seed)
    config_ids = [f.config_id for f in folds] if args.config == "all" else [int(args.config)]
    accuracies = []
    for config_id in config_ids:
        fold = _fold_for(folds, config_id)
        test_items = [items[i] for i in fold.test_indices]
        acc = evaluate.accuracy(test_items, model, params, history=args.history)
        accuracies.append(acc)
        print(f"config {config_id}: accuracy {acc:.4f} ({len(test_items)} items)")
    if len(accuracies) > 1:
        print(f"mean accuracy: {statistics.fmean(accuracies):.4f}")
    return 0


def cmd_sweep(args) -> int:
    model, params = _load(args.model)
    items = evaluate.load_challenge(args.challenge)
    folds = evaluate.make_folds(items, seed=args.fold_seed)
    fold = _fold_for(folds, args.config)
    test_items = [items[i] for i in fold.test_indices]
    n_range = range(args.min_history, args.max_history + 1)
    rows = evaluate.history_sweep(test_items, model, params, n_range=n_range)
    evaluate.write_sweep(rows, args.out)
    print(f"history{'':>2} {'bayes':>8} {'lsa':>8} {'hybrid':>8}")
    for row in rows:
        print(
            f"{row.history:>7} {row.bayes_only:>8.4f} {row.lsa_only:>8.4f} {row.hybrid:>8.4f}"
        )
    print(f"sweep written to {args.out}")
    return 0


def cmd_profile(args) -> int:
    _, params = _load(args.model)
    rows = evaluate.lambda_profile(params, history=args.history)
    evaluate.write_profile(rows, args.out)
    for row in rows:
        print(f"{row.side:>6} d={row.distance:<2} weight {row.weight:.6f}")
    print(f"profile written to {args.out}")
    return 0


def cmd_serve(args) -> int:
    model, params = _load(args.model)
    addr = args.addr or os.environ.get(ADDR_ENV_VAR) or DEFAULT_ADDR
    server = create_server(
        model, params, addr=addr, static_dir=args.static, top_m=args.top_m
    )
    host, port = server.server_address[:2]
    print(f"serving on http://{host}:{port} (model {model.fingerprint.hex()[:12]})")
    try:
        server.serve_forever()
    except KeyboardInterrupt:
        pass
    finally:
        server.server_close()
    return 0


def cmd_convert(args) -> int:
    items = evaluate.convert_machine_format(args.questions, args.answers)
    evaluate.write_challenge(items, args.out)
    print(f"wrote {len(items)} items to {args.out}")
    return 0


def cmd_plot(args) -> int:
    try:
        import matplotlib
    except ImportError:
        print("matplotlib is not installed; pip install lexblend[plot]", file=sys.stderr)
        return 1
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    from .optimize import OptTrace

    trace = OptTrace.read_csv(args.trace)
    if not trace.records:
        print("trace is empty, nothing to plot", file=sys.stderr)
        return 1
    fig, axes = plt.subplots(3, 1, figsize=(8, 10), sharex=False)
    axes[0].plot(range(1, len(trace.epoch_errors) + 1), trace.epoch_errors)
    axes[0].set_xlabel("epoch")
    axes[0].set_ylabel("summed error")
    axes[1].plot(trace.alpha_history)
    axes[1].set_xlabel("step")
    axes[1].set_ylabel("alpha")
    lam_b = trace.lambda_before_history
    lam_a = trace.lambda_after_history
    for i in range(len(lam_b[0])):
        axes[2].plot([row[i] for row in lam_b], label=f"before d{i + 1}")
    for i in range(len(lam_a[0])):
        axes[2].plot([row[i] for row in lam_a], linestyle="--", label=f"after d{i + 1}")
    axes[2].set_xlabel("step")
    axes[2].set_ylabel("lambda")
    if lam_b[0] or lam_a[0]:
        axes[2].legend(fontsize="small")
    fig.tight_layout()
    fig.savefig(args.out)
    print(f"plot written to {args.out}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="lexblend",
        description="Word prediction from co-occurrence graphs blended with semantic similarity.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("train", help="build a model from a directory of .txt files")
    p.add_argument("corpus_dir")
    p.add_argument("model")
    p.add_argument("--max-distance", type=int, default=16)
    p.add_argument("--svd-rank", type=int, default=None)
    p.add_argument("--min-nonstop", type=int, default=5)
    p.add_argument("--epsilon", type=float, default=1e-9)
    p.add_argument("--stopwords", default=None, help="path to a custom stopword list")
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_train)

    p = sub.add_parser("optimize", help="fit blend and distance weights on a challenge")
    p.add_argument("model")
    p.add_argument("challenge")
    p.add_argument("--config", default="all", help="fold configuration 1-5 or 'all'")
    p.add_argument("--epochs", type=int, default=30)
    p.add_argument("--history", type=int, default=DEFAULT_HISTORY)
    p.add_argument("--eta-alpha", type=float, default=0.1)
    p.add_argument("--eta-lambda", type=float, default=0.05)
    p.add_argument("--init", choices=("random", "keep"), default="random")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--fold-seed", type=int, default=FOLD_SEED)
    p.add_argument("--trace", default=None, help="trace CSV path")
    p.set_defaults(func=cmd_optimize)

    p = sub.add_parser("eval", help="accuracy on held-out fold(s)")
    p.add_argument("model")
    p.add_argument("challenge")
    p.add_argument("--config", default="all")
    p.add_argument("--history", type=int, default=DEFAULT_HISTORY)
    p.add_argument("--fold-seed", type=int, default=FOLD_SEED)
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("sweep", help="accuracy vs history size for all three modes")
    p.add_argument("model")
    p.add_argument("challenge")
    p.add_argument("--config", type=int, default=1)
    p.add_argument("--min-history", type=int, default=2)
    p.add_argument("--max-history", type=int, default=15)
    p.add_argument("--fold-seed", type=int, default=FOLD_SEED)
    p.add_argument("--out", default="sweep.csv")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("profile", help="per-distance weight table from a model")
    p.add_argument("model")
    p.add_argument("--history", type=int, default=None)
    p.add_argument("--out", default="lambda-profile.csv")
    p.set_defaults(func=cmd_profile)

    p = sub.add_parser("serve", help="run the HTTP suggestion service")
    p.add_argument("model")
    p.add_argument("--addr", default=None, help=f"host:port (or ${ADDR_ENV_VAR})")
    p.add_argument("--static", default=None, help="directory of demo assets for GET /")
    p.add_argument("--top-m", type=int, default=DEFAULT_TOP_M,
                   help="open-vocabulary candidate pool size")
    p.set_defaults(func=cmd_serve)

    p = sub.add_parser("convert", help="convert the original question/answer file pair")
    p.add_argument("questions")
    p.add_argument("answers")
    p.add_argument("out")
    p.set_defaults(func=cmd_convert)

    p = sub.add_parser("plot", help="plot an optimization trace CSV")
    p.add_argument("trace")
    p.add_argument("--out", default="trace.png")
    p.set_defaults(func=cmd_plot)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except LexblendError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
