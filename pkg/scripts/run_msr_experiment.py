#!/usr/bin/env python3
"""Full-scale sentence-completion experiment driver.

Trains (or reuses) a model over a directory of plain-text books, then runs
the 5-configuration cross-validation protocol: per config, gradient descent
on the optimization split and accuracy on the held-out split, reported for
both the optimized and the untouched neutral parameters.

Expected at full scale (hundreds of 19th-century books, 1040 challenge
items, 3-gram history): mean optimized accuracy around 0.44 and the blend
weight settling in a band of width <= 0.25 near [0.2, 0.4]. Runtime is
hours, dominated by training; pass --model to reuse a saved container.
"""

import argparse
import random
import statistics
import sys
import time
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "src"))

from lexblend.corpus import load_stopwords, strip_boilerplate, tokenize_sentences
from lexblend.evaluate import (
    accuracy,
    lambda_profile,
    load_challenge,
    make_folds,
    to_train_steps,
    write_profile,
)
from lexblend.inference import ModelParams
from lexblend.model import TrainConfig, corpus_fingerprint, train_model
from lexblend.optimize import run_optimization
from lexblend.persist import load, save


def train_or_load(args):
    model_path = Path(args.model)
    if model_path.exists() and not args.retrain:
        print(f"loading cached model from {model_path}")
        model, _ = load(model_path)
        return model

    books = sorted(Path(args.books).glob("*.txt"))
    if not books:
        sys.exit(f"no .txt files under {args.books}")
    print(f"reading {len(books)} books")
    stopwords = load_stopwords()
    named = []
    sentences = []
    for path in books:
        text = strip_boilerplate(path.read_text(encoding="utf-8", errors="replace"))
        named.append((path.name, text))
        sentences.extend(tokenize_sentences(text, stopwords, source_id=path.name))
    print(f"  {len(sentences)} sentences")

    config = TrainConfig(
        max_distance=args.max_distance,
        svd_rank=args.svd_rank,
        min_nonstop=args.min_nonstop,
        svd_seed=args.seed,
    )
    started = time.perf_counter()
    model = train_model(sentences, config, corpus_fingerprint(named))
    print(
        f"trained in {time.perf_counter() - started:.1f}s: "
        f"|V|={len(model.vocab)}, rank={model.srt.vectors.shape[1]}"
    )
    save(model, ModelParams.neutral(history=args.max_distance), model_path)
    print(f"saved container to {model_path}")
    return model


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--books", help="directory of plain-text books")
    ap.add_argument("--challenge", required=True, help="challenge TSV")
    ap.add_argument("--model", required=True, help="model container path (cache)")
    ap.add_argument("--out", default="results", help="output directory for CSV tables")
    ap.add_argument("--epochs", type=int, default=30)
    ap.add_argument("--history", type=int, default=3)
    ap.add_argument("--eta-alpha", type=float, default=0.1)
    ap.add_argument("--eta-lambda", type=float, default=0.05)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--max-distance", type=int, default=16)
    ap.add_argument("--svd-rank", type=int, default=None)
    ap.add_argument("--min-nonstop", type=int, default=5)
    ap.add_argument("--retrain", action="store_true", help="ignore a cached model file")
    args = ap.parse_args(argv)

    if not Path(args.model).exists() and not args.books:
        ap.error("--books is required when the model container does not exist yet")

    model = train_or_load(args)
    items = load_challenge(args.challenge)
    print(f"{len(items)} challenge items, history={args.history}")

    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)

    folds = make_folds(items, seed=args.seed)
    rows = []
    for fold in folds:
        opt_items = [items[i] for i in fold.opt_indices]
        test_items = [items[i] for i in fold.test_indices]
        steps = to_train_steps(opt_items, model.vocab)
        init = ModelParams.random(
            history=args.history,
            rng=random.Random(args.seed * 1000 + fold.config_id),
            eta_alpha=args.eta_alpha,
            eta_lambda=args.eta_lambda,
        )
        started = time.perf_counter()
        params, trace = run_optimization(
            model, steps, init, epochs=args.epochs, history=args.history
        )
        acc_opt = accuracy(test_items, model, params, history=args.history)
        acc_neutral = accuracy(
            test_items,
            model,
            ModelParams.neutral(history=args.history),
            history=args.history,
        )
        errs = trace.epoch_errors
        print(
            f"config {fold.config_id}: alpha={params.alpha:.3f} "
            f"acc={acc_opt:.4f} (neutral {acc_neutral:.4f}) "
            f"error {errs[0]:.2f} -> {errs[-1]:.2f} "
            f"[{time.perf_counter() - started:.1f}s]"
        )
        rows.append((fold.config_id, params, acc_opt, acc_neutral))
        write_profile(
            lambda_profile(params), out_dir / f"lambda-cfg{fold.config_id}.csv"
        )

    alphas = [p.alpha for _, p, _, _ in rows]
    opt_accs = [a for _, _, a, _ in rows]
    neutral_accs = [a for _, _, _, a in rows]
    mean_opt = statistics.fmean(opt_accs)
    mean_neutral = statistics.fmean(neutral_accs)
    band = max(alphas) - min(alphas)
    print(f"mean optimized accuracy: {mean_opt:.4f}")
    print(f"mean neutral accuracy:   {mean_neutral:.4f}")
    print(f"alpha band: [{min(alphas):.3f}, {max(alphas):.3f}] width {band:.3f}")
    print(f"optimized >= neutral: {mean_opt >= mean_neutral}")
    print(f"alpha band width <= 0.25: {band <= 0.25}")

    with open(out_dir / "results.csv", "w", encoding="utf-8") as fh:
        fh.write("config,alpha,accuracy_optimized,accuracy_neutral\n")
        for config_id, params, acc_opt, acc_neutral in rows:
            fh.write(f"{config_id},{params.alpha!r},{acc_opt!r},{acc_neutral!r}\n")
        fh.write(f"mean,,{mean_opt!r},{mean_neutral!r}\n")
    print(f"tables written under {out_dir}/")


if __name__ == "__main__":
    main()
