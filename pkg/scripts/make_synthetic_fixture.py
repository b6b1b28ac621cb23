#!/usr/bin/env python3
"""Generate the small synthetic corpus and challenge used by tests and demos.

Writes a one-file corpus directory plus a challenge TSV, all seeded, so the
whole training/optimization/evaluation loop can run in seconds without any
external data.
"""

import argparse
import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "src"))

from lexblend.evaluate import write_challenge
from lexblend.synth import synthetic_challenge, synthetic_corpus


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--out", default="synth-fixture", help="output directory")
    ap.add_argument("--sentences", type=int, default=50)
    ap.add_argument("--items", type=int, default=200)
    ap.add_argument("--corpus-seed", type=int, default=0)
    ap.add_argument("--challenge-seed", type=int, default=1)
    args = ap.parse_args(argv)

    out = Path(args.out)
    corpus_dir = out / "corpus"
    corpus_dir.mkdir(parents=True, exist_ok=True)
    text = synthetic_corpus(args.sentences, seed=args.corpus_seed)
    (corpus_dir / "synth.txt").write_text(text, encoding="utf-8")

    items = synthetic_challenge(args.items, seed=args.challenge_seed)
    write_challenge(items, out / "challenge.tsv")
    print(f"{args.sentences} sentences -> {corpus_dir / 'synth.txt'}")
    print(f"{len(items)} items -> {out / 'challenge.tsv'}")


if __name__ == "__main__":
    main()
