"""Cloze-style challenge evaluation: file formats, folds, accuracy, sweeps."""
from __future__ import annotations

import csv
import random
import re
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Sequence

from .corpus import tokenize
from .errors import ParseError
from .inference import GapContext, ModelParams, OOV_ID, predict
from .optimize import TrainStep

_PLACEHOLDER_RE = re.compile(r"_{3,}")
_ANSWER_LETTERS = "abcde"
N_GROUPS = 5


@dataclass(frozen=True)
class ChallengeItem:
    """One sentence-completion item.

    before_tokens / after_tokens are in text order (left to right);
    candidates are the surface words, answer_index points into them.
    """

    item_id: str
    before_tokens: tuple[str, ...]
    after_tokens: tuple[str, ...]
    candidates: tuple[str, ...]
    answer_index: int


def load_challenge(path: str | Path) -> list[ChallengeItem]:
    """Read the tab-separated challenge format.

    Columns: id, sentence with a ``___`` gap, five candidate words, answer
    letter a-e. Raises ParseError with the offending line number.
    """
    items = []
    with Path(path).open(encoding="utf-8") as fh:
        for line_no, line in enumerate(fh, start=1):
            line = line.rstrip("\n")
            if not line.strip():
                continue
            fields = line.split("\t")
            if len(fields) != 8:
                raise ParseError(line_no, f"expected 8 tab-separated fields, got {len(fields)}")
            item_id, sentence, *cands, answer = fields
            gaps = _PLACEHOLDER_RE.findall(sentence)
            if len(gaps) != 1:
                raise ParseError(line_no, f"expected exactly one gap placeholder, found {len(gaps)}")
            before_text, after_text = _PLACEHOLDER_RE.split(sentence)
            answer = answer.strip().lower()
            if answer not in _ANSWER_LETTERS:
                raise ParseError(line_no, f"answer letter must be a-e, got {answer!r}")
            candidates = []
            for c in cands:
                toks = tokenize(c)
                if len(toks) != 1:
                    raise ParseError(line_no, f"candidate {c!r} is not a single word")
                candidates.append(toks[0])
            items.append(
                ChallengeItem(
                    item_id=item_id.strip(),
                    before_tokens=tuple(tokenize(before_text)),
                    after_tokens=tuple(tokenize(after_text)),
                    candidates=tuple(candidates),
                    answer_index=_ANSWER_LETTERS.index(answer),
                )
            )
    return items


def write_challenge(items: Iterable[ChallengeItem], path: str | Path) -> None:
    """Write items in the tab-separated challenge format."""
    with Path(path).open("w", encoding="utf-8") as fh:
        for item in items:
            sentence = " ".join([*item.before_tokens, "___", *item.after_tokens])
            fh.write(
                "\t".join(
                    [item.item_id, sentence, *item.candidates, _ANSWER_LETTERS[item.answer_index]]
                )
                + "\n"
            )


_MACHINE_LINE_RE = re.compile(r"^\s*(\S+?)([a-e])\)\s*(.*\S)\s*$")
_BRACKET_RE = re.compile(r"\[([^\][]+)\]")


def convert_machine_format(
    questions_path: str | Path,
    answers_path: str | Path,
) -> list[ChallengeItem]:
    """Convert the original five-lines-per-item distribution format.

    Each question line reads ``<id><letter>) <sentence with [candidate]>``;
    the answers file holds the correct line for every item. Returns items in
    question-file order.
    """

    def parse_lines(path):
        parsed = {}
        order = []
        with Path(path).open(encoding="utf-8") as fh:
            for line_no, line in enumerate(fh, start=1):
                if not line.strip():
                    continue
                m = _MACHINE_LINE_RE.match(line)
                if m is None:
                    raise ParseError(line_no, f"unrecognized line {line.strip()!r}")
                qid, letter, sentence = m.groups()
                brackets = _BRACKET_RE.findall(sentence)
                if len(brackets) != 1:
                    raise ParseError(line_no, "expected exactly one [bracketed] candidate")
                if qid not in parsed:
                    parsed[qid] = {}
                    order.append(qid)
                parsed[qid][letter] = (sentence, brackets[0])
        return parsed, order

    questions, order = parse_lines(questions_path)
    answers, _ = parse_lines(answers_path)

    items = []
    for qid in order:
        variants = questions[qid]
        if sorted(variants) != list(_ANSWER_LETTERS):
            raise ParseError(0, f"item {qid} does not have exactly five variants a-e")
        if qid not in answers or len(answers[qid]) != 1:
            raise ParseError(0, f"item {qid} lacks a single answer line")
        answer_letter = next(iter(answers[qid]))
        sentence, _ = variants["a"]
        before_text, after_text = _BRACKET_RE.split(sentence)[::2]
        candidates = []
        for letter in _ANSWER_LETTERS:
            toks = tokenize(variants[letter][1])
            if len(toks) != 1:
                raise ParseError(0, f"item {qid}{letter} candidate is not a single word")
            candidates.append(toks[0])
        items.append(
            ChallengeItem(
                item_id=qid,
                before_tokens=tuple(tokenize(before_text)),
                after_tokens=tuple(tokenize(after_text)),
                candidates=tuple(candidates),
                answer_index=_ANSWER_LETTERS.index(answer_letter),
            )
        )
    return items


@dataclass(frozen=True)
class FoldConfig:
    """One cross-validation configuration: which group is held out."""

    config_id: int
    test_group: int
    opt_groups: tuple[int, ...]
    groups: tuple[tuple[int, ...], ...]

    @property
    def test_indices(self) -> tuple[int, ...]:
        return self.groups[self.test_group]

    @property
    def opt_indices(self) -> tuple[int, ...]:
        return tuple(i for g in self.opt_groups for i in self.groups[g])


def make_folds(items: Sequence[ChallengeItem], seed: int = 0) -> list[FoldConfig]:
    """Shuffle item indices with the seed and deal them round-robin into 5 groups.

    Config i (1-based) holds out group i-1 and optimizes on the other four.
    """
    indices = list(range(len(items)))
    random.Random(seed).shuffle(indices)
    groups: list[list[int]] = [[] for _ in range(N_GROUPS)]
    for pos, idx in enumerate(indices):
        groups[pos % N_GROUPS].append(idx)
    frozen = tuple(tuple(g) for g in groups)
    return [
        FoldConfig(
            config_id=cfg,
            test_group=cfg - 1,
            opt_groups=tuple(g for g in range(N_GROUPS) if g != cfg - 1),
            groups=frozen,
        )
        for cfg in range(1, N_GROUPS + 1)
    ]


def to_gap_context(item: ChallengeItem, vocab) -> GapContext:
    """Map an item's words to ids, nearest-the-gap first on each side."""
    lookup = vocab.word_to_id
    before = [lookup.get(t, OOV_ID) for t in reversed(item.before_tokens)]
    after = [lookup.get(t, OOV_ID) for t in item.after_tokens]
    candidates = [lookup.get(t, OOV_ID) for t in item.candidates]
    return GapContext(before=before, after=after, candidates=candidates)


def to_train_steps(items: Iterable[ChallengeItem], vocab) -> list[TrainStep]:
    return [
        TrainStep(gap=to_gap_context(item, vocab), correct_index=item.answer_index)
        for item in items
    ]


def accuracy(
    items: Sequence[ChallengeItem],
    models,
    params: ModelParams,
    history: int | None = None,
) -> float:
    """Fraction of items whose top-ranked candidate is the marked answer."""
    if not items:
        raise ValueError("no items to evaluate")
    correct = 0
    for item in items:
        ranked = predict(models, to_gap_context(item, vocab=models.vocab), params, history)
        if ranked[0].index == item.answer_index:
            correct += 1
    return correct / len(items)


@dataclass(frozen=True)
class SweepRow:
    """Accuracy at one history size for the three blending modes."""

    history: int
    bayes_only: float
    lsa_only: float
    hybrid: float


def history_sweep(
    items: Sequence[ChallengeItem],
    models,
    params: ModelParams,
    n_range: Sequence[int] = tuple(range(2, 16)),
) -> list[SweepRow]:
    """Accuracy per history size with the blend pinned to 1, 0, and as given."""
    rows = []
    bayes_params = params.copy()
    bayes_params.alpha = 1.0
    lsa_params = params.copy()
    lsa_params.alpha = 0.0
    for n in n_range:
        rows.append(
            SweepRow(
                history=n,
                bayes_only=accuracy(items, models, bayes_params, history=n),
                lsa_only=accuracy(items, models, lsa_params, history=n),
                hybrid=accuracy(items, models, params, history=n),
            )
        )
    return rows


def write_sweep(rows: Iterable[SweepRow], path: str | Path) -> None:
    with Path(path).open("w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["history", "bayes_only", "lsa_only", "hybrid"])
        for row in rows:
            writer.writerow(
                [row.history, repr(row.bayes_only), repr(row.lsa_only), repr(row.hybrid)]
            )


@dataclass(frozen=True)
class ProfileRow:
    """Effective weight of one distance on one side."""

    side: str
    distance: int
    weight: float


def lambda_profile(params: ModelParams, history: int | None = None) -> list[ProfileRow]:
    """Per-distance weights for plotting.

    Distance 0 reports the effective exponent (reciprocal of the side's
    weight product); distances >= 1 echo the weights themselves.
    """
    rows = []
    for side, lambdas in (("before", params.lambda_before), ("after", params.lambda_after)):
        n = len(lambdas) + 1 if history is None else min(history, len(lambdas) + 1)
        eff = list(lambdas[: n - 1])
        prod = 1.0
        for lam in eff:
            prod *= lam
        rows.append(ProfileRow(side=side, distance=0, weight=1.0 / prod))
        for d, lam in enumerate(eff, start=1):
            rows.append(ProfileRow(side=side, distance=d, weight=lam))
    return rows


def write_profile(rows: Iterable[ProfileRow], path: str | Path) -> None:
    with Path(path).open("w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["side", "distance", "weight"])
        for row in rows:
            writer.writerow([row.side, row.distance, repr(row.weight)])


def read_profile(path: str | Path) -> list[ProfileRow]:
    rows = []
    with Path(path).open(newline="") as fh:
        reader = csv.reader(fh)
        next(reader)
        for side, distance, weight in reader:
            rows.append(ProfileRow(side=side, distance=int(distance), weight=float(weight)))
    return rows
