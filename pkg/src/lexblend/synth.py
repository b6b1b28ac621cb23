"""Deterministic synthetic corpus and challenge for desk-scale experiments.

Five subjects each take one characteristic object and (usually) one
characteristic verb ("the robin eats worms"), with a minority of mismatched
sentences mixed in so neither evidence source is perfect while both keep a
clear majority signal. The companion challenge asks for the object.
"""
from __future__ import annotations

import random

from .evaluate import ChallengeItem

SUBJECTS = ("robin", "sparrow", "falcon", "heron", "finch")
PAIRED_OBJECT = {
    "robin": "worms",
    "sparrow": "seeds",
    "falcon": "mice",
    "heron": "fish",
    "finch": "berries",
}
PAIRED_VERB = {
    "robin": "eats",
    "sparrow": "gathers",
    "falcon": "hunts",
    "heron": "finds",
    "finch": "wants",
}
VERBS = ("eats", "hunts", "gathers", "finds", "wants")
PLACES = ("meadow", "marsh", "forest", "garden", "valley")
TIMES = ("morning", "evening", "dusk", "dawn", "noon")

#: stride co-prime with the subject cycle, so mismatches spread over subjects
_NOISE_STRIDE = 7
#: fraction of sentences/items that keep the subject's characteristic verb
_VERB_FIDELITY = 0.8


def _pick_verb(subj: str, rng: random.Random) -> str:
    if rng.random() < _VERB_FIDELITY:
        return PAIRED_VERB[subj]
    return rng.choice(VERBS)


def synthetic_corpus(n_sentences: int = 50, seed: int = 0) -> str:
    """Return corpus text, one templated sentence per line."""
    rng = random.Random(seed)
    objects = list(PAIRED_OBJECT.values())
    lines = []
    for i in range(n_sentences):
        subj = SUBJECTS[i % len(SUBJECTS)]
        obj = PAIRED_OBJECT[subj]
        if i % _NOISE_STRIDE == _NOISE_STRIDE - 1 and n_sentences >= 2 * _NOISE_STRIDE:
            obj = objects[(objects.index(obj) + 1) % len(objects)]
        verb = _pick_verb(subj, rng)
        place = rng.choice(PLACES)
        time = rng.choice(TIMES)
        lines.append(f"The {subj} {verb} {obj} in the {place} every {time}.")
    return "\n".join(lines) + "\n"


def synthetic_challenge(n_items: int = 200, seed: int = 1) -> list[ChallengeItem]:
    """Gap-at-the-object items; answer is the subject's characteristic object.

    Most gaps sit at the sentence end; the rest keep a short trailing context.
    """
    rng = random.Random(seed)
    objects = list(PAIRED_OBJECT.values())
    items = []
    for i in range(n_items):
        subj = SUBJECTS[i % len(SUBJECTS)]
        verb = _pick_verb(subj, rng)
        candidates = objects[:]
        rng.shuffle(candidates)
        if rng.random() < 0.6:
            after: tuple[str, ...] = ()
        else:
            after = ("in", "the", rng.choice(PLACES))
        items.append(
            ChallengeItem(
                item_id=f"synth-{i:04d}",
                before_tokens=("the", subj, verb),
                after_tokens=after,
                candidates=tuple(candidates),
                answer_index=candidates.index(PAIRED_OBJECT[subj]),
            )
        )
    return items
