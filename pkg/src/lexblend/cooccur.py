"""Distance-indexed co-occurrence graphs and the probabilities read off them.

Graph d (0-based) holds directed edges i -> j weighted by how many times word j
occurred exactly d words after word i inside one sentence (d words strictly
between them). Pairs never cross sentence boundaries.
"""
from __future__ import annotations

from dataclasses import dataclass, field

from .corpus import Vocabulary
from .errors import UnknownWord


@dataclass(frozen=True)
class SmoothingPolicy:
    """Floor applied to conditional probabilities (and unknown-word priors)."""

    epsilon: float = 1e-9

    def __post_init__(self):
        if not 0.0 < self.epsilon < 1.0:
            raise ValueError(f"epsilon must be in (0, 1), got {self.epsilon}")


@dataclass
class CooccurrenceGraphSet:
    """Sparse weighted digraphs over vocabulary ids, one per distance.

    graphs[d][i][j] is the integer edge weight; out_mass[d][i] and
    in_mass[d][j] cache the row/column sums used for normalization.
    """

    max_distance: int
    graphs: list[dict[int, dict[int, int]]] = field(default_factory=list)
    out_mass: list[dict[int, int]] = field(default_factory=list)
    in_mass: list[dict[int, int]] = field(default_factory=list)

    @classmethod
    def empty(cls, max_distance: int) -> "CooccurrenceGraphSet":
        if max_distance < 1:
            raise ValueError("max_distance must be >= 1")
        return cls(
            max_distance=max_distance,
            graphs=[{} for _ in range(max_distance)],
            out_mass=[{} for _ in range(max_distance)],
            in_mass=[{} for _ in range(max_distance)],
        )

    def add_pair(self, d: int, i: int, j: int, count: int = 1) -> None:
        row = self.graphs[d].setdefault(i, {})
        row[j] = row.get(j, 0) + count
        om = self.out_mass[d]
        om[i] = om.get(i, 0) + count
        im = self.in_mass[d]
        im[j] = im.get(j, 0) + count

    def weight(self, d: int, i: int, j: int) -> int:
        return self.graphs[d].get(i, {}).get(j, 0)

    def edge_count(self, d: int) -> int:
        return sum(len(row) for row in self.graphs[d].values())

    def total_weight(self, d: int) -> int:
        return sum(self.out_mass[d].values())


def train_graphs(
    sentences,
    vocab: Vocabulary,
    max_distance: int,
) -> CooccurrenceGraphSet:
    """Count ordered within-sentence co-occurrences at distances < max_distance.

    A sentence of length L contributes max(0, L-1-d) pairs to graph d: every
    earlier->later position pair (p, q) with q - p - 1 = d.
    """
    gset = CooccurrenceGraphSet.empty(max_distance)
    word_to_id = vocab.word_to_id
    for sent in sentences:
        ids = [word_to_id[t] for t in sent.tokens]
        n = len(ids)
        for p in range(n):
            i = ids[p]
            for q in range(p + 1, min(n, p + 1 + max_distance)):
                gset.add_pair(q - p - 1, i, ids[q])
    return gset


def merge_graphs(a: CooccurrenceGraphSet, b: CooccurrenceGraphSet) -> CooccurrenceGraphSet:
    """Add two graph sets edge-wise (training on a partitioned corpus)."""
    if a.max_distance != b.max_distance:
        raise ValueError("graph sets cover different distance ranges")
    merged = CooccurrenceGraphSet.empty(a.max_distance)
    for src in (a, b):
        for d in range(src.max_distance):
            for i, row in src.graphs[d].items():
                for j, w in row.items():
                    merged.add_pair(d, i, j, w)
    return merged


def prior(vocab: Vocabulary, word: int) -> float:
    """Unigram probability: occurrences of the word over all token occurrences."""
    if not 0 <= word < len(vocab):
        raise UnknownWord(f"word id {word} not in vocabulary")
    return vocab.counts[word] / vocab.total_tokens


def conditional(
    graphs: CooccurrenceGraphSet,
    d: int,
    i: int,
    j: int,
    smoothing: SmoothingPolicy,
) -> float:
    """P(j appears d after i): edge weight over the source word's out-mass.

    Floored at the smoothing epsilon; a source word with no outgoing weight at
    this distance (unknown ids included) yields the floor.
    """
    out = graphs.out_mass[d].get(i, 0)
    if out == 0:
        return smoothing.epsilon
    w = graphs.graphs[d].get(i, {}).get(j, 0)
    return max(w / out, smoothing.epsilon)


def reversed_conditional(
    graphs: CooccurrenceGraphSet,
    d: int,
    sugg: int,
    post_word: int,
    smoothing: SmoothingPolicy,
) -> float:
    """P(post_word appears d after sugg): the same graphs read suggestion-first.

    Used for context words on the far side of a gap; identical formula to
    ``conditional`` with i = sugg, j = post_word.
    """
    return conditional(graphs, d, sugg, post_word, smoothing)
