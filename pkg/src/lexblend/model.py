"""Training pipeline and the in-memory bundle of everything inference needs."""
from __future__ import annotations

import hashlib
from dataclasses import dataclass, field
from typing import Iterable

from .cooccur import CooccurrenceGraphSet, SmoothingPolicy, train_graphs
from .corpus import Sentence, Vocabulary, build_vocabulary
from .lsa import SemanticReducedTable, build_relationship_table, reduce_svd

ZERO_FINGERPRINT = bytes(32)


@dataclass(frozen=True)
class TrainConfig:
    """Knobs for one training run."""

    max_distance: int = 16
    svd_rank: int | None = None
    min_nonstop: int = 5
    epsilon: float = 1e-9
    svd_seed: int = 0


@dataclass
class TrainedModel:
    """Vocabulary, co-occurrence graphs, semantic vectors, smoothing floor."""

    vocab: Vocabulary
    graphs: CooccurrenceGraphSet
    srt: SemanticReducedTable
    smoothing: SmoothingPolicy = field(default_factory=SmoothingPolicy)
    fingerprint: bytes = ZERO_FINGERPRINT


def auto_rank(n_rows: int, n_cols: int) -> int:
    """Default decomposition rank: 300 at scale, min(dims, 50) for small fixtures."""
    m = min(n_rows, n_cols)
    return 300 if m >= 300 else min(m, 50)


def train_model(
    sentences: list[Sentence],
    config: TrainConfig = TrainConfig(),
    fingerprint: bytes = ZERO_FINGERPRINT,
) -> TrainedModel:
    """Build the full model from segmented sentences."""
    vocab = build_vocabulary(sentences)
    graphs = train_graphs(sentences, vocab, config.max_distance)
    table = build_relationship_table(sentences, vocab, config.min_nonstop)
    rank = config.svd_rank
    if rank is None:
        rank = auto_rank(*table.matrix.shape)
    srt = reduce_svd(table, rank, config.svd_seed)
    return TrainedModel(
        vocab=vocab,
        graphs=graphs,
        srt=srt,
        smoothing=SmoothingPolicy(config.epsilon),
        fingerprint=fingerprint,
    )


def corpus_fingerprint(named_texts: Iterable[tuple[str, str]]) -> bytes:
    """Order-independent digest over (name, content) pairs."""
    digest = hashlib.sha256()
    for name, text in sorted(named_texts, key=lambda nt: nt[0]):
        inner = hashlib.sha256(text.encode("utf-8")).hexdigest()
        digest.update(f"{name}\0{inner}\n".encode("utf-8"))
    return digest.digest()
