"""Latent semantic word vectors from a term-sentence count matrix.

Rows are vocabulary ids, columns are the sentences that carry enough content
words to be informative. A truncated SVD compresses the matrix; each word
keeps the row of U scaled by the singular values, so Euclidean distance
between word vectors approximates distance between their count profiles.
"""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass

import numpy as np
from scipy import sparse
from scipy.sparse.linalg import svds

from .corpus import Sentence, Vocabulary
from .errors import CandidateUnknown, NoQualifyingSentences, RankTooLarge, ZeroContext

# Below this size a dense LAPACK SVD is cheaper and handles full rank;
# svds (ARPACK) requires k strictly below min(dims).
_DENSE_SVD_LIMIT = 512


@dataclass
class RelationshipTable:
    """Sparse |V| x T count matrix over qualifying sentences."""

    matrix: sparse.csr_matrix
    sentence_indices: list[int]


def build_relationship_table(
    sentences: list[Sentence],
    vocab: Vocabulary,
    min_nonstop: int = 5,
) -> RelationshipTable:
    """Count in-vocabulary tokens per qualifying sentence.

    Only sentences with nonstop_count >= min_nonstop produce columns.
    Raises NoQualifyingSentences when nothing qualifies.
    """
    word_to_id = vocab.word_to_id
    rows: list[int] = []
    cols: list[int] = []
    vals: list[int] = []
    kept: list[int] = []
    for sent_idx, sent in enumerate(sentences):
        if sent.nonstop_count < min_nonstop:
            continue
        col = len(kept)
        kept.append(sent_idx)
        counts = Counter(
            wid for wid in (word_to_id.get(t) for t in sent.tokens) if wid is not None
        )
        for wid, c in counts.items():
            rows.append(wid)
            cols.append(col)
            vals.append(c)
    if not kept:
        raise NoQualifyingSentences(
            f"no sentence has {min_nonstop} or more non-stopword tokens"
        )
    matrix = sparse.csr_matrix(
        (vals, (rows, cols)), shape=(len(vocab), len(kept)), dtype=np.float64
    )
    return RelationshipTable(matrix=matrix, sentence_indices=kept)


@dataclass
class SemanticReducedTable:
    """Per-word semantic vectors (U * Sigma rows), float32, shape |V| x k.

    Words that never occurred in a qualifying sentence have identically zero
    rows and are treated as having no vector.
    """

    vectors: np.ndarray
    rank: int

    def has_row(self, word_id: int) -> bool:
        return 0 <= word_id < self.vectors.shape[0] and bool(
            np.any(self.vectors[word_id])
        )

    def row(self, word_id: int) -> np.ndarray:
        return self.vectors[word_id]


def _canonical_signs(u: np.ndarray, vt: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Flip singular-vector pairs so each U column's largest entry is positive."""
    u = u.copy()
    vt = vt.copy()
    for col in range(u.shape[1]):
        pivot = np.argmax(np.abs(u[:, col]))
        if u[pivot, col] < 0:
            u[:, col] = -u[:, col]
            vt[col, :] = -vt[col, :]
    return u, vt


def svd_factors(
    matrix: sparse.spmatrix, k: int, seed: int = 0
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Top-k singular triplets (U, s, Vt), descending, deterministic for a seed."""
    min_dim = min(matrix.shape)
    if k < 1:
        raise ValueError("rank must be >= 1")
    if k > min_dim:
        raise RankTooLarge(f"rank {k} exceeds min(matrix dims) = {min_dim}")
    if k == min_dim or min_dim <= _DENSE_SVD_LIMIT:
        dense = matrix.toarray() if sparse.issparse(matrix) else np.asarray(matrix)
        u, s, vt = np.linalg.svd(dense, full_matrices=False)
        u, s, vt = u[:, :k], s[:k], vt[:k, :]
    else:
        v0 = np.random.RandomState(seed).uniform(-1.0, 1.0, size=min_dim)
        u, s, vt = svds(matrix.astype(np.float64), k=k, v0=v0)
        order = np.argsort(s)[::-1]
        u, s, vt = u[:, order], s[order], vt[order, :]
    u, vt = _canonical_signs(u, vt)
    return u, s, vt


def reduce_svd(table: RelationshipTable, k: int, seed: int = 0) -> SemanticReducedTable:
    """Project the count matrix to rank k and keep the scaled word rows."""
    u, s, _ = svd_factors(table.matrix, k, seed)
    vectors = np.ascontiguousarray((u * s).astype(np.float32))
    return SemanticReducedTable(vectors=vectors, rank=k)


def semantic_distance_sum(
    srt: SemanticReducedTable,
    candidate: int,
    prev_ids: list[int],
) -> float:
    """Sum of 1 / (euclidean distance + 1) from the candidate to each context word.

    Context words without vectors are skipped. Raises CandidateUnknown when
    the candidate itself has no vector (callers score it 0).
    """
    if not srt.has_row(candidate):
        raise CandidateUnknown(f"word id {candidate} has no semantic vector")
    cand = srt.vectors[candidate].astype(np.float64)
    total = 0.0
    for wid in prev_ids:
        if not srt.has_row(wid):
            continue
        dist = float(np.linalg.norm(cand - srt.vectors[wid].astype(np.float64)))
        total += 1.0 / (dist + 1.0)
    return total


def semantic_similarity(distance_sum: float, n_context: int) -> float:
    """Average the reciprocal-distance sum over the context words counted."""
    if n_context < 1:
        raise ZeroContext("similarity needs at least one context word with a vector")
    return distance_sum / n_context
