"""Word prediction from distance-indexed co-occurrence graphs blended with
latent semantic similarity, with gradient-fitted blend and distance weights."""

from .cooccur import (
    CooccurrenceGraphSet,
    SmoothingPolicy,
    conditional,
    merge_graphs,
    prior,
    reversed_conditional,
    train_graphs,
)
from .corpus import (
    Sentence,
    Vocabulary,
    build_vocabulary,
    load_stopwords,
    strip_boilerplate,
    tokenize,
    tokenize_sentences,
)
from .inference import (
    GapContext,
    ModelParams,
    OOV_ID,
    ScoredCandidate,
    bayes_raw_score,
    hybrid_score,
    normalize_over_candidates,
    predict,
    rank_equalize,
)
from .lsa import (
    RelationshipTable,
    SemanticReducedTable,
    build_relationship_table,
    reduce_svd,
    semantic_distance_sum,
    semantic_similarity,
)
from .model import TrainConfig, TrainedModel, corpus_fingerprint, train_model
from .optimize import (
    OptTrace,
    TrainStep,
    grad_alpha,
    grad_lambda,
    run_optimization,
    step_error,
)

__version__ = "0.1.0"

__all__ = [
    "CooccurrenceGraphSet",
    "GapContext",
    "ModelParams",
    "OOV_ID",
    "OptTrace",
    "RelationshipTable",
    "ScoredCandidate",
    "SemanticReducedTable",
    "Sentence",
    "SmoothingPolicy",
    "TrainConfig",
    "TrainStep",
    "TrainedModel",
    "Vocabulary",
    "bayes_raw_score",
    "build_relationship_table",
    "build_vocabulary",
    "conditional",
    "corpus_fingerprint",
    "grad_alpha",
    "grad_lambda",
    "hybrid_score",
    "load_stopwords",
    "merge_graphs",
    "normalize_over_candidates",
    "predict",
    "prior",
    "rank_equalize",
    "reduce_svd",
    "reversed_conditional",
    "run_optimization",
    "semantic_distance_sum",
    "semantic_similarity",
    "step_error",
    "strip_boilerplate",
    "tokenize",
    "tokenize_sentences",
    "train_graphs",
    "train_model",
]
