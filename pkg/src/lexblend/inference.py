"""Gap scoring: weighted co-occurrence evidence blended with semantic similarity.

The pipeline for a gap with candidate set C:

1. per distance d on each side, the conditional probabilities of all
   candidates are rank-equalized across C into terms t_d;
2. each candidate's raw score is prior * product of t_d raised to the
   distance weights (distance 0 carries the reciprocal of the side's
   weight product); computed in log space;
3. raw scores are normalized over C and rank-equalized into B;
4. semantic similarities are rank-equalized into L;
5. theta = alpha * B + (1 - alpha) * L, sorted descending (stable).
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Sequence

from .cooccur import CooccurrenceGraphSet, SmoothingPolicy, conditional, prior, reversed_conditional
from .corpus import Vocabulary
from .errors import UnknownWord
from .lsa import semantic_distance_sum, semantic_similarity

#: id used for words that are not in the vocabulary
OOV_ID = -1

#: hard operating range for distance weights
LAMBDA_MIN = 0.05
LAMBDA_MAX = 20.0


def clamp_alpha(value: float) -> float:
    return min(1.0, max(0.0, value))


def clamp_lambda(value: float) -> float:
    return min(LAMBDA_MAX, max(LAMBDA_MIN, value))


@dataclass
class ModelParams:
    """Blend weight, per-distance weights for each side, and learning rates.

    lambda_before[i] weights the conditional at distance i+1 on the earlier
    side; distance 0 is weighted by the reciprocal of the side's product.
    lambda_after plays the same role for the later side.
    """

    alpha: float
    lambda_before: list[float] = field(default_factory=list)
    lambda_after: list[float] = field(default_factory=list)
    eta_alpha: float = 0.1
    eta_lambda: float = 0.05

    def __post_init__(self):
        if not 0.0 <= self.alpha <= 1.0:
            raise ValueError(f"alpha must be in [0, 1], got {self.alpha}")
        for lam in (*self.lambda_before, *self.lambda_after):
            if not LAMBDA_MIN <= lam <= LAMBDA_MAX:
                raise ValueError(
                    f"lambda {lam} outside [{LAMBDA_MIN}, {LAMBDA_MAX}]"
                )

    @classmethod
    def neutral(cls, history: int, alpha: float = 0.5, **kw) -> "ModelParams":
        """Unit distance weights for an n-word history on each side."""
        ones = [1.0] * max(0, history - 1)
        return cls(alpha=alpha, lambda_before=list(ones), lambda_after=list(ones), **kw)

    @classmethod
    def random(cls, history: int, rng, **kw) -> "ModelParams":
        """Uniform (0,1) draws, lambdas clamped into their operating range."""
        n = max(0, history - 1)
        return cls(
            alpha=rng.uniform(0.0, 1.0),
            lambda_before=[clamp_lambda(rng.uniform(0.0, 1.0)) for _ in range(n)],
            lambda_after=[clamp_lambda(rng.uniform(0.0, 1.0)) for _ in range(n)],
            **kw,
        )

    def copy(self) -> "ModelParams":
        return replace(
            self,
            lambda_before=list(self.lambda_before),
            lambda_after=list(self.lambda_after),
        )


@dataclass(frozen=True)
class GapContext:
    """A gap to fill: context word ids nearest-first on each side, candidates.

    before[0] is the word immediately preceding the gap, after[0] the word
    immediately following it. Out-of-vocabulary words carry OOV_ID; they keep
    their position (distances are positional) but contribute only floors.
    """

    before: tuple[int, ...]
    after: tuple[int, ...]
    candidates: tuple[int, ...]

    def __init__(self, before: Sequence[int], after: Sequence[int], candidates: Sequence[int]):
        object.__setattr__(self, "before", tuple(before))
        object.__setattr__(self, "after", tuple(after))
        object.__setattr__(self, "candidates", tuple(candidates))
        if not self.candidates:
            raise ValueError("candidate set is empty")


@dataclass(frozen=True)
class ScoredCandidate:
    """One ranked candidate with its blended and component scores."""

    index: int
    word_id: int
    bayes: float
    lsa: float
    theta: float


def rank_equalize(values: Sequence[float]) -> list[float]:
    """Replace scores by ascending ranks normalized by k(k+1)/2.

    Ties keep input order: the earlier element gets the lower rank. The
    output always sums to 1 and preserves the input ordering.
    """
    k = len(values)
    if k == 0:
        raise ValueError("cannot equalize an empty list")
    order = sorted(range(k), key=lambda i: (values[i], i))
    total = k * (k + 1) // 2
    out = [0.0] * k
    for rank0, idx in enumerate(order):
        out[idx] = (rank0 + 1) / total
    return out


def normalize_over_candidates(scores: Sequence[float]) -> list[float]:
    """Scale non-negative scores to sum to 1; an all-zero input turns uniform."""
    k = len(scores)
    if k == 0:
        raise ValueError("cannot normalize an empty list")
    if any(s < 0 for s in scores):
        raise ValueError("scores must be non-negative")
    total = math.fsum(scores)
    if total <= 0.0:
        return [1.0 / k] * k
    return [s / total for s in scores]


def hybrid_score(bayes: Sequence[float], lsa: Sequence[float], alpha: float) -> list[float]:
    """Convex blend alpha * B + (1 - alpha) * L, elementwise."""
    if len(bayes) != len(lsa):
        raise ValueError("score lists differ in length")
    if not 0.0 <= alpha <= 1.0:
        raise ValueError(f"alpha must be in [0, 1], got {alpha}")
    return [alpha * b + (1.0 - alpha) * l for b, l in zip(bayes, lsa)]


def _effective_history(requested: int | None, n_lambdas: int) -> int:
    cap = n_lambdas + 1
    if requested is None:
        return cap
    if requested < 1:
        raise ValueError("history must be >= 1")
    return min(requested, cap)


def _side_terms(
    graphs: CooccurrenceGraphSet,
    words: Sequence[int],
    candidates: Sequence[int],
    n_rows: int,
    smoothing: SmoothingPolicy,
    reverse: bool,
) -> list[list[float]]:
    """Equalized conditional terms, one row per distance 0..n_rows-1.

    Rows past the available context words are neutral (all ones): a missing
    position multiplies every candidate by 1 regardless of its exponent.
    """
    k = len(candidates)
    rows: list[list[float]] = []
    for d in range(n_rows):
        if d < len(words):
            w = words[d]
            if reverse:
                raw = [reversed_conditional(graphs, d, c, w, smoothing) for c in candidates]
            else:
                raw = [conditional(graphs, d, w, c, smoothing) for c in candidates]
            rows.append(rank_equalize(raw))
        else:
            rows.append([1.0] * k)
    return rows


def _exponents(lambdas: Sequence[float]) -> list[float]:
    """Distance exponents: [1/prod(lambdas), lambda_1, lambda_2, ...]."""
    return [1.0 / math.prod(lambdas), *lambdas]


def _log_products(
    vocab: Vocabulary,
    candidates: Sequence[int],
    t_before: list[list[float]],
    t_after: list[list[float]],
    lambda_before: Sequence[float],
    lambda_after: Sequence[float],
    smoothing: SmoothingPolicy,
) -> list[float]:
    exps_b = _exponents(lambda_before)
    exps_a = _exponents(lambda_after)
    logs = []
    for idx, cand in enumerate(candidates):
        try:
            p = prior(vocab, cand)
        except UnknownWord:
            p = smoothing.epsilon
        lp = math.log(p)
        for d, row in enumerate(t_before):
            lp += exps_b[d] * math.log(row[idx])
        for d, row in enumerate(t_after):
            lp += exps_a[d] * math.log(row[idx])
        logs.append(lp)
    return logs


def _log_sum_exp(logs: Sequence[float]) -> float:
    peak = max(logs)
    return peak + math.log(math.fsum(math.exp(x - peak) for x in logs))


@dataclass
class PredictDetail:
    """Every intermediate of one gap scoring, as the optimizer needs them."""

    candidates: tuple[int, ...]
    lambda_before: list[float]
    lambda_after: list[float]
    t_before: list[list[float]]
    t_after: list[list[float]]
    log_products: list[float]
    log_gamma: float
    bayes_ratio: list[float]
    bayes_eq: list[float]
    lsa_raw: list[float]
    lsa_eq: list[float]
    theta: list[float]
    context_ids: list[int]


def predict_detail(
    models,
    ctx: GapContext,
    params: ModelParams,
    history: int | None = None,
) -> PredictDetail:
    """Score ``ctx`` and expose all intermediates.

    ``models`` carries vocab, graphs, srt, and smoothing. ``history`` caps the
    context words consumed per side; the distance-weight vectors are truncated
    to match, and the semantic side sees exactly the words the co-occurrence
    side consumes.
    """
    h_before = _effective_history(history, len(params.lambda_before))
    h_after = _effective_history(history, len(params.lambda_after))
    lam_b = [float(x) for x in params.lambda_before[: h_before - 1]]
    lam_a = [float(x) for x in params.lambda_after[: h_after - 1]]
    words_b = list(ctx.before[:h_before])
    words_a = list(ctx.after[:h_after])
    cands = ctx.candidates
    smoothing = models.smoothing
    graphs = models.graphs

    t_before = _side_terms(graphs, words_b, cands, h_before, smoothing, reverse=False)
    t_after = _side_terms(graphs, words_a, cands, h_after, smoothing, reverse=True)

    logs = _log_products(models.vocab, cands, t_before, t_after, lam_b, lam_a, smoothing)
    log_gamma = _log_sum_exp(logs)
    bayes_ratio = [math.exp(lp - log_gamma) for lp in logs]
    bayes_eq = rank_equalize(bayes_ratio)

    context_ids = words_b + words_a
    srt = models.srt
    with_rows = [w for w in context_ids if srt.has_row(w)]
    lsa_raw = []
    for cand in cands:
        if with_rows and srt.has_row(cand):
            dsum = semantic_distance_sum(srt, cand, with_rows)
            lsa_raw.append(semantic_similarity(dsum, len(with_rows)))
        else:
            lsa_raw.append(0.0)
    lsa_eq = rank_equalize(lsa_raw)

    theta = hybrid_score(bayes_eq, lsa_eq, params.alpha)
    return PredictDetail(
        candidates=cands,
        lambda_before=lam_b,
        lambda_after=lam_a,
        t_before=t_before,
        t_after=t_after,
        log_products=logs,
        log_gamma=log_gamma,
        bayes_ratio=bayes_ratio,
        bayes_eq=bayes_eq,
        lsa_raw=lsa_raw,
        lsa_eq=lsa_eq,
        theta=theta,
        context_ids=context_ids,
    )


def bayes_raw_score(
    graphs: CooccurrenceGraphSet,
    vocab: Vocabulary,
    ctx: GapContext,
    params: ModelParams,
    j: int,
    smoothing: SmoothingPolicy | None = None,
    history: int | None = None,
) -> float:
    """Unnormalized weighted evidence product for candidate index ``j``.

    The per-distance conditionals are equalized across the candidate set
    before weighting. Empty sides contribute factor 1.
    """
    if smoothing is None:
        smoothing = SmoothingPolicy()
    h_before = _effective_history(history, len(params.lambda_before))
    h_after = _effective_history(history, len(params.lambda_after))
    lam_b = list(params.lambda_before[: h_before - 1])
    lam_a = list(params.lambda_after[: h_after - 1])
    t_before = _side_terms(
        graphs, list(ctx.before[:h_before]), ctx.candidates, h_before, smoothing, reverse=False
    )
    t_after = _side_terms(
        graphs, list(ctx.after[:h_after]), ctx.candidates, h_after, smoothing, reverse=True
    )
    logs = _log_products(vocab, ctx.candidates, t_before, t_after, lam_b, lam_a, smoothing)
    return math.exp(logs[j])


def predict(
    models,
    ctx: GapContext,
    params: ModelParams,
    history: int | None = None,
) -> list[ScoredCandidate]:
    """Rank the candidates by blended score, descending, ties in input order."""
    det = predict_detail(models, ctx, params, history)
    order = sorted(range(len(ctx.candidates)), key=lambda i: -det.theta[i])
    return [
        ScoredCandidate(
            index=i,
            word_id=ctx.candidates[i],
            bayes=det.bayes_eq[i],
            lsa=det.lsa_eq[i],
            theta=det.theta[i],
        )
        for i in order
    ]
