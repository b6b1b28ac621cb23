"""Acceptance gate: one test per contract criterion, independent oracles only.

Run with ``pytest -v tests/test_acceptance.py`` to get one PASSED/FAILED line
per criterion. Every oracle here recomputes expected values from scratch
(exhaustive enumeration, direct scalar arithmetic, finite differences) rather
than reusing library internals.
"""

import math
import random
import time
from collections import Counter

import numpy as np
import pytest

from lexblend.cooccur import (
    SmoothingPolicy,
    conditional,
    prior,
    reversed_conditional,
    train_graphs,
)
from lexblend.corpus import Sentence, build_vocabulary, load_stopwords, tokenize_sentences
from lexblend.errors import UnknownWord
from lexblend.evaluate import make_folds, to_gap_context, to_train_steps
from lexblend.inference import (
    GapContext,
    ModelParams,
    predict,
    predict_detail,
    rank_equalize,
)
from lexblend.lsa import semantic_distance_sum, semantic_similarity
from lexblend.model import TrainConfig, train_model
from lexblend.optimize import grad_alpha, grad_lambda, run_optimization, step_error
from lexblend.persist import load, save

FIXTURE_TEXT = "The sky is blue. The blue is a color."


# --- criterion 1: fixture graph reproduction ---------------------------------


def test_criterion_1_fixture_graph_edge_sets():
    """Training on the two-sentence fixture reproduces the reference w0/w1
    edge sets exactly, including the weight-2 edge (the -> is), in under 1s."""
    started = time.perf_counter()
    sentences = tokenize_sentences(FIXTURE_TEXT, load_stopwords())
    vocab = build_vocabulary(sentences)
    graphs = train_graphs(sentences, vocab, 16)
    wid = vocab.id_of

    def edges(d):
        return {
            (i, j): w
            for i, row in graphs.graphs[d].items()
            for j, w in row.items()
        }

    expected_w0 = {
        (wid("the"), wid("sky")): 1,
        (wid("the"), wid("blue")): 1,
        (wid("sky"), wid("is")): 1,
        (wid("is"), wid("blue")): 1,
        (wid("is"), wid("a")): 1,
        (wid("blue"), wid("is")): 1,
        (wid("a"), wid("color")): 1,
    }
    expected_w1 = {
        (wid("the"), wid("is")): 2,
        (wid("sky"), wid("blue")): 1,
        (wid("blue"), wid("a")): 1,
        (wid("is"), wid("color")): 1,
    }
    assert edges(0) == expected_w0
    assert edges(1) == expected_w1
    assert edges(1)[(wid("the"), wid("is"))] == 2
    assert time.perf_counter() - started < 1.0


# --- criterion 2: rank equalization ------------------------------------------


def test_criterion_2_rank_equalization_exact():
    assert rank_equalize([0.5, 0.15, 0.3, 0.05]) == [0.4, 0.2, 0.3, 0.1]


# --- criterion 3: gradient correctness ---------------------------------------


def _log_weighted_product(prior_c, t, lams):
    lp = math.log(prior_c) + (1.0 / math.prod(lams)) * math.log(t[0])
    for d, lam in enumerate(lams, start=1):
        lp += lam * math.log(t[d])
    return lp


def test_criterion_3_gradients_match_finite_differences():
    """Analytic blend and distance-weight gradients vs central differences:
    1e-7 / 1e-5 relative over 100+ random states, under 10 seconds."""
    started = time.perf_counter()
    rng = random.Random(42)

    worst_alpha = 0.0
    for _ in range(300):
        b = rng.uniform(0.01, 0.95)
        l = rng.uniform(0.01, 0.95)
        a = rng.uniform(0.01, 0.99)
        analytic = grad_alpha(b, l, a * b + (1 - a) * l)
        h = 1e-3  # the error is quadratic in alpha: central diff is exact
        fd = (
            step_error((a + h) * b + (1 - a - h) * l)
            - step_error((a - h) * b + (1 - a + h) * l)
        ) / (2 * h)
        rel = abs(analytic - fd) / max(abs(analytic), abs(fd), 1e-12)
        worst_alpha = max(worst_alpha, rel)

    worst_lambda = 0.0
    lambda_states = 0
    for _ in range(300):
        n = rng.randint(1, 4)
        t = [rng.uniform(0.05, 1.0) for _ in range(n + 1)]
        if rng.random() < 0.2:
            t[rng.randrange(len(t))] = 1.0
        lams = [rng.uniform(0.1, 5.0) for _ in range(n)]
        alpha = rng.uniform(0.05, 0.95)
        lsa_c = rng.uniform(0.0, 0.5)
        prior_c = rng.uniform(1e-4, 0.3)
        gamma_other = rng.uniform(1e-6, 0.5)
        p0 = math.exp(_log_weighted_product(prior_c, t, lams))
        gamma = gamma_other + p0
        ratio = p0 / gamma
        for x in range(1, n + 1):
            analytic = grad_lambda(t, lams, x, alpha, ratio, lsa_c)
            h = 1e-6 * lams[x - 1]

            def lp_at(lam_x):
                lams2 = list(lams)
                lams2[x - 1] = lam_x
                return _log_weighted_product(prior_c, t, lams2)

            lp_p = lp_at(lams[x - 1] + h)
            lp_m = lp_at(lams[x - 1] - h)
            p_plus = math.exp(lp_p)
            dp = p_plus * math.expm1(lp_m - lp_p)  # P(-h) - P(+h)
            base = (1 - alpha) * lsa_c
            theta_p = base + alpha * p_plus / gamma
            theta_m = base + alpha * (p_plus + dp) / gamma
            fd = (alpha / gamma) * dp * (1 - 0.5 * (theta_p + theta_m)) / (2 * h)
            rel = abs(analytic - fd) / max(abs(analytic), abs(fd), 1e-12)
            worst_lambda = max(worst_lambda, rel)
            lambda_states += 1

    elapsed = time.perf_counter() - started
    assert lambda_states >= 100
    assert worst_alpha <= 1e-7, f"alpha gradient off by {worst_alpha:.3e}"
    assert worst_lambda <= 1e-5, f"lambda gradient off by {worst_lambda:.3e}"
    assert elapsed < 10.0


# --- criterion 4: optimization behavior on the synthetic benchmark -----------


def test_criterion_4_error_descends_on_all_five_configs(synth_model, synth_items):
    """30 epochs of descent from random (0,1) seeds: summed per-epoch error at
    epoch 30 strictly below epoch 1 on every fold configuration."""
    folds = make_folds(synth_items, seed=0)
    assert len(folds) == 5
    for fold in folds:
        opt_items = [synth_items[i] for i in fold.opt_indices]
        steps = to_train_steps(opt_items, synth_model.vocab)
        init = ModelParams.random(history=3, rng=random.Random(100 + fold.config_id))
        _, trace = run_optimization(synth_model, steps, init, epochs=30, history=3)
        errors = trace.epoch_errors
        assert len(errors) == 30
        assert errors[29] < errors[0], (
            f"config {fold.config_id}: epoch-30 error {errors[29]:.4f} "
            f"not below epoch-1 error {errors[0]:.4f}"
        )


# --- criterion 5: endpoint equivalences --------------------------------------


def _independent_bayes_order(model, ctx, params, history):
    """Bayes-only ranking rebuilt from primitives with plain scalar products."""
    sm, graphs, vocab = model.smoothing, model.graphs, model.vocab
    cands = ctx.candidates
    k = len(cands)

    def side(words, lambdas, reverse):
        h = min(history, len(lambdas) + 1)
        lams = [float(x) for x in lambdas[: h - 1]]
        used = list(words[:h])
        rows = []
        for d in range(h):
            if d < len(used):
                if reverse:
                    raw = [reversed_conditional(graphs, d, c, used[d], sm) for c in cands]
                else:
                    raw = [conditional(graphs, d, used[d], c, sm) for c in cands]
                rows.append(rank_equalize(raw))
            else:
                rows.append([1.0] * k)
        return rows, [1.0 / math.prod(lams), *lams]

    rows_b, exps_b = side(ctx.before, params.lambda_before, reverse=False)
    rows_a, exps_a = side(ctx.after, params.lambda_after, reverse=True)
    prods = []
    for i, cand in enumerate(cands):
        try:
            p = prior(vocab, cand)
        except UnknownWord:
            p = sm.epsilon
        for d, row in enumerate(rows_b):
            p *= row[i] ** exps_b[d]
        for d, row in enumerate(rows_a):
            p *= row[i] ** exps_a[d]
        prods.append(p)
    total = math.fsum(prods)
    bayes = rank_equalize([v / total for v in prods])
    return sorted(range(k), key=lambda i: -bayes[i])


def _independent_lsa_order(model, ctx, params, history):
    """Semantic-only ranking from raw vector arithmetic."""
    srt = model.srt
    h_b = min(history, len(params.lambda_before) + 1)
    h_a = min(history, len(params.lambda_after) + 1)
    context = list(ctx.before[:h_b]) + list(ctx.after[:h_a])
    context = [w for w in context if srt.has_row(w)]
    raw = []
    for cand in ctx.candidates:
        if not context or not srt.has_row(cand):
            raw.append(0.0)
            continue
        cvec = srt.vectors[cand].astype(np.float64)
        total = 0.0
        for w in context:
            diff = cvec - srt.vectors[w].astype(np.float64)
            total += 1.0 / (math.sqrt(float(np.dot(diff, diff))) + 1.0)
        raw.append(total / len(context))
    lsa = rank_equalize(raw)
    return sorted(range(len(raw)), key=lambda i: -lsa[i])


def test_criterion_5_blend_endpoints_equal_pure_scorers(synth_model, synth_items):
    """alpha=1 reproduces a standalone Bayes ranker and alpha=0 a standalone
    semantic ranker, item for item, as exact ranking equality."""
    lam = [1.3, 0.7]
    params_b = ModelParams(alpha=1.0, lambda_before=list(lam), lambda_after=list(lam))
    params_l = ModelParams(alpha=0.0, lambda_before=list(lam), lambda_after=list(lam))
    history = 3
    for item in synth_items:
        ctx = to_gap_context(item, synth_model.vocab)
        got_b = [c.index for c in predict(synth_model, ctx, params_b, history)]
        want_b = _independent_bayes_order(synth_model, ctx, params_b, history)
        assert got_b == want_b, f"bayes endpoint diverged on item {item.item_id}"
        got_l = [c.index for c in predict(synth_model, ctx, params_l, history)]
        want_l = _independent_lsa_order(synth_model, ctx, params_l, history)
        assert got_l == want_l, f"lsa endpoint diverged on item {item.item_id}"


# --- criterion 6: brute-force oracles on random toy corpora ------------------


def test_criterion_6_random_corpora_against_enumeration():
    """20+ random corpora: graphs match an O(n^2) enumerator, conditionals
    match direct count ratios, candidate probabilities sum to 1 +- 1e-12."""
    sm = SmoothingPolicy()
    for seed in range(24):
        rng = random.Random(1000 + seed)
        token_lists = [
            [rng.choice("abcdef") for _ in range(rng.randint(1, 10))]
            for _ in range(rng.randint(1, 6))
        ]
        max_d = rng.randint(1, 5)
        sentences = [
            Sentence(tokens=tuple(toks), source_id="", nonstop_count=len(toks))
            for toks in token_lists
        ]
        vocab = build_vocabulary(sentences)
        graphs = train_graphs(sentences, vocab, max_d)

        # exhaustive pair enumeration
        expected = [Counter() for _ in range(max_d)]
        for toks in token_lists:
            ids = [vocab.id_of(t) for t in toks]
            for p in range(len(ids)):
                for q in range(p + 1, len(ids)):
                    d = q - p - 1
                    if d < max_d:
                        expected[d][(ids[p], ids[q])] += 1
        for d in range(max_d):
            got = Counter(
                {
                    (i, j): w
                    for i, row in graphs.graphs[d].items()
                    for j, w in row.items()
                }
            )
            assert got == expected[d], f"seed {seed} distance {d}"

        # forward and reversed conditionals against direct count ratios
        for _ in range(20):
            d = rng.randrange(max_d)
            i = rng.randrange(len(vocab))
            j = rng.randrange(len(vocab))
            pair_count = expected[d][(i, j)]
            out_count = sum(w for (a, _), w in expected[d].items() if a == i)
            want = max(pair_count / out_count, sm.epsilon) if out_count else sm.epsilon
            assert conditional(graphs, d, i, j, sm) == pytest.approx(want, rel=1e-15)
            assert reversed_conditional(graphs, d, i, j, sm) == pytest.approx(
                want, rel=1e-15
            )

        # semantic scores against plain-python loops over vector components
        model = train_model(
            sentences,
            TrainConfig(max_distance=max_d, svd_rank=1, min_nonstop=0),
        )
        ids = list(range(len(vocab)))
        rowful = [i for i in ids if model.srt.has_row(i)]
        for _ in range(10):
            if not rowful:
                break
            cand = rng.choice(rowful)
            context = [rng.choice(ids) for _ in range(rng.randint(1, 4))]
            scored = [w for w in context if model.srt.has_row(w)]
            want = 0.0
            for w in scored:
                sq = 0.0
                for a, b in zip(model.srt.vectors[cand], model.srt.vectors[w]):
                    sq += (float(a) - float(b)) ** 2
                want += 1.0 / (math.sqrt(sq) + 1.0)
            got = semantic_distance_sum(model.srt, cand, context)
            assert got == pytest.approx(want, rel=1e-12, abs=1e-15)
            if scored:
                assert semantic_similarity(got, len(scored)) == pytest.approx(
                    want / len(scored), rel=1e-12
                )

        # normalized candidate scores form a distribution
        if len(ids) < 2:
            continue
        for _ in range(5):
            k = rng.randint(2, min(5, len(ids)))
            cands = tuple(rng.sample(ids, k))
            before = tuple(rng.sample(ids, min(rng.randint(0, 2), len(ids))))
            after = tuple(rng.sample(ids, min(rng.randint(0, 2), len(ids))))
            if not before and not after:
                before = (ids[0],)
            ctx = GapContext(before=before, after=after, candidates=cands)
            params = ModelParams.neutral(history=min(3, max_d))
            det = predict_detail(model, ctx, params)
            assert math.fsum(det.bayes_ratio) == pytest.approx(1.0, abs=1e-12)


# --- criterion 7: full-scale reproduction (documented, not a CI gate) --------


def test_criterion_7_full_scale_reproduction_documented():
    pytest.skip(
        "full-scale run (hundreds of books, hours): target mean accuracy "
        "0.442 +- 0.03 with the blend weight settling near [0.2, 0.4]; "
        "driver in scripts/run_msr_experiment.py, expectations in README"
    )


# --- criterion 8: determinism ------------------------------------------------


def test_criterion_8_train_save_load_eval_bit_stable(tmp_path, synth_items):
    """Two identical runs produce byte-identical containers and identical
    held-out accuracy after a save/load round trip."""
    from lexblend.evaluate import accuracy
    from lexblend.synth import synthetic_corpus

    stopwords = load_stopwords()
    config = TrainConfig(max_distance=16, svd_rank=8, min_nonstop=5, svd_seed=0)
    paths = []
    for run in (1, 2):
        sentences = tokenize_sentences(synthetic_corpus(50, seed=0), stopwords)
        model = train_model(sentences, config)
        path = tmp_path / f"run{run}.lxb"
        save(model, ModelParams.neutral(history=16), path)
        paths.append(path)
    assert paths[0].read_bytes() == paths[1].read_bytes()

    accs = []
    for path in paths:
        model, params = load(path)
        accs.append(accuracy(synth_items[:80], model, params, history=3))
    assert accs[0] == accs[1]
