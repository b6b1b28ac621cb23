"""Gradient-descent fitting of the blend weight and distance weights.

Each training step scores one known-answer gap, measures the squared
shortfall of the correct candidate's blended score from 1, and descends:

    E = (1 - theta_c)^2 / 2
    dE/dalpha    = -(1 - theta_c) (B_c - L_c)
    dE/dlambda_x = -alpha (1 - theta) Bhat_c (ln t_x - ln t_0 / (lambda_x^2 prod_{y!=x} lambda_y))

where for the lambda gradient the equalized terms t, the normalizer, the
semantic score, and alpha are constants of the step, and Bhat_c is the
weighted product over the normalizer (its pre-equalization share). Updates
apply alpha first, then every lambda, all from gradients taken at the step's
starting parameters; lambdas clamp to their operating range after each step.
"""
from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

from .errors import DegenerateTerm
from .inference import (
    GapContext,
    ModelParams,
    clamp_alpha,
    clamp_lambda,
    predict_detail,
)


@dataclass(frozen=True)
class TrainStep:
    """One optimization example: a gap plus the index of its correct candidate."""

    gap: GapContext
    correct_index: int

    def __post_init__(self):
        if not 0 <= self.correct_index < len(self.gap.candidates):
            raise ValueError("correct_index outside the candidate list")


@dataclass(frozen=True)
class StepRecord:
    """Post-update parameter snapshot plus the step's pre-update error."""

    epoch: int
    step: int
    error: float
    alpha: float
    lambda_before: tuple[float, ...]
    lambda_after: tuple[float, ...]


@dataclass
class OptTrace:
    """Per-step optimization history."""

    records: list[StepRecord] = field(default_factory=list)

    @property
    def epoch_errors(self) -> list[float]:
        """Summed step error per epoch, in epoch order."""
        totals: dict[int, float] = {}
        for rec in self.records:
            totals[rec.epoch] = totals.get(rec.epoch, 0.0) + rec.error
        return [totals[e] for e in sorted(totals)]

    @property
    def alpha_history(self) -> list[float]:
        return [rec.alpha for rec in self.records]

    @property
    def lambda_before_history(self) -> list[tuple[float, ...]]:
        return [rec.lambda_before for rec in self.records]

    @property
    def lambda_after_history(self) -> list[tuple[float, ...]]:
        return [rec.lambda_after for rec in self.records]

    def write_csv(self, path: str | Path) -> None:
        """Columns: epoch, step, error, alpha, lambda_b1.., lambda_a1.."""
        path = Path(path)
        n_b = len(self.records[0].lambda_before) if self.records else 0
        n_a = len(self.records[0].lambda_after) if self.records else 0
        header = (
            ["epoch", "step", "error", "alpha"]
            + [f"lambda_b{i + 1}" for i in range(n_b)]
            + [f"lambda_a{i + 1}" for i in range(n_a)]
        )
        with path.open("w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(header)
            for rec in self.records:
                writer.writerow(
                    [rec.epoch, rec.step, repr(rec.error), repr(rec.alpha)]
                    + [repr(x) for x in rec.lambda_before]
                    + [repr(x) for x in rec.lambda_after]
                )

    @classmethod
    def read_csv(cls, path: str | Path) -> "OptTrace":
        trace = cls()
        with Path(path).open(newline="") as fh:
            reader = csv.reader(fh)
            header = next(reader)
            n_b = sum(1 for h in header if h.startswith("lambda_b"))
            for row in reader:
                fixed, rest = row[:4], row[4:]
                trace.records.append(
                    StepRecord(
                        epoch=int(fixed[0]),
                        step=int(fixed[1]),
                        error=float(fixed[2]),
                        alpha=float(fixed[3]),
                        lambda_before=tuple(float(x) for x in rest[:n_b]),
                        lambda_after=tuple(float(x) for x in rest[n_b:]),
                    )
                )
        return trace


def step_error(theta_c: float) -> float:
    """Half squared shortfall of the correct candidate's blended score."""
    return 0.5 * (1.0 - theta_c) ** 2


def grad_alpha(b_c: float, l_c: float, theta_c: float) -> float:
    """dE/dalpha with the equalized component scores held fixed."""
    return -(1.0 - theta_c) * (b_c - l_c)


def grad_lambda(
    t: Sequence[float],
    lambdas: Sequence[float],
    x: int,
    alpha: float,
    bayes_ratio_c: float,
    lsa_c: float,
) -> float:
    """dE/dlambda_x for one side's distance weight (x = distance, 1-based).

    ``t`` holds the correct candidate's equalized terms for that side,
    t[0] for distance 0 (neutral 1.0 entries stand in for missing context).
    ``bayes_ratio_c`` is the candidate's weighted product over the
    normalizer; the blend here uses it directly, since the printed
    derivative differentiates the pre-equalization error form.
    """
    if not 1 <= x <= len(lambdas):
        raise ValueError(f"lambda index {x} outside 1..{len(lambdas)}")
    if any(term <= 0.0 for term in t):
        raise DegenerateTerm("equalized terms must be positive")
    theta = alpha * bayes_ratio_c + (1.0 - alpha) * lsa_c
    lam_x = lambdas[x - 1]
    others = 1.0
    for y, lam in enumerate(lambdas, start=1):
        if y != x:
            others *= lam
    inner = math.log(t[x]) - math.log(t[0]) / (lam_x * lam_x * others)
    return -alpha * (1.0 - theta) * bayes_ratio_c * inner


def run_optimization(
    models,
    steps: Sequence[TrainStep],
    params: ModelParams,
    epochs: int,
    history: int | None = None,
) -> tuple[ModelParams, OptTrace]:
    """Cycle through ``steps`` for ``epochs`` passes of stochastic descent.

    Deterministic: steps are visited in order, no internal randomness.
    Returns updated parameters (the input object is not mutated) and the
    per-step trace. epochs=0 returns the parameters unchanged.
    """
    params = params.copy()
    trace = OptTrace()
    for epoch in range(1, epochs + 1):
        for step_idx, step in enumerate(steps):
            det = predict_detail(models, step.gap, params, history)
            c = step.correct_index
            theta_c = det.theta[c]
            error = step_error(theta_c)

            g_alpha = grad_alpha(det.bayes_eq[c], det.lsa_eq[c], theta_c)
            t_b = [row[c] for row in det.t_before]
            t_a = [row[c] for row in det.t_after]
            grads_b = [
                grad_lambda(t_b, det.lambda_before, x, params.alpha, det.bayes_ratio[c], det.lsa_eq[c])
                for x in range(1, len(det.lambda_before) + 1)
            ]
            grads_a = [
                grad_lambda(t_a, det.lambda_after, x, params.alpha, det.bayes_ratio[c], det.lsa_eq[c])
                for x in range(1, len(det.lambda_after) + 1)
            ]

            params.alpha = clamp_alpha(params.alpha - g_alpha * params.eta_alpha)
            for i, g in enumerate(grads_b):
                params.lambda_before[i] = clamp_lambda(
                    params.lambda_before[i] - g * params.eta_lambda
                )
            for i, g in enumerate(grads_a):
                params.lambda_after[i] = clamp_lambda(
                    params.lambda_after[i] - g * params.eta_lambda
                )

            trace.records.append(
                StepRecord(
                    epoch=epoch,
                    step=step_idx,
                    error=error,
                    alpha=params.alpha,
                    lambda_before=tuple(params.lambda_before),
                    lambda_after=tuple(params.lambda_after),
                )
            )
    return params, trace
