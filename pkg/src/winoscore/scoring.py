"""Answer resolution over the two per-problem predictions.

Four joint outcomes of the two greedy tokens are distinguished:

  1. contrastive: one instance decoded the positive token, the other the negative
  2. exactly one decoded an in-pair token
  3. neither decoded an in-pair token
  4. both decoded the same in-pair token

Greedy mode reads only the decoded tokens; logit mode softmaxes the two
candidate-token logits per instance and picks the instance with the higher
positive-token probability. Exact ties resolve to Option1 and are flagged.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

from .dataset import Choice
from .templating import TargetTokenPair

CASE_CONTRASTIVE = 1
CASE_ONE_IN_PAIR = 2
CASE_NONE_IN_PAIR = 3
CASE_SAME_IN_PAIR = 4


@dataclass(frozen=True)
class Prediction:
    """A backend's greedy-decoded first token plus the two candidate-token logits.

    candidate_logits is ordered (positive token, negative token). A backend
    honoring the greedy contract guarantees that an in-pair greedy token has
    the larger of the two logits, since a full-vocabulary argmax dominates
    any sub-pair.
    """

    greedy_token: str
    candidate_logits: tuple[float, float]

    def __post_init__(self) -> None:
        pos, neg = self.candidate_logits
        if not (math.isfinite(pos) and math.isfinite(neg)):
            raise ValueError(f"candidate logits must be finite, got {self.candidate_logits}")


@dataclass(frozen=True)
class Resolution:
    """Outcome of resolving one problem's two predictions."""

    choice: Choice
    case_id: int
    scores: tuple[float, float] | None
    tie_broken: bool


def softmax_pair(logit_pos: float, logit_neg: float) -> tuple[float, float]:
    """Stable two-way softmax; returns (p_pos, p_neg) summing to exactly 1."""
    if not (math.isfinite(logit_pos) and math.isfinite(logit_neg)):
        raise ValueError(f"logits must be finite, got ({logit_pos}, {logit_neg})")
    shift = max(logit_pos, logit_neg)
    exp_pos = math.exp(logit_pos - shift)
    exp_neg = math.exp(logit_neg - shift)
    p_pos = exp_pos / (exp_pos + exp_neg)
    return p_pos, 1.0 - p_pos


def classify_case(
    pred_a: Prediction, pred_b: Prediction, tokens: TargetTokenPair
) -> int:
    """Which of the four joint greedy-token outcomes occurred (1..4)."""
    in_pair = {tokens.positive, tokens.negative}
    a_in = pred_a.greedy_token in in_pair
    b_in = pred_b.greedy_token in in_pair
    if a_in and b_in:
        if pred_a.greedy_token == pred_b.greedy_token:
            return CASE_SAME_IN_PAIR
        return CASE_CONTRASTIVE
    if a_in or b_in:
        return CASE_ONE_IN_PAIR
    return CASE_NONE_IN_PAIR


def resolve_logit(
    pred_a: Prediction, pred_b: Prediction, tokens: TargetTokenPair
) -> Resolution:
    """Resolve by positive-token probability.

    pred_a belongs to the Option1 instance, pred_b to Option2. Case 1 is
    decided by the greedy tokens (provably the probability argmax for any
    backend honoring the greedy contract); cases 2-4 take the instance
    with the higher positive-token probability. An exact tie goes to
    Option1 and is flagged.
    """
    case_id = classify_case(pred_a, pred_b, tokens)
    p_a, _ = softmax_pair(*pred_a.candidate_logits)
    p_b, _ = softmax_pair(*pred_b.candidate_logits)
    scores = (p_a, p_b)
    if case_id == CASE_CONTRASTIVE:
        choice = Choice.OPTION1 if pred_a.greedy_token == tokens.positive else Choice.OPTION2
        return Resolution(choice=choice, case_id=case_id, scores=scores, tie_broken=False)
    if p_a == p_b:
        return Resolution(choice=Choice.OPTION1, case_id=case_id, scores=scores, tie_broken=True)
    choice = Choice.OPTION1 if p_a > p_b else Choice.OPTION2
    return Resolution(choice=choice, case_id=case_id, scores=scores, tie_broken=False)


def resolve_greedy(
    pred_a: Prediction, pred_b: Prediction, tokens: TargetTokenPair
) -> Resolution:
    """Resolve from the greedy tokens alone, never consulting logits.

    Case 1: the positive-decoding instance wins. Case 2: an instance that
    decoded the positive token beats any other token, and one that decoded
    the negative token loses to any other token. Cases 3 and 4 carry no
    signal and fall back to Option1, flagged as tie-broken.
    """
    case_id = classify_case(pred_a, pred_b, tokens)
    if case_id == CASE_CONTRASTIVE:
        choice = Choice.OPTION1 if pred_a.greedy_token == tokens.positive else Choice.OPTION2
        return Resolution(choice=choice, case_id=case_id, scores=None, tie_broken=False)
    if case_id == CASE_ONE_IN_PAIR:
        if tokens.positive in (pred_a.greedy_token, pred_b.greedy_token):
            choice = Choice.OPTION1 if pred_a.greedy_token == tokens.positive else Choice.OPTION2
        else:
            # One instance decoded the negative token; the other wins.
            choice = Choice.OPTION2 if pred_a.greedy_token == tokens.negative else Choice.OPTION1
        return Resolution(choice=choice, case_id=case_id, scores=None, tie_broken=False)
    return Resolution(choice=Choice.OPTION1, case_id=case_id, scores=None, tie_broken=True)
