"""Split evaluation and the learning-curve AUC metric.

evaluate_split drives decompose -> predict -> resolve -> compare for every
problem and aggregates exactly; per-item records are always retained so the
case histogram stays auditable. learning_curve_auc applies the trapezoidal
rule over equally spaced training-size points normalized to unit width (the
leaderboard convention), with log-size spacing available as an option.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass
from pathlib import Path
from typing import IO, Iterable, Sequence

from .backend import Backend, ScoreRequest
from .dataset import Choice, Problem
from .errors import BackendError
from .scoring import Prediction, resolve_greedy, resolve_logit
from .templating import TargetTokenPair, render_both


@dataclass(frozen=True)
class EvalConfig:
    """One evaluation condition: token pair plus resolution mode."""

    tokens: TargetTokenPair
    use_logit: bool = True
    mode_label: str = ""

    def label(self) -> str:
        if self.mode_label:
            return self.mode_label
        return f"tokens={self.tokens} logit={'on' if self.use_logit else 'off'}"


@dataclass(frozen=True)
class ItemRecord:
    """Per-problem resolution outcome kept in every report."""

    qid: str
    choice: Choice
    case_id: int
    scores: tuple[float, float] | None
    tie_broken: bool
    correct: bool | None


@dataclass(frozen=True)
class SkippedItem:
    qid: str
    error: str


@dataclass(frozen=True)
class EvalReport:
    """Aggregated split results with full per-item audit trail."""

    split_label: str
    mode_label: str
    tokens: TargetTokenPair
    use_logit: bool
    n_items: int
    n_correct: int
    accuracy: float
    case_histogram: dict[int, int]
    tie_count: int
    items: tuple[ItemRecord, ...]
    skipped: tuple[SkippedItem, ...] = ()

    def __post_init__(self) -> None:
        if self.n_correct > self.n_items:
            raise ValueError("n_correct cannot exceed n_items")
        if sum(self.case_histogram.values()) != self.n_items:
            raise ValueError("case histogram must sum to n_items")
        expected = self.n_correct / self.n_items if self.n_items else 0.0
        if self.accuracy != expected:
            raise ValueError("accuracy must equal n_correct / n_items exactly")

    def to_dict(self) -> dict:
        return {
            "split": self.split_label,
            "mode": self.mode_label,
            "tokens": {"positive": self.tokens.positive, "negative": self.tokens.negative},
            "use_logit": self.use_logit,
            "n_items": self.n_items,
            "n_correct": self.n_correct,
            "accuracy": self.accuracy,
            "case_histogram": {str(k): v for k, v in sorted(self.case_histogram.items())},
            "tie_count": self.tie_count,
            "items": [
                {
                    "qid": item.qid,
                    "choice": item.choice.value,
                    "case_id": item.case_id,
                    "scores": list(item.scores) if item.scores is not None else None,
                    "tie_broken": item.tie_broken,
                    "correct": item.correct,
                }
                for item in self.items
            ],
            "skipped": [{"qid": s.qid, "error": s.error} for s in self.skipped],
        }

    def write_json(self, path: str | Path) -> None:
        Path(path).write_text(json.dumps(self.to_dict(), indent=2) + "\n", encoding="utf-8")


def _score_problems(
    problems: Sequence[Problem],
    backend: Backend,
    config: EvalConfig,
    *,
    skip_failures: bool,
) -> tuple[list[tuple[Problem, Prediction, Prediction]], list[SkippedItem]]:
    """Fan out both instances of every problem and pair the predictions back up."""
    requests: list[ScoreRequest] = []
    for problem in problems:
        first, second = render_both(problem)
        requests.append(ScoreRequest(f"{problem.qid}#1", first.source, config.tokens))
        requests.append(ScoreRequest(f"{problem.qid}#2", second.source, config.tokens))
    results = backend.predict_batch(requests, raise_on_error=not skip_failures)
    scored: list[tuple[Problem, Prediction, Prediction]] = []
    skipped: list[SkippedItem] = []
    for index, problem in enumerate(problems):
        pred_a, pred_b = results[2 * index], results[2 * index + 1]
        failure = next((p for p in (pred_a, pred_b) if isinstance(p, BackendError)), None)
        if failure is not None:
            skipped.append(SkippedItem(qid=problem.qid, error=str(failure)))
            continue
        scored.append((problem, pred_a, pred_b))
    return scored, skipped


def evaluate_split(
    problems: Sequence[Problem],
    backend: Backend,
    config: EvalConfig,
    *,
    split_label: str = "dev",
    skip_failures: bool = False,
) -> EvalReport:
    """Evaluate a labeled split and aggregate accuracy exactly.

    Backend failures abort the run unless skip_failures is set, in which
    case affected problems are excluded from the aggregate and listed in
    the report (silent skips would bias accuracy, so they are never quiet).
    """
    resolve = resolve_logit if config.use_logit else resolve_greedy
    scored, skipped = _score_problems(
        problems, backend, config, skip_failures=skip_failures
    )
    items: list[ItemRecord] = []
    histogram = {1: 0, 2: 0, 3: 0, 4: 0}
    n_correct = 0
    tie_count = 0
    for problem, pred_a, pred_b in scored:
        if problem.answer is None:
            raise ValueError(f"problem {problem.qid!r} has no gold answer")
        resolution = resolve(pred_a, pred_b, config.tokens)
        correct = resolution.choice is problem.answer
        n_correct += correct
        tie_count += resolution.tie_broken
        histogram[resolution.case_id] += 1
        items.append(
            ItemRecord(
                qid=problem.qid,
                choice=resolution.choice,
                case_id=resolution.case_id,
                scores=resolution.scores,
                tie_broken=resolution.tie_broken,
                correct=correct,
            )
        )
    n_items = len(items)
    return EvalReport(
        split_label=split_label,
        mode_label=config.label(),
        tokens=config.tokens,
        use_logit=config.use_logit,
        n_items=n_items,
        n_correct=n_correct,
        accuracy=n_correct / n_items if n_items else 0.0,
        case_histogram=histogram,
        tie_count=tie_count,
        items=tuple(items),
        skipped=tuple(skipped),
    )


def zero_shot_eval(
    problems: Sequence[Problem],
    backend: Backend,
    config: EvalConfig,
    *,
    split_label: str = "dev",
    skip_failures: bool = False,
) -> EvalReport:
    """evaluate_split with the report labeled as a zero-shot run."""
    label = config.mode_label or "zero-shot"
    labeled = EvalConfig(tokens=config.tokens, use_logit=config.use_logit, mode_label=label)
    return evaluate_split(
        problems, backend, labeled, split_label=split_label, skip_failures=skip_failures
    )


def predict_unlabeled(
    problems: Sequence[Problem],
    backend: Backend,
    config: EvalConfig,
    *,
    skip_failures: bool = False,
) -> list[tuple[str, Choice]]:
    """Resolve problems that may lack gold answers, in input order."""
    resolve = resolve_logit if config.use_logit else resolve_greedy
    scored, _ = _score_problems(problems, backend, config, skip_failures=skip_failures)
    return [
        (problem.qid, resolve(pred_a, pred_b, config.tokens).choice)
        for problem, pred_a, pred_b in scored
    ]


def write_leaderboard_csv(
    predictions: Iterable[tuple[str, Choice]], sink: str | Path | IO[str]
) -> int:
    """Write leaderboard lines "qID,choice" with choice in {1,2}; returns line count."""
    if isinstance(sink, (str, Path)):
        with open(sink, "w", encoding="utf-8") as handle:
            return write_leaderboard_csv(predictions, handle)
    count = 0
    for qid, choice in predictions:
        sink.write(f"{qid},{choice.value}\n")
        count += 1
    return count


@dataclass(frozen=True)
class CurvePoint:
    label: str
    accuracy: float
    size: int | None = None


@dataclass(frozen=True)
class LearningCurve:
    """Ordered (training-size label, accuracy) points, smallest size first."""

    points: tuple[CurvePoint, ...]

    def __post_init__(self) -> None:
        if len(self.points) < 2:
            raise ValueError("a learning curve needs at least 2 points")
        labels = [p.label for p in self.points]
        if len(set(labels)) != len(labels):
            raise ValueError("curve labels must be unique")
        for point in self.points:
            if not 0.0 <= point.accuracy <= 1.0:
                raise ValueError(f"accuracy {point.accuracy} at {point.label!r} outside [0, 1]")

    @classmethod
    def from_accuracies(
        cls, accuracies: Sequence[float], labels: Sequence[str] | None = None
    ) -> "LearningCurve":
        if labels is None:
            labels = [f"p{i}" for i in range(len(accuracies))]
        return cls(tuple(CurvePoint(l, a) for l, a in zip(labels, accuracies)))


def learning_curve_auc(curve: LearningCurve, *, spacing: str = "equal") -> float:
    """Area under the accuracy-vs-training-size curve, normalized to unit width.

    Equal spacing (the default) places the points at uniform abscissae:
    auc = [a0/2 + a1 + ... + a(n-2) + a(n-1)/2] / (n-1). Log spacing uses
    log(size) abscissae instead and requires sizes on every point.
    """
    points = curve.points
    if spacing == "equal":
        xs = [float(i) for i in range(len(points))]
    elif spacing == "log":
        if any(p.size is None or p.size <= 0 for p in points):
            raise ValueError("log spacing requires a positive size on every curve point")
        xs = [math.log(p.size) for p in points]  # type: ignore[arg-type]
        if any(b <= a for a, b in zip(xs, xs[1:])):
            raise ValueError("log spacing requires strictly increasing sizes")
    else:
        raise ValueError(f"unknown spacing {spacing!r}; expected 'equal' or 'log'")
    area = 0.0
    for (x0, p0), (x1, p1) in zip(zip(xs, points), zip(xs[1:], points[1:])):
        area += (x1 - x0) * (p0.accuracy + p1.accuracy) / 2.0
    return area / (xs[-1] - xs[0])
