"""Decomposition of one problem into two hypothesis/premise source strings.

The hypothesis is the option text followed by everything after the blank;
the premise is everything before it. Options are inserted verbatim (no
case change, no article insertion), the only whitespace handling is a
single-space collapse at the option/suffix seam and a trailing-whitespace
trim on the premise. The two instances of a problem are always emitted
Option1 first.
"""
from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path
from typing import IO, Iterable, Sequence

from .dataset import Choice, Problem, find_blank
from .errors import MissingAnswerError

HYPOTHESIS_PREFIX = "hypothesis: "
PREMISE_SEPARATOR = " premise: "


@dataclass(frozen=True)
class BlankSplit:
    """Sentence text on either side of the blank marker."""

    prefix: str
    suffix: str

    def reconstruct(self) -> str:
        return self.prefix + "_" + self.suffix


@dataclass(frozen=True)
class TargetTokenPair:
    """The contrastive answer-token strings a model is scored against."""

    positive: str
    negative: str

    def __post_init__(self) -> None:
        if not self.positive or not self.negative:
            raise ValueError("target tokens must be non-empty")
        if self.positive == self.negative:
            raise ValueError("target tokens must be distinct")
        if any(ch.isspace() for ch in self.positive + self.negative):
            raise ValueError("target tokens must not contain whitespace")

    def __str__(self) -> str:
        return f"{self.positive}/{self.negative}"


ENTAILMENT_CONTRADICTION = TargetTokenPair("entailment", "contradiction")
TRUE_FALSE = TargetTokenPair("true", "false")


@dataclass(frozen=True)
class RenderedInstance:
    """One decomposed source string and the option slot it embeds."""

    source: str
    option_slot: Choice
    qid: str


def split_at_blank(sentence: str) -> BlankSplit:
    """Split a sentence at its single blank marker.

    prefix + "_" + suffix reconstructs the sentence byte-exactly.
    """
    pos = find_blank(sentence)
    return BlankSplit(prefix=sentence[:pos], suffix=sentence[pos + 1 :])


def _join_collapsing_seam(left: str, right: str) -> str:
    """Concatenate, collapsing any multi-space run straddling the seam to one space."""
    start = len(left)
    while start > 0 and left[start - 1] == " ":
        start -= 1
    end = 0
    while end < len(right) and right[end] == " ":
        end += 1
    run = (len(left) - start) + end
    if run >= 2:
        return left[:start] + " " + right[end:]
    return left + right


def render_instance(problem: Problem, slot: Choice) -> RenderedInstance:
    """Build the source string embedding the given option.

    Layout: "hypothesis: " + option + suffix + " premise: " + premise,
    where the premise is the prefix with trailing whitespace trimmed and
    the option/suffix seam is collapsed to a single space. No other bytes
    are altered; a sentence-initial blank yields an empty premise body.
    """
    split = split_at_blank(problem.sentence)
    hypothesis = _join_collapsing_seam(problem.option(slot), split.suffix)
    premise = split.prefix.rstrip()
    return RenderedInstance(
        source=f"{HYPOTHESIS_PREFIX}{hypothesis}{PREMISE_SEPARATOR}{premise}",
        option_slot=slot,
        qid=problem.qid,
    )


def render_both(problem: Problem) -> tuple[RenderedInstance, RenderedInstance]:
    """Both instances of a problem, Option1 first."""
    return render_instance(problem, Choice.OPTION1), render_instance(problem, Choice.OPTION2)


def build_training_pairs(
    problem: Problem, tokens: TargetTokenPair
) -> tuple[tuple[str, str], tuple[str, str]]:
    """Turn one labeled problem into its two (source, target) training pairs.

    The instance embedding the gold option gets the positive token, the
    other the negative token. Pair order is (Option1 instance, Option2
    instance) regardless of which is gold.
    """
    if problem.answer is None:
        raise MissingAnswerError(f"problem {problem.qid!r} has no gold answer")
    first, second = render_both(problem)
    targets = {
        problem.answer: tokens.positive,
        problem.answer.other: tokens.negative,
    }
    return (
        (first.source, targets[Choice.OPTION1]),
        (second.source, targets[Choice.OPTION2]),
    )


_TSV_ESCAPES = {"\\": "\\\\", "\t": "\\t", "\n": "\\n", "\r": "\\r"}


def _escape_tsv(text: str) -> str:
    for raw, escaped in _TSV_ESCAPES.items():
        text = text.replace(raw, escaped)
    return text


def emit_training_file(
    problems: Iterable[Problem],
    tokens: TargetTokenPair,
    sink: str | Path | IO[str],
) -> int:
    """Write tab-separated source<TAB>target lines, two per problem, in input order.

    Literal backslashes, tabs, newlines, and carriage returns inside a
    source are escaped as two-character sequences so lines stay parseable.
    Returns the number of pairs written.
    """
    if isinstance(sink, (str, Path)):
        with open(sink, "w", encoding="utf-8") as handle:
            return emit_training_file(problems, tokens, handle)
    count = 0
    for problem in problems:
        for source, target in build_training_pairs(problem, tokens):
            sink.write(f"{_escape_tsv(source)}\t{target}\n")
            count += 1
    return count


def training_sources(problems: Sequence[Problem]) -> list[RenderedInstance]:
    """All rendered instances for a sequence of problems, two per problem, in order."""
    instances: list[RenderedInstance] = []
    for problem in problems:
        instances.extend(render_both(problem))
    return instances
