"""Parsing, validation, and iteration of the WinoGrande JSONL dataset format.

One record per line with fields qID / sentence / option1 / option2 and an
optional gold answer encoded as "1" or "2". Unknown extra fields are ignored
for forward compatibility. Bytes are preserved as-is; no normalization of
option text or sentence punctuation happens here.
"""
from __future__ import annotations

import enum
import json
from dataclasses import dataclass, replace
from pathlib import Path
from typing import Iterable

from .errors import (
    CountMismatchError,
    InvalidAnswerError,
    InvalidOptionsError,
    MalformedRecordError,
    ManifestError,
    MissingAnswerError,
    MissingBlankError,
    MultipleBlanksError,
)

SPLIT_LABELS = ("XS", "S", "M", "L", "XL", "dev", "test")


class Choice(enum.Enum):
    """One of the two fill-in options; values match the dataset's answer encoding."""

    OPTION1 = "1"
    OPTION2 = "2"

    @property
    def other(self) -> "Choice":
        return Choice.OPTION2 if self is Choice.OPTION1 else Choice.OPTION1


_ANSWER_ENCODING = {"1": Choice.OPTION1, "2": Choice.OPTION2}


def _is_boundary(ch: str) -> bool:
    # Whitespace or punctuation bounds a blank marker; underscores and
    # alphanumerics do not, so "snake_case" never reads as a blank.
    return ch.isspace() or (not ch.isalnum() and ch != "_")


def find_blank(sentence: str) -> int:
    """Return the index of the single blank marker in ``sentence``.

    A marker is one underscore bounded by start/end of string, whitespace,
    or punctuation. Raises MultipleBlanksError if the sentence holds more
    than one underscore character (a hard error: decomposition is undefined),
    and MissingBlankError if no valid marker exists.
    """
    underscores = [i for i, ch in enumerate(sentence) if ch == "_"]
    if len(underscores) > 1:
        raise MultipleBlanksError(
            f"sentence contains {len(underscores)} underscores; exactly one blank marker is required"
        )
    if not underscores:
        raise MissingBlankError("sentence contains no blank marker")
    pos = underscores[0]
    left_ok = pos == 0 or _is_boundary(sentence[pos - 1])
    right_ok = pos == len(sentence) - 1 or _is_boundary(sentence[pos + 1])
    if not (left_ok and right_ok):
        raise MissingBlankError(
            "underscore is embedded in a word and does not form a blank marker"
        )
    return pos


@dataclass(frozen=True)
class Problem:
    """One fill-in-the-blank item: a sentence with a single blank and two options."""

    qid: str
    sentence: str
    option1: str
    option2: str
    answer: Choice | None = None

    def __post_init__(self) -> None:
        try:
            find_blank(self.sentence)
        except (MissingBlankError, MultipleBlanksError) as exc:
            raise type(exc)(f"{exc} (qid={self.qid!r})") from None
        if not self.option1 or not self.option2:
            raise InvalidOptionsError(f"options must be non-empty (qid={self.qid!r})")
        if self.option1 == self.option2:
            raise InvalidOptionsError(f"options must be distinct (qid={self.qid!r})")

    def option(self, slot: Choice) -> str:
        return self.option1 if slot is Choice.OPTION1 else self.option2

    def with_answer(self, answer: Choice | None) -> "Problem":
        return replace(self, answer=answer)


@dataclass(frozen=True)
class SplitSpec:
    """Manifest entry for one split: label, file location, optional expected count."""

    label: str
    path: Path
    size: int | None = None

    def __post_init__(self) -> None:
        if self.label not in SPLIT_LABELS:
            raise ManifestError(
                f"unknown split label {self.label!r}; expected one of {', '.join(SPLIT_LABELS)}"
            )

    @property
    def requires_answers(self) -> bool:
        return self.label != "test"


def parse_problem(line: str, *, require_answer: bool = False) -> Problem:
    """Parse one JSONL record into a validated Problem.

    The gold answer, when present, is mapped from the dataset's "1"/"2"
    encoding to Choice. Unknown extra fields are ignored.
    """
    try:
        record = json.loads(line)
    except json.JSONDecodeError as exc:
        raise MalformedRecordError(f"malformed JSON: {exc.msg}") from None
    if not isinstance(record, dict):
        raise MalformedRecordError("record must be a JSON object")

    qid = record.get("qID")
    for name in ("qID", "sentence", "option1", "option2"):
        if name not in record:
            raise MalformedRecordError(
                f"missing field {name!r}" + (f" (qid={qid!r})" if qid else "")
            )
        if not isinstance(record[name], str):
            raise MalformedRecordError(
                f"field {name!r} must be a string" + (f" (qid={qid!r})" if qid else "")
            )

    answer: Choice | None = None
    if "answer" in record and record["answer"] is not None:
        raw = record["answer"]
        if raw not in _ANSWER_ENCODING:
            raise InvalidAnswerError(
                f"answer {raw!r} is not '1' or '2' (qid={qid!r})"
            )
        answer = _ANSWER_ENCODING[raw]
    elif require_answer:
        raise MalformedRecordError(f"missing gold answer (qid={qid!r})")

    return Problem(
        qid=record["qID"],
        sentence=record["sentence"],
        option1=record["option1"],
        option2=record["option2"],
        answer=answer,
    )


def serialize_problem(problem: Problem) -> str:
    """Render a Problem back to its JSONL record form (inverse of parse_problem)."""
    record: dict[str, str] = {
        "qID": problem.qid,
        "sentence": problem.sentence,
        "option1": problem.option1,
        "option2": problem.option2,
    }
    if problem.answer is not None:
        record["answer"] = problem.answer.value
    return json.dumps(record, ensure_ascii=False)


def load_jsonl(path: str | Path, *, require_answers: bool = False) -> list[Problem]:
    """Read a bare JSONL file into Problems, in file order.

    Parse failures are re-raised with the offending line number; blank
    lines are skipped.
    """
    problems: list[Problem] = []
    with open(path, encoding="utf-8") as handle:
        for line_number, line in enumerate(handle, start=1):
            if not line.strip():
                continue
            try:
                problems.append(parse_problem(line, require_answer=require_answers))
            except (MalformedRecordError, InvalidAnswerError, InvalidOptionsError,
                    MissingBlankError, MultipleBlanksError) as exc:
                raise type(exc)(f"{path}:{line_number}: {exc}") from None
    return problems


def load_split(spec: SplitSpec) -> list[Problem]:
    """Read a split file into Problems, in file order.

    Labeled splits require every record to carry a gold answer; the test
    split permits absent answers. When the manifest declares an expected
    size, the actual count must match.
    """
    problems = load_jsonl(spec.path, require_answers=spec.requires_answers)
    if spec.size is not None and len(problems) != spec.size:
        raise CountMismatchError(
            f"{spec.path}: expected {spec.size} items for split {spec.label!r}, found {len(problems)}"
        )
    return problems


def load_manifest(path: str | Path) -> dict[str, SplitSpec]:
    """Load a dataset manifest mapping split labels to file paths and expected sizes.

    Format: a JSON object {"splits": {label: {"path": ..., "size": ...}}};
    paths are resolved relative to the manifest's directory. Expected counts
    live here, not in code, so dataset revisions only touch configuration.
    """
    path = Path(path)
    try:
        raw = json.loads(path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise ManifestError(f"{path}: malformed manifest JSON: {exc.msg}") from None
    splits = raw.get("splits")
    if not isinstance(splits, dict):
        raise ManifestError(f"{path}: manifest must contain a 'splits' object")
    specs: dict[str, SplitSpec] = {}
    for label, entry in splits.items():
        if not isinstance(entry, dict) or "path" not in entry:
            raise ManifestError(f"{path}: split {label!r} must define a 'path'")
        size = entry.get("size")
        if size is not None and (not isinstance(size, int) or size < 0):
            raise ManifestError(f"{path}: split {label!r} size must be a non-negative integer")
        specs[label] = SplitSpec(
            label=label, path=path.parent / entry["path"], size=size
        )
    return specs


def require_answers(problems: Iterable[Problem]) -> None:
    """Raise MissingAnswerError naming the first problem without a gold answer."""
    for problem in problems:
        if problem.answer is None:
            raise MissingAnswerError(f"problem {problem.qid!r} has no gold answer")
