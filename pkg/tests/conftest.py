from __future__ import annotations

import random

import pytest

from winoscore import Choice, Problem

# Worked example from the dataset's documentation card; the two decomposed
# source strings below are the byte-exact golden outputs for it.
WORKED_SENTENCE = (
    "He never comes to my home, but I always go to his house because the _ is smaller."
)
WORKED_RECORD = (
    '{"qID":"wk1","sentence":"He never comes to my home, but I always go to his house '
    'because the _ is smaller.","option1":"home","option2":"house","answer":"1"}'
)
GOLDEN_SOURCE_1 = (
    "hypothesis: home is smaller. premise: He never comes to my home, "
    "but I always go to his house because the"
)
GOLDEN_SOURCE_2 = (
    "hypothesis: house is smaller. premise: He never comes to my home, "
    "but I always go to his house because the"
)

_NOUNS = [
    "table", "chair", "bottle", "suitcase", "trophy",
    "pencil", "drawer", "basket", "ladder", "mirror",
]
_ADJECTIVES = ["small", "large", "heavy", "light", "old", "new", "narrow", "wide"]


def make_problems(n: int, seed: int, *, with_answers: bool = True) -> list[Problem]:
    """Synthetic problems with unique sentences and i.i.d. uniform gold answers."""
    rng = random.Random(seed)
    problems = []
    for i in range(n):
        option1, option2 = rng.sample(_NOUNS, 2)
        adjective = rng.choice(_ADJECTIVES)
        sentence = (
            f"The {option1} could not be stored with the {option2} in locker {i} "
            f"because the _ was too {adjective}."
        )
        answer = rng.choice((Choice.OPTION1, Choice.OPTION2)) if with_answers else None
        problems.append(
            Problem(
                qid=f"syn{i:05d}",
                sentence=sentence,
                option1=option1,
                option2=option2,
                answer=answer,
            )
        )
    return problems


@pytest.fixture
def worked_problem() -> Problem:
    return Problem(
        qid="wk1",
        sentence=WORKED_SENTENCE,
        option1="home",
        option2="house",
        answer=Choice.OPTION1,
    )
