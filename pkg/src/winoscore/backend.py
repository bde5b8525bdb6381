"""Model-inference backends.

The abstract interface returns, per source string, the greedy-decoded first
target token and the first-step logits of the two candidate tokens; the
softmax lives in the scoring layer so the numerically sensitive step has a
single implementation. Scripted backends give deterministic predictions for
tests; the remote backend speaks the inference-service wire protocol with
bounded concurrency and retried transport.
"""
from __future__ import annotations

import random
import time
from abc import ABC, abstractmethod
from concurrent.futures import ThreadPoolExecutor, as_completed
from dataclasses import dataclass
from typing import Callable, Iterable, Mapping, Sequence

import httpx

from .dataset import Problem
from .errors import (
    BackendError,
    BackendTimeoutError,
    MalformedResponseError,
    ScriptMissError,
    TransportError,
)
from .scoring import Prediction
from .templating import TargetTokenPair, render_both

ORACLE_POSITIVE_LOGITS = (2.0, -2.0)
ORACLE_NEGATIVE_LOGITS = (-2.0, 2.0)


@dataclass(frozen=True)
class ScoreRequest:
    """One scoring request: a source string and the candidate token pair."""

    request_id: str
    source: str
    candidate_tokens: TargetTokenPair

    def __post_init__(self) -> None:
        if not self.source:
            raise ValueError(f"request {self.request_id!r} has an empty source")


@dataclass(frozen=True)
class BackendConfig:
    """Remote-backend tuning: endpoint, concurrency bound, timeout, retry policy."""

    endpoint: str = "http://127.0.0.1:8000"
    max_in_flight: int = 4
    timeout: float = 30.0
    retries: int = 2
    batch_size: int = 16
    backoff_initial: float = 0.05
    backoff_max: float = 2.0

    def __post_init__(self) -> None:
        if self.max_in_flight < 1:
            raise ValueError("max_in_flight must be >= 1")
        if self.batch_size < 1:
            raise ValueError("batch_size must be >= 1")
        if self.retries < 0:
            raise ValueError("retries must be >= 0")


class Backend(ABC):
    """Shared interface: single prediction plus order-preserving batch fan-out."""

    max_in_flight: int = 4

    @abstractmethod
    def predict(self, request: ScoreRequest) -> Prediction:
        """Score one request. Raises a BackendError subclass on failure."""

    def predict_batch(
        self, requests: Iterable[ScoreRequest], *, raise_on_error: bool = True
    ) -> list[Prediction | BackendError]:
        """Score a batch, returning results in request order.

        At most max_in_flight requests are in flight at once. With
        raise_on_error (the default) the first failing request aborts the
        batch; otherwise failures appear as BackendError values at their
        request's position without poisoning the successes.
        """
        requests = list(requests)
        ids = [r.request_id for r in requests]
        if len(set(ids)) != len(ids):
            raise ValueError("request_ids must be unique within a batch")
        if not requests:
            return []
        results: list[Prediction | BackendError | None] = [None] * len(requests)
        with ThreadPoolExecutor(max_workers=self.max_in_flight) as pool:
            futures = {
                pool.submit(self.predict, request): index
                for index, request in enumerate(requests)
            }
            for future in as_completed(futures):
                index = futures[future]
                try:
                    results[index] = future.result()
                except BackendError as exc:
                    results[index] = exc
        errors = [(i, r) for i, r in enumerate(results) if isinstance(r, BackendError)]
        if errors and raise_on_error:
            raise errors[0][1]
        return results  # type: ignore[return-value]


ScriptEntry = Prediction | BackendError | Callable[[ScoreRequest], Prediction]


class ScriptedBackend(Backend):
    """Deterministic backend driven by a lookup table.

    Keys match the request source byte-exactly by default; key_by
    "request_id" switches to id-keyed lookup. Entries may be Predictions,
    BackendError instances (raised when hit, for fault injection), or
    callables of the request. An optional default covers unmatched keys;
    without one an unmatched request raises ScriptMissError.
    """

    def __init__(
        self,
        script: Mapping[str, ScriptEntry],
        *,
        default: ScriptEntry | None = None,
        key_by: str = "source",
        delay: Callable[[ScoreRequest], float] | None = None,
        max_in_flight: int = 4,
    ) -> None:
        if key_by not in ("source", "request_id"):
            raise ValueError(f"key_by must be 'source' or 'request_id', got {key_by!r}")
        self.script = dict(script)
        self.default = default
        self.key_by = key_by
        self.delay = delay
        self.max_in_flight = max_in_flight

    def predict(self, request: ScoreRequest) -> Prediction:
        if self.delay is not None:
            time.sleep(self.delay(request))
        key = request.source if self.key_by == "source" else request.request_id
        entry = self.script.get(key, self.default)
        if entry is None:
            raise ScriptMissError(f"no script entry for request {request.request_id!r}")
        if callable(entry):
            entry = entry(request)
        if isinstance(entry, BackendError):
            raise entry
        return entry


def oracle_backend(
    problems: Sequence[Problem],
    tokens: TargetTokenPair,
    *,
    invert: bool = False,
) -> ScriptedBackend:
    """Backend that answers a labeled split perfectly (or perfectly wrongly).

    The instance embedding the gold option decodes the positive token with
    logits (2.0, -2.0); the other decodes the negative token with the
    logits swapped. Every problem therefore lands in the contrastive case.
    """
    script: dict[str, Prediction] = {}
    for problem in problems:
        if problem.answer is None:
            raise ValueError(f"oracle requires gold answers (qid={problem.qid!r})")
        for instance in render_both(problem):
            is_gold = instance.option_slot is problem.answer
            if invert:
                is_gold = not is_gold
            script[instance.source] = (
                Prediction(tokens.positive, ORACLE_POSITIVE_LOGITS)
                if is_gold
                else Prediction(tokens.negative, ORACLE_NEGATIVE_LOGITS)
            )
    return ScriptedBackend(script)


def random_backend(
    tokens: TargetTokenPair,
    seed: int,
    *,
    out_of_set_rate: float = 0.25,
) -> ScriptedBackend:
    """Backend with uniform-random logits, derived per source.

    Randomness is seeded from (seed, source), so identical inputs yield
    identical predictions across calls, runs, and request orderings. The
    greedy token is the in-pair argmax except at out_of_set_rate, where an
    out-of-pair token is decoded instead, populating all four cases.
    """

    def scripted(request: ScoreRequest) -> Prediction:
        rng = random.Random(f"{seed}\x1f{request.source}")
        logit_pos = rng.uniform(-4.0, 4.0)
        logit_neg = rng.uniform(-4.0, 4.0)
        if rng.random() < out_of_set_rate:
            greedy = "unrelated"
        else:
            greedy = tokens.positive if logit_pos > logit_neg else tokens.negative
        return Prediction(greedy, (logit_pos, logit_neg))

    return ScriptedBackend({}, default=scripted)


def constant_backend(tokens: TargetTokenPair) -> ScriptedBackend:
    """Backend decoding the positive token with equal logits for every source."""
    return ScriptedBackend({}, default=Prediction(tokens.positive, (0.0, 0.0)))


class RemoteBackend(Backend):
    """HTTP client for the inference-service wire protocol.

    Batches requests into POST /v1/score calls of at most batch_size,
    keeps at most max_in_flight calls in flight, and retries transport
    failures, timeouts, and 5xx replies with exponential backoff and
    jitter. Responses are matched back to requests by request_id, so the
    interface order never depends on wire completion order.
    """

    def __init__(self, config: BackendConfig, *, client: httpx.Client | None = None) -> None:
        self.config = config
        self.max_in_flight = config.max_in_flight
        self._client = client or httpx.Client(timeout=config.timeout)
        self._jitter = random.Random()

    def close(self) -> None:
        self._client.close()

    def __enter__(self) -> "RemoteBackend":
        return self

    def __exit__(self, *exc_info: object) -> None:
        self.close()

    def predict(self, request: ScoreRequest) -> Prediction:
        return self._score_chunk([request])[0]

    def predict_batch(
        self, requests: Iterable[ScoreRequest], *, raise_on_error: bool = True
    ) -> list[Prediction | BackendError]:
        requests = list(requests)
        ids = [r.request_id for r in requests]
        if len(set(ids)) != len(ids):
            raise ValueError("request_ids must be unique within a batch")
        if not requests:
            return []
        size = self.config.batch_size
        chunks = [requests[i : i + size] for i in range(0, len(requests), size)]
        results: list[Prediction | BackendError | None] = [None] * len(requests)
        with ThreadPoolExecutor(max_workers=self.max_in_flight) as pool:
            futures = {
                pool.submit(self._score_chunk, chunk): chunk_index
                for chunk_index, chunk in enumerate(chunks)
            }
            for future in as_completed(futures):
                chunk_index = futures[future]
                base = chunk_index * size
                try:
                    for offset, prediction in enumerate(future.result()):
                        results[base + offset] = prediction
                except BackendError as exc:
                    for offset in range(len(chunks[chunk_index])):
                        results[base + offset] = exc
        errors = [r for r in results if isinstance(r, BackendError)]
        if errors and raise_on_error:
            raise errors[0]
        return results  # type: ignore[return-value]

    def _score_chunk(self, chunk: Sequence[ScoreRequest]) -> list[Prediction]:
        payload = {
            "requests": [
                {
                    "request_id": request.request_id,
                    "source": request.source,
                    "candidates": [
                        request.candidate_tokens.positive,
                        request.candidate_tokens.negative,
                    ],
                }
                for request in chunk
            ]
        }
        body = self._post_with_retries(payload)
        return self._parse_chunk(body, chunk)

    def _post_with_retries(self, payload: dict) -> dict:
        url = self.config.endpoint.rstrip("/") + "/v1/score"
        attempts = self.config.retries + 1
        last_error: BackendError | None = None
        for attempt in range(attempts):
            if attempt:
                backoff = min(
                    self.config.backoff_initial * (2 ** (attempt - 1)),
                    self.config.backoff_max,
                )
                time.sleep(backoff * (0.5 + self._jitter.random()))
            try:
                response = self._client.post(url, json=payload, timeout=self.config.timeout)
            except httpx.TimeoutException as exc:
                last_error = BackendTimeoutError(
                    f"timeout contacting {url} (attempt {attempt + 1}/{attempts}): {exc}"
                )
                continue
            except httpx.TransportError as exc:
                last_error = TransportError(
                    f"transport failure contacting {url} (attempt {attempt + 1}/{attempts}): {exc}"
                )
                continue
            if response.status_code >= 500:
                last_error = TransportError(
                    f"{url} returned {response.status_code} (attempt {attempt + 1}/{attempts})"
                )
                continue
            if response.status_code != 200:
                raise MalformedResponseError(
                    f"{url} returned {response.status_code}: {response.text[:200]}"
                )
            try:
                return response.json()
            except ValueError as exc:
                raise MalformedResponseError(f"{url} returned non-JSON body: {exc}") from None
        assert last_error is not None
        raise last_error

    @staticmethod
    def _parse_chunk(body: dict, chunk: Sequence[ScoreRequest]) -> list[Prediction]:
        responses = body.get("responses")
        if not isinstance(responses, list):
            raise MalformedResponseError("response body lacks a 'responses' list")
        by_id: dict[str, dict] = {}
        for entry in responses:
            if not isinstance(entry, dict) or "request_id" not in entry:
                raise MalformedResponseError("response entry lacks a request_id")
            by_id[entry["request_id"]] = entry
        predictions: list[Prediction] = []
        for request in chunk:
            entry = by_id.get(request.request_id)
            if entry is None:
                raise MalformedResponseError(
                    f"no response for request {request.request_id!r}"
                )
            logits = entry.get("logits")
            if (
                not isinstance(logits, (list, tuple))
                or len(logits) != 2
                or not all(isinstance(v, (int, float)) for v in logits)
            ):
                raise MalformedResponseError(
                    f"response for {request.request_id!r} lacks a two-value logits list"
                )
            greedy = entry.get("greedy_token")
            if not isinstance(greedy, str):
                raise MalformedResponseError(
                    f"response for {request.request_id!r} lacks greedy_token"
                )
            try:
                predictions.append(Prediction(greedy, (float(logits[0]), float(logits[1]))))
            except ValueError as exc:
                raise MalformedResponseError(
                    f"response for {request.request_id!r}: {exc}"
                ) from None
        return predictions
