"""HTTP surface: POST /v1/score and GET /v1/health.

Score requests carry a request_id, a source string, and exactly two
distinct candidate tokens; responses echo the request_id with the greedy
first token, the two first-piece logits in candidate order, and model
info including multi-piece flags. Oversize batches get 413, invalid
requests 422 naming the request_id, model failures 500, and both
endpoints answer 503 until the model has loaded.
"""
from __future__ import annotations

from contextlib import asynccontextmanager

from fastapi import FastAPI, HTTPException
from pydantic import BaseModel

from .model import ScoringModel
from .settings import ServiceSettings


class WireRequest(BaseModel):
    request_id: str
    source: str
    candidates: list[str]


class ScoreBody(BaseModel):
    requests: list[WireRequest]


def _validate(request: WireRequest) -> None:
    detail = {"request_id": request.request_id}
    if not request.source:
        raise HTTPException(422, detail={**detail, "error": "source must be non-empty"})
    if len(request.candidates) != 2:
        raise HTTPException(
            422, detail={**detail, "error": "exactly two candidate tokens are required"}
        )
    first, second = request.candidates
    if not first or not second:
        raise HTTPException(
            422, detail={**detail, "error": "candidate tokens must be non-empty"}
        )
    if first == second:
        raise HTTPException(
            422, detail={**detail, "error": "candidate tokens must be distinct"}
        )


def create_app(settings: ServiceSettings | None = None, *, defer_load: bool = False) -> FastAPI:
    settings = settings or ServiceSettings.from_env()

    @asynccontextmanager
    async def lifespan(app: FastAPI):
        if not defer_load:
            app.state.model = ScoringModel(settings)
        yield

    app = FastAPI(title="winoscore-service", lifespan=lifespan)
    app.state.settings = settings
    app.state.model = None

    def current_model() -> ScoringModel:
        model = app.state.model
        if model is None:
            raise HTTPException(503, detail="model is loading")
        return model

    @app.post("/v1/score")
    def score(body: ScoreBody) -> dict:
        model = current_model()
        if len(body.requests) > settings.max_batch:
            raise HTTPException(
                413,
                detail=f"batch of {len(body.requests)} exceeds max_batch={settings.max_batch}",
            )
        for request in body.requests:
            _validate(request)
        sources = [request.source for request in body.requests]
        pairs = [(request.candidates[0], request.candidates[1]) for request in body.requests]
        try:
            results = model.score_batch(sources, pairs)
        except HTTPException:
            raise
        except Exception as exc:  # surface the offending batch member
            raise HTTPException(
                500,
                detail={
                    "request_id": body.requests[0].request_id if body.requests else None,
                    "error": f"model failure: {exc}",
                },
            ) from exc
        responses = []
        for request, result in zip(body.requests, results):
            model_info = {
                "model": model.name,
                "decode": {"strategy": "greedy", "steps": 1},
                "multi_piece": list(result.multi_piece),
            }
            if settings.debug:
                model_info["argmax_id"] = result.argmax_id
                model_info["argmax_logit"] = result.argmax_logit
            responses.append(
                {
                    "request_id": request.request_id,
                    "greedy_token": result.greedy_token,
                    "logits": list(result.logits),
                    "model_info": model_info,
                }
            )
        return {"responses": responses}

    @app.get("/v1/health")
    def health() -> dict:
        model = current_model()
        return {
            "status": "ok",
            "model": model.name,
            "decode": {"strategy": "greedy", "steps": 1},
            "candidate_tokens": model.vocabulary_report(),
        }

    return app
