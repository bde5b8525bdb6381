"""Service configuration from environment variables with CLI overrides."""
from __future__ import annotations

import os
from dataclasses import dataclass

DEFAULT_CANDIDATES = ("entailment", "contradiction", "true", "false")

ENV_MODEL = "WINOSVC_MODEL"
ENV_PORT = "WINOSVC_PORT"
ENV_MAX_BATCH = "WINOSVC_MAX_BATCH"
ENV_DEVICE = "WINOSVC_DEVICE"
ENV_SEED = "WINOSVC_SEED"
ENV_DEBUG = "WINOSVC_DEBUG"
ENV_CANDIDATES = "WINOSVC_CANDIDATES"


@dataclass
class ServiceSettings:
    """Runtime knobs for the scoring service.

    model is either "tiny" (the built-in seeded model, no downloads) or a
    HuggingFace model name/path resolvable in this environment. The
    candidate registry lists the answer tokens whose vocabulary mapping
    the health endpoint reports; word_vocab seeds the built-in tokenizer's
    single-piece words.
    """

    model: str = "tiny"
    host: str = "127.0.0.1"
    port: int = 8000
    max_batch: int = 64
    device: str = "cpu"
    seed: int = 1234
    debug: bool = False
    candidate_registry: tuple[str, ...] = DEFAULT_CANDIDATES
    word_vocab: tuple[str, ...] = DEFAULT_CANDIDATES

    @classmethod
    def from_env(cls, **overrides) -> "ServiceSettings":
        settings = cls()
        if os.environ.get(ENV_MODEL):
            settings.model = os.environ[ENV_MODEL]
        if os.environ.get(ENV_PORT):
            settings.port = int(os.environ[ENV_PORT])
        if os.environ.get(ENV_MAX_BATCH):
            settings.max_batch = int(os.environ[ENV_MAX_BATCH])
        if os.environ.get(ENV_DEVICE):
            settings.device = os.environ[ENV_DEVICE]
        if os.environ.get(ENV_SEED):
            settings.seed = int(os.environ[ENV_SEED])
        if os.environ.get(ENV_DEBUG):
            settings.debug = os.environ[ENV_DEBUG].lower() in ("1", "true", "yes", "on")
        if os.environ.get(ENV_CANDIDATES):
            tokens = tuple(
                t.strip() for t in os.environ[ENV_CANDIDATES].split(",") if t.strip()
            )
            settings.candidate_registry = tokens
            settings.word_vocab = tokens
        for key, value in overrides.items():
            if value is not None:
                setattr(settings, key, value)
        return settings
