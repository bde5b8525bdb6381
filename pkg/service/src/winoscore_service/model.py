"""Model wrapper: one encoder pass, first decoder step, candidate logits.

Two loading paths share one scoring implementation. "tiny" builds a small
encoder-decoder from a fixed config with seeded weights, so the service
runs without any downloaded checkpoint and gives identical logits across
restarts for the same seed; any other model string is loaded through
transformers and must resolve locally or via a reachable hub.

Each source is scored in its own forward pass, serialized behind a lock,
so a request's logits never depend on what else shares its batch; callers
observe latency differences only.
"""
from __future__ import annotations

import threading
from dataclasses import dataclass
from typing import Sequence

import torch

from .settings import ServiceSettings
from .tokenizer import CompactTokenizer

TINY_MODEL_NAME = "tiny-seeded-t5"


@dataclass(frozen=True)
class ScoreResult:
    greedy_token: str
    logits: tuple[float, float]
    multi_piece: tuple[bool, bool]
    argmax_id: int
    argmax_logit: float


class ScoringModel:
    """Scores (source, two candidate tokens) via the first decoding step."""

    def __init__(self, settings: ServiceSettings) -> None:
        self.settings = settings
        self._lock = threading.Lock()
        if settings.model == "tiny":
            self.name = TINY_MODEL_NAME
            self._init_tiny(settings)
        else:
            self.name = settings.model
            self._init_pretrained(settings)
        self._model.eval()

    def _init_tiny(self, settings: ServiceSettings) -> None:
        from transformers import T5Config, T5ForConditionalGeneration

        self._compact = CompactTokenizer(settings.word_vocab)
        self._hf_tokenizer = None
        config = T5Config(
            vocab_size=self._compact.vocab_size,
            d_model=64,
            d_kv=16,
            d_ff=128,
            num_layers=2,
            num_decoder_layers=2,
            num_heads=4,
            decoder_start_token_id=self._compact.pad_id,
            pad_token_id=self._compact.pad_id,
            eos_token_id=self._compact.eos_id,
        )
        torch.manual_seed(settings.seed)
        self._model = T5ForConditionalGeneration(config).to(settings.device)
        self._decoder_start = self._compact.pad_id

    def _init_pretrained(self, settings: ServiceSettings) -> None:
        from transformers import AutoModelForSeq2SeqLM, AutoTokenizer

        self._compact = None
        self._hf_tokenizer = AutoTokenizer.from_pretrained(settings.model)
        self._model = AutoModelForSeq2SeqLM.from_pretrained(settings.model).to(
            settings.device
        )
        start = self._model.config.decoder_start_token_id
        if start is None:
            start = self._model.config.pad_token_id
        self._decoder_start = int(start)

    # --- tokenizer access shared by both paths ---

    def token_pieces(self, token: str) -> list[int]:
        if self._compact is not None:
            return self._compact.pieces(token)
        return list(
            self._hf_tokenizer(token, add_special_tokens=False).input_ids
        )

    def piece_text(self, piece_id: int) -> str:
        if self._compact is not None:
            return self._compact.piece_text(piece_id)
        return self._hf_tokenizer.decode([piece_id])

    def _encode(self, source: str) -> torch.Tensor:
        if self._compact is not None:
            return torch.tensor([self._compact.encode(source)])
        return self._hf_tokenizer(source, return_tensors="pt").input_ids

    # --- scoring ---

    def _first_step_logits(self, source: str) -> torch.Tensor:
        input_ids = self._encode(source)
        decoder_input = torch.tensor([[self._decoder_start]])
        with self._lock, torch.no_grad():
            output = self._model(
                input_ids=input_ids.to(self.settings.device),
                decoder_input_ids=decoder_input.to(self.settings.device),
            )
        return output.logits[0, 0, :].cpu()

    def score_batch(
        self, sources: Sequence[str], candidates: Sequence[tuple[str, str]]
    ) -> list[ScoreResult]:
        results: list[ScoreResult] = []
        for source, (first, second) in zip(sources, candidates):
            row = self._first_step_logits(source)
            argmax_id = int(row.argmax())
            pair_ids = [self.token_pieces(first), self.token_pieces(second)]
            if any(not pieces for pieces in pair_ids):
                raise ValueError("candidate token produced no vocabulary pieces")
            results.append(
                ScoreResult(
                    greedy_token=self.piece_text(argmax_id),
                    logits=(float(row[pair_ids[0][0]]), float(row[pair_ids[1][0]])),
                    multi_piece=(len(pair_ids[0]) > 1, len(pair_ids[1]) > 1),
                    argmax_id=argmax_id,
                    argmax_logit=float(row[argmax_id]),
                )
            )
        return results

    def full_distribution(self, source: str) -> torch.Tensor:
        """Complete first-step logit vector, for debug/verification only."""
        return self._first_step_logits(source)

    def vocabulary_report(self) -> list[dict]:
        report = []
        for token in self.settings.candidate_registry:
            pieces = self.token_pieces(token)
            report.append(
                {
                    "token": token,
                    "pieces": len(pieces),
                    "single_piece": len(pieces) == 1,
                }
            )
        return report
