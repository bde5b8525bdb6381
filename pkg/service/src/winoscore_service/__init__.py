"""Stateless scoring service for seq2seq first-token answer evaluation."""
from .app import create_app
from .model import ScoringModel, TINY_MODEL_NAME
from .settings import ServiceSettings
from .tokenizer import CompactTokenizer

__all__ = [
    "CompactTokenizer",
    "ScoringModel",
    "ServiceSettings",
    "TINY_MODEL_NAME",
    "create_app",
]
