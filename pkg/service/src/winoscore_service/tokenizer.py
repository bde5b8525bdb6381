"""Self-contained tokenizer for the built-in model: whole-word pieces for a
configured vocabulary, character pieces for everything else.

Registered answer tokens are single vocabulary pieces, mirroring how the
usual sentencepiece vocabularies treat common class words; arbitrary other
words fall back to characters, so any source text tokenizes without
downloads.
"""
from __future__ import annotations

import string
from typing import Sequence

PAD, EOS, UNK = "<pad>", "</s>", "<unk>"
_CHARSET = string.ascii_letters + string.digits + string.punctuation + " "


class CompactTokenizer:
    def __init__(self, words: Sequence[str] = ()) -> None:
        self._pieces: list[str] = [PAD, EOS, UNK]
        self._word_ids: dict[str, int] = {}
        for word in words:
            if word and word not in self._word_ids:
                self._word_ids[word] = len(self._pieces)
                self._pieces.append(word)
        self._char_ids: dict[str, int] = {}
        for ch in _CHARSET:
            self._char_ids[ch] = len(self._pieces)
            self._pieces.append(ch)

    @property
    def vocab_size(self) -> int:
        return len(self._pieces)

    @property
    def pad_id(self) -> int:
        return 0

    @property
    def eos_id(self) -> int:
        return 1

    def piece_text(self, piece_id: int) -> str:
        return self._pieces[piece_id]

    def pieces(self, text: str) -> list[int]:
        """Piece ids for one token string, without EOS."""
        ids: list[int] = []
        for index, word in enumerate(text.split(" ")):
            if index:
                ids.append(self._char_ids[" "])
            if word in self._word_ids:
                ids.append(self._word_ids[word])
            else:
                ids.extend(self._char_ids.get(ch, 2) for ch in word)
        return ids

    def encode(self, text: str) -> list[int]:
        return self.pieces(text) + [self.eos_id]
