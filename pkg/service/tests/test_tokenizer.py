from __future__ import annotations

from winoscore_service import CompactTokenizer


def test_registered_words_are_single_pieces():
    tokenizer = CompactTokenizer(["entailment", "contradiction"])
    assert len(tokenizer.pieces("entailment")) == 1
    assert len(tokenizer.pieces("contradiction")) == 1


def test_unregistered_words_fall_back_to_characters():
    tokenizer = CompactTokenizer(["entailment"])
    pieces = tokenizer.pieces("zebra")
    assert len(pieces) == 5
    assert [tokenizer.piece_text(p) for p in pieces] == list("zebra")


def test_piece_round_trip():
    tokenizer = CompactTokenizer(["true", "false"])
    pieces = tokenizer.pieces("true or false")
    assert "".join(tokenizer.piece_text(p) for p in pieces) == "true or false"


def test_encode_appends_eos():
    tokenizer = CompactTokenizer(["true"])
    assert tokenizer.encode("true")[-1] == tokenizer.eos_id


def test_unknown_characters_map_to_unk():
    tokenizer = CompactTokenizer([])
    pieces = tokenizer.pieces("café")
    assert pieces[-1] == 2
    assert tokenizer.piece_text(2) == "<unk>"


def test_duplicate_words_register_once():
    tokenizer = CompactTokenizer(["true", "true", "false"])
    assert tokenizer.pieces("true") == tokenizer.pieces("true")
    assert len(tokenizer.pieces("false")) == 1
