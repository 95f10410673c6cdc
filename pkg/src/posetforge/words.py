"""Serialization helpers for letter words and trie vertex ids."""

from __future__ import annotations

ROOT_ID = "root"
EPSILON_ID = "eps"


def word_str(letters) -> str:
    """Digit string when every letter is a single digit, else comma-separated."""
    letters = tuple(letters)
    if not letters:
        return ""
    if max(letters) <= 9 and min(letters) >= 0:
        return "".join(str(a) for a in letters)
    return ",".join(str(a) for a in letters)


def parse_word(text: str) -> tuple[int, ...]:
    text = text.strip()
    if "," in text:
        return tuple(int(p) for p in text.split(","))
    return tuple(int(c) for c in text)


def prefix_id(letters) -> str:
    """Vertex id for a word prefix; the empty prefix is the trie root."""
    letters = tuple(letters)
    return word_str(letters) if letters else ROOT_ID
