"""Reduced words in the free group F_n.

Letters are signed integers: ``i`` stands for v_i and ``-i`` for its inverse.
A :class:`Word` is always freely reduced.  The hot loops elsewhere in the
package work on the raw ``letters`` tuples through :func:`reduce_letters`
and :func:`apply_images` and only wrap results at API boundaries.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence

ALIASES = "abcdefghijklmnopqrstuvwxyz"
_TOKEN = re.compile(r"^(?:v(\d+)|([a-z]))(?:\^(-?\d+))?$")


class RankError(ValueError):
    """A letter or word does not fit the ambient rank."""


def letter_key(x: int) -> tuple[int, int]:
    """Total order on letters: v1 < v1^-1 < v2 < v2^-1 < ..."""
    return (abs(x), 0 if x > 0 else 1)


def word_key(letters: Sequence[int]) -> tuple:
    """Shortlex key on raw words, used for every canonical ordering."""
    return (len(letters), tuple(letter_key(x) for x in letters))


def reduce_letters(seq: Iterable[int]) -> tuple[int, ...]:
    out: list[int] = []
    for x in seq:
        if out and out[-1] == -x:
            out.pop()
        else:
            out.append(x)
    return tuple(out)


def invert_letters(letters: Sequence[int]) -> tuple[int, ...]:
    return tuple(-x for x in reversed(letters))


def apply_images(images: Sequence[Sequence[int]], letters: Sequence[int]) -> tuple[int, ...]:
    """Substitute generator images into a raw word and reduce once at the end."""
    out: list[int] = []
    for x in letters:
        img = images[x - 1] if x > 0 else invert_letters(images[-x - 1])
        for y in img:
            if out and out[-1] == -y:
                out.pop()
            else:
                out.append(y)
    return tuple(out)


def _check_rank(letters: Iterable[int], rank: int) -> None:
    for x in letters:
        if x == 0 or abs(x) > rank:
            raise RankError(f"letter {x} outside rank {rank}")


@dataclass(frozen=True, slots=True)
class Word:
    """A freely reduced word of F_rank."""

    letters: tuple[int, ...]
    rank: int

    def __post_init__(self) -> None:
        if self.rank < 1:
            raise RankError(f"rank must be positive, got {self.rank}")
        _check_rank(self.letters, self.rank)
        for x, y in zip(self.letters, self.letters[1:]):
            if x == -y:
                raise ValueError(f"word {self.letters} is not reduced; use reduce()")

    def __len__(self) -> int:
        return len(self.letters)

    def __iter__(self) -> Iterator[int]:
        return iter(self.letters)

    def __mul__(self, other: "Word") -> "Word":
        return multiply(self, other)

    def inverse(self) -> "Word":
        return invert(self)

    def is_identity(self) -> bool:
        return not self.letters

    def sort_key(self) -> tuple:
        return word_key(self.letters)

    def __str__(self) -> str:
        return format_word(self)


def reduce(raw: Iterable[int], rank: int) -> Word:
    raw = tuple(raw)
    _check_rank(raw, rank)
    return Word(reduce_letters(raw), rank)


def identity(rank: int) -> Word:
    return Word((), rank)


def generator(i: int, rank: int) -> Word:
    return Word((i,), rank)


def multiply(u: Word, v: Word) -> Word:
    if u.rank != v.rank:
        raise RankError(f"rank mismatch: {u.rank} vs {v.rank}")
    return Word(reduce_letters(u.letters + v.letters), u.rank)


def invert(u: Word) -> Word:
    return Word(invert_letters(u.letters), u.rank)


def total_length(words: Iterable[Word | Sequence[int]]) -> int:
    return sum(len(w) for w in words)


def all_reduced_words(rank: int, max_length: int) -> list[tuple[int, ...]]:
    """Every reduced raw word of length <= max_length, in shortlex order."""
    letters = sorted([i for i in range(1, rank + 1)] + [-i for i in range(1, rank + 1)], key=letter_key)
    layer: list[tuple[int, ...]] = [()]
    out = [()]
    for _ in range(max_length):
        nxt = []
        for w in layer:
            for x in letters:
                if w and w[-1] == -x:
                    continue
                nxt.append(w + (x,))
        out.extend(nxt)
        layer = nxt
    return out


# -- text syntax -----------------------------------------------------------

def format_letter(x: int, rank: int) -> str:
    base = ALIASES[abs(x) - 1] if rank <= 4 else f"v{abs(x)}"
    return base if x > 0 else base + "^-1"


def format_word(w: Word | Sequence[int], rank: int | None = None) -> str:
    letters = w.letters if isinstance(w, Word) else tuple(w)
    if rank is None:
        rank = w.rank if isinstance(w, Word) else max((abs(x) for x in letters), default=1)
    if not letters:
        return "e"
    return " ".join(format_letter(x, rank) for x in letters)


def parse_word(text: str, rank: int) -> Word:
    """Parse ``"a b^-1 v3"``-style text.

    Tokens are ``v<i>`` or a single letter alias, optionally followed by an
    integer exponent ``^k``.  The token ``e`` always denotes the identity, so
    v5 must be written ``v5``.
    """
    raw: list[int] = []
    for tok in text.split():
        if tok == "e":
            continue
        m = _TOKEN.match(tok)
        if not m:
            raise ValueError(f"bad word token {tok!r}")
        index = int(m.group(1)) if m.group(1) else ALIASES.index(m.group(2)) + 1
        exp = int(m.group(3)) if m.group(3) else 1
        if index == 0 or index > rank:
            raise RankError(f"token {tok!r} outside rank {rank}")
        raw.extend([index if exp > 0 else -index] * abs(exp))
    return reduce(raw, rank)


def parse_tuple(text: str, rank: int) -> tuple[Word, ...]:
    """Comma-separated words."""
    parts = [p for p in text.split(",")]
    if len(parts) == 1 and not parts[0].strip():
        return ()
    return tuple(parse_word(p, rank) for p in parts)


def word_to_json(w: Word) -> list[int]:
    return list(w.letters)


def word_from_json(data: Sequence[int], rank: int) -> Word:
    if not all(isinstance(x, int) for x in data):
        raise ValueError(f"word must be an array of signed integers, got {data!r}")
    return reduce(data, rank)
