"""Automorphisms of F_n and the Whitehead generators.

Automorphisms act on the left and compose right to left.  An
:class:`Automorphism` stores the images of v_1..v_n plus, when known, a
factorization into named generator tokens: ``factorization == (t1, ..., tk)``
means the map is ``t1 o t2 o ... o tk``.  Equality only looks at images.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Sequence, Union

from .freegroup import (
    Word,
    apply_images,
    letter_key,
    reduce_letters,
)
from .intlinalg import determinant


class NotInvertible(ValueError):
    pass


# -- letter subsets as bitmasks ------------------------------------------------

def letter_bit(x: int) -> int:
    return 1 << (2 * (abs(x) - 1) + (1 if x < 0 else 0))


def letters_of(rank: int) -> list[int]:
    return sorted([*range(1, rank + 1), *range(-rank, 0)], key=letter_key)


def mask_of(letters: Iterable[int]) -> int:
    m = 0
    for x in letters:
        m |= letter_bit(x)
    return m


def mask_letters(mask: int) -> list[int]:
    out = []
    k = 0
    while mask >> k:
        if (mask >> k) & 1:
            i = k // 2 + 1
            out.append(-i if k % 2 else i)
        k += 1
    return out


def full_mask(rank: int) -> int:
    return (1 << (2 * rank)) - 1


def _fmt(x: int) -> str:
    return str(x)


# -- generator tokens ----------------------------------------------------------

@dataclass(frozen=True)
class Whitehead:
    """(A; a): requires a in A and a^-1 not in A."""

    mask: int
    a: int

    def __post_init__(self) -> None:
        if not self.mask & letter_bit(self.a) or self.mask & letter_bit(-self.a):
            raise ValueError(f"malformed Whitehead automorphism ({mask_letters(self.mask)}; {self.a})")

    @classmethod
    def of(cls, letters: Iterable[int], a: int) -> "Whitehead":
        return cls(mask_of(letters), a)

    def contains(self, x: int) -> bool:
        return bool(self.mask & letter_bit(x))

    def apply_letter(self, x: int) -> tuple[int, ...]:
        a = self.a
        if x == a or x == -a:
            return (x,)
        inside, inv_inside = self.contains(x), self.contains(-x)
        if inside and inv_inside:
            return (-a, x, a)
        if inside:
            return (x, a)
        if inv_inside:
            return (-a, x)
        return (x,)

    def images(self, rank: int) -> tuple[tuple[int, ...], ...]:
        if self.mask >> (2 * rank) or abs(self.a) > rank:
            raise ValueError(f"{self} does not live in rank {rank}")
        return tuple(self.apply_letter(i) for i in range(1, rank + 1))

    def inverse(self) -> "Whitehead":
        return Whitehead((self.mask & ~letter_bit(self.a)) | letter_bit(-self.a), -self.a)

    def sort_key(self) -> tuple:
        return (3, tuple(letter_key(x) for x in mask_letters(self.mask)), letter_key(self.a))

    def __str__(self) -> str:
        return f"W({','.join(map(_fmt, mask_letters(self.mask)))};{self.a})"


@dataclass(frozen=True)
class SignedPerm:
    """Element of Omega(F_n): v_i -> images[i-1], a letter."""

    perm: tuple[int, ...]

    def __post_init__(self) -> None:
        if sorted(abs(x) for x in self.perm) != list(range(1, len(self.perm) + 1)):
            raise ValueError(f"{self.perm} is not a signed permutation")

    def apply_letter(self, x: int) -> int:
        y = self.perm[abs(x) - 1]
        return y if x > 0 else -y

    def images(self, rank: int) -> tuple[tuple[int, ...], ...]:
        if len(self.perm) != rank:
            raise ValueError(f"{self} does not live in rank {rank}")
        return tuple((y,) for y in self.perm)

    def inverse(self) -> "SignedPerm":
        out = [0] * len(self.perm)
        for i, y in enumerate(self.perm, start=1):
            out[abs(y) - 1] = i if y > 0 else -i
        return SignedPerm(tuple(out))

    def compose(self, other: "SignedPerm") -> "SignedPerm":
        return SignedPerm(tuple(self.apply_letter(y) for y in other.perm))

    def sign_det(self) -> int:
        """Determinant of the induced signed permutation matrix."""
        perm = [abs(y) - 1 for y in self.perm]
        inversions = sum(1 for i in range(len(perm)) for j in range(i + 1, len(perm)) if perm[i] > perm[j])
        negs = sum(1 for y in self.perm if y < 0)
        return -1 if (inversions + negs) % 2 else 1

    def is_identity(self) -> bool:
        return all(y == i for i, y in enumerate(self.perm, start=1))

    def sort_key(self) -> tuple:
        return (4, tuple(letter_key(y) for y in self.perm))

    def __str__(self) -> str:
        return f"P({','.join(map(_fmt, self.perm))})"


def _check_pair(a: int, b: int) -> None:
    if a == 0 or b == 0 or abs(a) == abs(b):
        raise ValueError(f"need a != b^(+-1), got a={a}, b={b}")


@dataclass(frozen=True)
class Transvection:
    """E_{a,b}: a -> ab, or M_{a,b}: a -> ba; both fix L - {a, a^-1}."""

    kind: str
    a: int
    b: int

    def __post_init__(self) -> None:
        if self.kind not in ("E", "M"):
            raise ValueError(f"unknown transvection kind {self.kind!r}")
        _check_pair(self.a, self.b)

    def images(self, rank: int) -> tuple[tuple[int, ...], ...]:
        a, b = self.a, self.b
        if max(abs(a), abs(b)) > rank:
            raise ValueError(f"{self} does not live in rank {rank}")
        out = [(i,) for i in range(1, rank + 1)]
        i = abs(a)
        if self.kind == "E":
            out[i - 1] = (i, b) if a > 0 else (-b, i)
        else:
            out[i - 1] = (b, i) if a > 0 else (i, -b)
        return tuple(out)

    def inverse(self) -> "Transvection":
        return Transvection(self.kind, self.a, -self.b)

    def sort_key(self) -> tuple:
        return (0 if self.kind == "E" else 1, letter_key(self.a), letter_key(self.b))

    def __str__(self) -> str:
        return f"{self.kind}({self.a},{self.b})"


@dataclass(frozen=True)
class Swap:
    """w_{a,b}: a -> b^-1, b -> a, fixing the other letters."""

    a: int
    b: int

    def __post_init__(self) -> None:
        _check_pair(self.a, self.b)

    def apply_letter(self, x: int) -> int:
        if x == self.a:
            return -self.b
        if x == -self.a:
            return self.b
        if x == self.b:
            return self.a
        if x == -self.b:
            return -self.a
        return x

    def images(self, rank: int) -> tuple[tuple[int, ...], ...]:
        if max(abs(self.a), abs(self.b)) > rank:
            raise ValueError(f"{self} does not live in rank {rank}")
        return tuple((self.apply_letter(i),) for i in range(1, rank + 1))

    def as_perm(self, rank: int) -> SignedPerm:
        return SignedPerm(tuple(self.apply_letter(i) for i in range(1, rank + 1)))

    def inverse(self) -> "Swap":
        return Swap(self.a, -self.b)

    def sort_key(self) -> tuple:
        return (2, letter_key(self.a), letter_key(self.b))

    def __str__(self) -> str:
        return f"w({self.a},{self.b})"


Token = Union[Whitehead, SignedPerm, Transvection, Swap]
WhiteheadAuto = Union[Whitehead, SignedPerm]

_TOKEN_RE = re.compile(r"^\s*([EMwWP])\((.*)\)\s*$")


def parse_token(text: str) -> Token:
    m = _TOKEN_RE.match(text)
    if not m:
        raise ValueError(f"bad generator token {text!r}")
    kind, body = m.groups()
    if kind == "W":
        left, _, right = body.partition(";")
        letters = [int(x) for x in left.split(",") if x.strip()]
        return Whitehead.of(letters, int(right))
    nums = [int(x) for x in body.split(",") if x.strip()]
    if kind == "P":
        return SignedPerm(tuple(nums))
    if len(nums) != 2:
        raise ValueError(f"bad generator token {text!r}")
    if kind == "w":
        return Swap(*nums)
    return Transvection(kind, *nums)


@lru_cache(maxsize=None)
def token_images(token: Token, rank: int) -> tuple[tuple[int, ...], ...]:
    return token.images(rank)


# -- automorphisms -------------------------------------------------------------

class Automorphism:
    """An automorphism of F_rank given by generator images."""

    __slots__ = ("rank", "raw", "factorization")

    def __init__(self, rank: int, raw: Sequence[Sequence[int]], factorization: Sequence[Token] | None = None):
        if len(raw) != rank:
            raise ValueError(f"expected {rank} images, got {len(raw)}")
        self.rank = rank
        self.raw = tuple(reduce_letters(img) for img in raw)
        self.factorization = None if factorization is None else tuple(factorization)

    @property
    def images(self) -> tuple[Word, ...]:
        return tuple(Word(img, self.rank) for img in self.raw)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Automorphism):
            return NotImplemented
        return self.rank == other.rank and self.raw == other.raw

    def __hash__(self) -> int:
        return hash((self.rank, self.raw))

    def __repr__(self) -> str:
        fac = "" if self.factorization is None else f", factorization={[str(t) for t in self.factorization]}"
        return f"Automorphism(rank={self.rank}, raw={self.raw}{fac})"

    def __call__(self, w: Word | Sequence[int]) -> Word:
        if isinstance(w, Word):
            if w.rank != self.rank:
                raise ValueError(f"rank mismatch: {w.rank} vs {self.rank}")
            return Word(apply_images(self.raw, w.letters), self.rank)
        return Word(apply_images(self.raw, w), self.rank)

    def apply_raw(self, letters: Sequence[int]) -> tuple[int, ...]:
        return apply_images(self.raw, letters)

    def __matmul__(self, other: "Automorphism") -> "Automorphism":
        return compose(self, other)

    def is_identity(self) -> bool:
        return all(img == (i,) for i, img in enumerate(self.raw, start=1))

    def to_json(self) -> dict:
        return {
            "rank": self.rank,
            "images": [list(img) for img in self.raw],
            "factorization": None if self.factorization is None else [str(t) for t in self.factorization],
        }

    @classmethod
    def from_json(cls, data: dict) -> "Automorphism":
        rank = int(data["rank"])
        fac = data.get("factorization")
        tokens = None if fac is None else [parse_token(t) for t in fac]
        phi = cls(rank, [tuple(img) for img in data["images"]], tokens)
        if tokens is not None and realize(tokens, rank) != phi:
            raise ValueError("factorization does not match the images")
        return phi


def identity_auto(rank: int) -> Automorphism:
    return Automorphism(rank, [(i,) for i in range(1, rank + 1)], ())


def from_token(token: Token, rank: int) -> Automorphism:
    return Automorphism(rank, token_images(token, rank), (token,))


def compose(phi: Automorphism, psi: Automorphism) -> Automorphism:
    """phi o psi."""
    if phi.rank != psi.rank:
        raise ValueError(f"rank mismatch: {phi.rank} vs {psi.rank}")
    raw = tuple(apply_images(phi.raw, img) for img in psi.raw)
    fac = None
    if phi.factorization is not None and psi.factorization is not None:
        fac = phi.factorization + psi.factorization
    return Automorphism(phi.rank, raw, fac)


def realize(tokens: Sequence[Token], rank: int) -> Automorphism:
    out = identity_auto(rank)
    for t in reversed(tokens):
        out = Automorphism(rank, tuple(apply_images(token_images(t, rank), img) for img in out.raw))
    return Automorphism(rank, out.raw, tokens)


def invert_auto(phi: Automorphism) -> Automorphism:
    """Inverse through the factorization: reverse and invert each token."""
    if phi.factorization is None:
        raise NotInvertible("no factorization available; use certify() first")
    tokens = tuple(t.inverse() for t in reversed(phi.factorization))
    return realize(tokens, phi.rank)


def certify(phi: Automorphism) -> Automorphism:
    """Attach a factorization to a map given only by images.

    Whitehead-reduces the image basis to letters; raises NotInvertible when
    the images do not form a basis.
    """
    inv = inverse_by_reduction(phi)
    return Automorphism(phi.rank, phi.raw, tuple(t.inverse() for t in reversed(inv.factorization)))


def inverse_by_reduction(phi: Automorphism) -> Automorphism:
    """Inverse computed from images alone by Whitehead descent.

    Independent of the token inversion rules, so it can check them.
    """
    from .orbit import minimize_raw

    reduced, tokens = minimize_raw(phi.raw, phi.rank)
    if sum(map(len, reduced)) != phi.rank or len({abs(w[0]) for w in reduced if w}) != phi.rank:
        raise NotInvertible(f"images {phi.raw} do not form a basis")
    # reduced[i] = l_i; need P with P(l_i) = v_{i+1}
    perm = [0] * phi.rank
    for i, (x,) in enumerate(reduced, start=1):
        perm[abs(x) - 1] = i if x > 0 else -i
    tail = [] if SignedPerm(tuple(perm)).is_identity() else [SignedPerm(tuple(perm))]
    return realize(tail + list(reversed(tokens)), phi.rank)


def abelianization(phi: Automorphism) -> list[list[int]]:
    """Exponent-sum matrix: entry (i, j) is the v_i exponent sum of phi(v_j)."""
    n = phi.rank
    m = [[0] * n for _ in range(n)]
    for j, img in enumerate(phi.raw):
        for x in img:
            m[abs(x) - 1][j] += 1 if x > 0 else -1
    return m


def is_special(phi: Automorphism) -> bool:
    return determinant(abelianization(phi)) == 1


def fixes_prefix(phi: Automorphism, l: int) -> bool:
    return all(phi.raw[i - 1] == (i,) for i in range(1, l + 1))


def make_E(a: int, b: int, rank: int) -> Automorphism:
    return from_token(Transvection("E", a, b), rank)


def make_M(a: int, b: int, rank: int) -> Automorphism:
    return from_token(Transvection("M", a, b), rank)


def make_w(a: int, b: int, rank: int) -> Automorphism:
    return from_token(Swap(a, b), rank)


def make_whitehead(letters: Iterable[int], a: int, rank: int) -> Automorphism:
    return from_token(Whitehead.of(letters, a), rank)


def whitehead_apply(w: WhiteheadAuto, x: int) -> tuple[int, ...]:
    """Image of a single letter under a Whitehead automorphism."""
    if isinstance(w, Whitehead):
        return w.apply_letter(x)
    return (w.apply_letter(x),)


def whitehead_apply_word(w: WhiteheadAuto, word: Word) -> Word:
    out: list[int] = []
    for x in word.letters:
        out.extend(whitehead_apply(w, x))
    return Word(reduce_letters(out), word.rank)


@lru_cache(maxsize=None)
def lambda_moves(rank: int) -> tuple[Whitehead, ...]:
    """Every well-formed (A; a), canonically ordered; includes the trivial ({a}; a)."""
    out = []
    for a in letters_of(rank):
        others = [x for x in letters_of(rank) if abs(x) != abs(a)]
        for r in range(len(others) + 1):
            for extra in itertools.combinations(others, r):
                out.append(Whitehead.of((a, *extra), a))
    out.sort(key=lambda t: t.sort_key())
    return tuple(out)


@lru_cache(maxsize=None)
def omega(rank: int) -> tuple[SignedPerm, ...]:
    """All 2^n n! letter-permuting automorphisms."""
    out = []
    for p in itertools.permutations(range(1, rank + 1)):
        for signs in itertools.product((1, -1), repeat=rank):
            out.append(SignedPerm(tuple(s * i for s, i in zip(signs, p))))
    out.sort(key=lambda t: t.sort_key())
    return tuple(out)


def whitehead_generators(rank: int) -> tuple[WhiteheadAuto, ...]:
    return lambda_moves(rank) + omega(rank)


def omega_fixing(rank: int, l: int, special: bool = False) -> tuple[SignedPerm, ...]:
    return tuple(
        s for s in omega(rank)
        if all(s.perm[i] == i + 1 for i in range(l)) and (not special or s.sign_det() == 1)
    )
