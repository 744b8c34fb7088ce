"""Length-bounded pieces of the complex of partial bases of F_n.

Vertices are primitive elements of word length <= L; a set of vertices is
a simplex when it is a partial basis.  These are finite truncations of an
infinite complex, so every experiment here reports consistency with the
known results, never a proof of them.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .autos import Automorphism, omega, token_images
from .freegroup import Word, all_reduced_words, apply_images, format_word, word_key
from .orbit import BudgetExceeded, extend_to_basis, is_partial_basis
from .topology import SimplicialComplex, homology, simply_connected

TRUNCATION_LABEL = "truncated evidence: the theorem concerns the untruncated complex"
DEFAULT_LIMITS = {1: 8, 2: 4, 3: 4, 4: 2}
DEFAULT_TEST_BUDGET = 2_000_000

Raw = tuple[int, ...]


class PartialBasisMemo:
    """Memoized partial-basis tests keyed by the shortlex-sorted word tuple."""

    def __init__(self, rank: int, budget: int = DEFAULT_TEST_BUDGET):
        self.rank = rank
        self.budget = budget
        self.table: dict[tuple[Raw, ...], bool] = {}
        self.tests = 0

    def __call__(self, words: Iterable[Raw]) -> bool:
        key = tuple(sorted(set(words), key=word_key))
        hit = self.table.get(key)
        if hit is None:
            self.tests += 1
            if self.tests > self.budget:
                raise BudgetExceeded(f"more than {self.budget} partial-basis tests")
            hit = len(key) <= self.rank and is_partial_basis([Word(w, self.rank) for w in key], self.rank)
            self.table[key] = hit
        return hit


_MEMOS: dict[int, PartialBasisMemo] = {}


def shared_memo(rank: int) -> PartialBasisMemo:
    if rank not in _MEMOS:
        _MEMOS[rank] = PartialBasisMemo(rank)
    return _MEMOS[rank]


def _check_limits(n: int, L: int, force: bool) -> None:
    if L < 1:
        raise ValueError("length bound must be at least 1")
    if n < 1:
        raise ValueError("rank must be at least 1")
    if not force and L > DEFAULT_LIMITS.get(n, 0):
        raise BudgetExceeded(f"n={n}, L={L} is beyond the default budget; pass force=True to override")


def enumerate_primitives(n: int, L: int, memo: PartialBasisMemo | None = None) -> list[Raw]:
    """Primitive elements of length <= L in shortlex order."""
    if L < 1:
        raise ValueError("length bound must be at least 1")
    memo = memo or shared_memo(n)
    return [w for w in all_reduced_words(n, L) if w and memo((w,))]


def _grow(vertices: Sequence[Raw], test, max_size: int) -> list[list[tuple[Raw, ...]]]:
    """Layers of simplices; a set is tested only when all its facets passed."""
    order = {v: i for i, v in enumerate(vertices)}
    layers = [[(v,) for v in vertices]]
    while len(layers) < max_size and layers[-1]:
        prev = set(layers[-1])
        nxt = []
        for s in layers[-1]:
            for v in vertices[order[s[-1]] + 1:]:
                cand = s + (v,)
                if all(cand[:i] + cand[i + 1:] in prev for i in range(len(cand) - 1)) and test(cand):
                    nxt.append(cand)
        layers.append(nxt)
    return [layer for layer in layers if layer]


def _label(w: Raw, n: int) -> str:
    return format_word(w, n)


@dataclass
class TruncatedPB:
    """A bounded piece of the partial-basis complex (or of a link in it)."""

    rank: int
    length_bound: int
    base: tuple[Raw, ...]
    vertices: list[Raw]
    layers: list[list[tuple[Raw, ...]]]
    tests: int = 0

    @property
    def simplices(self) -> list[tuple[Raw, ...]]:
        return [s for layer in self.layers for s in layer]

    @property
    def dimension(self) -> int:
        return len(self.layers) - 1

    def complex(self, skeleton: int | None = None) -> SimplicialComplex:
        n = self.rank
        facets = [
            [_label(w, n) for w in s] for s in self.simplices if skeleton is None or len(s) <= skeleton + 1
        ]
        return SimplicialComplex([_label(v, n) for v in self.vertices], facets)

    def words(self, s: Sequence[Raw]) -> list[Word]:
        return [Word(w, self.rank) for w in s]

    def to_json(self, skeleton: int | None = None) -> dict:
        return self.complex(skeleton).to_json()


def build_truncated_pb(n: int, L: int, force: bool = False, memo: PartialBasisMemo | None = None) -> TruncatedPB:
    _check_limits(n, L, force)
    memo = memo or shared_memo(n)
    before = memo.tests
    verts = enumerate_primitives(n, L, memo)
    layers = _grow(verts, memo, n)
    return TruncatedPB(n, L, (), verts, layers, memo.tests - before)


def _base_raw(basis: Sequence[Word | Sequence[int]], n: int) -> tuple[Raw, ...]:
    out = []
    for w in basis:
        if isinstance(w, Word):
            if w.rank != n:
                raise ValueError(f"word {w} has rank {w.rank}, expected {n}")
            out.append(w.letters)
        else:
            out.append(tuple(w))
    return tuple(sorted(set(out), key=word_key))


def link_in_pb(basis: Sequence[Word], n: int, L: int, force: bool = False,
               memo: PartialBasisMemo | None = None) -> TruncatedPB:
    """Vertices w with B u {w} a partial basis, simplices S with B u S a partial basis."""
    _check_limits(n, L, force)
    memo = memo or shared_memo(n)
    base = _base_raw(basis, n)
    if base and not memo(base):
        raise ValueError("the given words are not a partial basis")
    if not base:
        return build_truncated_pb(n, L, force, memo)
    before = memo.tests
    bset = set(base)
    verts = [w for w in enumerate_primitives(n, L, memo) if w not in bset and memo(base + (w,))]
    layers = _grow(verts, lambda s: memo(base + s), n - len(base))
    return TruncatedPB(n, L, base, verts, layers, memo.tests - before)


# -- free factors ----------------------------------------------------------------------

@dataclass(frozen=True)
class FreeFactorHandle:
    """<B> for a partial basis B, with phi(B_i) = v_i as certificate."""

    basis: tuple[Word, ...]
    certificate: Automorphism = field(compare=False)

    @property
    def rank(self) -> int:
        return len(self.basis)

    @property
    def ambient_rank(self) -> int:
        return self.certificate.rank

    def contains(self, w: Word) -> bool:
        img = self.certificate.apply_raw(w.letters)
        return all(abs(x) <= self.rank for x in img)

    def certificate_valid(self) -> bool:
        ordered = sorted(self.basis, key=lambda w: w.sort_key())
        return all(self.certificate.apply_raw(w.letters) == (i,) for i, w in enumerate(ordered, start=1))

    def to_json(self) -> dict:
        return {
            "basis": [format_word(w) for w in self.basis],
            "rank": self.rank,
            "certificate": self.certificate.to_json(),
        }


def free_factor(basis: Sequence[Word], n: int | None = None) -> FreeFactorHandle:
    n = basis[0].rank if n is None and basis else n
    phi = extend_to_basis(list(basis), n)
    if phi is None:
        raise ValueError(f"{[format_word(w) for w in basis]} is not a partial basis")
    ordered = tuple(sorted(set(basis), key=lambda w: w.sort_key()))
    return FreeFactorHandle(ordered, phi)


def factor_membership(w: Word, basis: Sequence[Word] | FreeFactorHandle) -> bool:
    h = basis if isinstance(basis, FreeFactorHandle) else free_factor(basis, w.rank)
    return h.contains(w)


def factor_contains(big: Sequence[Word] | FreeFactorHandle, small: Sequence[Word] | FreeFactorHandle) -> bool:
    """<small> is contained in <big>."""
    hb = big if isinstance(big, FreeFactorHandle) else free_factor(big)
    gens = small.basis if isinstance(small, FreeFactorHandle) else small
    if not isinstance(small, FreeFactorHandle):
        free_factor(small)
    return all(hb.contains(w) for w in gens)


def factor_equal(b1: Sequence[Word] | FreeFactorHandle, b2: Sequence[Word] | FreeFactorHandle) -> bool:
    h1 = b1 if isinstance(b1, FreeFactorHandle) else free_factor(b1)
    h2 = b2 if isinstance(b2, FreeFactorHandle) else free_factor(b2)
    return h1.rank == h2.rank and factor_contains(h1, h2) and factor_contains(h2, h1)


def g_map(sigma: Sequence[Word], n: int | None = None) -> FreeFactorHandle:
    """sigma -> <sigma>, defined on partial bases of size at most n - 1."""
    n = sigma[0].rank if n is None and sigma else n
    if not sigma:
        raise ValueError("empty simplex")
    if len(set(sigma)) >= n:
        raise ValueError(f"a simplex of size {len(set(sigma))} generates all of F_{n}, not a proper factor")
    return free_factor(sigma, n)


# -- structural checks -------------------------------------------------------------------

def omega_invariant(pb: TruncatedPB) -> dict:
    """Check that every signed letter permutation maps vertices and simplices onto themselves."""
    n = pb.rank
    if pb.base:
        raise ValueError("symmetry check applies to the full truncated complex")
    simp = set(pb.simplices)
    order = {v: i for i, v in enumerate(pb.vertices)}
    for T in omega(n):
        imgs = token_images(T, n)
        for s in pb.simplices:
            t = tuple(sorted((apply_images(imgs, w) for w in s), key=order.get))
            if any(w not in order for w in t) or t not in simp:
                return {"invariant": False, "perm": list(T.perm), "simplex": [list(w) for w in s]}
    return {"invariant": True, "vertex_orbits": _orbit_count(pb.vertices, n), "simplex_count": len(simp)}


def _orbit_count(words: Sequence[Raw], n: int) -> int:
    seen: set = set()
    orbits = 0
    for w in words:
        if w in seen:
            continue
        orbits += 1
        for T in omega(n):
            seen.add(apply_images(token_images(T, n), w))
    return orbits


def monotone_in_length(n: int, L: int, force: bool = False) -> bool:
    small, big = build_truncated_pb(n, L, force), build_truncated_pb(n, L + 1, force)
    return set(small.vertices) <= set(big.vertices) and set(small.simplices) <= set(big.simplices)


def g_order_preserving(pb: TruncatedPB) -> dict:
    """For sigma in tau (both of size <= n - 1), <sigma> is contained in <tau>."""
    n = pb.rank
    small = [s for s in pb.simplices if len(s) <= n - 1]
    handles = {s: g_map(pb.words(s), n) for s in small}
    checked = 0
    for tau in small:
        for k in range(1, len(tau)):
            for sigma in itertools.combinations(tau, k):
                checked += 1
                if not factor_contains(handles[tau], handles[sigma]):
                    return {"holds": False, "sigma": [list(w) for w in sigma], "tau": [list(w) for w in tau]}
    return {"holds": True, "pairs": checked}


def full_simplices_are_bases(pb: TruncatedPB) -> bool:
    n = pb.rank
    for s in pb.simplices:
        if len(s) + len(pb.base) == n:
            phi = extend_to_basis(pb.words(pb.base + s), n)
            if phi is None:
                return False
    return True


# -- experiments -----------------------------------------------------------------------

def experiment_sphericity(n: int, L: int, basis: Sequence[Word] = (), force: bool = False,
                          pi1_budget: int = 100_000) -> dict:
    """Observed topology of a truncated link next to the predicted values."""
    pb = link_in_pb(list(basis), n, L, force)
    K = pb.complex()
    k = n - len(pb.base)
    h = homology(K)
    top = k - 1
    components = None
    if K.vertices:
        components = h.rank(0) + 1
    observed_connected = bool(K.vertices) and h.is_zero(0)
    sc = None
    if observed_connected and K.dimension >= 2:
        sc = simply_connected(K.skeleton(2), pi1_budget)
    predicted = {
        "dimension": top,
        "connected": k >= 2,
        "simply_connected": True if k >= 3 else None,
        "vanishing_below": top,
        "top_torsion_free": True,
    }
    observed = {
        "dimension": K.dimension,
        "vertices": len(K.vertices),
        "simplices": len(pb.simplices),
        "components": components,
        "connected": observed_connected,
        "simply_connected": sc,
        "homology": h.to_json(),
        "vanishing_below_top": all(h.is_zero(i) for i in range(-1, top)),
        "top_torsion_free": not h.torsion(top),
    }
    consistent = {
        "dimension": K.dimension <= top,
        "connected": (not predicted["connected"]) or observed_connected,
        "top_torsion_free": observed["top_torsion_free"],
    }
    return {
        "label": TRUNCATION_LABEL,
        "n": n,
        "L": L,
        "basis": [format_word(w, n) for w in pb.base],
        "predicted": predicted,
        "observed": observed,
        "consistent": consistent,
        "tests": pb.tests,
    }
