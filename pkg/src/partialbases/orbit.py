"""Whitehead descent, McCool level graphs and partial-basis decisions.

Tuples of words are handled as raw letter tuples internally.  Every move
that is applied to a tuple is a Whitehead automorphism: a Lambda move
``(A; a)`` or a signed permutation.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .autos import (
    Automorphism,
    SignedPerm,
    Whitehead,
    WhiteheadAuto,
    compose,
    from_token,
    identity_auto,
    invert_auto,
    lambda_moves,
    omega,
    realize,
    token_images,
)
from .freegroup import Word, apply_images, word_key

Raw = tuple[tuple[int, ...], ...]
DEFAULT_VERTEX_BUDGET = 10**6


class BudgetExceeded(RuntimeError):
    """A search hit its configured limit before finishing."""


def _apply(token: WhiteheadAuto, tup: Raw, rank: int) -> Raw:
    imgs = token_images(token, rank)
    return tuple(apply_images(imgs, w) for w in tup)


def _length(tup: Raw) -> int:
    return sum(len(w) for w in tup)


def _raw(words: Iterable[Word | Sequence[int]], rank: int) -> Raw:
    out = []
    for w in words:
        if isinstance(w, Word):
            if w.rank != rank:
                raise ValueError(f"word {w} has rank {w.rank}, expected {rank}")
            out.append(w.letters)
        else:
            out.append(tuple(w))
    return tuple(out)


# -- descent -------------------------------------------------------------------------

def minimize_raw(tup: Sequence[Sequence[int]], rank: int) -> tuple[Raw, list[Whitehead]]:
    """Greedy Whitehead descent.

    At each step the Lambda move giving the smallest total length is taken
    (ties broken by token order) until no move strictly shortens the tuple.
    Returns the reduced tuple and the moves in the order they were applied.
    """
    cur: Raw = tuple(tuple(w) for w in tup)
    cur_len = _length(cur)
    applied: list[Whitehead] = []
    moves = lambda_moves(rank)
    while True:
        best = None
        for t in moves:
            nxt = _apply(t, cur, rank)
            nl = _length(nxt)
            if nl < cur_len and (best is None or nl < best[0]):
                best = (nl, t, nxt)
        if best is None:
            return cur, applied
        cur_len, t, cur = best
        applied.append(t)


def minimize(words: Sequence[Word], rank: int | None = None) -> tuple[tuple[Word, ...], Automorphism]:
    """Return ``(U_min, phi)`` with ``phi(U) = U_min`` and U_min of minimal total length."""
    if rank is None:
        if not words:
            raise ValueError("rank needed for an empty tuple")
        rank = words[0].rank
    reduced, tokens = minimize_raw(_raw(words, rank), rank)
    phi = realize(tuple(reversed(tokens)), rank) if tokens else identity_auto(rank)
    return tuple(Word(w, rank) for w in reduced), phi


def is_minimal(words: Sequence[Word | Sequence[int]], rank: int) -> bool:
    tup = _raw(words, rank)
    return _length(minimize_raw(tup, rank)[0]) == _length(tup)


# -- partial bases -------------------------------------------------------------------

def _dedupe(words: Sequence[Word], rank: int) -> Raw:
    raw = sorted(set(_raw(words, rank)), key=word_key)
    return tuple(raw)


def _letters_distinct(tup: Raw) -> bool:
    return all(len(w) == 1 for w in tup) and len({abs(w[0]) for w in tup}) == len(tup)


def _check_subset(words: Sequence[Word], rank: int) -> Raw:
    tup = _dedupe(words, rank)
    if not tup:
        raise ValueError("empty set of words")
    if len(tup) > rank:
        raise ValueError(f"{len(tup)} words cannot be part of a basis of F_{rank}")
    return tup


def is_partial_basis(words: Sequence[Word], rank: int | None = None) -> bool:
    """Decide whether the set of words extends to a basis.

    Duplicates are ignored.  The words form a partial basis exactly when
    Whitehead descent turns them into distinct-index letters.
    """
    rank = words[0].rank if rank is None and words else rank
    tup = _check_subset(words, rank)
    return _letters_distinct(minimize_raw(tup, rank)[0])


def extend_to_basis(words: Sequence[Word], rank: int | None = None) -> Automorphism | None:
    """phi with phi(S_i) = v_i for S sorted shortlex, or None if S is not a partial basis."""
    rank = words[0].rank if rank is None and words else rank
    tup = _check_subset(words, rank)
    reduced, tokens = minimize_raw(tup, rank)
    if not _letters_distinct(reduced):
        return None
    # signed perm P with P(reduced[i]) = v_{i+1}; leftover indices fill in order
    perm = [0] * rank
    used = set()
    for i, (x,) in enumerate(reduced, start=1):
        perm[abs(x) - 1] = i if x > 0 else -i
        used.add(abs(x))
    nxt = len(reduced) + 1
    for j in range(1, rank + 1):
        if j not in used:
            perm[j - 1] = nxt
            nxt += 1
    p = SignedPerm(tuple(perm))
    head = [] if p.is_identity() else [p]
    return realize(tuple(head + list(reversed(tokens))), rank)


def partial_basis_by_search(
    words: Sequence[Word], rank: int | None = None, slack: int = 2, budget: int = 2_000_000
) -> bool:
    """Exhaustive oracle: breadth-first search over Lambda moves.

    Explores every tuple reachable from S while the total length stays at
    most ``|S| + slack`` and accepts when distinct-index letters appear.
    """
    rank = words[0].rank if rank is None and words else rank
    start = _check_subset(words, rank)
    cap = _length(start) + slack
    seen = {start}
    queue = deque([start])
    moves = lambda_moves(rank)
    while queue:
        cur = queue.popleft()
        if _letters_distinct(cur):
            return True
        for t in moves:
            nxt = _apply(t, cur, rank)
            if _length(nxt) <= cap and nxt not in seen:
                seen.add(nxt)
                if len(seen) > budget:
                    raise BudgetExceeded(f"oracle search exceeded {budget} tuples")
                queue.append(nxt)
    return False


# -- level graph ----------------------------------------------------------------------

def generator_order(rank: int) -> tuple[WhiteheadAuto, ...]:
    """Omega first, then Lambda moves; used for BFS tie-breaking."""
    return omega(rank) + lambda_moves(rank)


@dataclass
class LevelGraph:
    """Component of the minimal-length level of a tuple's Aut-orbit.

    ``vertices[0]`` is the basepoint.  ``targets[i][t]`` gives the index of
    ``t(vertices[i])`` for every Whitehead generator t keeping the level.
    """

    rank: int
    vertices: list[Raw]
    index: dict[Raw, int]
    targets: list[dict[WhiteheadAuto, int]]

    @property
    def min_length(self) -> int:
        return _length(self.vertices[0])

    def edge_count(self) -> int:
        return sum(len(t) for t in self.targets)


def level_graph(words: Sequence[Word], rank: int | None = None, budget: int = DEFAULT_VERTEX_BUDGET,
                require_minimal: bool = False) -> LevelGraph:
    """BFS over Whitehead moves preserving the minimal total length.

    A non-minimal tuple is minimized first unless ``require_minimal`` is set,
    in which case a ValueError is raised.
    """
    rank = words[0].rank if rank is None and words else rank
    tup = _raw(words, rank)
    reduced, _ = minimize_raw(tup, rank)
    if _length(reduced) != _length(tup):
        if require_minimal:
            raise ValueError("tuple is not of minimal length in its orbit; minimize it first")
        tup = reduced
    target_len = _length(tup)
    gens = generator_order(rank)
    vertices = [tup]
    index = {tup: 0}
    targets: list[dict] = []
    i = 0
    while i < len(vertices):
        v = vertices[i]
        out = {}
        for t in gens:
            w = _apply(t, v, rank)
            if _length(w) != target_len:
                continue
            j = index.get(w)
            if j is None:
                if len(vertices) >= budget:
                    raise BudgetExceeded(f"level graph exceeded {budget} vertices")
                j = len(vertices)
                index[w] = j
                vertices.append(w)
            out[t] = j
        targets.append(out)
        i += 1
    return LevelGraph(rank, vertices, index, targets)


# -- stabilizer presentation ----------------------------------------------------------

Cell = tuple[int, WhiteheadAuto]


def _edge_key(e: Cell) -> tuple:
    return (e[0], e[1].sort_key())


@dataclass
class StabilizerPresentation:
    """Presentation of the stabilizer of an ordered tuple.

    Generators are the non-tree edge cells; relators are words in them
    (``(generator index, +-1)`` pairs) read off the 2-cells.
    """

    rank: int
    basepoint: tuple[Word, ...]
    graph: LevelGraph
    cells: list[Cell]
    tree: set[int]
    generator_cells: list[int]
    realized: list[Automorphism]
    relators: list[list[tuple[int, int]]]
    relator_sources: list[str] = field(default_factory=list)

    def generator_automorphisms(self) -> list[Automorphism]:
        return [self.realized[c] for c in self.generator_cells]

    def relator_value(self, k: int) -> Automorphism:
        out = identity_auto(self.rank)
        for g, e in self.relators[k]:
            a = self.realized[self.generator_cells[g]]
            out = compose(a if e == 1 else invert_auto(a), out)
        return out

    def verify(self) -> dict:
        """Check that generators fix the tuple and every relator is trivial."""
        tup = _raw(self.basepoint, self.rank)
        bad_gens = [
            g for g, c in enumerate(self.generator_cells)
            if tuple(self.realized[c].apply_raw(w) for w in tup) != tup
        ]
        bad_rels = [k for k in range(len(self.relators)) if not self.relator_value(k).is_identity()]
        bad_tree = [c for c in sorted(self.tree) if not self.realized[c].is_identity()]
        return {
            "generators": len(self.generator_cells),
            "relators": len(self.relators),
            "generators_not_fixing": bad_gens,
            "relators_not_trivial": bad_rels,
            "tree_edges_not_trivial": bad_tree,
            "ok": not (bad_gens or bad_rels or bad_tree),
        }

    def to_json(self) -> dict:
        return {
            "rank": self.rank,
            "basepoint": [list(w.letters) for w in self.basepoint],
            "vertices": [[list(w) for w in v] for v in self.graph.vertices],
            "generators": [
                {
                    "from": self.cells[c][0],
                    "token": str(self.cells[c][1]),
                    "automorphism": self.realized[c].to_json(),
                }
                for c in self.generator_cells
            ],
            "tree_edges": [[self.cells[c][0], str(self.cells[c][1])] for c in sorted(self.tree)],
            "relators": [[[g, e] for g, e in r] for r in self.relators],
        }


def _relation_words(rank: int) -> list[tuple[str, tuple]]:
    from .presentations import enumerate_relations

    out = []
    for inst in enumerate_relations("2.1", rank, 0, allow_large=True):
        steps = []
        for t, e in reversed(inst.relator()):
            steps.append(t if e == 1 else t.inverse())
        out.append((inst.family, tuple(steps)))
    return out


def stabilizer_presentation(words: Sequence[Word], rank: int | None = None,
                            budget: int = DEFAULT_VERTEX_BUDGET) -> StabilizerPresentation:
    """McCool presentation of Stab(U) for a minimal ordered tuple U."""
    rank = words[0].rank if rank is None and words else rank
    graph = level_graph(words, rank, budget=budget, require_minimal=True)
    verts = graph.vertices

    cell_of: dict[Cell, tuple[int, int]] = {}
    cells: list[Cell] = []
    for i, outs in enumerate(graph.targets):
        for t in sorted(outs, key=lambda t: t.sort_key()):
            e = (i, t)
            if e in cell_of:
                continue
            rev = (outs[t], t.inverse())
            if rev == e:
                cell_of[e] = (len(cells), 1)
                cells.append(e)
                continue
            rep, other = (e, rev) if _edge_key(e) <= _edge_key(rev) else (rev, e)
            cid = len(cells)
            cells.append(rep)
            cell_of[rep] = (cid, 1)
            cell_of[other] = (cid, -1)

    # BFS spanning tree, Omega edges preferred
    paths: list[Automorphism | None] = [None] * len(verts)
    paths[0] = identity_auto(rank)
    tree: set[int] = set()
    gens = generator_order(rank)
    queue = deque([0])
    while queue:
        i = queue.popleft()
        outs = graph.targets[i]
        for t in gens:
            j = outs.get(t)
            if j is None or paths[j] is not None:
                continue
            paths[j] = compose(from_token(t, rank), paths[i])
            tree.add(cell_of[(i, t)][0])
            queue.append(j)

    realized = []
    for i, t in cells:
        j = graph.targets[i][t]
        realized.append(compose(invert_auto(paths[j]), compose(from_token(t, rank), paths[i])))

    generator_cells = [c for c in range(len(cells)) if c not in tree]
    gen_index = {c: g for g, c in enumerate(generator_cells)}

    relators: list[list[tuple[int, int]]] = []
    sources: list[str] = []
    seen = set()
    for fam, steps in _relation_words(rank):
        for start in range(len(verts)):
            cur = start
            word = []
            for s in steps:
                nxt = graph.targets[cur].get(s)
                if nxt is None:
                    break
                cid, sign = cell_of[(cur, s)]
                if cid not in tree:
                    word.append((gen_index[cid], sign))
                cur = nxt
            else:
                if cur != start:
                    raise AssertionError(f"relator {fam} does not close up at vertex {start}")
                key = tuple(word)
                if key in seen:
                    continue
                seen.add(key)
                relators.append(word)
                sources.append(fam)
    basepoint = tuple(Word(w, rank) for w in verts[0])
    return StabilizerPresentation(rank, basepoint, graph, cells, tree, generator_cells, realized, relators, sources)
