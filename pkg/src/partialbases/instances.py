"""Seeded generators of admissible inputs for the top-homology basis suite.

The main family is the closure map of a truncated matroid: for a loopless
matroid of rank m, K is the complex of independent sets of size <= m - 1,
Y is the poset of proper nonempty flats and f sends a simplex to its
closure.  Fibers are independence complexes of restrictions and upper sets
are proper parts of contractions, so every hypothesis holds by
construction with n = m - 2.  Identity maps on face posets of small
spheres round out the corpus.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from typing import Callable, Sequence

from .quillen import (
    PosetMap,
    PreconditionError,
    check_spherical_map,
    theorem47_basis,
    theorem47_decomposition,
)
from .topology import FinitePoset, SimplicialComplex, face_poset, octahedron, simplex_boundary


@dataclass
class Instance:
    name: str
    K: SimplicialComplex
    f: PosetMap
    n: int


# -- matroids ------------------------------------------------------------------------

class Matroid:
    """A loopless matroid given by its rank function on subsets of 0..m-1."""

    def __init__(self, size: int, rank_fn: Callable[[Sequence[int]], int], name: str):
        self.size = size
        self._rank = rank_fn
        self.name = name
        self._cache: dict[tuple, int] = {}
        if any(self.rank((e,)) == 0 for e in range(size)):
            raise ValueError("matroid has a loop")

    def rank(self, subset: Sequence[int]) -> int:
        key = tuple(sorted(set(subset)))
        if key not in self._cache:
            self._cache[key] = self._rank(key)
        return self._cache[key]

    @property
    def full_rank(self) -> int:
        return self.rank(range(self.size))

    def closure(self, subset: Sequence[int]) -> tuple[int, ...]:
        r = self.rank(subset)
        return tuple(e for e in range(self.size) if self.rank(tuple(subset) + (e,)) == r)

    def independent_sets(self, max_size: int) -> list[tuple[int, ...]]:
        return [
            s for k in range(1, max_size + 1)
            for s in itertools.combinations(range(self.size), k)
            if self.rank(s) == k
        ]


def uniform_matroid(rank: int, size: int) -> Matroid:
    return Matroid(size, lambda s: min(len(s), rank), f"U({rank},{size})")


def vector_matroid(vectors: Sequence[Sequence[int]], p: int) -> Matroid:
    def rank_fn(subset: Sequence[int]) -> int:
        rows = [[x % p for x in vectors[i]] for i in subset]
        r = 0
        ncols = len(vectors[0]) if vectors else 0
        for c in range(ncols):
            piv = next((i for i in range(r, len(rows)) if rows[i][c]), None)
            if piv is None:
                continue
            rows[r], rows[piv] = rows[piv], rows[r]
            inv = pow(rows[r][c], -1, p)
            rows[r] = [x * inv % p for x in rows[r]]
            for i in range(len(rows)):
                if i != r and rows[i][c]:
                    k = rows[i][c]
                    rows[i] = [(a - k * b) % p for a, b in zip(rows[i], rows[r])]
            r += 1
        return r

    return Matroid(len(vectors), rank_fn, f"F{p}:{[tuple(v) for v in vectors]}")


def truncation_instance(mat: Matroid) -> Instance:
    m = mat.full_rank
    if m < 2:
        raise ValueError("need rank >= 2")
    faces = mat.independent_sets(m - 1)
    K = SimplicialComplex(range(mat.size), [s for s in faces if len(s) == m - 1] or faces)
    flats = sorted({mat.closure(s) for s in faces}, key=lambda fl: (mat.rank(fl), fl))
    rels = [(a, b) for a in flats for b in flats if a != b and set(a) <= set(b)]
    Y = FinitePoset(flats, rels)
    X = face_poset(K)
    f = PosetMap(X, Y, {s: mat.closure(s) for s in X.elements})
    return Instance(f"truncation {mat.name}", K, f, m - 2)


def identity_instance(K: SimplicialComplex, name: str) -> Instance:
    X = face_poset(K)
    return Instance(f"identity {name}", K, PosetMap(X, X, {s: s for s in X.elements}), K.dimension)


def polygon(m: int) -> SimplicialComplex:
    return SimplicialComplex(range(m), [(i, (i + 1) % m) for i in range(m)])


def sphere_corpus() -> list[Instance]:
    out = [identity_instance(simplex_boundary(k), f"boundary of the {k}-simplex") for k in (1, 2, 3)]
    out += [identity_instance(polygon(m), f"{m}-gon") for m in (4, 5, 6)]
    out.append(identity_instance(octahedron(), "octahedron"))
    return out


def random_matroid(rng: random.Random) -> Matroid:
    roll = rng.random()
    if roll < 0.25:
        r = rng.choice((2, 3))
        return uniform_matroid(r, rng.randint(r + 1, r + 3))
    if roll < 0.9:
        r = rng.choice((2, 3, 3))
        lo, hi = r + 1, 7
    else:
        r, lo, hi = 4, 5, 6
    p = rng.choice((2, 3, 5))
    size = rng.randint(lo, hi)
    while True:
        vecs = [[rng.randrange(p) for _ in range(r)] for _ in range(size)]
        if any(not any(v) for v in vecs):
            continue
        mat = vector_matroid(vecs, p)
        if mat.full_rank == r:
            return mat


def generate_instances(count: int, seed: int = 0) -> list[Instance]:
    """``count`` instances: the sphere corpus first, then seeded random matroid truncations."""
    rng = random.Random(seed)
    out = sphere_corpus()[:count]
    while len(out) < count:
        out.append(truncation_instance(random_matroid(rng)))
    return out


def random_poset(rng: random.Random, size: int, density: float = 0.35) -> FinitePoset:
    """Random order on 0..size-1: each pair i < j is related with the given probability."""
    rels = [(i, j) for i, j in itertools.combinations(range(size), 2) if rng.random() < density]
    return FinitePoset(range(size), rels)


def random_poset_map(rng: random.Random, max_elements: int = 10) -> PosetMap:
    """Random order-preserving map between posets with at most ``max_elements`` elements each.

    Y is drawn first and every x gets a random value; x < x' is only allowed
    when f(x) <= f(x'), so the closure of X's relations stays compatible.
    """
    Y = random_poset(rng, rng.randint(1, max_elements))
    size = rng.randint(1, max_elements)
    values = [rng.choice(Y.elements) for _ in range(size)]
    density = rng.uniform(0.2, 0.6)
    rels = [
        (i, j) for i, j in itertools.combinations(range(size), 2)
        if Y.leq(values[i], values[j]) and rng.random() < density
    ]
    X = FinitePoset([("x", i) for i in range(size)], [(("x", i), ("x", j)) for i, j in rels])
    return PosetMap(X, Y, {("x", i): values[i] for i in range(size)})


# -- canned small examples -----------------------------------------------------------------

def four_points_two_fibers() -> Instance:
    K = SimplicialComplex(["p1", "p2", "p3", "p4"])
    Y = FinitePoset(["y1", "y2"])
    rule = {"p1": "y1", "p2": "y1", "p3": "y2", "p4": "y2"}
    X = face_poset(K)
    return Instance("four points over two", K, PosetMap(X, Y, {s: rule[s[0]] for s in X.elements}), 0)


def constant_map(K: SimplicialComplex) -> Instance:
    Y = FinitePoset(["*"])
    X = face_poset(K)
    return Instance("constant", K, PosetMap(X, Y, {s: "*" for s in X.elements}), K.dimension)


def graph_over_two_chain(edges: Sequence[tuple]) -> PosetMap:
    """Face poset of a graph onto y0 < y1: vertices to y0, edges to y1."""
    verts = sorted({v for e in edges for v in e})
    K = SimplicialComplex(verts, edges)
    X = face_poset(K)
    Y = FinitePoset(["y0", "y1"], [("y0", "y1")])
    return PosetMap(X, Y, {s: "y0" if len(s) == 1 else "y1" for s in X.elements})


# -- the suite --------------------------------------------------------------------------------

def run_instance(inst: Instance) -> dict:
    rec: dict = {"name": inst.name, "n": inst.n}
    rep = check_spherical_map(inst.f, inst.n)
    rec["spherical"] = rep.verdict
    rec["side_checks"] = rep.side_checks()
    try:
        dec = theorem47_decomposition(inst.f, inst.n)
        cert = theorem47_basis(inst.f, inst.K, inst.n)
    except PreconditionError as e:
        rec["admissible"] = False
        rec["error"] = str(e)
        return rec
    rec["admissible"] = True
    rec["decomposition"] = dec["holds"]
    rec["rank"] = dec["rank_source"]
    rec["epimorphism"] = cert.epimorphism
    rec["unimodular"] = cert.unimodular
    rec["determinant"] = cert.determinant
    rec["remark_identity"] = cert.remark_holds
    rec["pass"] = (
        dec["holds"] and cert.epimorphism and cert.unimodular and cert.remark_holds and all(rec["side_checks"].values())
    )
    return rec


def run_suite(count: int = 100, seed: int = 0) -> dict:
    records = [run_instance(inst) for inst in generate_instances(count, seed)]
    adm = [r for r in records if r["admissible"]]
    return {
        "seed": seed,
        "count": count,
        "admissible": len(adm),
        "passed": sum(1 for r in adm if r["pass"]),
        "records": records,
    }
