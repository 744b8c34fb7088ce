"""Finite simplicial complexes and posets with exact integer homology.

Simplices are tuples of vertex labels sorted by the complex's vertex order;
the empty tuple is the empty simplex and spans chain degree -1.  Chains are
``{simplex: coefficient}`` dicts.  Order complexes list their vertices in a
fixed linear extension, so every simplex of an order complex is a chain
written bottom to top.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Any, Callable, Hashable, Iterable, Mapping, Sequence

from .intlinalg import ColumnEchelon, invariant_factors, smith_normal_form

Simplex = tuple
Chain = dict


def permutation_sign(seq: Sequence[int]) -> int:
    """Sign of the permutation sorting ``seq`` (distinct entries)."""
    sign = 1
    seq = list(seq)
    for i in range(len(seq)):
        for j in range(i + 1, len(seq)):
            if seq[i] > seq[j]:
                sign = -sign
    return sign


def add_to(chain: Chain, simplex: Simplex, coef: int) -> None:
    if coef:
        v = chain.get(simplex, 0) + coef
        if v:
            chain[simplex] = v
        else:
            del chain[simplex]


def chain_add(*chains: Mapping, coefs: Sequence[int] | None = None) -> Chain:
    out: Chain = {}
    for i, c in enumerate(chains):
        k = 1 if coefs is None else coefs[i]
        for s, v in c.items():
            add_to(out, s, k * v)
    return out


def chain_degree(chain: Mapping) -> int | None:
    degs = {len(s) - 1 for s in chain}
    if len(degs) > 1:
        raise ValueError("chain mixes degrees")
    return degs.pop() if degs else None


# -- simplicial complexes --------------------------------------------------------------

class SimplicialComplex:
    """Downward-closed family of simplices over an ordered vertex list."""

    def __init__(self, vertices: Sequence[Hashable], facets: Iterable[Iterable[Hashable]] = ()):
        self.vertices = tuple(vertices)
        self.index = {v: i for i, v in enumerate(self.vertices)}
        if len(self.index) != len(self.vertices):
            raise ValueError("repeated vertex labels")
        faces: set[Simplex] = {()}
        for f in facets:
            s = self.sort(f)
            if len(set(s)) != len(s):
                raise ValueError(f"facet {f} repeats a vertex")
            if s in faces:
                continue
            for r in range(1, len(s) + 1):
                faces.update(itertools.combinations(s, r))
        for v in self.vertices:
            faces.add((v,))
        self._by_dim: dict[int, list[Simplex]] = {}
        for s in faces:
            self._by_dim.setdefault(len(s) - 1, []).append(s)
        for d in self._by_dim:
            self._by_dim[d].sort(key=self.key)
        self._set = faces
        self._pos: dict[int, dict[Simplex, int]] = {}

    # ordering
    def key(self, s: Simplex) -> tuple[int, ...]:
        return tuple(self.index[v] for v in s)

    def sort(self, vs: Iterable[Hashable]) -> Simplex:
        try:
            return tuple(sorted(vs, key=self.index.__getitem__))
        except KeyError as e:
            raise KeyError(f"vertex {e.args[0]!r} not in complex") from None

    def orient(self, vs: Sequence[Hashable]) -> tuple[Simplex, int]:
        """Sorted simplex and the sign of the sorting permutation (0 if degenerate)."""
        idx = [self.index[v] for v in vs]
        if len(set(idx)) != len(idx):
            return (), 0
        return self.sort(vs), permutation_sign(idx)

    # structure
    @property
    def dimension(self) -> int:
        return max(self._by_dim)

    def simplices(self, k: int | None = None) -> list[Simplex]:
        if k is None:
            return [s for d in sorted(self._by_dim) for s in self._by_dim[d]]
        return list(self._by_dim.get(k, []))

    def nonempty_simplices(self) -> list[Simplex]:
        return [s for s in self.simplices() if s]

    def facets(self) -> list[Simplex]:
        covered = set()
        for s in self.nonempty_simplices():
            for i in range(len(s)):
                covered.add(s[:i] + s[i + 1:])
        return [s for s in self.nonempty_simplices() if s not in covered]

    def __contains__(self, s: Iterable[Hashable]) -> bool:
        try:
            return self.sort(s) in self._set
        except KeyError:
            return False

    def __len__(self) -> int:
        return len(self._set) - 1

    def f_vector(self) -> list[int]:
        return [len(self._by_dim.get(k, [])) for k in range(0, self.dimension + 1)]

    def reduced_euler_characteristic(self) -> int:
        return sum((-1) ** d * len(ss) for d, ss in self._by_dim.items())

    def position(self, k: int) -> dict[Simplex, int]:
        if k not in self._pos:
            self._pos[k] = {s: i for i, s in enumerate(self._by_dim.get(k, []))}
        return self._pos[k]

    def subcomplex(self, keep: Callable[[Simplex], bool]) -> "SimplicialComplex":
        """Largest subcomplex on the simplices satisfying ``keep`` (must be downward closed)."""
        kept = [s for s in self.nonempty_simplices() if keep(s)]
        kept_set = set(kept)
        for s in kept:
            for r in range(1, len(s)):
                for t in itertools.combinations(s, r):
                    if t not in kept_set:
                        raise ValueError(f"selection is not downward closed at {s}")
        verts = [v for v in self.vertices if (v,) in kept_set]
        return SimplicialComplex(verts, kept)

    def link(self, sigma: Iterable[Hashable]) -> "SimplicialComplex":
        s = self.sort(sigma)
        if s not in self._set:
            raise KeyError(f"{s} is not a simplex")
        ss = set(s)
        faces = [t for t in self.nonempty_simplices() if not ss & set(t) and self.sort(s + t) in self._set]
        verts = [v for v in self.vertices if (v,) in set(faces)]
        return SimplicialComplex(verts, faces)

    def skeleton(self, k: int) -> "SimplicialComplex":
        return SimplicialComplex(self.vertices, [s for s in self.nonempty_simplices() if len(s) <= k + 1])

    # chains
    def boundary(self, chain: Mapping) -> Chain:
        out: Chain = {}
        for s, c in chain.items():
            for i in range(len(s)):
                add_to(out, s[:i] + s[i + 1:], c if i % 2 == 0 else -c)
        return out

    def boundary_columns(self, k: int) -> tuple[list[dict[int, int]], int]:
        """Sparse matrix of the augmented d_k : C_k -> C_{k-1}."""
        rows = self.position(k - 1)
        cols = []
        for s in self._by_dim.get(k, []):
            col = {}
            for i in range(len(s)):
                col[rows[s[:i] + s[i + 1:]]] = 1 if i % 2 == 0 else -1
            cols.append(col)
        return cols, len(self._by_dim.get(k - 1, []))

    def chain_vector(self, chain: Mapping, k: int | None = None) -> dict[int, int]:
        if k is None:
            k = chain_degree(chain)
            if k is None:
                return {}
        pos = self.position(k)
        return {pos[s]: c for s, c in chain.items() if c}

    def vector_chain(self, vec: Mapping[int, int], k: int) -> Chain:
        basis = self._by_dim.get(k, [])
        return {basis[i]: c for i, c in vec.items() if c}

    def chain_complex(self) -> "IntegerChainComplex":
        bases = {k: self.simplices(k) for k in range(-1, self.dimension + 1)}
        mats = {k: self.boundary_columns(k)[0] for k in range(0, self.dimension + 1)}
        return IntegerChainComplex(bases, mats)

    def cycle_basis(self, k: int) -> list[Chain]:
        """Basis of Z_k (augmented); equals H~_k when k is the top dimension."""
        if k > self.dimension:
            return []
        cols, nrows = self.boundary_columns(k) if k >= 0 else ([{} for _ in self._by_dim[-1]], 0)
        return [self.vector_chain(v, k) for v in ColumnEchelon(cols, nrows).kernel_basis()]

    def to_json(self) -> dict:
        return {"vertices": list(self.vertices), "facets": [list(s) for s in self.facets()]}

    @classmethod
    def from_json(cls, data: Mapping) -> "SimplicialComplex":
        if "vertices" not in data or "facets" not in data:
            raise ValueError("complex JSON needs 'vertices' and 'facets'")
        verts = [_hashable(v) for v in data["vertices"]]
        return cls(verts, [[_hashable(v) for v in f] for f in data["facets"]])

    def __repr__(self) -> str:
        return f"SimplicialComplex({len(self.vertices)} vertices, dim {self.dimension}, {len(self)} simplices)"


def _hashable(v: Any) -> Hashable:
    return tuple(_hashable(x) for x in v) if isinstance(v, list) else v


def simplex_boundary(n: int) -> SimplicialComplex:
    """The boundary of the n-simplex on vertices 0..n."""
    verts = list(range(n + 1))
    return SimplicialComplex(verts, itertools.combinations(verts, n))


def full_simplex(n: int) -> SimplicialComplex:
    return SimplicialComplex(list(range(n + 1)), [tuple(range(n + 1))])


def complex_join(k1: SimplicialComplex, k2: SimplicialComplex) -> SimplicialComplex:
    """Join with vertices tagged (0, v) and (1, w)."""
    verts = [(0, v) for v in k1.vertices] + [(1, w) for w in k2.vertices]
    facets = [
        tuple((0, v) for v in s) + tuple((1, w) for w in t)
        for s in (k1.facets() or [()])
        for t in (k2.facets() or [()])
        if s or t
    ]
    return SimplicialComplex(verts, facets)


def octahedron() -> SimplicialComplex:
    s0 = SimplicialComplex([0, 1])
    return relabel(complex_join(complex_join(s0, s0), s0))


def relabel(k: SimplicialComplex) -> SimplicialComplex:
    """Same complex on vertices 0..m-1 in the existing order."""
    m = {v: i for i, v in enumerate(k.vertices)}
    return SimplicialComplex(range(len(m)), [[m[v] for v in f] for f in k.facets()])


def rp2_six_vertex() -> SimplicialComplex:
    tris = [
        (1, 2, 3), (1, 3, 4), (1, 4, 5), (1, 5, 6), (1, 2, 6),
        (2, 3, 5), (2, 4, 5), (2, 4, 6), (3, 4, 6), (3, 5, 6),
    ]
    return SimplicialComplex(range(1, 7), tris)


def torus_seven_vertex() -> SimplicialComplex:
    """Moebius' 7-vertex torus: triangles {i, i+1, i+3} and {i, i+2, i+3} mod 7."""
    tris = [(i, (i + 1) % 7, (i + 3) % 7) for i in range(7)] + [(i, (i + 2) % 7, (i + 3) % 7) for i in range(7)]
    return SimplicialComplex(range(7), tris)


# -- chain complexes and homology ---------------------------------------------------

@dataclass
class HomologyResult:
    """Reduced homology: degree -> (free rank, torsion coefficients)."""

    groups: dict[int, tuple[int, tuple[int, ...]]]

    def rank(self, k: int) -> int:
        return self.groups.get(k, (0, ()))[0]

    def torsion(self, k: int) -> tuple[int, ...]:
        return self.groups.get(k, (0, ()))[1]

    def is_zero(self, k: int) -> bool:
        return self.rank(k) == 0 and not self.torsion(k)

    def nonzero_degrees(self) -> list[int]:
        return [k for k in sorted(self.groups) if not self.is_zero(k)]

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, HomologyResult):
            return NotImplemented
        keys = set(self.groups) | set(other.groups)
        return all(
            (self.rank(k), self.torsion(k)) == (other.rank(k), other.torsion(k)) for k in keys
        )

    def to_json(self) -> dict:
        return {str(k): {"rank": r, "torsion": list(t)} for k, (r, t) in sorted(self.groups.items())}

    def __repr__(self) -> str:
        parts = [f"H~_{k}=Z^{r}" + (f"+tors{list(t)}" if t else "") for k, (r, t) in sorted(self.groups.items()) if r or t]
        return "HomologyResult(" + (", ".join(parts) or "acyclic") + ")"


@dataclass
class IntegerChainComplex:
    """Augmented chain complex: ``bases[k]`` for k >= -1 and sparse ``d[k]: C_k -> C_{k-1}``."""

    bases: dict[int, list]
    d: dict[int, list[dict[int, int]]]
    _factors: dict[int, list[int]] = field(default_factory=dict, repr=False)

    def size(self, k: int) -> int:
        return len(self.bases.get(k, []))

    def factors(self, k: int) -> list[int]:
        if k not in self._factors:
            self._factors[k] = invariant_factors(self.d.get(k, []), self.size(k - 1)) if k in self.d else []
        return self._factors[k]

    def d_squared_zero(self) -> bool:
        for k in self.d:
            if k - 1 not in self.d:
                continue
            lower = self.d[k - 1]
            for col in self.d[k]:
                acc: dict[int, int] = {}
                for i, x in col.items():
                    for j, y in lower[i].items():
                        acc[j] = acc.get(j, 0) + x * y
                if any(acc.values()):
                    return False
        return True

    def homology(self) -> HomologyResult:
        groups = {}
        for k in sorted(self.bases):
            rk_out = len(self.factors(k))
            inc = self.factors(k + 1)
            free = self.size(k) - rk_out - len(inc)
            groups[k] = (free, tuple(x for x in inc if x > 1))
        return HomologyResult(groups)

    def snf_certificate(self, k: int) -> tuple[list[list[int]], list[list[int]], list[list[int]]]:
        """Dense (S, U, V) with U d_k V = S for small matrices."""
        nrows = self.size(k - 1)
        dense = [[0] * self.size(k) for _ in range(nrows)]
        for j, col in enumerate(self.d.get(k, [])):
            for i, x in col.items():
                dense[i][j] = x
        return smith_normal_form(dense)


def homology(k: SimplicialComplex) -> HomologyResult:
    return k.chain_complex().homology()


def is_homologically_spherical(k: SimplicialComplex, n: int) -> bool:
    if k.dimension != n:
        return False
    h = homology(k)
    return all(h.is_zero(i) for i in range(-1, n))


# -- fundamental group ----------------------------------------------------------------

def _free_reduce(w: list[int]) -> list[int]:
    out: list[int] = []
    for x in w:
        if out and out[-1] == -x:
            out.pop()
        else:
            out.append(x)
    while len(out) >= 2 and out[0] == -out[-1]:
        out = out[1:-1]
    return out


def _substitute(w: list[int], g: int, repl: list[int]) -> list[int]:
    inv = [-x for x in reversed(repl)]
    out = []
    for x in w:
        if x == g:
            out.extend(repl)
        elif x == -g:
            out.extend(inv)
        else:
            out.append(x)
    return _free_reduce(out)


def edge_path_presentation(k: SimplicialComplex) -> tuple[int, list[list[int]]]:
    """Presentation of pi_1 of a connected complex: (generator count, relators)."""
    verts = k.vertices
    adj: dict = {v: [] for v in verts}
    for a, b in k.simplices(1):
        adj[a].append(b)
        adj[b].append(a)
    seen = {verts[0]}
    tree = set()
    stack = [verts[0]]
    while stack:
        v = stack.pop()
        for w in adj[v]:
            if w not in seen:
                seen.add(w)
                tree.add(k.sort((v, w)))
                stack.append(w)
    gens = {e: i + 1 for i, e in enumerate(e for e in k.simplices(1) if e not in tree)}

    def letter(a, b) -> list[int]:
        e = k.sort((a, b))
        if e in tree:
            return []
        g = gens[e]
        return [g] if e == (a, b) else [-g]

    rels = []
    for a, b, c in k.simplices(2):
        rels.append(_free_reduce(letter(a, b) + letter(b, c) + letter(c, a)))
    return len(gens), [r for r in rels if r]


def simply_connected(k: SimplicialComplex, budget: int = 100_000) -> bool | None:
    """True if Tietze moves kill every generator; None when the budget runs out or moves stall."""
    ngen, rels = edge_path_presentation(k)
    alive = set(range(1, ngen + 1))
    work = 0
    while alive:
        rels = [r for r in (_free_reduce(r) for r in rels) if r]
        chosen = None
        for ri, r in enumerate(sorted(range(len(rels)), key=lambda i: len(rels[i]))):
            w = rels[r]
            counts: dict[int, int] = {}
            for x in w:
                counts[abs(x)] = counts.get(abs(x), 0) + 1
            once = [g for g, c in counts.items() if c == 1]
            if once:
                chosen = (r, min(once))
                break
        if chosen is None:
            return None
        r, g = chosen
        w = rels[r]
        pos = next(i for i, x in enumerate(w) if abs(x) == g)
        rot = w[pos:] + w[:pos]
        rest = rot[1:]
        # rot = g^e * rest = 1  =>  g = rest^-1 (e = 1) or g = rest (e = -1)
        repl = [-x for x in reversed(rest)] if rot[0] == g else list(rest)
        rels = [_substitute(x, g, repl) for i, x in enumerate(rels) if i != r]
        alive.discard(g)
        work += sum(len(x) for x in rels)
        if work > budget:
            return None
    return True


def is_spherical(k: SimplicialComplex, n: int, budget: int = 100_000) -> str:
    """'yes', 'no' or 'unknown' for: dim n and (n-1)-connected."""
    if not is_homologically_spherical(k, n):
        return "no"
    if n < 2:
        return "yes"
    sc = simply_connected(k.skeleton(2), budget)
    return "yes" if sc else "unknown"


# -- posets --------------------------------------------------------------------------

class FinitePoset:
    """Finite partial order stored by its transitive closure.

    ``elements`` keeps the input order; ``linear`` is the linear extension
    used to orient order complexes (a stable topological sort).
    """

    def __init__(self, elements: Sequence[Hashable], relations: Iterable[tuple[Hashable, Hashable]] = ()):
        self.elements = tuple(elements)
        self.index = {x: i for i, x in enumerate(self.elements)}
        if len(self.index) != len(self.elements):
            raise ValueError("repeated poset elements")
        n = len(self.elements)
        up = [0] * n
        for a, b in relations:
            if a not in self.index or b not in self.index:
                raise KeyError(f"relation ({a!r}, {b!r}) mentions an unknown element")
            if a != b:
                up[self.index[a]] |= 1 << self.index[b]
        # transitive closure by repeated propagation in topological fashion
        changed = True
        while changed:
            changed = False
            for i in range(n):
                acc = up[i]
                m = acc
                while m:
                    low = m & -m
                    j = low.bit_length() - 1
                    acc |= up[j]
                    m ^= low
                if acc != up[i]:
                    up[i] = acc
                    changed = True
        for i in range(n):
            if up[i] >> i & 1:
                raise ValueError(f"relations contain a cycle through {self.elements[i]!r}")
        self._up = up
        self._down = [0] * n
        for i in range(n):
            m = up[i]
            while m:
                low = m & -m
                self._down[low.bit_length() - 1] |= 1 << i
                m ^= low
        # stable linear extension
        order = []
        placed = 0
        while len(order) < n:
            i = next(i for i in range(n) if not placed >> i & 1 and self._down[i] & ~placed == 0)
            order.append(i)
            placed |= 1 << i
        self.linear = tuple(self.elements[i] for i in order)
        self.rank_in_linear = {x: r for r, x in enumerate(self.linear)}
        self._height: dict[Hashable, int] = {}

    def __len__(self) -> int:
        return len(self.elements)

    def __contains__(self, x: Hashable) -> bool:
        return x in self.index

    def _members(self, mask: int) -> list[Hashable]:
        return [self.elements[i] for i in range(len(self.elements)) if mask >> i & 1]

    def _check(self, x: Hashable) -> int:
        if x not in self.index:
            raise KeyError(f"{x!r} is not an element of the poset")
        return self.index[x]

    def less(self, a: Hashable, b: Hashable) -> bool:
        return bool(self._up[self._check(a)] >> self._check(b) & 1)

    def leq(self, a: Hashable, b: Hashable) -> bool:
        return a == b or self.less(a, b)

    def comparable(self, a: Hashable, b: Hashable) -> bool:
        return self.leq(a, b) or self.leq(b, a)

    def strictly_above(self, x: Hashable) -> list[Hashable]:
        return self._members(self._up[self._check(x)])

    def strictly_below(self, x: Hashable) -> list[Hashable]:
        return self._members(self._down[self._check(x)])

    def relations(self) -> list[tuple[Hashable, Hashable]]:
        return [(a, b) for a in self.elements for b in self.strictly_above(a)]

    def cover_relations(self) -> list[tuple[Hashable, Hashable]]:
        out = []
        for a in self.elements:
            above = self._up[self.index[a]]
            for b in self.strictly_above(a):
                between = above & self._down[self.index[b]]
                if not between:
                    out.append((a, b))
        return out

    def subposet(self, keep: Iterable[Hashable]) -> "FinitePoset":
        keep = set(keep)
        # listing in linear order makes the subposet inherit our linear extension
        elems = [x for x in self.linear if x in keep]
        rels = [(a, b) for a in elems for b in self.strictly_above(a) if b in keep]
        return FinitePoset(elems, rels)

    def upper(self, x: Hashable, strict: bool = True) -> "FinitePoset":
        return self.subposet(self.strictly_above(x) + ([] if strict else [x]))

    def lower(self, x: Hashable, strict: bool = True) -> "FinitePoset":
        return self.subposet(self.strictly_below(x) + ([] if strict else [x]))

    def link(self, x: Hashable) -> "FinitePoset":
        """X_{<x} * X_{>x}: the elements comparable with x, other than x."""
        return self.subposet(self.strictly_below(x) + self.strictly_above(x))

    def opposite(self) -> "FinitePoset":
        return FinitePoset(self.elements, [(b, a) for a, b in self.relations()])

    def height(self, x: Hashable) -> int:
        if x not in self._height:
            below = self.strictly_below(x)
            self._height[x] = 0 if not below else 1 + max(self.height(y) for y in below)
        return self._height[x]

    def dimension(self) -> int:
        return max((self.height(x) for x in self.elements), default=-1)

    def maximal_chains(self) -> list[tuple]:
        out = []
        minimal = [x for x in self.linear if not self._down[self.index[x]]]

        def extend(chain: list) -> None:
            top = chain[-1]
            nxt = [y for y in self.strictly_above(top)
                   if not (self._down[self.index[y]] & self._up[self.index[top]])]
            if not nxt:
                out.append(tuple(chain))
                return
            for y in sorted(nxt, key=self.rank_in_linear.__getitem__):
                chain.append(y)
                extend(chain)
                chain.pop()

        for m in minimal:
            extend([m])
        return out

    def order_complex(self) -> SimplicialComplex:
        return SimplicialComplex(self.linear, self.maximal_chains())

    def homology(self) -> HomologyResult:
        return homology(self.order_complex())

    def orient_chain(self, elems: Sequence[Hashable]) -> tuple[tuple, int]:
        """Sort a chain bottom to top with the permutation sign (0 if degenerate)."""
        ranks = [self.rank_in_linear[x] for x in elems]
        if len(set(ranks)) != len(ranks):
            return (), 0
        return tuple(sorted(elems, key=self.rank_in_linear.__getitem__)), permutation_sign(ranks)

    def to_json(self) -> dict:
        return {"elements": list(self.elements), "relations": [list(r) for r in self.cover_relations()]}

    @classmethod
    def from_json(cls, data: Mapping) -> "FinitePoset":
        if "elements" not in data:
            raise ValueError("poset JSON needs 'elements'")
        elems = [_hashable(x) for x in data["elements"]]
        rels = [(_hashable(a), _hashable(b)) for a, b in data.get("relations", [])]
        return cls(elems, rels)

    def __repr__(self) -> str:
        return f"FinitePoset({len(self.elements)} elements)"


def order_complex(x: FinitePoset) -> SimplicialComplex:
    return x.order_complex()


def face_poset(k: SimplicialComplex) -> FinitePoset:
    """Nonempty simplices ordered by inclusion (elements listed by dimension)."""
    elems = k.nonempty_simplices()
    rels = []
    for s in elems:
        for i in range(len(s)):
            t = s[:i] + s[i + 1:]
            if t:
                rels.append((t, s))
    return FinitePoset(elems, rels)


def poset_join(x1: FinitePoset, x2: FinitePoset) -> FinitePoset:
    elems = [(0, a) for a in x1.elements] + [(1, b) for b in x2.elements]
    rels = [((0, a), (0, b)) for a, b in x1.relations()] + [((1, a), (1, b)) for a, b in x2.relations()]
    rels += [((0, a), (1, b)) for a in x1.elements for b in x2.elements]
    return FinitePoset(elems, rels)


def link_poset(x: Hashable, poset: FinitePoset) -> FinitePoset:
    return poset.link(x)


def link_complex(sigma: Iterable[Hashable], k: SimplicialComplex) -> SimplicialComplex:
    return k.link(sigma)


def upper_set(poset: FinitePoset, x: Hashable) -> FinitePoset:
    return poset.upper(x)


def lower_set(poset: FinitePoset, x: Hashable) -> FinitePoset:
    return poset.lower(x)


def opposite(poset: FinitePoset) -> FinitePoset:
    return poset.opposite()


# -- chain-level operators -----------------------------------------------------------

def subdivision_chain(chain: Mapping[Simplex, int]) -> Chain:
    """Barycentric subdivision lambda: C~(K) -> C~(K').

    A simplex [v_0..v_k] goes to the signed sum over orderings pi of the
    flag {v_pi0} < {v_pi0, v_pi1} < ...; faces inside a flag are sorted
    vertex tuples, so the result lives in the order complex of the face poset.
    """
    out: Chain = {}
    for s, c in chain.items():
        if not s:
            add_to(out, (), c)
            continue
        k = len(s)
        for perm in itertools.permutations(range(k)):
            flag = []
            for j in range(1, k + 1):
                flag.append(tuple(s[i] for i in sorted(perm[:j])))
            add_to(out, tuple(flag), c * permutation_sign(perm))
    return out


def push_forward(chain: Mapping[Simplex, int], f: Callable[[Hashable], Hashable],
                 orient: Callable[[Sequence[Hashable]], tuple[tuple, int]]) -> Chain:
    """Image of a chain under a simplicial map; degenerate images vanish."""
    out: Chain = {}
    for s, c in chain.items():
        t, sign = orient([f(v) for v in s])
        if sign:
            add_to(out, t, sign * c)
    return out


def chain_join(alpha: Mapping[Simplex, int], beta: Mapping[Simplex, int],
               orient: Callable[[Sequence[Hashable]], tuple[tuple, int]] | None = None) -> Chain:
    """alpha * beta: concatenate simplices, extended bilinearly.

    Without ``orient`` the concatenation is kept as is (correct for tagged
    joins where left vertices precede right ones).  Otherwise each
    concatenation is re-sorted with its permutation sign.
    """
    out: Chain = {}
    for s, a in alpha.items():
        for t, b in beta.items():
            if orient is None:
                add_to(out, tuple(s) + tuple(t), a * b)
            else:
                u, sign = orient(tuple(s) + tuple(t))
                if sign:
                    add_to(out, u, sign * a * b)
    return out


def tag_chain(chain: Mapping[Simplex, int], tag: int) -> Chain:
    return {tuple((tag, v) for v in s): c for s, c in chain.items()}
