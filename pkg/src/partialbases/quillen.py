"""Spherical poset maps, the non-Hausdorff mapping cylinder and the
decomposition of top homology with an explicit basis.

For a map f: X(K) -> Y out of a face poset the basis construction follows
this recipe:

* gamma_i are lifts of a basis of H~_n(Y) through f_* o lambda;
* for each y, alpha runs over a basis of H~_{h(y)}(K_y) with
  K_y = {s : f(s) <= y}, and beta over top cycles of lk(x, K)
  (x the first simplex with f(x) = y) whose images under
  t -> f(x u t) form a basis of H~(Y_{>y});
* the joins alpha * beta together with the gammas are expressed in a
  basis of H~_n(K) = Z_n(K), and the change-of-basis matrix must be
  unimodular.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from typing import Any, Hashable, Mapping, Sequence

from .intlinalg import ColumnEchelon, determinant
from .topology import (
    Chain,
    FinitePoset,
    SimplicialComplex,
    _hashable,
    chain_join,
    face_poset,
    homology,
    is_homologically_spherical,
    is_spherical,
    push_forward,
    subdivision_chain,
)


class PreconditionError(ValueError):
    """Inputs do not satisfy the hypotheses of the construction."""

    def __init__(self, message: str, detail: Any = None):
        super().__init__(message)
        self.detail = detail


class PosetMap:
    """Order-preserving map between finite posets (checked on construction)."""

    def __init__(self, source: FinitePoset, target: FinitePoset, assignment: Mapping[Hashable, Hashable]):
        self.source = source
        self.target = target
        self.assignment = dict(assignment)
        missing = [x for x in source.elements if x not in self.assignment]
        if missing:
            raise ValueError(f"map undefined on {missing[:3]}")
        extra = [x for x in self.assignment if x not in source]
        if extra:
            raise ValueError(f"assignment mentions elements outside the source: {extra[:3]}")
        bad = [y for y in self.assignment.values() if y not in target]
        if bad:
            raise ValueError(f"assignment hits elements outside the target: {bad[:3]}")
        for a, b in source.relations():
            if not target.leq(self.assignment[a], self.assignment[b]):
                raise ValueError(f"not order preserving: {a!r} <= {b!r} but f({a!r}) !<= f({b!r})")

    def __call__(self, x: Hashable) -> Hashable:
        return self.assignment[x]

    def preimage(self, y: Hashable) -> list[Hashable]:
        return [x for x in self.source.linear if self.assignment[x] == y]

    def to_json(self) -> dict:
        return {
            "source": self.source.to_json(),
            "target": self.target.to_json(),
            "assignment": [[_jsonable(x), _jsonable(self.assignment[x])] for x in self.source.elements],
        }

    @classmethod
    def from_json(cls, data: Mapping, source: FinitePoset | None = None) -> "PosetMap":
        src = source if source is not None else FinitePoset.from_json(data["source"])
        tgt = FinitePoset.from_json(data["target"])
        raw = data["assignment"]
        if isinstance(raw, Mapping):
            assignment = {_decode_key(k, src): _decode_key(v, tgt) for k, v in raw.items()}
        else:
            assignment = {_hashable(x): _hashable(y) for x, y in raw}
        return cls(src, tgt, assignment)


def _jsonable(x: Any) -> Any:
    return [_jsonable(v) for v in x] if isinstance(x, tuple) else x


def _decode_key(k: Any, poset: FinitePoset) -> Hashable:
    """Object keys are strings; accept the element itself or its JSON encoding."""
    if not isinstance(k, str):
        return _hashable(k)
    if k in poset:
        return k
    try:
        v = _hashable(json.loads(k))
    except json.JSONDecodeError:
        raise ValueError(f"unknown element {k!r}") from None
    if v not in poset:
        raise ValueError(f"unknown element {k!r}")
    return v


def fiber(f: PosetMap, y: Hashable) -> FinitePoset:
    """f/y = {x : f(x) <= y}."""
    if y not in f.target:
        raise KeyError(f"{y!r} is not in the target poset")
    return f.source.subposet(x for x in f.source.elements if f.target.leq(f(x), y))


def mapping_cylinder(f: PosetMap) -> FinitePoset:
    """Disjoint union of X and Y with x <= y whenever f(x) <= y; tags 'X' and 'Y'."""
    X, Y = f.source, f.target
    elems = [("X", x) for x in X.linear] + [("Y", y) for y in Y.linear]
    rels = [(("X", a), ("X", b)) for a, b in X.relations()]
    rels += [(("Y", a), ("Y", b)) for a, b in Y.relations()]
    rels += [(("X", x), ("Y", y)) for x in X.elements for y in Y.elements if Y.leq(f(x), y)]
    return FinitePoset(elems, rels)


# -- spherical maps -----------------------------------------------------------------

def _spherical(poset: FinitePoset, n: int, homological: bool) -> str:
    k = poset.order_complex()
    if homological:
        return "yes" if is_homologically_spherical(k, n) else "no"
    return is_spherical(k, n)


@dataclass
class SphericalMapReport:
    n: int
    homological: bool
    per_y: list[dict] = field(default_factory=list)
    height_bound_violations: list[dict] = field(default_factory=list)
    unhit: list[Hashable] = field(default_factory=list)
    dim_source: int = -1
    dim_target: int = -1

    @property
    def verdict(self) -> str:
        vals = [v for row in self.per_y for v in (row["upper"], row["fiber"])]
        if "no" in vals:
            return "fail"
        if "unknown" in vals:
            return "unknown"
        return "pass"

    @property
    def passed(self) -> bool:
        return self.verdict == "pass"

    def side_checks(self) -> dict:
        return {
            "height_bound": not self.height_bound_violations,
            "surjective": not self.unhit,
            "dimensions": self.dim_source == self.dim_target == self.n,
        }

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "homological": self.homological,
            "verdict": self.verdict,
            "per_y": [{**row, "y": _jsonable(row["y"])} for row in self.per_y],
            "side_checks": self.side_checks(),
            "height_bound_violations": [
                {"x": _jsonable(v["x"]), "h_x": v["h_x"], "f_x": _jsonable(v["f_x"]), "h_f_x": v["h_f_x"]}
                for v in self.height_bound_violations
            ],
            "unhit": [_jsonable(y) for y in self.unhit],
            "dim_source": self.dim_source,
            "dim_target": self.dim_target,
        }


def check_spherical_map(f: PosetMap, n: int, homological: bool = True) -> SphericalMapReport:
    X, Y = f.source, f.target
    rep = SphericalMapReport(n, homological, dim_source=X.dimension(), dim_target=Y.dimension())
    for y in Y.linear:
        h = Y.height(y)
        rep.per_y.append({
            "y": y,
            "height": h,
            "upper": _spherical(Y.upper(y), n - h - 1, homological),
            "fiber": _spherical(fiber(f, y), h, homological),
        })
    for x in X.linear:
        if Y.height(f(x)) < X.height(x):
            rep.height_bound_violations.append({"x": x, "h_x": X.height(x), "f_x": f(x), "h_f_x": Y.height(f(x))})
    hit = set(f.assignment.values())
    rep.unhit = [y for y in Y.linear if y not in hit]
    return rep


def theorem47_decomposition(f: PosetMap, n: int) -> dict:
    """Summand ranks of H~_n(X) = H~_n(Y) + sum_y H~_h(f/y) (x) H~_{n-h-1}(Y_{>y})."""
    rep = check_spherical_map(f, n)
    if not rep.passed:
        raise PreconditionError("map is not homologically spherical", rep.to_json())
    if not is_homologically_spherical(f.target.order_complex(), n):
        raise PreconditionError(f"target is not homologically {n}-spherical")
    rank_y = f.target.homology().rank(n)
    rows = []
    total = rank_y
    for y in f.target.linear:
        h = f.target.height(y)
        a = fiber(f, y).homology().rank(h)
        b = f.target.upper(y).homology().rank(n - h - 1)
        rows.append({"y": _jsonable(y), "height": h, "fiber_rank": a, "upper_rank": b, "product": a * b})
        total += a * b
    rank_x = f.source.homology().rank(n)
    return {"rank_target": rank_y, "summands": rows, "total": total, "rank_source": rank_x, "holds": total == rank_x}


# -- linear algebra on cycles ------------------------------------------------------------

class CycleCoordinates:
    """Integer coordinates with respect to a basis of cycles in one degree."""

    def __init__(self, complex_: SimplicialComplex, basis: Sequence[Chain], k: int):
        self.complex = complex_
        self.k = k
        self.basis = list(basis)
        nrows = len(complex_.simplices(k))
        self.ech = ColumnEchelon([complex_.chain_vector(c, k) for c in self.basis], nrows)

    def coords(self, chain: Chain) -> list[int] | None:
        sol = self.ech.solve(self.complex.chain_vector(chain, self.k))
        if sol is None:
            return None
        return [sol.get(i, 0) for i in range(len(self.basis))]


def _columns(vectors: Sequence[Sequence[int]]) -> list[dict[int, int]]:
    return [{i: x for i, x in enumerate(v) if x} for v in vectors]


def _lift_basis(images: Sequence[Sequence[int]], nrows: int) -> list[list[int]] | None:
    """For the matrix with the given columns, integer c with F c = e_i for each i."""
    ech = ColumnEchelon(_columns(images), nrows)
    out = []
    for i in range(nrows):
        sol = ech.solve({i: 1})
        if sol is None:
            return None
        out.append([sol.get(j, 0) for j in range(len(images))])
    return out


def _combine(chains: Sequence[Chain], coefs: Sequence[int]) -> Chain:
    out: Chain = {}
    for c, k in zip(chains, coefs):
        if k:
            for s, v in c.items():
                nv = out.get(s, 0) + k * v
                if nv:
                    out[s] = nv
                else:
                    out.pop(s, None)
    return out


# -- hypotheses ----------------------------------------------------------------------------

def _face_map_check(f: PosetMap, K: SimplicialComplex) -> None:
    simp = set(K.nonempty_simplices())
    src = set(f.source.elements)
    if simp != src:
        raise PreconditionError("source poset is not the face poset of the complex")


def check_link_monotone(f: PosetMap, K: SimplicialComplex) -> dict:
    """Link monotonicity: f(s1) <= f(s2) implies lk(s2) subset of lk(s1)."""
    by_y: dict = {}
    for s in K.nonempty_simplices():
        by_y.setdefault(f(s), []).append(s)
    links = {s: set(K.link(s).nonempty_simplices()) for s in K.nonempty_simplices()}
    Y = f.target
    for y1, s1s in by_y.items():
        inter = set.intersection(*(links[s] for s in s1s))
        for y2, s2s in by_y.items():
            if not Y.leq(y1, y2):
                continue
            for s2 in s2s:
                extra = links[s2] - inter
                if extra:
                    t = min(extra, key=K.key)
                    s1 = next(s for s in s1s if t not in links[s])
                    return {"holds": False, "witness": {"s1": list(s1), "s2": list(s2), "t": list(t)}}
    return {"holds": True}


def check_union_monotone(f: PosetMap, K: SimplicialComplex) -> dict:
    """Union monotonicity, checked exactly.

    Taking s2 = t2 = r2 shows the condition is equivalent to: for every
    simplex r1, every split r1 = s1 u t1 into disjoint nonempty faces and
    every value v = f(r2), v >= f(s1), f(t1) implies v >= f(r1).
    Overlapping splits only shrink the set of such v.
    """
    Y = f.target
    values = sorted({f(s) for s in K.nonempty_simplices()}, key=Y.rank_in_linear.__getitem__)
    witness_of = {}
    for s in K.nonempty_simplices():
        witness_of.setdefault(f(s), s)
    for r1 in K.nonempty_simplices():
        if len(r1) < 2:
            continue
        fr = f(r1)
        rest = r1[1:]
        for m in range(len(rest) + 1):
            for pick in itertools.combinations(rest, m):
                s1 = (r1[0],) + pick
                t1 = tuple(v for v in r1 if v not in s1)
                if not t1:
                    continue
                a, b = f(s1), f(t1)
                for v in values:
                    if Y.leq(a, v) and Y.leq(b, v) and not Y.leq(fr, v):
                        return {
                            "holds": False,
                            "witness": {"s1": list(s1), "t1": list(t1), "r2": list(witness_of[v])},
                        }
    return {"holds": True}


def _target_cycles(Y: FinitePoset, d: int) -> tuple[SimplicialComplex, list[Chain]]:
    kc = Y.order_complex()
    return kc, kc.cycle_basis(d) if d <= kc.dimension else []


def _surjects_on_homology(images: Sequence[Chain], target: SimplicialComplex, d: int) -> bool:
    """Do the cycles in ``images`` together with boundaries span H~_d(target)?"""
    if d > target.dimension:
        return True
    z = target.cycle_basis(d)
    if not z:
        return True
    cc = CycleCoordinates(target, z, d)
    cols = []
    for c in images:
        v = cc.coords(c)
        if v is None:
            raise AssertionError("image of a cycle is not a cycle")
        cols.append(v)
    if d + 1 <= target.dimension:
        for s in target.simplices(d + 1):
            cols.append(cc.coords(target.boundary({s: 1})))
    return ColumnEchelon(_columns(cols), len(z)).surjects()


def check_link_epimorphism(f: PosetMap, K: SimplicialComplex, n: int) -> dict:
    """Link epimorphism: f_*: H~_{n-h(y)-1}(X_{>s}) -> H~_{n-h(y)-1}(Y_{>y}) onto for f(s) = y."""
    X, Y = f.source, f.target
    for s in X.linear:
        y = f(s)
        d = n - Y.height(y) - 1
        up = X.upper(s)
        bad = [t for t in up.elements if not Y.less(y, f(t))]
        if bad:
            return {"holds": False, "witness": {"s": list(s), "t": list(bad[0]), "reason": "image not above f(s)"}}
        target = Y.upper(y)
        tk = target.order_complex()
        src = up.order_complex()
        cycles = src.cycle_basis(d) if d <= src.dimension else []
        images = [push_forward(c, f, target.orient_chain) for c in cycles]
        if not _surjects_on_homology(images, tk, d):
            return {"holds": False, "witness": {"s": list(s), "y": _jsonable(y), "degree": d}}
    return {"holds": True}


# -- basis certificate ----------------------------------------------------------------------

@dataclass
class BasisCertificate:
    n: int
    gammas: list[Chain]
    products: list[dict]
    matrix: list[list[int]]
    determinant: int
    epimorphism: bool
    remark_identity: list[bool]
    hypotheses: dict

    @property
    def unimodular(self) -> bool:
        return abs(self.determinant) == 1

    @property
    def remark_holds(self) -> bool:
        return all(self.remark_identity)

    def to_json(self) -> dict:
        def ch(c: Chain) -> list:
            return [[[_jsonable(v) for v in s], k] for s, k in sorted(c.items(), key=lambda kv: repr(kv[0]))]

        return {
            "n": self.n,
            "gammas": [ch(g) for g in self.gammas],
            "products": [
                {"y": _jsonable(p["y"]), "i": p["i"], "j": p["j"], "alpha": ch(p["alpha"]), "beta": ch(p["beta"]),
                 "chain": ch(p["chain"])}
                for p in self.products
            ],
            "matrix": self.matrix,
            "determinant": self.determinant,
            "unimodular": self.unimodular,
            "epimorphism": self.epimorphism,
            "remark_identity": self.remark_identity,
            "hypotheses": self.hypotheses,
        }


def _f_tilde(f: PosetMap, K: SimplicialComplex, x: tuple):
    return lambda tau: f(K.sort(x + tau))


def theorem47_basis(f: PosetMap, K: SimplicialComplex, n: int, check_remark: bool = True) -> BasisCertificate:
    """Build {gamma_i} u {alpha_i * beta_j} and certify it is a basis of H~_n(K)."""
    _face_map_check(f, K)
    Y = f.target
    rep = check_spherical_map(f, n)
    if not rep.passed:
        raise PreconditionError("map is not homologically spherical", rep.to_json())
    if not is_homologically_spherical(Y.order_complex(), n):
        raise PreconditionError(f"target is not homologically {n}-spherical")
    hyps = {
        "link_monotone": check_link_monotone(f, K),
        "union_monotone": check_union_monotone(f, K),
        "link_epimorphism": check_link_epimorphism(f, K, n),
    }
    failed = [k for k, v in hyps.items() if not v["holds"]]
    if failed:
        raise PreconditionError(f"hypotheses fail: {', '.join(failed)}", hyps)

    # H~_n(K) = Z_n(K) since dim K = n
    zk = K.cycle_basis(n)
    kc = CycleCoordinates(K, zk, n)
    ky = Y.order_complex()
    zy = ky.cycle_basis(n)
    yc = CycleCoordinates(ky, zy, n)

    def f_star(z: Chain) -> list[int]:
        img = push_forward(subdivision_chain(z), f, Y.orient_chain)
        v = yc.coords(img)
        if v is None:
            raise AssertionError("f_* of a cycle is not a cycle")
        return v

    fmat_cols = [f_star(z) for z in zk]
    epi = ColumnEchelon(_columns(fmat_cols), len(zy)).surjects()
    lifts = _lift_basis(fmat_cols, len(zy))
    if lifts is None:
        raise PreconditionError("f_* is not onto H~_n(Y); no lifts exist")
    gammas = [_combine(zk, c) for c in lifts]

    M = mapping_cylinder(f) if check_remark else None
    products = []
    remark = []
    for y in Y.linear:
        r = Y.height(y)
        d = n - r - 1
        ky_ = K.subcomplex(lambda s: Y.leq(f(s), y))
        alphas = ky_.cycle_basis(r)
        x = f.preimage(y)[0]
        kx = K.link(x)
        upper = Y.upper(y)
        ftil = _f_tilde(f, K, x)
        if d == -1:
            if len(upper):
                raise PreconditionError(f"Y above {y!r} should be empty")
            betas = [{(): 1}]
        else:
            uk = upper.order_complex()
            zu = uk.cycle_basis(d)
            uc = CycleCoordinates(uk, zu, d)
            cand = kx.cycle_basis(d) if d <= kx.dimension else []
            cols = []
            for z in cand:
                v = uc.coords(push_forward(subdivision_chain(z), ftil, upper.orient_chain))
                if v is None:
                    raise AssertionError("image of a link cycle is not a cycle")
                cols.append(v)
            sols = _lift_basis(cols, len(zu))
            if sols is None:
                raise PreconditionError(f"no lifts of a basis of H~_{d}(Y_>y) for y={y!r}")
            betas = [_combine(cand, c) for c in sols]
        for i, a in enumerate(alphas):
            for j, b in enumerate(betas):
                prod = chain_join(a, b, orient=K.orient)
                products.append({"y": y, "i": i, "j": j, "alpha": a, "beta": b, "chain": prod})
                if M is not None:
                    remark.append(_remark_identity(f, K, M, y, r, a, b, prod, ftil))

    cand = gammas + [p["chain"] for p in products]
    matrix_cols = []
    for c in cand:
        v = kc.coords(c)
        if v is None:
            raise AssertionError("candidate class is not an n-cycle of K")
        matrix_cols.append(v)
    size = len(zk)
    matrix = [[matrix_cols[j][i] for j in range(len(cand))] for i in range(size)]
    det = determinant(matrix) if len(cand) == size else 0
    return BasisCertificate(n, gammas, products, matrix, det, epi, remark, hyps)


def _remark_identity(f: PosetMap, K: SimplicialComplex, M: FinitePoset, y, r: int,
                     alpha: Chain, beta: Chain, prod: Chain, ftil) -> bool:
    """phi_*((alpha * beta)') == alpha' * ftilde_*(beta') in chains of K(M_{r+1})."""

    def phi(face):
        return ("X", face) if len(face) - 1 <= r else ("Y", f(face))

    lhs = push_forward(subdivision_chain(prod), phi, M.orient_chain)
    a_sub = {tuple(("X", s) for s in flag): c for flag, c in subdivision_chain(alpha).items()}
    b_img = push_forward(subdivision_chain(beta), lambda t: ("Y", ftil(t)), M.orient_chain)
    rhs = chain_join(a_sub, b_img, orient=M.orient_chain)
    return lhs == rhs


def verify_basis_against_snf(cert: BasisCertificate, K: SimplicialComplex) -> bool:
    """Independent rank cross-check: the certificate matrix size equals rank H~_n(K) from SNF."""
    return len(cert.matrix) == homology(K).rank(cert.n)


def face_poset_map(K: SimplicialComplex, target: FinitePoset, rule) -> PosetMap:
    X = face_poset(K)
    return PosetMap(X, target, {s: rule(s) for s in X.elements})
