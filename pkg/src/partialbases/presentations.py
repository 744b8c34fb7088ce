"""Relation families for Aut(F_n), Aut(F_n, {v_1..v_l}) and SAut(F_n, {v_1..v_l}).

Every family is enumerated exhaustively over its letter ranges and checked
semantically: both sides are realized as automorphisms and compared by
images.  Inverses are computed by Whitehead reduction of the images, so no
relation is verified with itself.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable, Iterator, Sequence

from .autos import (
    Automorphism,
    SignedPerm,
    Swap,
    Token,
    Transvection,
    Whitehead,
    compose,
    fixes_prefix,
    from_token,
    full_mask,
    identity_auto,
    inverse_by_reduction,
    is_special,
    lambda_moves,
    letter_bit,
    letters_of,
    mask_letters,
    mask_of,
    omega,
    omega_fixing,
)

Factor = tuple[Token, int]

THEOREM_FAMILIES: dict[str, tuple[str, ...]] = {
    "2.1": ("R1", "R2", "R3", "R4", "R5", "R6", "R7", "R8", "R9", "R10"),
    "2.4": ("R1", "R2", "R3", "R4", "R5", "R6", "R7"),
    "2.5": ("S0", "S1", "S2", "S3", "S4", "S5"),
    "2.7": ("S0", "S1", "S2", "S3", "S4", "S5"),
    "2.9": ("C1", "C2", "C3"),
    "2.10": ("T2_10_1", "T2_10_2", "T2_10_3", "T2_10_4", "T2_10_5p", "T2_10_6"),
    "2.11": ("T2_11_1", "T2_11_2", "T2_11_3", "T2_11_4", "T2_11_5", "T2_11_6"),
}

# R8-R10 are consequences of R1-R7, listed for checking only.
DERIVED_FAMILIES = frozenset({"R8", "R9", "R10"})
OMEGA_TABLE_MAX_RANK = 4


class ParameterError(ValueError):
    pass


@dataclass(frozen=True)
class RelationInstance:
    theorem: str
    family: str
    lhs: tuple[Factor, ...]
    rhs: tuple[Factor, ...]
    side_conditions: tuple[tuple[str, object], ...] = ()

    def tokens(self) -> Iterator[Token]:
        for t, _ in self.lhs + self.rhs:
            yield t

    def relator(self) -> tuple[Factor, ...]:
        """lhs * rhs^-1 as a word in the generators."""
        return self.lhs + tuple((t, -e) for t, e in reversed(self.rhs))

    def describe(self) -> str:
        def side(fs: Sequence[Factor]) -> str:
            if not fs:
                return "1"
            return " ".join(str(t) + ("" if e == 1 else "^-1") for t, e in fs)

        return f"{side(self.lhs)} = {side(self.rhs)}"

    def to_json(self) -> dict:
        return {
            "theorem": self.theorem,
            "family": self.family,
            "lhs": [[str(t), e] for t, e in self.lhs],
            "rhs": [[str(t), e] for t, e in self.rhs],
            "side_conditions": {k: _jsonable(v) for k, v in self.side_conditions},
        }


def _jsonable(v: object) -> object:
    if isinstance(v, (list, tuple)):
        return [_jsonable(x) for x in v]
    if isinstance(v, (int, str)) or v is None:
        return v
    return str(v)


# -- realization -------------------------------------------------------------------

@lru_cache(maxsize=None)
def _realized(token: Token, exp: int, rank: int) -> Automorphism:
    phi = from_token(token, rank)
    return phi if exp == 1 else inverse_by_reduction(phi)


def realize_word(factors: Sequence[Factor], rank: int) -> Automorphism:
    out = identity_auto(rank)
    for t, e in factors:
        out = compose(out, _realized(t, e, rank))
    return out


def check_relation(inst: RelationInstance, rank: int) -> bool:
    return realize_word(inst.lhs, rank) == realize_word(inst.rhs, rank)


def first_difference(inst: RelationInstance, rank: int) -> dict | None:
    left, right = realize_word(inst.lhs, rank), realize_word(inst.rhs, rank)
    for i, (x, y) in enumerate(zip(left.raw, right.raw), start=1):
        if x != y:
            return {"generator": i, "lhs_image": list(x), "rhs_image": list(y)}
    return None


def _comm(x: Token, y: Token) -> tuple[Factor, ...]:
    return ((x, 1), (y, 1), (x, -1), (y, -1))


# -- Aut(F_n) families --------------------------------------------------------------

def _R1(rank: int) -> Iterator[RelationInstance]:
    for t in lambda_moves(rank):
        a = t.a
        rhs = Whitehead((t.mask & ~letter_bit(a)) | letter_bit(-a), -a)
        yield RelationInstance("2.1", "R1", ((t, -1),), ((rhs, 1),), (("A", mask_letters(t.mask)), ("a", a)))


def _by_letter(rank: int) -> dict[int, list[Whitehead]]:
    out: dict[int, list[Whitehead]] = {}
    for t in lambda_moves(rank):
        out.setdefault(t.a, []).append(t)
    return out


def _R2(rank: int) -> Iterator[RelationInstance]:
    for a, moves in _by_letter(rank).items():
        for s, t in itertools.product(moves, repeat=2):
            if s.mask & t.mask == letter_bit(a):
                yield RelationInstance(
                    "2.1", "R2", ((s, 1), (t, 1)), ((Whitehead(s.mask | t.mask, a), 1),),
                    (("A", mask_letters(s.mask)), ("B", mask_letters(t.mask)), ("a", a)),
                )


def _R3(rank: int) -> Iterator[RelationInstance]:
    for s, t in itertools.product(lambda_moves(rank), repeat=2):
        if s.mask & t.mask == 0 and not t.contains(-s.a) and not s.contains(-t.a):
            yield RelationInstance(
                "2.1", "R3", _comm(s, t), (),
                (("A", mask_letters(s.mask)), ("a", s.a), ("B", mask_letters(t.mask)), ("b", t.a)),
            )


def _R4(rank: int) -> Iterator[RelationInstance]:
    # (B; b)(A; a) = (A u B - {b}; a)(B; b)
    for s, t in itertools.product(lambda_moves(rank), repeat=2):
        A, B = s, t
        if A.mask & B.mask == 0 and not B.contains(-A.a) and A.contains(-B.a):
            mixed = Whitehead((A.mask | B.mask) & ~letter_bit(B.a), A.a)
            yield RelationInstance(
                "2.1", "R4", ((B, 1), (A, 1)), ((mixed, 1), (B, 1)),
                (("A", mask_letters(A.mask)), ("a", A.a), ("B", mask_letters(B.mask)), ("b", B.a)),
            )


def _R5(rank: int) -> Iterator[RelationInstance]:
    for A in lambda_moves(rank):
        a = A.a
        for b in mask_letters(A.mask):
            if b == a or A.contains(-b):
                continue
            left = Whitehead((A.mask & ~letter_bit(a)) | letter_bit(-a), b)
            right = Whitehead((A.mask & ~letter_bit(b)) | letter_bit(-b), a)
            yield RelationInstance(
                "2.1", "R5", ((left, 1), (A, 1)), ((right, 1), (Swap(a, b).as_perm(rank), 1)),
                (("A", mask_letters(A.mask)), ("a", a), ("b", b)),
            )


def _perm_move(T: SignedPerm, t: Whitehead) -> Whitehead:
    return Whitehead(mask_of(T.apply_letter(x) for x in mask_letters(t.mask)), T.apply_letter(t.a))


def _R6(rank: int) -> Iterator[RelationInstance]:
    for T in omega(rank):
        for t in lambda_moves(rank):
            yield RelationInstance(
                "2.1", "R6", ((T, 1), (t, 1), (T, -1)), ((_perm_move(T, t), 1),),
                (("T", T.perm), ("A", mask_letters(t.mask)), ("a", t.a)),
            )


def _table(theorem: str, family: str, perms: Sequence[SignedPerm], rank: int) -> Iterator[RelationInstance]:
    if rank > OMEGA_TABLE_MAX_RANK:
        raise ParameterError(
            f"multiplication table of Omega(F_{rank}) skipped above rank {OMEGA_TABLE_MAX_RANK}; pass allow_large=True"
        )
    for s, t in itertools.product(perms, repeat=2):
        yield RelationInstance(theorem, family, ((s, 1), (t, 1)), ((s.compose(t), 1),), (("s", s.perm), ("t", t.perm)))


def _R7(rank: int) -> Iterator[RelationInstance]:
    return _table("2.1", "R7", omega(rank), rank)


def _conj_all(rank: int, b: int) -> Whitehead:
    """(L - {b^-1}; b)."""
    return Whitehead(full_mask(rank) & ~letter_bit(-b), b)


def _R8(rank: int) -> Iterator[RelationInstance]:
    for t in lambda_moves(rank):
        comp = Whitehead(full_mask(rank) & ~t.mask, -t.a)
        big = _conj_all(rank, t.a)
        sc = (("A", mask_letters(t.mask)), ("a", t.a))
        yield RelationInstance("2.1", "R8", ((t, 1),), ((comp, 1), (big, 1)), sc + (("order", "left"),))
        yield RelationInstance("2.1", "R8", ((t, 1),), ((big, 1), (comp, 1)), sc + (("order", "right"),))


def _R9_R10(rank: int, family: str) -> Iterator[RelationInstance]:
    for t in lambda_moves(rank):
        for b in letters_of(rank):
            if family == "R9":
                ok = not t.contains(b) and not t.contains(-b)
                rhs = t
            else:
                ok = b != t.a and t.contains(b) and not t.contains(-b)
                rhs = Whitehead(full_mask(rank) & ~t.mask, -t.a)
            if not ok:
                continue
            lhs = ((_conj_all(rank, b), 1), (t, 1), (_conj_all(rank, -b), 1))
            yield RelationInstance(
                "2.1", family, lhs, ((rhs, 1),), (("A", mask_letters(t.mask)), ("a", t.a), ("b", b))
            )


# -- M / w families ------------------------------------------------------------------

def _L_prime(rank: int, l: int) -> list[int]:
    return [x for x in letters_of(rank) if abs(x) > l]


def _M_gens(rank: int, l: int) -> list[Transvection]:
    return [
        Transvection("M", a, b)
        for a in _L_prime(rank, l)
        for b in letters_of(rank)
        if abs(a) != abs(b)
    ]


def _w_pairs(rank: int, l: int) -> list[tuple[int, int]]:
    lp = _L_prime(rank, l)
    return [(a, b) for a in lp for b in lp if abs(a) != abs(b)]


def _S1(th: str, fam: str, rank: int, l: int) -> Iterator[RelationInstance]:
    for m in _M_gens(rank, l):
        yield RelationInstance(th, fam, ((m, 1), (Transvection("M", m.a, -m.b), 1)), (), (("a", m.a), ("b", m.b)))


def _S2(th: str, fam: str, rank: int, l: int) -> Iterator[RelationInstance]:
    gens = _M_gens(rank, l)
    for x, y in itertools.product(gens, repeat=2):
        a, b, c, d = x.a, x.b, y.a, y.b
        if abs(b) != abs(c) and abs(a) != abs(d) and a != c:
            yield RelationInstance(th, fam, _comm(x, y), (), (("a", a), ("b", b), ("c", c), ("d", d)))


def _S3(th: str, fam: str, rank: int, l: int) -> Iterator[RelationInstance]:
    # [M_{b,a^-1}, M_{c,b^-1}] = M_{c,a}
    lp = _L_prime(rank, l)
    for a in letters_of(rank):
        for b in lp:
            for c in lp:
                if len({abs(a), abs(b), abs(c)}) == 3:
                    x, y = Transvection("M", b, -a), Transvection("M", c, -b)
                    yield RelationInstance(
                        th, fam, _comm(x, y), ((Transvection("M", c, a), 1),), (("a", a), ("b", b), ("c", c))
                    )


def _S4(th: str, fam: str, rank: int, l: int, w_token=None) -> Iterator[RelationInstance]:
    # w_{a,b} = M_{b^-1,a^-1} M_{a^-1,b} M_{b,a}
    for a, b in _w_pairs(rank, l):
        w = Swap(a, b) if w_token is None else w_token(a, b)
        rhs = ((Transvection("M", -b, -a), 1), (Transvection("M", -a, b), 1), (Transvection("M", b, a), 1))
        yield RelationInstance(th, fam, ((w, 1),), rhs, (("a", a), ("b", b)))


def _S5(th: str, fam: str, rank: int, l: int, perms: Sequence[SignedPerm]) -> Iterator[RelationInstance]:
    for s in perms:
        for m in _M_gens(rank, l):
            rhs = Transvection("M", s.apply_letter(m.a), s.apply_letter(m.b))
            yield RelationInstance(th, fam, ((s, 1), (m, 1), (s, -1)), ((rhs, 1),), (("sigma", s.perm), ("a", m.a), ("b", m.b)))


def _w_conj(th: str, fam: str, rank: int, l: int) -> Iterator[RelationInstance]:
    # w_{a,b} w_{c,d} w_{a,b}^-1 = w_{w(c), w(d)}
    pairs = _w_pairs(rank, l)
    for a, b in pairs:
        w = Swap(a, b)
        for c, d in pairs:
            yield RelationInstance(
                th, fam, ((w, 1), (Swap(c, d), 1), (w, -1)), ((Swap(w.apply_letter(c), w.apply_letter(d)), 1),),
                (("a", a), ("b", b), ("c", c), ("d", d)),
            )


def _w_inverse(th: str, fam: str, rank: int, l: int) -> Iterator[RelationInstance]:
    for a, b in _w_pairs(rank, l):
        yield RelationInstance(th, fam, ((Swap(a, -b), 1),), ((Swap(a, b), -1),), (("a", a), ("b", b)))


def _w_order4(th: str, fam: str, rank: int, l: int) -> Iterator[RelationInstance]:
    for a, b in _w_pairs(rank, l):
        w = Swap(a, b)
        yield RelationInstance(th, fam, ((w, 1),) * 4, (), (("a", a), ("b", b)))


def _w_bar(th: str, fam: str, rank: int, l: int) -> Iterator[RelationInstance]:
    for a, b in _w_pairs(rank, l):
        yield RelationInstance(th, fam, ((Swap(a, b), 1),), ((Swap(-a, -b), 1),), (("a", a), ("b", b)))


def _M_conj_by_w(th: str, fam: str, rank: int, l: int) -> Iterator[RelationInstance]:
    # w_{a,b} M_{c,d} w_{a,b}^-1 = M_{w(c), w(d)}
    for a, b in _w_pairs(rank, l):
        w = Swap(a, b)
        for m in _M_gens(rank, l):
            rhs = Transvection("M", w.apply_letter(m.a), w.apply_letter(m.b))
            yield RelationInstance(
                th, fam, ((w, 1), (m, 1), (w, -1)), ((rhs, 1),), (("a", a), ("b", b), ("c", m.a), ("d", m.b))
            )


# -- dispatch --------------------------------------------------------------------------

def _check_params(theorem: str, rank: int, l: int) -> None:
    if theorem not in THEOREM_FAMILIES:
        raise ParameterError(f"unknown theorem {theorem!r}; choose from {sorted(THEOREM_FAMILIES)}")
    if rank < 1 or not 0 <= l <= rank:
        raise ParameterError(f"need 0 <= l <= n and n >= 1, got n={rank}, l={l}")
    if theorem == "2.11" and rank - l < 3:
        raise ParameterError(f"the swap presentation needs n - l >= 3, got n={rank}, l={l}")
    if theorem == "2.1" and l != 0:
        raise ParameterError("the McCool presentation of Aut(F_n) has no fixed letters; use l = 0")


def _family_stream(theorem: str, family: str, rank: int, l: int, allow_large: bool) -> Iterator[RelationInstance]:
    th = theorem
    if th in ("2.1", "2.4"):
        gen = {
            "R1": _R1, "R2": _R2, "R3": _R3, "R4": _R4, "R5": _R5, "R6": _R6,
            "R8": _R8,
            "R9": lambda n: _R9_R10(n, "R9"), "R10": lambda n: _R9_R10(n, "R10"),
        }
        if family == "R7":
            if rank > OMEGA_TABLE_MAX_RANK and not allow_large:
                raise ParameterError(f"R7 table skipped above rank {OMEGA_TABLE_MAX_RANK}; pass allow_large=True")
            stream = (RelationInstance("2.1", "R7", i.lhs, i.rhs, i.side_conditions) for i in _table_unchecked(omega(rank)))
        elif family in gen:
            stream = gen[family](rank)
        else:
            raise ParameterError(f"family {family} not part of theorem {th}")
        if th == "2.1":
            return stream
        return (
            RelationInstance("2.4", inst.family, inst.lhs, inst.rhs, inst.side_conditions)
            for inst in stream
            if all(fixes_prefix(from_token(t, rank), l) for t in inst.tokens())
        )
    if th in ("2.5", "2.7"):
        perms = omega_fixing(rank, l, special=(th == "2.7"))
        if family == "S0":
            if rank > OMEGA_TABLE_MAX_RANK and not allow_large:
                raise ParameterError(f"S0 table skipped above rank {OMEGA_TABLE_MAX_RANK}; pass allow_large=True")
            return (RelationInstance(th, "S0", i.lhs, i.rhs, i.side_conditions) for i in _table_unchecked(perms))
        if family == "S1":
            return _S1(th, family, rank, l)
        if family == "S2":
            return _S2(th, family, rank, l)
        if family == "S3":
            return _S3(th, family, rank, l)
        if family == "S4":
            return _S4(th, family, rank, l, w_token=lambda a, b: Swap(a, b).as_perm(rank))
        if family == "S5":
            return _S5(th, family, rank, l, perms)
    if th == "2.9":
        return {"C1": _w_inverse, "C2": _w_conj, "C3": _w_order4}[family](th, family, rank, l)
    if th in ("2.10", "2.11"):
        prefix = "T2_10_" if th == "2.10" else "T2_11_"
        tail = family[len(prefix):] if family.startswith(prefix) else None
        table = {
            "1": _S1, "2": _S2, "3": _S3, "4": _S4, "6": _w_order4,
            "5p" if th == "2.10" else "5": _M_conj_by_w if th == "2.10" else _w_bar,
        }
        if tail in table:
            return table[tail](th, family, rank, l)
    raise ParameterError(f"family {family} not part of theorem {th}")


def _table_unchecked(perms: Sequence[SignedPerm]) -> Iterator[RelationInstance]:
    for s, t in itertools.product(perms, repeat=2):
        yield RelationInstance("", "", ((s, 1), (t, 1)), ((s.compose(t), 1),), (("s", s.perm), ("t", t.perm)))


def enumerate_relations(
    theorem: str, rank: int, l: int = 0, families: Iterable[str] | None = None, allow_large: bool = False
) -> Iterator[RelationInstance]:
    """Stream every instance of the requested families in canonical order."""
    _check_params(theorem, rank, l)
    fams = THEOREM_FAMILIES[theorem] if families is None else tuple(families)
    for fam in fams:
        if fam not in THEOREM_FAMILIES[theorem] and not (theorem == "2.4" and fam in DERIVED_FAMILIES):
            raise ParameterError(f"family {fam} not part of theorem {theorem}")
        yield from _family_stream(theorem, fam, rank, l, allow_large)


def generator_legal(token: Token, theorem: str, rank: int, l: int) -> bool:
    """Whether a token names a generator of the theorem's presentation."""
    phi = from_token(token, rank)
    lp = {x for x in letters_of(rank) if abs(x) > l}
    if theorem == "2.1":
        return isinstance(token, (Whitehead, SignedPerm))
    if theorem == "2.4":
        return isinstance(token, (Whitehead, SignedPerm)) and fixes_prefix(phi, l)
    if isinstance(token, Transvection):
        return token.kind == "M" and token.a in lp
    if theorem in ("2.5", "2.7"):
        return isinstance(token, SignedPerm) and fixes_prefix(phi, l) and (theorem == "2.5" or is_special(phi))
    if isinstance(token, Swap):
        return token.a in lp and token.b in lp
    return False


@dataclass
class VerificationReport:
    theorem: str
    rank: int
    l: int
    counts: dict[str, int] = field(default_factory=dict)
    failures: list[dict] = field(default_factory=list)

    @property
    def instances(self) -> int:
        return sum(self.counts.values())

    @property
    def passed(self) -> bool:
        return not self.failures

    def to_json(self) -> dict:
        return {
            "theorem": self.theorem,
            "n": self.rank,
            "l": self.l,
            "counts": dict(self.counts),
            "instances": self.instances,
            "failures": list(self.failures),
            "verdict": "pass" if self.passed else "fail",
        }


def verify_presentation(
    theorem: str, rank: int, l: int = 0, families: Iterable[str] | None = None, allow_large: bool = False
) -> VerificationReport:
    fams = THEOREM_FAMILIES.get(theorem, ()) if families is None else tuple(families)
    report = VerificationReport(theorem, rank, l, {f: 0 for f in fams})
    for inst in enumerate_relations(theorem, rank, l, fams, allow_large):
        report.counts[inst.family] = report.counts.get(inst.family, 0) + 1
        diff = first_difference(inst, rank)
        if diff is not None:
            report.failures.append({"instance": inst.to_json(), "relation": inst.describe(), **diff})
    return report
