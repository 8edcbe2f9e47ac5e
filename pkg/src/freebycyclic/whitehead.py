"""Whitehead's algorithm for Aut(F_m)-orbits of tuples of conjugacy classes."""

from __future__ import annotations

import itertools
from collections import deque
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Sequence

from .automorphisms import FreeAutomorphism, compose, identity
from .verdicts import Equivalent, Inequivalent, Unresolved
from .words import Alphabet, CyclicWord, Word, letter_key, parse_word

__all__ = [
    "WhiteheadMove",
    "TupleClass",
    "Equivalent",
    "Inequivalent",
    "Unresolved",
    "whitehead_moves",
    "whitehead_minimize",
    "orbit_equivalent",
    "parse_tuple",
]


@dataclass(frozen=True)
class WhiteheadMove:
    """A Whitehead automorphism.

    kind 0 is a signed permutation (``perm[i]`` is the image letter of
    generator i+1); kind 1 is the type-II move ``(affected, multiplier)``:
    x -> x*a if x in A and x^-1 not in A, a^-1*x if only x^-1 in A,
    a^-1*x*a if both, fixed otherwise, with a itself fixed.
    """

    kind: int
    rank: int
    perm: tuple[int, ...] = ()
    multiplier: int = 0
    affected: frozenset = frozenset()
    automorphism: FreeAutomorphism = field(compare=False, repr=False, default=None)

    def sort_key(self) -> tuple:
        if self.kind == 0:
            return (0, tuple(letter_key(x) for x in self.perm), 0)
        mask = sum(1 << letter_key(x) for x in self.affected)
        return (1, letter_key(self.multiplier), mask)

    def __str__(self) -> str:
        from .words import format_letters

        if self.kind == 0:
            return "perm(" + ",".join(format_letters((x,), self.rank) for x in self.perm) + ")"
        aff = "".join(format_letters((x,), self.rank) for x in sorted(self.affected, key=letter_key))
        return f"wh({format_letters((self.multiplier,), self.rank)};{aff})"


def _type_two(rank: int, a: int, affected: frozenset) -> FreeAutomorphism:
    gens = Alphabet(rank).generators()
    A = Word._trusted((a,), rank)
    Ai = Word._trusted((-a,), rank)
    imgs, inv = [], []
    for i in range(1, rank + 1):
        x = gens[i - 1]
        if i == abs(a):
            imgs.append(x)
            inv.append(x)
            continue
        fwd, back = i in affected, -i in affected
        if fwd and back:
            imgs.append(Ai * x * A)
            inv.append(A * x * Ai)
        elif fwd:
            imgs.append(x * A)
            inv.append(x * Ai)
        elif back:
            imgs.append(Ai * x)
            inv.append(A * x)
        else:
            imgs.append(x)
            inv.append(x)
    return FreeAutomorphism(imgs, inv)


def _signed_perm(rank: int, perm: Sequence[int]) -> FreeAutomorphism:
    imgs = [Word._trusted((x,), rank) for x in perm]
    inv: list[Word] = [None] * rank  # type: ignore[list-item]
    for i, x in enumerate(perm, start=1):
        inv[abs(x) - 1] = Word._trusted((i if x > 0 else -i,), rank)
    return FreeAutomorphism(imgs, inv)


@lru_cache(maxsize=None)
def whitehead_moves(rank: int) -> tuple[tuple[WhiteheadMove, ...], tuple[WhiteheadMove, ...]]:
    """(type I moves, nontrivial type II moves), each sorted by the tie-break key."""
    letters = Alphabet(rank).letters()
    type1 = []
    for perm in itertools.permutations(range(1, rank + 1)):
        for signs in itertools.product((1, -1), repeat=rank):
            p = tuple(s * x for s, x in zip(signs, perm))
            if p == tuple(range(1, rank + 1)):
                continue
            type1.append(WhiteheadMove(0, rank, perm=p, automorphism=_signed_perm(rank, p)))
    type2 = []
    for a in letters:
        rest = [x for x in letters if abs(x) != abs(a)]
        for bits in itertools.product((0, 1), repeat=len(rest)):
            chosen = frozenset([a] + [x for x, b in zip(rest, bits) if b])
            phi = _type_two(rank, a, chosen)
            if phi == identity(rank):
                continue
            type2.append(WhiteheadMove(1, rank, multiplier=a, affected=chosen, automorphism=phi))
    type1.sort(key=WhiteheadMove.sort_key)
    type2.sort(key=WhiteheadMove.sort_key)
    return tuple(type1), tuple(type2)


class TupleClass:
    """A tuple of conjugacy classes, each stored in canonical cyclic form."""

    __slots__ = ("entries", "rank")

    def __init__(self, entries: Sequence[Word | CyclicWord], rank: int | None = None):
        cyc = [e if isinstance(e, CyclicWord) else CyclicWord(e) for e in entries]
        if rank is None:
            if not cyc:
                raise ValueError("rank needed for an empty tuple")
            rank = cyc[0].representative.rank
        self.entries = tuple(cyc)
        self.rank = rank

    @property
    def total_length(self) -> int:
        return sum(len(e) for e in self.entries)

    def apply(self, phi: FreeAutomorphism) -> "TupleClass":
        return TupleClass([CyclicWord(phi(e.representative)) for e in self.entries], self.rank)

    def key(self) -> tuple:
        return tuple(e.representative.letters for e in self.entries)

    def __eq__(self, other) -> bool:
        return isinstance(other, TupleClass) and self.key() == other.key()

    def __hash__(self) -> int:
        return hash(self.key())

    def __len__(self) -> int:
        return len(self.entries)

    def __str__(self) -> str:
        return ";".join(str(e) for e in self.entries)

    def __repr__(self) -> str:
        return f"TupleClass({str(self)!r})"


def parse_tuple(text: str, rank: int) -> TupleClass:
    return TupleClass([parse_word(part, rank) for part in text.split(";")], rank)


def _compose_moves(moves: Sequence[WhiteheadMove], rank: int) -> FreeAutomorphism:
    out = identity(rank)
    for mv in moves:
        out = compose(mv.automorphism, out)
    return out


def whitehead_minimize(T: TupleClass) -> tuple[TupleClass, list[WhiteheadMove]]:
    """Peel length with type-II moves until none strictly shortens the tuple."""
    _, type2 = whitehead_moves(T.rank)
    cur = T
    moves: list[WhiteheadMove] = []
    while True:
        best, best_len = None, cur.total_length
        for mv in type2:
            nxt = cur.apply(mv.automorphism)
            if nxt.total_length < best_len:
                best, best_len = (mv, nxt), nxt.total_length
        if best is None:
            break
        moves.append(best[0])
        cur = best[1]
    # canonical representative among signed relabelings
    type1, _ = whitehead_moves(T.rank)
    best_key, best_move = _tuple_sort_key(cur), None
    for mv in type1:
        k = _tuple_sort_key(cur.apply(mv.automorphism))
        if k < best_key:
            best_key, best_move = k, mv
    if best_move is not None:
        moves.append(best_move)
        cur = cur.apply(best_move.automorphism)
    return cur, moves


def _tuple_sort_key(T: TupleClass) -> tuple:
    return tuple(e.sort_key() for e in T.entries)


def maps_tuple(alpha: FreeAutomorphism, T1: TupleClass, T2: TupleClass) -> bool:
    return T1.apply(alpha) == T2


def orbit_equivalent(T1: TupleClass, T2: TupleClass, budget: int = 200000):
    """Decide whether some automorphism carries T1 entry-wise onto T2."""
    if len(T1) != len(T2):
        raise ValueError(f"arity mismatch: {len(T1)} vs {len(T2)}")
    if T1.rank != T2.rank:
        raise ValueError(f"rank mismatch: {T1.rank} vs {T2.rank}")
    rank = T1.rank
    m1, mv1 = whitehead_minimize(T1)
    m2, mv2 = whitehead_minimize(T2)
    if m1.total_length != m2.total_length:
        return Inequivalent(f"minimal lengths {m1.total_length} != {m2.total_length}")
    if m1.total_length == 0:
        return Equivalent(identity(rank))
    type1, type2 = whitehead_moves(rank)
    level = type1 + type2
    parent: dict[TupleClass, tuple[TupleClass, WhiteheadMove] | None] = {m1: None}
    queue = deque([m1])
    hit = m1 == m2
    while queue and not hit:
        cur = queue.popleft()
        for mv in level:
            nxt = cur.apply(mv.automorphism)
            if nxt.total_length != m1.total_length or nxt in parent:
                continue
            parent[nxt] = (cur, mv)
            if nxt == m2:
                hit = True
                break
            if len(parent) > budget:
                return Unresolved()
            queue.append(nxt)
    if not hit:
        return Inequivalent(f"level set of size {len(parent)} does not contain the target")
    path: list[WhiteheadMove] = []
    node = m2
    while parent[node] is not None:
        prev, mv = parent[node]
        path.append(mv)
        node = prev
    path.reverse()
    forward = _compose_moves(mv1 + path, rank)
    back = _compose_moves(mv2, rank).inverse()
    alpha = compose(back, forward)
    if not maps_tuple(alpha, T1, T2):  # pragma: no cover
        return Unresolved("witness failed verification")
    return Equivalent(alpha)
