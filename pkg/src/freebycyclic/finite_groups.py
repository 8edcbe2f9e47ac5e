"""Finite groups as multiplication tables, with identity at index 0."""

from __future__ import annotations

import hashlib
import itertools
from dataclasses import dataclass, field
from functools import cached_property
from typing import Sequence

import numpy as np

from . import _kernels as K
from .words import Word

__all__ = [
    "FiniteGroupTable",
    "cyclic",
    "dihedral",
    "symmetric",
    "alternating",
    "quaternion",
    "direct_product",
    "from_permutations",
    "semidirect",
    "library",
]


@dataclass(eq=False)
class FiniteGroupTable:
    table: np.ndarray
    name: str = "G"
    inverse: np.ndarray = field(init=False)

    def __post_init__(self):
        self.table = np.ascontiguousarray(self.table, dtype=np.int64)
        n = self.table.shape[0]
        if self.table.shape != (n, n):
            raise ValueError("table must be square")
        if not (self.table[0] == np.arange(n)).all() or not (self.table[:, 0] == np.arange(n)).all():
            raise ValueError("index 0 must be the identity")
        rows, cols = np.nonzero(self.table == 0)
        if len(rows) != n:
            raise ValueError("not a group table: inverses are not unique")
        inv = np.empty(n, dtype=np.int64)
        inv[rows] = cols
        self.inverse = inv

    @property
    def order(self) -> int:
        return self.table.shape[0]

    identity = 0

    def mul(self, a: int, b: int) -> int:
        return int(self.table[a, b])

    def inv(self, a: int) -> int:
        return int(self.inverse[a])

    def power(self, a: int, n: int) -> int:
        base = a if n >= 0 else self.inv(a)
        out = 0
        for _ in range(abs(n)):
            out = self.mul(out, base)
        return out

    def element_order(self, a: int) -> int:
        k, cur = 1, a
        while cur != 0:
            cur = self.mul(cur, a)
            k += 1
        return k

    def check_axioms(self) -> bool:
        n = self.order
        t = self.table
        latin = all(len(set(row)) == n for row in t.tolist()) and all(
            len(set(col)) == n for col in t.T.tolist()
        )
        return latin and K.is_associative(t)

    def evaluate(self, images: Sequence[int], word: Word | Sequence[int]) -> int:
        letters = np.asarray(tuple(word), dtype=np.int64)
        imgs = np.asarray(images, dtype=np.int64)[None, :]
        return int(K.eval_words(self.table, self.inverse, imgs, letters)[0])

    def generated(self, gens: Sequence[int]) -> int:
        arr = np.asarray(gens, dtype=np.int64)[None, :]
        return int(K.generated_sizes(self.table, arr)[0])

    @cached_property
    def class_labels(self) -> np.ndarray:
        return K.conjugacy_labels(self.table, self.inverse)

    def conjugate(self, a: int, b: int) -> bool:
        return self.class_labels[a] == self.class_labels[b]

    def conjugator(self, a: int, b: int) -> int | None:
        """Some h with h^-1 a h == b."""
        for h in range(self.order):
            if self.mul(self.inv(h), self.mul(a, h)) == b:
                return h
        return None

    def is_abelian(self) -> bool:
        return bool((self.table == self.table.T).all())

    @cached_property
    def center(self) -> list[int]:
        return [g for g in range(self.order) if (self.table[g] == self.table[:, g]).all()]

    @cached_property
    def generating_set(self) -> tuple[int, ...]:
        """A small generating set, chosen greedily by element index."""
        gens: list[int] = []
        size = 1
        while size < self.order:
            best, best_size = None, size
            for g in range(1, self.order):
                s = self.generated(gens + [g])
                if s > best_size:
                    best, best_size = g, s
            gens.append(best)
            size = best_size
        return tuple(gens)

    def extend_hom(self, gens: Sequence[int], imgs: Sequence[int]) -> np.ndarray | None:
        fmap = K.extend_hom(
            self.table, np.asarray(gens, dtype=np.int64), np.asarray(imgs, dtype=np.int64)
        )
        return None if fmap[0] < 0 else fmap

    @cached_property
    def automorphisms(self) -> list[np.ndarray]:
        """All automorphisms, as element permutations (identity first)."""
        gens = self.generating_set
        orders = [self.element_order(g) for g in gens]
        cands = [[h for h in range(self.order) if self.element_order(h) == o] for o in orders]
        out = []
        for imgs in itertools.product(*cands):
            if self.generated(list(imgs)) != self.order:
                continue
            fmap = self.extend_hom(gens, imgs)
            if fmap is not None:
                out.append(fmap)
        out.sort(key=lambda f: tuple(f.tolist()))
        return out

    @cached_property
    def inner_automorphisms(self) -> set[tuple[int, ...]]:
        inner = set()
        for h in range(self.order):
            inner.add(tuple(self.table[self.inverse[h], self.table[:, h]].tolist()))
        return inner

    def is_inner_map(self, fmap: np.ndarray) -> bool:
        return tuple(np.asarray(fmap).tolist()) in self.inner_automorphisms

    def outer_order(self, fmap: np.ndarray) -> int:
        """Order of an automorphism's class in Out(G)."""
        cur = np.asarray(fmap)
        k = 1
        while not self.is_inner_map(cur):
            cur = fmap[cur]
            k += 1
        return k

    def marked_key(self, gens: Sequence[int]) -> str:
        """Canonical key of the marked group (G, gens) when gens generate G.

        Two surjections onto (possibly different) tables share a key exactly
        when they have the same kernel.
        """
        g = np.asarray(gens, dtype=np.int64)
        order = K.bfs_order(self.table, g)
        pos = np.empty(self.order, dtype=np.int64)
        pos[order] = np.arange(len(order))
        relabeled = pos[self.table[np.ix_(order, order)]]
        h = hashlib.sha256()
        h.update(np.int64(self.order).tobytes())
        h.update(np.int64(len(g)).tobytes())
        h.update(pos[g].tobytes())
        h.update(np.ascontiguousarray(relabeled).tobytes())
        return h.hexdigest()

    def __repr__(self) -> str:
        return f"FiniteGroupTable({self.name}, order={self.order})"


def _from_elements(elements: list, mul, name: str) -> FiniteGroupTable:
    index = {e: i for i, e in enumerate(elements)}
    n = len(elements)
    table = np.empty((n, n), dtype=np.int64)
    for i, a in enumerate(elements):
        for j, b in enumerate(elements):
            table[i, j] = index[mul(a, b)]
    return FiniteGroupTable(table, name)


def cyclic(n: int) -> FiniteGroupTable:
    idx = np.arange(n)
    return FiniteGroupTable((idx[:, None] + idx[None, :]) % n, f"C{n}")


def _compose(p, q):
    # (p*q)(i) = q(p(i)): right action, so products read left to right
    return tuple(q[i] for i in p)


def from_permutations(gens: Sequence[Sequence[int]], name: str = "P") -> FiniteGroupTable:
    """Closure of a set of permutations of range(d); BFS order from the identity."""
    d = len(gens[0])
    ident = tuple(range(d))
    gens = [tuple(g) for g in gens]
    elements = [ident]
    seen = {ident}
    head = 0
    while head < len(elements):
        e = elements[head]
        head += 1
        for g in gens:
            f = _compose(e, g)
            if f not in seen:
                seen.add(f)
                elements.append(f)
    return _from_elements(elements, _compose, name)


def dihedral(n: int) -> FiniteGroupTable:
    """Symmetries of an n-gon (order 2n)."""
    rot = tuple((i + 1) % n for i in range(n))
    ref = tuple((-i) % n for i in range(n))
    return from_permutations([rot, ref], f"D{2 * n}")


def symmetric(n: int) -> FiniteGroupTable:
    if n == 1:
        return cyclic(1)
    cyc = tuple((i + 1) % n for i in range(n))
    swap = (1, 0) + tuple(range(2, n))
    return from_permutations([swap, cyc], f"S{n}")


def alternating(n: int) -> FiniteGroupTable:
    gens = [tuple([1, 2, 0] + list(range(3, n)))]
    for k in range(3, n):
        p = list(range(n))
        p[0], p[1], p[k] = p[1], p[k], p[0]
        gens.append(tuple(p))
    return from_permutations(gens, f"A{n}")


def quaternion() -> FiniteGroupTable:
    # units 1, i, j, k as 0..3; elements are (sign, unit)
    rule = {
        (1, 1): (-1, 0), (2, 2): (-1, 0), (3, 3): (-1, 0),
        (1, 2): (1, 3), (2, 3): (1, 1), (3, 1): (1, 2),
        (2, 1): (-1, 3), (3, 2): (-1, 1), (1, 3): (-1, 2),
    }

    def mul(a, b):
        (sa, ua), (sb, ub) = a, b
        if ua == 0 or ub == 0:
            return (sa * sb, ua + ub)
        s, w = rule[(ua, ub)]
        return (sa * sb * s, w)

    elements = [(s, u) for u in range(4) for s in (1, -1)]
    return _from_elements(elements, mul, "Q8")


def direct_product(g: FiniteGroupTable, h: FiniteGroupTable) -> FiniteGroupTable:
    n, k = g.order, h.order
    a = np.repeat(np.arange(n), k)
    b = np.tile(np.arange(k), n)
    table = g.table[a[:, None], a[None, :]] * k + h.table[b[:, None], b[None, :]]
    return FiniteGroupTable(table, f"{g.name}x{h.name}")


def semidirect(base: FiniteGroupTable, beta: np.ndarray, n: int, name: str | None = None) -> FiniteGroupTable:
    """base x|_beta Z/n with tau^-1 g tau = beta(g); element i*|base| + g is tau^i g."""
    powers = [np.arange(base.order)]
    cur = np.asarray(beta, dtype=np.int64)
    while not (cur == np.arange(base.order)).all():
        powers.append(cur)
        cur = cur[beta]
    if n % len(powers):
        raise ValueError("beta^n must be the identity")
    table = K.semidirect_table(base.table, np.asarray(powers, dtype=np.int64), n)
    return FiniteGroupTable(table, name or f"({base.name})x|C{n}")


def library(max_order: int) -> list[FiniteGroupTable]:
    """Pairwise non-isomorphic built-in groups of order at most ``max_order``."""
    out = []
    for n in range(1, min(max_order, 12) + 1):
        out.append(cyclic(n))
    c2 = cyclic(2)
    extra = [
        (4, lambda: direct_product(c2, c2)),
        (6, lambda: symmetric(3)),
        (8, lambda: dihedral(4)),
        (8, lambda: quaternion()),
        (8, lambda: direct_product(direct_product(c2, c2), c2)),
        (8, lambda: direct_product(cyclic(4), c2)),
        (10, lambda: dihedral(5)),
        (12, lambda: alternating(4)),
        (12, lambda: dihedral(6)),
        (24, lambda: symmetric(4)),
    ]
    for order, make in extra:
        if order <= max_order:
            out.append(make())
    out.sort(key=lambda g: g.order)
    return out
