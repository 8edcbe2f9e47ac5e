"""Finite quotients of mapping tori and torsion-separation certificates."""

from __future__ import annotations

import enum
import logging
from dataclasses import dataclass, field
from typing import Iterator, Sequence

import numpy as np

from . import _kernels as K
from .automorphisms import _all_tuples, _canonical_codes, _image_tuples, make_automorphism
from .finite_groups import FiniteGroupTable, cyclic, library, semidirect
from .torus import (
    MappingTorus,
    TorusAutomorphism,
    TorusElement,
    torus_invert,
    torus_multiply,
)
from .words import Alphabet, Word, multiply

__all__ = [
    "FiniteQuotient",
    "SeparationEvidence",
    "CongruenceWitness",
    "CenterCubedQuotient",
    "CenterAction",
    "z_rtimes_z_congruence",
    "klein_bottle_torus",
    "center_cubed_quotient",
    "detect_center_inverting",
    "enumerate_finite_quotients",
    "fibre_quotients",
    "verify_separation",
]

log = logging.getLogger(__name__)


@dataclass(eq=False)
class FiniteQuotient:
    """A surjection from a torus (or a free group) onto ``target``.

    ``images`` lists the images of x_1..x_m and, for torus sources, of t last.
    """

    source: MappingTorus | Alphabet
    target: FiniteGroupTable
    images: tuple[int, ...]
    _cache: dict = field(default_factory=dict, repr=False)

    @property
    def rank(self) -> int:
        return self.source.rank

    @property
    def order(self) -> int:
        return self.target.order

    @property
    def is_torus(self) -> bool:
        return isinstance(self.source, MappingTorus)

    def word_image(self, w: Word) -> int:
        return self.target.evaluate(self.images[: self.rank], w)

    def image(self, x: TorusElement | Word) -> int:
        if isinstance(x, Word):
            return self.word_image(x)
        hit = self._cache.get(x)
        if hit is None:
            tt = self.target.power(self.images[-1], x.t_exp)
            hit = self.target.mul(tt, self.word_image(x.fibre))
            self._cache[x] = hit
        return hit

    def verify_relations(self) -> bool:
        G = self.target
        if G.generated(list(self.images)) != G.order:
            return False
        if not self.is_torus:
            return len(self.images) == self.rank
        T = self.source
        tb = self.images[-1]
        for i, x in enumerate(T.monodromy.alphabet.generators()):
            lhs = G.mul(G.inv(tb), G.mul(self.images[i], tb))
            if lhs != self.word_image(T.monodromy(x)):
                return False
        return True

    def kernel_key(self) -> str:
        return self.target.marked_key(self.images)

    def describe(self) -> str:
        return f"{self.target.name} (order {self.order})"

    def induced_map(self, psi: TorusAutomorphism) -> np.ndarray | None:
        """The automorphism of the target induced by psi, or None if ill-defined."""
        imgs = [self.image(e) for e in psi.images()]
        return self.target.extend_hom(self.images, imgs)


# -- enumeration -----------------------------------------------------------------


def _power_subgroup(G0: FiniteGroupTable, gens: list[tuple[int, ...]], cap: int):
    """Subgroup of G0^L generated by ``gens`` with its tuple -> index map.

    None if larger than ``cap``.
    """
    L = len(gens[0])
    ident = (0,) * L
    elements = [ident]
    index = {ident: 0}
    head = 0
    t = G0.table
    while head < len(elements):
        e = elements[head]
        head += 1
        for g in gens:
            f = tuple(int(t[a, b]) for a, b in zip(e, g))
            if f not in index:
                index[f] = len(elements)
                elements.append(f)
                if len(elements) > cap:
                    return None
    n = len(elements)
    arr = np.asarray(elements, dtype=np.int64)
    table = np.empty((n, n), dtype=np.int64)
    for i in range(n):
        prod = t[arr[i][None, :], arr]
        table[i] = [index[tuple(row)] for row in prod.tolist()]
    return FiniteGroupTable(table, f"{G0.name}^{L}'"), index


@dataclass(frozen=True)
class _FibreQuotient:
    group: FiniteGroupTable
    images: tuple[int, ...]
    beta: np.ndarray = field(compare=False)


def fibre_quotients(T: MappingTorus, max_order: int) -> list[_FibreQuotient]:
    """Surjections F_m -> G0 whose kernel is phi-invariant, with the induced beta.

    Built from library targets: an epimorphism rho whose kernel has a phi-orbit
    of length L contributes the diagonal image of F_m in G0^L.
    """
    m = T.rank
    phi = T.monodromy
    out: list[_FibreQuotient] = []
    seen: set[str] = set()
    for G0 in library(max_order):
        n = G0.order
        maps = G0.automorphisms
        tuples = _all_tuples(n, m)
        tuples = tuples[K.generated_sizes(G0.table, tuples) == n]
        if len(tuples) == 0:
            continue
        codes = _canonical_codes(tuples, maps, n)
        _, first = np.unique(codes, return_index=True)
        reps = tuples[np.sort(first)]
        for rho in reps:
            orbit = [rho]
            code0 = int(_canonical_codes(rho[None, :], maps, n)[0])
            cur = rho
            while True:
                cur = _image_tuples(G0, cur[None, :], phi)[0]
                if int(_canonical_codes(cur[None, :], maps, n)[0]) == code0:
                    break
                orbit.append(cur)
            if len(orbit) == 1:
                group, images = G0, tuple(int(v) for v in rho)
            else:
                gens = [tuple(int(r[i]) for r in orbit) for i in range(m)]
                built = _power_subgroup(G0, gens, max_order)
                if built is None:
                    continue
                group, index = built
                images = tuple(index[g] for g in gens)
            key = group.marked_key(images)
            if key in seen:
                continue
            seen.add(key)
            moved = [group.evaluate(images, phi(x)) for x in phi.alphabet.generators()]
            beta = group.extend_hom(images, moved)
            if beta is None:  # pragma: no cover - kernel is invariant by construction
                continue
            out.append(_FibreQuotient(group, images, beta))
    return out


def _beta_order(beta: np.ndarray) -> int:
    cur, k = beta, 1
    ident = np.arange(len(beta))
    while not (cur == ident).all():
        cur = cur[beta]
        k += 1
    return k


def enumerate_finite_quotients(T: MappingTorus, max_order: int) -> Iterator[FiniteQuotient]:
    """Surjections T -> G0 x|_beta Z/n with x_i -> g_i and t -> tau, deduplicated by kernel.

    Every finite quotient of T is itself a quotient of one of these (take
    G0 the image of the fibre and n the order of the image of t), so the
    family separates whatever finite quotients separate.  Yielded in order
    of size, the trivial quotient first.
    """
    if max_order < 1:
        raise ValueError("max_order must be positive")
    found: list[FiniteQuotient] = []
    seen: set[str] = set()
    for fq in fibre_quotients(T, max_order):
        n0 = fq.group.order
        step = _beta_order(fq.beta)
        for n in range(step, max_order // n0 + 1, step):
            G = semidirect(fq.group, fq.beta, n, f"({fq.group.name})x|C{n}")
            images = tuple(fq.images) + (n0 % G.order,)  # tau
            q = FiniteQuotient(T, G, images)
            if not q.verify_relations():  # pragma: no cover - holds by construction
                log.warning("dropping %s: relations fail", q.describe())
                continue
            key = q.kernel_key()
            if key in seen:
                continue
            seen.add(key)
            found.append(q)
    found.sort(key=lambda q: q.order)
    yield from found


# -- torsion separation ----------------------------------------------------------


@dataclass(frozen=True)
class SeparationEvidence:
    """psi induces ``induced`` (images of the quotient's generators), which is not inner."""

    automorphism_id: str
    induced: tuple[int, ...]
    outer_order: int


@dataclass
class CongruenceWitness:
    quotient: FiniteQuotient | None
    separated: list[SeparationEvidence]
    unseparated: list[tuple[str, str]]

    def verify(self, autos: dict[str, TorusAutomorphism]) -> bool:
        q = self.quotient
        if q is None:
            return not self.separated
        if not q.verify_relations():
            return False
        G = q.target
        for ev in self.separated:
            psi = autos[ev.automorphism_id]
            if tuple(q.image(e) for e in psi.images()) != ev.induced:
                return False
            fmap = G.extend_hom(q.images, ev.induced)
            if fmap is None or G.is_inner_map(fmap):
                return False
        return True


def _named(torsion_autos) -> list[tuple[str, TorusAutomorphism]]:
    out = []
    for i, item in enumerate(torsion_autos):
        if isinstance(item, tuple):
            out.append((str(item[0]), item[1]))
        else:
            out.append((f"psi{i}", item))
    return out


def verify_separation(
    quotients: Sequence[FiniteQuotient],
    torsion_autos,
    T: MappingTorus,
    order_bound: int = 24,
) -> CongruenceWitness:
    """Find a quotient on which every nontrivial torsion class stays non-inner.

    ``torsion_autos`` holds TorusAutomorphisms or (id, automorphism) pairs.
    Quotients are scanned in canonical order (size, name, images), so the
    result does not depend on how the list was ordered.  The chosen quotient
    is the first that separates the most automorphisms; anything it misses is
    listed in ``unseparated``.
    """
    named = _named(torsion_autos)
    candidates: list[tuple[str, TorusAutomorphism, int]] = []
    residue: list[tuple[str, str]] = []
    for name, psi in named:
        order = psi.outer_order(order_bound)
        if order is None:
            residue.append((name, f"finite order not verified up to {order_bound}"))
        elif order == 1:
            residue.append((name, "not torsion-nontrivial"))
        else:
            candidates.append((name, psi, order))
    best: tuple[FiniteQuotient, list[SeparationEvidence]] | None = None
    for q in sorted(quotients, key=lambda q: (q.order, q.target.name, q.images)):
        hits = []
        for name, psi, order in candidates:
            fmap = q.induced_map(psi)
            if fmap is None:
                log.info("%s: induced map of %s is ill-defined, skipped", q.describe(), name)
                continue
            if q.target.is_inner_map(fmap):
                continue
            hits.append(SeparationEvidence(name, tuple(q.image(e) for e in psi.images()), order))
        if hits and (best is None or len(hits) > len(best[1])):
            best = (q, hits)
            if len(hits) == len(candidates):
                break
    if best is None:
        residue += [(name, "no quotient separates it") for name, _, _ in candidates]
        return CongruenceWitness(None, [], residue)
    q, hits = best
    done = {ev.automorphism_id for ev in hits}
    residue += [(name, "no quotient separates it") for name, _, _ in candidates if name not in done]
    return CongruenceWitness(q, hits, residue)


# -- Z x| Z ----------------------------------------------------------------------


def klein_bottle_torus() -> MappingTorus:
    """Z x| Z with t^-1 f t = f^-1."""
    return MappingTorus(make_automorphism(["A"], 1))


def z_rtimes_z_congruence() -> CongruenceWitness:
    """Kill f and t^4: the class of alpha (f -> f, t -> t^-1) survives on Z/4."""
    T = klein_bottle_torus()
    q = FiniteQuotient(T, cyclic(4), (0, 1))
    alpha = TorusAutomorphism(T, ["a"], "t^-1")
    return verify_separation([q], [("alpha", alpha)], T)


# -- T / <x^3> -------------------------------------------------------------------


class CenterAction(enum.Enum):
    FIXING = "Fixing"
    INVERTING = "Inverting"


def detect_center_inverting(psi: TorusAutomorphism, T: MappingTorus) -> CenterAction:
    from .torus import center

    x = center(T)
    image = psi(x)
    if image == x:
        return CenterAction.FIXING
    if image == torus_invert(x, T):
        return CenterAction.INVERTING
    raise ValueError(f"psi(x) = {image} is neither x nor x^-1; not an automorphism")


class CenterCubedQuotient:
    """Exact arithmetic in T/<x^3>.

    Elements are pairs (r, f) with r in [0, 3k), standing for t^r f; since
    t^(3k) = x^3 f0^-3, a lift t^(3kq + r) f reduces to t^r f0^(-3q) f.
    """

    exponent = 3

    def __init__(self, base: MappingTorus):
        if base.rank < 2:
            raise ValueError("the center-cubed quotient needs rank >= 2")
        self.base = base
        self.modulus = 3 * base.k

    def project(self, x: TorusElement) -> tuple[int, Word]:
        q, r = divmod(x.t_exp, self.modulus)
        fibre = x.fibre
        if q and self.base.f0:
            fibre = multiply(self.base.f0 ** (-3 * q), fibre)
        return r, fibre

    def lift(self, p: tuple[int, Word]) -> TorusElement:
        return TorusElement(p[0], p[1])

    def multiply(self, p, q):
        return self.project(torus_multiply(self.lift(p), self.lift(q), self.base))

    def invert(self, p):
        return self.project(torus_invert(self.lift(p), self.base))

    def identity(self):
        return (0, Word.empty(self.base.rank))

    def x_bar(self):
        return self.project(TorusElement(self.base.k, self.base.f0))

    def element_order(self, p, bound: int = 1000) -> int | None:
        cur, e = p, self.identity()
        for j in range(1, bound + 1):
            if cur == e:
                return j
            cur = self.multiply(cur, p)
        return None

    def induced(self, psi: TorusAutomorphism, p):
        """psi on T/<x^3>; well defined because psi(x) is x or x^-1."""
        detect_center_inverting(psi, self.base)
        return self.project(psi(self.lift(p)))


def center_cubed_quotient(T: MappingTorus) -> CenterCubedQuotient:
    return CenterCubedQuotient(T)

