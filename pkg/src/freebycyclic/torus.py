"""Mapping tori F_m x|_phi <t> of finite-order outer automorphisms.

Elements are kept in the normal form t^l f with the relation
``t^-1 x t == phi(x)``, so ``(t^a f)(t^b g) == t^(a+b) phi^b(f) g``.
"""

from __future__ import annotations

import math
import re
import time
from dataclasses import dataclass, field
from typing import Sequence

from .automorphisms import (
    FreeAutomorphism,
    OuterOrderCertificate,
    SearchBudget,
    aut_conjugate,
    compose,
    inner,
    outer_order,
)
from .verdicts import Conjugate, Distinguished, NotConjugate, Unresolved
from .words import (
    MalformedInput,
    Word,
    conjugate_in_free,
    invert,
    multiply,
    parse_word,
    solve_inner,
    words_of_length,
)

__all__ = [
    "MappingTorus",
    "TorusElement",
    "TorusAutomorphism",
    "NotFiniteOrder",
    "ConjugacyBudget",
    "NonConjugacyCertificate",
    "Pass",
    "Fail",
    "torus_multiply",
    "torus_invert",
    "torus_power",
    "center",
    "torus_conjugate",
    "sub_torus_monodromy",
    "fo_isomorphic",
    "mwh_precheck",
    "parse_element",
    "format_element",
]


class NotFiniteOrder(ValueError):
    """The monodromy has no certified finite outer order."""


@dataclass(frozen=True)
class TorusElement:
    t_exp: int
    fibre: Word

    def __str__(self) -> str:
        return format_element(self)


class MappingTorus:
    """The suspension of ``monodromy``; requires a finite outer order."""

    def __init__(self, monodromy: FreeAutomorphism, certificate: OuterOrderCertificate | None = None, bound: int = 64):
        if certificate is None:
            found = outer_order(monodromy, bound)
            if not isinstance(found, OuterOrderCertificate):
                raise NotFiniteOrder(f"no inner power up to {bound}: {found}")
            certificate = found
        elif not certificate.verify(monodromy):
            raise NotFiniteOrder("certificate does not verify")
        self.monodromy = monodromy
        self.certificate = certificate
        self.rank = monodromy.rank
        f0 = certificate.f0
        if monodromy(f0) != f0:  # pragma: no cover - follows from the certificate
            raise AssertionError("phi(f0) != f0")
        powers = [monodromy ** 0]
        for _ in range(1, self.k):
            powers.append(compose(monodromy, powers[-1]))
        self._powers = powers
        self._inv_powers = [p.inverse() for p in powers]
        self._f0_inv = invert(f0)
        self._quotients: dict[int, list] = {}

    @property
    def k(self) -> int:
        return self.certificate.order

    @property
    def f0(self) -> Word:
        return self.certificate.f0

    def identity(self) -> TorusElement:
        return TorusElement(0, Word.empty(self.rank))

    def t(self) -> TorusElement:
        return TorusElement(1, Word.empty(self.rank))

    def fibre_element(self, w: Word | str) -> TorusElement:
        if isinstance(w, str):
            w = parse_word(w, self.rank)
        return TorusElement(0, w)

    def generators(self) -> list[TorusElement]:
        """(0, x_1), ..., (0, x_m), then t."""
        return [TorusElement(0, x) for x in self.monodromy.alphabet.generators()] + [self.t()]

    def phi_power(self, n: int, w: Word) -> Word:
        """phi^n(w) for any integer n, via phi^(qk+r) = ad(f0^-q) o phi^r."""
        q, r = divmod(n, self.k)
        img = self._powers[r](w)
        if q == 0 or not self.f0:
            return img
        fq = self.f0 ** q
        return multiply(multiply(fq, img), invert(fq))

    def phi_power_inverse(self, r: int, w: Word) -> Word:
        return self._inv_powers[r](w)

    def parse(self, text: str) -> TorusElement:
        return parse_element(text, self.rank)

    def __repr__(self) -> str:
        return f"MappingTorus(rank={self.rank}, k={self.k}, f0={str(self.f0)!r})"


# -- arithmetic ----------------------------------------------------------------


def torus_multiply(x: TorusElement, y: TorusElement, T: MappingTorus) -> TorusElement:
    return TorusElement(x.t_exp + y.t_exp, multiply(T.phi_power(y.t_exp, x.fibre), y.fibre))


def torus_invert(x: TorusElement, T: MappingTorus) -> TorusElement:
    return TorusElement(-x.t_exp, T.phi_power(-x.t_exp, invert(x.fibre)))


def torus_power(x: TorusElement, n: int, T: MappingTorus) -> TorusElement:
    base = x if n >= 0 else torus_invert(x, T)
    out = T.identity()
    for _ in range(abs(n)):
        out = torus_multiply(out, base, T)
    return out


def torus_conj(x: TorusElement, w: TorusElement, T: MappingTorus) -> TorusElement:
    """w^-1 x w."""
    return torus_multiply(torus_multiply(torus_invert(w, T), x, T), w, T)


def center(T: MappingTorus) -> TorusElement:
    """The generator t^k f0 of the center, checked against every generator."""
    x = TorusElement(T.k, T.f0)
    for g in T.generators():
        if torus_multiply(x, g, T) != torus_multiply(g, x, T):  # pragma: no cover
            raise AssertionError(f"center candidate fails to commute with {g}")
    return x


# -- text format -----------------------------------------------------------------

_T_TOKEN = re.compile(r"t\^(-?\d+)$")


def parse_element(text: str, rank: int, line: int | None = None) -> TorusElement:
    """Parse ``t^<int> <word>``; the t-part may be omitted (exponent 0).

    A bare ``t`` is accepted as ``t^1`` while it cannot be a generator letter
    (rank below 20).
    """
    tokens = text.split()
    if not tokens:
        raise MalformedInput("empty element", line, 1)
    exp, rest = 0, tokens
    m = _T_TOKEN.match(tokens[0])
    if m:
        exp, rest = int(m.group(1)), tokens[1:]
    elif tokens[0] == "t" and rank < 20:
        exp, rest = 1, tokens[1:]
    if len(rest) > 1:
        col = text.index(rest[1]) + 1
        raise MalformedInput("expected 't^<int> <word>'", line, col)
    word = parse_word(rest[0], rank, line) if rest else Word.empty(rank)
    return TorusElement(exp, word)


def format_element(x: TorusElement) -> str:
    return f"t^{x.t_exp} {x.fibre}"


def format_conjugator(x: TorusElement) -> str:
    """Compact form: ``t``, ``t^-1 ab``, ``ab`` or ``1``."""
    parts = []
    if x.t_exp:
        parts.append("t" if x.t_exp == 1 else f"t^{x.t_exp}")
    if x.fibre:
        parts.append(str(x.fibre))
    return " ".join(parts) or "1"


# -- automorphisms of the torus --------------------------------------------------


class TorusAutomorphism:
    """An endomorphism of T given by generator images, relations checked.

    Bijectivity is the caller's claim; the torus relations
    ``psi(t)^-1 psi(x_i) psi(t) == psi(phi(x_i))`` are verified on construction.
    """

    def __init__(self, T: MappingTorus, fibre_images: Sequence[TorusElement | str], t_image: TorusElement | str):
        imgs = [parse_element(e, T.rank) if isinstance(e, str) else e for e in fibre_images]
        if len(imgs) != T.rank:
            raise ValueError(f"expected {T.rank} fibre images, got {len(imgs)}")
        self.torus = T
        self.fibre_images = tuple(imgs)
        self.t_image = parse_element(t_image, T.rank) if isinstance(t_image, str) else t_image
        self._inv_images = tuple(torus_invert(e, T) for e in self.fibre_images)
        for i, x in enumerate(T.monodromy.alphabet.generators()):
            lhs = torus_conj(self.fibre_images[i], self.t_image, T)
            rhs = self.apply_fibre(T.monodromy(x))
            if lhs != rhs:
                raise ValueError(f"relation for generator {x} fails: {lhs} != {rhs}")

    def apply_fibre(self, w: Word) -> TorusElement:
        T = self.torus
        out = T.identity()
        for x in w:
            out = torus_multiply(out, self.fibre_images[x - 1] if x > 0 else self._inv_images[-x - 1], T)
        return out

    def __call__(self, x: TorusElement) -> TorusElement:
        T = self.torus
        return torus_multiply(torus_power(self.t_image, x.t_exp, T), self.apply_fibre(x.fibre), T)

    def images(self) -> tuple[TorusElement, ...]:
        return self.fibre_images + (self.t_image,)

    def __mul__(self, other: "TorusAutomorphism") -> "TorusAutomorphism":
        """self o other."""
        return TorusAutomorphism(self.torus, [self(e) for e in other.fibre_images], self(other.t_image))

    def __pow__(self, n: int) -> "TorusAutomorphism":
        if n < 0:
            raise ValueError("only non-negative powers")
        out = TorusAutomorphism.identity(self.torus)
        for _ in range(n):
            out = self * out
        return out

    def __eq__(self, other) -> bool:
        return isinstance(other, TorusAutomorphism) and self.images() == other.images()

    def __hash__(self) -> int:
        return hash(self.images())

    @classmethod
    def identity(cls, T: MappingTorus) -> "TorusAutomorphism":
        return cls(T, T.generators()[:-1], T.t())

    @classmethod
    def conjugation(cls, T: MappingTorus, w: TorusElement) -> "TorusAutomorphism":
        """g -> w^-1 g w."""
        return cls(T, [torus_conj(g, w, T) for g in T.generators()[:-1]], torus_conj(T.t(), w, T))

    def inner_conjugator(self) -> TorusElement | None:
        """Some w with self(g) == w^-1 g w for all g, or None (exact)."""
        T = self.torus
        if any(e.t_exp != 0 for e in self.fibre_images) or self.t_image.t_exp != 1:
            return None
        gens = T.monodromy.alphabet.generators()
        for s in range(T.k):
            # chi = psi|F o phi^-s must be ad(h)
            chi = [self.apply_fibre(T.phi_power_inverse(s, x)) for x in gens]
            if any(e.t_exp != 0 for e in chi):  # pragma: no cover
                continue
            if T.rank == 1:
                if chi[0].fibre != gens[0]:
                    continue
                h = _rank_one_t_fix(T, s, self.t_image)
                if h is None:
                    continue
            else:
                h = solve_inner([e.fibre for e in chi])
                if h is None:
                    continue
            w = TorusElement(s, h)
            if torus_conj(T.t(), w, T) == self.t_image:
                return w
        return None

    def is_inner(self) -> bool:
        return self.inner_conjugator() is not None

    def outer_order(self, bound: int = 24) -> int | None:
        cur = self
        for j in range(1, bound + 1):
            if cur.is_inner():
                return j
            cur = self * cur
        return None

    def __repr__(self) -> str:
        imgs = ", ".join(format_element(e) for e in self.images())
        return f"TorusAutomorphism({imgs})"


def _rank_one_t_fix(T: MappingTorus, s: int, t_image: TorusElement) -> Word | None:
    # on F_1 conjugation by t^s h moves t to t * phi(h)^-1 h
    target = t_image.fibre
    n = sum(1 if x > 0 else -1 for x in target)
    eps = T.monodromy.images[0].letters[0]
    if eps == 1:
        return Word.empty(1) if n == 0 else None
    if n % 2:
        return None
    return Word((1,) * (n // 2) if n >= 0 else (-1,) * (-n // 2), 1)


# -- conjugacy -------------------------------------------------------------------


@dataclass(frozen=True)
class ConjugacyBudget:
    """Caps for the interleaved search; ``time_ms`` is a wall-clock cap."""

    max_conjugator_length: int = 8
    max_quotient_order: int = 96
    time_ms: int | None = None


@dataclass(frozen=True)
class NonConjugacyCertificate:
    """Why two elements are not conjugate.

    kind is ``exponent`` (t-exponents differ), ``quotient`` (images are not
    conjugate in ``quotient``), or ``twisted`` (every twisted instance was
    decided negatively in F_m, possible when the exponent is a multiple of k).
    """

    kind: str
    detail: str
    quotient: object = field(default=None, compare=False)

    def verify(self, x: TorusElement, y: TorusElement, T: MappingTorus) -> bool:
        if self.kind == "exponent":
            return x.t_exp != y.t_exp
        if self.kind == "quotient":
            q = self.quotient
            return q.verify_relations() and not q.target.conjugate(q.image(x), q.image(y))
        if self.kind == "twisted":
            return x.t_exp == y.t_exp and _exact_twisted(x, y, T) is None
        return False

    def __str__(self) -> str:
        return f"{self.kind} {self.detail}"


def _exact_twisted(x: TorusElement, y: TorusElement, T: MappingTorus) -> TorusElement | None:
    """Decide conjugacy of equal exponents p with k | p exactly.

    t^p is x^(p/k) f0^(-p/k), which is central modulo F_m, so the twisted
    instance collapses to plain conjugacy in F_m.
    """
    p = x.t_exp
    q = p // T.k
    fq = T.f0 ** (-q)
    target = multiply(fq, y.fibre)
    for s in range(T.k):
        u = multiply(fq, T.phi_power(s, x.fibre))
        h = conjugate_in_free(u, target)
        if h is not None:
            w = TorusElement(s, h)
            if torus_conj(x, w, T) == y:
                return w
    return None


def _quotients(T: MappingTorus, max_order: int) -> list:
    from .congruence import enumerate_finite_quotients

    if max_order not in T._quotients:
        T._quotients[max_order] = list(enumerate_finite_quotients(T, max_order))
    return T._quotients[max_order]


def _separate(x: TorusElement, y: TorusElement, quotients) -> object | None:
    for q in quotients:
        if not q.target.conjugate(q.image(x), q.image(y)):
            return q
    return None


def _quotient_schedule(cap: int) -> list[int]:
    out = [n for n in (4, 8, 16, 24, 32, 48, 64, 96, 128, 192, 256) if n < cap]
    return out + [cap]


def torus_conjugate(x: TorusElement, y: TorusElement, T: MappingTorus, budget: ConjugacyBudget = ConjugacyBudget()):
    """Decide whether y == w^-1 x w for some w in T.

    Yes side: conjugators t^s h with s in [0, k) and h by increasing length.
    No side: finite quotients by increasing order.  The two alternate.
    """
    if x.t_exp != y.t_exp:
        return NotConjugate(NonConjugacyCertificate("exponent", f"{x.t_exp} != {y.t_exp}"))
    start = time.monotonic()
    p = x.t_exp
    if p % T.k == 0:
        w = _exact_twisted(x, y, T)
        if w is not None:
            return Conjugate(w)
        q = _separate(x, y, _quotients(T, min(48, budget.max_quotient_order)))
        if q is not None:
            return NotConjugate(NonConjugacyCertificate("quotient", q.describe(), q))
        return NotConjugate(NonConjugacyCertificate("twisted", f"no s in [0,{T.k}) gives free conjugates"))
    # conjugate elements have conjugate powers; the n-th powers have exponent divisible by k
    n = T.k // math.gcd(p, T.k)
    if _exact_twisted(torus_power(x, n, T), torus_power(y, n, T), T) is None:
        q = _separate(x, y, _quotients(T, min(48, budget.max_quotient_order)))
        if q is not None:
            return NotConjugate(NonConjugacyCertificate("quotient", q.describe(), q))
        return Unresolved(f"powers ^{n} are not conjugate but no quotient found")
    schedule = _quotient_schedule(budget.max_quotient_order)
    gens = [T.phi_power(s, x.fibre) for s in range(T.k)]
    for r in range(max(budget.max_conjugator_length, len(schedule)) + 1):
        if r <= budget.max_conjugator_length:
            for h in words_of_length(T.rank, r):
                left = T.phi_power(p, invert(h))
                for s in range(T.k):
                    cand = multiply(multiply(left, gens[s]), h)
                    if cand == y.fibre:
                        w = TorusElement(s, h)
                        if torus_conj(x, w, T) == y:
                            return Conjugate(w)
        if r < len(schedule):
            q = _separate(x, y, _quotients(T, schedule[r]))
            if q is not None:
                return NotConjugate(NonConjugacyCertificate("quotient", q.describe(), q))
        if budget.time_ms is not None and (time.monotonic() - start) * 1000 > budget.time_ms:
            break
    return Unresolved()


# -- sub-mapping tori ------------------------------------------------------------


def sub_torus_monodromy(phi: FreeAutomorphism, l: int, a: Word, k: int | None = None) -> tuple[FreeAutomorphism, Word]:
    """Monodromy psi = ad(a^-1) o phi^l of the sub-torus <H, t^l a^-1>, and b.

    b satisfies psi^(k/l) == ad(b) o phi^k; with ad(g)(w) = g^-1 w g it is
    phi^((n-1)l)(a^-1) ... phi^l(a^-1) a^-1 for n = k/l.
    """
    if k is None:
        cert = outer_order(phi)
        if not isinstance(cert, OuterOrderCertificate):
            raise NotFiniteOrder("monodromy has no certified finite order")
        k = cert.order
    if l <= 0 or k % l:
        raise ValueError(f"l={l} does not divide k={k}")
    phil = phi ** l
    ai = invert(a)
    psi = compose(inner(ai), phil)
    b = Word.empty(phi.rank)
    cur = ai
    for _ in range(k // l):
        b = multiply(cur, b)
        cur = phil(cur)
    lhs = psi ** (k // l)
    rhs = compose(inner(b), phi ** k)
    if lhs != rhs:  # pragma: no cover
        raise AssertionError("sub-torus identity failed")
    return psi, b


# -- isomorphism and tuple prechecks ---------------------------------------------


def fo_isomorphic(T1: MappingTorus, T2: MappingTorus, budget: SearchBudget = SearchBudget()):
    """Fibre- and orientation-preserving isomorphism, via Aut-conjugacy of monodromies."""
    if T1.rank != T2.rank:
        return Distinguished("rank", T1.rank, T2.rank)
    if T1.k != T2.k:
        return Distinguished("order", T1.k, T2.k)
    return aut_conjugate(T1.monodromy, T2.monodromy, budget)


@dataclass(frozen=True)
class Pass:
    decided: bool = field(default=True, init=False, repr=False)
    exit_code: int = field(default=0, init=False, repr=False)


@dataclass(frozen=True)
class Fail:
    reason: str
    decided: bool = field(default=True, init=False, repr=False)
    exit_code: int = field(default=2, init=False, repr=False)


def mwh_precheck(P: Sequence[Sequence[TorusElement]], Q: Sequence[Sequence[TorusElement]]):
    """Necessary condition for a tuple-of-tuples orbit match: arities and t-exponents agree."""
    if len(P) != len(Q):
        return Fail(f"arity {len(P)} != {len(Q)}")
    for i, (S, R) in enumerate(zip(P, Q)):
        if len(S) != len(R):
            return Fail(f"arity of entry {i}: {len(S)} != {len(R)}")
        for j, (u, v) in enumerate(zip(S, R)):
            if u.t_exp != v.t_exp:
                return Fail(f"exponent at ({i},{j}): {u.t_exp} != {v.t_exp}")
    return Pass()
