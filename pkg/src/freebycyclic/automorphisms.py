"""Automorphisms of F_m and their outer classes.

Composition convention, fixed everywhere: ``compose(phi, psi)`` is ``phi o psi``,
so ``compose(phi, psi)(w) == phi(psi(w))``.  Inner automorphisms follow
``ad(g)(w) == g**-1 * w * g``.
"""

from __future__ import annotations

import itertools
from collections import deque
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from . import _kernels as K
from .finite_groups import FiniteGroupTable, cyclic, symmetric
from .verdicts import Conjugate, Distinguished, Unresolved
from .words import (
    Alphabet,
    AlphabetMismatch,
    MalformedInput,
    Word,
    format_letters,
    invert,
    multiply,
    parse_letters,
    parse_word,
    solve_inner,
)

__all__ = [
    "NotAnAutomorphism",
    "FreeAutomorphism",
    "OuterOrderCertificate",
    "OrderExceeded",
    "OutInvariantFingerprint",
    "FingerprintConfig",
    "Conjugate",
    "Distinguished",
    "Unresolved",
    "make_automorphism",
    "apply",
    "compose",
    "is_inner",
    "outer_order",
    "fingerprint",
    "out_conjugate",
    "aut_conjugate",
    "identity",
    "inner",
    "nielsen_generators",
    "SearchBudget",
    "parse_automorphism",
    "format_automorphism",
    "normalize_outer",
]


class NotAnAutomorphism(ValueError):
    pass


def _apply_letters(images: Sequence[tuple[int, ...]], inv_images: Sequence[tuple[int, ...]], letters):
    stack: list[int] = []
    for x in letters:
        chunk = images[x - 1] if x > 0 else inv_images[-x - 1]
        for y in chunk:
            if stack and stack[-1] == -y:
                stack.pop()
            else:
                stack.append(y)
    return tuple(stack)


class FreeAutomorphism:
    """An automorphism of F_m given by generator images, with cached inverse images."""

    __slots__ = ("rank", "images", "inverse_images", "_img_inv", "_inv_img_inv")

    def __init__(self, images: Sequence[Word], inverse_images: Sequence[Word]):
        # trusted constructor; use make_automorphism for verification
        self.rank = images[0].rank
        self.images = tuple(images)
        self.inverse_images = tuple(inverse_images)
        self._img_inv = tuple(invert(w).letters for w in self.images)
        self._inv_img_inv = tuple(invert(w).letters for w in self.inverse_images)

    @property
    def alphabet(self) -> Alphabet:
        return Alphabet(self.rank)

    def __call__(self, w: Word) -> Word:
        if w.rank != self.rank:
            raise AlphabetMismatch(f"rank {w.rank} vs automorphism rank {self.rank}")
        return Word._trusted(
            _apply_letters([v.letters for v in self.images], self._img_inv, w.letters), self.rank
        )

    def apply_inverse(self, w: Word) -> Word:
        if w.rank != self.rank:
            raise AlphabetMismatch(f"rank {w.rank} vs automorphism rank {self.rank}")
        return Word._trusted(
            _apply_letters([v.letters for v in self.inverse_images], self._inv_img_inv, w.letters),
            self.rank,
        )

    def inverse(self) -> "FreeAutomorphism":
        return FreeAutomorphism(self.inverse_images, self.images)

    def __mul__(self, other: "FreeAutomorphism") -> "FreeAutomorphism":
        return compose(self, other)

    def __pow__(self, n: int) -> "FreeAutomorphism":
        base = self if n >= 0 else self.inverse()
        out = identity(self.rank)
        for _ in range(abs(n)):
            out = compose(base, out)
        return out

    def __eq__(self, other) -> bool:
        return isinstance(other, FreeAutomorphism) and self.images == other.images

    def __hash__(self) -> int:
        return hash(self.images)

    def max_image_length(self) -> int:
        return max(len(w) for w in self.images)

    def abelianization(self) -> np.ndarray:
        """Integer matrix whose i-th column is the exponent-sum vector of phi(x_i)."""
        m = self.rank
        out = np.zeros((m, m), dtype=object)
        for i, w in enumerate(self.images):
            for x in w.letters:
                out[abs(x) - 1, i] += 1 if x > 0 else -1
        return out

    def __str__(self) -> str:
        return "(" + ", ".join(str(w) for w in self.images) + ")"

    def __repr__(self) -> str:
        return f"FreeAutomorphism{self}"


# -- construction and verification -------------------------------------------


def _fold_inverse(images: Sequence[Word]) -> list[Word] | None:
    """Stallings-fold the petals of ``images``; return inverse images if they form a basis.

    Every edge carries a tag in the free group on the images, kept so that
    P(src) * label * P(dst)^-1 == eval(tag) for fixed vertex potentials P with
    P(base) == 1.  When the graph folds to a rose, each loop's tag expresses its
    generator in terms of the images.
    """
    m = images[0].rank
    empty = Word.empty(m)
    edges: list[list] = []  # [src, dst, positive letter, tag]
    n_vertices = 1
    for i, w in enumerate(images, start=1):
        if not w:
            return None
        path = [0] + [n_vertices + j for j in range(len(w) - 1)] + [0]
        n_vertices += len(w) - 1
        for j, x in enumerate(w.letters):
            tag = Word._trusted((i,), m) if j == len(w) - 1 else empty
            u, v = path[j], path[j + 1]
            if x > 0:
                edges.append([u, v, x, tag])
            else:
                edges.append([v, u, -x, invert(tag)])
    alive = [True] * len(edges)

    while True:
        seen: dict[tuple[int, int], tuple[int, int, Word]] = {}
        clash = None
        for e, (s, d, x, tag) in enumerate(edges):
            if not alive[e]:
                continue
            for v, lab, w, step in ((s, x, d, tag), (d, -x, s, None)):
                if step is None:
                    step = invert(tag)
                key = (v, lab)
                if key in seen and seen[key][0] != e:
                    clash = (seen[key], (e, w, step))
                    break
                seen[key] = (e, w, step)
            if clash:
                break
        if clash is None:
            break
        (e1, w1, s1), (e2, w2, s2) = clash
        if w2 == 0 and w1 != 0:
            (e1, w1, s1), (e2, w2, s2) = (e2, w2, s2), (e1, w1, s1)
        alive[e2] = False
        if w1 == w2:
            continue
        delta = multiply(invert(s2), s1)  # P(w2) = delta * P(w1)
        delta_inv = invert(delta)
        for e, edge in enumerate(edges):
            if not alive[e]:
                continue
            s, d, x, tag = edge
            if s == w2 and d == w2:
                edge[3] = multiply(multiply(delta_inv, tag), delta)
                edge[0] = edge[1] = w1
            elif s == w2:
                edge[3] = multiply(delta_inv, tag)
                edge[0] = w1
            elif d == w2:
                edge[3] = multiply(tag, delta)
                edge[1] = w1

    live = [edges[e] for e in range(len(edges)) if alive[e]]
    if len(live) != m:
        return None
    inverse: list[Word | None] = [None] * m
    for s, d, x, tag in live:
        if s != 0 or d != 0 or inverse[x - 1] is not None:
            return None
        inverse[x - 1] = tag
    return inverse  # type: ignore[return-value]


def make_automorphism(images: Sequence[Word | str], rank: int | None = None) -> FreeAutomorphism:
    """Build a verified automorphism from generator images (Words or word strings)."""
    if rank is None:
        rank = len(images)
    words = [parse_word(w, rank) if isinstance(w, str) else w for w in images]
    if len(words) != rank:
        raise ValueError(f"expected {rank} images, got {len(words)}")
    for w in words:
        if w.rank != rank:
            raise AlphabetMismatch(f"image over rank {w.rank}, expected {rank}")
    inv = _fold_inverse(words)
    if inv is None:
        raise NotAnAutomorphism("images do not form a free basis")
    phi = FreeAutomorphism(words, inv)
    for i, g in enumerate(Alphabet(rank).generators()):
        if phi(phi.apply_inverse(g)) != g or phi.apply_inverse(phi(g)) != g:
            raise NotAnAutomorphism("inverse verification failed")  # pragma: no cover
    return phi


def identity(rank: int) -> FreeAutomorphism:
    gens = Alphabet(rank).generators()
    return FreeAutomorphism(gens, gens)


def inner(g: Word) -> FreeAutomorphism:
    """ad_g : w -> g^-1 w g."""
    gi = invert(g)
    gens = g.alphabet.generators()
    return FreeAutomorphism(
        [multiply(multiply(gi, x), g) for x in gens],
        [multiply(multiply(g, x), gi) for x in gens],
    )


def apply(phi: FreeAutomorphism, w: Word) -> Word:
    return phi(w)


def compose(phi: FreeAutomorphism, psi: FreeAutomorphism) -> FreeAutomorphism:
    """phi o psi."""
    if phi.rank != psi.rank:
        raise AlphabetMismatch(f"rank {phi.rank} vs rank {psi.rank}")
    return FreeAutomorphism(
        [phi(w) for w in psi.images],
        [psi.apply_inverse(w) for w in phi.inverse_images],
    )


def is_inner(phi: FreeAutomorphism) -> Word | None:
    """The g with phi == ad_g, or None."""
    return solve_inner(phi.images)


def nielsen_generators(rank: int) -> list[FreeAutomorphism]:
    """Elementary Nielsen automorphisms in a fixed order: swaps, inversions, transvections."""
    gens = Alphabet(rank).generators()
    out = []
    for i, j in itertools.combinations(range(rank), 2):
        imgs = list(gens)
        imgs[i], imgs[j] = gens[j], gens[i]
        out.append(FreeAutomorphism(imgs, imgs))
    for i in range(rank):
        imgs = list(gens)
        imgs[i] = invert(gens[i])
        out.append(FreeAutomorphism(imgs, imgs))
    for i in range(rank):
        for j in range(rank):
            if i == j:
                continue
            xi, xj = gens[i], gens[j]
            for right in (True, False):
                for e in (1, -1):
                    y = xj if e == 1 else invert(xj)
                    imgs, inv = list(gens), list(gens)
                    if right:
                        imgs[i], inv[i] = multiply(xi, y), multiply(xi, invert(y))
                    else:
                        imgs[i], inv[i] = multiply(y, xi), multiply(invert(y), xi)
                    out.append(FreeAutomorphism(imgs, inv))
    return out


# -- outer order ---------------------------------------------------------------


@dataclass(frozen=True)
class OuterOrderCertificate:
    """phi**order == ad(f0**-1), with order minimal."""

    order: int
    f0: Word

    def verify(self, phi: FreeAutomorphism) -> bool:
        power = phi ** self.order
        f0 = self.f0
        for x in phi.alphabet.generators():
            if power(x) != multiply(multiply(f0, x), invert(f0)):
                return False
        return all(is_inner(phi ** j) is None for j in range(1, self.order))


@dataclass(frozen=True)
class OrderExceeded:
    power: int
    length: int


DEFAULT_CEILING = 4096


def outer_order(
    phi: FreeAutomorphism, bound: int = 64, ceiling: int = DEFAULT_CEILING
) -> OuterOrderCertificate | OrderExceeded | None:
    """Least k <= bound with phi**k inner, as a certificate.

    Returns OrderExceeded when some power's generator image outgrows
    ``ceiling`` letters before an inner power is found, None when the bound is
    exhausted.
    """
    if bound < 1:
        raise ValueError("bound must be positive")
    power = phi
    for k in range(1, bound + 1):
        g = is_inner(power)
        if g is not None:
            return OuterOrderCertificate(k, invert(g))
        if k == bound:
            break
        power = compose(phi, power)
        longest = power.max_image_length()
        if longest > ceiling:
            return OrderExceeded(k + 1, longest)
    return None


# -- outer-class normal form ---------------------------------------------------


def _conj_images(images: Sequence[Word], g: Word) -> tuple[Word, ...]:
    gi = invert(g)
    return tuple(multiply(multiply(gi, w), g) for w in images)


def normalize_outer(phi: FreeAutomorphism) -> tuple[tuple[int, ...], ...]:
    """Canonical key of the outer class of ``phi``.

    Among the representatives ad_g o phi, take those of least total image
    length (a finite convex subtree of conjugators for rank >= 2), then the
    least letter sequence.
    """
    if phi.rank == 1:
        return tuple(w.letters for w in phi.images)
    letters = Alphabet(phi.rank).letters()
    cur = phi.images
    total = sum(len(w) for w in cur)
    improved = True
    while improved:
        improved = False
        for x in letters:
            cand = _conj_images(cur, Word._trusted((x,), phi.rank))
            t = sum(len(w) for w in cand)
            if t < total:
                cur, total, improved = cand, t, True
                break
    plateau = {tuple(w.letters for w in cur)}
    frontier = [cur]
    while frontier:
        nxt = []
        for imgs in frontier:
            for x in letters:
                cand = _conj_images(imgs, Word._trusted((x,), phi.rank))
                key = tuple(w.letters for w in cand)
                if key in plateau or sum(len(w) for w in cand) != total:
                    continue
                plateau.add(key)
                nxt.append(cand)
        frontier = nxt
    from .words import letter_key

    return min(plateau, key=lambda k: tuple(tuple(letter_key(x) for x in w) for w in k))


# -- fingerprint ---------------------------------------------------------------


@dataclass(frozen=True)
class FingerprintConfig:
    order_bound: int = 64
    targets: tuple[str, ...] = ("C2", "C3", "C4", "S3")
    subgroup_degree: int = 3


_TARGETS = {"C2": lambda: cyclic(2), "C3": lambda: cyclic(3), "C4": lambda: cyclic(4), "S3": lambda: symmetric(3)}
_target_cache: dict[str, FiniteGroupTable] = {}


def _target(name: str) -> FiniteGroupTable:
    if name not in _target_cache:
        _target_cache[name] = _TARGETS[name]()
    return _target_cache[name]


@dataclass(frozen=True)
class OutInvariantFingerprint:
    abelianization_char_poly: tuple[int, ...]
    finite_order: int | None
    quotient_action_signatures: tuple[tuple[str, tuple[tuple[int, int], ...]], ...]
    short_orbit_counts: tuple[tuple[int, tuple[int, ...]], ...]

    # comparison order: cheapest to explain first
    FIELDS = (
        "finite_order",
        "abelianization_char_poly",
        "quotient_action_signatures",
        "short_orbit_counts",
    )

    def first_difference(self, other: "OutInvariantFingerprint") -> str | None:
        for name in self.FIELDS:
            if getattr(self, name) != getattr(other, name):
                return name
        return None

    def char_poly_str(self) -> str:
        return format_poly(self.abelianization_char_poly)


def char_poly(matrix: np.ndarray) -> tuple[int, ...]:
    """Characteristic polynomial det(xI - A), coefficients from the leading one down."""
    n = matrix.shape[0]
    a = [[int(matrix[i, j]) for j in range(n)] for i in range(n)]
    coeffs = [1]
    mk = [[0] * n for _ in range(n)]
    for k in range(1, n + 1):
        c_prev = coeffs[-1]
        mk = [[sum(a[i][l] * mk[l][j] for l in range(n)) + (c_prev if i == j else 0) for j in range(n)] for i in range(n)]
        am = [[sum(a[i][l] * mk[l][j] for l in range(n)) for j in range(n)] for i in range(n)]
        tr = sum(am[i][i] for i in range(n))
        coeffs.append(-tr // k)
    return tuple(coeffs)


def format_poly(coeffs: Sequence[int]) -> str:
    n = len(coeffs) - 1
    terms = []
    for i, c in enumerate(coeffs):
        d = n - i
        if c == 0:
            continue
        mono = "" if d == 0 else ("x" if d == 1 else f"x^{d}")
        mag = abs(c)
        body = mono if (mag == 1 and mono) else f"{mag}{mono}"
        sign = "-" if c < 0 else "+"
        terms.append((sign, body))
    if not terms:
        return "0"
    out = ("-" if terms[0][0] == "-" else "") + terms[0][1]
    for sign, body in terms[1:]:
        out += f" {sign} {body}"
    return out


def _encode(tuples: np.ndarray, n: int) -> np.ndarray:
    weights = n ** np.arange(tuples.shape[-1], dtype=np.int64)
    return (tuples * weights).sum(axis=-1)


def _all_tuples(n: int, m: int) -> np.ndarray:
    grids = np.meshgrid(*([np.arange(n)] * m), indexing="ij")
    return np.stack([g.ravel() for g in grids], axis=1).astype(np.int64)


def _canonical_codes(tuples: np.ndarray, maps: Sequence[np.ndarray], n: int) -> np.ndarray:
    codes = np.stack([_encode(np.asarray(f)[tuples], n) for f in maps])
    return codes.min(axis=0)


def _image_tuples(G: FiniteGroupTable, tuples: np.ndarray, phi: FreeAutomorphism) -> np.ndarray:
    cols = [
        K.eval_words(G.table, G.inverse, tuples, np.asarray(w.letters, dtype=np.int64))
        for w in phi.images
    ]
    return np.stack(cols, axis=1)


def _permutation_signature(G, reps, maps, phi, keep_beta: bool):
    """Cycle structure of rho -> rho o phi on classes ``reps`` (modulo ``maps``)."""
    n = G.order
    codes = _canonical_codes(reps, maps, n)
    index = {int(c): i for i, c in enumerate(codes)}
    moved = _image_tuples(G, reps, phi)
    target = [index[int(c)] for c in _canonical_codes(moved, maps, n)]
    seen = [False] * len(reps)
    out = []
    for start in range(len(reps)):
        if seen[start]:
            continue
        length, cur = 0, start
        while not seen[cur]:
            seen[cur] = True
            cur = target[cur]
            length += 1
        if keep_beta:
            rho = reps[start]
            power = phi ** length
            after = _image_tuples(G, rho[None, :], power)[0]
            beta = G.extend_hom(rho, after)
            out.append((length, G.outer_order(beta)))
        else:
            out.append(length)
    return tuple(sorted(out))


def _class_reps(G: FiniteGroupTable, m: int, maps, keep) -> np.ndarray:
    tuples = _all_tuples(G.order, m)
    tuples = tuples[keep(tuples)]
    codes = _canonical_codes(tuples, maps, G.order)
    _, first = np.unique(codes, return_index=True)
    return tuples[np.sort(first)]


def _transitive_mask(perms: list[tuple[int, ...]], tuples: np.ndarray) -> np.ndarray:
    d = len(perms[0])
    out = np.zeros(len(tuples), dtype=bool)
    for r, row in enumerate(tuples):
        orbit, stack = {0}, [0]
        while stack:
            p = stack.pop()
            for g in row:
                q = perms[g][p]
                if q not in orbit:
                    orbit.add(q)
                    stack.append(q)
        out[r] = len(orbit) == d
    return out


def _sym_with_perms(d: int):
    G = symmetric(d)
    # recover permutations by acting on the natural generators' closure order
    cyc = tuple((i + 1) % d for i in range(d))
    swap = (1, 0) + tuple(range(2, d))
    gens = [swap, cyc] if d > 1 else [tuple(range(d))]
    ident = tuple(range(d))
    elements, seen, head = [ident], {ident}, 0
    while head < len(elements):
        e = elements[head]
        head += 1
        for g in gens:
            f = tuple(g[i] for i in e)
            if f not in seen:
                seen.add(f)
                elements.append(f)
    return G, elements


_rep_cache: dict = {}


def fingerprint(phi: FreeAutomorphism, config: FingerprintConfig = FingerprintConfig()) -> OutInvariantFingerprint:
    """Conjugacy invariants of the outer class [phi]."""
    m = phi.rank
    poly = char_poly(phi.abelianization())
    cert = outer_order(phi, config.order_bound)
    order = cert.order if isinstance(cert, OuterOrderCertificate) else None

    sigs = []
    for name in config.targets:
        G = _target(name)
        key = ("epi", name, m)
        if key not in _rep_cache:
            _rep_cache[key] = _class_reps(
                G, m, G.automorphisms, lambda t, G=G: K.generated_sizes(G.table, t) == G.order
            )
        reps = _rep_cache[key]
        sigs.append((name, _permutation_signature(G, reps, G.automorphisms, phi, True)))

    counts = []
    for d in range(2, config.subgroup_degree + 1):
        key = ("trans", d, m)
        G, perms = _sym_with_perms(d)
        inner_maps = [np.asarray(f) for f in sorted(G.inner_automorphisms)]
        if key not in _rep_cache:
            _rep_cache[key] = _class_reps(G, m, inner_maps, lambda t: _transitive_mask(perms, t))
        reps = _rep_cache[key]
        counts.append((d, _permutation_signature(G, reps, inner_maps, phi, False)))
    return OutInvariantFingerprint(poly, order, tuple(sigs), tuple(counts))


# -- conjugacy of outer classes ----------------------------------------------


@dataclass(frozen=True)
class SearchBudget:
    max_states: int = 20000
    length_slack: int = 24
    inner_fix_length: int = 8


def _conjugated(theta: FreeAutomorphism, phi: FreeAutomorphism) -> FreeAutomorphism:
    return compose(compose(theta, phi), theta.inverse())


def _verify_out_conjugate(theta, phi, psi) -> bool:
    return is_inner(compose(_conjugated(theta, phi), psi.inverse())) is not None


def out_conjugate(
    phi: FreeAutomorphism,
    psi: FreeAutomorphism,
    budget: SearchBudget = SearchBudget(),
    config: FingerprintConfig = FingerprintConfig(),
):
    """Decide whether [theta phi theta^-1] == [psi] for some theta.

    The no side compares fingerprints; the yes side is a bidirectional
    breadth-first search over Nielsen conjugates, keyed by outer normal form.
    """
    if phi.rank != psi.rank:
        raise AlphabetMismatch(f"rank {phi.rank} vs rank {psi.rank}")
    fa, fb = fingerprint(phi, config), fingerprint(psi, config)
    diff = fa.first_difference(fb)
    if diff is not None:
        return Distinguished(diff, getattr(fa, diff), getattr(fb, diff))
    if normalize_outer(phi) == normalize_outer(psi):
        theta = identity(phi.rank)
        if _verify_out_conjugate(theta, phi, psi):
            return Conjugate(theta)
    found = _bidirectional_search(phi, psi, budget)
    if found is not None:
        return Conjugate(found)
    return Unresolved()


def _bidirectional_search(phi, psi, budget: SearchBudget):
    gens = nielsen_generators(phi.rank)
    cap = max(sum(len(w) for w in phi.images), sum(len(w) for w in psi.images)) + budget.length_slack
    sides = []
    for start in (phi, psi):
        key = normalize_outer(start)
        sides.append(({key: identity(start.rank)}, deque([(start, identity(start.rank))])))
    states = 0
    turn = 0
    while states < budget.max_states and (sides[0][1] or sides[1][1]):
        seen, queue = sides[turn]
        other_seen = sides[1 - turn][0]
        if not queue:
            turn = 1 - turn
            continue
        # expand one full BFS layer of this side
        for _ in range(len(queue)):
            cur, theta = queue.popleft()
            for n in gens:
                nxt_theta = compose(n, theta)
                nxt = _conjugated(n, cur)
                if sum(len(w) for w in nxt.images) > cap:
                    continue
                key = normalize_outer(nxt)
                if key in seen:
                    continue
                seen[key] = nxt_theta
                states += 1
                if key in other_seen:
                    t_phi, t_psi = (nxt_theta, other_seen[key]) if turn == 0 else (other_seen[key], nxt_theta)
                    theta_total = compose(t_psi.inverse(), t_phi)
                    if _verify_out_conjugate(theta_total, phi, psi):
                        return theta_total
                queue.append((nxt, nxt_theta))
            if states >= budget.max_states:
                break
        turn = 1 - turn
    return None


def _twisted_fix(alpha: FreeAutomorphism, h: Word, max_len: int) -> Word | None:
    """Some g with alpha(g) == h * g, searched by length."""
    from .words import words_up_to

    for g in words_up_to(alpha.rank, max_len):
        if alpha(g) == multiply(h, g):
            return g
    return None


def aut_conjugate(
    phi: FreeAutomorphism,
    psi: FreeAutomorphism,
    budget: SearchBudget = SearchBudget(),
    config: FingerprintConfig = FingerprintConfig(),
):
    """Decide theta phi theta^-1 == psi exactly (not just up to inner)."""
    if phi.rank != psi.rank:
        return Distinguished("rank", phi.rank, psi.rank)
    if phi == psi:
        return Conjugate(identity(phi.rank))
    verdict = out_conjugate(phi, psi, budget, config)
    if not isinstance(verdict, Conjugate):
        return verdict
    ca = outer_order(phi, config.order_bound)
    cb = outer_order(psi, config.order_bound)
    if isinstance(ca, OuterOrderCertificate) and isinstance(cb, OuterOrderCertificate):
        if bool(ca.f0) != bool(cb.f0):
            return Distinguished("f0_trivial", not ca.f0, not cb.f0)
    theta0 = verdict.witness
    # theta0 phi theta0^-1 = ad_h o psi; fix by ad_g with h = psi(g) g^-1
    h = is_inner(compose(_conjugated(theta0, phi), psi.inverse()))
    if phi.rank == 1:
        return Conjugate(theta0) if _conjugated(theta0, phi) == psi else Unresolved()
    g = _twisted_fix(psi, h, budget.inner_fix_length)
    if g is None:
        return Unresolved("no inner correction within length bound")
    theta = compose(inner(g), theta0)
    if _conjugated(theta, phi) != psi:  # pragma: no cover
        return Unresolved("inner correction failed verification")
    return Conjugate(theta)


# -- text format ---------------------------------------------------------------


def parse_automorphism(text: str) -> FreeAutomorphism:
    """Parse ``a -> ab`` lines (one per generator, in alphabet order)."""
    rows = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "->" not in line:
            raise MalformedInput("expected '<generator> -> <word>'", lineno, 1)
        lhs, rhs = line.split("->", 1)
        col_rhs = raw.index("->") + 3
        lhs, rhs = lhs.strip(), rhs.strip()
        letters = parse_letters(lhs, None, lineno)
        if len(letters) != 1 or letters[0] < 0:
            raise MalformedInput(f"left side {lhs!r} must be one generator", lineno, 1)
        if not rhs or any(c.isspace() for c in rhs):
            raise MalformedInput("image must be a single word", lineno, col_rhs)
        rows.append((letters[0], rhs, lineno, col_rhs))
    if not rows:
        raise MalformedInput("no generator lines")
    rank = len(rows)
    seen = set()
    for expected, (gen, _, lineno, _) in enumerate(rows, start=1):
        if gen in seen:
            raise MalformedInput(f"duplicate generator {format_letters((gen,), max(rank, gen))}", lineno, 1)
        seen.add(gen)
        if gen != expected:
            raise MalformedInput(
                f"expected generator {format_letters((expected,), rank)}, got {format_letters((gen,), max(rank, gen))}",
                lineno,
                1,
            )
    images = []
    for _, rhs, lineno, col in rows:
        try:
            images.append(Word._trusted(tuple(Word(parse_letters(rhs, rank, lineno), rank).letters), rank))
        except MalformedInput as exc:
            raise MalformedInput(str(exc).split(": ", 1)[-1], lineno, col) from None
    return make_automorphism(images, rank)


def format_automorphism(phi: FreeAutomorphism) -> str:
    lines = []
    for i, w in enumerate(phi.images, start=1):
        lines.append(f"{format_letters((i,), phi.rank)} -> {w}")
    return "\n".join(lines) + "\n"
