"""Finite graphs, their isometries, and the outer automorphisms they induce.

Edge i carries half-edges 2i (from its first endpoint to its second) and
2i + 1 (the reverse).  A marking fixes a spanning tree grown breadth-first
from the basepoint; non-tree edges, in index order, give the free basis.
"""

from __future__ import annotations

import itertools
import re
from collections import deque
from dataclasses import dataclass, field
from typing import Sequence

from .automorphisms import (
    FingerprintConfig,
    FreeAutomorphism,
    OuterOrderCertificate,
    OutInvariantFingerprint,
    SearchBudget,
    compose,
    fingerprint,
    is_inner,
    make_automorphism,
    out_conjugate,
    outer_order,
)
from .verdicts import Conjugate, Distinguished
from .words import MalformedInput, Word

__all__ = [
    "FiniteGraph",
    "GraphIsometry",
    "Marking",
    "CatalogEntry",
    "Catalog",
    "Realization",
    "rose",
    "theta",
    "parse_graph",
    "format_graph",
    "parse_isometry",
    "format_isometry",
    "induced_outer_automorphism",
    "omega_homomorphism_check",
    "enumerate_graph_isometries",
    "reduced_graphs",
    "subdivide",
    "finite_order_catalog",
    "realize_search",
    "format_catalog",
]


@dataclass(frozen=True)
class FiniteGraph:
    n_vertices: int
    edges: tuple[tuple[int, int], ...]

    def __post_init__(self):
        for u, v in self.edges:
            if not (0 <= u < self.n_vertices and 0 <= v < self.n_vertices):
                raise ValueError(f"edge ({u}, {v}) leaves the vertex range")
        if any(d == 0 for d in self.valences()):
            raise ValueError("isolated vertex")
        if not self._connected():
            raise ValueError("graph is not connected")
        if self.betti < 1:
            raise ValueError("graph is a tree")

    @property
    def n_half_edges(self) -> int:
        return 2 * len(self.edges)

    @property
    def betti(self) -> int:
        return len(self.edges) - self.n_vertices + 1

    def origin(self, h: int) -> int:
        u, v = self.edges[h >> 1]
        return v if h & 1 else u

    def terminus(self, h: int) -> int:
        return self.origin(h ^ 1)

    @staticmethod
    def reverse(h: int) -> int:
        return h ^ 1

    def valences(self) -> list[int]:
        deg = [0] * self.n_vertices
        for u, v in self.edges:
            deg[u] += 1
            deg[v] += 1
        return deg

    def outgoing(self, v: int) -> list[int]:
        return [h for h in range(self.n_half_edges) if self.origin(h) == v]

    def _connected(self) -> bool:
        seen, stack = {0}, [0]
        while stack:
            v = stack.pop()
            for u, w in self.edges:
                for a, b in ((u, w), (w, u)):
                    if a == v and b not in seen:
                        seen.add(b)
                        stack.append(b)
        return len(seen) == self.n_vertices

    def canonical_form(self) -> tuple:
        best = None
        for perm in itertools.permutations(range(self.n_vertices)):
            key = tuple(sorted(tuple(sorted((perm[u], perm[v]))) for u, v in self.edges))
            if best is None or key < best:
                best = key
        return (self.n_vertices, best)


def rose(m: int) -> FiniteGraph:
    return FiniteGraph(1, tuple((0, 0) for _ in range(m)))


def theta() -> FiniteGraph:
    return FiniteGraph(2, ((0, 1), (0, 1), (0, 1)))


@dataclass(frozen=True)
class GraphIsometry:
    vertex_perm: tuple[int, ...]
    half_edge_perm: tuple[int, ...]

    def check(self, X: FiniteGraph) -> None:
        if sorted(self.vertex_perm) != list(range(X.n_vertices)):
            raise ValueError("vertex map is not a bijection")
        if sorted(self.half_edge_perm) != list(range(X.n_half_edges)):
            raise ValueError("half-edge map is not a bijection")
        for h, g in enumerate(self.half_edge_perm):
            if self.half_edge_perm[h ^ 1] != g ^ 1:
                raise ValueError("half-edge map does not commute with reversal")
            if X.origin(g) != self.vertex_perm[X.origin(h)]:
                raise ValueError("half-edge map does not respect endpoints")

    def __call__(self, h: int) -> int:
        return self.half_edge_perm[h]

    def compose(self, other: "GraphIsometry") -> "GraphIsometry":
        """self o other."""
        return GraphIsometry(
            tuple(self.vertex_perm[v] for v in other.vertex_perm),
            tuple(self.half_edge_perm[h] for h in other.half_edge_perm),
        )

    def is_identity(self) -> bool:
        return self.half_edge_perm == tuple(range(len(self.half_edge_perm)))

    def order(self) -> int:
        cur, k = self, 1
        while not cur.is_identity():
            cur = self.compose(cur)
            k += 1
        return k

    @classmethod
    def identity(cls, X: FiniteGraph) -> "GraphIsometry":
        return cls(tuple(range(X.n_vertices)), tuple(range(X.n_half_edges)))


@dataclass(frozen=True)
class Marking:
    graph: FiniteGraph
    basepoint: int
    tree: frozenset
    basis: tuple[int, ...]
    # half-edge path from the basepoint to each vertex inside the tree
    paths: tuple[tuple[int, ...], ...] = field(repr=False, compare=False)

    @classmethod
    def canonical(cls, X: FiniteGraph, basepoint: int = 0) -> "Marking":
        paths: dict[int, tuple[int, ...]] = {basepoint: ()}
        tree = set()
        queue = deque([basepoint])
        while queue:
            v = queue.popleft()
            for h in X.outgoing(v):
                w = X.terminus(h)
                if w not in paths:
                    paths[w] = paths[v] + (h,)
                    tree.add(h >> 1)
                    queue.append(w)
        basis = tuple(e for e in range(len(X.edges)) if e not in tree)
        return cls(X, basepoint, frozenset(tree), basis, tuple(paths[v] for v in range(X.n_vertices)))

    @property
    def rank(self) -> int:
        return len(self.basis)

    def loop(self, i: int) -> list[int]:
        """Basis loop i as a half-edge path at the basepoint."""
        e = self.basis[i]
        h = 2 * e
        return list(self.paths[self.graph.origin(h)]) + [h] + reverse_path(self.paths[self.graph.terminus(h)])

    def tree_path(self, u: int, v: int) -> list[int]:
        return reverse_path(self.paths[u]) + list(self.paths[v])

    def read(self, path: Sequence[int]) -> Word:
        """Word of a closed path at the basepoint; tree edges are invisible."""
        index = {e: i + 1 for i, e in enumerate(self.basis)}
        letters = []
        for h in path:
            e = h >> 1
            if e in index:
                letters.append(-index[e] if h & 1 else index[e])
        return Word(letters, self.rank)


def reverse_path(path: Sequence[int]) -> list[int]:
    return [h ^ 1 for h in reversed(path)]


def _check_path(X: FiniteGraph, path: Sequence[int], start: int, end: int) -> None:
    cur = start
    for h in path:
        if not 0 <= h < X.n_half_edges or X.origin(h) != cur:
            raise ValueError(f"invalid path: half-edge {h} does not start at vertex {cur}")
        cur = X.terminus(h)
    if cur != end:
        raise ValueError(f"invalid path: ends at {cur}, expected {end}")


def induced_outer_automorphism(
    X: FiniteGraph, sigma: GraphIsometry, M: Marking, c: Sequence[int] | None = None
) -> FreeAutomorphism:
    """phi_c: basis loop gamma -> c . sigma(gamma) . c^-1, read in the basis.

    ``c`` is a half-edge path from the basepoint to sigma(basepoint); by
    default the tree path.
    """
    v0 = M.basepoint
    target = sigma.vertex_perm[v0]
    if c is None:
        c = M.tree_path(v0, target)
    _check_path(X, c, v0, target)
    images = []
    for i in range(M.rank):
        moved = [sigma(h) for h in M.loop(i)]
        images.append(M.read(list(c) + moved + reverse_path(c)))
    return make_automorphism(images, M.rank)


def omega_homomorphism_check(X: FiniteGraph, M: Marking, sigma: GraphIsometry, tau: GraphIsometry) -> bool:
    """[phi for sigma o tau] == [phi for sigma][phi for tau] in Out."""
    lhs = induced_outer_automorphism(X, sigma.compose(tau), M)
    rhs = compose(induced_outer_automorphism(X, sigma, M), induced_outer_automorphism(X, tau, M))
    return is_inner(compose(lhs, rhs.inverse())) is not None


def enumerate_graph_isometries(X: FiniteGraph) -> list[GraphIsometry]:
    """All combinatorial automorphisms, by backtracking edge by edge."""
    n_edges = len(X.edges)
    out: list[GraphIsometry] = []
    vmap = [-1] * X.n_vertices
    vused = [False] * X.n_vertices
    hmap = [-1] * X.n_half_edges
    eused = [False] * n_edges
    deg = X.valences()

    def bind(u: int, w: int, undo: list) -> bool:
        if vmap[u] == -1:
            if vused[w] or deg[u] != deg[w]:
                return False
            vmap[u] = w
            vused[w] = True
            undo.append(u)
            return True
        return vmap[u] == w

    def rec(e: int) -> None:
        if e == n_edges:
            out.append(GraphIsometry(tuple(vmap), tuple(hmap)))
            return
        h = 2 * e
        for g in range(X.n_half_edges):
            if eused[g >> 1]:
                continue
            undo: list[int] = []
            if bind(X.origin(h), X.origin(g), undo) and bind(X.terminus(h), X.terminus(g), undo):
                hmap[h], hmap[h + 1] = g, g ^ 1
                eused[g >> 1] = True
                rec(e + 1)
                eused[g >> 1] = False
                hmap[h] = hmap[h + 1] = -1
            for u in undo:
                vused[vmap[u]] = False
                vmap[u] = -1

    rec(0)
    return out


# -- graph enumeration -----------------------------------------------------------


def reduced_graphs(m: int) -> list[FiniteGraph]:
    """Connected graphs with b1 = m and all valences >= 3, up to isomorphism.

    Such graphs have at most 2m - 2 vertices and 3m - 3 edges; the rose is
    always included (it is the only option at m = 1).
    """
    out = [rose(m)]
    seen = {rose(m).canonical_form()}
    for n in range(2, 2 * m - 1):
        n_edges = n + m - 1
        slots = [(u, v) for u in range(n) for v in range(u, n)]
        for combo in itertools.combinations_with_replacement(slots, n_edges):
            deg = [0] * n
            for u, v in combo:
                deg[u] += 1
                deg[v] += 1
            if min(deg) < 3:
                continue
            try:
                X = FiniteGraph(n, tuple(combo))
            except ValueError:
                continue
            key = X.canonical_form()
            if key not in seen:
                seen.add(key)
                out.append(X)
    return out


def subdivide(X: FiniteGraph) -> FiniteGraph:
    """Insert a midpoint vertex on every edge."""
    n = X.n_vertices
    edges = []
    for i, (u, v) in enumerate(X.edges):
        edges.append((u, n + i))
        edges.append((n + i, v))
    return FiniteGraph(n + len(X.edges), tuple(edges))


# -- catalog ---------------------------------------------------------------------


@dataclass(frozen=True)
class CatalogEntry:
    graph: FiniteGraph
    isometry: GraphIsometry
    automorphism: FreeAutomorphism
    order: int
    fingerprint: OutInvariantFingerprint = field(compare=False, repr=False)


@dataclass
class Catalog:
    rank: int
    entries: list[CatalogEntry]
    subdivisions: int
    graphs: int
    unresolved_pairs: int = 0

    def orders(self) -> list[int]:
        return sorted({e.order for e in self.entries})


def finite_order_catalog(
    m: int,
    subdivisions: int = 1,
    budget: SearchBudget = SearchBudget(max_states=4000),
    config: FingerprintConfig = FingerprintConfig(),
) -> Catalog:
    """Outer classes induced by isometries of small graphs of rank m.

    Candidates are taken graph by graph (reduced graphs, then their
    subdivisions) and isometry by isometry; a candidate is kept unless
    out_conjugate shows it conjugate to an entry already kept.  A pair the
    search cannot decide is kept and counted in ``unresolved_pairs``.
    """
    if m < 1:
        raise ValueError("rank must be positive")
    graphs = reduced_graphs(m)
    level = graphs
    for _ in range(subdivisions):
        level = [subdivide(X) for X in level]
        graphs = graphs + level
    entries: list[CatalogEntry] = []
    unresolved = 0
    seen_maps: set[FreeAutomorphism] = set()
    for X in graphs:
        M = Marking.canonical(X)
        for sigma in enumerate_graph_isometries(X):
            phi = induced_outer_automorphism(X, sigma, M)
            if phi in seen_maps:
                continue
            seen_maps.add(phi)
            cert = outer_order(phi, sigma.order())
            if not isinstance(cert, OuterOrderCertificate):  # pragma: no cover
                raise AssertionError("isometry induced an automorphism of unexpected order")
            fp = fingerprint(phi, config)
            duplicate = False
            for entry in entries:
                if entry.order != cert.order or entry.fingerprint != fp:
                    continue
                verdict = out_conjugate(entry.automorphism, phi, budget, config)
                if isinstance(verdict, Conjugate):
                    duplicate = True
                    break
                if not isinstance(verdict, Distinguished):
                    unresolved += 1
            if not duplicate:
                entries.append(CatalogEntry(X, sigma, phi, cert.order, fp))
    return Catalog(m, entries, subdivisions, len(graphs), unresolved)


@dataclass(frozen=True)
class Realization:
    graph: FiniteGraph
    isometry: GraphIsometry
    conjugator: FreeAutomorphism
    entry: CatalogEntry


def realize_search(
    phi: FreeAutomorphism,
    catalog: Catalog | None = None,
    budget: SearchBudget = SearchBudget(),
    config: FingerprintConfig = FingerprintConfig(),
) -> Realization | None:
    """Find a catalog entry and theta with [theta phi theta^-1] equal to its class."""
    cert = outer_order(phi, config.order_bound)
    if not isinstance(cert, OuterOrderCertificate):
        raise ValueError("realize_search needs a certified finite outer order")
    if catalog is None:
        catalog = finite_order_catalog(phi.rank, config=config)
    fp = fingerprint(phi, config)
    for entry in catalog.entries:
        if entry.order != cert.order or entry.fingerprint != fp:
            continue
        verdict = out_conjugate(phi, entry.automorphism, budget, config)
        if isinstance(verdict, Conjugate):
            theta = verdict.witness
            check = compose(compose(compose(theta, phi), theta.inverse()), entry.automorphism.inverse())
            if is_inner(check) is not None:
                return Realization(entry.graph, entry.isometry, theta, entry)
    return None


# -- text formats ----------------------------------------------------------------

_EDGE = re.compile(r"^E\s+(\d+)\s*:\s*(\d+)\s+(\d+)$")


def parse_graph(text: str) -> FiniteGraph:
    """``V n`` then ``E i: u v`` lines with i = 0, 1, 2, ... in order."""
    n = None
    edges = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if n is None:
            parts = line.split()
            if len(parts) != 2 or parts[0] != "V" or not parts[1].isdigit():
                raise MalformedInput("expected 'V <count>'", lineno, 1)
            n = int(parts[1])
            continue
        match = _EDGE.match(line)
        if not match:
            raise MalformedInput("expected 'E <i>: <u> <v>'", lineno, 1)
        i, u, v = map(int, match.groups())
        if i != len(edges):
            raise MalformedInput(f"expected edge {len(edges)}, got {i}", lineno, 3)
        edges.append((u, v))
    if n is None:
        raise MalformedInput("missing 'V' line")
    try:
        return FiniteGraph(n, tuple(edges))
    except ValueError as exc:
        raise MalformedInput(str(exc)) from None


def format_graph(X: FiniteGraph) -> str:
    lines = [f"V {X.n_vertices}"]
    lines += [f"E {i}: {u} {v}" for i, (u, v) in enumerate(X.edges)]
    return "\n".join(lines) + "\n"


def parse_isometry(text: str, X: FiniteGraph) -> GraphIsometry:
    rows = [ln.split("#", 1)[0].strip() for ln in text.splitlines()]
    rows = [r for r in rows if r]
    if len(rows) != 2:
        raise MalformedInput("an isometry is two permutation lines")
    try:
        sigma = GraphIsometry(tuple(map(int, rows[0].split())), tuple(map(int, rows[1].split())))
        sigma.check(X)
    except ValueError as exc:
        raise MalformedInput(str(exc)) from None
    return sigma


def format_isometry(sigma: GraphIsometry) -> str:
    return " ".join(map(str, sigma.vertex_perm)) + "\n" + " ".join(map(str, sigma.half_edge_perm)) + "\n"


CATALOG_HEADER = "freebycyclic-catalog 1"


def format_catalog(cat: Catalog) -> str:
    lines = [
        CATALOG_HEADER,
        f"rank {cat.rank}",
        f"bounds reduced-graphs subdivisions={cat.subdivisions} graphs={cat.graphs}",
        f"orders {' '.join(map(str, cat.orders()))}",
        f"entries {len(cat.entries)}",
    ]
    for i, e in enumerate(cat.entries):
        edges = " ".join(f"{u}-{v}" for u, v in e.graph.edges)
        images = " ".join(str(w) for w in e.automorphism.images)
        lines.append(f"entry {i} order {e.order} charpoly {e.fingerprint.char_poly_str()}")
        lines.append(f"  graph V={e.graph.n_vertices} {edges}")
        lines.append(f"  isometry {' '.join(map(str, e.isometry.half_edge_perm))}")
        lines.append(f"  images {images}")
    lines.append(f"unresolved-pairs {cat.unresolved_pairs}")
    return "\n".join(lines) + "\n"
