"""Versioned text artifacts for verdicts, re-checkable without the search code.

Layout: a header line, ``kind <name>``, then ``key value`` lines.  A group
table is written as ``table <n>`` followed by n rows.  Words use the usual
grammar with ``1`` for the empty word; automorphisms are written as their
generator images separated by spaces.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .automorphisms import (
    FingerprintConfig,
    FreeAutomorphism,
    OuterOrderCertificate,
    compose,
    fingerprint,
    is_inner,
    make_automorphism,
)
from .finite_groups import FiniteGroupTable
from .words import MalformedInput, parse_word

__all__ = [
    "HEADER",
    "Witness",
    "WitnessError",
    "parse_witness",
    "verify_witness",
    "order_witness",
    "torus_conjugacy_witness",
    "out_conjugacy_witness",
    "whitehead_witness",
    "congruence_witness",
    "catalog_witness",
]

HEADER = "freebycyclic-witness 1"


class WitnessError(ValueError):
    pass


@dataclass
class Witness:
    kind: str
    items: list[tuple[str, str]] = field(default_factory=list)
    tables: dict[str, FiniteGroupTable] = field(default_factory=dict)

    def add(self, key: str, value) -> "Witness":
        self.items.append((key, str(value)))
        return self

    def get(self, key: str) -> str:
        for k, v in self.items:
            if k == key:
                return v
        raise WitnessError(f"missing field {key!r}")

    def get_all(self, key: str) -> list[str]:
        return [v for k, v in self.items if k == key]

    def render(self) -> str:
        lines = [HEADER, f"kind {self.kind}"]
        for k, v in self.items:
            if k.startswith("table") and k in self.tables:
                t = self.tables[k].table
                lines.append(f"{k} {t.shape[0]}")
                lines += [" ".join(map(str, row)) for row in t.tolist()]
            else:
                lines.append(f"{k} {v}")
        return "\n".join(lines) + "\n"


def parse_witness(text: str) -> Witness:
    lines = text.splitlines()
    if not lines or lines[0].strip() != HEADER:
        raise MalformedInput(f"expected header {HEADER!r}", 1, 1)
    if len(lines) < 2 or not lines[1].startswith("kind "):
        raise MalformedInput("expected 'kind <name>'", 2, 1)
    w = Witness(lines[1][5:].strip())
    i = 2
    while i < len(lines):
        line = lines[i]
        i += 1
        if not line.strip():
            continue
        key, _, value = line.partition(" ")
        if key.startswith("table"):
            try:
                n = int(value)
                rows = [list(map(int, lines[i + r].split())) for r in range(n)]
                w.tables[key] = FiniteGroupTable(np.asarray(rows, dtype=np.int64), key)
            except (ValueError, IndexError) as exc:
                raise MalformedInput(f"bad table: {exc}", i, 1) from None
            i += n
        w.items.append((key, value))
    return w


# -- encoders ----------------------------------------------------------------------


def _auto(phi: FreeAutomorphism) -> str:
    return " ".join(str(w) for w in phi.images)


def _read_auto(text: str, rank: int) -> FreeAutomorphism:
    return make_automorphism([parse_word(p, rank) for p in text.split()], rank)


def order_witness(phi: FreeAutomorphism, cert: OuterOrderCertificate) -> Witness:
    w = Witness("order")
    w.add("rank", phi.rank).add("automorphism", _auto(phi))
    return w.add("order", cert.order).add("f0", cert.f0)


def _torus_header(w: Witness, T) -> None:
    w.add("rank", T.rank).add("monodromy", _auto(T.monodromy))
    w.add("order", T.k).add("f0", T.f0)


def torus_conjugacy_witness(T, x, y, verdict) -> Witness:
    from .torus import format_element
    from .verdicts import Conjugate

    if isinstance(verdict, Conjugate):
        w = Witness("torus-conjugate")
        _torus_header(w, T)
        w.add("x", format_element(x)).add("y", format_element(y))
        return w.add("conjugator", format_element(verdict.witness))
    cert = verdict.certificate
    w = Witness("torus-not-conjugate")
    _torus_header(w, T)
    w.add("x", format_element(x)).add("y", format_element(y)).add("certificate", cert.kind)
    if cert.kind == "quotient":
        q = cert.quotient
        w.tables["table"] = q.target
        w.add("table", q.order).add("images", " ".join(map(str, q.images)))
    return w


def out_conjugacy_witness(phi, psi, verdict) -> Witness:
    from .verdicts import Conjugate

    if isinstance(verdict, Conjugate):
        w = Witness("out-conjugate")
        w.add("rank", phi.rank).add("phi", _auto(phi)).add("psi", _auto(psi))
        return w.add("theta", _auto(verdict.witness))
    w = Witness("out-distinguished")
    w.add("rank", phi.rank).add("phi", _auto(phi)).add("psi", _auto(psi))
    return w.add("invariant", verdict.invariant)


def whitehead_witness(T1, T2, verdict) -> Witness:
    from .verdicts import Equivalent

    kind = "whitehead-equivalent" if isinstance(verdict, Equivalent) else "whitehead-inequivalent"
    w = Witness(kind)
    w.add("rank", T1.rank).add("left", T1).add("right", T2)
    if isinstance(verdict, Equivalent):
        w.add("alpha", _auto(verdict.witness))
    return w


def congruence_witness(T, autos: dict, cw) -> Witness:
    from .torus import format_element

    w = Witness("congruence")
    _torus_header(w, T)
    for name in sorted(autos):
        psi = autos[name]
        w.add("automorphism", f"{name} " + ", ".join(format_element(e) for e in psi.images()))
    if cw.quotient is not None:
        w.tables["table"] = cw.quotient.target
        w.add("table", cw.quotient.order).add("images", " ".join(map(str, cw.quotient.images)))
    for ev in cw.separated:
        w.add("separated", f"{ev.automorphism_id} {' '.join(map(str, ev.induced))}")
    for name, reason in cw.unseparated:
        w.add("unseparated", f"{name} {reason}")
    return w


def catalog_witness(cat) -> Witness:
    w = Witness("catalog")
    w.add("rank", cat.rank).add("subdivisions", cat.subdivisions)
    w.add("orders", " ".join(map(str, cat.orders())))
    for e in cat.entries:
        edges = " ".join(f"{u}-{v}" for u, v in e.graph.edges)
        w.add("entry", f"{e.order} | {e.graph.n_vertices} {edges} | "
              f"{' '.join(map(str, e.isometry.half_edge_perm))} | {_auto(e.automorphism)}")
    return w


# -- verification -------------------------------------------------------------------


def _torus(w: Witness):
    from .torus import MappingTorus

    rank = int(w.get("rank"))
    phi = _read_auto(w.get("monodromy"), rank)
    cert = OuterOrderCertificate(int(w.get("order")), parse_word(w.get("f0"), rank))
    return MappingTorus(phi, cert)


def _verify_quotient(w: Witness, T):
    from .congruence import FiniteQuotient

    G = w.tables.get("table")
    if G is None or not G.check_axioms():
        raise WitnessError("quotient table fails the group axioms")
    images = tuple(int(v) for v in w.get("images").split())
    q = FiniteQuotient(T, G, images)
    if not q.verify_relations():
        raise WitnessError("quotient images violate the torus relations or do not generate")
    return q


def verify_witness(text: str) -> str:
    """Re-check a witness; returns its kind, raises WitnessError on failure."""
    w = parse_witness(text)
    check = _CHECKS.get(w.kind)
    if check is None:
        raise WitnessError(f"unknown witness kind {w.kind!r}")
    check(w)
    return w.kind


def _check_order(w: Witness) -> None:
    rank = int(w.get("rank"))
    phi = _read_auto(w.get("automorphism"), rank)
    cert = OuterOrderCertificate(int(w.get("order")), parse_word(w.get("f0"), rank))
    if not cert.verify(phi):
        raise WitnessError("order certificate does not verify")


def _check_torus_conjugate(w: Witness) -> None:
    from .torus import parse_element, torus_conj

    T = _torus(w)
    x, y, c = (parse_element(w.get(k), T.rank) for k in ("x", "y", "conjugator"))
    if torus_conj(x, c, T) != y:
        raise WitnessError("conjugator does not carry x to y")


def _check_torus_not_conjugate(w: Witness) -> None:
    from .torus import NonConjugacyCertificate, parse_element

    T = _torus(w)
    x, y = parse_element(w.get("x"), T.rank), parse_element(w.get("y"), T.rank)
    kind = w.get("certificate")
    q = _verify_quotient(w, T) if kind == "quotient" else None
    if not NonConjugacyCertificate(kind, "", q).verify(x, y, T):
        raise WitnessError(f"{kind} certificate does not verify")


def _check_out_conjugate(w: Witness) -> None:
    rank = int(w.get("rank"))
    phi, psi, theta = (_read_auto(w.get(k), rank) for k in ("phi", "psi", "theta"))
    if is_inner(compose(compose(compose(theta, phi), theta.inverse()), psi.inverse())) is None:
        raise WitnessError("theta does not conjugate phi to psi in Out")


def _check_out_distinguished(w: Witness) -> None:
    rank = int(w.get("rank"))
    phi, psi = _read_auto(w.get("phi"), rank), _read_auto(w.get("psi"), rank)
    inv = w.get("invariant")
    fa, fb = fingerprint(phi, FingerprintConfig()), fingerprint(psi, FingerprintConfig())
    if inv not in fa.FIELDS or getattr(fa, inv) == getattr(fb, inv):
        raise WitnessError(f"invariant {inv!r} does not distinguish")


def _check_whitehead(w: Witness) -> None:
    from .whitehead import orbit_equivalent, parse_tuple

    rank = int(w.get("rank"))
    left, right = parse_tuple(w.get("left"), rank), parse_tuple(w.get("right"), rank)
    if w.kind == "whitehead-equivalent":
        alpha = _read_auto(w.get("alpha"), rank)
        if left.apply(alpha) != right:
            raise WitnessError("alpha does not carry the left tuple to the right one")
        return
    from .verdicts import Inequivalent

    if not isinstance(orbit_equivalent(left, right), Inequivalent):
        raise WitnessError("recomputation does not confirm inequivalence")


def _check_congruence(w: Witness) -> None:
    from .torus import TorusAutomorphism, parse_element

    T = _torus(w)
    autos = {}
    for line in w.get_all("automorphism"):
        name, _, rest = line.partition(" ")
        elems = [parse_element(p.strip(), T.rank) for p in rest.split(",")]
        autos[name] = TorusAutomorphism(T, elems[:-1], elems[-1])
    separated = w.get_all("separated")
    if not separated:
        return
    q = _verify_quotient(w, T)
    G = q.target
    for line in separated:
        name, *vals = line.split()
        induced = tuple(int(v) for v in vals)
        psi = autos[name]
        if tuple(q.image(e) for e in psi.images()) != induced:
            raise WitnessError(f"{name}: recorded images do not match")
        fmap = G.extend_hom(q.images, induced)
        if fmap is None:
            raise WitnessError(f"{name}: induced map is not well defined")
        if G.is_inner_map(fmap):
            raise WitnessError(f"{name}: induced map is inner")


def _check_catalog(w: Witness) -> None:
    from .automorphisms import outer_order
    from .realization import FiniteGraph, GraphIsometry, Marking, induced_outer_automorphism

    rank = int(w.get("rank"))
    orders = set()
    for line in w.get_all("entry"):
        order_s, graph_s, iso_s, auto_s = (p.strip() for p in line.split("|"))
        n, *edges = graph_s.split()
        X = FiniteGraph(int(n), tuple(tuple(map(int, e.split("-"))) for e in edges))
        perm = tuple(map(int, iso_s.split()))
        vperm = tuple(X.origin(perm[X.outgoing(v)[0]]) for v in range(X.n_vertices))
        sigma = GraphIsometry(vperm, perm)
        sigma.check(X)
        phi = induced_outer_automorphism(X, sigma, Marking.canonical(X))
        if phi != _read_auto(auto_s, rank):
            raise WitnessError("entry automorphism is not induced by its isometry")
        cert = outer_order(phi, sigma.order())
        if not isinstance(cert, OuterOrderCertificate) or cert.order != int(order_s):
            raise WitnessError("entry order does not verify")
        orders.add(cert.order)
    if sorted(orders) != [int(v) for v in w.get("orders").split()]:
        raise WitnessError("orders line does not match the entries")


_CHECKS = {
    "order": _check_order,
    "torus-conjugate": _check_torus_conjugate,
    "torus-not-conjugate": _check_torus_not_conjugate,
    "out-conjugate": _check_out_conjugate,
    "out-distinguished": _check_out_distinguished,
    "whitehead-equivalent": _check_whitehead,
    "whitehead-inequivalent": _check_whitehead,
    "congruence": _check_congruence,
    "catalog": _check_catalog,
}
