import pytest

from freebycyclic.automorphisms import compose, identity, inner, is_inner, make_automorphism, outer_order
from freebycyclic.realization import (
    CATALOG_HEADER,
    FiniteGraph,
    GraphIsometry,
    Marking,
    enumerate_graph_isometries,
    finite_order_catalog,
    format_catalog,
    format_graph,
    format_isometry,
    induced_outer_automorphism,
    omega_homomorphism_check,
    parse_graph,
    parse_isometry,
    realize_search,
    reduced_graphs,
    rose,
    subdivide,
    theta,
)
from freebycyclic.words import parse_word


def walks(X, start, end, max_len):
    """All half-edge walks start -> end with at most max_len steps."""
    out = []
    stack = [(start, ())]
    while stack:
        v, path = stack.pop()
        if v == end:
            out.append(list(path))
        if len(path) < max_len:
            for h in X.outgoing(v):
                stack.append((X.terminus(h), path + (h,)))
    return out


@pytest.fixture(scope="module")
def cat2():
    return finite_order_catalog(2)


def _find(X, images):
    M = Marking.canonical(X)
    target = make_automorphism(images)
    for s in enumerate_graph_isometries(X):
        if induced_outer_automorphism(X, s, M) == target:
            return s
    raise AssertionError(f"no isometry induces {images}")


def test_induced_examples():
    R = rose(2)
    M = Marking.canonical(R)
    assert induced_outer_automorphism(R, GraphIsometry.identity(R), M) == identity(2)
    swap = _find(R, ["b", "a"])
    assert swap.vertex_perm == (0,)
    Th = theta()
    rot = _find(Th, ["bA", "A"])
    phi = induced_outer_automorphism(Th, rot, Marking.canonical(Th))
    assert outer_order(phi).order == 3 and rot.order() == 3


def test_induced_rejects_bad_path():
    Th = theta()
    M = Marking.canonical(Th)
    rot = _find(Th, ["bA", "A"])
    with pytest.raises(ValueError):
        induced_outer_automorphism(Th, rot, M, [0, 0])


def test_omega_examples():
    R, Th = rose(2), theta()
    MR, MT = Marking.canonical(R), Marking.canonical(Th)
    ident = GraphIsometry.identity(R)
    assert omega_homomorphism_check(R, MR, ident, ident)
    swap = _find(R, ["b", "a"])
    assert omega_homomorphism_check(R, MR, swap, swap)
    sq = induced_outer_automorphism(R, swap.compose(swap), MR)
    assert is_inner(sq) is not None
    rot = _find(Th, ["bA", "A"])
    assert omega_homomorphism_check(Th, MT, rot, rot.compose(rot))


@pytest.mark.parametrize("X, count", [(rose(2), 8), (rose(1), 2), (theta(), 12)])
def test_isometry_counts(X, count):
    isos = enumerate_graph_isometries(X)
    assert len(isos) == count
    assert isos == enumerate_graph_isometries(X)
    for s in isos:
        s.check(X)


def test_catalog_m1():
    cat = finite_order_catalog(1)
    assert cat.orders() == [1, 2]
    assert len(cat.entries) == 2


def test_catalog_m2(cat2):
    assert cat2.orders() == [1, 2, 3, 4, 6]
    for e in cat2.entries:
        cert = outer_order(e.automorphism)
        assert cert.order == e.order == e.fingerprint.finite_order
        assert e.order <= len(enumerate_graph_isometries(e.graph))


def test_catalog_dedup_symmetric(cat2):
    from freebycyclic.automorphisms import out_conjugate
    from freebycyclic.verdicts import Conjugate

    entries = cat2.entries
    for a in entries:
        for b in entries:
            if a is b:
                continue
            assert not isinstance(out_conjugate(a.automorphism, b.automorphism), Conjugate)
            assert not isinstance(out_conjugate(b.automorphism, a.automorphism), Conjugate)


def test_realize_examples(cat2, swap, theta_rot):
    r = realize_search(swap, cat2)
    assert r is not None and r.graph == rose(2)
    r = realize_search(identity(2), cat2)
    assert r is not None and r.isometry.is_identity()
    r = realize_search(theta_rot, cat2)
    assert r is not None and r.graph.canonical_form() == theta().canonical_form()
    g = inner(parse_word("ab", 2))
    theta_map = make_automorphism(["ab", "b"])
    disguised = compose(g, compose(compose(theta_map, swap), theta_map.inverse()))
    r = realize_search(disguised, cat2)
    assert r is not None and r.entry.order == 2
    with pytest.raises(ValueError):
        realize_search(make_automorphism(["ab", "b"]), cat2)


def test_path_independence_and_orders(cat2):
    graphs = {e.graph.canonical_form(): e.graph for e in cat2.entries}
    for X in graphs.values():
        M = Marking.canonical(X)
        isos = enumerate_graph_isometries(X)
        for s in isos:
            base = induced_outer_automorphism(X, s, M)
            assert outer_order(base).order <= len(isos)
            for c in walks(X, M.basepoint, s.vertex_perm[M.basepoint], 3):
                other = induced_outer_automorphism(X, s, M, c)
                assert is_inner(compose(base, other.inverse())) is not None


def test_reduced_graphs_and_subdivision():
    g2 = reduced_graphs(2)
    assert all(X.betti == 2 for X in g2)
    assert all(min(X.valences()) >= 3 for X in g2)
    assert all(X.n_vertices <= 2 for X in g2)
    forms = {X.canonical_form() for X in g2}
    assert len(forms) == len(g2) == 3
    S = subdivide(theta())
    assert S.betti == 2 and S.n_vertices == 5


def test_graph_validation():
    with pytest.raises(ValueError):
        FiniteGraph(2, ((0, 0),))
    with pytest.raises(ValueError):
        FiniteGraph(1, ())


def test_text_formats(cat2):
    Th = theta()
    assert parse_graph(format_graph(Th)) == Th
    rot = _find(Th, ["bA", "A"])
    assert parse_isometry(format_isometry(rot), Th) == rot
    text = format_catalog(cat2)
    assert text.startswith(CATALOG_HEADER)
    assert "orders 1 2 3 4 6" in text
    with pytest.raises(ValueError):
        parse_graph("V 1\nE 0: 0 1\n")
