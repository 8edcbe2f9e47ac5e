import numpy as np
import pytest

from freebycyclic import _kernels as K
from freebycyclic.finite_groups import cyclic, dihedral, quaternion, symmetric

GROUPS = [cyclic(5), dihedral(4), quaternion(), symmetric(3), symmetric(4)]


def _pairs(name):
    return getattr(K, name + "_np"), getattr(K, name + "_nb")


@pytest.fixture(params=GROUPS, ids=lambda g: g.name)
def group(request):
    return request.param


def test_eval_words_agree(group):
    rng = np.random.default_rng(0)
    images = rng.integers(0, group.order, size=(50, 3)).astype(np.int64)
    letters = rng.choice([1, -1, 2, -2, 3, -3], size=20).astype(np.int64)
    np_fn, nb_fn = _pairs("eval_words")
    assert (np_fn(group.table, group.inverse, images, letters) == nb_fn(group.table, group.inverse, images, letters)).all()


def test_generated_sizes_agree(group):
    rng = np.random.default_rng(1)
    tuples = rng.integers(0, group.order, size=(40, 2)).astype(np.int64)
    np_fn, nb_fn = _pairs("generated_sizes")
    assert (np_fn(group.table, tuples) == nb_fn(group.table, tuples)).all()


def test_conjugacy_labels_and_associativity_agree(group):
    a, b = _pairs("conjugacy_labels")
    assert (a(group.table, group.inverse) == b(group.table, group.inverse)).all()
    a, b = _pairs("is_associative")
    assert a(group.table) and b(group.table)


def test_associativity_detects_broken_table():
    bad = cyclic(4).table.copy()
    bad[2, 3], bad[3, 2] = 3, 3
    a, b = _pairs("is_associative")
    assert not a(bad) and not b(bad)


def test_bfs_and_extend_hom_agree(group):
    gens = np.asarray(group.generating_set, dtype=np.int64)
    a, b = _pairs("bfs_order")
    assert (a(group.table, gens) == b(group.table, gens)).all()
    a, b = _pairs("extend_hom")
    for imgs in [gens, gens[::-1].copy(), np.zeros_like(gens)]:
        assert (a(group.table, gens, imgs) == b(group.table, gens, imgs)).all()


def test_semidirect_table_agree():
    base = cyclic(3)
    beta = np.array([0, 2, 1], dtype=np.int64)
    powers = np.array([np.arange(3), beta], dtype=np.int64)
    a, b = _pairs("semidirect_table")
    for n in (2, 4):
        assert (a(base.table, powers, n) == b(base.table, powers, n)).all()


def test_backend_switch():
    old = K.backend()
    try:
        for name in ("numpy", "numba"):
            K.set_backend(name)
            assert K.backend() == name
            g = dihedral(3)
            assert g.check_axioms()
        with pytest.raises(ValueError):
            K.set_backend("fortran")
    finally:
        K.set_backend(old)
