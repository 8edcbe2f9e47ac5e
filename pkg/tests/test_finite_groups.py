import numpy as np
import pytest

from freebycyclic.finite_groups import (
    FiniteGroupTable,
    alternating,
    cyclic,
    dihedral,
    direct_product,
    library,
    quaternion,
    semidirect,
    symmetric,
)


@pytest.mark.parametrize(
    "make, order, abelian",
    [
        (lambda: cyclic(6), 6, True),
        (lambda: dihedral(4), 8, False),
        (lambda: quaternion(), 8, False),
        (lambda: symmetric(3), 6, False),
        (lambda: alternating(4), 12, False),
        (lambda: direct_product(cyclic(2), cyclic(2)), 4, True),
    ],
)
def test_library_groups(make, order, abelian):
    g = make()
    assert g.order == order
    assert g.check_axioms()
    assert g.is_abelian() == abelian
    assert g.generated(list(g.generating_set)) == order


def test_centers_and_automorphisms():
    assert len(dihedral(4).center) == 2
    assert len(quaternion().center) == 2
    assert len(symmetric(3).center) == 1
    assert len(symmetric(3).automorphisms) == 6
    assert len(dihedral(4).automorphisms) == 8
    assert len(cyclic(5).automorphisms) == 4


def test_outer_order_and_inner():
    g = cyclic(4)
    neg = g.inverse.copy()
    assert not g.is_inner_map(neg)
    assert g.outer_order(neg) == 2
    s3 = symmetric(3)
    assert all(s3.is_inner_map(f) for f in s3.automorphisms)


def test_conjugacy():
    s3 = symmetric(3)
    transpositions = [a for a in range(6) if s3.element_order(a) == 2]
    for a in transpositions:
        for b in transpositions:
            h = s3.conjugator(a, b)
            assert h is not None
            assert s3.mul(s3.mul(s3.inv(h), a), h) == b


def test_semidirect():
    g = semidirect(cyclic(3), np.array([0, 2, 1]), 2)
    assert g.order == 6 and g.check_axioms() and not g.is_abelian()
    with pytest.raises(ValueError):
        semidirect(cyclic(3), np.array([0, 2, 1]), 3)


def test_marked_key_detects_kernel():
    c4 = cyclic(4)
    assert c4.marked_key([1]) == c4.marked_key([1])
    # 1 and 3 both generate: the same kernel 4Z viewed from Z
    assert c4.marked_key([1]) == c4.marked_key([3])
    assert c4.marked_key([1, 0]) != c4.marked_key([0, 1])


def test_rejects_bad_tables():
    with pytest.raises(ValueError):
        FiniteGroupTable(np.array([[1, 0], [0, 1]]))
    with pytest.raises(ValueError):
        FiniteGroupTable(np.zeros((2, 3), dtype=int))


def test_library_sorted_and_capped():
    orders = [g.order for g in library(24)]
    assert orders == sorted(orders)
    assert max(orders) == 24
    assert all(g.order <= 8 for g in library(8))
