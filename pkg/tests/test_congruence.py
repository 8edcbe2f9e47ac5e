import random

import pytest

from freebycyclic.automorphisms import make_automorphism
from freebycyclic.congruence import (
    CenterAction,
    FiniteQuotient,
    center_cubed_quotient,
    detect_center_inverting,
    enumerate_finite_quotients,
    klein_bottle_torus,
    verify_separation,
    z_rtimes_z_congruence,
)
from freebycyclic.finite_groups import cyclic
from freebycyclic.torus import MappingTorus, TorusAutomorphism, TorusElement
from freebycyclic.words import parse_word


@pytest.fixture(scope="module")
def Ts(swap):
    return MappingTorus(swap)


@pytest.fixture(scope="module")
def quotients48(Ts):
    return list(enumerate_finite_quotients(Ts, 48))


@pytest.fixture(scope="module")
def psi(Ts):
    return TorusAutomorphism(Ts, ["a", "b"], "t^-1")


def test_z_rtimes_z_congruence():
    cw = z_rtimes_z_congruence()
    assert cw.quotient.order == 4 and cw.quotient.images == (0, 1)
    (ev,) = cw.separated
    assert ev.automorphism_id == "alpha" and ev.induced == (0, 3)
    T = klein_bottle_torus()
    alpha = TorusAutomorphism(T, ["a"], "t^-1")
    assert cw.verify({"alpha": alpha})
    fmap = cw.quotient.induced_map(alpha)
    assert fmap[1] == 3 and not cw.quotient.target.is_inner_map(fmap)


def test_z_rtimes_z_identity_and_beta():
    T = klein_bottle_torus()
    q = FiniteQuotient(T, cyclic(4), (0, 1))
    cw = verify_separation([q], [("id", TorusAutomorphism.identity(T))], T)
    assert cw.quotient is None and cw.unseparated == [("id", "not torsion-nontrivial")]
    # beta: t -> t f has order 2 in Out, since beta^2 = ad_f; Z/4 misses it
    beta = TorusAutomorphism(T, ["a"], "t^1 a")
    assert beta.outer_order() == 2
    cw = verify_separation([q], [("beta", beta)], T)
    assert cw.unseparated == [("beta", "no quotient separates it")]
    qs = list(enumerate_finite_quotients(T, 8))
    cw = verify_separation(qs, [("beta", beta)], T)
    G = cw.quotient.target
    # the Klein four-group, not Z/4
    assert cw.separated and G.order == 4 and all(G.element_order(g) <= 2 for g in range(4))
    alpha = TorusAutomorphism(T, ["a"], "t^-1")
    both = verify_separation(qs, [("alpha", alpha), ("beta", beta)], T)
    assert len(both.separated) == 2 and both.quotient.order == 8
    assert both.verify({"alpha": alpha, "beta": beta})


def test_detect_center_inverting(Ts, psi):
    assert detect_center_inverting(psi, Ts) is CenterAction.INVERTING
    assert detect_center_inverting(TorusAutomorphism.identity(Ts), Ts) is CenterAction.FIXING
    ad_t = TorusAutomorphism.conjugation(Ts, Ts.t())
    assert detect_center_inverting(ad_t, Ts) is CenterAction.FIXING


def test_enumeration_basics(Ts, quotients48):
    assert quotients48[0].order == 1
    assert all(q.verify_relations() for q in quotients48)
    keys = [q.kernel_key() for q in quotients48]
    assert len(keys) == len(set(keys))
    orders = [q.order for q in quotients48]
    assert orders == sorted(orders) and max(orders) <= 48
    two = [q for q in quotients48 if q.order == 2]
    assert any(q.images[0] == q.images[1] == 0 and q.images[2] == 1 for q in two)
    with pytest.raises(ValueError):
        next(enumerate_finite_quotients(Ts, 0))


def test_dihedral_quotient_of_order_8(quotients48):
    def is_d8(G):
        involutions = sum(1 for a in range(G.order) if G.element_order(a) == 2)
        return G.order == 8 and not G.is_abelian() and involutions == 5

    assert any(is_d8(q.target) for q in quotients48)


def test_verify_separation_swap(Ts, psi, quotients48):
    cw = verify_separation(quotients48, [("psi", psi)], Ts)
    assert cw.quotient is not None and cw.quotient.order <= 48
    assert cw.verify({"psi": psi})
    cw2 = verify_separation(quotients48, [("id", TorusAutomorphism.identity(Ts))], Ts)
    assert cw2.unseparated == [("id", "not torsion-nontrivial")]


def test_verify_separation_stable_under_reordering(Ts, psi, quotients48):
    base = verify_separation(quotients48, [("psi", psi)], Ts)
    rng = random.Random(0)
    for _ in range(3):
        shuffled = quotients48[:]
        rng.shuffle(shuffled)
        other = verify_separation(shuffled, [("psi", psi)], Ts)
        assert other.quotient is base.quotient
        assert other.separated == base.separated


def test_central_images_are_alone_in_their_class(Ts, quotients48):
    z = TorusElement(2, parse_word("1", 2))
    for q in quotients48[:40]:
        G = q.target
        c = q.image(z)
        assert all(G.mul(G.inv(h), G.mul(c, h)) == c for h in range(G.order))


def test_center_cubed_quotient(Ts, psi, swap):
    C = center_cubed_quotient(Ts)
    assert C.modulus == 6 and C.element_order(C.x_bar()) == 3
    assert C.x_bar() == C.project(TorusElement(2, parse_word("1", 2)))
    ident = TorusAutomorphism.identity(Ts)
    p = C.project(TorusElement(1, parse_word("ab", 2)))
    assert C.induced(ident, p) == p
    assert C.induced(psi, C.x_bar()) == C.invert(C.x_bar()) != C.x_bar()
    Tf = MappingTorus(make_automorphism(["a", "Aba"]))
    Cf = center_cubed_quotient(Tf)
    assert Cf.element_order(Cf.x_bar()) == 3
    with pytest.raises(ValueError):
        center_cubed_quotient(klein_bottle_torus())


def test_center_cubed_fibre_embeds(Ts):
    from freebycyclic.words import words_up_to

    C = center_cubed_quotient(Ts)
    for f in words_up_to(2, 4):
        if f:
            assert C.project(TorusElement(0, f)) != C.identity()
