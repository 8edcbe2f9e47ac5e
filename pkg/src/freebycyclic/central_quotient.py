"""The quotient Q of a mapping torus by its center <t^k f0>.

Normal form: since t^k = x f0^-1 with x central, a lift t^(qk + r) f equals
t^r f0^-q f modulo the center, so each element has a unique representative
t^r f with r in [0, k).
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .torus import (
    ConjugacyBudget,
    MappingTorus,
    NonConjugacyCertificate,
    TorusElement,
    torus_conjugate,
    torus_multiply,
)
from .verdicts import Conjugate, NotConjugate
from .words import Word, multiply, words_up_to

__all__ = [
    "QElement",
    "TorsionReport",
    "q_project",
    "q_lift",
    "q_multiply",
    "q_invert",
    "q_conjugate",
    "q_torsion_probe",
]


@dataclass(frozen=True)
class QElement:
    residue: int
    fibre: Word

    def __str__(self) -> str:
        return f"[t^{self.residue} {self.fibre}]"


def _require_k(T: MappingTorus) -> None:
    if T.k < 2:
        raise ValueError("the central quotient needs outer order k > 1")


def q_project(x: TorusElement, T: MappingTorus) -> QElement:
    _require_k(T)
    q, r = divmod(x.t_exp, T.k)
    fibre = x.fibre
    if q and T.f0:
        fibre = multiply(T.f0 ** (-q), fibre)
    return QElement(r, fibre)


def q_lift(p: QElement) -> TorusElement:
    return TorusElement(p.residue, p.fibre)


def q_identity(T: MappingTorus) -> QElement:
    return QElement(0, Word.empty(T.rank))


def q_multiply(p: QElement, q: QElement, T: MappingTorus) -> QElement:
    return q_project(torus_multiply(q_lift(p), q_lift(q), T), T)


def q_invert(p: QElement, T: MappingTorus) -> QElement:
    from .torus import torus_invert

    return q_project(torus_invert(q_lift(p), T), T)


def q_conjugate(p: QElement, q: QElement, T: MappingTorus, budget: ConjugacyBudget = ConjugacyBudget()):
    """Conjugacy in Q.

    Conjugation preserves t-exponents, so canonical lifts are conjugate in Q
    exactly when they are conjugate in T (the central correction x^r must
    have r = 0).  The decision is delegated to torus_conjugate.
    """
    _require_k(T)
    if p.residue != q.residue:
        return NotConjugate(NonConjugacyCertificate("exponent", f"residues {p.residue} != {q.residue}"))
    verdict = torus_conjugate(q_lift(p), q_lift(q), T, budget)
    if isinstance(verdict, Conjugate):
        return Conjugate(q_project(verdict.witness, T))
    return verdict


@dataclass
class TorsionReport:
    """Torsion found among enumerated elements, and any central ones (which would be a bug)."""

    torsion: list[tuple[QElement, int]] = field(default_factory=list)
    central: list[QElement] = field(default_factory=list)
    examined: int = 0

    @property
    def ok(self) -> bool:
        return not self.central


def q_element_order(p: QElement, T: MappingTorus) -> int | None:
    """Order of p, or None when infinite.

    A finite subgroup of Q meets the fibre trivially, so it embeds in Z/k and
    any torsion order divides k; checking powers up to k is exact.
    """
    e = q_identity(T)
    cur = p
    for j in range(1, T.k + 1):
        if cur == e:
            return j
        cur = q_multiply(cur, p, T)
    return None


def q_torsion_probe(T: MappingTorus, length_bound: int) -> TorsionReport:
    _require_k(T)
    gens = [q_project(g, T) for g in T.generators()]
    report = TorsionReport()
    e = q_identity(T)
    for r in range(T.k):
        for f in words_up_to(T.rank, length_bound):
            p = QElement(r, f)
            report.examined += 1
            if p == e:
                continue
            order = q_element_order(p, T)
            if order is not None:
                report.torsion.append((p, order))
            if all(q_multiply(p, g, T) == q_multiply(g, p, T) for g in gens):
                report.central.append(p)
    return report
