"""Free groups, their finite-order outer automorphisms, and mapping tori."""

from .automorphisms import (
    FreeAutomorphism,
    OuterOrderCertificate,
    aut_conjugate,
    compose,
    fingerprint,
    is_inner,
    make_automorphism,
    out_conjugate,
    outer_order,
    parse_automorphism,
)
from .torus import MappingTorus, TorusElement, center, torus_conjugate
from .verdicts import Conjugate, Distinguished, Equivalent, Inequivalent, NotConjugate, Unresolved
from .words import Word, parse_word

__version__ = "0.1.0"

__all__ = [
    "Word",
    "parse_word",
    "FreeAutomorphism",
    "OuterOrderCertificate",
    "make_automorphism",
    "parse_automorphism",
    "compose",
    "is_inner",
    "outer_order",
    "fingerprint",
    "out_conjugate",
    "aut_conjugate",
    "MappingTorus",
    "TorusElement",
    "center",
    "torus_conjugate",
    "Conjugate",
    "NotConjugate",
    "Distinguished",
    "Equivalent",
    "Inequivalent",
    "Unresolved",
]
