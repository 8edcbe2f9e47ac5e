"""Verdicts returned by the decision procedures.

Exit codes follow the CLI taxonomy: 0 decided-positive, 2 decided-negative,
3 unresolved.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any


@dataclass(frozen=True)
class Conjugate:
    witness: Any
    decided: bool = field(default=True, init=False, repr=False)
    exit_code: int = field(default=0, init=False, repr=False)


@dataclass(frozen=True)
class NotConjugate:
    certificate: Any
    decided: bool = field(default=True, init=False, repr=False)
    exit_code: int = field(default=2, init=False, repr=False)


@dataclass(frozen=True)
class Distinguished:
    invariant: str
    left: Any = None
    right: Any = None
    decided: bool = field(default=True, init=False, repr=False)
    exit_code: int = field(default=2, init=False, repr=False)


@dataclass(frozen=True)
class Equivalent:
    witness: Any
    decided: bool = field(default=True, init=False, repr=False)
    exit_code: int = field(default=0, init=False, repr=False)


@dataclass(frozen=True)
class Inequivalent:
    reason: str
    decided: bool = field(default=True, init=False, repr=False)
    exit_code: int = field(default=2, init=False, repr=False)


@dataclass(frozen=True)
class Unresolved:
    reason: str = "budget exhausted"
    decided: bool = field(default=False, init=False, repr=False)
    exit_code: int = field(default=3, init=False, repr=False)
