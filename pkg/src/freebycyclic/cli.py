"""Command-line entry point.

Exit codes: 0 decided positive, 2 decided negative, 3 unresolved, 1 input error.
"""

from __future__ import annotations

import argparse
import logging
import sys
from dataclasses import dataclass, field
from pathlib import Path

from .automorphisms import (
    DEFAULT_CEILING,
    OrderExceeded,
    OuterOrderCertificate,
    SearchBudget,
    out_conjugate,
    outer_order,
    parse_automorphism,
)
from .torus import (
    ConjugacyBudget,
    MappingTorus,
    NotFiniteOrder,
    TorusAutomorphism,
    center,
    format_conjugator,
    format_element,
    mwh_precheck,
    parse_element,
    torus_conjugate,
)
from .verdicts import Conjugate, Equivalent, Unresolved
from .words import MalformedInput, parse_letters

log = logging.getLogger("freebycyclic")

EXIT_POSITIVE, EXIT_INPUT, EXIT_NEGATIVE, EXIT_UNRESOLVED = 0, 1, 2, 3


@dataclass
class RunConfig:
    command: str
    inputs: list[str] = field(default_factory=list)
    bound: int = 64
    budget: int | None = None
    budget_ms: int | None = None
    max_order: int = 96
    seed: int = 0
    out: str | None = None
    ceiling: int = DEFAULT_CEILING

    def __post_init__(self):
        for name in ("bound", "max_order", "ceiling"):
            if getattr(self, name) < 1:
                raise ValueError(f"--{name.replace('_', '-')} must be positive")
        for name in ("budget", "budget_ms"):
            v = getattr(self, name)
            if v is not None and v < 1:
                raise ValueError(f"--{name.replace('_', '-')} must be positive")


def _read_auto(path: str):
    return parse_automorphism(Path(path).read_text())


def _torus(path: str, bound: int) -> MappingTorus:
    return MappingTorus(_read_auto(path), bound=bound)


def _emit(cfg: RunConfig, witness) -> None:
    if cfg.out and witness is not None:
        Path(cfg.out).write_text(witness.render())


def cmd_order(cfg: RunConfig) -> int:
    from .witness import order_witness

    phi = _read_auto(cfg.inputs[0])
    found = outer_order(phi, cfg.bound, cfg.ceiling)
    if isinstance(found, OuterOrderCertificate):
        print(f"order {found.order}, f0 = {found.f0}")
        _emit(cfg, order_witness(phi, found))
        return EXIT_POSITIVE
    if isinstance(found, OrderExceeded):
        print(f"exceeded at power {found.power} (image length {found.length})")
    else:
        print(f"absent up to bound {cfg.bound}")
    return EXIT_NEGATIVE


def cmd_center(cfg: RunConfig) -> int:
    phi = _read_auto(cfg.inputs[0])
    try:
        T = MappingTorus(phi, bound=cfg.bound)
    except NotFiniteOrder:
        print(f"absent up to bound {cfg.bound}")
        return EXIT_NEGATIVE
    print(format_element(center(T)))
    return EXIT_POSITIVE


def cmd_torus_conj(cfg: RunConfig) -> int:
    from .witness import torus_conjugacy_witness

    T = _torus(cfg.inputs[0], cfg.bound)
    x, y = parse_element(cfg.inputs[1], T.rank), parse_element(cfg.inputs[2], T.rank)
    budget = ConjugacyBudget(
        max_conjugator_length=cfg.budget or 8, max_quotient_order=cfg.max_order, time_ms=cfg.budget_ms
    )
    verdict = torus_conjugate(x, y, T, budget)
    if isinstance(verdict, Conjugate):
        print(f"CONJUGATE {format_conjugator(verdict.witness)}")
    elif isinstance(verdict, Unresolved):
        print(f"UNRESOLVED {verdict.reason}")
        return verdict.exit_code
    else:
        print(f"NOT_CONJUGATE {verdict.certificate}")
    _emit(cfg, torus_conjugacy_witness(T, x, y, verdict))
    return verdict.exit_code


def cmd_out_conj(cfg: RunConfig) -> int:
    from .witness import out_conjugacy_witness

    phi, psi = _read_auto(cfg.inputs[0]), _read_auto(cfg.inputs[1])
    budget = SearchBudget(max_states=cfg.budget or SearchBudget().max_states)
    verdict = out_conjugate(phi, psi, budget)
    if isinstance(verdict, Conjugate):
        print("CONJUGATE " + " ".join(str(w) for w in verdict.witness.images))
    elif isinstance(verdict, Unresolved):
        print(f"UNRESOLVED {verdict.reason}")
        return verdict.exit_code
    else:
        print(f"NOT_CONJUGATE {verdict.invariant}")
    _emit(cfg, out_conjugacy_witness(phi, psi, verdict))
    return verdict.exit_code


def _infer_rank(texts: list[str]) -> int:
    rank = 1
    for t in texts:
        for part in t.replace(";", " ").replace(",", " ").split():
            if part.startswith("t^") or part == "t":
                continue
            letters = parse_letters(part)
            if letters:
                rank = max(rank, max(abs(x) for x in letters))
    return rank


def cmd_whitehead(cfg: RunConfig, rank: int | None) -> int:
    from .whitehead import orbit_equivalent, parse_tuple, whitehead_minimize
    from .witness import whitehead_witness

    rank = rank or _infer_rank(cfg.inputs)
    tuples = [parse_tuple(t, rank) for t in cfg.inputs]
    if len(tuples) == 1:
        minimal, _ = whitehead_minimize(tuples[0])
        print(f"MINIMAL {minimal} length {minimal.total_length}")
        return EXIT_POSITIVE
    if len(tuples) != 2:
        raise ValueError("give one tuple to minimize or two to compare")
    verdict = orbit_equivalent(tuples[0], tuples[1], cfg.budget or 200000)
    if isinstance(verdict, Equivalent):
        print("EQUIVALENT " + " ".join(str(w) for w in verdict.witness.images))
    elif isinstance(verdict, Unresolved):
        print(f"UNRESOLVED {verdict.reason}")
        return verdict.exit_code
    else:
        print(f"NOT_EQUIVALENT {verdict.reason}")
    _emit(cfg, whitehead_witness(tuples[0], tuples[1], verdict))
    return verdict.exit_code


def parse_torsion_file(text: str, T: MappingTorus) -> dict[str, TorusAutomorphism]:
    """Lines ``<id>: <elem>, ..., <elem>`` giving images of x_1..x_m, then t."""
    out = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        name, sep, rest = line.partition(":")
        if not sep or not name.strip() or " " in name.strip():
            raise MalformedInput("expected '<id>: <images>'", lineno, 1)
        elems = [parse_element(p.strip(), T.rank, lineno) for p in rest.split(",")]
        if len(elems) != T.rank + 1:
            raise MalformedInput(f"expected {T.rank + 1} images", lineno, len(name) + 2)
        try:
            out[name.strip()] = TorusAutomorphism(T, elems[:-1], elems[-1])
        except ValueError as exc:
            raise MalformedInput(str(exc), lineno, len(name) + 2) from None
    return out


def cmd_congruence(cfg: RunConfig) -> int:
    from .congruence import enumerate_finite_quotients, verify_separation
    from .witness import congruence_witness

    T = _torus(cfg.inputs[0], cfg.bound)
    autos = parse_torsion_file(Path(cfg.inputs[1]).read_text(), T)
    quotients = list(enumerate_finite_quotients(T, cfg.max_order))
    cw = verify_separation(quotients, sorted(autos.items()), T)
    for ev in cw.separated:
        print(f"SEPARATED {ev.automorphism_id} {cw.quotient.describe()}")
    for name, reason in cw.unseparated:
        print(f"UNSEPARATED {name} {reason}")
    _emit(cfg, congruence_witness(T, autos, cw))
    nontrivial = [n for n, r in cw.unseparated if r != "not torsion-nontrivial"]
    return EXIT_NEGATIVE if nontrivial else EXIT_POSITIVE


def cmd_catalog(cfg: RunConfig, m: int, subdivisions: int) -> int:
    from .realization import finite_order_catalog, format_catalog
    from .witness import catalog_witness

    cat = finite_order_catalog(m, subdivisions=subdivisions)
    sys.stdout.write(format_catalog(cat))
    _emit(cfg, catalog_witness(cat))
    return EXIT_POSITIVE


def _parse_tuple_of_tuples(text: str, rank: int):
    return [[parse_element(e.strip(), rank) for e in part.split(",") if e.strip()] for part in text.split(";")]


def cmd_mwh_precheck(cfg: RunConfig, rank: int | None) -> int:
    rank = rank or _infer_rank(cfg.inputs)
    P, Q = (_parse_tuple_of_tuples(t, rank) for t in cfg.inputs)
    verdict = mwh_precheck(P, Q)
    print("PASS" if verdict.exit_code == 0 else f"FAIL {verdict.reason}")
    return verdict.exit_code


def cmd_verify(cfg: RunConfig) -> int:
    from .witness import WitnessError, verify_witness

    try:
        kind = verify_witness(Path(cfg.inputs[0]).read_text())
    except WitnessError as exc:
        print(f"REJECTED {exc}")
        return EXIT_NEGATIVE
    print(f"VERIFIED {kind}")
    return EXIT_POSITIVE


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--bound", type=int, default=64, help="outer-order search bound")
    common.add_argument("--ceiling", type=int, default=DEFAULT_CEILING, help="image length that counts as growth")
    common.add_argument("--budget", type=int, default=None, help="search size budget")
    common.add_argument("--budget-ms", type=int, default=None, help="wall-clock budget")
    common.add_argument("--max-order", type=int, default=96, help="largest finite quotient to try")
    common.add_argument("--seed", type=int, default=0, help="recorded; searches are deterministic")
    common.add_argument("--out", default=None, help="write a witness file here")
    common.add_argument("-v", "--verbose", action="store_true")

    p = argparse.ArgumentParser(prog="freebycyclic", description=__doc__)
    sub = p.add_subparsers(dest="command", required=True)
    sub.add_parser("order", parents=[common]).add_argument("auto")
    sub.add_parser("center", parents=[common]).add_argument("auto")
    s = sub.add_parser("torus-conj", parents=[common])
    s.add_argument("auto")
    s.add_argument("x")
    s.add_argument("y")
    s = sub.add_parser("out-conj", parents=[common])
    s.add_argument("auto1")
    s.add_argument("auto2")
    s = sub.add_parser("whitehead", parents=[common])
    s.add_argument("--tuple", action="append", required=True, dest="tuples", help="semicolon-separated words")
    s.add_argument("--rank", type=int, default=None)
    s = sub.add_parser("congruence", parents=[common])
    s.add_argument("auto")
    s.add_argument("torsion", help="file of torus automorphisms")
    s = sub.add_parser("catalog", parents=[common])
    s.add_argument("m", type=int)
    s.add_argument("--subdivisions", type=int, default=1)
    s = sub.add_parser("mwh-precheck", parents=[common])
    s.add_argument("left", help="entries separated by ';', elements by ','")
    s.add_argument("right")
    s.add_argument("--rank", type=int, default=None)
    sub.add_parser("verify", parents=[common]).add_argument("witness")
    return p


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    inputs = {
        "order": ["auto"],
        "center": ["auto"],
        "torus-conj": ["auto", "x", "y"],
        "out-conj": ["auto1", "auto2"],
        "whitehead": ["tuples"],
        "congruence": ["auto", "torsion"],
        "catalog": [],
        "mwh-precheck": ["left", "right"],
        "verify": ["witness"],
    }[args.command]
    values: list[str] = []
    for name in inputs:
        v = getattr(args, name)
        values.extend(v if isinstance(v, list) else [v])
    try:
        cfg = RunConfig(
            args.command, values, args.bound, args.budget, args.budget_ms, args.max_order, args.seed, args.out, args.ceiling
        )
        if args.command == "order":
            return cmd_order(cfg)
        if args.command == "center":
            return cmd_center(cfg)
        if args.command == "torus-conj":
            return cmd_torus_conj(cfg)
        if args.command == "out-conj":
            return cmd_out_conj(cfg)
        if args.command == "whitehead":
            return cmd_whitehead(cfg, args.rank)
        if args.command == "congruence":
            return cmd_congruence(cfg)
        if args.command == "catalog":
            return cmd_catalog(cfg, args.m, args.subdivisions)
        if args.command == "mwh-precheck":
            return cmd_mwh_precheck(cfg, args.rank)
        return cmd_verify(cfg)
    except (MalformedInput, NotFiniteOrder, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
