"""CLI invocations that emit witness files, shared by the golden and determinism tests."""

from __future__ import annotations

import sys
from pathlib import Path

DATA = Path(__file__).parent / "data"
GOLDEN = Path(__file__).parent / "golden"

# name -> (argv without --out, expected exit code, expected stdout first line)
CASES = {
    "order": (["order", "swap.auto"], 0, "order 2, f0 = 1"),
    "torus_conj": (["torus-conj", "swap.auto", "t^0 a", "t^0 b"], 0, "CONJUGATE t"),
    "torus_not_conj": (["torus-conj", "swap.auto", "a", "A"], 2, "NOT_CONJUGATE quotient (C3)x|C1 (order 3)"),
    "torus_exponent": (["torus-conj", "swap.auto", "t^1 1", "t^2 1"], 2, "NOT_CONJUGATE exponent 1 != 2"),
    "out_conj": (["out-conj", "swap.auto", "swap_conj.auto"], 0, "CONJUGATE ab b"),
    "out_distinguished": (["out-conj", "swap.auto", "identity.auto"], 2, "NOT_CONJUGATE finite_order"),
    "whitehead": (["whitehead", "--tuple", "ab", "--tuple", "a"], 0, "EQUIVALENT b Ba"),
    "congruence": (["congruence", "swap.auto", "swap.torsion", "--max-order", "48"], 0, "SEPARATED psi (C1)x|C3 (order 3)"),
    "catalog": (["catalog", "2"], 0, "freebycyclic-catalog 1"),
}


def argv_for(name: str, out: Path) -> list[str]:
    args = [str(DATA / a) if (DATA / a).is_file() else a for a in CASES[name][0]]
    return args + ["--out", str(out), "--seed", "0"]


def generate(directory: Path) -> None:
    """Run every case, writing ``<name>.wit`` into ``directory``."""
    from freebycyclic.cli import main

    directory.mkdir(parents=True, exist_ok=True)
    for name in CASES:
        main(argv_for(name, directory / f"{name}.wit"))


if __name__ == "__main__":
    generate(Path(sys.argv[1]))
