import pytest

from freebycyclic.cli import RunConfig, main
from freebycyclic.witness import parse_witness, verify_witness
from freebycyclic.words import MalformedInput

from witness_cases import CASES, DATA, GOLDEN, argv_for


def run(capsys, argv):
    code = main(argv)
    out = capsys.readouterr()
    return code, out.out, out.err


def data(name):
    return str(DATA / name)


@pytest.mark.parametrize("name", sorted(CASES))
def test_case_output_and_golden_witness(name, tmp_path, capsys):
    _, expected_code, first_line = CASES[name]
    out_file = tmp_path / f"{name}.wit"
    code, out, _ = run(capsys, argv_for(name, out_file))
    assert code == expected_code
    assert out.splitlines()[0] == first_line
    text = out_file.read_text()
    assert text == (GOLDEN / f"{name}.wit").read_text()
    code, out, _ = run(capsys, ["verify", str(out_file)])
    assert (code, out.strip()) == (0, f"VERIFIED {parse_witness(text).kind}")


@pytest.mark.parametrize(
    "argv, code, line",
    [
        (["order", "identity.auto"], 0, "order 1, f0 = 1"),
        (["order", "transvection.auto", "--ceiling", "32"], 2, "exceeded at power 32 (image length 33)"),
        (["order", "transvection.auto", "--bound", "10"], 2, "absent up to bound 10"),
        (["center", "swap.auto"], 0, "t^2 1"),
        (["center", "ad_a.auto"], 0, "t^1 A"),
        (["center", "rot4.auto"], 0, "t^4 1"),
        (["whitehead", "--tuple", "abAB"], 0, "MINIMAL abAB length 4"),
        (["whitehead", "--tuple", "abAB", "--tuple", "a"], 2, "NOT_EQUIVALENT minimal lengths 4 != 1"),
        (["mwh-precheck", "t^1 a", "t^1 b"], 0, "PASS"),
        (["mwh-precheck", "t^1 a", "t^2 a"], 2, "FAIL exponent at (0,0): 1 != 2"),
        (["mwh-precheck", "t^0 a, t^1 b", "t^0 a"], 2, "FAIL arity of entry 0: 2 != 1"),
    ],
)
def test_command_lines(argv, code, line, capsys):
    argv = [data(a) if (DATA / a).is_file() else a for a in argv]
    got, out, _ = run(capsys, argv)
    assert got == code
    assert out.splitlines()[0] == line


def test_catalog_orders_line(capsys):
    code, out, _ = run(capsys, ["catalog", "2"])
    assert code == 0 and "orders 1 2 3 4 6" in out.splitlines()


def test_input_errors(tmp_path, capsys):
    bad = tmp_path / "bad.auto"
    bad.write_text("a -> b\nb = a\n")
    code, _, err = run(capsys, ["order", str(bad)])
    assert code == 1 and err.startswith("error: line 2, column 1")
    code, _, err = run(capsys, ["torus-conj", data("swap.auto"), "t^x a", "a"])
    assert code == 1 and "error:" in err
    code, _, err = run(capsys, ["center", data("transvection.auto"), "--bound", "0"])
    assert code == 1 and "--bound must be positive" in err
    code, _, _ = run(capsys, ["order", str(tmp_path / "missing.auto")])
    assert code == 1


def test_tampered_witness_rejected(tmp_path, capsys):
    text = (GOLDEN / "torus_conj.wit").read_text().replace("conjugator t^1 1", "conjugator t^0 1")
    path = tmp_path / "tampered.wit"
    path.write_text(text)
    code, out, _ = run(capsys, ["verify", str(path)])
    assert code == 2 and out.startswith("REJECTED")
    with pytest.raises(MalformedInput):
        verify_witness("not a witness\n")
    path.write_text("not a witness\n")
    code, _, err = run(capsys, ["verify", str(path)])
    assert code == 1 and err.startswith("error: line 1")


def test_run_config_validation():
    with pytest.raises(ValueError):
        RunConfig("order", max_order=0)
    with pytest.raises(ValueError):
        RunConfig("order", budget_ms=-1)
    assert RunConfig("order").seed == 0
