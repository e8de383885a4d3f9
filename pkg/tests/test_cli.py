import csv
import io
import json

import pytest

from grovercost import cli

FIPS = ["--key", "000102030405060708090a0b0c0d0e0f", "--msg", "00112233445566778899aabbccddeeff"]


def run(capsys, *argv):
    code = cli.main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_simulate_aes(capsys):
    code, out, _ = run(capsys, "simulate", "--cipher", "aes128", *FIPS, "--format", "json")
    assert code == cli.EXIT_OK
    (row,) = json.loads(out)
    assert row["ciphertext"] == "69c4e0d86a7b0430d8cdb78070b4c55a"
    assert row["matches reference"] == "yes"


def test_simulate_lowmc(capsys):
    from grovercost import lowmc
    key, pt, ct = lowmc.KNOWN_ANSWERS["L1"][0]
    code, out, _ = run(capsys, "simulate", "--cipher", "lowmc-l1", "--key", key, "--msg", pt, "--format", "csv")
    assert code == 0
    assert ct.lower() in out


@pytest.mark.parametrize("argv", [
    ["simulate", "--cipher", "aes128", "--key", "zz", "--msg", "00"],
    ["simulate", "--cipher", "aes128", "--key", "00", "--msg", "00"],
    ["attack", "des", "2^40"],
    ["attack", "aes128", "lots"],
    ["attack", "aes128-sideways", "2^40"],
    ["estimate", "--target", "aes999"],
    ["tables", "grover", "--oracle-costs", "/nonexistent.json"],
])
def test_invalid_input_exits_2(capsys, argv):
    code, _, err = run(capsys, *argv)
    assert code == cli.EXIT_INVALID
    assert "error" in err


def test_argparse_errors_exit_2(capsys):
    with pytest.raises(SystemExit) as exc:
        cli.main(["tables", "nonsense"])
    assert exc.value.code == 2


def test_infeasible_exits_3(capsys):
    code, _, err = run(capsys, "attack", "aes128", "2^10")
    assert code == cli.EXIT_INFEASIBLE
    assert "infeasible" in err


def test_sbox_table_csv(capsys):
    code, out, _ = run(capsys, "tables", "sbox", "--format", "csv")
    rows = list(csv.reader(io.StringIO(out)))
    assert code == 0
    assert rows[0] == ["operation", "#CNOT", "#1qCliff", "#T", "#M", "T-depth", "full depth", "width"]
    assert len(rows) == 4
    assert rows[1][3:5] == ["136", "34"]


@pytest.mark.parametrize("which", ["sbox", "mixcolumn", "nist", "maxdepth-aes"])
@pytest.mark.parametrize("fmt", ["csv", "json"])
def test_tables_deterministic(capsys, reference_costs_path, which, fmt):
    argv = ["tables", which, "--format", fmt, "--oracle-costs", str(reference_costs_path)]
    first = run(capsys, *argv)
    second = run(capsys, *argv)
    assert first == second and first[0] == 0


def _attack(capsys, path, cipher, md, *extra):
    code, out, _ = run(capsys, "attack", cipher, md, "--oracle-costs", str(path), "--format", "json", *extra)
    assert code == 0
    (row,) = json.loads(out)
    return row


def test_attack_aes128_40(capsys, reference_costs_path):
    row = _attack(capsys, reference_costs_path, "aes128", "2^40")
    assert (row["S"], row["log2(SKP)"], row["G-cost"], row["DW-cost"]) == \
        ("1.28*2^69", "-69.36", "1.07*2^117", "1.76*2^120")
    assert row["design"] == "maximov"


def test_attack_aes128_96(capsys, reference_costs_path):
    row = _attack(capsys, reference_costs_path, "aes128", "2^96")
    assert row["r"] == "2" and row["S"] == "1.00*2^0"


def test_attack_lowmc(capsys, reference_costs_path):
    row = _attack(capsys, reference_costs_path, "lowmc-l1", "2^40")
    assert row["G-cost"] == "1.25*2^123"


def test_attack_t_depth_metric(capsys, reference_costs_path):
    row = _attack(capsys, reference_costs_path, "aes128", "2^40", "--metric", "t_depth")
    assert row["T-D"] == "1.00*2^40" and row["G-cost"] == "1.98*2^112"


def test_attack_fixed_design(capsys, reference_costs_path):
    row = _attack(capsys, reference_costs_path, "aes128-in_place", "2^40")
    assert row["design"] == "in_place"


def test_attack_with_built_circuits(capsys):
    code, out, _ = run(capsys, "attack", "aes128", "2^64", "--format", "csv")
    assert code == 0 and "aes128" in out


def test_nist_table(capsys, reference_costs_path):
    code, out, _ = run(capsys, "tables", "nist", "--oracle-costs", str(reference_costs_path), "--format", "json")
    rows = [r for r in json.loads(out) if r["source"] == "estimated"]
    assert [r["MD=2^40"] for r in rows] == ["1.07*2^117", "1.09*2^181", "1.39*2^245"]
    assert rows[0]["MD=2^96"] == "1.34*2^83"


def test_grover_table(capsys, reference_costs_path):
    code, out, _ = run(capsys, "tables", "grover", "--oracle-costs", str(reference_costs_path), "--format", "json")
    rows = {r["scheme"]: r for r in json.loads(out)}
    row = rows["aes128 (IP MC, r=2)"]
    assert row["G-cost"] == "1.34*2^83" and row["DW-cost"] == "1.75*2^86"


def test_estimate_targets(capsys):
    code, out, _ = run(capsys, "estimate", "--target", "lowmc-sbox", "lowmc-sbox-shallow", "--format", "csv")
    rows = list(csv.reader(io.StringIO(out)))
    assert code == 0
    assert rows[1][1:] == ["50", "6", "21", "0", "3", "23", "7"]
    assert rows[2][1:] == ["60", "6", "21", "0", "1", "11", "13"]


def test_text_render_alignment():
    text = cli.render(("a", "bb"), [["x", 1], ["yyy", 22]], "text")
    assert text.splitlines() == ["a    bb", "x     1", "yyy  22"]
