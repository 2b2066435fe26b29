import json
import math
import subprocess
import sys

import pytest

from conftest import FIXTURES
from loccbound.bounds import locc_bound
from loccbound.cli import main
from loccbound.ensembles import save_ensemble
from loccbound.randomized import random_ensemble
from loccbound.repro import sweep, sweep_csv


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


def test_bound_e3_text(capsys):
    code, out, _ = run(capsys, "bound", FIXTURES / "e3.json")
    assert code == 0
    assert "locally accessible information bound: 3 bits" in out
    assert "Holevo information: 3.16992500144 bits" in out
    assert "verdict: ProvablyIndistinguishable" in out


def test_bound_json(capsys):
    code, out, _ = run(capsys, "bound", FIXTURES / "product.json", "--report", "json")
    assert code == 0
    doc = json.loads(out)
    assert doc["bound_bits"] == 0.0
    assert doc["verdict"] == "Inconclusive"
    assert doc["argmax_party"] == 1


@pytest.mark.parametrize(
    "name,needle",
    [("malformed.json", "not valid JSON"), ("bad_probs.json", "sum to 0.9"), ("short_amps.json", "members[0]")],
)
def test_bound_validation_errors(capsys, name, needle):
    code, out, err = run(capsys, "bound", FIXTURES / name)
    assert code == 1
    assert out == ""
    assert needle in err


def test_missing_file(capsys, tmp_path):
    code, out, _ = run(capsys, "bound", tmp_path / "none.json")
    assert code == 3 and out == ""


def test_round_trip_bound_matches_in_memory(capsys, tmp_path, gen):
    e = random_ensemble([2, 3, 2], gen)
    save_ensemble(e, tmp_path / "e.json")
    _, out, _ = run(capsys, "bound", tmp_path / "e.json", "--report", "json")
    assert json.loads(out) == locc_bound(e).to_dict()


def test_info(capsys):
    code, out, _ = run(capsys, "info", FIXTURES / "bell4.json", "--report", "json")
    doc = json.loads(out)
    assert code == 0
    assert doc["holevo_chi"] == pytest.approx(2.0)
    assert doc["complementarity"]["holds"] is True
    code, out, _ = run(capsys, "info", FIXTURES / "mixed_product.json")
    assert code == 0 and "complementarity" not in out


def test_crossings(capsys):
    code, out, _ = run(capsys, "crossings", "--report", "json")
    doc = json.loads(out)
    assert code == 0
    assert abs(doc["a_low"] - 0.222) < 0.005
    assert abs(doc["a_high"] - 0.975) < 0.005
    code, out, _ = run(capsys, "crossings")
    assert out.startswith("a_low  = 0.2216")


def test_simulate_leaf(capsys):
    code, out, _ = run(capsys, "simulate", FIXTURES / "ghz_pair.json", FIXTURES / "leaf_protocol.json")
    assert code == 0
    assert "extracted information: 0 bits" in out


def test_simulate_e3(capsys):
    code, out, _ = run(
        capsys, "simulate", FIXTURES / "e3.json", FIXTURES / "basis4_protocol.json", "--report", "json"
    )
    doc = json.loads(out)
    assert code == 0
    assert doc["extracted_info"] <= doc["bound_bits"] + 1e-9
    assert abs(sum(r["p"] for r in doc["transcripts"]) - 1) < 1e-9


def test_simulate_bad_protocol(capsys, tmp_path):
    (tmp_path / "p.json").write_text('{"party": 1, "kraus": [[[[1, 0], [0, 0]], [[0, 0], [0, 0]]]]}')
    code, _, err = run(capsys, "simulate", FIXTURES / "ghz_pair.json", tmp_path / "p.json")
    assert code == 1 and "complete" in err


def test_densecode(capsys):
    code, out, _ = run(
        capsys, "densecode", FIXTURES / "phi_plus.json", FIXTURES / "pauli_encodings.json", "--receivers", "2",
        "--report", "json",
    )
    doc = json.loads(out)
    assert code == 0
    assert doc["capacity_bound_bits"] == pytest.approx(1.0)
    assert doc["senders"] == [1] and doc["receivers"] == [2]


def test_densecode_default_receivers(capsys):
    code, out, _ = run(capsys, "densecode", FIXTURES / "phi_plus.json", FIXTURES / "pauli_encodings.json")
    assert code == 0 and "receivers: [2]" in out


def test_densecode_rejects_multi_member_state(capsys):
    code, _, err = run(capsys, "densecode", FIXTURES / "bell4.json", FIXTURES / "pauli_encodings.json")
    assert code == 1 and "exactly one member" in err


def test_sweep_stdout_matches_library(capsys):
    code, out, _ = run(capsys, "sweep", "e2", "--grid", "11")
    assert code == 0
    assert out == sweep_csv(sweep("e2", 11))


def test_sweep_to_file(capsys, tmp_path):
    code, out, _ = run(capsys, "sweep", "e1", "--grid", "3", "--out", tmp_path / "f1.csv")
    assert code == 0 and out == ""
    lines = (tmp_path / "f1.csv").read_text().splitlines()
    assert lines[0] == "a,c,bound_bits,chi_bits" and len(lines) == 10


def test_sweep_bad_grid(capsys):
    code, _, err = run(capsys, "sweep", "e2", "--grid", "1")
    assert code == 1


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "loccbound", "bound", str(FIXTURES / "e3.json"), "--report", "json"],
        capture_output=True,
        text=True,
        check=True,
    )
    assert math.isclose(json.loads(proc.stdout)["bound_bits"], 3.0, abs_tol=1e-9)
