import json
import math

import pytest

from blaschke_lab.blaschke import FiniteBlaschkeProduct
from blaschke_lab.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, (json.loads(out) if out.strip() else None), err


def test_elliptic_symmetric_modulus(capsys):
    code, rep, err = run(capsys, "elliptic", "--k", repr(1 / math.sqrt(2)))
    assert code == 0
    assert abs(rep["result"]["K"] - rep["result"]["K_prime"]) < 1e-10
    assert "K =" in err


def test_elliptic_truncated_literal(capsys):
    # 0.70710678 is 1.2e-9 below 1/sqrt(2), so K and K' differ by about 3e-9
    code, rep, _ = run(capsys, "elliptic", "--k", "0.70710678")
    assert code == 0
    assert abs(rep["result"]["K"] - rep["result"]["K_prime"]) < 1e-8


def test_elliptic_with_map(capsys):
    code, rep, _ = run(capsys, "elliptic", "--k", "0.5", "--theta0", "1.5707963267948966", "--eps", "0.2")
    assert code == 0 and rep["result"]["anchor_error"] < 1e-10
    assert {"alpha", "beta", "ell", "ell_prime", "pole", "C"} <= set(rep["result"]["map"])


def test_fisher_exp_shift(capsys):
    code, rep, _ = run(capsys, "fisher", "--f", "exp_shift", "--eps", "0.15")
    assert code == 0
    assert rep["certificate"]["achieved"] < 0.15
    assert rep["certificate"]["achieved"] <= rep["certificate"]["bound"]


def test_fisher_capacity_exit(capsys, tmp_path):
    cfg = tmp_path / "c.cfg"
    cfg.write_text("order_cap = 2\n")
    code, rep, _ = run(capsys, "fisher", "--f", "exp_shift", "--eps", "0.01", "--config", str(cfg))
    assert code == 2 and rep["error"]["type"] == "CapacityError"


def test_caratheodory_from_coefficient_file(capsys, tmp_path):
    path = tmp_path / "f.json"
    path.write_text(json.dumps({"coeffs": {"0": [0.2, 0], "1": [0.5, 0], "2": [0.1, 0.1]}}))
    code, rep, _ = run(capsys, "caratheodory", "--f", str(path), "--n", "2")
    assert code == 0
    assert rep["certificate"]["coefficient_error"] < 1e-9


def test_helson_sarason_and_dump(capsys, tmp_path):
    csv = tmp_path / "g.csv"
    code, rep, _ = run(capsys, "helson-sarason", "--f", "winding_sin3", "--eps", "0.1", "--dump-grid", str(csv))
    assert code == 0 and rep["certificate"]["achieved"] < 0.1
    assert csv.read_text().splitlines()[0] == "theta,f_re,f_im,quotient_re,quotient_im"


def test_combo_report(capsys):
    code, rep, _ = run(capsys, "combo", "--f", "zero_grid", "--eps", "0.1", "--n", "1000")
    assert code == 0 and rep["certificate"]["achieved"] <= 1e-14


def test_dist(capsys, tmp_path):
    path = tmp_path / "c.json"
    path.write_text(json.dumps({"coeffs": {"-1": [0.3, 0], "2": [1, 0]}}))
    code, rep, _ = run(capsys, "dist", "--coeffs", str(path), "--m", "4")
    assert code == 0 and abs(rep["result"]["lower"] - 0.3) < 1e-10


def test_frostman_needs_seed(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["frostman", "--phi", "atom_pi", "--eps", "0.5"])
    assert exc.value.code == 64


def test_frostman(capsys):
    code, rep, _ = run(capsys, "frostman", "--phi", "fbp_atom_pi", "--eps", "0.5", "--seed", "1")
    assert code == 0
    assert rep["certificate"]["achieved"] <= rep["certificate"]["bound"] < 0.5


def test_douglas_rudin(capsys):
    code, rep, _ = run(capsys, "douglas-rudin", "--phi", "step_upper", "--eps", "0.2", "--grid", "4096")
    assert code == 0 and rep["certificate"]["achieved"] <= 0.2


def test_numrange_with_fbp_file(capsys, tmp_path):
    path = tmp_path / "b.json"
    path.write_text(json.dumps(FiniteBlaschkeProduct(1.0, (0.0, 0.4j)).to_json()))
    code, rep, _ = run(capsys, "numrange", "--matrix", "jordan3_half", "--fbp", str(path))
    assert code == 0
    assert rep["result"]["berger_stampfli"]["pass"]
    assert max(rep["result"]["resolvent_residuals"]) < 1e-9


def test_numrange_ensemble(capsys, monkeypatch):
    monkeypatch.setenv("BLASCHKE_LAB_THREADS", "2")
    code, rep, _ = run(capsys, "numrange", "--ensemble", "10", "--seed", "0")
    assert code == 0 and rep["result"]["ensemble"]["failures"] == 0


def test_precondition_exit(capsys):
    code, rep, _ = run(capsys, "helson-sarason", "--f", "half_rotation", "--eps", "0.1")
    assert code == 1 and rep["error"]["type"] == "PreconditionError"


def test_resolution_exit(capsys, tmp_path):
    # a jump of pi between neighbours cannot be unwrapped
    n = 64
    vals = [[1.0, 0.0]] * (n // 2) + [[-1.0, 0.0]] * (n // 2)
    path = tmp_path / "g.json"
    path.write_text(json.dumps({"n": n, "values": vals}))
    code, rep, _ = run(capsys, "helson-sarason", "--f", str(path), "--eps", "0.1", "--grid", "64")
    assert code == 2 and rep["error"]["type"] == "ResolutionError"


@pytest.mark.parametrize("argv", [["bogus"], ["fisher", "--f", "exp_shift"], ["elliptic", "--k", "0.5", "--wat"],
                                  ["numrange"], ["elliptic", "--k", "0.5", "--theta0", "1.0"]])
def test_usage_errors(capsys, argv):
    with pytest.raises(SystemExit) as exc:
        main(argv)
    assert exc.value.code == 64


def test_reports_are_byte_identical(capsys):
    argv = ["frostman", "--phi", "atom_2pi", "--eps", "0.5", "--seed", "9"]
    main(argv)
    first = capsys.readouterr().out
    main(argv)
    assert capsys.readouterr().out == first


def test_timing_flag(capsys):
    _, rep, _ = run(capsys, "elliptic", "--k", "0.3", "--timing")
    assert rep["runtime_s"] >= 0


def test_selftest_subset(capsys):
    code, rep, err = run(capsys, "selftest", "--only", "6,10")
    assert code == 0 and [r["criterion"] for r in rep["result"]] == [6, 10]
    assert err.count("[PASS]") == 2
