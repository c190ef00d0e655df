import math
import subprocess
import sys
from pathlib import Path

import pytest

from cliffpoly import cli
from cliffpoly.polytope import THETA_HAT

DATA = Path(__file__).parent / "data"


def run(capsys, *argv):
    code = cli.main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def kv(out):
    pairs = {}
    for line in out.splitlines():
        for tok in line.split():
            if "=" in tok:
                k, v = tok.split("=", 1)
                pairs[k] = v
    return pairs


def test_threshold(capsys):
    code, out, _ = run(capsys, "threshold")
    assert code == 0
    d = kv(out)
    assert float(d["theta_hat"]) == pytest.approx((6 - 2 * math.sqrt(2)) / 7, abs=1e-15)
    assert float(d["max_inner_B2"]) == pytest.approx(2 * math.sqrt(2) - 1)
    assert float(d["max_inner_B1"]) == pytest.approx(math.sqrt(3))
    assert set(d) == {"theta_hat", "max_inner_B1", "max_inner_B2", "worst_case_lower",
                      "worst_case_upper", "pi8_worst_case_reported"}


def test_text_format(capsys):
    code, out, _ = run(capsys, "threshold", "--format", "text")
    assert code == 0 and out.startswith("theta_hat: 0.45308")


def test_decompose_feasible(capsys):
    code, out, _ = run(capsys, "decompose", "--gate", "t", "--noise", "0.46")
    assert code == 0
    ws = [float(line.split("w=")[1]) for line in out.splitlines()]
    assert all(line.startswith("mix id=") for line in out.splitlines())
    assert sum(ws) == pytest.approx(1.0, abs=1e-9)


def test_decompose_clifford_point_mass(capsys):
    code, out, _ = run(capsys, "decompose", "--gate", "h", "--noise", "0")
    assert code == 0 and len(out.splitlines()) == 1


def test_decompose_infeasible(capsys):
    # 0.45 sits just below the threshold 0.4531 for T.
    code, out, err = run(capsys, "decompose", "--gate", "t", "--noise", "0.45")
    assert code == 2
    assert out.startswith("violated_facet id=")
    assert float(kv(out)["value"]) > 1


@pytest.mark.parametrize("argv", [["decompose", "--gate", "q", "--noise", "0.5"],
                                  ["decompose", "--gate", "t", "--noise", "1.5"],
                                  ["decompose", "--gate", "t"],
                                  ["simulate", str(DATA / "bad_syntax.cct")],
                                  ["simulate", str(DATA / "ghz3.cct"), "--input", "01"],
                                  ["simulate", "/nonexistent.cct"],
                                  ["parity", str(DATA / "noisy_t.cct")],
                                  ["bogus"]])
def test_input_errors_exit_1(capsys, argv):
    with pytest.raises(SystemExit) as exc:
        sys.exit(cli.main(argv))
    assert exc.value.code == 1


def test_pmin(capsys):
    code, out, _ = run(capsys, "pmin", "--gate", "t")
    assert float(kv(out)["p_min"]) == pytest.approx(THETA_HAT, abs=1e-12)
    code, out, _ = run(capsys, "pmin", "--gate", "s")
    assert float(kv(out)["p_min"]) == 0.0


def test_facets_list_and_verify(capsys, tmp_path):
    code, out, _ = run(capsys, "facets")
    lines = out.splitlines()
    assert code == 0 and kv(lines[0])["count"] == "120" and len(lines) == 121
    code, out, _ = run(capsys, "facets", "--verify", "--probes", "500")
    assert code == 0 and "verified=yes" in out
    broken = tmp_path / "f.txt"
    broken.write_text("\n".join(lines[1:-1]))
    code, out, _ = run(capsys, "facets", "--verify", "--probes", "10", "--facet-file", str(broken))
    assert code == 3 and "verified=no" in out


def test_parity(capsys):
    code, out, _ = run(capsys, "parity", str(DATA / "parity3.cct"))
    assert code == 0 and out.strip() == "c=1 support=0,1,2"
    code, out, _ = run(capsys, "parity", str(DATA / "ghz3.cct"))
    assert out.strip() == "balanced"


def test_simulate_modes(capsys):
    code, out, _ = run(capsys, "simulate", str(DATA / "parity3.cct"), "--input", "100")
    assert float(kv(out)["p_one"]) == 0.0
    code, out, _ = run(capsys, "simulate", str(DATA / "parity3.cct"), "--input", "100",
                       "--two-party", "--partition", "2")
    assert out.strip() == "output=0 comm_bits=1"
    code, out, _ = run(capsys, "simulate", str(DATA / "perfect_t.cct"), "--two-party", "--trace")
    assert out.splitlines()[-1].endswith("comm_bits=3") and out.startswith("step ")
    code, out, _ = run(capsys, "simulate", str(DATA / "noisy_t.cct"), "--samples", "2000", "--seed", "4")
    d = kv(out)
    assert abs(float(d["frequency"]) - float(d["p_one"])) < 0.05


def test_module_entry_point():
    out = subprocess.run([sys.executable, "-m", "cliffpoly", "pmin", "--gate", "t"],
                         capture_output=True, text=True, check=True).stdout
    assert out.startswith("p_min=0.4530818")


def test_noise_040_infeasible(capsys):
    code, out, _ = run(capsys, "decompose", "--gate", "t", "--noise", "0.40")
    assert code == 2 and out.startswith("violated_facet")


def test_xor_and_not_parity(capsys, tmp_path):
    xor = tmp_path / "xor.cct"
    xor.write_text("qubits 2\ncnot 0 1\nmeasure 1\n")
    assert run(capsys, "parity", str(xor))[1].strip() == "c=0 support=0,1"
    neg = tmp_path / "not.cct"
    neg.write_text("qubits 1\nx 0\nmeasure 0\n")
    assert run(capsys, "parity", str(neg))[1].strip() == "c=1 support=0"


def test_too_wide_for_oracle(capsys, tmp_path):
    wide = tmp_path / "wide.cct"
    wide.write_text("qubits 9\nh 0\ncnot 0 8\nmeasure 8\n")
    code, _, err = run(capsys, "simulate", str(wide))
    assert code == 1 and "cap" in err
    code, out, _ = run(capsys, "simulate", str(wide), "--two-party")
    assert code == 0 and out.strip() == "output=balanced comm_bits=1"


def test_deterministic_output():
    argv = [sys.executable, "-m", "cliffpoly", "simulate", str(DATA / "noisy_t.cct"),
            "--samples", "5000", "--seed", "9"]
    a = subprocess.run(argv, capture_output=True, check=True).stdout
    b = subprocess.run(argv, capture_output=True, check=True).stdout
    assert a == b
