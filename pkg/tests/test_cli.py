import json
import subprocess
import sys

import pytest

from ddforms.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_cusps_level_four(capsys):
    code, out, _ = run(capsys, "cusps", "--level", "4", "--format", "json")
    assert code == 0
    d = json.loads(out)
    assert [c["width"] for c in d["cusps"]] == [4, 1, 1] and d["index"] == 6


def test_cusps_csv(capsys):
    code, out, _ = run(capsys, "cusps", "--level", "2", "--format", "csv")
    assert code == 0 and len(out.strip().splitlines()) == 3


def test_classify_nine_rows(capsys):
    code, out, _ = run(capsys, "classify", "--m", "1", "--max", "500", "--format", "json")
    assert code == 0 and len(json.loads(out)) == 9


def test_expand_at_cusp(capsys):
    code, out, _ = run(capsys, "expand", "phi4", "--cusp", "0/1", "--prec", "1/4", "--format", "csv")
    assert code == 0
    rows = [r.split(",") for r in out.strip().splitlines()[1:]]
    assert ["0", "0", "0", "2"] in rows and ["1/4", "1", "0", "-2"] in rows


def test_lift_and_product_agree(capsys, tmp_path):
    _, a, _ = run(capsys, "lift", "nabla2_seed", "--format", "json", "--cache-dir", str(tmp_path))
    _, b, _ = run(capsys, "borcherds", "phi3", "--format", "json", "--no-cache")
    assert json.loads(a)["series"]["coeffs"] == json.loads(b)["series"]["coeffs"]
    assert "weyl" in json.loads(b) and "character" in json.loads(b)


def test_outputs_are_byte_deterministic(capsys, tmp_path):
    first = run(capsys, "lift", "q1_seed", "--format", "json", "--no-cache")[1]
    second = run(capsys, "lift", "q1_seed", "--format", "json", "--cache-dir", str(tmp_path))[1]
    third = run(capsys, "lift", "q1_seed", "--format", "json", "--cache-dir", str(tmp_path))[1]
    assert first == second == third


def test_trace(capsys):
    code, out, _ = run(capsys, "trace", "phi2", "--to", "1", "--prec", "0", "--format", "csv")
    assert code == 2  # window too small
    code, out, _ = run(capsys, "trace", "phi2", "--to", "1", "--prec", "1", "--format", "csv")
    assert code == 0 and "0,0,0,10" in out


def test_verify_single_case(capsys, tmp_path):
    code, out, _ = run(capsys, "verify", "nabla3_lift_eq_product", "--cache-dir", str(tmp_path))
    assert code == 0 and out.startswith("ok")


def test_verify_reports_corrupted_cache(capsys, tmp_path):
    assert run(capsys, "verify", "nabla3_lift_eq_product", "--cache-dir", str(tmp_path))[0] == 0
    for p in tmp_path.glob("*.json"):
        d = json.loads(p.read_text())
        if d["kind"] == "lift":
            d["form"]["series"]["coeffs"][0][3] = "7"
            p.write_text(json.dumps(d))
    code, out, _ = run(capsys, "verify", "nabla3_lift_eq_product", "--cache-dir", str(tmp_path))
    assert code == 1 and "first mismatch" in out
    assert run(capsys, "verify", "nabla3_lift_eq_product", "--no-cache")[0] == 0


def test_verify_list(capsys):
    code, out, _ = run(capsys, "verify", "--list", "--format", "json")
    ids = {c["id"] for c in json.loads(out)}
    assert code == 0 and {"reflective_5_2", "vt_symmetry", "dd_powers_4"} <= ids


@pytest.mark.parametrize("argv", [
    ["verify", "nabla3_lift_eq_product", "--prec", "0"],
    ["verify", "no_such_case"],
    ["lift", "no_such_form"],
    ["expand", "phi2", "--cusp", "1/3"],
    ["eval", "phi2", "--tau=-1j"],
    ["cusps", "--level", "0"],
    ["classify", "--format", "csv", "--max", "0"],
])
def test_usage_errors(capsys, argv):
    code, _, err = run(capsys, *argv)
    assert code == 2 and err.startswith("ddforms: error:")


def test_eval(capsys):
    code, out, _ = run(capsys, "eval", "phi2", "--tau", "1j", "--z", "0.1", "--format", "json")
    assert code == 0 and "value" in json.loads(out)


def test_cache_ls_and_clear(capsys, tmp_path):
    run(capsys, "lift", "nabla3_seed", "--cache-dir", str(tmp_path))
    code, out, _ = run(capsys, "cache", "ls", "--cache-dir", str(tmp_path), "--format", "json")
    assert code == 0 and len(json.loads(out)["entries"]) == 1
    code, out, _ = run(capsys, "cache", "clear", "--cache-dir", str(tmp_path))
    assert code == 0 and not list(tmp_path.glob("*.json"))


def test_registry_list(capsys):
    code, out, _ = run(capsys, "registry", "list")
    assert code == 0 and "phi01" in out


def test_module_entry_point():
    p = subprocess.run([sys.executable, "-m", "ddforms", "cusps", "--level", "2"],
                       capture_output=True, text=True, timeout=120)
    assert p.returncode == 0 and "sum of widths = 3 = index" in p.stdout
