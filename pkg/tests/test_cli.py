import io
import json
from fractions import Fraction

import pytest

from knapgap.cli import run
from knapgap.config import Caps, caps_from_env, caps_from_mapping, parse_assignments
from knapgap.knapsack import KnapsackInstance
from knapgap.serialize import dumps, instance_from_json, instance_to_json, number, parse_number


def call(argv, environ=None):
    out, err = io.StringIO(), io.StringIO()
    code = run(argv, out, err, environ or {})
    return code, out.getvalue(), err.getvalue()


def call_json(argv, environ=None):
    code, out, err = call(argv, environ)
    assert code == 0, err
    data = json.loads(out)
    assert data["schema"] == "knapgap/1"
    return data


def test_documented_examples():
    assert call_json(["distance", "--a", "5,5,1", "--b", "4"])["d"] == "4"
    assert call_json(["frobenius", "--a", "3,5"])["g"] == "7"
    assert call_json(["distance", "--a", "3,5", "--b", "1"])["d"] == "-inf"


@pytest.mark.parametrize("argv, clause", [
    (["distance", "--a", "3,0,7", "--b", "1"], "(i)"),
    (["distance", "--a", "2,4", "--b", "1"], "(ii)"),
    (["distance", "--a", "3,x", "--b", "1"], "integers"),
    (["frobenius", "--a", "3,-5"], "positive"),
    (["gap", "--a", "3,5", "--b", "1", "--c", "1,0"], "no integer point"),
    (["nonsense"], "invalid choice"),
])
def test_invalid_input_exit_2(argv, clause):
    code, out, err = call(argv)
    assert code == 2 and out == ""
    assert clause in err


def test_scale_refusal_exit_3():
    code, _, err = call(["gap", "--a", "50,-51,53", "--b", "1", "--c", "1,1,1"],
                        {"KNAPGAP_CAPS": "ip_enum=100"})
    assert code == 3 and "open bracket" in err
    assert call(["gap", "--a", "50,-51,53", "--b", "1", "--c", "1,1,1"])[0] == 0


def test_verify_exit_codes(monkeypatch):
    import knapgap.verify as verify

    def failing(*args, **kwargs):
        return [verify.Check(2, "forced", False, 1, ("boom",))]

    monkeypatch.setattr(verify, "run_checks", failing)
    code, out, _ = call(["verify", "--quick"])
    assert code == 4 and json.loads(out)["passed"] is False


def test_verify_quick_subset():
    data = call_json(["verify", "--quick", "--only", "2,4,5"])
    assert data["passed"] is True
    assert [c["criterion"] for c in data["checks"]] == ["2", "4", "5"]


def test_gap_and_group_outputs():
    data = call_json(["gap", "--a", "5,5,1", "--b", "4", "--c", "0,0,1"])
    assert (data["lp"], data["ip"], data["ig"], data["bound"]) == ("0", "4", "4", "4")
    data = call_json(["gap", "--a", "3,5,7", "--c", "3,5,0"])
    assert data["scan"]["max_ig"] == "11" and data["gap_special"] == "11"
    assert data["tau"] == "3" and data["lower_bound"].startswith("9.748")
    data = call_json(["group", "--a", "3,5,7", "--l", "3,5"])
    assert [row["value"] for row in data["table"]] == ["0", "8", "9", "3", "11", "5", "6"]
    assert data["gap"] == "11"
    data = call_json(["group", "--a", "3,5,7", "--l", "3,5", "--residue", "5,0"])
    assert data["value"] == "8" and data["witness"] == ["1", "1"]


def test_other_commands():
    assert call_json(["witness", "--n", "4", "--k", "3"])["tight"] is True
    assert call_json(["bounds", "--a", "9,-4"])["ew_l1"] == "19"
    data = call_json(["covering", "--a", "3,5,7"])
    assert (data["continuous"], data["discrete"], data["agree"]) == ("19", "11", True)
    assert call_json(["distance", "--a", "5,5,1", "--b", "4", "--l1"])["l1"]["value"] == "24/5"


def test_csv_format():
    code, out, _ = call(["group", "--a", "3,5,7", "--l", "3,5", "--format", "csv"])
    assert code == 0
    assert out.splitlines()[:2] == ["residue,value,witness", "0,0,0;0"]
    code, out, _ = call(["bounds", "--a", "3,5,7", "--format", "csv"])
    assert "sup_norm,6" in out.splitlines()


def test_experiment_command(tmp_path):
    path = tmp_path / "r.csv"
    argv = ["experiment", "tail", "--n", "3", "--H", "8", "--samples", "40", "--seed", "5",
            "--t-grid", "1,2,3", "--out", str(path)]
    data = call_json(argv)
    assert data["monotone"] is True and data["alpha"] == "2/3"
    assert len(path.read_text().splitlines()) == 41
    first = path.read_bytes()
    call_json(argv)
    assert path.read_bytes() == first
    data = call_json(["experiment", "avg", "--n", "3", "--H", "8", "--samples", "10"])
    assert float(data["upper_proxy_mean"]) >= float(data["lower_witness_mean"]) >= 0


def test_config_file_and_precedence(tmp_path):
    cfg = tmp_path / "knapgap.cfg"
    cfg.write_text("# caps\nip_enum = 100\nformat = csv\n")
    argv = ["gap", "--a", "50,-51,53", "--b", "1", "--c", "1,1,1", "--config", str(cfg)]
    assert call(argv)[0] == 3
    code, out, _ = call(["bounds", "--a", "3,5", "--config", str(cfg)])
    assert code == 0 and out.startswith("key,value")
    code, out, _ = call(["bounds", "--a", "3,5", "--config", str(cfg), "--format", "json"])
    assert json.loads(out)["sup_norm"] == "4"


def test_caps_parsing():
    assert parse_assignments("a=1, b=2; c = 3 # x") == {"a": "1", "b": "2", "c": "3"}
    caps = caps_from_mapping({"fiber": "1e3", "unknown": "5"})
    assert caps.fiber == 1000 and caps.scan == Caps().scan
    assert caps_from_env(environ={"KNAPGAP_CAPS": "scan=7"}).scan == 7
    with pytest.raises(ValueError):
        caps_from_mapping({"scan": "0"})
    with pytest.raises(ValueError):
        parse_assignments("novalue")


def test_serialization():
    assert number(Fraction(3, 2)) == "3/2" and number(-7) == "-7"
    assert number(float("-inf")) == "-inf"
    assert parse_number("3/2") == Fraction(3, 2) and parse_number("-inf") == float("-inf")
    inst = KnapsackInstance((3, -5, 7), 12)
    assert instance_to_json(inst) == {"a": ["3", "-5", "7"], "b": "12"}
    assert instance_from_json(instance_to_json(inst)) == inst
    assert dumps({"x": 1}) == dumps({"x": 1}) == '{\n  "schema": "knapgap/1",\n  "x": "1"\n}\n'
