import json
import subprocess
import sys
from fractions import Fraction
from pathlib import Path

import pytest

from hnvol.cli import JobSpec, build_parser, main, run

F = Fraction

SAMPLES = Path(__file__).resolve().parent.parent / "sample_jobs"


def run_main(argv, capsysbinary):
    code = main(argv)
    captured = capsysbinary.readouterr()
    return code, captured.out, captured.err


def write_payload(tmp_path, data):
    p = tmp_path / "job.json"
    p.write_text(json.dumps(data))
    return str(p)


def test_tensor_command_with_oracle(tmp_path, capsysbinary):
    path = write_payload(
        tmp_path,
        {"profile_e": [[0, 1], [1, 1]], "profile_f": [[0, 1], [1, 1]], "check_oracle": True},
    )
    code, out, _ = run_main(["hn-tensor", "--input", path], capsysbinary)
    assert code == 0
    doc = json.loads(out)
    assert doc["command"] == "hn-tensor"
    assert doc["result"]["oracle_agrees"] is True
    assert doc["result"]["tensor"]["pieces"] == [["0/1", 1], ["1/1", 2], ["2/1", 1]]


def test_sym_command_strategies(tmp_path, capsysbinary):
    path = write_payload(
        tmp_path, {"profile": [[0, 1], ["1/2", 2]], "power": 2, "check_strategies": True}
    )
    code, out, _ = run_main(["hn-sym", "--input", path], capsysbinary)
    assert code == 0
    doc = json.loads(out)
    assert doc["result"]["strategies_agree"] is True
    assert doc["result"]["sym"]["pieces"] == [["0/1", 1], ["1/2", 2], ["1/1", 3]]
    assert doc["result"]["sym"]["rank"] == 6


def test_measure_limit_with_plot(tmp_path, capsysbinary):
    path = write_payload(tmp_path, {"profile_e": [[0, 1], [1, 1]], "plot_points": 3})
    code, out, _ = run_main(["measure-limit", "--input", path], capsysbinary)
    assert code == 0
    doc = json.loads(out)
    assert doc["result"]["measure"]["pieces"] == [{"lo": "0/1", "hi": "1/1", "coeffs": ["1/1"]}]
    assert len(doc["result"]["plot"]) == 3


def test_measure_discrete_reports_w1(tmp_path, capsysbinary):
    path = write_payload(tmp_path, {"profile_e": [[0, 1], [1, 1]], "n": 2, "grid": 5000})
    code, out, _ = run_main(["measure-discrete", "--input", path], capsysbinary)
    assert code == 0
    doc = json.loads(out)
    atoms = doc["result"]["measure"]["atoms"]
    assert atoms == [["0/1", "1/3"], ["1/2", "1/3"], ["1/1", "1/3"]]
    w1 = doc["result"]["w1_vs_limit"]
    assert w1["grid_size"] == 5000
    # the exact distance is 5/36; the reported estimate is a decimal-free rational
    est = F(w1["value_approx"])
    assert abs(est - F(5, 36)) <= F(w1["error_bound"])


def test_volume_command_f1(tmp_path, capsysbinary):
    path = write_payload(tmp_path, {"profile_e": [[0, 1], [1, 1]]})
    code, out, _ = run_main(["volume", "--input", path], capsysbinary)
    assert code == 0
    doc = json.loads(out)
    assert doc["result"]["report"]["volume"] == "1/1"


def test_volume_both_scalings_flag(tmp_path, capsysbinary):
    path = write_payload(tmp_path, {"profile_e": [[0, 1], [1, 1]], "m": 2})
    code, out, _ = run_main(
        ["volume", "--input", path, "--both-scalings"], capsysbinary
    )
    assert code == 0
    doc = json.loads(out)
    assert doc["result"]["report"]["volume"] == "4/1"
    assert doc["result"]["report_literal_scaling"]["volume"] == "2/1"


def test_volume_oracle_n_flag(tmp_path, capsysbinary):
    path = write_payload(tmp_path, {"profile_e": [[0, 1], [1, 1]]})
    code, out, _ = run_main(
        ["volume-oracle", "--input", path, "--n", "1,2,4"], capsysbinary
    )
    assert code == 0
    doc = json.loads(out)
    assert doc["result"]["volume_exact"] == "1/1"
    table = doc["result"]["table"]
    assert [row["value"] for row in table] == ["2/1", "3/2", "5/4"]
    assert table[0]["delta_vs_exact"] == "1/1"


def test_cone_command_with_n_flag(capsysbinary):
    code, out, _ = run_main(
        ["cone", "--case", "split-rank2-picard1", "--n", "2"], capsysbinary
    )
    assert code == 0
    doc = json.loads(out)
    assert doc["result"]["eff"]["generators"] == [["1/1", "-2/1"], ["0/1", "1/1"]]
    assert doc["result"]["duality_check"] is True


def test_cone_membership_payload(tmp_path, capsysbinary):
    path = write_payload(
        tmp_path, {"case": "split-rank2-picard1", "n": 2, "membership": ["1", "-3"]}
    )
    code, out, _ = run_main(["cone", "--input", path], capsysbinary)
    assert code == 0
    doc = json.loads(out)
    got = doc["result"]["membership"]
    assert got["inside"] is False
    assert "separating_functional" in got


def test_decimal_output_mode(tmp_path, capsysbinary):
    path = write_payload(tmp_path, {"profile_e": [[0, 1], [1, 1]]})
    code, out, _ = run_main(
        ["volume", "--input", path, "--output-mode", "both"], capsysbinary
    )
    assert code == 0
    doc = json.loads(out)
    assert doc["result"]["report"]["volume"] == "1/1"
    assert doc["result_approx_decimal"]["report"]["volume"] == "1"
    assert "approximate" in doc["approx_note"]
    assert doc["inputs"]["a"] == "0/1"  # inputs stay exact in every mode


def test_repeated_runs_byte_identical(capsysbinary):
    outs = []
    for _ in range(2):
        code = main(["cone", "--case", "split-rank3-picard1", "--input", str(SAMPLES / "cone_rank3.json")])
        assert code == 0
        outs.append(capsysbinary.readouterr().out)
    assert outs[0] == outs[1]


def test_sample_jobs_all_run(capsysbinary):
    pairs = [
        ("hn-tensor", "tensor_two_step.json"),
        ("hn-sym", "sym_square.json"),
        ("measure-limit", "limit_uniform.json"),
        ("measure-discrete", "discrete_level2.json"),
        ("volume", "volume_f1.json"),
        ("volume", "volume_semistable.json"),
        ("volume", "volume_both_scalings.json"),
        ("volume-oracle", "volume_oracle_m2.json"),
        ("cone", "cone_rank2.json"),
        ("cone", "cone_rank3.json"),
        ("cone", "cone_ruled.json"),
        ("cone", "cone_semistable.json"),
    ]
    for cmd, name in pairs:
        code = main([cmd, "--input", str(SAMPLES / name)])
        out = capsysbinary.readouterr().out
        assert code == 0, name
        assert json.loads(out)["command"] == cmd


def test_missing_input_file_is_usage_error(capsysbinary):
    code, out, err = run_main(["volume", "--input", "/nonexistent.json"], capsysbinary)
    assert code == 2
    assert out == b""
    assert b"error" in err


def test_bad_json_payload(tmp_path, capsysbinary):
    p = tmp_path / "bad.json"
    p.write_text("{not json")
    code, _, err = run_main(["volume", "--input", str(p)], capsysbinary)
    assert code == 2
    assert b"not valid JSON" in err


def test_empty_profile_rejected(tmp_path, capsysbinary):
    path = write_payload(tmp_path, {"profile_e": []})
    code, _, err = run_main(["volume", "--input", path], capsysbinary)
    assert code == 2
    assert b"profile_e" in err


def test_bad_rational_names_field(tmp_path, capsysbinary):
    path = write_payload(tmp_path, {"profile_e": [["x", 1]]})
    code, _, err = run_main(["volume", "--input", path], capsysbinary)
    assert code == 2
    assert b"profile_e[0]" in err


def test_unknown_cone_case_exits_2():
    with pytest.raises(SystemExit) as exc:
        main(["cone", "--case", "no-such-case"])
    assert exc.value.code == 2


def test_missing_command_exits_2():
    with pytest.raises(SystemExit) as exc:
        main([])
    assert exc.value.code == 2


def test_missing_oracle_ns(tmp_path, capsysbinary):
    path = write_payload(tmp_path, {"profile_e": [[0, 1]]})
    code, _, err = run_main(["volume-oracle", "--input", path], capsysbinary)
    assert code == 2
    assert b"n values" in err


def test_run_rejects_unknown_mode():
    with pytest.raises(ValueError):
        run(JobSpec("volume", {"profile_e": [[0, 1]]}), output_mode="binary")


def test_run_rejects_unknown_command():
    with pytest.raises(ValueError):
        run(JobSpec("eigen", {}))


def test_parser_lists_all_commands():
    parser = build_parser()
    text = parser.format_help()
    for cmd in (
        "hn-tensor",
        "hn-sym",
        "measure-limit",
        "measure-discrete",
        "volume",
        "volume-oracle",
        "cone",
    ):
        assert cmd in text


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "hnvol", "cone", "--case", "split-rank2-picard1", "--n", "1"],
        capture_output=True,
    )
    assert proc.returncode == 0
    doc = json.loads(proc.stdout)
    assert doc["result"]["eff"]["generators"] == [["1/1", "-1/1"], ["0/1", "1/1"]]
