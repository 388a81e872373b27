import io
import json

import pytest

from orbitref.cli import main
from orbitref.report import dumps


def run(argv, capsys, stdin=None, monkeypatch=None):
    if stdin is not None:
        monkeypatch.setattr("sys.stdin", io.StringIO(stdin))
    code = main(argv)
    out, err = capsys.readouterr()
    return code, out, err


@pytest.fixture
def request_file(tmp_path):
    def write(obj, name="req.json"):
        p = tmp_path / name
        p.write_text(obj if isinstance(obj, str) else json.dumps(obj))
        return str(p)

    return write


ROT_SQRT2 = {"blocks": [{"rot": {"r": "1", "turns": {"basis": ["1", "sqrt2"], "coords": ["0", "1"]}}}]}


def verdict_pair(report):
    v = report["verdicts"]
    return (v["orbit"]["answer"], v["orbit"]["rule"]), (v["r_orbit"]["answer"], v["r_orbit"]["rule"])


# ------------------------------------------------------------ analyze


def test_analyze_block_spec(capsys, request_file):
    code, out, _ = run(["analyze", request_file(ROT_SQRT2)], capsys)
    assert code == 0
    rep = json.loads(out)
    assert verdict_pair(rep) == (("no", "lemma-hard-relation"), ("no", "non-split-independent-angle"))
    assert {rep["verdicts"][k]["certainty"] for k in ("orbit", "r_orbit")} == {"exact"}
    assert rep["provenance"]["options"]["precision_bits"] == 128


def test_analyze_dense_examples(capsys, request_file):
    code, out, _ = run(["analyze", request_file({"matrix": [[1, 1], [0, 1]]})], capsys)
    rep = json.loads(out)
    assert code == 0 and rep["verdicts"]["r_orbit"]["rule"] == "split-gap"
    assert rep["verdicts"]["r_orbit"]["evidence"]["two_largest"] == [2, 0]
    code, out, _ = run(["analyze", request_file({"matrix": [["0", "1"], ["0", "0"]]})], capsys)
    rep = json.loads(out)
    assert rep["verdicts"]["orbit"]["answer"] == "yes" and rep["verdicts"]["r_orbit"]["rule"] == "nilpotent"


def test_analyze_float_matrix_attaches_heuristic_certificate(capsys, request_file):
    code, out, _ = run(["analyze", request_file({"matrix": [[0.0, -1.0], [1.0, 0.0]]})], capsys)
    rep = json.loads(out)
    assert code == 0 and rep["structure"]["source"] == "numeric"
    assert any(c["kind"] == "numeric-extraction" and c["certainty"] == "heuristic" for c in rep["certificates"])


def test_analyze_stdin_and_batch(capsys, monkeypatch):
    batch = json.dumps([ROT_SQRT2, {"matrix": [[0, 1], [0, 0]]}])
    code, out, _ = run(["analyze", "-"], capsys, stdin=batch, monkeypatch=monkeypatch)
    reps = json.loads(out)
    assert code == 0 and len(reps) == 2
    assert reps[0]["verdicts"]["orbit"]["answer"] == "no" and reps[1]["verdicts"]["orbit"]["answer"] == "yes"


def test_analyze_with_witness(capsys, request_file):
    code, out, _ = run(["analyze", request_file(ROT_SQRT2), "--witness", "--n-max", "20000", "--samples", "3"], capsys)
    rep = json.loads(out)
    assert set(rep["witness"]) == {"orbit", "r_orbit"}
    assert rep["witness"]["orbit"]["commutator_norm"] > 0 and rep["witness"]["orbit"]["search_budget"] == 20000
    code, out, _ = run(["analyze", request_file({"matrix": [[1, 1], [0, 1]]}), "--witness"], capsys)
    assert "unavailable" in json.loads(out)["witness"]["r_orbit"]


def test_text_format(capsys, request_file):
    code, out, _ = run(["analyze", request_file(ROT_SQRT2), "--format", "text"], capsys)
    assert code == 0 and "orbit-reflexive: no" in out and "J_1(rotation r=1 turns=-1 + sqrt2)" in out
    code, out, _ = run(["relation", "--exact", "sqrt2", "sqrt3", "--format", "text"], capsys)
    assert out.strip() == "no relation (exact)"


def test_text_expression_rendering():
    from orbitref.cli import _expression

    assert _expression(["1", "sqrt2", "sqrt3"], ["1/2", "-1", "3"]) == "1/2 - sqrt2 + 3*sqrt3"
    assert _expression(["1", "sqrt2"], ["0", "-2/3"]) == "-2/3*sqrt2"
    assert _expression(["1"], ["0"]) == "0"


def test_report_round_trip_is_byte_identical(capsys, request_file):
    for obj in (ROT_SQRT2, {"matrix": [["1/2", 1], [0, "-3"]]}, {"matrix": [[0.6, -0.8], [0.8, 0.6]]}):
        code, out, _ = run(["analyze", request_file(obj)], capsys)
        assert code == 0 and dumps(json.loads(out)) + "\n" == out


def test_structure_json_reparses_to_same_report(capsys, request_file):
    # the report's own block listing, fed back as a block spec, reproduces the report
    _, out, _ = run(["analyze", request_file({"matrix": [[0, -2, 0], [1, 0, 0], [0, 0, "1/2"]]})], capsys)
    first = json.loads(out)
    blocks = []
    for b in first["structure"]["blocks"]:
        if b["kind"] == "rotation":
            blocks.append({"size": b["size"], "rot": {"r2": b["modulus_sq"], "turns": b["turns"]}})
        else:
            blocks.append({"size": b["size"], "split": b["eigenvalue"]})
    _, out2, _ = run(["analyze", request_file({"blocks": blocks}, "b.json")], capsys)
    second = json.loads(out2)
    assert verdict_pair(second) == verdict_pair(first)
    assert second["structure"]["blocks"] == first["structure"]["blocks"]


# ------------------------------------------------------------ relation


def test_relation_examples(capsys):
    code, out, _ = run(["relation", "--exact", "1:3"], capsys)
    rep = json.loads(out)
    assert code == 0 and rep["kind"] == "found" and rep["coefficients"] == [3, -1]
    _, out, _ = run(["relation", "--numeric", "1.41421356237", "0.70710678118"], capsys)
    assert json.loads(out)["coefficients"] == [1, -2, 0]
    _, out, _ = run(["relation", "--numeric", "sqrt2", "sqrt3", "--height", "10000"], capsys)
    rep = json.loads(out)
    assert rep["kind"] == "none-up-to-height" and rep["certainty"] == "heuristic"
    _, out, _ = run(["relation", "--exact", "sqrt2", "sqrt2+1/2"], capsys)
    assert json.loads(out)["certainty"] == "exact"


def test_relation_user_symbol(capsys):
    code, out, _ = run(["relation", "--numeric", "phi", "--symbol", "phi=1.6180339887498948482045868343656"], capsys)
    assert code == 0 and json.loads(out)["kind"] == "none-up-to-height"


# ------------------------------------------------------------ simulate


def test_simulate_examples(capsys):
    code, out, _ = run(["simulate", "--alphas", "1/4", "--N", "100", "--grid", "8"], capsys)
    assert code == 0 and json.loads(out)["density"]["empty_fraction"] == "1/2"
    _, out, _ = run(["simulate", "--alphas", "sqrt2", "--N", "10000", "--monomial", "1"], capsys)
    assert json.loads(out)["averages"][0]["within_bound"] is True
    _, out, _ = run(["simulate", "--alphas", "sqrt2", "sqrt3", "--N", "1000000", "--grid", "64"], capsys)
    assert json.loads(out)["density"]["empty_fraction"] == "0"


# ------------------------------------------------------------ witness


def test_witness_command(capsys, request_file):
    code, out, _ = run(["witness", request_file(ROT_SQRT2), "--mode", "orbit", "--n-max", "100000", "--samples", "4"],
                       capsys)
    rep = json.loads(out)
    assert code == 0 and rep["mode"] == "orbit" and rep["S"] == [[0.0, 1.0], [1.0, 0.0]]
    assert rep["seed"] == 0xC0FFEE and len(rep["samples"]) == 4


# ------------------------------------------------------------ exit codes


def test_exit_code_parse_error_has_position(capsys, request_file):
    code, _, err = run(["analyze", request_file('{"matrix": [[1, 2],\n  [3, 4]')], capsys)
    assert code == 2 and "line 2" in err and "column" in err
    code, _, err = run(["analyze", request_file({"matrix": [[1, 2], [3]]})], capsys)
    assert code == 2 and "$.matrix[1]" in err
    code, _, err = run(["analyze", request_file({"blocks": [{"rot": {"turns": 0.5}}]})], capsys)
    assert code == 2 and "$.blocks[0]" in err
    code, _, _ = run(["analyze", request_file({"matrix": [[1]], "blocks": []})], capsys)
    assert code == 2


def test_exit_code_extraction_failure(capsys, request_file):
    req = {"matrix": [[1.0, 0.0, 0.0], [0.0, 1.3, 0.0], [0.0, 0.0, 3.0]]}
    code, _, err = run(["analyze", request_file(req), "--tol", "0.2"], capsys)
    assert code == 3 and "extraction failed" in err


def test_exit_code_misuse(capsys, request_file):
    code, _, err = run(["witness", request_file({"matrix": [[0, 1], [0, 0]]})], capsys)
    assert code == 4 and "misuse" in err
    code, _, err = run(["witness", request_file({"matrix": [[1, 1], [0, 1]]})], capsys)
    assert code == 4


def test_missing_file_is_parse_error(capsys, tmp_path):
    code, _, _ = run(["analyze", str(tmp_path / "absent.json")], capsys)
    assert code == 2
