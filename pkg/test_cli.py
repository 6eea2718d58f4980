"""
Tests for the liecurv command line: exit codes, formats and report files
"""
import csv
import json
import os
import sys
import tempfile
from pathlib import Path

# Add the current directory to Python path
sys.path.insert(0, os.path.dirname(os.path.abspath(__file__)))

from cli import EXIT_OK, EXIT_PARTIAL, EXIT_USAGE, build_parser, main


def run_to_file(argv, name="report.out"):
    """Run the CLI with --out in a scratch directory; returns (exit code, file text or None)"""
    with tempfile.TemporaryDirectory() as tmp:
        target = Path(tmp) / name
        code = main(list(argv) + ["--out", str(target)])
        text = target.read_text(encoding="utf-8") if target.exists() else None
    return code, text


def test_roots_json():
    code, text = run_to_file(["roots", "G2", "--format", "json"])
    assert code == EXIT_OK
    payload = json.loads(text)
    assert payload["type"] == "G2"
    assert payload["marks"] == [3, 2]
    assert payload["gram"][1][1] == "1/4"
    assert len(payload["positive"]) == 6


def test_roots_table_and_csv():
    code, text = run_to_file(["roots", "C3"])
    assert code == EXIT_OK
    assert text.startswith("Root system C3 (rank 3, 9 positive roots)")
    code, text = run_to_file(["roots", "C3", "--format", "csv"])
    rows = list(csv.reader(text.splitlines()))
    assert rows[0] == ["index", "height", "label", "coords"]
    assert len(rows) == 10


def test_invalid_type_exits_2():
    for bad in ("E5", "X2", "G3"):
        code, text = run_to_file(["roots", bad])
        assert code == EXIT_USAGE
        assert text is None


def test_auto3_all_c3():
    code, text = run_to_file(["auto3", "C3", "--all", "--format", "json"])
    assert code == EXIT_OK
    payload = json.loads(text)
    assert {s["isotropy"] for s in payload["spaces"]} == {"A2 + T1", "C2 + T1", "A1 + A1 + T1"}


def test_auto3_single_spec_and_dedup():
    code, text = run_to_file(["auto3", "G2", "A3IV", "1", "--format", "json"])
    assert code == EXIT_OK
    space = json.loads(text)["spaces"][0]
    assert space["isotropy_compact"] == "su(3)"
    assert space["dim_m"] == 6
    code, text = run_to_file(["auto3", "A2", "--all", "--dedup", "--format", "json"])
    assert len(json.loads(text)["spaces"]) == 2


def test_auto3_mark_violation_exits_2():
    assert run_to_file(["auto3", "A2", "A3III", "1"])[0] == EXIT_USAGE
    assert run_to_file(["auto3", "C3"])[0] == EXIT_USAGE
    assert run_to_file(["auto3", "C3", "A3III", "x"])[0] == EXIT_USAGE


def test_curv_cp3_report():
    code, text = run_to_file(["curv", "cp3-sp", "--starts", "16", "--seed", "42", "--format", "json"])
    assert code == EXIT_OK
    payload = json.loads(text)
    assert abs(payload["delta"] - 0.0625) <= 1e-4
    assert payload["basis_kmin"] == "1/24"
    assert payload["basis_kmax"] == "2/3"
    assert payload["scale"] == "1/2"
    assert payload["flat_witness"] is None
    assert payload["dim_m"] == 6


def test_curv_scale_flag():
    code, text = run_to_file(["curv", "cp3-sp", "--starts", "4", "--scale", "1", "--format", "json"])
    assert code == EXIT_OK
    payload = json.loads(text)
    assert payload["scale"] == "1/1"
    assert payload["basis_kmax"] == "1/3"


def test_curv_is_byte_deterministic():
    argv = ["curv", "cp3-sp", "--starts", "8", "--seed", "7", "--format", "json"]
    first = run_to_file(argv)
    second = run_to_file(argv)
    assert first[0] == second[0] == EXIT_OK
    assert first[1] == second[1]


def test_curv_csv():
    code, text = run_to_file(["curv", "s6", "--starts", "4", "--format", "csv"])
    assert code == EXIT_OK
    rows = list(csv.reader(text.splitlines()))
    assert rows[0] == ["key", "value"]
    assert rows[1] == ["space", "s6"]


def test_curv_bad_inputs_exit_2():
    assert run_to_file(["curv", "cp4-sp"])[0] == EXIT_USAGE
    assert run_to_file(["curv", "nowhere"])[0] == EXIT_USAGE
    assert run_to_file(["curv", "cp3-sp", "--scale", "0"])[0] == EXIT_USAGE
    assert run_to_file(["curv", "cp3-sp", "--scale", "a/b"])[0] == EXIT_USAGE
    assert run_to_file(["curv", "cp3-sp", "--starts", "0"])[0] == EXIT_USAGE
    assert run_to_file(["curv", "A1:A3I:1"])[0] == EXIT_USAGE


def test_curv_partial_convergence_exits_3():
    code, text = run_to_file(["curv", "cp3-sp", "--starts", "2", "--max-iter", "1", "--format", "json"])
    assert code == EXIT_PARTIAL
    payload = json.loads(text)
    assert payload["converged_starts"] == 0
    assert payload["basis_kmax"] == "2/3"


def test_unwritable_out_exits_2():
    with tempfile.TemporaryDirectory() as tmp:
        target = Path(tmp) / "missing" / "report.json"
        assert main(["roots", "A2", "--out", str(target)]) == EXIT_USAGE
        assert main(["curv", "cp3-sp", "--starts", "2", "--out", str(target)]) == EXIT_USAGE
        assert not target.exists()


def test_tol_flag():
    args = build_parser().parse_args(["curv", "s6", "--tol", "1e-6"])
    assert args.tol == 1e-6
    assert run_to_file(["curv", "cp3-sp", "--tol", "0"])[0] == EXIT_USAGE
    assert run_to_file(["curv", "cp3-sp", "--tol", "tiny"])[0] == EXIT_USAGE
    code, text = run_to_file(["curv", "cp3-sp", "--starts", "4", "--tol", "1e-6", "--format", "json"])
    assert code == EXIT_OK
    assert json.loads(text)["converged_starts"] == 4


def test_parser_defaults():
    args = build_parser().parse_args(["curv", "s6"])
    assert args.fmt == "table"
    assert args.out is None
    assert args.starts >= 1
    assert main(["--help"]) == EXIT_OK
    assert main([]) == EXIT_USAGE


def main_runner():
    """Run every test in this file without pytest"""
    print("🧪 CLI tests")
    print("=" * 30)
    tests = [fn for name, fn in sorted(globals().items()) if name.startswith("test_") and callable(fn)]
    failed = []
    for test in tests:
        try:
            test()
            print(f"✅ {test.__name__}")
        except Exception as e:
            failed.append(test.__name__)
            print(f"❌ {test.__name__}: {e}")
    print(f"\n{len(tests) - len(failed)}/{len(tests)} passed")
    return not failed


if __name__ == "__main__":
    sys.exit(0 if main_runner() else 1)
