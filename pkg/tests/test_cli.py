"""End-to-end checks of the command line interface.

Each test drives cli.main(argv) in process and inspects stdout,
stderr, and the exit code.  Expected result strings were frozen
from the high-precision oracle.
"""

import io
import json

import jsonschema
import pytest

from geocalc import cli

A_2_1971_181 = "1896.99842083110790327024929966961121487868624225173871384836"


def run(capsys, *argv):
    code = cli.main(list(argv))
    cap = capsys.readouterr()
    return code, cap.out, cap.err


def run_json(capsys, *argv):
    code, out, err = run(capsys, *argv, "--json")
    assert code == 0 and err == ""
    payloads = [json.loads(line) for line in out.splitlines()]
    for p in payloads:
        jsonschema.validate(p, cli.RESULT_SCHEMA)
    return payloads


def test_pow_worked_example(capsys):
    code, out, err = run(capsys, "pow", "32357", "10", "--digits", "12")
    assert (code, out, err) == (0, "1.25800535315e45\n", "")


def test_pow_negative_exponent(capsys):
    code, out, _ = run(capsys, "pow", "32357", "-10", "--digits", "12")
    assert (code, out) == (0, "7.94909177049e-46\n")


def test_div_worked_example(capsys):
    code, out, _ = run(capsys, "div", "5.972e24", "7.348e22")
    assert (code, out) == (0, "8.1274e1\n")


def test_recip_negative_positional_needs_dashes(capsys):
    code, out, _ = run(capsys, "recip", "--digits", "8", "--",
                       "-1.602176634e-19")
    assert (code, out) == (0, "-6.2415091e18\n")


def test_gmean_worked_example(capsys):
    code, out, _ = run(capsys, "gmean", "5.972e24", "7.348e22")
    assert (code, out) == (0, "6.6244e23\n")


def test_root_and_powfrac(capsys):
    code, out, _ = run(capsys, "root", "0.5972e25", "6", "--digits", "6")
    assert (code, out) == (0, "1.34696e4\n")
    code, out, _ = run(capsys, "powfrac", "0.5972e25", "19", "7",
                       "--digits", "10")
    assert (code, out) == (0, "1.776102502e67\n")


def test_ln_unit_prints_zero(capsys):
    code, out, _ = run(capsys, "ln", "1")
    assert (code, out) == (0, "0\n")


def test_ln_and_antilog(capsys):
    code, out, _ = run(capsys, "ln", "151", "--digits", "8")
    assert (code, out) == (0, "5.0172799e0\n")
    code, out, _ = run(capsys, "antilog", "2.5", "--digits", "8")
    assert (code, out) == (0, "1.2182494e1\n")


def test_euler_reports_bound(capsys):
    code, out, _ = run(capsys, "euler", "1000000", "--digits", "8")
    assert (code, out) == (0, "2.7182805e0 (error < 1.36e-6)\n")


def test_solve_n(capsys):
    code, out, _ = run(capsys, "solve-n", "--x", "1.1", "--a",
                       "2.5937424601")
    assert (code, out) == (0, "10\n")


def test_solve_mn(capsys):
    code, out, _ = run(capsys, "solve-mn", "--x", "2", "--a", A_2_1971_181)
    assert (code, out) == (0, "[10; 1, 8, 20] = 1971/181\n")


def test_json_payloads_match_schema(capsys):
    (p,) = run_json(capsys, "pow", "32357", "10", "--digits", "12")
    assert p == {"inputs": ["32357", "10"], "op": "pow",
                 "result": "1.25800535315e45"}
    (p,) = run_json(capsys, "solve-mn", "--x", "2", "--a", A_2_1971_181)
    assert p["cf"] == "[10; 1, 8, 20]"
    assert p["result"] == "1971/181"


def test_device_mode_reports_half_width(capsys):
    code, out, _ = run(capsys, "pow", "0.87", "6", "--resolution", "1e-5")
    assert (code, out) == (0, "4.3363e-1 +/- 2.38e-5\n")
    (p,) = run_json(capsys, "pow", "0.87", "6", "--resolution", "1e-5")
    assert p["error_bound"] == "2.38e-5"
    assert p["result"] == "4.3363e-1"


def test_oracle_backend_agrees(capsys):
    _, direct, _ = run(capsys, "root", "5.972e24", "4", "--digits", "6")
    _, oracle, _ = run(capsys, "root", "5.972e24", "4", "--digits", "6",
                       "--backend", "oracle")
    assert direct == oracle == "1.56326e6\n"


def test_output_is_deterministic(capsys):
    one = run(capsys, "gmean", "5.972e24", "7.348e22", "--json")
    two = run(capsys, "gmean", "5.972e24", "7.348e22", "--json")
    assert one == two


def test_usage_errors_exit_one(capsys):
    for argv in (["nosuch"],
                 ["pow", "2", "bad"],
                 ["pow", "2", "4", "--backend", "oracle",
                  "--emit-trace", "t.trace"],
                 ["pow", "2", "4", "--backend", "oracle",
                  "--resolution", "1e-5"]):
        code, out, err = run(capsys, *argv)
        assert code == 1 and out == ""
        assert err.startswith("usage error:")


def test_domain_errors_exit_two(capsys):
    code, _, err = run(capsys, "recip", "0")
    assert code == 2 and "ZeroNotRepresentable" in err
    code, _, err = run(capsys, "root", "--digits", "6", "--", "-16", "4")
    assert code == 2 and "EvenRootOfNegative" in err


def test_missing_script_exits_two(capsys, tmp_path):
    code, _, err = run(capsys, "simulate", str(tmp_path / "absent.txt"))
    assert code == 2 and "absent.txt" in err


def test_simulate_script(capsys, tmp_path):
    script = tmp_path / "ops.txt"
    script.write_text("# demo script\n"
                      "pow 0.87 6\n"
                      "recip 8 resolution=1e-10\n"
                      "\n"
                      "div 5.972e24 7.348e22\n")
    code, out, _ = run(capsys, "simulate", str(script))
    assert code == 0
    assert out.splitlines() == ["4.3363e-1 +/- 2.38e-5",
                                "1.2500e-1 +/- 5.08e-11",
                                "8.1270e1 +/- 9.55e-3"]
    payloads = run_json(capsys, "simulate", str(script))
    assert [p["result"] for p in payloads] == ["4.3363e-1", "1.2500e-1",
                                               "8.1270e1"]
    assert all(p["op"] == "simulate" for p in payloads)


def test_simulate_reads_stdin(capsys, monkeypatch):
    monkeypatch.setattr("sys.stdin", io.StringIO("pow 0.87 6\n"))
    code, out, _ = run(capsys, "simulate", "-")
    assert (code, out) == (0, "4.3363e-1 +/- 2.38e-5\n")


def test_trace_emission_and_diagram_subcommand(capsys, tmp_path):
    trace = tmp_path / "pow.trace"
    svg_a = tmp_path / "a.svg"
    code, _, _ = run(capsys, "pow", "0.6", "4", "--emit-trace", str(trace),
                     "--diagram", str(svg_a))
    assert code == 0
    assert trace.read_text().splitlines()[0].startswith(
        "construct-angle-from-cosine")
    svg_b = tmp_path / "b.svg"
    code, _, _ = run(capsys, "diagram", str(trace), str(svg_b))
    assert code == 0
    assert svg_a.read_bytes() == svg_b.read_bytes()
    (p,) = run_json(capsys, "pow", "0.6", "4", "--emit-trace", str(trace))
    assert p["trace_path"] == str(trace)


def test_device_cf_solver(capsys):
    code, out, _ = run(capsys, "solve-mn", "--x", "2", "--a", A_2_1971_181,
                       "--resolution", "1e-10")
    assert (code, out) == (0, "1.0890e1 +/- 1.57e-9\n")
