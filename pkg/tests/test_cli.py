"""Command-line interface tests: output formats, determinism, exit codes."""

import json

from vdkernel import cli
from vdkernel.verify import CheckReport

ORIGIN_JSON = '{"component":"O"}'
E2_JSON = '{"component":"E2","coords":[1.0]}'
E1_JSON = '{"component":"E1","coords":[0.0,0.0,1.0]}'


def run(capsys, argv):
    rc = cli.main(argv)
    captured = capsys.readouterr()
    return rc, captured.out, captured.err


# ---------------------------------------------------------------------------
# eval


def test_eval_origin_pair(capsys):
    rc, out, _ = run(capsys, ["eval", "--gamma", "1", "--t", "1",
                              "--x", ORIGIN_JSON, "--y", ORIGIN_JSON])
    assert rc == 0
    assert out.startswith("value=5.4165")
    assert out.strip().endswith("case=iv")


def test_eval_json_format(capsys):
    rc, out, _ = run(capsys, ["--format", "json", "eval", "--t", "1",
                              "--x", ORIGIN_JSON, "--y", E2_JSON])
    assert rc == 0
    d = json.loads(out)
    assert set(d) == {"case", "error_estimate", "value"}
    assert d["case"] == "iv"
    assert d["value"] > 0.0


def test_eval_case_tags(capsys):
    for xj, yj, tag in [(E1_JSON, E1_JSON, "case=i"), (E2_JSON, E2_JSON, "case=ii"),
                        (E1_JSON, E2_JSON, "case=iii")]:
        rc, out, _ = run(capsys, ["eval", "--t", "0.7", "--x", xj, "--y", yj])
        assert rc == 0
        assert out.strip().endswith(tag)


def test_eval_symmetric_bytes(capsys):
    _, out_xy, _ = run(capsys, ["eval", "--t", "0.9", "--x", E1_JSON, "--y", E2_JSON])
    _, out_yx, _ = run(capsys, ["eval", "--t", "0.9", "--x", E2_JSON, "--y", E1_JSON])
    assert out_xy == out_yx


def test_eval_flags_accepted_before_subcommand(capsys):
    _, out_after, _ = run(capsys, ["eval", "--gamma", "2", "--t", "1",
                                   "--x", ORIGIN_JSON, "--y", ORIGIN_JSON])
    _, out_before, _ = run(capsys, ["--gamma", "2", "eval", "--t", "1",
                                    "--x", ORIGIN_JSON, "--y", ORIGIN_JSON])
    assert out_after == out_before


# ---------------------------------------------------------------------------
# exit codes


def test_usage_errors_exit_2(capsys):
    cases = [
        ["eval", "--t", "-1", "--x", ORIGIN_JSON, "--y", ORIGIN_JSON],
        ["eval", "--t", "1", "--x", "not json", "--y", ORIGIN_JSON],
        ["eval", "--t", "1", "--x", '{"component":"E9"}', "--y", ORIGIN_JSON],
        ["--gamma", "-1", "eval", "--t", "1", "--x", ORIGIN_JSON, "--y", ORIGIN_JSON],
        ["table", "--t-list", "1", "--radius-grid", "1", "--cases", "v"],
        ["table", "--t-list", "", "--radius-grid", "1"],
        ["table", "--t-list", "abc", "--radius-grid", "1"],
        ["simulate", "--plan", "{\"scheme\":\"nope\"}"],
        ["simulate", "--plan", "not json"],
    ]
    for argv in cases:
        rc, _, err = run(capsys, argv)
        assert rc == 2, argv
        assert err != "", argv


def test_argparse_errors_exit_2(capsys):
    rc, _, _ = run(capsys, ["frobnicate"])
    assert rc == 2
    rc, _, _ = run(capsys, ["eval", "--x", ORIGIN_JSON, "--y", ORIGIN_JSON])
    assert rc == 2


def test_help_exits_0(capsys):
    rc, out, _ = run(capsys, ["--help"])
    assert rc == 0
    assert "eval" in out and "simulate" in out


def test_numerical_failure_exit_3(capsys):
    # truncation point ~1/sqrt(t) outruns the panel budget at this t
    rc, out, err = run(capsys, ["eval", "--t", "1e-10",
                                "--x", E2_JSON, "--y", '{"component":"E2","coords":[2.0]}'])
    assert rc == 3
    assert out == ""
    assert "numerical failure" in err


def test_check_failure_exit_1(capsys, monkeypatch):
    bad = CheckReport(name="normalization[forced]", computed=2.0, reference=1.0,
                      abs_error=1.0, tolerance=1e-6)
    monkeypatch.setattr(cli, "check_normalization",
                        lambda *a, **k: bad)
    rc, out, _ = run(capsys, ["verify", "--suite", "fast"])
    assert rc == 1
    assert "passed 5/8" in out


# ---------------------------------------------------------------------------
# table


def test_table_header_and_shape(capsys):
    rc, out, _ = run(capsys, ["table", "--t-list", "0.5,1.0",
                              "--radius-grid", "0.5,1.5", "--cases", "i,ii,iv"])
    assert rc == 0
    lines = out.strip().split("\n")
    assert lines[0] == "t,case,rx,ry,value,err"
    # per time: cases i and ii give 2x2 rows each, case iv gives 2
    assert len(lines) == 1 + 2 * (4 + 4 + 2)
    for line in lines[1:]:
        fields = line.split(",")
        assert len(fields) == 6
        assert fields[1] in ("i", "ii", "iv")
        for k in (0, 2, 3, 4, 5):
            float(fields[k])


def test_table_float_format_pinned(capsys):
    _, out, _ = run(capsys, ["table", "--t-list", "1", "--radius-grid", "1",
                             "--cases", "ii"])
    row = out.strip().split("\n")[1]
    assert row.startswith("1.00000000000000000e+00,ii,")
    # 17 digits after the point, everywhere
    for field in row.split(",")[2:]:
        mantissa = field.split("e")[0]
        assert len(mantissa.split(".")[1]) == 17


def test_table_symmetry_across_radii(capsys):
    _, out, _ = run(capsys, ["table", "--t-list", "0.8",
                             "--radius-grid", "0.5,2.0", "--cases", "i"])
    rows = [line.split(",") for line in out.strip().split("\n")[1:]]
    byrad = {(r[2], r[3]): r[4] for r in rows}
    assert byrad[(rows[1][2], rows[1][3])] == byrad[(rows[1][3], rows[1][2])]


def test_table_rejects_nonpositive_grid(capsys):
    rc, _, _ = run(capsys, ["table", "--t-list", "1,-2", "--radius-grid", "1"])
    assert rc == 2
    rc, _, _ = run(capsys, ["table", "--t-list", "1", "--radius-grid", "0"])
    assert rc == 2


def test_out_file_matches_stdout(capsys, tmp_path):
    argv = ["table", "--t-list", "1", "--radius-grid", "0.5,1.0", "--cases", "iv"]
    _, out, _ = run(capsys, argv)
    path = tmp_path / "table.csv"
    rc, piped, _ = run(capsys, ["--out", str(path)] + argv)
    assert rc == 0
    assert piped == ""
    assert path.read_text(encoding="utf-8") == out


# ---------------------------------------------------------------------------
# verify


def test_verify_fast_deterministic_bytes(capsys):
    rc1, out1, _ = run(capsys, ["verify", "--suite", "fast", "--seed", "7"])
    rc2, out2, _ = run(capsys, ["verify", "--suite", "fast", "--seed", "7"])
    assert rc1 == rc2 == 0
    assert out1 == out2
    lines = out1.strip().split("\n")
    assert lines[-1] == "passed 8/8"
    for line in lines[:-1]:
        d = json.loads(line)
        assert d["passed"] is True
        assert d["abs_error"] <= d["tolerance"]


def test_verify_covers_each_check_kind(capsys):
    _, out, _ = run(capsys, ["verify", "--suite", "fast"])
    names = [json.loads(s)["name"] for s in out.strip().split("\n")[:-1]]
    for stem in ("normalization", "chapman-kolmogorov", "killed-semigroup",
                 "convolution", "origin-continuity"):
        assert any(n.startswith(stem) for n in names), stem


# ---------------------------------------------------------------------------
# simulate


def test_simulate_endpoint_csv(capsys):
    plan = ('{"scheme":"signed","x0":0.0,"horizon":0.5,"dt":0.01,'
            '"n_paths":50,"seed":3}')
    rc, out, _ = run(capsys, ["simulate", "--plan", plan])
    assert rc == 0
    lines = out.strip().split("\n")
    assert lines[0] == "path_id,component,r_or_coords,hit_origin,first_passage_time"
    assert len(lines) == 51
    for i, line in enumerate(lines[1:]):
        fields = line.split(",")
        assert fields[0] == str(i)
        assert fields[1] in ("E1", "E2", "O")
        assert fields[3] in ("0", "1")
        # passage time present exactly when the path hit
        assert (fields[4] != "") == (fields[3] == "1")


def test_simulate_deterministic_bytes(capsys):
    plan = ('{"scheme":"reflected","x0":1.0,"horizon":0.3,"dt":0.01,'
            '"n_paths":40,"seed":9}')
    _, out1, _ = run(capsys, ["simulate", "--plan", plan])
    _, out2, _ = run(capsys, ["simulate", "--plan", plan])
    assert out1 == out2
    comps = {line.split(",")[1] for line in out1.strip().split("\n")[1:]}
    assert comps <= {"E2", "O"}


def test_simulate_plan_from_file(capsys, tmp_path):
    plan = {"scheme": "full", "x0": {"component": "E1", "coords": [0.3, 0.0, 0.0]},
            "horizon": 0.25, "dt": 0.005, "n_paths": 12, "seed": 1}
    path = tmp_path / "plan.json"
    path.write_text(json.dumps(plan), encoding="utf-8")
    rc, out, _ = run(capsys, ["simulate", "--plan", "@" + str(path)])
    assert rc == 0
    lines = out.strip().split("\n")[1:]
    assert len(lines) == 12
    for line in lines:
        comp, coords = line.split(",")[1:3]
        if comp == "E1":
            assert len(coords.split(";")) == 3
        elif comp == "E2":
            float(coords)
        else:
            assert coords == "0"


def test_simulate_missing_plan_file(capsys, tmp_path):
    rc, _, err = run(capsys, ["simulate", "--plan", "@" + str(tmp_path / "nope.json")])
    assert rc == 2
    assert "plan file" in err
