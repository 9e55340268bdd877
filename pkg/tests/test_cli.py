"""Command-line interface: exit codes, file formats, determinism, config."""

import functools
import json
import math

import pytest

from ctinv import cli
from ctinv.consistency import scan_zeros

REF1_LINE = "0 0.6283185307179586\n"


def _run(capsys, argv):
    """Invoke the CLI in-process and hand back (exit code, stdout, stderr)."""
    code = cli.main(argv)
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def _report(out: str) -> dict:
    return json.loads(out)


# ---------------------------------------------------------------- check


def test_check_admissible_exit_ok(capsys):
    code, out, _ = _run(capsys, ["check", "--ells", "0", "--T", "-0.4"])
    assert code == 0
    rep = _report(out)
    assert rep["admissible"] is True
    assert rep["settled"] is True
    assert rep["zeros"] == []
    assert rep["single_channel_rule"] is True
    assert rep["implied_phases"][0] == pytest.approx(0.2 * math.pi, abs=1e-12)
    assert rep["moment_closed_form"] == pytest.approx(-0.8, abs=1e-12)
    assert rep["moment_numeric"] == pytest.approx(-0.8, abs=1e-2)
    assert rep["tail_closed_form"]["alpha"] == pytest.approx(
        rep["tail_fit"]["alpha"], abs=1e-3
    )
    assert rep["sum_rules"]["coeff_sum"] == pytest.approx(0.24, abs=1e-6)


def test_check_inadmissible_exit_3(capsys):
    code, out, _ = _run(capsys, ["check", "--ells", "0", "--T", "2"])
    assert code == 3
    rep = _report(out)
    assert rep["admissible"] is False
    assert rep["settled"] is True
    assert rep["zeros"][0] == pytest.approx(2.4431401944940823, abs=1e-6)
    assert rep["single_channel_rule"] is False
    assert rep["moment_numeric"] is None


def test_check_unsettled_exit_4(capsys, monkeypatch):
    # forbid range doubling so a short scan must report itself unsettled
    monkeypatch.setattr(
        cli, "scan_zeros", functools.partial(scan_zeros, max_doublings=0)
    )
    code, out, _ = _run(
        capsys, ["check", "--ells", "0", "--T", "-0.4", "--lambda", "60"]
    )
    assert code == 4
    rep = _report(out)
    assert rep["settled"] is False
    assert rep["admissible"] is False
    assert rep["zeros"] == []


def test_check_collision_exit_1(capsys):
    code, _, err = _run(capsys, ["check", "--ells", "0", "--T", "0"])
    assert code == 1
    assert "ctinv:" in err


# ---------------------------------------------------------------- invert


def test_invert_reference_single_phase(tmp_path, capsys):
    phases = tmp_path / "phases.txt"
    phases.write_text(REF1_LINE)
    out_csv = tmp_path / "pot.csv"
    code, out, _ = _run(
        capsys,
        [
            "invert",
            "--phases",
            str(phases),
            "--lambda",
            "80",
            "--step",
            "0.01",
            "--out",
            str(out_csv),
        ],
    )
    assert code == 0
    rep = _report(out)
    assert rep["command"] == "invert"
    assert rep["zero_potential"] is False
    assert rep["chosen_T"] == [pytest.approx(-0.4, abs=1e-12)]
    assert rep["q_origin"] == pytest.approx(-1.4545, abs=2e-3)
    assert rep["moment_closed_form"] == pytest.approx(-0.8, abs=1e-12)
    assert rep["moment_numeric"] == pytest.approx(-0.8, abs=2e-2)
    assert rep["out"] == str(out_csv)
    # every rejected candidate comes with the zero that killed it
    rejected = [c for c in rep["candidates"] if c["T"] != [pytest.approx(-0.4)]]
    assert rejected and all(c["zeros"] for c in rejected)

    text = out_csv.read_text()
    assert "# q0 = " in text
    assert "# S = 0" in text
    assert "# T = -0.4" in text
    assert "r,q" in text


def test_invert_determinism(tmp_path, capsys):
    phases = tmp_path / "phases.txt"
    phases.write_text(REF1_LINE)
    reports = []
    blobs = []
    for tag in ("a", "b"):
        out_csv = tmp_path / f"pot_{tag}.csv"
        code, out, _ = _run(
            capsys,
            [
                "invert",
                "--phases",
                str(phases),
                "--lambda",
                "80",
                "--step",
                "0.01",
                "--out",
                str(out_csv),
            ],
        )
        assert code == 0
        rep = _report(out)
        rep.pop("timing_seconds")
        rep.pop("out")
        reports.append(rep)
        blobs.append(out_csv.read_bytes())
    assert blobs[0] == blobs[1]
    assert reports[0] == reports[1]


def test_invert_csv_twelve_digits_idempotent(tmp_path, capsys):
    phases = tmp_path / "phases.txt"
    phases.write_text(REF1_LINE)
    out_csv = tmp_path / "pot.csv"
    code, _, _ = _run(
        capsys,
        [
            "invert",
            "--phases",
            str(phases),
            "--lambda",
            "80",
            "--step",
            "0.01",
            "--out",
            str(out_csv),
        ],
    )
    assert code == 0
    lines = out_csv.read_text().splitlines()
    data = [ln for ln in lines if not ln.startswith("#") and ln != "r,q"]
    assert len(data) == 8000
    for ln in data[:: len(data) // 97]:
        for tok in ln.split(","):
            # parse-serialize round trip leaves every field unchanged
            assert format(float(tok), ".12g") == tok


def test_invert_zero_phases_sentinel(tmp_path, capsys):
    phases = tmp_path / "phases.txt"
    phases.write_text("0 0\n")
    out_csv = tmp_path / "zero.csv"
    code, out, _ = _run(
        capsys,
        [
            "invert",
            "--phases",
            str(phases),
            "--lambda",
            "60",
            "--step",
            "0.01",
            "--out",
            str(out_csv),
        ],
    )
    assert code == 0
    rep = _report(out)
    assert rep["zero_potential"] is True
    assert rep["chosen_T"] is None
    assert rep["moment_closed_form"] == 0.0
    r, q, tail, _meta = cli.read_potential_csv(str(out_csv))
    assert float(max(abs(q))) == 0.0
    assert tail is not None and tail.alpha == 0.0


def test_invert_no_admissible_exit_3(tmp_path, capsys):
    # delta0 > pi/4 pushes the k=0 branch below the L > -1/2 floor and every
    # remaining branch has L - ell > 1, which always produces a zero
    phases = tmp_path / "phases.txt"
    phases.write_text("0 1.4\n")
    code, out, _ = _run(capsys, ["invert", "--phases", str(phases)])
    assert code == 3
    rep = _report(out)
    assert rep["chosen_T"] is None
    assert rep["candidates"]
    assert all(not c["admissible"] for c in rep["candidates"])
    assert all(c["zeros"] for c in rep["candidates"])


def test_invert_malformed_file_reports_line(tmp_path, capsys):
    phases = tmp_path / "phases.txt"
    phases.write_text("0 0.3\nnot a pair at all\n")
    code, _, err = _run(capsys, ["invert", "--phases", str(phases)])
    assert code == 2
    assert "line 2" in err


def test_invert_empty_phase_file_is_usage_error(tmp_path, capsys):
    phases = tmp_path / "phases.txt"
    phases.write_text("# only a comment\n")
    code, _, err = _run(capsys, ["roundtrip", "--phases", str(phases)])
    assert code == 2
    assert "no phase shifts" in err


# ---------------------------------------------------------------- forward


def test_forward_woods_saxon_reference(tmp_path, capsys):
    out_csv = tmp_path / "phases.csv"
    code, out, _ = _run(
        capsys,
        ["forward", "--ws", "1,1,0.4", "--ellmax", "1", "--out", str(out_csv)],
    )
    assert code == 0
    rep = _report(out)
    deltas = {row["ell"]: row["delta"] for row in rep["phases"]}
    assert deltas[0] == pytest.approx(0.4389, abs=2e-3)
    assert deltas[1] == pytest.approx(0.1246, abs=2e-3)
    text = out_csv.read_text()
    assert text.splitlines()[0].startswith("# ctinv phases v")
    assert "ell,delta,b_norm,residual" in text
    for ln in text.splitlines():
        if ln.startswith("#") or ln.startswith("ell"):
            continue
        toks = ln.split(",")
        assert len(toks) == 4
        for tok in toks[1:]:
            assert format(float(tok), ".12g") == tok


def test_forward_determinism(tmp_path, capsys):
    blobs = []
    for tag in ("a", "b"):
        out_csv = tmp_path / f"ph_{tag}.csv"
        code, _, _ = _run(
            capsys,
            ["forward", "--ws", "1,1,0.4", "--ellmax", "1", "--out", str(out_csv)],
        )
        assert code == 0
        blobs.append(out_csv.read_bytes())
    assert blobs[0] == blobs[1]


def test_forward_reads_inverted_potential(tmp_path, capsys):
    phases = tmp_path / "phases.txt"
    phases.write_text(REF1_LINE)
    pot_csv = tmp_path / "pot.csv"
    code, _, _ = _run(
        capsys,
        [
            "invert",
            "--phases",
            str(phases),
            "--lambda",
            "80",
            "--step",
            "0.01",
            "--out",
            str(pot_csv),
        ],
    )
    assert code == 0
    out_csv = tmp_path / "ph.csv"
    code, out, _ = _run(
        capsys,
        [
            "forward",
            "--potential",
            str(pot_csv),
            "--ellmax",
            "0",
            "--out",
            str(out_csv),
        ],
    )
    assert code == 0
    rep = _report(out)
    assert rep["phases"][0]["delta"] == pytest.approx(0.2 * math.pi, abs=2e-3)


def test_forward_zero_potential_zero_table(tmp_path, capsys):
    phases = tmp_path / "phases.txt"
    phases.write_text("0 0\n")
    pot_csv = tmp_path / "zero.csv"
    code, _, _ = _run(
        capsys,
        [
            "invert",
            "--phases",
            str(phases),
            "--lambda",
            "60",
            "--step",
            "0.01",
            "--out",
            str(pot_csv),
        ],
    )
    assert code == 0
    out_csv = tmp_path / "ph.csv"
    code, out, _ = _run(
        capsys,
        ["forward", "--potential", str(pot_csv), "--ellmax", "2", "--out", str(out_csv)],
    )
    assert code == 0
    rep = _report(out)
    assert len(rep["phases"]) == 3
    for row in rep["phases"]:
        assert abs(row["delta"]) < 1e-7


def test_forward_bad_ws_descriptor(capsys, tmp_path):
    code, _, err = _run(
        capsys,
        ["forward", "--ws", "1,1", "--ellmax", "0", "--out", str(tmp_path / "x.csv")],
    )
    assert code == 2
    assert "DEPTH,RADIUS,DIFFUSENESS" in err


# ---------------------------------------------------------------- roundtrip


def test_roundtrip_single_phase(tmp_path, capsys):
    phases = tmp_path / "phases.txt"
    phases.write_text(REF1_LINE)
    code, out, _ = _run(
        capsys,
        ["roundtrip", "--phases", str(phases), "--lambda", "80", "--step", "0.01"],
    )
    assert code == 0
    rep = _report(out)
    assert rep["command"] == "roundtrip"
    assert rep["max_phase_discrepancy"] < 2e-3
    # S = {0} is even-parity, so odd channels must stay empty
    leak = rep["parity_leakage"]
    assert leak["ells"] == [1]
    assert leak["max_abs_tan"] < 5e-3


def test_roundtrip_zero_phases(tmp_path, capsys):
    phases = tmp_path / "phases.txt"
    phases.write_text("0 0\n")
    code, out, _ = _run(capsys, ["roundtrip", "--phases", str(phases)])
    assert code == 0
    rep = _report(out)
    assert rep["zero_potential"] is True
    assert rep["max_phase_discrepancy"] == 0.0


# ---------------------------------------------------------------- map


def test_map_contains_reference_cell(tmp_path, capsys):
    out_csv = tmp_path / "map.csv"
    code, out, _ = _run(
        capsys,
        [
            "map",
            "--ells",
            "0,1",
            "--box=-0.4,-0.2,0.85,0.95",
            "--res",
            "0.1",
            "--out",
            str(out_csv),
        ],
    )
    assert code == 0
    rep = _report(out)
    assert rep["S"] == [0, 1]
    assert rep["cells"] == 6
    assert rep["admissible_cells"] >= 1
    assert rep["errors"] == []
    text = out_csv.read_text()
    assert "L1,L2,admissible" in text
    # the two-channel reference solution (-0.3056, 0.9295) lives in this box
    assert "-0.3,0.95,1" in text.splitlines()


def test_map_thread_count_does_not_change_output(tmp_path, capsys):
    blobs = []
    for tag, threads in (("a", "1"), ("b", "2")):
        out_csv = tmp_path / f"map_{tag}.csv"
        code, _, _ = _run(
            capsys,
            [
                "map",
                "--ells",
                "0,1",
                "--box=-0.4,-0.2,0.85,0.95",
                "--res",
                "0.1",
                "--threads",
                threads,
                "--out",
                str(out_csv),
            ],
        )
        assert code == 0
        blobs.append(out_csv.read_bytes())
    assert blobs[0] == blobs[1]


def test_map_needs_two_ells(capsys, tmp_path):
    code, _, err = _run(
        capsys,
        ["map", "--ells", "0,1,2", "--out", str(tmp_path / "m.csv")],
    )
    assert code == 2
    assert "two angular momenta" in err


# ---------------------------------------------------------------- config


def test_config_file_env_and_flag_precedence(tmp_path, capsys, monkeypatch):
    phases = tmp_path / "phases.txt"
    phases.write_text(REF1_LINE)
    cfg_env = tmp_path / "env.cfg"
    cfg_env.write_text("h = 0.02\nlambda = 100   # alias keys work\n")
    monkeypatch.setenv("CTINV_CONFIG", str(cfg_env))

    code, out, _ = _run(
        capsys,
        ["invert", "--phases", str(phases), "--out", str(tmp_path / "a.csv")],
    )
    assert code == 0
    rep = _report(out)
    assert rep["grid"] == {"h": 0.02, "lambda": 100.0}

    # a flag beats the config file
    code, out, _ = _run(
        capsys,
        [
            "invert",
            "--phases",
            str(phases),
            "--step",
            "0.01",
            "--out",
            str(tmp_path / "b.csv"),
        ],
    )
    assert code == 0
    rep = _report(out)
    assert rep["grid"] == {"h": 0.01, "lambda": 100.0}

    # an explicit --config beats the environment default
    cfg_flag = tmp_path / "flag.cfg"
    cfg_flag.write_text("step = 0.04\n")
    code, out, _ = _run(
        capsys,
        [
            "--config",
            str(cfg_flag),
            "invert",
            "--phases",
            str(phases),
            "--out",
            str(tmp_path / "c.csv"),
        ],
    )
    assert code == 0
    rep = _report(out)
    assert rep["grid"] == {"h": 0.04, "lambda": 400.0}


def test_config_unknown_key_is_usage_error(tmp_path, capsys):
    phases = tmp_path / "phases.txt"
    phases.write_text(REF1_LINE)
    cfg = tmp_path / "bad.cfg"
    cfg.write_text("bogus = 3\n")
    code, _, err = _run(
        capsys,
        ["--config", str(cfg), "invert", "--phases", str(phases)],
    )
    assert code == 2
    assert "line 1" in err and "bogus" in err


# ---------------------------------------------------------------- specfun


def test_specfun_prints_reference_values(capsys):
    code, out, _ = _run(capsys, ["specfun", "--nu", "1.7", "--x", "5.0"])
    assert code == 0
    want = {
        "J": -0.085089767345250387,
        "Y": 0.35626412768764787,
        "J'": -0.32870939576268643,
        "Y'": -0.12006835425857174,
    }
    lines = {ln.split("(")[0]: ln.split("=")[1].strip() for ln in out.splitlines()}
    for key, ref in want.items():
        assert lines[key] == format(ref, ".12g")
