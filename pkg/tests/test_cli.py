"""CLI: CSV schemas, byte-level determinism, exit codes, config merging."""

import json

import pytest

from ssafsim import direct_outage_closed_form
from ssafsim.cli import main


def _run(tmp_path, name, args):
    out = tmp_path / name
    rc = main(args + ["--out", str(out)])
    return rc, out


def _rows(path):
    header, *rows = path.read_text().strip().split("\n")
    return header, [r.split(",") for r in rows]


# --------------------------------------------------------------------- outage

def test_outage_single_point_schema(tmp_path):
    rc, out = _run(tmp_path, "o.csv", [
        "outage", "--strategy", "direct", "--snr-db", "10", "--rate", "1",
        "--trials", "20000", "--seed", "7",
    ])
    assert rc == 0
    header, rows = _rows(out)
    assert header == "strategy,size,receiver_l,snr_db,rate_bpcu,trials,failures,p_hat,ci_low,ci_high,seed"
    assert len(rows) == 1
    row = dict(zip(header.split(","), rows[0]))
    assert row["strategy"] == "direct"
    assert row["receiver_l"] == ""
    assert int(row["trials"]) == 20000
    truth = direct_outage_closed_form(10.0, 1.0)
    assert float(row["ci_low"]) <= truth <= float(row["ci_high"])
    assert float(row["p_hat"]) == int(row["failures"]) / 20000


def test_outage_rerun_is_byte_identical(tmp_path):
    args = ["outage", "--strategy", "cma-ssaf", "--size", "2", "--snr-db", "5,10",
            "--rate", "0.5,1", "--trials", "5000", "--seed", "11", "--crn"]
    rc1, out1 = _run(tmp_path, "a.csv", args)
    rc2, out2 = _run(tmp_path, "b.csv", args)
    assert rc1 == rc2 == 0
    assert out1.read_bytes() == out2.read_bytes()


def test_outage_worker_count_does_not_change_bytes(tmp_path):
    base = ["outage", "--strategy", "cbc-ssaf", "--mode", "isolated", "--size", "4",
            "--receiver-l", "2", "--snr-db", "10", "--rate", "1",
            "--trials", "150000", "--seed", "3"]
    _, out1 = _run(tmp_path, "w1.csv", base + ["--workers", "1"])
    _, out8 = _run(tmp_path, "w8.csv", base + ["--workers", "8"])
    assert out1.read_bytes() == out8.read_bytes()


def test_outage_rows_sorted_and_snr_range_syntax(tmp_path):
    rc, out = _run(tmp_path, "s.csv", [
        "outage", "--strategy", "direct", "--snr-db", "20,10,15", "--rate", "2,1",
        "--trials", "100", "--seed", "0",
    ])
    assert rc == 0
    _, rows = _rows(out)
    keys = [(float(r[3]), float(r[4])) for r in rows]
    assert keys == sorted(keys)
    rc, out2 = _run(tmp_path, "s2.csv", [
        "outage", "--strategy", "direct", "--snr-db", "10:20:5", "--rate", "1",
        "--trials", "100", "--seed", "0",
    ])
    assert rc == 0
    _, rows2 = _rows(out2)
    assert [float(r[3]) for r in rows2] == [10.0, 15.0, 20.0]


def test_outage_receiver_only_for_cbc(tmp_path, capsys):
    rc, _ = _run(tmp_path, "x.csv", [
        "outage", "--strategy", "direct", "--receiver-l", "2", "--snr-db", "10",
        "--rate", "1", "--trials", "10", "--seed", "0",
    ])
    assert rc == 1
    err = capsys.readouterr().err
    assert err.startswith("ssafsim: error:") and err.count("\n") == 1


def test_outage_defaults_receiver_to_worst_case(tmp_path):
    rc, out = _run(tmp_path, "d.csv", [
        "outage", "--strategy", "cbc-ssaf", "--size", "5", "--snr-db", "10",
        "--rate", "1", "--trials", "200", "--seed", "1",
    ])
    assert rc == 0
    _, rows = _rows(out)
    assert rows[0][2] == "3"  # ceil(5/2)


# ------------------------------------------------------------------------ dmt

def test_dmt_curves_reference_rows(tmp_path):
    rc, out = _run(tmp_path, "dmt.csv", ["dmt", "--size", "20", "--r-grid", "0:1:0.25"])
    assert rc == 0
    header, rows = _rows(out)
    assert header == "r,d_miso,d_cbc_ssaf_lb,d_cma_ssaf,d_direct"
    first = dict(zip(header.split(","), rows[0]))
    assert float(first["r"]) == 0.0
    assert float(first["d_miso"]) == 20.0
    assert float(first["d_cbc_ssaf_lb"]) == 18.0
    last = dict(zip(header.split(","), rows[-1]))
    assert float(last["r"]) == 1.0
    assert all(float(last[c]) == 0.0 for c in ("d_miso", "d_cbc_ssaf_lb", "d_cma_ssaf", "d_direct"))


def test_dmt_cma_column(tmp_path):
    rc, out = _run(tmp_path, "dmt5.csv", ["dmt", "--size", "5", "--r-grid", "0.5"])
    assert rc == 0
    _, rows = _rows(out)
    assert float(rows[0][3]) == pytest.approx(2.5, rel=1e-15)


# ------------------------------------------------------------------- exponent

def test_exponent_cbc_reference_row(tmp_path):
    rc, out = _run(tmp_path, "e.csv", [
        "exponent", "--model", "cbc", "--size", "5", "--receiver-l", "2",
        "--r-grid", "0.2",
    ])
    assert rc == 0
    header, rows = _rows(out)
    assert header == "model,size,receiver_l,r,d_o_numeric,d_bound,gap"
    row = dict(zip(header.split(","), rows[0]))
    assert row["model"] == "cbc"
    assert float(row["d_o_numeric"]) == pytest.approx(1.8, abs=1e-6)
    assert float(row["d_bound"]) == pytest.approx(1.56, abs=1e-12)
    assert float(row["gap"]) == pytest.approx(0.24, abs=1e-6)


def test_exponent_cma_rows_and_gap_sign(tmp_path):
    rc, out = _run(tmp_path, "ec.csv", [
        "exponent", "--model", "cma", "--size", "3", "--r-grid", "0:1:0.1",
    ])
    assert rc == 0
    _, rows = _rows(out)
    for r in rows:
        assert float(r[6]) >= -1e-6
    mid = [r for r in rows if abs(float(r[3]) - 0.5) < 1e-9][0]
    assert float(mid[4]) == pytest.approx(1.5, abs=1e-6)


def test_exponent_cbc_boundary_zero(tmp_path):
    rc, out = _run(tmp_path, "eb.csv", [
        "exponent", "--model", "cbc", "--size", "20", "--receiver-l", "10",
        "--r-grid", f"{20.0 / 21.0}",
    ])
    assert rc == 0
    _, rows = _rows(out)
    assert float(rows[0][4]) == pytest.approx(0.0, abs=1e-9)


# ------------------------------------------------------------------- overhead

def test_overhead_row(tmp_path):
    rc, out = _run(tmp_path, "ov.csv", [
        "overhead", "--size", "10", "--probe-len", "0.01", "--feedback-len", "0.01",
        "--data-slot-len", "1",
    ])
    assert rc == 0
    header, rows = _rows(out)
    assert header == "n_dest,probe_len,feedback_len,data_slot_len,overhead_fraction"
    assert float(rows[0][4]) == pytest.approx(0.2 / 11.2, rel=1e-12)


# ------------------------------------------------------------- config handling

def test_config_file_with_flag_override(tmp_path):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({
        "strategy": "direct", "snr_db": "10", "rate": "1",
        "trials": 500, "seed": 5,
    }))
    rc, out = _run(tmp_path, "c1.csv", ["outage", "--config", str(cfg)])
    assert rc == 0
    _, rows = _rows(out)
    assert int(rows[0][5]) == 500
    rc, out2 = _run(tmp_path, "c2.csv", ["outage", "--config", str(cfg), "--trials", "800"])
    assert rc == 0
    _, rows2 = _rows(out2)
    assert int(rows2[0][5]) == 800


def test_unknown_config_key_rejected(tmp_path, capsys):
    cfg = tmp_path / "bad.json"
    cfg.write_text(json.dumps({"strategy": "direct", "snr_db": "10", "rate": "1", "warp": 9}))
    rc, _ = _run(tmp_path, "x.csv", ["outage", "--config", str(cfg)])
    assert rc == 1
    assert "warp" in capsys.readouterr().err


# ------------------------------------------------------------------ exit codes

def test_missing_required_flags_fail_with_one_line(tmp_path, capsys):
    rc = main(["outage", "--strategy", "direct", "--snr-db", "10", "--rate", "1"])
    assert rc == 1
    err = capsys.readouterr().err
    assert err.count("\n") == 1 and "--out" in err


def test_unwritable_output_path(tmp_path, capsys):
    rc, _ = _run(tmp_path / "missing" / "deep", "o.csv", [
        "outage", "--strategy", "direct", "--snr-db", "10", "--rate", "1",
        "--trials", "10", "--seed", "0",
    ])
    assert rc == 1
    assert capsys.readouterr().err.startswith("ssafsim: error:")


def test_unknown_strategy_single_line_diagnostic(tmp_path, capsys):
    rc, _ = _run(tmp_path, "x.csv", [
        "outage", "--strategy", "detect-and-forward", "--snr-db", "10",
        "--rate", "1", "--trials", "10", "--seed", "0",
    ])
    assert rc == 1
    err = capsys.readouterr().err
    assert err.startswith("ssafsim: error:") and err.count("\n") == 1


def test_bad_range_syntax(tmp_path, capsys):
    rc, _ = _run(tmp_path, "x.csv", [
        "outage", "--strategy", "direct", "--snr-db", "10:20", "--rate", "1",
        "--trials", "10", "--seed", "0",
    ])
    assert rc == 1
    assert "start:stop:step" in capsys.readouterr().err
