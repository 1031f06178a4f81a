import json

import numpy as np
import pytest

from hfcov import (
    EmptySeries,
    NonMonotoneTimes,
    ParseError,
    SimConfig,
    estimate_pair,
    ingest_ticks,
    simulate_pair,
    write_ticks,
)
from hfcov.io import format_rows, load_config, sibling_path


def write(tmp_path, name, text):
    p = tmp_path / name
    p.write_text(text)
    return p


def test_ingest_plain(tmp_path):
    s = ingest_ticks(write(tmp_path, "a.csv", "0,0.0\n1,1.0\n2,3.0"))
    assert s.times.tolist() == [0, 1, 2]
    assert s.values.tolist() == [0, 1, 3]


def test_ingest_header_modes(tmp_path):
    p = write(tmp_path, "a.csv", "time,logprice\n0,0\n1,2\n")
    assert len(ingest_ticks(p)) == 2
    assert len(ingest_ticks(p, header=True)) == 2
    with pytest.raises(ParseError, match="line 1"):
        ingest_ticks(p, header=False)


def test_ingest_delimiter_columns_comments(tmp_path):
    p = write(tmp_path, "a.tsv", "# comment\nx\t0\t5\n\nx\t1\t6\nx\t2\t7\n")
    s = ingest_ticks(p, delimiter="\t", time_col=1, value_col=2, header=False)
    assert s.values.tolist() == [5, 6, 7]


def test_duplicate_timestamp(tmp_path):
    p = write(tmp_path, "a.csv", "0,0\n1,1\n1,5\n2,2\n")
    with pytest.raises(NonMonotoneTimes, match="line 3"):
        ingest_ticks(p)
    s = ingest_ticks(p, dedup=True)
    assert s.times.tolist() == [0, 1, 2]
    assert s.values.tolist() == [0, 5, 2]


def test_decreasing_time_rejected_even_with_dedup(tmp_path):
    p = write(tmp_path, "a.csv", "0,0\n2,1\n1,5\n")
    with pytest.raises(NonMonotoneTimes, match="line 3"):
        ingest_ticks(p, dedup=True)


def test_parse_errors(tmp_path):
    with pytest.raises(ParseError, match="line 2") as info:
        ingest_ticks(write(tmp_path, "a.csv", "0,0\n1,abc\n"))
    assert info.value.line == 2
    with pytest.raises(ParseError, match="line 2"):
        ingest_ticks(write(tmp_path, "b.csv", "0,0\n1\n"))
    with pytest.raises(ParseError, match="line 1"):
        ingest_ticks(write(tmp_path, "c.csv", "nan,0\n1,1\n"), header=False)
    with pytest.raises(EmptySeries):
        ingest_ticks(write(tmp_path, "d.csv", "time,logprice\n0,1\n"))


def test_round_trip_is_bit_exact(tmp_path):
    x, y, _ = simulate_pair(SimConfig(theta_x=1e-3, theta_y=2e-3), np.random.default_rng(9))
    write_ticks(tmp_path / "x.csv", x)
    write_ticks(tmp_path / "y.csv", y, delimiter=";")
    x2 = ingest_ticks(tmp_path / "x.csv")
    y2 = ingest_ticks(tmp_path / "y.csv", delimiter=";")
    assert np.array_equal(x.times, x2.times) and np.array_equal(x.values, x2.values)
    a = [r.estimate for r in estimate_pair(x, y)]
    b = [r.estimate for r in estimate_pair(x2, y2)]
    assert a == b


def test_format_rows_csv_json_mirror():
    rows = [{"a": 1, "b": 0.1, "c": None}, {"a": 2, "b": 1e-17, "c": "z"}]
    csv_text = format_rows(rows, "csv")
    assert csv_text.splitlines() == ["a,b,c", "1,0.1,", "2,1e-17,z"]
    assert json.loads(format_rows(rows, "json")) == rows
    assert format_rows([], "csv") == ""


def test_sibling_path():
    assert sibling_path("out/mc.csv", "_summary").as_posix() == "out/mc_summary.csv"
    assert sibling_path("mc.json", "_boxplot", ".png").name == "mc_boxplot.png"


def test_load_config(tmp_path):
    p = write(tmp_path, "run.cfg", "# sweep\nrho = 0.3\neta2-x=0.01  # noisy\n\n")
    assert load_config(p) == {"rho": "0.3", "eta2_x": "0.01"}
    with pytest.raises(ParseError, match="line 1"):
        load_config(write(tmp_path, "bad.cfg", "rho 0.3\n"))
