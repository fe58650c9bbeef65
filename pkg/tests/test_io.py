import json

import numpy as np
import pytest

from cqedkit import __version__
from cqedkit.io import (
    CsvFormatError,
    emit_report,
    load_frequency_csv,
    load_t1_vs_temperature_csv,
    load_traces_csv,
    write_frequency_csv,
    write_t1_vs_temperature_csv,
    write_traces_csv,
)
from cqedkit.synth import SynthSpec, gen_ramsey_trace, gen_t1_trace

from test_synth import DATA


def test_golden_trace_round_trip(tmp_path):
    recs = load_traces_csv(DATA / "golden_t1_seed42.csv")
    assert len(recs) == 1 and recs[0].trace_id == "t1-decay-42"
    out = tmp_path / "again.csv"
    write_traces_csv(out, recs)
    assert out.read_bytes() == (DATA / "golden_t1_seed42.csv").read_bytes()


def test_multi_trace_round_trip_is_lossless(tmp_path):
    recs = [gen_t1_trace(SynthSpec("t1-decay", {}, seed=1)), gen_ramsey_trace(SynthSpec("ramsey", {}, n_points=60, seed=2))]
    write_traces_csv(tmp_path / "x.csv", recs)
    back = load_traces_csv(tmp_path / "x.csv")
    assert [r.trace_id for r in back] == [r.trace_id for r in recs]
    for a, b in zip(recs, back):
        assert a.times.tobytes() == b.times.tobytes()
        assert a.p_excited.tobytes() == b.p_excited.tobytes()
        assert a.n_shots == b.n_shots


def test_lf_line_endings_and_header(tmp_path):
    write_traces_csv(tmp_path / "x.csv", [gen_t1_trace(SynthSpec("t1-decay", {}, n_points=5, seed=1))])
    raw = (tmp_path / "x.csv").read_bytes()
    assert b"\r" not in raw
    assert raw.startswith(b"trace_id,time_s,p_excited,n_shots\n")


def _bad_p_file(tmp_path):
    rows = ["trace_id,time_s,p_excited,n_shots"]
    rows += [f"a,{i}e-6,{1.2 if i == 7 else 0.5},100" for i in range(1, 11)]
    path = tmp_path / "bad.csv"
    path.write_text("\n".join(rows) + "\n")
    return path


def test_probability_error_names_row(tmp_path):
    with pytest.raises(CsvFormatError, match="row 7") as exc:
        load_traces_csv(_bad_p_file(tmp_path))
    assert exc.value.row == 7


@pytest.mark.parametrize(
    "text, fragment",
    [
        ("", "empty file"),
        ("trace_id,time_s,p_excited,n_shots\n", "no data rows"),
        ("id,t,p,n\na,0,0.5,10\n", "does not match"),
        ("trace_id,time_s,p_excited,n_shots\na,1e-6,0.5,10\na,1e-6,0.4,10\n", "row 2: time_s"),
        ("trace_id,time_s,p_excited,n_shots\na,0,abc,10\n", "not a number"),
        ("trace_id,time_s,p_excited,n_shots\na,0,nan,10\n", "not finite"),
        ("trace_id,time_s,p_excited,n_shots\na,0,0.5,10.5\n", "not an integer"),
        ("trace_id,time_s,p_excited,n_shots\na,0,0.5,10\na,1,0.5,20\n", "changes within"),
        ("trace_id,time_s,p_excited,n_shots\na,0,0.5\n", "expected 4 fields"),
    ],
)
def test_malformed_trace_files(tmp_path, text, fragment):
    path = tmp_path / "f.csv"
    path.write_text(text)
    with pytest.raises(CsvFormatError, match=fragment):
        load_traces_csv(path)


def test_missing_file(tmp_path):
    with pytest.raises(CsvFormatError, match="cannot read"):
        load_traces_csv(tmp_path / "nope.csv")


def test_frequency_and_t1t_round_trip(tmp_path):
    f = 5.1914e9 + np.arange(25) * 123.456789
    write_frequency_csv(tmp_path / "f.csv", f)
    assert load_frequency_csv(tmp_path / "f.csv").tobytes() == f.tobytes()
    assert (tmp_path / "f.csv").read_text().splitlines()[:2] == ["index,omega01_hz", "0,5191400000.0"]
    d = np.array([[0.06, 2e-5, 1e-6], [0.1, 1.5e-5, 7.5e-7]])
    write_t1_vs_temperature_csv(tmp_path / "t.csv", d)
    np.testing.assert_array_equal(load_t1_vs_temperature_csv(tmp_path / "t.csv"), d)


def test_t1t_rejects_nonpositive(tmp_path):
    (tmp_path / "t.csv").write_text("temperature_k,t1_s,t1_err_s\n0.06,2e-5,1e-6\n0.0,2e-5,1e-6\n")
    with pytest.raises(CsvFormatError, match="row 2"):
        load_t1_vs_temperature_csv(tmp_path / "t.csv")


def test_report_embeds_version_and_config():
    doc = emit_report("dielectric epsilon", {"f_empty": {"value": 6.9348, "unit": "GHz"}}, {"epsilon": np.float64(1.0543)})
    parsed = json.loads(doc)
    assert parsed["tool"] == {"name": "cqedkit", "version": __version__}
    assert parsed["config"]["f_empty"]["unit"] == "GHz"
    assert parsed["command"] == "dielectric epsilon"
    assert doc.endswith("\n")


def test_report_keeps_full_precision_and_is_stable():
    x = 1 / 3
    result = {"b": x, "a": np.array([np.pi, np.inf]), "flag": np.bool_(True)}
    doc = emit_report("t", {}, result)
    parsed = json.loads(doc)["result"]
    assert parsed["b"] == x
    assert parsed["a"] == [np.pi, "inf"]
    assert parsed["flag"] is True
    assert emit_report("t", {}, dict(reversed(list(result.items())))) == doc
