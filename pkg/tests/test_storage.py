from pathlib import Path

import pytest
from pydantic import ValidationError

from fractal_pst.schemas import EvolveSummary, FidelityTrace, PSTReport, RunConfig
from fractal_pst.storage import read_json, read_trace_csv, sidecar_path, write_json, write_trace_csv


def make_trace():
    return FidelityTrace(
        times=[0.0, 0.5, 1.0],
        fidelities=[0.0, 0.1, 1.0 / 3.0],
        argmax_time=1.0,
        argmax_fidelity=1.0 / 3.0,
        refinement_times=[0.9],
        refinement_fidelities=[0.3],
    )


def test_write_json_is_sorted_and_terminated(tmp_path):
    path = tmp_path / "nested" / "out.json"
    write_json(path, {"b": 0.1, "a": [1, 2]})
    text = path.read_text()
    assert text == '{\n  "a": [\n    1,\n    2\n  ],\n  "b": 0.10000000000000001\n}\n'
    assert read_json(path) == {"a": [1, 2], "b": 0.1}


def test_write_json_floats_keep_seventeen_digits(tmp_path):
    path = tmp_path / "out.json"
    values = [1.0 / 3.0, 2.0, 1e-5, 1e17, -0.25]
    write_json(path, {"values": values, "count": 5, "label": "x", "flag": True})
    text = path.read_text()
    for literal in ("0.33333333333333331", "2.0,", "1.0000000000000001e-05", "1e+17", "-0.25"):
        assert literal in text
    assert '"count": 5' in text and '"flag": true' in text
    assert read_json(path)["values"] == values


def test_trace_csv_and_sidecar(tmp_path):
    path = tmp_path / "trace.csv"
    sidecar = write_trace_csv(path, make_trace())
    assert sidecar == sidecar_path(path) == tmp_path / "trace.json"
    lines = path.read_text().split("\n")
    assert lines[0] == "t,fidelity"
    assert lines[3] == "1,0.33333333333333331"
    frame = read_trace_csv(path)
    assert frame["fidelity"].iloc[2] == 1.0 / 3.0
    meta = read_json(sidecar)
    assert meta["samples"] == 3
    assert meta["refinement_times"] == [0.9]
    assert "summary" not in meta


def test_sidecar_carries_summary(tmp_path):
    summary = EvolveSummary(
        N=2, nodes=4, edges=4, argmax_time=3.0, argmax_fidelity=0.9, phase=0.0, chain_phase=0.0,
        return_fidelity=0.9, return_phase=0.0, oracle_equivalence=True, spectrum_containment=True,
        sym_invariant=True, pst=False,
    )
    sidecar = write_trace_csv(tmp_path / "t.csv", make_trace(), summary)
    assert read_json(sidecar)["summary"]["nodes"] == 4


def test_read_missing_file():
    with pytest.raises(OSError):
        read_json(Path("/nonexistent/file.json"))


def test_trace_rejects_inconsistent_lengths():
    with pytest.raises(ValidationError):
        FidelityTrace(times=[0.0, 1.0], fidelities=[0.5], argmax_time=0.0, argmax_fidelity=0.5)
    with pytest.raises(ValidationError):
        FidelityTrace(times=[0.0], fidelities=[1.5], argmax_time=0.0, argmax_fidelity=1.5)


def test_report_pst_requires_a_transfer_time():
    with pytest.raises(ValidationError):
        PSTReport(eigenvalues=[0.0], gaps=[], mirror_symmetric=True, pst=True, tolerance=1e-8)


def test_run_config_paths_must_differ():
    with pytest.raises(ValidationError):
        RunConfig(command="evolve", output=Path("x.json"), save_hamiltonian=Path("x.json"))
    with pytest.raises(ValidationError):
        RunConfig(command="evolve", chain="file:c.json", output=Path("c.json"))
    config = RunConfig(command="evolve", chain="krawtchouk:2", output=Path("krawtchouk:2"))
    assert config.output == Path("krawtchouk:2")


@pytest.mark.parametrize("field, value", [("pst_tol", 0.0), ("samples", 1), ("max_odd", 0)])
def test_run_config_bounds(field, value):
    with pytest.raises(ValidationError):
        RunConfig(command="verify", **{field: value})
