import subprocess
import sys

import numpy as np
import pytest

from effectkit.cli import main
from effectkit.hermitian import Effect, as_matrix, random_effect, random_projection
from effectkit.matrixio import loads_document, read_document, read_matrix, write_document, write_matrix
from effectkit.preservers import (
    TraceThresholdSpec,
    preserver_spec_document,
    random_block_spec,
    random_standard_spec,
)


@pytest.fixture()
def effects(tmp_path):
    a = random_effect(3, seed=1)
    b = random_effect(3, seed=2)
    pa = tmp_path / "a.mat"
    pb = tmp_path / "b.mat"
    write_matrix(pa, a)
    write_matrix(pb, b)
    return pa, pb


def test_check_coexistent_pair(effects, capsys):
    pa, pb = effects
    code = main(["check", str(pa), str(pb)])
    out = capsys.readouterr().out
    assert code == 0
    assert "verdict: Coexistent" in out
    assert "iterations:" in out


def test_check_not_coexistent_pair(tmp_path, capsys):
    p = tmp_path / "p.mat"
    q = tmp_path / "q.mat"
    write_matrix(p, Effect(np.diag([0.9, 0.0]).astype(complex)))
    v = np.array([np.sqrt(0.5), np.sqrt(0.5)])
    write_matrix(q, Effect(0.9 * np.outer(v, v).astype(complex)))
    code = main(["check", str(p), str(q)])
    assert code == 1
    assert "NotCoexistent" in capsys.readouterr().out


def test_check_writes_certificate(effects, tmp_path, capsys):
    pa, pb = effects
    cert = tmp_path / "cert.json"
    code = main(["check", str(pa), str(pb), "--cert", str(cert)])
    assert code == 0
    doc = read_document(cert)
    assert sorted(doc) == ["a", "b", "e", "f", "g", "m", "n"]
    m = read_matrix_from_doc(doc["m"])
    assert m.shape == (3, 3)


def read_matrix_from_doc(doc):
    from effectkit.matrixio import document_matrix
    out = document_matrix(doc)
    return as_matrix(out)


def test_stratify_projection(tmp_path, capsys):
    path = tmp_path / "p.mat"
    write_matrix(path, random_projection(4, 1, seed=3))
    code = main(["stratify", str(path)])
    out = capsys.readouterr().out
    assert code == 0
    assert "p: 1" in out
    assert "q: 3" in out
    assert "freedom_dimension: 10" in out


def test_apply_standard_map(tmp_path, effects, capsys):
    pa, _ = effects
    spec_path = tmp_path / "std.spec"
    spec = random_standard_spec(3, seed=4, transpose=False, perp=False)
    write_document(spec_path, preserver_spec_document(spec))
    out_path = tmp_path / "img.mat"
    code = main(["apply", "--map", "standard", "--spec", str(spec_path),
                 str(pa), "--out", str(out_path)])
    assert code == 0
    img = read_matrix(out_path)
    u = spec.unitary
    a = read_matrix(pa)
    assert np.allclose(as_matrix(img), u @ as_matrix(a) @ u.conj().T, atol=1e-12)


def test_apply_map_kind_mismatch(tmp_path, effects, capsys):
    pa, _ = effects
    spec_path = tmp_path / "tt.spec"
    write_document(spec_path, preserver_spec_document(TraceThresholdSpec(dim=3, alpha=1.0)))
    code = main(["apply", "--map", "standard", "--spec", str(spec_path), str(pa)])
    assert code == 64


def test_apply_without_out_prints_document(tmp_path, effects, capsys):
    pa, _ = effects
    spec_path = tmp_path / "tt.spec"
    write_document(spec_path, preserver_spec_document(TraceThresholdSpec(dim=3, alpha=1.0)))
    code = main(["apply", "--map", "trace-threshold", "--spec", str(spec_path), str(pa)])
    assert code == 0
    doc = loads_document(capsys.readouterr().out)
    assert doc["dim"] == 3


def test_reconstruct_standard_spec(tmp_path, capsys):
    spec = random_standard_spec(3, seed=5, transpose=True, perp=False)
    spec_path = tmp_path / "std.spec"
    write_document(spec_path, preserver_spec_document(spec))
    out_path = tmp_path / "u.mat"
    code = main(["reconstruct", "--map-spec", str(spec_path), "--out", str(out_path)])
    out = capsys.readouterr().out
    assert code == 0
    assert "antiunitary: true" in out
    assert "perp: false" in out
    u = read_matrix(out_path)
    assert np.linalg.norm(u.conj().T @ u - np.eye(3)) <= 1e-10


def test_reconstruct_rejects_block_map(tmp_path, capsys):
    spec_path = tmp_path / "blk.spec"
    write_document(spec_path, preserver_spec_document(random_block_spec(2, seed=6)))
    code = main(["reconstruct", "--map-spec", str(spec_path)])
    assert code == 64


def test_harness_subcommand(tmp_path, capsys):
    out_path = tmp_path / "report.json"
    code = main(["--seed", "3", "harness", "--dims", "2", "--trials", "4",
                 "--suites", "convexity,oracle_crosscheck", "--out", str(out_path)])
    out = capsys.readouterr().out
    assert code == 0
    assert "suite convexity:" in out
    assert "totals:" in out
    report = loads_document(out_path.read_text())
    assert report["config"]["seed"] == 3


def test_missing_file_exits_66(tmp_path, capsys):
    code = main(["check", str(tmp_path / "no.mat"), str(tmp_path / "no2.mat")])
    assert code == 66


def test_malformed_file_exits_66(tmp_path, capsys):
    bad = tmp_path / "bad.mat"
    bad.write_text("{{{")
    code = main(["check", str(bad), str(bad)])
    assert code == 66


def test_non_effect_matrix_exits_66(tmp_path, capsys):
    path = tmp_path / "h.mat"
    write_matrix(path, np.diag([2.0, 0.0]).astype(complex))
    code = main(["check", str(path), str(path)])
    assert code == 66


def test_usage_errors_exit_64(capsys):
    assert main([]) == 64
    assert main(["bogus"]) == 64
    assert main(["check", "only-one-arg"]) == 64
    assert main(["harness", "--dims", "1,2"]) == 64
    assert main(["harness", "--suites", "nope"]) == 64


def test_console_script_entry_point(tmp_path):
    a = tmp_path / "a.mat"
    write_matrix(a, Effect(0.5 * np.eye(2, dtype=complex)))
    proc = subprocess.run(
        [sys.executable, "-m", "effectkit.cli", "check", str(a), str(a)],
        capture_output=True, text=True)
    assert proc.returncode == 0
    assert "Coexistent" in proc.stdout
