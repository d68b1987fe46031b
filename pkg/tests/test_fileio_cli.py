import json

import numpy as np
import pytest

from qcorr import cli, fileio
from qcorr.channel import random_channel
from qcorr.correlations import OptimizerConfig, quantum_discord
from qcorr.entropy import subsystem_entropies
from qcorr.qmat import BipartiteState, bell_state, random_mixed
from qcorr.verify import check_saturation


def test_state_round_trip_is_exact(tmp_path, rng):
    s = BipartiteState(random_mixed(6, rng=rng), 2, 3, separable=True)
    path = tmp_path / "s.json"
    fileio.write_state(s, path, family="x")
    t = fileio.read_state(path)
    np.testing.assert_array_equal(t.rho, s.rho)
    assert t.dims == (2, 3) and t.separable


def test_channel_round_trip(tmp_path, rng):
    ch = random_channel(3, 2, rng)
    path = tmp_path / "c.json"
    fileio.write_channel(ch, path)
    np.testing.assert_array_equal(fileio.read_channel(path).kraus, ch.kraus)


@pytest.mark.parametrize(
    "data,match",
    [
        ({"dims": [2], "matrix": []}, "dims"),
        ({"dims": [2, 2]}, "matrix"),
        ({"dims": [2, 2], "matrix": [[[1, 0]]]}, "entries"),
        ({"dims": [9, 9], "matrix": []}, "cap"),
        ({"dims": [1, 1], "matrix": [[1.0]]}, "pairs"),
    ],
)
def test_state_file_errors(data, match):
    with pytest.raises(fileio.FileFormatError, match=match):
        fileio.state_from_dict(data)


def test_channel_file_errors():
    with pytest.raises(fileio.FileFormatError):
        fileio.channel_from_dict({"dim_in": 2})
    with pytest.raises(fileio.FileFormatError):
        fileio.channel_from_dict({"dim_in": 2, "dim_out": 2, "kraus": []})


def _run(capsys, *argv):
    code = cli.main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_compute_bell(tmp_path, capsys):
    path = tmp_path / "bell.json"
    fileio.write_state(bell_state(), path)
    code, out, _ = _run(capsys, "compute", str(path), "--restarts", "4")
    rep = json.loads(out)
    assert code == 0
    assert abs(rep["mutual_info"] - 2) < 1e-4 and abs(rep["classical_corr"] - 1) < 1e-4
    assert abs(rep["discord"] - 1) < 1e-4 and not rep["anomaly"]


def test_compute_product(tmp_path, capsys):
    path = tmp_path / "p.json"
    code, _, _ = _run(capsys, "gen", "--family", "product", "--dims", "2,3", "--seed", "1", "--out", str(path))
    assert code == 0
    code, out, _ = _run(capsys, "compute", str(path), "--restarts", "4")
    rep = json.loads(out)
    assert code == 0
    assert max(abs(rep[k]) for k in ("mutual_info", "classical_corr", "discord")) < 1e-6


def test_compute_reports_trace_failure(tmp_path, capsys):
    path = tmp_path / "bad.json"
    path.write_text(json.dumps({"dims": [1, 2], "matrix": [[[1, 0], [0, 0]], [[0, 0], [1, 0]]]}))
    code, _, err = _run(capsys, "compute", str(path))
    assert code == 1 and "trace" in err


def test_compute_missing_and_malformed(tmp_path, capsys):
    assert _run(capsys, "compute", str(tmp_path / "none.json"))[0] == 1
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    assert _run(capsys, "compute", str(bad))[0] == 1


def test_bad_flags_exit_1(capsys):
    with pytest.raises(SystemExit) as exc:
        cli.main(["verify", "--suite", "nope"])
    assert exc.value.code == 1
    with pytest.raises(SystemExit) as exc:
        cli.main(["verify", "--trials", "0"])
    assert exc.value.code == 1
    assert _run(capsys, "gen", "--family", "nope")[0] == 1
    assert _run(capsys, "gen", "--family", "saturating", "--dims", "2,2")[0] == 1
    assert _run(capsys, "verify", "--dims", "2,2,2", "--trials", "1")[0] == 1


def test_gen_families(tmp_path, capsys):
    code, out, _ = _run(capsys, "gen", "--family", "bell")
    rho = fileio.state_from_dict(json.loads(out)).rho
    v = np.array([1, 0, 0, 1]) / np.sqrt(2)
    np.testing.assert_allclose(rho, np.outer(v, v), atol=1e-15)
    _, out, _ = _run(capsys, "gen", "--family", "example", "--dims", "2,2", "--seed", "3")
    s = fileio.state_from_dict(json.loads(out))
    s_a, s_b, s_ab = subsystem_entropies(s)
    assert abs(s_ab - (s_b - s_a)) < 1e-9
    _, out, _ = _run(capsys, "gen", "--family", "saturating", "--dims", "2,2,2")
    assert all(r.passed for r in check_saturation(fileio.state_from_dict(json.loads(out))))
    for fam in ("cc", "random", "separable"):
        code, out, _ = _run(capsys, "gen", "--family", fam, "--dims", "2,3")
        assert code == 0 and fileio.state_from_dict(json.loads(out)).dims == (2, 3)


def test_verify_csv(tmp_path, capsys):
    path = tmp_path / "v.csv"
    code, out, _ = _run(capsys, "verify", "--suite", "thm2", "--trials", "5", "--seed", "1", "--csv", str(path))
    assert code == 0 and "thm2" in out and "failed=0" in out
    lines = path.read_text().splitlines()
    assert lines[0] == ",".join(cli.CSV_COLUMNS)
    assert len(lines) == 1 + 5 * 2


def test_verify_rows_jobs_invariant():
    assert cli.verify_rows(("ineq4", "lindblad"), 4, 5) == cli.verify_rows(("ineq4", "lindblad"), 4, 5, jobs=3)


def test_fuzz_round_trip(tmp_path, capsys):
    path = tmp_path / "f.json"
    code, _, err = _run(
        capsys, "fuzz", "--dims", "2,3", "--trials", "4", "--seed", "2", "--margin", "-10",
        "--restarts", "4", "--out", str(path),
    )
    assert code == 0 and "candidate" in err
    found = fileio.read_findings(path)
    assert found
    for s, meta in found:
        s_a = subsystem_entropies(s)[0]
        assert abs(quantum_discord(s, OptimizerConfig(restarts=20)) - s_a - meta["margin"]) < 1e-4


def test_fuzz_separable_is_empty(capsys):
    code, out, _ = _run(capsys, "fuzz", "--dims", "2,2", "--trials", "20", "--family", "separable", "--restarts", "4")
    assert code == 0 and json.loads(out)["findings"] == []
