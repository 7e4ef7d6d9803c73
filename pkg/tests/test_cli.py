import json

import numpy as np
import pytest

from qcomplement import gallery
from qcomplement.cli import main
from qcomplement.channel import superoperator_distance
from qcomplement.serialize import channel_from_dict, channel_to_dict, dumps, encode_matrix


@pytest.fixture
def m3_file(tmp_path):
    path = tmp_path / "m3.json"
    path.write_text(dumps(channel_to_dict(gallery.m3_channel())))
    return path


def test_gallery_listing(capsys):
    assert main(["gallery"]) == 0
    out = capsys.readouterr().out
    assert len(out.splitlines()) == len(gallery.CASES) >= 8
    assert "qubit4-bitflip" in out


def test_analyze_gallery_case(capsys):
    rc = main(["analyze", "gallery:m3-counterexample", "--algebra", "M2+0", "--privatize", "0+M2"])
    assert rc == 0
    out = capsys.readouterr().out
    assert "dim(A)*dim(B) <= n^2" in out and "16" in out


def test_analyze_json(tmp_path, capsys):
    target = tmp_path / "report.json"
    assert main(["analyze", "gallery:identity-n2", "--algebra", "full", "--json", str(target)]) == 0
    report = json.loads(target.read_text())
    assert report["channel"]["multiplicative_domain"]["dim"] == 4
    assert report["algebra"]["correctable"]["kind"] == "correctable"


def test_analyze_file_with_projection(m3_file, tmp_path, capsys):
    alg = tmp_path / "alg.json"
    E = np.zeros((3, 3))
    E[0, 1] = 1
    alg.write_text(json.dumps({"ambient_dim": 3, "generators": [encode_matrix(E)]}))
    q = tmp_path / "q.json"
    q.write_text(json.dumps(encode_matrix(np.diag([1.0, 1, 0]))))
    target = tmp_path / "r.json"
    rc = main(["analyze", str(m3_file), "--algebra", str(alg), "--q", str(q),
               "--json", str(target)])
    assert rc == 0
    assert json.loads(target.read_text())["algebra"]["correctable"]["kind"] == "correctable"


def test_complement_output_reloads(tmp_path, capsys):
    target = tmp_path / "c.json"
    assert main(["complement", "gallery:qubit4-bitflip", "--json", str(target)]) == 0
    comp = channel_from_dict(json.loads(target.read_text()))
    assert (comp.dim_in, comp.dim_out) == (16, 4)


def test_complement_to_stdout(m3_file, capsys):
    assert main(["complement", str(m3_file)]) == 0
    comp = channel_from_dict(json.loads(capsys.readouterr().out))
    assert comp.dim_out == 2


@pytest.mark.parametrize("argv", [
    ["analyze", "gallery:no-such-case"],
    ["analyze", "missing-file.json"],
    ["analyze", "gallery:trace-n2", "--algebra", "nonexistent.json"],
])
def test_input_errors(argv, capsys):
    assert main(argv) == 2
    assert "error" in capsys.readouterr().err


def test_bad_json(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text("[1, 2")
    assert main(["analyze", str(bad)]) == 2


def test_non_trace_preserving_input(tmp_path, capsys):
    path = tmp_path / "cp.json"
    path.write_text(json.dumps({"dim_in": 2, "dim_out": 2, "kraus": [encode_matrix(2 * np.eye(2))]}))
    assert main(["analyze", str(path)]) == 2


def test_bad_tolerance(capsys):
    assert main(["gallery", "--tol-rank", "-1"]) == 2


def test_check_fails_with_silly_tolerance(capsys):
    assert main(["gallery", "--check", "--tol-rank", "1e-2"]) == 1
    assert "FAIL" in capsys.readouterr().out


def test_analyze_is_deterministic(tmp_path, capsys):
    paths = [tmp_path / "a.json", tmp_path / "b.json"]
    for p in paths:
        main(["analyze", "gallery:diag-expectation-n3", "--algebra", "diagonal", "--json", str(p)])
    assert paths[0].read_bytes() == paths[1].read_bytes()


def test_seed_is_recorded(tmp_path, capsys):
    target = tmp_path / "r.json"
    main(["analyze", "gallery:identity-n2", "--seed", "0x10", "--json", str(target)])
    assert json.loads(target.read_text())["tolerance"]["seed"] == 16


def test_lookup_dotted_audit_names():
    report = {"audits": [{"name": "dim(A)*dim(B) <= n^2", "lhs": 4}]}
    assert gallery.lookup(report, "audits.dim(A)*dim(B) <= n^2.lhs") == 4
    with pytest.raises(KeyError):
        gallery.lookup(report, "audits.nope.lhs")


def test_case_channels_round_trip():
    for case in gallery.CASES.values():
        phi = case.channel()
        assert superoperator_distance(channel_from_dict(channel_to_dict(phi)), phi) < 1e-15
