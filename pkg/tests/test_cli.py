"""Command-line surface: schemas, determinism, exit codes."""

import json

import pytest

from hilbworst.cli import main


def run_json(capsys, argv):
    rc = main(argv)
    out = capsys.readouterr().out
    return rc, [json.loads(line) for line in out.splitlines() if line.strip()]


def test_gens_json(capsys):
    rc, docs = run_json(capsys, ["gens", "--n", "3", "--json"])
    assert rc == 0
    (doc,) = docs
    assert doc["schema"] == "hilbworst/1"
    assert doc["n"] == 3 and doc["flavor"] == "hilbert"
    assert len(doc["generators"]) == 18


def test_gens_deterministic(capsys):
    main(["gens", "--n", "3", "--json"])
    first = capsys.readouterr().out
    main(["gens", "--n", "3", "--json"])
    second = capsys.readouterr().out
    assert first == second


def test_gens_text_format(capsys):
    rc = main(["gens", "--n", "3", "--format", "text"])
    out = capsys.readouterr().out
    assert rc == 0
    assert "q(1,2,3|1):" in out


def test_family_cas_format(capsys):
    rc, docs = run_json(capsys, ["family", "--n", "3", "--format", "cas"])
    assert rc == 0
    assert any("t_1_1_1" in g for g in docs[0]["generators"])


def test_family_miniversal(capsys):
    rc, docs = run_json(
        capsys, ["family", "--n", "3", "--flavor", "miniversal", "--json"]
    )
    assert rc == 0
    assert all("t(1,1,1)" not in g for g in docs[0]["generators"])


def test_subspaces_report(capsys):
    rc, docs = run_json(capsys, ["subspaces", "--n", "16", "--list", "2"])
    assert rc == 0
    (doc,) = docs
    assert doc["max_linear_dim"] == 275
    assert doc["smoothing_dim"] == 272
    assert doc["reducible_flag"] is True
    assert len(doc["subspaces"]) == 2
    assert doc["subspaces"][0]["dim"] == 275


def test_table_command(tmp_path, capsys):
    src = tmp_path / "point.json"
    src.write_text(json.dumps({"n": 3, "t": [[1, 1, 1, "-1"]]}))
    rc, docs = run_json(capsys, ["table", str(src)])
    assert rc == 0
    (doc,) = docs
    assert doc["associative"] is True
    assert doc["nonzero_residuals"] == []
    full = {(i, j, k): v for i, j, k, v in doc["s"]}
    assert full[(1, 1, 1)] == "1"
    assert full[(0, 2, 2)] == "1"


def test_table_detects_non_associative_point(tmp_path, capsys):
    src = tmp_path / "point.json"
    src.write_text(json.dumps({"n": 3, "t": [[1, 1, 2, "1"], [2, 2, 1, "1"]]}))
    rc, docs = run_json(capsys, ["table", str(src)])
    assert rc == 0
    assert docs[0]["associative"] is False
    assert docs[0]["nonzero_residuals"]


def test_verify_route_exit_codes(capsys):
    rc, docs = run_json(
        capsys, ["verify", "--n", "3", "--route", "oracle", "--samples", "12"]
    )
    assert rc == 0
    assert all(d["status"] == "ok" for d in docs)
    assert {d["check"] for d in docs} == {"oracle_sample", "oracle_agreement"}
    samples = [d for d in docs if d["check"] == "oracle_sample"]
    assert len(samples) == 12
    assert all("kind" in d and "fiber_dimension" in d for d in samples)


def test_verify_all_routes(capsys):
    rc, docs = run_json(
        capsys, ["verify", "--n", "3", "--route", "all", "--samples", "6"]
    )
    assert rc == 0
    routes = {d["route"] for d in docs}
    assert routes == {"classical", "dgla", "based", "oracle"}
    assert all(d["schema"] == "hilbworst/1" for d in docs)


def test_verify_failure_exit_code(capsys, monkeypatch):
    # force one closedness residual to be nonzero: exit 1, failure named
    import hilbworst.cli as cli_mod
    from hilbworst.poly import PolyRing

    real = cli_mod.dgla.closedness_residual

    def broken(n, miniversal=True):
        out = dict(real(n, miniversal))
        key = next(iter(out))
        out[key] = PolyRing.get(n).t(1, 2, 3)
        return out

    monkeypatch.setattr(cli_mod.dgla, "closedness_residual", broken)
    rc = main(["verify", "--n", "3", "--route", "dgla"])
    captured = capsys.readouterr()
    assert rc == 1
    assert "verification failed: dgla/derivation_closedness" in captured.err
    docs = [json.loads(line) for line in captured.out.splitlines()]
    assert any(d["status"] == "fail" for d in docs)


def test_bad_flags_usage_error():
    with pytest.raises(SystemExit) as exc:
        main(["gens"])  # missing --n
    assert exc.value.code == 2
    with pytest.raises(SystemExit) as exc:
        main(["verify", "--n", "3", "--route", "bogus"])
    assert exc.value.code == 2


def test_export_writes_bundle(tmp_path, capsys):
    rc, docs = run_json(
        capsys, ["export", "--n", "3", "--out", str(tmp_path)]
    )
    assert rc == 0
    written = docs[0]["written"]
    assert "gens_hilbert_n3.json" in written
    assert "family_miniversal_n3.json" in written
    tangent = json.loads((tmp_path / "tangent_n3.json").read_text())
    assert tangent["hom_dim"] == 18 and tangent["t1_dim"] == 15
