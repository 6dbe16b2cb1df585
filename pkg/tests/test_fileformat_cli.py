import json

import pytest

from novikov import fileformat as ff
from novikov.cli import main
from novikov.complexes import BasedComplex, minimize, n_equiv
from novikov.corpus import corpus
from novikov.errors import ComplexInvalid, DocumentError
from novikov.matrix import NovMatrix

from instances import F2, Z, Z2_SQRT, Z_TWISTED, one, t

TORUS_DOC = {
    "group": {"kind": "free_abelian", "rank": 2, "generators": ["t", "s"]},
    "character": {"weights": ["-1", "0"]},
    "complex": {"ranks": [1, 2, 1],
                "boundaries": {"1": [["t - 1"], ["s - 1"]], "2": [["s - 1", "1 - t"]]}},
    "cutoff": "exact",
}


def test_torus_document():
    C = ff.from_document(TORUS_DOC)
    T = corpus("torus2")
    assert C.ranks == T.ranks and C.d == T.d


def test_roundtrip_and_byte_stability(tmp_path):
    samples = [corpus("torus3"), corpus("random", seed=4),
               BasedComplex(Z_TWISTED, (1, 1), {1: NovMatrix.from_rows(Z_TWISTED, [[Z_TWISTED.gen(0)]])}),
               BasedComplex(F2, (1, 1), {1: NovMatrix.from_rows(F2, [[F2.one() - F2.gen(0) * F2.gen(1)]])}),
               BasedComplex(Z2_SQRT, (1, 1), {1: NovMatrix.from_rows(Z2_SQRT, [[Z2_SQRT.gen(1, -1)]])})]
    for C in samples:
        text = ff.dumps(ff.to_document(C))
        back = ff.loads(text)
        assert back == C
        assert ff.dumps(ff.to_document(back)) == text
        path = tmp_path / "c.json"
        ff.store(back, path)
        assert path.read_text() == text


def test_truncated_roundtrip():
    C = corpus("torus2").truncate(-3)
    D = ff.loads(ff.dumps(ff.to_document(C)))
    assert n_equiv(C, D, -3)


def test_bad_square_rejected():
    doc = json.loads(json.dumps(TORUS_DOC))
    doc["complex"]["boundaries"]["2"] = [["s - 1", "1 + t"]]
    with pytest.raises(ComplexInvalid) as err:
        ff.from_document(doc)
    assert err.value.failures == [(2, 0, 0)]


@pytest.mark.parametrize("patch, where", [
    (lambda d: d["complex"]["boundaries"]["1"][1].__setitem__(0, "s ** 2 +"), "complex.boundaries.1[1][0]"),
    (lambda d: d["complex"].__setitem__("ranks", [1, 3, 1]), "complex.boundaries.1"),
    (lambda d: d.pop("character"), None),
    (lambda d: d.__setitem__("cutoff", "soon"), "cutoff"),
])
def test_located_errors(patch, where):
    doc = json.loads(json.dumps(TORUS_DOC))
    patch(doc)
    with pytest.raises(DocumentError) as err:
        ff.from_document(doc)
    if where:
        assert err.value.where == where


def test_invalid_json_located():
    with pytest.raises(DocumentError) as err:
        ff.loads('{"group": ')
    assert "line 1" in err.value.where


def test_log_roundtrip():
    _, log, _ = minimize(corpus("torus3"), L=-8)
    ring = corpus("torus3").ring
    back = ff.log_from_json(ring, json.loads(json.dumps(ff.log_to_json(log))))
    assert len(back) == len(log) and back.cutoff == log.cutoff
    assert ff.log_to_json(back) == ff.log_to_json(log)


def _write(tmp_path, name, C):
    path = tmp_path / f"{name}.json"
    ff.store(C, path)
    return str(path)


def _run(capsys, argv):
    code = main(argv)
    out, err = capsys.readouterr()
    return code, (json.loads(out) if out.strip() else None), err


def test_cli_minimize_and_replay(tmp_path, capsys):
    src = _write(tmp_path, "torus", corpus("torus2"))
    code, rep, err = _run(capsys, ["minimize", "--in", src, "--cutoff", "-8", "--max-steps", "100"])
    assert code == 0 and rep["final_ranks"] == [0, 0, 0] and "empty" in err
    report = tmp_path / "rep.json"
    report.write_text(json.dumps(rep))
    code, rep2, err = _run(capsys, ["validate", "--in", src, "--replay", str(report)])
    assert code == 0 and rep2["replay"]["matches_output"]


def test_cli_validate_failure(tmp_path, capsys):
    doc = json.loads(json.dumps(TORUS_DOC))
    doc["complex"]["boundaries"]["2"] = [["s - 1", "1 + t"]]
    path = tmp_path / "bad.json"
    path.write_text(json.dumps(doc))
    code, rep, _ = _run(capsys, ["validate", "--in", str(path)])
    assert code == 2 and rep["failures"] == [[2, 0, 0]]
    code, rep, _ = _run(capsys, ["minimize", "--in", str(path)])
    assert code == 2


def test_cli_torsion(tmp_path, capsys):
    src = _write(tmp_path, "circle", corpus("circle"))
    code, rep, err = _run(capsys, ["torsion", "--in", src, "--cutoff", "-8"])
    assert code == 0 and rep["certificate"]["kind"] == "trivial_in_wh"
    assert "unit" in rep["certificate"] and rep["certificate"]["log"]["moves"]
    stuck = _write(tmp_path, "stuck", BasedComplex(Z, (1, 1), {1: NovMatrix.from_rows(Z, [[2 + t]])}))
    code, rep, err = _run(capsys, ["torsion", "--in", stuck])
    assert code == 3 and rep["certificate"]["kind"] == "unknown"


def test_cli_compare_dual_truncate(tmp_path, capsys):
    a = _write(tmp_path, "a", BasedComplex(Z, (1, 1), {1: NovMatrix.from_rows(Z, [[t - one]])}))
    b = _write(tmp_path, "b", BasedComplex(Z, (1, 1), {1: NovMatrix.from_rows(Z, [[t - one + t ** 7]])}))
    code, rep, _ = _run(capsys, ["compare", "--a", a, "--b", b, "--N", "-5"])
    assert code == 0 and rep["n_equiv"] is True
    code, rep, _ = _run(capsys, ["compare", "--a", a, "--b", b, "--N", "-8"])
    assert rep["n_equiv"] is False
    code, rep, _ = _run(capsys, ["dual", "--in", _write(tmp_path, "t", corpus("torus2")), "--n", "2"])
    assert code == 0 and rep["output"]["character"]["weights"] == ["1", "0"]
    code, rep, _ = _run(capsys, ["truncate", "--in", b, "--cutoff", "-5"])
    assert code == 0 and rep["output"]["complex"]["boundaries"]["1"] == [["-1 + t + O(-5)"]]
    assert rep["output"]["cutoff"] == "-5"


def test_cli_invert(tmp_path, capsys):
    doc = ff.matrix_to_document(NovMatrix.from_rows(Z, [[one - t, 2 * t], [Z.zero(), one]]))
    path = tmp_path / "m.json"
    path.write_text(ff.dumps(doc))
    code, rep, err = _run(capsys, ["invert", "--in", str(path), "--cutoff", "-6"])
    assert code == 0 and rep["verified"]


def test_cli_corpus_deterministic(capsys):
    assert main(["corpus", "random", "--seed", "3"]) == 0
    first = capsys.readouterr().out
    main(["corpus", "random", "--seed", "3"])
    assert capsys.readouterr().out == first


def test_cli_usage_errors(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["minimize"])
    assert exc.value.code == 64
    with pytest.raises(SystemExit) as exc:
        main(["bogus"])
    assert exc.value.code == 64
    assert main(["minimize", "--in", "x.json", "--noise-seed", "1"]) == 64


def test_cli_missing_file(capsys):
    code, rep, _ = _run(capsys, ["validate", "--in", "/nonexistent.json"])
    assert code == 2 and rep["error"] == "FileNotFoundError"
