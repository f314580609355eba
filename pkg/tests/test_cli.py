import json
import subprocess
import sys

import pytest

from simortho import io
from simortho.cli import main
from simortho.oracle import generate_corpus


def write(tmp_path, name, doc):
    path = tmp_path / name
    path.write_text(doc if isinstance(doc, str) else io.dumps(doc))
    return str(path)


def family(field, forms, **extra):
    d = {"schema": 1, "field": field, "dim": len(forms[0]) if forms else 0,
         "forms": [[[str(a) for a in r] for r in g] for g in forms]}
    d.update(extra)
    return d


Q = {"kind": "Q"}


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, (json.loads(out) if out.strip() else None), err


def test_check_combination_example(tmp_path, capsys):
    path = write(tmp_path, "f.json", family(Q, [[[1, 0], [0, 0]], [[0, 0], [0, 1]]]))
    code, out, _ = run(capsys, "check", path)
    assert code == 0
    assert out["verdict"] == "certificate" and out["combination"] == ["1", "1"]


def test_check_char2_example(tmp_path, capsys):
    path = write(tmp_path, "f.json", family({"kind": "GF", "p": 2}, [[[0, 1], [1, 0]]]))
    code, out, _ = run(capsys, "check", path)
    assert code == 1
    assert out["verdict"] == "disproved" and out["witness"]["residual"]["dim"] == 2


def test_check_indeterminate_exit_code(tmp_path, capsys):
    path = write(tmp_path, "f.json", family({"kind": "GF", "p": 2},
                                            [[[0, 0, 1], [0, 0, 0], [1, 0, 1]],
                                             [[1, 0, 0], [0, 1, 1], [0, 1, 1]]]))
    code, out, _ = run(capsys, "check", path)
    assert code == 2 and out["reason"] == "small_field"


def test_verify_tampered_basis(tmp_path, capsys):
    fam = write(tmp_path, "f.json", family(Q, [[[1, 0], [0, 1]], [[0, 1], [1, 0]]]))
    cert = tmp_path / "c.json"
    assert main(["check", fam, "-o", str(cert)]) == 0
    code, out, _ = run(capsys, "verify", fam, cert)
    assert code == 0 and out == {"ok": True, "witness": None}
    doc = json.loads(cert.read_text())
    doc["basis"] = [["1", "0"], ["0", "1"]]
    bad = write(tmp_path, "bad.json", doc)
    code, out, _ = run(capsys, "verify", fam, bad)
    assert code == 1
    assert out["witness"]["check"] == "diagonal" and out["witness"]["entry"] == [0, 1]


def test_malformed_input(tmp_path, capsys):
    path = write(tmp_path, "f.json", '{"schema": 1, "field": {"kind": "Q"}, "dim": 1,\n'
                                     ' "forms": [[["x"]]]}')
    code, out, err = run(capsys, "check", path)
    assert code == 3 and out is None
    assert err.startswith(f"simortho: error: {path}:2:14: forms[0][0][0]:")
    assert "Traceback" not in err
    code, _out, err = run(capsys, "check", str(tmp_path / "missing.json"))
    assert code == 3 and "No such file" in err
    assert main(["no-such-command"]) == 3
    capsys.readouterr()


def test_wrong_family_kind(tmp_path, capsys):
    path = write(tmp_path, "f.json", family(Q, [[[1]]]))
    code, _out, err = run(capsys, "st-form", path)
    assert code == 3 and "HyperFamily" in err


def test_radical_and_family_radical(tmp_path, capsys):
    path = write(tmp_path, "f.json", family(Q, [[[1, 0, 0], [0, 0, 0], [0, 0, 0]],
                                                [[0, 0, 0], [0, 1, 0], [0, 0, 0]]]))
    code, out, _ = run(capsys, "radical", path, "--member", 1)
    assert code == 0 and out["radical"]["dim"] == 2 and out["nondegenerate"] is False
    code, out, _ = run(capsys, "family-radical", path)
    assert out["radical"]["basis"] == [["0"], ["0"], ["1"]] and out["minimal_support"] == [0, 1]
    code, _out, err = run(capsys, "radical", path, "--member", 5)
    assert code == 3 and "out of range" in err


def test_orthogonalize(tmp_path, capsys):
    path = write(tmp_path, "f.json", family(Q, [[[1, 1, 0], [1, 1, 0], [0, 0, 0]],
                                                [[0, 1, 0], [1, 0, 0], [0, 0, 0]]]))
    code, out, _ = run(capsys, "orthogonalize", path)
    # member 0 has radical span{e1-e2, e3}, member 1 does not contain it
    assert code == 2 and out["verdict"] == "indeterminate"
    path = write(tmp_path, "g.json", family(Q, [[[1, 0, 0], [0, 1, 0], [0, 0, 0]],
                                                [[0, 1, 0], [1, 0, 0], [0, 0, 0]]]))
    code, out, _ = run(capsys, "orthogonalize", path)
    assert code == 0 and out["basis"] == [["1", "1", "0"], ["1", "-1", "0"], ["0", "0", "1"]]
    # member 1 shares the radical span{e3}, so it works as a base too
    code, out, _ = run(capsys, "orthogonalize", path, "--base", 1)
    assert code == 0 and out["radical_tail"] == 1 and out["base_index"] == 1


def test_combo_and_quotient(tmp_path, capsys):
    path = write(tmp_path, "f.json", family(Q, [[[1, 0], [0, 0]], [[1, 0], [0, 0]]]))
    code, out, _ = run(capsys, "combo", path)
    assert code == 1 and out["reason"] == "identically_singular"
    code, out, _ = run(capsys, "quotient", path)
    assert code == 0 and out["gram"] == [["1"]] and out["section"] == [["1"], ["0"]]
    path = write(tmp_path, "g.json", family(Q, [[[1, 0], [0, 0]], [[0, 0], [0, 1]]]))
    code, out, _ = run(capsys, "combo", path)
    assert code == 0 and out["combination"] == ["1", "1"]


def test_ultrafilter_commands(tmp_path, capsys):
    eye = [[1, 0], [0, 1]]
    doc = family(Q, [[[0, 0], [0, 1]], [[1, 0], [0, 0]]], mode="stable_tail",
                 tail=[[str(a) for a in r] for r in eye])
    path = write(tmp_path, "s.json", doc)
    code, out, _ = run(capsys, "double-bracket", path)
    assert code == 0 and out == {"provenance": "stable_tail", "gram": [["1", "0"], ["0", "1"]]}
    code, out, _ = run(capsys, "pathological", path)
    assert code == 0 and out["nonpathological"] is True
    code, out, _ = run(capsys, "pajaro", path)
    assert code == 0 and out == {"nonpathological": True, "double_bracket_nondegenerate": True,
                                 "orthogonalizable": True, "enlarged_diagonal": True}
    path = write(tmp_path, "f.json", family(Q, [eye, [[1, 0], [0, 0]]]))
    code, out, _ = run(capsys, "pathological", path)
    assert code == 1 and out["pathological"]["dim"] == 1


def test_hyper_commands(tmp_path, capsys):
    doc = {"schema": 1, "field": {"kind": "Qt"}, "dim": 2, "mode": "hyper",
           "forms": [[["1", "0"], ["0", "1/t"]]]}
    path = write(tmp_path, "h.json", doc)
    code, out, _ = run(capsys, "st-form", path)
    assert code == 0 and out["gram_st"] == [["1", "0"], ["0", "0"]]
    assert out["negligible"]["basis"] == [["0"], ["1"]]
    code, out, _ = run(capsys, "wwe-check", path)
    assert code == 0 and out["negligible_is_st_radical"] is True and out["robust"] is False
    doc["forms"] = [[["t", "0"], ["0", "1"]]]
    path = write(tmp_path, "u.json", doc)
    code, out, _ = run(capsys, "st-form", path)
    assert code == 1 and out["bounded"] is False


def test_oracle_command(tmp_path, capsys):
    path = write(tmp_path, "f.json", family({"kind": "GF", "p": 2}, [[[0, 1], [1, 0]]]))
    code, out, _ = run(capsys, "oracle", path)
    assert code == 1 and out == {"exists": False, "checked": 6}
    path = write(tmp_path, "g.json", family(Q, [[[1]]]))
    code, out, _ = run(capsys, "oracle", path)
    assert code == 2


def test_batch_check_and_self_consistency(tmp_path, capsys):
    out_dir = tmp_path / "corpus"
    code, out, _ = run(capsys, "corpus", "--seed", 1, "--count", 30, "--out", out_dir)
    assert code == 0 and len(out["written"]) == 30
    files = out["written"]
    batch = tmp_path / "batch.json"
    code = main(["check", *files, "--jobs", "2", "-o", str(batch)])
    results = json.loads(batch.read_text())["results"]
    assert sorted(results) == sorted(files)
    assert code == max({"certificate": 0, "disproved": 1, "indeterminate": 2}[r["verdict"]]
                       for r in results.values())
    # verify accepts every certificate the tool emits
    for path, result in results.items():
        if result["verdict"] != "certificate":
            continue
        cert = write(tmp_path, "cert.json", result)
        assert main(["verify", path, cert]) == 0
    capsys.readouterr()


def test_batch_reports_input_errors(tmp_path, capsys):
    good = write(tmp_path, "g.json", family(Q, [[[1]]]))
    bad = write(tmp_path, "b.json", "{")
    code, out, _ = run(capsys, "check", good, bad, "--jobs", 1)
    assert code == 3
    assert out["results"][bad]["verdict"] == "input_error"
    assert out["results"][good]["verdict"] == "certificate"


def test_output_is_deterministic(tmp_path):
    d = generate_corpus(8, 1, strata=["unconstrained"])[0]
    path = write(tmp_path, "f.json", d)
    runs = [subprocess.run([sys.executable, "-m", "simortho", "check", path],
                           capture_output=True, env={"PYTHONHASHSEED": str(seed),
                                                     "PATH": "/usr/bin:/bin"}).stdout
            for seed in (0, 99)]
    assert runs[0] == runs[1] and runs[0]
