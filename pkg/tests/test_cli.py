import json

import numpy as np
import pytest

from gammakit.cli import main
from gammakit.corpus import commuting_unitaries, gamma2_corpus, nonnormal_small_tuple
from gammakit.geometry import counterexample_point, symmetrize
from gammakit.pencils import gamma_unitary_from_unitaries
from gammakit.serialize import matrix_from_literal, point_to_json, tuple_to_json


def _write(tmp_path, name, obj):
    p = tmp_path / name
    p.write_text(json.dumps(obj))
    return str(p)


def _run(capsys, argv):
    code = main(argv)
    out = capsys.readouterr()
    return code, (json.loads(out.out) if out.out.strip() else None), out.err


class TestCheckPoint:
    def test_origin(self, tmp_path, capsys):
        f = _write(tmp_path, "p.json", {"s": [[0, 0]] * 3})
        code, rep, err = _run(capsys, ["check-point", f])
        assert code == 0 and rep["region"] == "open" and rep["summary"]["pass"]
        assert set(rep["methods"]) == {"roots", "schur", "costara", "pencils",
                                       "distinguished_boundary"}
        assert "[timing] total" in err

    def test_torus_point(self, tmp_path, capsys):
        s = symmetrize(np.exp(1j * np.array([0.3, 1.1, 2.0])))
        code, rep, _ = _run(capsys, ["check-point", _write(tmp_path, "p.json", point_to_json(s))])
        assert code == 0 and rep["region"] == "boundary"
        assert rep["methods"]["distinguished_boundary"]["verdict"]

    def test_outside(self, tmp_path, capsys):
        s = symmetrize([1.5, 0.2])
        code, rep, _ = _run(capsys, ["check-point", _write(tmp_path, "p.json", point_to_json(s))])
        assert code == 0 and rep["region"] == "outside"

    def test_counterexample_point(self, tmp_path, capsys):
        s = counterexample_point(4, 2, 1e-3)["s"]
        code, rep, _ = _run(capsys, ["check-point", _write(tmp_path, "p.json", point_to_json(s))])
        assert code == 0 and rep["region"] in ("open", "closed")

    def test_seed_from_environment(self, tmp_path, capsys, monkeypatch):
        monkeypatch.setenv("GAMMA_SEED", "77")
        f = _write(tmp_path, "p.json", {"s": [[0.1, 0]]})
        _, rep, _ = _run(capsys, ["check-point", f])
        assert rep["header"]["seed"] == 77
        _, rep, _ = _run(capsys, ["check-point", f, "--seed", "5"])
        assert rep["header"]["seed"] == 5


class TestErrors:
    def test_missing_file(self, capsys):
        code, rep, err = _run(capsys, ["check-point", "/nonexistent/p.json"])
        assert code == 2 and rep is None and "error" in err

    def test_bad_json(self, tmp_path, capsys):
        p = tmp_path / "bad.json"
        p.write_text("{not json")
        assert _run(capsys, ["check-tuple", str(p)])[0] == 2

    def test_malformed_tuple(self, tmp_path, capsys):
        f = _write(tmp_path, "t.json", {"ops": [[[1, 0]]]})
        assert _run(capsys, ["check-tuple", f])[0] == 2

    def test_bad_flags(self, tmp_path, capsys):
        f = _write(tmp_path, "p.json", {"s": [[0, 0]]})
        assert _run(capsys, ["check-point", f, "--alpha-grid", "0"])[0] == 2
        assert _run(capsys, ["check-point", f, "--tol", "-1"])[0] == 2

    def test_bad_env_seed(self, tmp_path, capsys, monkeypatch):
        monkeypatch.setenv("GAMMA_SEED", "abc")
        f = _write(tmp_path, "p.json", {"s": [[0, 0]]})
        assert _run(capsys, ["check-point", f])[0] == 2

    def test_argparse_usage(self, capsys):
        with pytest.raises(SystemExit) as exc:
            main(["no-such-command"])
        assert exc.value.code == 2


class TestTupleCommands:
    def test_unitary_tuple(self, tmp_path, capsys, rng):
        t = gamma_unitary_from_unitaries(commuting_unitaries(rng, 3, 2))
        f = _write(tmp_path, "t.json", tuple_to_json(t))
        code, rep, _ = _run(capsys, ["check-tuple", f, "--alpha-grid", "16", "--beta-grid", "32"])
        assert code == 0 and rep["summary"]["class"] == "Γₙ-unitary"

    def test_noncommuting(self, tmp_path, capsys):
        obj = {"ops": [[[[0, 0], [1, 0]], [[0, 0], [0, 0]]], [[[0, 0], [0, 0]], [[1, 0], [0, 0]]]]}
        code, rep, _ = _run(capsys, ["check-tuple", _write(tmp_path, "t.json", obj)])
        assert code == 1 and not rep["summary"]["pass"]
        assert rep["summary"]["class"] == "non-commuting"

    def test_fundamental(self, tmp_path, capsys, rng):
        t = gamma2_corpus(rng, 1)[0]
        code, rep, _ = _run(capsys, ["fundamental", _write(tmp_path, "t.json", tuple_to_json(t))])
        assert code == 0 and rep["E"]["side"] == "direct" and rep["F"]["side"] == "adjoint"
        assert rep["uniqueness"]["pass"]

    def test_fundamental_needs_n2(self, tmp_path, capsys):
        f = _write(tmp_path, "t.json", {"ops": [[[[0.5, 0]]]]})
        assert _run(capsys, ["fundamental", f])[0] == 2

    def test_dilate_writes_file(self, tmp_path, capsys, rng):
        t = gamma2_corpus(rng, 1)[0]
        f = _write(tmp_path, "t.json", tuple_to_json(t))
        out = str(tmp_path / "rep.json")
        code, _, _ = _run(capsys, ["dilate", f, "--out", out, "--trunc-past", "3",
                                   "--trunc-future", "3"])
        assert code == 0
        rep = json.loads(open(out).read())
        assert rep["summary"]["text"].startswith("dilation verified")
        dil = json.loads(open(rep["dilation_file"]).read())
        U = matrix_from_literal(dil["U"])
        start = sum(b["dim"] for b in dil["blocks"] if b["offset"] < 0)
        h = slice(start, start + t.dim)
        assert np.allclose(U[h, h], t.S(t.n), atol=1e-12)
        assert dil["n_minus"] == 3 and len(dil["R"]) == t.n - 1

    def test_dilate_gate_failure(self, tmp_path, capsys, rng):
        t = nonnormal_small_tuple(rng, 3, 3)
        code, rep, _ = _run(capsys, ["dilate", _write(tmp_path, "t.json", tuple_to_json(t))])
        assert code == 1
        assert rep["summary"]["text"].startswith("hypothesis gates fail")
        assert rep["summary"]["failing"]

    def test_dilate_short_truncation(self, tmp_path, capsys, rng):
        t = gamma2_corpus(rng, 1)[0]
        f = _write(tmp_path, "t.json", tuple_to_json(t))
        assert _run(capsys, ["dilate", f, "--trunc-past", "1"])[0] == 2


def test_reports_are_deterministic(tmp_path, capsys, rng):
    t = gamma2_corpus(rng, 1)[0]
    f = _write(tmp_path, "t.json", tuple_to_json(t))
    outs = []
    for k in range(2):
        o = str(tmp_path / f"r{k}.json")
        main(["check-tuple", f, "--alpha-grid", "16", "--beta-grid", "16", "--out", o])
        outs.append(open(o, "rb").read())
    assert outs[0] == outs[1]
