import json

import numpy as np
import pytest
from hypothesis import given, strategies as st

from nilscroll import cli, io, jobs
from nilscroll.errors import ValidationError


def write(path, text):
    path.write_text(text)
    return str(path)


class TestCsvReaders:
    def test_curve(self, tmp_path):
        s = np.linspace(0, 1, 11)
        rows = "\n".join(f"{v},{v},{v ** 2},{-v}" for v in s)
        c = io.read_curve_csv(write(tmp_path / "c.csv", "s,x1,x2,x3\n" + rows + "\n"))
        assert np.allclose(c.value(0.35), [0.35, 0.35 ** 2, -0.35], atol=1e-3)

    def test_ruling_header(self, tmp_path):
        p = write(tmp_path / "r.csv", "s,x1,x2,x3\n0,1,0,1\n1,1,0,1\n")
        with pytest.raises(ValidationError, match="header"):
            io.read_ruling_csv(p)

    def test_missing_file(self, tmp_path):
        with pytest.raises(ValidationError):
            io.read_curve_csv(str(tmp_path / "none.csv"))

    def test_not_increasing(self, tmp_path):
        p = write(tmp_path / "c.csv", "s,v_t,v_x,v_y\n0,1,0,1\n0,1,0,1\n")
        with pytest.raises(ValidationError, match="increasing"):
            io.read_mink_curve_csv(p)

    def test_non_numeric(self, tmp_path):
        p = write(tmp_path / "c.csv", "s,x1,x2,x3\n0,a,0,1\n")
        with pytest.raises(ValidationError):
            io.read_curve_csv(p)

    def test_comments_skipped(self, tmp_path):
        p = write(tmp_path / "k.csv", "# curvature\ns,k1\n0,1\n1,1\n2,1\n3,1\n")
        f = io.read_scalar_csv(p, "k1")
        assert np.allclose(f(np.linspace(0, 3, 7)), 1.0)
        assert np.allclose(f.derivative(1.5), 0.0)


class TestParseFunction:
    def test_constant(self):
        assert io.parse_function("2.5") == 2.5
        assert io.parse_function(3) == 3.0

    @given(st.floats(-3, 3))
    def test_expression_and_derivative(self, s):
        f = io.parse_function("sin(s) + s**2")
        assert f(s) == pytest.approx(np.sin(s) + s * s)
        assert f.derivative(s) == pytest.approx(np.cos(s) + 2 * s)

    def test_other_variable(self):
        assert io.parse_function("1/y", var="y")(2.0) == 0.5

    def test_extra_symbol(self):
        with pytest.raises(ValidationError):
            io.parse_function("s + z")

    def test_garbage(self):
        with pytest.raises(ValidationError):
            io.parse_function("s +* (")

    def test_csv(self, tmp_path):
        p = write(tmp_path / "k.csv", "s,k1\n" + "\n".join(f"{v},{2 * v}" for v in range(6)) + "\n")
        assert io.parse_function("csv:" + p)(2.5) == pytest.approx(5.0)


class TestMeshes:
    def test_obj(self):
        pts = np.arange(2 * 3 * 3, dtype=float).reshape(2, 3, 3) / 7
        text = io.mesh_obj(pts, "demo")
        lines = text.splitlines()
        assert lines[0] == "# " + io.MESH_HEADER
        verts = [l for l in lines if l.startswith("v ")]
        faces = [l for l in lines if l.startswith("f ")]
        assert len(verts) == 6 and len(faces) == 2
        assert verts[1] == "v 0.428571429 0.571428571 0.714285714"
        assert faces[0] == "f 1 4 5 2"

    def test_csv_round_trip(self):
        rng = np.random.default_rng(0)
        s, t = np.linspace(0, 1, 3), np.linspace(-1, 1, 4)
        pts = rng.normal(size=(3, 4, 3))
        rows = io.mesh_csv(s, t, pts).splitlines()
        assert rows[0] == "s,t,x1,x2,x3"
        back = np.array([[float(v) for v in r.split(",")] for r in rows[1:]])
        assert np.array_equal(back[:, 2:].reshape(3, 4, 3), pts)


class TestConfig:
    def test_unknown_key(self):
        with pytest.raises(ValidationError):
            jobs.validate_config({"command": "verify", "branch": "curvature", "bogus": 1})

    def test_unknown_tolerance(self):
        with pytest.raises(ValidationError):
            jobs.validate_config({"command": "verify", "branch": "curvature", "tol": {"nope": 1.0}})

    def test_threads(self, monkeypatch):
        monkeypatch.setenv("NILSCROLL_THREADS", "3")
        assert jobs.thread_count() == 3


class TestCli:
    def run(self, *argv):
        return cli.main(list(argv))

    def test_construct_csv_is_deterministic(self, tmp_path):
        outs = []
        for k in range(2):
            out = tmp_path / f"m{k}.csv"
            assert self.run("construct", "--branch", "beta-half", "--ruling", "circle", "--grid=-1:1:5,-1:1:4",
                            "--out", str(out), "--format", "csv") == 0
            outs.append(out.read_bytes())
        assert outs[0] == outs[1]
        assert outs[0].decode().splitlines()[0] == "s,t,x1,x2,x3"
        assert len(outs[0].decode().splitlines()) == 21

    def test_construct_writes_report(self, tmp_path):
        out = tmp_path / "m.obj"
        assert self.run("construct", "--branch", "curvature", "--k1", "sin(s)", "--out", str(out)) == 0
        rep = json.loads((tmp_path / "m.report.json").read_text())
        assert rep["passed"] is True
        assert out.read_text().startswith("# ")

    def test_verify_passes(self, tmp_path):
        junit = tmp_path / "j.xml"
        assert self.run("verify", "--branch", "ar-data", "--S", "1", "--junit", str(junit)) == 0
        assert "<testsuite" in junit.read_text()

    def test_verify_perturbed_fails(self):
        assert self.run("verify", "--branch", "beta-half", "--ruling", "circle", "--perturb", "0.01") == 1

    def test_missing_csv(self, tmp_path):
        assert self.run("verify", "--branch", "curvature", "--k1", f"csv:{tmp_path / 'none.csv'}") == 2

    def test_bad_tolerance_name(self):
        assert self.run("verify", "--branch", "curvature", "--tol", "bogus=1") == 2

    def test_invalid_chart(self):
        assert self.run("verify", "--branch", "ar-data", "--p", "x**2") == 3

    def test_config_file(self, tmp_path):
        cfg = write(tmp_path / "job.json", json.dumps({"branch": "beta-zero", "ruling": "constant", "scale": "s"}))
        assert self.run("verify", "--config", cfg) == 0

    def test_bad_config_file(self, tmp_path):
        assert self.run("verify", "--config", write(tmp_path / "job.json", "{not json")) == 2

    def test_bad_grid_syntax(self):
        with pytest.raises(SystemExit) as exc:
            self.run("verify", "--grid", "1:2")
        assert exc.value.code == 2

    def test_examples(self, tmp_path):
        assert self.run("examples", "all", "--outdir", str(tmp_path)) == 0
        assert len(list(tmp_path.glob("*.obj"))) == len(jobs.FIGURES)

    def test_unknown_example(self, tmp_path):
        assert self.run("examples", "spiral", "--outdir", str(tmp_path)) == 2
