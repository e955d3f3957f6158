import io
import json

import numpy as np
import pytest

from ghkit import io as gio
from ghkit.admissible import validate_admissible
from ghkit.cli import run
from ghkit.config import DEFAULT_TOL, PAIR_BUDGET, defaults_from_env
from ghkit.errors import FileFormat
from ghkit.metric_core import PointedSpace

from _spaces import PT, SEG1, SEG2


def call(*argv):
    buf = io.StringIO()
    code = run(list(argv), out=buf)
    text = buf.getvalue()
    return code, (json.loads(text) if text.strip() else None), text


@pytest.fixture
def files(tmp_path):
    paths = {}
    for name, X in [("seg1", SEG1), ("seg2", SEG2), ("pt", PT)]:
        paths[name] = tmp_path / f"{name}.json"
        gio.write_space(X, paths[name])
    paths["bad"] = tmp_path / "bad.json"
    paths["bad"].write_text(json.dumps({"n": 3, "d": [[0, 1, 3], [1, 0, 1], [3, 1, 0]]}))
    return {k: str(v) for k, v in paths.items()}


class TestJSON:
    def test_round_sig(self):
        assert gio.round_sig(1 / 3) == 0.333333333333
        assert gio.jsonable({"a": np.float64(2.0), "b": np.arange(2)}) == {"a": 2.0, "b": [0, 1]}

    def test_space_round_trip(self, tmp_path):
        P = PointedSpace(SEG2, 1)
        gio.write_space(P, tmp_path / "s.json")
        Q = gio.read_space(tmp_path / "s.json")
        assert Q.base == 1 and Q.space.same_as(SEG2)

    @pytest.mark.parametrize(
        "content",
        ["not json", "[1, 2]", '{"n": 2}', '{"n": 3, "d": [[0, 1], [1, 0]]}', '{"d": [[0, 1], [1, 0]], "base": 5}'],
    )
    def test_file_format(self, tmp_path, content):
        p = tmp_path / "x.json"
        p.write_text(content)
        with pytest.raises(FileFormat):
            gio.read_space(p)

    def test_curve_csv_header(self):
        text = gio.curve_csv([{"index": 1, "radius": 1.0, "lo": 0.0, "hi": 0.5, "mode": "exact"}])
        assert text.splitlines() == ["index,radius,lo,hi,mode", "1,1,0,0.5,exact"]


class TestConfig:
    def test_defaults(self):
        assert defaults_from_env({}) == (DEFAULT_TOL, PAIR_BUDGET)

    def test_env(self):
        tol, budget = defaults_from_env({"GHKIT_TOL": "1e-6", "GHKIT_BUDGET": "1000"})
        assert tol.metric == tol.iso == 1e-6 and tol.solver == DEFAULT_TOL.solver
        assert budget == 1000

    def test_flag_beats_env(self, files, monkeypatch):
        monkeypatch.setenv("GHKIT_BUDGET", "10")
        assert call("approx", files["seg2"], files["seg1"])[0] == 1
        assert call("approx", files["seg2"], files["seg1"], "--budget", "1e6")[0] == 0


class TestCommands:
    def test_gh(self, files):
        code, out, _ = call("gh", files["seg2"], files["pt"])
        assert code == 0 and out["value"] == 1.0 and out["interval"] == [1.0, 4.0]

    def test_validate_bad(self, files):
        code, out, _ = call("validate", files["bad"])
        assert code == 1
        assert out["error"] == "TriangleViolation"
        assert (out["i"], out["j"], out["via"], out["slack"]) == (0, 2, 1, 1.0)

    def test_missing_file(self, tmp_path):
        code, out, _ = call("validate", str(tmp_path / "nope.json"))
        assert code == 1 and out["error"] == "FileFormat"

    def test_usage(self):
        assert call("gh")[0] == 2
        assert call("frobnicate")[0] == 2

    def test_gen_lattice_revalidates(self, tmp_path):
        out = tmp_path / "out.json"
        code, res, _ = call("gen", "--seq", "lattice", "--mesh", "0.25", "--R", "2", "-o", str(out))
        assert code == 0 and res["n"] == 17
        code, res, _ = call("validate", str(out))
        assert code == 0 and res["n"] == 17

    def test_gen_cycle(self):
        code, res, _ = call("gen", "--seq", "cycle", "--n", "4", "--scale", "1")
        assert res["d"] == [[0, 1, 2, 1], [1, 0, 1, 2], [2, 1, 0, 1], [1, 2, 1, 0]]

    def test_gen_rescaled(self, files):
        code, res, _ = call("gen", "--seq", "rescaled", "--space", files["seg1"], "--alpha", "2")
        assert res["d"] == [[0, 2], [2, 0]]

    def test_witness_revalidates(self, files, tmp_path):
        wit = tmp_path / "w.json"
        call("gh", files["seg2"], files["seg1"], "--witness-out", str(wit))
        assert call("validate", str(wit))[0] == 0
        d = np.array(json.loads(wit.read_text())["d"])
        validate_admissible(SEG2, SEG1, d[:2, 2:])

    def test_deterministic(self, files):
        a = call("gh", files["seg2"], files["seg1"], "--pointed")[2]
        b = call("gh", files["seg2"], files["seg1"], "--pointed")[2]
        assert a == b

    def test_hausdorff_isometry_approx(self, files, tmp_path):
        p3 = tmp_path / "p3.json"
        p3.write_text(json.dumps({"d": [[0, 1, 2], [1, 0, 1], [2, 1, 0]]}))
        assert call("hausdorff", str(p3), "--a", "0", "--b", "0,2")[1]["value"] == 2
        assert call("isometry", files["seg2"], files["seg2"])[1]["isometry"] == [0, 1]
        assert call("approx", files["seg2"], files["pt"])[1]["defect"] == 2
        assert call("length", str(p3), "--from", "0", "--to", "2", "--depth", "1")[1]["length"] == 2

    def test_glue_and_restrict(self, files):
        code, res, _ = call("glue", files["seg2"], files["seg2"], "--map", "0,1", "--eps", "1")
        assert code == 0 and res["hausdorff"] == 0.5
        code, res, _ = call("restrict", files["seg2"], files["seg2"], "--f", "0,1", "--g", "0,1", "--R", "2", "--r", "1")
        assert code == 0 and res["defect"] == 0

    def test_converge_csv(self, files, tmp_path):
        ref = tmp_path / "ref.json"
        call("gen", "--seq", "lattice", "--mesh", "0.25", "--R", "2", "-o", str(ref))
        csv = tmp_path / "curve.csv"
        code, res, _ = call("converge", "--seq", "lattice", "--R", "2", "--reference", str(ref),
                            "--radii", "1", "--indices", "1..4", "--csv", str(csv))
        assert code == 0 and len(res["curve"]) == 4
        assert csv.read_text().splitlines()[0] == "index,radius,lo,hi,mode"
        code, res, _ = call("schedule", "--table", str(csv))
        assert code == 0

    def test_schedule_failure(self, tmp_path):
        csv = tmp_path / "t.csv"
        csv.write_text("index,radius,eps\n1,2,1\n2,2,1\n")
        code, res, _ = call("schedule", "--table", str(csv))
        assert code == 1 and res["error"] == "NoFeasibleSchedule"

    def test_sublimit_and_accum(self, files, tmp_path):
        d = tmp_path / "spaces"
        d.mkdir()
        for k in range(4):
            gio.write_space(SEG1 if k % 2 == 0 else SEG2, d / f"s{k}.json")
        code, res, _ = call("sublimit", "--spaces", str(d), "--subseq", "0,2", "--r", "3")
        assert code == 0 and res["spread"] == 0
        seq = tmp_path / "a.csv"
        seq.write_text("a\n" + "\n".join(str((-1) ** i + 1 / (i + 1)) for i in range(200)))
        code, res, _ = call("accum", "--csv", str(seq), "--tol", "0.05")
        assert [round(p["value"]) for p in res["points"]] == [-1, 1]
