import json
import subprocess
import sys
from pathlib import Path

import numpy as np
import pytest
import yaml

from qsbai.cli import main, sweep_csv
from qsbai.config import dump_config, load_config, parse_config
from qsbai.errors import ConfigParseError

CONFIGS = Path(__file__).resolve().parent.parent / "configs"


def read_csv(path):
    rows = [line.split(",") for line in Path(path).read_text().splitlines()]
    assert rows[0] == ["t", "vertex", "prob"]
    return {(int(t), int(v)): float(p) for t, v, p in rows[1:]}


def minimal(**extra):
    data = {
        "mode": "sweep",
        "horizon": 4,
        "graph": {"kind": "complete_loops", "n": 2},
        "environment": {"num_env_states": 2, "eta": [[0.7, 0.3], [0.2, 0.8]], "winning": [[0, 0], [1, 0]]},
    }
    data.update(extra)
    return data


def write(tmp_path, data, name="run.cfg"):
    path = tmp_path / name
    path.write_text(yaml.safe_dump(data) if not isinstance(data, str) else data)
    return path


class TestBundledConfigs:
    def test_fig5(self, tmp_path):
        out = tmp_path / "fig5.csv"
        assert main(["run", str(CONFIGS / "fig5_complete.cfg"), "--out", str(out)]) == 0
        rows = read_csv(out)
        assert len(rows) == 31 * 30
        assert rows[(6, 0)] == pytest.approx(0.7354, abs=5e-4)

    def test_fig6(self, tmp_path):
        out = tmp_path / "fig6.csv"
        assert main(["run", str(CONFIGS / "fig6_bipartite.cfg"), "--out", str(out)]) == 0
        assert read_csv(out)[(6, 0)] == pytest.approx(0.3677, abs=5e-4)

    def test_unmarked(self, tmp_path):
        out = tmp_path / "flat.csv"
        assert main(["run", str(CONFIGS / "unmarked_example.cfg"), "--out", str(out)]) == 0
        share = {0: 0.3, 1: 0.2, 2: 0.2, 3: 0.2, 4: 0.1}
        for (t, w), p in read_csv(out).items():
            assert p == pytest.approx(share[w], abs=1e-10)

    @pytest.mark.parametrize("name", ["fig5_complete.cfg", "fig6_bipartite.cfg", "unmarked_example.cfg"])
    def test_round_trip(self, name):
        cfg = load_config(CONFIGS / name)
        assert parse_config(yaml.safe_load(dump_config(cfg))) == cfg

    def test_byte_identical(self, tmp_path):
        a, b = tmp_path / "a.csv", tmp_path / "b.csv"
        for out in (a, b):
            assert main(["run", str(CONFIGS / "fig6_bipartite.cfg"), "--out", str(out)]) == 0
        assert a.read_bytes() == b.read_bytes()


class TestModes:
    def test_verify_json(self, tmp_path):
        out = tmp_path / "report.json"
        assert main(["run", str(CONFIGS / "fig5_complete.cfg"), "--mode", "verify", "--format", "json", "--out", str(out)]) == 0
        report = json.loads(out.read_text())
        assert set(report) >= {"family", "q_bar", "theta", "s", "t_star", "bound_rhs", "p_observed", "bound_satisfied"}
        assert report["t_star"] == 6 and report["bound_satisfied"] is True
        assert report["bound_rhs"] == pytest.approx(0.7264, abs=5e-4)

    def test_verify_csv_record(self, tmp_path):
        out = tmp_path / "report.csv"
        assert main(["run", str(CONFIGS / "fig6_bipartite.cfg"), "--mode", "verify", "--out", str(out)]) == 0
        header, row = out.read_text().splitlines()
        assert header.startswith("family,q_bar,theta,s,t_star,bound_rhs,p_observed,bound_satisfied")
        assert row.startswith("complete_bipartite,")

    def test_sample(self, tmp_path):
        out = tmp_path / "s.json"
        args = ["run", str(CONFIGS / "fig5_complete.cfg"), "--mode", "sample", "--horizon", "6", "--seed", "7",
                "--format", "json", "--out", str(out)]
        assert main(args) == 0
        first = json.loads(out.read_text())
        assert first["horizon"] == 6 and first["seed"] == 7
        assert 0 <= first["arm"] < 30
        assert main(args) == 0
        assert json.loads(out.read_text()) == first

    def test_sweep_json(self, tmp_path):
        out = tmp_path / "sweep.json"
        assert main(["run", str(write(tmp_path, minimal())), "--format", "json", "--out", str(out)]) == 0
        record = json.loads(out.read_text())
        assert np.allclose(np.sum(record["curve"], axis=1), 1.0)

    def test_stdout(self, tmp_path, capsys):
        assert main(["run", str(write(tmp_path, minimal())), "--horizon", "1"]) == 0
        lines = capsys.readouterr().out.splitlines()
        assert lines[0] == "t,vertex,prob" and len(lines) == 1 + 2 * 2

    def test_bound_violation_exit(self, tmp_path, monkeypatch, capsys):
        import qsbai.analysis as analysis
        monkeypatch.setattr(analysis, "bound_complete", lambda stats, n: 2.0)
        out = tmp_path / "r.json"
        assert main(["run", str(CONFIGS / "fig5_complete.cfg"), "--mode", "verify", "--out", str(out)]) == 4
        assert json.loads(capsys.readouterr().err)["kind"] == "bound_violated"
        assert out.exists()


class TestErrors:
    def check_error(self, capsys, code, kind, args):
        assert main(args) == code
        record = json.loads(capsys.readouterr().err.strip().splitlines()[-1])
        assert record["status"] == "error" and record["kind"] == kind
        return record

    def test_malformed_yaml(self, tmp_path, capsys):
        self.check_error(capsys, 2, "parse", ["run", str(write(tmp_path, "graph: [unclosed"))])

    def test_missing_file(self, tmp_path, capsys):
        self.check_error(capsys, 2, "parse", ["run", str(tmp_path / "nope.cfg")])

    def test_missing_block(self, tmp_path, capsys):
        data = minimal()
        del data["environment"]
        self.check_error(capsys, 2, "parse", ["run", str(write(tmp_path, data))])

    def test_unknown_kind(self, tmp_path, capsys):
        self.check_error(capsys, 2, "parse", ["run", str(write(tmp_path, minimal(graph={"kind": "cycle", "n": 3})))])

    def test_dimension_mismatch(self, tmp_path, capsys):
        rec = self.check_error(capsys, 3, "validation",
                               ["run", str(write(tmp_path, minimal(graph={"kind": "complete_loops", "n": 3})))])
        assert "eta rows" in rec["message"]

    def test_bad_eta(self, tmp_path, capsys):
        data = minimal()
        data["environment"]["eta"] = [[0.7, 0.2], [0.2, 0.8]]
        self.check_error(capsys, 3, "validation", ["run", str(write(tmp_path, data))])

    def test_isolated_vertex(self, tmp_path, capsys):
        self.check_error(capsys, 3, "validation",
                         ["run", str(write(tmp_path, minimal(graph={"kind": "edge_list", "n": 2, "edges": [[0, 0]]})))])

    def test_sample_needs_seed(self, tmp_path, capsys):
        self.check_error(capsys, 3, "validation", ["run", str(write(tmp_path, minimal(mode="sample")))])

    def test_sweep_needs_horizon(self, tmp_path, capsys):
        data = minimal()
        del data["horizon"]
        self.check_error(capsys, 3, "validation", ["run", str(write(tmp_path, data))])

    def test_verify_edge_list_needs_family(self, tmp_path, capsys):
        data = minimal(mode="verify", graph={"kind": "edge_list", "n": 2, "edges": [[0, 1]]})
        self.check_error(capsys, 3, "validation", ["run", str(write(tmp_path, data))])

    def test_verify_wrong_family(self, tmp_path, capsys):
        data = minimal(mode="verify", family="complete_bipartite")
        self.check_error(capsys, 3, "validation", ["run", str(write(tmp_path, data))])

    def test_tie_in_verify(self, tmp_path, capsys):
        data = minimal(mode="verify")
        data["environment"]["eta"] = [[0.5, 0.5], [0.5, 0.5]]
        self.check_error(capsys, 3, "validation", ["run", str(write(tmp_path, data))])

    def test_unknown_key(self):
        with pytest.raises(ConfigParseError):
            parse_config(minimal(bogus=1))

    def test_bad_types(self):
        with pytest.raises(ConfigParseError):
            parse_config(minimal(horizon="ten"))
        with pytest.raises(ConfigParseError):
            parse_config(minimal(graph={"kind": "complete_loops", "n": True}))
        with pytest.raises(ConfigParseError):
            parse_config(minimal(output={"format": "xml"}))

    def test_usage_error_exit_code(self):
        with pytest.raises(SystemExit) as exc:
            main(["run"])
        assert exc.value.code == 2


def test_overrides_and_round_trip(tmp_path):
    cfg = load_config(write(tmp_path, minimal()))
    new = cfg.with_overrides(mode="sample", horizon=9, seed=3, out="x.json", format="json")
    assert (new.mode, new.horizon, new.seed, new.output.path, new.output.format) == ("sample", 9, 3, "x.json", "json")
    assert cfg.with_overrides(mode=None) == cfg
    assert parse_config(yaml.safe_load(dump_config(new))) == new


def test_csv_precision():
    text = sweep_csv(np.array([[1 / 3, 2 / 3]]))
    assert text == "t,vertex,prob\n0,0,0.333333333333\n0,1,0.666666666667\n"


def test_batch(tmp_path):
    paths = []
    for i, h in enumerate((2, 3)):
        paths.append(str(write(tmp_path, minimal(horizon=h, output={"path": str(tmp_path / f"o{i}.csv")}), f"c{i}.cfg")))
    assert main(["batch", *paths, "--workers", "2"]) == 0
    assert len((tmp_path / "o1.csv").read_text().splitlines()) == 1 + 4 * 2


def test_console_entry_point(tmp_path):
    proc = subprocess.run(
        [sys.executable, "-m", "qsbai.cli", "run", str(CONFIGS / "fig5_complete.cfg"), "--out", "-"],
        capture_output=True, text=True, check=True,
    )
    assert "6,0,0.735437926888" in proc.stdout.splitlines()
