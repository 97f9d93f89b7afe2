"""CLI: exit codes, artifacts, and parity with the HTTP payloads."""

import json
import os

import pytest
from click.testing import CliRunner

from nfvplan.cli import main
from nfvplan.generate import sec2_video
from nfvplan.model import dumps_scenario, save_scenario


@pytest.fixture()
def runner():
    return CliRunner()


@pytest.fixture()
def video_path(tmp_path):
    path = tmp_path / "video.json"
    save_scenario(sec2_video(), path)
    return str(path)


@pytest.fixture()
def infeasible_path(tmp_path):
    from nfvplan.generate import sec2_combined

    path = tmp_path / "bad-latency.json"
    save_scenario(sec2_combined(include_flex=False), path)
    return str(path)


class TestSolve:
    def test_video_fixture(self, runner, video_path, tmp_path):
        out = tmp_path / "out"
        result = runner.invoke(main, ["solve", video_path, "--out-dir", str(out)])
        assert result.exit_code == 0, result.output
        assert "130.000000" in result.output
        plan = json.loads((out / "plan.json").read_text())
        assert plan["cost_total"] == pytest.approx(130.0)
        assert (out / "report.csv").read_text().startswith("status,cost_total")

    def test_infeasible_exit_2(self, runner, infeasible_path, tmp_path):
        result = runner.invoke(
            main, ["solve", infeasible_path, "--out-dir", str(tmp_path / "o")])
        assert result.exit_code == 2
        assert "infeasible" in result.output

    def test_missing_file_exit_1(self, runner):
        result = runner.invoke(main, ["solve", "missing.json"])
        assert result.exit_code == 1

    def test_malformed_json_reports_position(self, runner, tmp_path):
        bad = tmp_path / "broken.json"
        bad.write_text("{\n  oops")
        result = runner.invoke(main, ["solve", str(bad)])
        assert result.exit_code == 1
        assert "line" in result.output

    def test_export_lp(self, runner, video_path, tmp_path):
        out = tmp_path / "out"
        result = runner.invoke(main, ["solve", video_path, "--out-dir", str(out),
                                      "--export-lp"])
        assert result.exit_code == 0
        text = (out / "model.lp").read_text()
        assert text.startswith("Minimize")
        from nfvplan.solver import parse_lp, solve_milp

        prob = parse_lp(text)
        assert solve_milp(prob).objective == pytest.approx(130.0, abs=1e-6)


class TestCompareAndSweep:
    def test_compare_combined(self, runner, tmp_path):
        from nfvplan.generate import sec2_combined

        path = tmp_path / "combined.json"
        save_scenario(sec2_combined(), path)
        result = runner.invoke(main, ["compare", str(path),
                                      "--out-dir", str(tmp_path)])
        assert result.exit_code == 0, result.output
        lines = result.output.strip().splitlines()
        hybrid = [l for l in lines if l.startswith("hybrid")][0]
        assert "300.000000" in hybrid

    def test_sweep_monotone(self, runner, video_path, tmp_path):
        result = runner.invoke(main, [
            "sweep", video_path, "--param", "cloud_elas_multiplier",
            "--values", "1,0.1,0.01", "--out-dir", str(tmp_path)])
        assert result.exit_code == 0, result.output
        rows = [l.split(",") for l in result.output.strip().splitlines()[1:]]
        costs = [float(r[2]) for r in rows]
        assert costs == sorted(costs, reverse=True)

    def test_sweep_unknown_param(self, runner, video_path):
        result = runner.invoke(main, ["sweep", video_path, "--param", "bogus",
                                      "--values", "1,2"])
        assert result.exit_code != 0
        assert "cloud_elas_multiplier" in result.output

    def test_sweep_empty_values(self, runner, video_path):
        result = runner.invoke(main, ["sweep", video_path,
                                      "--param", "cloud_elas_multiplier",
                                      "--values", ""])
        assert result.exit_code == 1


class TestValidateAndGenerate:
    def test_validate_ok(self, runner, video_path):
        result = runner.invoke(main, ["validate", video_path])
        assert result.exit_code == 0
        assert result.output.strip() == "ok"

    def test_validate_reports_violations(self, runner, tmp_path):
        doc = json.loads(dumps_scenario(sec2_video()))
        doc["epochs"] = 7
        path = tmp_path / "bad.json"
        path.write_text(json.dumps(doc))
        result = runner.invoke(main, ["validate", str(path)])
        assert result.exit_code == 1
        assert "epoch mismatch" in result.output

    def test_generate_deterministic(self, runner, tmp_path):
        p1, p2 = tmp_path / "a.json", tmp_path / "b.json"
        for p in (p1, p2):
            result = runner.invoke(main, ["generate", "--kind", "paper",
                                          "--seed", "5", "--out", str(p)])
            assert result.exit_code == 0
        assert p1.read_bytes() == p2.read_bytes()

    def test_generate_then_solve(self, runner, tmp_path):
        path = tmp_path / "s.json"
        result = runner.invoke(main, ["generate", "--kind", "sec2-combined",
                                      "--out", str(path)])
        assert result.exit_code == 0
        result = runner.invoke(main, ["solve", str(path),
                                      "--out-dir", str(tmp_path / "out")])
        assert result.exit_code == 0
        assert "300.000000" in result.output


class TestHttpParity:
    def test_plan_bytes_identical_to_service(self, runner, video_path, tmp_path):
        """CLI plan.json and the HTTP job payload must serialize identically."""
        from fastapi.testclient import TestClient

        from nfvplan.cli import plan_json
        from nfvplan.service import create_app

        out = tmp_path / "out"
        result = runner.invoke(main, ["solve", video_path, "--out-dir", str(out)])
        assert result.exit_code == 0
        cli_bytes = (out / "plan.json").read_bytes()

        app = create_app(store_dir=str(tmp_path / "store"), max_workers=1)
        with TestClient(app) as client:
            doc = json.loads(open(video_path).read())
            sid = client.post("/scenarios", json=doc).json()["id"]
            job = client.post(f"/solve/{sid}").json()["job_id"]
            for _ in range(200):
                body = client.get(f"/jobs/{job}").json()
                if body["status"] in ("done", "failed"):
                    break
            assert body["status"] == "done"
            http_plan = body["result"]["plan"]

        class _P:
            def __init__(self, d):
                self._d = d

            def to_dict(self):
                return self._d

        assert plan_json(_P(http_plan)).encode() == cli_bytes
