"""Command-line front end: reports, exit codes, scans, determinism."""
import json
import re

import numpy as np
import pytest

import conerank.cli as cli
from conerank.oracles import gen_cp_example, gen_tensor_example


def write_csv(path, arr):
    np.savetxt(path, np.asarray(arr, dtype=float), delimiter=",")
    return str(path)

def write_tensor(path, T):
    data = np.asarray(T, dtype=float)
    obj = {"shape": list(data.shape), "data": data.ravel(order="C").tolist()}
    path.write_text(json.dumps(obj))
    return str(path)


def run_report(tmp_path, argv):
    out = tmp_path / "report.json"
    code = cli.main(argv + ["--out", str(out)])
    return code, json.loads(out.read_text())


def by_name(report):
    return {b["name"]: b for b in report["bounds"]}


class TestNonnegCommand:
    def test_anchor_report(self, tmp_path):
        path = write_csv(tmp_path / "a.csv", [[1.0, 1.0], [1.0, 0.5]])
        code, rep = run_report(tmp_path, ["nonneg", "--input", path, "--bounds", "tau"])
        assert code == 0
        assert rep["schema"] == 1
        assert rep["tool"]["name"] == "conerank"
        assert rep["instance"]["shape"] == [2, 2]
        assert rep["instance"]["support_size"] == 4
        assert len(rep["instance"]["input_sha256"]) == 64
        entry = by_name(rep)["tau_plus_sos"]
        assert entry["status"] in ("optimal", "near-optimal")
        assert abs(entry["value"] - 4.0 / 3.0) <= 1e-5
        assert entry["constraints"]["equalities"] == 1

    def test_identity_all_bounds(self, tmp_path):
        path = write_csv(tmp_path / "i.csv", np.eye(3))
        code, rep = run_report(tmp_path, [
            "nonneg", "--input", path,
            "--bounds", "tau,omega,theta,chi_frac,chi,mutual_info"])
        assert code == 0
        vals = {k: v["value"] for k, v in by_name(rep).items()}
        assert abs(vals["tau_plus_sos"] - 3.0) <= 1e-5
        assert vals["omega"] == 3.0
        assert abs(vals["theta_bar"] - 3.0) <= 1e-5
        assert abs(vals["chi_frac"] - 3.0) <= 1e-6
        assert vals["chi"] == 3.0
        # diag(1,1,1)/3 has one bit of shared information... no: uniform
        # marginals with deterministic coupling give log2(3) bits, 2**log2(3) = 3
        assert abs(vals["mutual_info"] - 3.0) <= 1e-9
        statuses = {k: v["status"] for k, v in by_name(rep).items()}
        assert statuses["theta_bar"] == "certified"
        assert statuses["chi_frac"] == "certified"
        assert statuses["omega"] == "exact"

    def test_all_ones_every_bound_is_one(self, tmp_path):
        path = write_csv(tmp_path / "o.csv", np.ones((3, 3)))
        code, rep = run_report(tmp_path, [
            "nonneg", "--input", path,
            "--bounds", "tau,omega,theta,chi_frac,chi,mutual_info"])
        assert code == 0
        for name, entry in by_name(rep).items():
            assert abs(entry["value"] - 1.0) <= 1e-5, name

    def test_theta_bar_alias(self, tmp_path):
        path = write_csv(tmp_path / "a.csv", np.eye(2))
        code, rep = run_report(tmp_path, ["nonneg", "--input", path,
                                          "--bounds", "theta_bar"])
        assert code == 0
        assert [b["name"] for b in rep["bounds"]] == ["theta_bar"]

    def test_zero_matrix_reports_zero_input(self, tmp_path):
        path = write_csv(tmp_path / "z.csv", np.zeros((2, 3)))
        code, rep = run_report(tmp_path, ["nonneg", "--input", path,
                                          "--bounds", "tau,omega"])
        assert code == 0
        for entry in rep["bounds"]:
            assert entry["value"] == 0.0
            assert entry["status"] == "zero-input"

    def test_strengthening_flag_changes_value(self, tmp_path):
        path = write_csv(tmp_path / "a.csv", [[1.0, 1.0], [1.0, 0.5]])
        code, rep = run_report(tmp_path, ["nonneg", "--input", path,
                                          "--bounds", "tau", "--extra-2t"])
        assert code == 0
        assert abs(by_name(rep)["tau_plus_sos"]["value"] - 1.5) <= 1e-5

    def test_report_is_deterministic_up_to_timings(self, tmp_path):
        path = write_csv(tmp_path / "a.csv", [[1.0, 0.3], [0.0, 0.7]])
        argv = ["nonneg", "--input", path, "--bounds", "tau,omega,theta"]
        out1, out2 = tmp_path / "r1.json", tmp_path / "r2.json"
        assert cli.main(argv + ["--out", str(out1)]) == 0
        assert cli.main(argv + ["--out", str(out2)]) == 0
        strip = lambda s: re.sub(r'"wall_ms": [0-9.e+-]+', '"wall_ms": 0', s)
        assert strip(out1.read_text()) == strip(out2.read_text())


class TestTensorCommand:
    def test_low_rank_point(self, tmp_path):
        path = write_tensor(tmp_path / "t.json", gen_tensor_example(1.0, 1.0).entries)
        code, rep = run_report(tmp_path, ["tensor", "--input", path])
        assert code == 0
        entry = by_name(rep)["tau_plus_sos"]
        assert entry["value"] <= 2.0 + 1e-4
        assert abs(entry["value"] - 1.0) <= 1e-5

    def test_high_rank_point(self, tmp_path):
        path = write_tensor(tmp_path / "t.json", gen_tensor_example(0.0, 3.0).entries)
        code, rep = run_report(tmp_path, ["tensor", "--input", path])
        assert code == 0
        assert by_name(rep)["tau_plus_sos"]["value"] >= 2.5

    def test_order_two_rejected(self, tmp_path):
        path = write_tensor(tmp_path / "t.json", np.ones((2, 2)))
        assert cli.main(["tensor", "--input", path]) == 2

    def test_malformed_json_rejected(self, tmp_path):
        p = tmp_path / "bad.json"
        p.write_text("{not json")
        assert cli.main(["tensor", "--input", str(p)]) == 2


class TestCpCommand:
    def test_example_bounds(self, tmp_path):
        path = write_csv(tmp_path / "c.csv", gen_cp_example(0.0, 0.0).entries)
        code, rep = run_report(tmp_path, [
            "cp", "--input", path, "--bounds", "tau,rank,c_frac,c_exact"])
        assert code == 0
        vals = {k: v["value"] for k, v in by_name(rep).items()}
        assert abs(vals["tau_cp_sos"] - 6.0) <= 1e-4
        assert vals["rank"] == 4.0
        assert abs(vals["c_frac"] - 6.0) <= 1e-6
        assert vals["c_exact"] == 6.0
        assert rep["instance"]["isolated_diagonal_vertices"] == 0

    def test_identity_reports_isolated_vertices(self, tmp_path):
        path = write_csv(tmp_path / "i.csv", np.eye(4))
        code, rep = run_report(tmp_path, ["cp", "--input", path,
                                          "--bounds", "rank,c_exact"])
        assert code == 0
        # every vertex carries only its diagonal: the edge cover is empty
        # and the isolated count says the cover alone undercounts cp-rank
        assert rep["instance"]["isolated_diagonal_vertices"] == 4
        vals = {k: v["value"] for k, v in by_name(rep).items()}
        assert vals["rank"] == 4.0
        assert vals["c_exact"] == 0.0

    def test_asymmetric_rejected(self, tmp_path):
        path = write_csv(tmp_path / "b.csv", [[1.0, 2.0], [0.5, 1.0]])
        assert cli.main(["cp", "--input", path]) == 2


class TestErrorPaths:
    def test_missing_file(self):
        assert cli.main(["nonneg", "--input", "/nonexistent/x.csv"]) == 2

    def test_negative_entry(self, tmp_path):
        path = write_csv(tmp_path / "n.csv", [[1.0, -2.0]])
        assert cli.main(["nonneg", "--input", path]) == 2

    def test_unknown_bound_token(self, tmp_path):
        path = write_csv(tmp_path / "a.csv", np.eye(2))
        assert cli.main(["nonneg", "--input", path, "--bounds", "bogus"]) == 2

    def test_cap_exceeded_exit_code(self, tmp_path):
        # support of 30 cells exceeds the exact-cover cap of 25
        path = write_csv(tmp_path / "big.csv", np.ones((6, 5)))
        code, rep = run_report(tmp_path, ["nonneg", "--input", path,
                                          "--bounds", "chi"])
        assert code == 4
        assert rep["bounds"][0]["status"] == "cap-exceeded"

    def test_solver_failure_exit_code(self, tmp_path, monkeypatch):
        from conerank.solve import ConicSolution
        from conerank.solve import solve as real_solve

        def fake_solve(p, opts=None):
            sol = real_solve(p, opts)
            return ConicSolution(
                status="numerical-failure", primal_objective=None,
                dual_objective=None, scalar_values={}, block_values={},
                equality_duals={}, inequality_duals={}, psd_duals={},
                iterations=0, wall_time=sol.wall_time)

        monkeypatch.setattr(cli, "solve", fake_solve)
        path = write_csv(tmp_path / "a.csv", np.eye(2))
        code, rep = run_report(tmp_path, ["nonneg", "--input", path,
                                          "--bounds", "tau"])
        assert code == 3
        entry = rep["bounds"][0]
        assert entry["status"] == "solver-failure"
        assert entry["solver_status"] == "numerical-failure"

    def test_solver_failure_precedence_over_cap(self):
        report = {"bounds": [{"status": "cap-exceeded"},
                             {"status": "solver-failure"}]}
        assert cli._exit_code_for(report) == 3


class TestScanCommand:
    def test_nested_rect_grid(self, tmp_path):
        out = tmp_path / "scan.csv"
        code = cli.main(["scan", "nested-rect", "--grid", "3",
                         "--range", "0:1,0:1", "--out", str(out)])
        assert code == 0
        lines = out.read_text().strip().split("\n")
        assert lines[0] == "param1,param2,bound,status"
        assert len(lines) == 1 + 9
        first = lines[1].split(",")
        assert first[0] == "0" and first[1] == "0"
        assert abs(float(first[2]) - 1.0) <= 1e-5
        assert first[3] in ("optimal", "near-optimal")
        # outer parameter varies slowest
        assert [l.split(",")[0] for l in lines[1:]] == \
            ["0", "0", "0", "0.5", "0.5", "0.5", "1", "1", "1"]

    def test_tensor_point(self, tmp_path):
        out = tmp_path / "scan.csv"
        code = cli.main(["scan", "tensor-2x2x2", "--grid", "2",
                         "--range", "1:1,1:1", "--out", str(out)])
        assert code == 0
        rows = out.read_text().strip().split("\n")[1:]
        assert len(rows) == 4
        for row in rows:
            assert float(row.split(",")[2]) <= 2.0 + 1e-4

    def test_cp_point(self, tmp_path):
        out = tmp_path / "scan.csv"
        code = cli.main(["scan", "cp-example", "--grid", "2",
                         "--range", "0:0,0:0", "--tol", "1e-6",
                         "--out", str(out)])
        assert code == 0
        rows = out.read_text().strip().split("\n")[1:]
        assert len(rows) == 4
        for row in rows:
            assert abs(float(row.split(",")[2]) - 6.0) <= 1e-3

    def test_grid_too_small(self):
        assert cli.main(["scan", "nested-rect", "--grid", "1"]) == 2

    def test_malformed_range(self):
        assert cli.main(["scan", "nested-rect", "--range", "zz"]) == 2

    def test_scan_determinism(self, tmp_path):
        o1, o2 = tmp_path / "s1.csv", tmp_path / "s2.csv"
        argv = ["scan", "nested-rect", "--grid", "2", "--range", "0:0.5,0:0.5"]
        assert cli.main(argv + ["--out", str(o1)]) == 0
        assert cli.main(argv + ["--out", str(o2)]) == 0
        assert o1.read_bytes() == o2.read_bytes()
