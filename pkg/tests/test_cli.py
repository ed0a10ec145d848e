from __future__ import annotations

import json

from click.testing import CliRunner

from fatpoints.cli import main


def run(*args):
    return CliRunner().invoke(main, list(args))


class TestBasics:
    def test_vdim(self):
        r = run("vdim", "L(13;5,4^9)")
        assert r.exit_code == 0 and r.output.strip() == "-1"

    def test_edim_json(self):
        r = run("--json", "edim", "L(1;2,2)")
        assert r.exit_code == 0
        assert json.loads(r.output) == {"edim": -1, "input": "L(1;2^2)"}

    def test_crst(self):
        r = run("crst", "L(30;13,9^9)")
        assert r.exit_code == 0
        lines = r.output.strip().splitlines()
        assert lines[0] == "L(30;13,9^9)"
        assert lines[-1] == "L(26;9^2,8^8)"

    def test_parse_error(self):
        r = run("vdim", "L(30;13,")
        assert r.exit_code != 0


class TestClassify:
    def test_nonspecial(self):
        r = run("--json", "classify", "L(28;12,8^9)")
        assert r.exit_code == 0
        out = json.loads(r.output)
        assert out["verdict"]["kind"] == "NonSpecial"
        assert out["cached"] is False

    def test_minus_one_special(self):
        r = run("classify", "L(4;2^5)")
        assert r.exit_code == 0 and "MinusOneSpecial" in r.output

    def test_stage_restriction(self):
        r = run("--json", "classify", "--stages", "standard_form,rank",
                "L(13;5,4^9)")
        out = json.loads(r.output)
        assert out["verdict"]["kind"] == "Empty"
        assert any(s["op"] == "rank" for s in out["verdict"]["steps"])

    def test_unknown_stage(self):
        r = run("classify", "--stages", "nosuch", "L(4;4)")
        assert r.exit_code != 0

    def test_inconclusive_exit_code(self):
        r = run("classify", "--stages", "rank", "L(4;2^5)")
        assert r.exit_code == 2


class TestCache:
    def test_hit_marked(self, tmp_path):
        path = str(tmp_path / "cache.jsonl")
        r1 = run("--json", "--cache", path, "classify", "L(28;12,8^9)")
        r2 = run("--json", "--cache", path, "classify", "L(28;12,8^9)")
        assert json.loads(r1.output)["cached"] is False
        assert json.loads(r2.output)["cached"] is True

    def test_no_cache_flag(self, tmp_path):
        path = str(tmp_path / "cache.jsonl")
        run("--cache", path, "classify", "L(28;12,8^9)")
        r = run("--json", "--no-cache", "--cache", path,
                "classify", "L(28;12,8^9)")
        assert json.loads(r.output)["cached"] is False

    def test_corrupt_line_is_skipped(self, tmp_path):
        path = tmp_path / "cache.jsonl"
        path.write_text("not json\n")
        r = run("--json", "--cache", str(path), "classify", "L(28;12,8^9)")
        assert r.exit_code == 0
        payloads = []
        for line in r.output.splitlines():
            try:
                payloads.append(json.loads(line))
            except json.JSONDecodeError:
                assert "corrupt cache line" in line
        assert len(payloads) == 1 and payloads[0]["cached"] is False


class TestReduceAndRank:
    def test_reduce(self):
        r = run("--json", "reduce", "--diagram", "(~32)",
                "--mults", "12,9^9")
        out = json.loads(r.output)
        assert out["consumed_all"] is True and out["final_cells"] == 45

    def test_rank_system(self):
        r = run("--json", "rank", "L(13;5,4^9)")
        out = json.loads(r.output)
        assert out["rows"] == out["cols"] == out["rank"] == 105
        assert out["full_rank"] is True

    def test_rank_diagram(self):
        r = run("--json", "rank", "--diagram", "(~5)", "--mults", "2^4,1^3")
        out = json.loads(r.output)
        assert out["full_rank"] is True

    def test_rank_needs_input(self):
        assert run("rank").exit_code != 0


class TestInitialCasesAndLedger:
    def test_enumeration_only(self):
        r = run("--json", "initial-cases", "--m", "6", "--a", "16",
                "--k", "0", "--enumeration-only")
        out = json.loads(r.output)
        assert out["total_diagrams"] == 27896
        assert out["total_diagrams"] - out["filtered_out"] == 12799
        assert r.exit_code == 0

    def test_not_ok_exit_code(self):
        r = run("initial-cases", "--m", "5", "--a", "10", "--k", "1")
        assert r.exit_code == 1

    def test_ledger_verify_entry(self):
        r = run("--json", "ledger", "verify", "--entry", "ADHOC")
        out = json.loads(r.output)
        assert r.exit_code == 0 and out["failures"] == []
