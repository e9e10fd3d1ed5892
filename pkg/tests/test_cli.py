"""
Unit Tests for Configuration, Reports and the Command-Line Harness
"""

import json
import os
import sys
import pytest
from unittest.mock import patch

# Add src to path
sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

QUIVER_DIR = os.path.join(os.path.dirname(os.path.dirname(os.path.abspath(__file__))), "default_quivers")


class TestConfig:
    """Tests for configuration module"""

    def test_config_defaults(self):
        """Test default configuration values"""
        from src.config import Config

        assert Config.DEFAULT_DEPTH == 2
        assert Config.WORD_LENGTH_BOUND == 8
        assert Config.EXT1_MAX_N == 6
        assert Config.GROWTH_COLUMNS == ["n", "pre_quotient_rank", "localised_hom_count", "quotient_rank"]

    def test_validate(self):
        """Test validation of the configured bounds"""
        from src.config import Config

        assert Config.validate()
        with patch.object(Config, "SATURATION_LIMIT", 0):
            with pytest.raises(ValueError, match="SATURATION_LIMIT must be positive"):
                Config.validate()


class TestReports:
    """Tests for experiment reports"""

    def test_csv(self):
        """Test CSV rendering of booleans and missing values"""
        from src.reports import ExperimentReport

        report = ExperimentReport(experiment="demo", columns=["a", "b", "c"])
        report.add_row(1, True, None)
        assert report.to_csv() == "a,b,c\n1,true,\n"

    def test_row_length(self):
        """Test rows must match the columns"""
        from src.reports import ExperimentReport

        report = ExperimentReport(experiment="demo", columns=["a"])
        with pytest.raises(ValueError):
            report.add_row(1, 2)

    def test_json_round_trip(self):
        """Test the JSON form parses back to the same data"""
        from src.reports import ExperimentReport

        report = ExperimentReport(experiment="demo", parameters={"n": 2}, columns=["a"])
        report.add_row(3)
        with report.timed():
            pass
        parsed = ExperimentReport.model_validate_json(report.to_json())
        assert parsed.data() == report.data()
        assert report.duration_seconds >= 0


def _run(capsys, *argv):
    from src.cli import main

    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


class TestCommands:
    """Tests for the CLI subcommands"""

    def test_ext1(self, capsys):
        """Test the Ext¹ table"""
        code, out, _ = _run(capsys, "ext1", "--field", "2", "--n", "2")
        assert code == 0
        lines = out.splitlines()
        assert lines[0] == "p,n,dimension,class_count,split_count,baer_additive,injective"
        assert lines[1] == "2,2,2,4,1,true,true"

    def test_ext1_guardrail(self, capsys):
        """Test the guardrail exits with a usage error"""
        code, out, err = _run(capsys, "ext1", "--field", "2", "--n", "9")
        assert code == 2
        assert out == ""
        assert "--max-n" in err

    def test_ext1_not_prime(self, capsys):
        """Test a composite field is a usage error"""
        code, _, err = _run(capsys, "ext1", "--field", "6", "--n", "1")
        assert code == 2
        assert "prime" in err

    def test_growth(self, capsys):
        """Test the growth table"""
        code, out, _ = _run(capsys, "growth", "--sizes", "0,1,2")
        assert code == 0
        assert out.splitlines() == [
            "n,pre_quotient_rank,localised_hom_count,quotient_rank",
            "0,0,0,0",
            "1,0,1,1",
            "2,0,2,2",
        ]

    def test_growth_bad_sizes(self, capsys):
        """Test malformed sizes are rejected by the parser"""
        with pytest.raises(SystemExit) as exc:
            _run(capsys, "growth", "--sizes", "1,x")
        assert exc.value.code == 2
        with pytest.raises(SystemExit):
            _run(capsys, "growth", "--sizes", "-1")

    @pytest.mark.parametrize("n", ["0", "1"])
    def test_verify_equivalence(self, capsys, n):
        """Test the equivalence check passes"""
        code, out, _ = _run(capsys, "verify-equivalence", "--n", n)
        assert code == 0
        header, row = out.splitlines()
        assert header.endswith(",matches")
        assert row.startswith(f"{n},2,0,{n},{n},{n},")
        assert row.endswith(",true")

    def test_quiver(self, capsys):
        """Test the hom table of the bundled n = 2 quiver"""
        code, out, _ = _run(capsys, "quiver", os.path.join(QUIVER_DIR, "paper_quiver_2.json"))
        assert code == 0
        lines = out.splitlines()
        assert lines[0] == "source,target,path_count,localised_count,words,complete"
        assert "x,z,0,2,tau1·sigma1^-1 tau2·sigma2^-1,true" in lines
        assert "x,x,1,1,id_x,true" in lines
        assert len(lines) == 1 + 16

    def test_quiver_chain(self, capsys):
        """Test inverting one arrow of a chain"""
        code, out, _ = _run(capsys, "quiver", os.path.join(QUIVER_DIR, "chain.json"))
        assert code == 0
        lines = out.splitlines()
        assert "b,a,0,1,f^-1,true" in lines
        assert "a,c,1,1,g·f,true" in lines
        assert "c,a,0,0,,true" in lines

    def test_quiver_empty_sigma(self, capsys, tmp_path):
        """Test localising at nothing keeps the path counts"""
        document = {
            "vertices": ["a", "b"],
            "arrows": [{"name": "f", "src": "a", "tgt": "b"}],
            "sigma": [],
        }
        path = tmp_path / "plain.json"
        path.write_text(json.dumps(document), encoding="utf-8")
        code, out, _ = _run(capsys, "quiver", str(path))
        assert code == 0
        assert "a,b,1,1,f,true" in out.splitlines()
        assert "b,a,0,0,,true" in out.splitlines()

    def test_quiver_unknown_arrow(self, capsys, tmp_path):
        """Test an unknown Σ arrow is reported with its location"""
        path = tmp_path / "bad.json"
        path.write_text(json.dumps({"vertices": ["a"], "arrows": [], "sigma": ["f"]}), encoding="utf-8")
        code, out, err = _run(capsys, "quiver", str(path))
        assert code == 2
        assert out == ""
        assert "sigma[0]" in err

    def test_quiver_cycle(self, capsys, tmp_path):
        """Test cyclic quivers are refused"""
        document = {"vertices": ["a"], "arrows": [{"name": "l", "src": "a", "tgt": "a"}], "sigma": []}
        path = tmp_path / "loop.json"
        path.write_text(json.dumps(document), encoding="utf-8")
        code, _, err = _run(capsys, "quiver", str(path))
        assert code == 2
        assert "infinite hom-set" in err

    def test_quiver_incomplete(self, capsys):
        """Test a short bound exits as inconclusive"""
        code, out, _ = _run(capsys, "quiver", os.path.join(QUIVER_DIR, "paper_quiver_2.json"), "--bound", "1")
        assert code == 3
        assert "x,z,0,0,,false" in out.splitlines()

    def test_quiver_zero_bound(self, capsys):
        """Test --bound 0 is a usage error"""
        with pytest.raises(SystemExit) as exc:
            _run(capsys, "quiver", os.path.join(QUIVER_DIR, "paper_quiver_2.json"), "--bound", "0")
        assert exc.value.code == 2


class TestOutput:
    """Tests for output formats and determinism"""

    def test_json_matches_csv(self, capsys):
        """Test the JSON and CSV forms carry the same table"""
        _, csv_out, _ = _run(capsys, "ext1", "--field", "3", "--n", "1")
        _, json_out, _ = _run(capsys, "ext1", "--field", "3", "--n", "1", "--json")
        data = json.loads(json_out)
        header, row = csv_out.splitlines()
        assert data["columns"] == header.split(",")
        assert data["rows"] == [[3, 1, 1, 3, 1, True, True]]
        assert data["complete"] is True

    def test_deterministic(self, capsys):
        """Test repeated runs print identical bytes"""
        _, first, _ = _run(capsys, "growth", "--sizes", "1,2")
        _, second, _ = _run(capsys, "growth", "--sizes", "1,2")
        assert first == second

    def test_out_file(self, capsys, tmp_path):
        """Test --out writes the report to a file"""
        target = tmp_path / "report.csv"
        code, out, _ = _run(capsys, "ext1", "--n", "1", "--out", str(target))
        assert code == 0
        assert out == ""
        assert target.read_text(encoding="utf-8").splitlines()[1] == "2,1,1,2,1,true,true"


if __name__ == "__main__":
    pytest.main([__file__, "-v"])
