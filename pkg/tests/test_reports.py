import io
import json

import pandas as pd
import pytest

from wpduality import __version__
from wpduality.ensemble import EnsembleConfig, EnsembleVerifier
from wpduality.exceptions import ConfigError
from wpduality.reports import CSV_COLUMNS, build_document, reports_frame, to_csv, to_json, write_text
from wpduality.utils import format_duration, validate_output_path


class TestReports:
    """Test cases for JSON and CSV report emission."""

    def setup_method(self):
        """Set up test fixtures."""
        self.config = EnsembleConfig(relations="R1,R6", dims="2x2", ensemble="ginibre", samples=20, seed=3)
        self.reports = EnsembleVerifier().run(self.config)

    def test_document(self):
        """Test the top-level JSON document."""
        doc = json.loads(to_json(build_document(self.config.echo(), self.reports)))
        assert doc["tool_version"] == __version__
        assert doc["runtime_seconds"] is None
        assert doc["config"]["seed"] == 3
        assert [r["relation_id"] for r in doc["reports"]] == ["R1", "R6"]
        assert "run_config" not in doc["reports"][0]

    def test_inapplicable_row(self):
        """Test an inapplicable report leaves margin columns empty."""
        frame = reports_frame(self.reports)
        assert list(frame.columns) == CSV_COLUMNS
        assert frame.loc[1, "status"] == "inapplicable"
        assert pd.isna(frame.loc[1, "min_margin"])
        assert frame.loc[0, "seed"] == 3

    def test_csv_precision(self):
        """Test CSV margins survive a read back at full precision."""
        frame = pd.read_csv(io.StringIO(to_csv(self.reports)), float_precision="round_trip")
        assert frame.loc[0, "min_margin"] == self.reports[0].min_margin

    def test_write_text(self, tmp_path):
        """Test writing a report and failing on a missing directory."""
        path = write_text("{}\n", tmp_path / "r.json")
        assert path.read_text() == "{}\n"
        with pytest.raises(ConfigError):
            write_text("{}\n", tmp_path / "missing" / "r.json")


class TestUtils:
    """Test cases for utility helpers."""

    def test_validate_output_path(self, tmp_path):
        """Test output path validation."""
        assert validate_output_path(tmp_path / "out.json") == (True, "Path is writable")
        ok, reason = validate_output_path(tmp_path)
        assert not ok
        assert "directory" in reason
        assert not validate_output_path(tmp_path / "nope" / "out.json")[0]

    @pytest.mark.parametrize("seconds, expected", [(0.25, "250ms"), (12.34, "12.3s"), (75.0, "1m15.0s")])
    def test_format_duration(self, seconds, expected):
        """Test human-readable durations."""
        assert format_duration(seconds) == expected
