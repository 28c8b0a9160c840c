import json
import logging
import math

import pandas as pd
import pytest
from click.testing import CliRunner

from wpduality import __version__
from wpduality.cli import RunConfig, cli, load_state
from wpduality.exceptions import ConfigError
from wpduality.profile import DimensionProfile
from wpduality.reports import CSV_COLUMNS
from wpduality.serialization import write_state_file
from wpduality.states import ginibre_mixed


class CliTestCase:
    """Shared runner setup; drops the handlers each invocation installs."""

    def setup_method(self):
        """Set up test fixtures."""
        self.runner = CliRunner()

    def teardown_method(self):
        """Detach logging handlers bound to the runner's streams."""
        for handler in logging.root.handlers[:]:
            logging.root.removeHandler(handler)

    def invoke(self, *args):
        return self.runner.invoke(cli, list(args))

    def invoke_json(self, tmp_path, *args):
        out = tmp_path / "out.json"
        result = self.invoke(*args, "--out", str(out))
        return result, (json.loads(out.read_text()) if out.exists() else None)


class TestListCommand(CliTestCase):
    """Test cases for the list command."""

    def test_table(self):
        """Test the table lists every relation including diagnostics."""
        result = self.invoke("list")
        assert result.exit_code == 0
        assert "R4'" in result.output
        assert "R22" in result.output

    def test_json_with_tag(self):
        """Test JSON output filtered by tag."""
        result = self.invoke("list", "--tag", "two-qubit", "--format", "json")
        assert result.exit_code == 0
        assert [e["id"] for e in json.loads(result.output)] == ["R19"]

    def test_version(self):
        """Test --version."""
        result = self.invoke("--version")
        assert result.exit_code == 0
        assert __version__ in result.output


class TestVerifyCommand(CliTestCase):
    """Test cases for the verify command."""

    def test_no_violations(self, tmp_path):
        """Test R19 on Haar 2x2 states exits 0 with a full JSON document."""
        result, doc = self.invoke_json(tmp_path, "verify", "-r", "R19", "--dims", "2x2", "-n", "200", "--seed", "42")
        assert result.exit_code == 0
        assert doc["tool_version"] == __version__
        assert doc["runtime_seconds"] is None
        assert doc["config"]["seed"] == 42
        assert set(doc["environment"]) >= {"python", "numpy", "scipy"}
        (report,) = doc["reports"]
        assert report["violations"] == 0
        assert max(abs(report["min_margin"]), abs(report["max_margin"])) < 1e-10

    def test_violations_exit_two(self, tmp_path):
        """Test a violated relation exits 2 and still writes the report."""
        result, doc = self.invoke_json(
            tmp_path, "verify", "-r", "R12-literal", "-e", "named(basis(0))", "--dims", "2x2", "-n", "5"
        )
        assert result.exit_code == 2
        assert doc["reports"][0]["status"] == "violated"
        assert len(doc["reports"][0]["witnesses"]) == 5

    def test_unknown_relation(self):
        """Test an unknown relation id exits 1 and names the id."""
        result = self.invoke("verify", "-r", "R999", "--dims", "2x2")
        assert result.exit_code == 1
        assert "R999" in result.output

    @pytest.mark.parametrize(
        "args",
        [
            ("--dims", "2x"),
            ("--dims", "2x2", "-e", "uniform"),
            ("--dims", "2x2", "--cut", "A|C"),
            ("--dims", "2x2", "-n", "0"),
            ("--dims", "2x2", "--bogus"),
            ("--dims", "2x2", "--out", "/nonexistent-dir/report.json"),
        ],
    )
    def test_errors_exit_one(self, args):
        """Test configuration, usage and IO errors exit 1."""
        result = self.invoke("verify", "-r", "R1", "-n", "5", *args)
        assert result.exit_code == 1

    def test_timing(self, tmp_path):
        """Test --timing records a runtime."""
        result, doc = self.invoke_json(tmp_path, "verify", "-r", "R1", "--dims", "2", "-n", "5", "--timing")
        assert result.exit_code == 0
        assert doc["runtime_seconds"] >= 0.0

    def test_deterministic_across_workers(self, tmp_path):
        """Test identical documents for one and two workers."""
        args = ("verify", "-r", "R12,R17-ptrace", "--dims", "2x3", "-n", "300", "--seed", "9")
        first = tmp_path / "one.json"
        second = tmp_path / "two.json"
        assert self.invoke(*args, "--out", str(first)).exit_code == 0
        assert self.invoke(*args, "-w", "2", "--out", str(second)).exit_code == 0
        one, two = json.loads(first.read_text()), json.loads(second.read_text())
        one.pop("environment"), two.pop("environment")
        assert one == two

    def test_config_file(self, tmp_path):
        """Test config-file values with a CLI override on top."""
        config = tmp_path / "run.json"
        config.write_text(json.dumps({"relations": "R19", "dims": "2x2", "samples": 50, "seed": 3}))
        result, doc = self.invoke_json(tmp_path, "verify", "--config", str(config), "-n", "20")
        assert result.exit_code == 0
        assert doc["config"]["samples"] == 20
        assert doc["config"]["seed"] == 3
        assert doc["reports"][0]["samples"] == 20

    def test_csv_format(self, tmp_path):
        """Test --format csv writes the fixed column order."""
        out = tmp_path / "r.csv"
        result = self.invoke("verify", "-r", "R1,R10", "--dims", "3", "-e", "ginibre", "-n", "10",
                             "--format", "csv", "--out", str(out))
        assert result.exit_code == 0
        frame = pd.read_csv(out)
        assert list(frame.columns) == CSV_COLUMNS
        assert list(frame["relation_id"]) == ["R1", "R10"]


class TestSweepCommand(CliTestCase):
    """Test cases for the sweep command."""

    def test_r12_sweep(self, tmp_path):
        """Test R12 across four bipartite profiles gives four non-negative rows."""
        out = tmp_path / "sweep.csv"
        result = self.invoke("sweep", "-r", "R12", "--dims-list", "2x2,2x3,3x3,2x4", "-n", "100", "--out", str(out))
        assert result.exit_code == 0
        frame = pd.read_csv(out)
        assert len(frame) == 4
        assert list(frame["dims"]) == ["2x2", "2x3", "3x3", "2x4"]
        assert (frame["min_margin"] >= 0).all()
        assert (frame["status"] == "ok").all()

    def test_repeated_option(self, tmp_path):
        """Test -D may be repeated."""
        out = tmp_path / "sweep.csv"
        result = self.invoke("sweep", "-r", "R1", "-D", "2", "-D", "3", "-n", "5", "--out", str(out))
        assert result.exit_code == 0
        assert len(pd.read_csv(out)) == 2

    def test_empty_dims_list(self):
        """Test an empty profile list exits 1."""
        result = self.invoke("sweep", "-r", "R12")
        assert result.exit_code == 1


class TestStateInfoCommand(CliTestCase):
    """Test cases for the state-info command."""

    def relation(self, doc, relation_id):
        return next(r for r in doc["relations"] if r["relation_id"] == relation_id)

    def test_bell(self, tmp_path):
        """Test a Bell state: E = 1, C = 1, I(rho_k) = 0 and R12 saturated."""
        result, doc = self.invoke_json(tmp_path, "state-info", "--state", "bell", "--cut", "A|B")
        assert result.exit_code == 0
        assert doc["cut"] == "A|B"
        assert doc["bipartite"]["entanglement_entropy"] == pytest.approx(1.0)
        assert doc["bipartite"]["generalized_concurrence"] == pytest.approx(1.0)
        assert doc["marginals"]["A"]["info_I"] == pytest.approx(0.0, abs=1e-12)
        assert self.relation(doc, "R12")["saturated"]
        assert "R6" in doc["inapplicable"]

    def test_ghz(self, tmp_path):
        """Test GHZ across A|BC: E = 1 bit and S^2_AB = 1/2."""
        result, doc = self.invoke_json(tmp_path, "state-info", "--state", "ghz", "--cut", "A|BC")
        assert result.exit_code == 0
        assert doc["bipartite"]["entanglement_entropy"] == pytest.approx(1.0)
        assert doc["marginals"]["AB"]["info_S"] ** 2 == pytest.approx(0.5)
        assert self.relation(doc, "R6")["margin"] == pytest.approx(2.0)

    def test_w(self, tmp_path):
        """Test the W state two-party marginal purity 5/9."""
        result, doc = self.invoke_json(tmp_path, "state-info", "--state", "w")
        assert result.exit_code == 0
        assert doc["marginals"]["BC"]["purity"] == pytest.approx(5 / 9)

    def test_schmidt_spec(self, tmp_path):
        """Test schmidt(c1, c2) states."""
        result, doc = self.invoke_json(tmp_path, "state-info", "--state", "schmidt(0.8,0.6)")
        assert result.exit_code == 0
        assert doc["state"]["dims"] == "2x2"
        assert doc["bipartite"]["generalized_concurrence"] == pytest.approx(0.96)

    def test_state_file(self, tmp_path):
        """Test a mixed state read from a state file."""
        path = write_state_file(ginibre_mixed(None, None, 4, DimensionProfile((2, 2))), tmp_path / "rho.txt")
        result, doc = self.invoke_json(tmp_path, "state-info", "--state", str(path))
        assert result.exit_code == 0
        assert doc["state"]["pure"] is False
        assert "bipartite" not in doc
        assert "R2" in doc["inapplicable"]
        assert self.relation(doc, "R17")["satisfied"]
        assert self.relation(doc, "R22")["satisfied"]

    def test_unknown_state(self):
        """Test an unknown state name exits 1."""
        assert self.invoke("state-info", "--state", "nosuch").exit_code == 1


class TestCheckUnits(CliTestCase):
    """Test cases for the units diagnostic."""

    def test_numbers(self, tmp_path):
        """Test the three readings on |00> and the Haar summary; always exits 0."""
        result, doc = self.invoke_json(tmp_path, "check-units", "-n", "50")
        assert result.exit_code == 0
        product = doc["product_state"]
        assert product["literal_nats"]["margin"] == pytest.approx(-0.02820, abs=1e-5)
        assert product["literal_nats"]["margin"] == pytest.approx(product["expected_literal_margin"], abs=1e-12)
        assert not product["literal_nats"]["satisfied"]
        assert product["base_two"]["lhs"] == pytest.approx(0.72135, abs=1e-5)
        assert product["base_two"]["rhs"] == pytest.approx(1.0)
        assert product["consistent_nats"]["lhs"] == pytest.approx(0.5)
        assert product["consistent_nats"]["rhs"] == pytest.approx(math.log(2))
        assert doc["haar_ensemble"]["relation_id"] == "R12-literal"
        assert doc["haar_ensemble"]["samples"] == 50


class TestRunConfig:
    """Test cases for layered run configuration."""

    def test_overrides_win(self, tmp_path):
        """Test None overrides are ignored and explicit ones replace file values."""
        path = tmp_path / "c.json"
        path.write_text(json.dumps({"samples": 7, "dims": "2x3"}))
        config = RunConfig.load("verify", str(path), {"samples": None, "seed": 11})
        assert config.samples == 7
        assert config.seed == 11
        assert config.dims == "2x3"

    def test_bad_file(self, tmp_path):
        """Test unreadable and non-object config files."""
        with pytest.raises(ConfigError):
            RunConfig.load("verify", str(tmp_path / "missing.json"), {})
        path = tmp_path / "list.json"
        path.write_text("[1, 2]")
        with pytest.raises(ConfigError):
            RunConfig.load("verify", str(path), {})

    def test_for_dims(self):
        """Test a sweep config rebinds its profile."""
        config = RunConfig.load("sweep", None, {"relations": "R12", "dims_list": ["2x2", "3x3"]})
        assert config.for_dims("3x3").dims == "3x3"
        assert "workers" not in config.echo()

    def test_load_state_named(self):
        """Test load_state returns a vector for pure named states."""
        rho, psi = load_state("max_mixed", "2x2")
        assert psi is None
        assert rho.dim == 4
        rho, psi = load_state("bell", "3x3")
        assert psi is not None
