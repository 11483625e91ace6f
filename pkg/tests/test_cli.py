"""
Tests for the verify command.
"""

import json

from lie2vanest.cli import (
    EXIT_FAIL,
    EXIT_PASS,
    EXIT_USAGE,
    build_parser,
    load_config,
    main,
)
from lie2vanest.config import GroupName, Profile

QUICK = ["--suite", "crossed_module", "--suite", "weil", "--example", "none"]


class TestParser:
    """Test argument parsing."""

    def test_repeatable_suite(self):
        """Test that --suite accumulates."""
        args = build_parser().parse_args(["--suite", "weil", "--suite", "vanest"])

        assert args.suite == ["weil", "vanest"]

    def test_defaults_are_unset(self):
        """Test that absent flags do not override the config."""
        args = build_parser().parse_args([])

        assert args.seed is None
        assert args.group is None
        assert args.verbose == 0
        assert args.profile is None

    def test_profile(self):
        """Test that --profile selects the acceptance sample counts."""
        args = build_parser().parse_args(["--profile", "acceptance"])

        assert load_config(args).profile == Profile.ACCEPTANCE

    def test_group_flag_over_rn_config(self, tmp_path):
        """Test that --group so3 over an rn config file drops its group_dim."""
        path = tmp_path / "rn.json"
        path.write_text(json.dumps({"group": "rn", "group_dim": 2, "example": "none"}))
        args = build_parser().parse_args(["--config", str(path), "--group", "so3"])

        config = load_config(args)

        assert config.group == GroupName.SO3
        assert config.group_dim is None


class TestMain:
    """Test exit codes and output."""

    def test_pass(self, capsys):
        """Test exit code 0 and a JSON report on stdout."""
        code = main(QUICK + ["--format", "json"])
        data = json.loads(capsys.readouterr().out)

        assert code == EXIT_PASS
        assert data["pass"] is True
        assert {row["suite"] for row in data["rows"]} == {"crossed_module", "weil"}

    def test_text_output(self, capsys):
        """Test the text table."""
        code = main(QUICK)
        lines = capsys.readouterr().out.splitlines()

        assert code == EXIT_PASS
        assert lines[0].split()[0] == "suite"
        assert all(line.split()[-1] == "ok" for line in lines[2:])

    def test_fail(self, tmp_path, capsys):
        """Test exit code 1 when residuals exceed the tolerances."""
        path = tmp_path / "strict.json"
        path.write_text(json.dumps({"tol_exact": 1e-300, "tol_numdiff": 1e-300}))

        code = main(["--config", str(path), "--suite", "crossed_module", "--example", "none"])

        assert code == EXIT_FAIL
        assert "FAIL" in capsys.readouterr().out

    def test_usage_error(self, capsys):
        """Test exit code 2 for an unknown suite."""
        assert main(["--suite", "everything"]) == EXIT_USAGE
        assert "invalid choice" in capsys.readouterr().err

    def test_config_error(self, tmp_path, capsys):
        """Test exit code 2 for a bad config file."""
        code = main(["--config", str(tmp_path / "absent.json")])

        assert code == EXIT_USAGE
        assert capsys.readouterr().err.startswith("verify: ")

    def test_inconsistent_config(self, tmp_path, capsys):
        """Test exit code 2 when the config itself is inconsistent."""
        path = tmp_path / "tangent.json"
        path.write_text(json.dumps({"crossed_module": "tangent"}))

        assert main(["--config", str(path)]) == EXIT_USAGE
        assert "coadjoint" in capsys.readouterr().err

    def test_help(self, capsys):
        """Test that --help exits cleanly."""
        assert main(["--help"]) == EXIT_PASS
        assert "verify" in capsys.readouterr().out

    def test_seed_is_reported(self, capsys):
        """Test that the seed reaches the JSON report."""
        main(QUICK + ["--format", "json", "--seed", "9"])

        assert json.loads(capsys.readouterr().out)["seed"] == 9
