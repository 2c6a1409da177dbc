import pytest

from spikebench.cli import (
    EXIT_DATA,
    EXIT_OK,
    EXIT_USAGE,
    EXIT_VERIFY,
    UsageError,
    build_parser,
    build_settings,
    main,
    parse_config_file,
)


class TestArgumentHandling:
    def test_unknown_command_is_usage_error(self, capsys):
        assert main(["frobnicate"]) == EXIT_USAGE
        assert "usage error" in capsys.readouterr().err

    def test_missing_command_is_usage_error(self):
        assert main([]) == EXIT_USAGE

    def test_bad_seed_list_is_usage_error(self, capsys):
        assert main(["--seeds", "11,twelve", "baselines"]) == EXIT_USAGE

    def test_bad_jobs_is_usage_error(self):
        assert main(["--jobs", "0", "demo-kernels"]) == EXIT_USAGE

    def test_env_var_supplies_data_dir(self, data_dir, monkeypatch):
        monkeypatch.setenv("SPIKEBENCH_DATA_DIR", str(data_dir))
        parser = build_parser()
        settings = build_settings(parser.parse_args(["verify"]))
        assert settings.data_dir == data_dir


class TestConfigFile:
    def test_round_trip(self, tmp_path):
        cfg = tmp_path / "run.cfg"
        cfg.write_text(
            "# comment line\n"
            "seeds = 11,23\n"
            "norm_mode = off\n"
            "learning_rate = 0.01\n"
            "neurons_per_feature = 2\n"
        )
        values = parse_config_file(cfg)
        assert values["seeds"] == "11,23"
        assert values["norm_mode"] == "off"
        assert values["learning_rate"] == 0.01
        assert values["neurons_per_feature"] == 2

    def test_unknown_key_rejected(self, tmp_path):
        cfg = tmp_path / "run.cfg"
        cfg.write_text("learning_rte = 0.01\n")
        with pytest.raises(UsageError, match="learning_rte"):
            parse_config_file(cfg)

    def test_bad_value_rejected(self, tmp_path):
        cfg = tmp_path / "run.cfg"
        cfg.write_text("epochs = many\n")
        with pytest.raises(UsageError, match="epochs"):
            parse_config_file(cfg)

    def test_missing_separator_rejected(self, tmp_path):
        cfg = tmp_path / "run.cfg"
        cfg.write_text("epochs 3\n")
        with pytest.raises(UsageError, match="key = value"):
            parse_config_file(cfg)

    def test_config_feeds_settings(self, tmp_path, data_dir):
        cfg = tmp_path / "run.cfg"
        cfg.write_text("shaping = pos-only\nepochs = 3\n")
        parser = build_parser()
        args = parser.parse_args(
            ["--config", str(cfg), "--data-dir", str(data_dir), "verify"]
        )
        settings = build_settings(args)
        assert settings.defaults.shaping == "positive_only"
        assert settings.defaults.epochs == 3

    def test_unknown_config_key_exits_usage(self, tmp_path, capsys):
        cfg = tmp_path / "run.cfg"
        cfg.write_text("frobs = 4\n")
        assert main(["--config", str(cfg), "demo-kernels"]) == EXIT_USAGE


class TestExitCodes:
    def test_demo_kernels_ok(self, capsys):
        assert main(["demo-kernels"]) == EXIT_OK
        out = capsys.readouterr().out
        assert "kernel demo" in out
        assert "weights in bounds" in out

    def test_missing_data_is_data_error(self, tmp_path, capsys):
        code = main([
            "--data-dir", str(tmp_path / "nowhere"),
            "--out-dir", str(tmp_path / "out"),
            "baselines",
        ])
        assert code == EXIT_DATA
        assert "data error" in capsys.readouterr().err

    def test_verify_without_manifest_fails(self, tmp_path, capsys):
        code = main(["--out-dir", str(tmp_path), "verify"])
        assert code == EXIT_VERIFY

    def test_report_without_raw_results_is_data_error(self, tmp_path):
        code = main(["--out-dir", str(tmp_path), "report"])
        assert code == EXIT_DATA


class TestEndToEndSmall:
    def test_temporal_command_writes_csv(self, data_dir, tmp_path, capsys):
        code = main([
            "--data-dir", str(data_dir),
            "--out-dir", str(tmp_path),
            "--seeds", "11",
            "temporal",
        ])
        assert code == EXIT_OK
        assert (tmp_path / "raw" / "temporal_raw.csv").is_file()
        out = capsys.readouterr().out
        assert "count-readout" in out and "timebin-readout" in out

    def test_verify_roundtrip_through_cli(self, reduced_suite, tmp_path, data_dir):
        from spikebench.report import emit_raw_csvs, write_manifest

        paths = emit_raw_csvs(reduced_suite, tmp_path)
        write_manifest(tmp_path, paths, "cfg", "hw", "t")
        assert main(["--out-dir", str(tmp_path), "verify"]) == EXIT_OK
        (tmp_path / "raw" / "diagnostics.csv").write_text("tampered\n")
        assert main(["--out-dir", str(tmp_path), "verify"]) == EXIT_VERIFY

    def test_family_command_matches_suite_slice(
        self, reduced_suite, tmp_path, data_dir, capsys
    ):
        # the suite is the union of independently-run parts: the standalone
        # family command reproduces the suite's family CSV byte for byte
        from spikebench.report import _family_csv

        cfg = tmp_path / "reduced.cfg"
        cfg.write_text("seeds = 11,23\nepochs = 2\n")
        code = main([
            "--data-dir", str(data_dir),
            "--out-dir", str(tmp_path),
            "--config", str(cfg),
            "baselines",
        ])
        assert code == EXIT_OK
        standalone = (tmp_path / "raw" / "baselines_raw.csv").read_text()
        assert standalone == _family_csv(reduced_suite.families["baselines"])
