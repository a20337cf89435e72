import pytest

from src.core.errors import ConfigError
from src.ingestion.config_loader import DEFAULT_CHECKS, load_config, load_settings, parse_config

pytestmark = pytest.mark.unit

LINEAR = """
[field]
family = linear
matrix = -1, 0; 0, -2   # stable node

[grid]
lower = -1, -1
upper = 1, 1
resolution = 8, 8

[approx]
tau = 0.5
"""


class TestParseConfig:
    def test_minimal(self):
        config = parse_config(LINEAR)
        assert config.field_spec.family == "linear"
        assert config.field_spec.matrix == ((-1.0, 0.0), (0.0, -2.0))
        assert config.grid.resolution == (8, 8)
        assert config.approx.tau == 0.5
        assert config.approx.bloat is None
        assert config.checks == list(DEFAULT_CHECKS)
        assert config.depth is None and config.seed == 0

    def test_analysis_section(self):
        text = LINEAR + "\n[analysis]\nchecks = ends, basins\ndepth = 64\nseed = 9\nwalks = 5\nsteps = 20\n"
        config = parse_config(text)
        assert config.checks == ["ends", "basins"]
        assert (config.depth, config.seed, config.walks, config.steps) == (64, 9, 5, 20)

    def test_gradient_and_custom(self):
        gradient = LINEAR.replace("family = linear", "family = gradient_descent\nheight = x^4 - 2*x^2 + y^2")
        gradient = gradient.replace("matrix = -1, 0; 0, -2   # stable node\n", "")
        assert parse_config(gradient).field_spec.family == "gradient_descent"
        custom = gradient.replace("family = gradient_descent\nheight = x^4 - 2*x^2 + y^2",
                                  "family = custom\ncomponents = y ; -x")
        assert parse_config(custom).field_spec.dim == 2

    @pytest.mark.parametrize("edit,key", [
        (("[approx]", "[approximation]"), "approximation"),
        (("tau = 0.5", "tau = 0.5\nstep = 2"), "approx.step"),
        (("tau = 0.5", "tau = fast"), "approx.tau"),
        (("tau = 0.5", "bloat = 0.1"), "approx.tau"),
        (("matrix = -1, 0; 0, -2", "matrix = -1, 0"), "field.matrix"),
        (("family = linear", "family = spiral"), "field.family"),
        (("[grid]", "[analysis]\nchecks = everything\n[grid]"), "analysis.checks"),
    ])
    def test_errors_name_the_key(self, edit, key):
        with pytest.raises(ConfigError) as info:
            parse_config(LINEAR.replace(*edit))
        assert info.value.key == key

    def test_missing_section(self):
        text = LINEAR.split("[approx]")[0]
        with pytest.raises(ConfigError) as info:
            parse_config(text)
        assert info.value.key == "approx"

    def test_malformed(self):
        with pytest.raises(ConfigError) as info:
            parse_config("tau = 1\n")
        assert info.value.key == "config"


class TestLoadConfig:
    def test_reads_file(self, tmp_path):
        path = tmp_path / "sink.ini"
        path.write_text(LINEAR, encoding="utf-8")
        assert load_config(str(path)).source == str(path)

    def test_missing_file(self, tmp_path):
        with pytest.raises(ConfigError) as info:
            load_config(str(tmp_path / "absent.ini"))
        assert info.value.key == "config"


class TestSettings:
    def test_defaults(self, monkeypatch):
        for name in ("EFL_MAX_DEPTH", "EFL_LOG_LEVEL", "EFL_LOG_FILE", "EFL_OUTPUT_DIR"):
            monkeypatch.delenv(name, raising=False)
        settings = load_settings()
        assert settings.max_depth == 512
        assert settings.log_level == "INFO"
        assert settings.log_file is None
        assert settings.output_dir == "output"

    def test_environment_overrides(self, monkeypatch):
        monkeypatch.setenv("EFL_MAX_DEPTH", "32")
        monkeypatch.setenv("EFL_LOG_LEVEL", "debug")
        assert load_settings().max_depth == 32
        assert load_settings().log_level == "DEBUG"

    @pytest.mark.parametrize("name,value", [
        ("EFL_MAX_DEPTH", "deep"),
        ("EFL_MAX_DEPTH", "0"),
        ("EFL_LOG_LEVEL", "LOUD"),
    ])
    def test_bad_values(self, monkeypatch, name, value):
        monkeypatch.setenv(name, value)
        with pytest.raises(ConfigError) as info:
            load_settings()
        assert info.value.key == name
