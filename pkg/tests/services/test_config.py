import pytest

from afcsim.core.config import Settings, parse_overrides, read_config_file
from afcsim.core.exceptions import ConfigError


def test_read_config_file(tmp_path):
    path = tmp_path / "system.conf"
    path.write_text(
        "# reference system\n"
        "sigma0_sq = 1\n"
        "sigma_v_sq = 1e-4  # feedback noise\n"
        "mu = 0.01\n"
    )
    assert read_config_file(path) == {"sigma0_sq": "1", "sigma_v_sq": "1e-4", "mu": "0.01"}


def test_read_config_file_missing_value(tmp_path):
    path = tmp_path / "system.conf"
    path.write_text("sigma0_sq =\n")
    with pytest.raises(ConfigError) as excinfo:
        read_config_file(path)
    assert excinfo.value.key == "sigma0_sq"


def test_read_config_file_not_found(tmp_path):
    with pytest.raises(ConfigError):
        read_config_file(tmp_path / "absent.conf")


def test_parse_overrides():
    assert parse_overrides(["mu=0.05", " n_cycles = 4"]) == {"mu": "0.05", "n_cycles": "4"}
    with pytest.raises(ConfigError):
        parse_overrides(["mu"])


def test_settings_from_environment(monkeypatch):
    monkeypatch.setenv("AFCSIM_CHUNK_SIZE", "128")
    monkeypatch.setenv("AFCSIM_DEFAULT_SEED", "9")
    settings = Settings()
    assert settings.CHUNK_SIZE == 128
    assert settings.DEFAULT_SEED == 9
