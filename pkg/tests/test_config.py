from pathlib import Path

import pytest

from app.config import Settings, get_settings, load_campaign_config
from app.models.campaign import CampaignConfig
from app.services.exceptions import ConfigurationError


def write_config(tmp_path, text):
    path = tmp_path / "campaign.conf"
    path.write_text(text, encoding="utf-8")
    return path


def test_defaults_without_file():
    assert load_campaign_config() == CampaignConfig()


def test_file_with_comments(tmp_path):
    path = write_config(tmp_path, "# small run\nfamilies=cycle:2,subset:3\ntp_size=6\n\nreport_path=out/report.json\n")
    config = load_campaign_config(path)
    assert [(f.kind, f.r) for f in config.families] == [("cycle", 2), ("subset", 3)]
    assert config.tp_size == 6
    assert config.report_path == Path("out/report.json")
    assert config.hankel_size == CampaignConfig().hankel_size


def test_unknown_key(tmp_path):
    with pytest.raises(ConfigurationError, match="tp_sise"):
        load_campaign_config(write_config(tmp_path, "tp_sise=4\n"))


def test_invalid_value(tmp_path):
    with pytest.raises(ConfigurationError):
        load_campaign_config(write_config(tmp_path, "tp_size=large\n"))


def test_precision_floor(tmp_path):
    with pytest.raises(ConfigurationError):
        load_campaign_config(write_config(tmp_path, "precision_bits=32\n"))


def test_empty_value(tmp_path):
    with pytest.raises(ConfigurationError):
        load_campaign_config(write_config(tmp_path, "tp_size=\n"))


def test_missing_file(tmp_path):
    with pytest.raises(ConfigurationError, match="does not exist"):
        load_campaign_config(tmp_path / "nope.conf")


def test_precedence(tmp_path):
    path = write_config(tmp_path, "jobs=3\ntp_size=6\n")
    config = load_campaign_config(path, {"jobs": 1, "precision_bits": 128}, tp_size=9, jobs=None)
    assert config.jobs == 3
    assert config.tp_size == 9
    assert config.precision_bits == 128


def test_unknown_override():
    with pytest.raises(ConfigurationError):
        load_campaign_config(colour="blue")


def test_settings_from_environment(monkeypatch):
    monkeypatch.setenv("STIRLING_PRECISION_BITS", "512")
    monkeypatch.setenv("STIRLING_JOBS", "4")
    monkeypatch.setenv("STIRLING_LOG_LEVEL", "")
    settings = get_settings()
    assert settings.precision_bits == 512
    assert settings.jobs == 4
    assert settings.log_level == Settings().log_level


def test_invalid_settings(monkeypatch):
    monkeypatch.setenv("STIRLING_PRECISION_BITS", "16")
    with pytest.raises(ConfigurationError):
        get_settings()
