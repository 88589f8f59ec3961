"""
Workbench Configuration
Environment settings from .env and the key=value campaign config loader
"""

import logging
import os
from pathlib import Path
from typing import Dict, Optional, Union

from dotenv import dotenv_values, load_dotenv
from pydantic import BaseModel, Field, ValidationError

from app.models.campaign import CampaignConfig
from app.services.exceptions import ConfigurationError

logger = logging.getLogger(__name__)

# Load environment variables
load_dotenv()

CAMPAIGN_KEYS = {
    "families",
    "tp_size",
    "minor_cross_check_size",
    "hankel_size",
    "hankel_minor_order",
    "root_n_max",
    "boundary_n_max",
    "discriminant_n_max",
    "oracle_n_max",
    "series_order",
    "log_concave_n_max",
    "precision_bits",
    "report_path",
    "jobs",
}


class Settings(BaseModel):
    precision_bits: int = Field(256, ge=64)
    jobs: int = Field(1, ge=1)
    output_dir: Path = Path("./artifacts")
    log_level: str = "INFO"
    minor_search_limit: int = Field(50_000_000, ge=1)


def get_settings() -> Settings:
    """Settings from STIRLING_* environment variables, falling back to the defaults"""
    values = {}
    for field in Settings.model_fields:
        raw = os.getenv(f"STIRLING_{field.upper()}")
        if raw is not None and raw.strip():
            values[field] = raw.strip()
    try:
        return Settings(**values)
    except ValidationError as e:
        raise ConfigurationError(f"Invalid STIRLING_* environment setting: {e}") from e


def load_campaign_config(
    path: Optional[Union[str, Path]] = None,
    defaults: Optional[Dict[str, object]] = None,
    **overrides,
) -> CampaignConfig:
    """
    Read a campaign config file of key=value lines (# comments allowed).

    Precedence is defaults, then the file, then keyword overrides; None
    overrides are ignored. An unknown key or an invalid value is a
    configuration error.
    """
    values: Dict[str, object] = dict(defaults or {})
    if path is not None:
        path = Path(path)
        if not path.is_file():
            raise ConfigurationError(f"Campaign config {path} does not exist")
        for key, value in dotenv_values(path).items():
            if key not in CAMPAIGN_KEYS:
                raise ConfigurationError(f"Unknown campaign config key '{key}' in {path}")
            if value is None or not value.strip():
                raise ConfigurationError(f"Campaign config key '{key}' in {path} has no value")
            values[key] = value.strip()
        logger.info(f"Loaded campaign config from {path}")

    values.update({key: value for key, value in overrides.items() if value is not None})
    unknown = set(values) - CAMPAIGN_KEYS
    if unknown:
        raise ConfigurationError(f"Unknown campaign config keys: {', '.join(sorted(unknown))}")
    try:
        return CampaignConfig(**values)
    except (ValidationError, ValueError) as e:
        raise ConfigurationError(f"Invalid campaign config: {e}") from e
