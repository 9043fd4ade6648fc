"""
Runtime settings.

Values come from the environment (prefix ``EXTBRANCH_``) or a local ``.env``
file, e.g.::

    EXTBRANCH_ENUMERATION_BOUND=9
    EXTBRANCH_EXACT_MAX_N=3000
"""

from typing import Optional

from pydantic import Field
from pydantic_settings import BaseSettings, SettingsConfigDict


class Settings(BaseSettings):
    """Process-wide knobs for the exact engine, the oracle and the simulator."""

    model_config = SettingsConfigDict(
        env_prefix='EXTBRANCH_',
        env_file='.env',
        env_file_encoding='utf-8',
        extra='ignore',
    )

    # Largest n the permutation oracle will enumerate ((n-1)! items)
    enumeration_bound: int = Field(default=10, ge=2, le=12)
    oracle_default_bound: int = Field(default=9, ge=2, le=12)

    # backend=auto uses exact rationals up to this n, log-space floats beyond
    exact_max_n: int = Field(default=2000, ge=3)

    chi_square_min_expected: float = Field(default=5.0, gt=0)
    default_workers: int = Field(default=1, ge=1)
    log_level: str = 'WARNING'


_settings: Optional[Settings] = None


def get_settings() -> Settings:
    """Get or create the global settings instance."""
    global _settings
    if _settings is None:
        _settings = Settings()
    return _settings


def reset_settings() -> Settings:
    """Re-read the environment and return a fresh settings instance."""
    global _settings
    _settings = Settings()
    return _settings
