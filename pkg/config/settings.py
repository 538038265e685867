"""
Runtime settings loaded from environment variables.
"""
from pathlib import Path
from typing import Optional

from pydantic import Field
from pydantic_settings import BaseSettings, SettingsConfigDict


class Settings(BaseSettings):
    """Process-level configuration (experiment hyperparameters live in ExperimentConfig)."""

    model_config = SettingsConfigDict(
        env_prefix="GWSPECTRA_",
        env_file=".env",
        env_file_encoding="utf-8",
        extra="ignore",
    )

    # Logging
    log_level: str = Field(default="INFO")
    rich_tracebacks: bool = Field(default=True)

    # Paths
    output_dir: Path = Field(default=Path("./runs"))
    config_path: Optional[Path] = Field(default=None)

    def ensure_directories(self, out_dir: Optional[Path] = None) -> Path:
        """Create the output directory if it doesn't exist and return it."""
        target = Path(out_dir) if out_dir is not None else self.output_dir
        target.mkdir(parents=True, exist_ok=True)
        return target


_settings: Optional[Settings] = None


def get_settings() -> Settings:
    """Get the settings singleton, creating it if needed."""
    global _settings
    if _settings is None:
        _settings = Settings()
    return _settings


def reset_settings() -> None:
    """Drop the cached singleton so the next call re-reads the environment."""
    global _settings
    _settings = None
