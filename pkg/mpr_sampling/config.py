"""Runtime settings for the MPR sampling tools.

Settings are read from environment variables with the ``MPR_`` prefix,
e.g. ``MPR_LOG_LEVEL=DEBUG`` or ``MPR_SIM_HORIZON=200000``.  Experiment
parameters (sources, channel, sweeps) live in YAML files instead; see
``schemas.experiment``.
"""

from functools import lru_cache
from pathlib import Path

from pydantic import BaseSettings, Field, validator


class Settings(BaseSettings):
    """Process-wide defaults shared by the CLI and the HTTP service."""

    env: str = Field("dev", description="dev, test or prod")
    log_level: str = "INFO"
    output_dir: Path = Path("./results")

    default_seed: int = Field(20240101, ge=0, lt=2**64)
    sim_horizon: int = Field(1_000_000, gt=0)
    sim_warmup: int = Field(10_000, ge=0)
    sim_batches: int = Field(100, ge=2)

    grid_resolution: int = Field(101, ge=2)
    grid_refine_rounds: int = Field(3, ge=0)
    tdma_resolution: int = Field(101, ge=2)

    # |z| above this marks a closed-form/simulation disagreement
    validation_z_threshold: float = Field(4.0, gt=0)

    class Config:
        env_prefix = "MPR_"

    @validator("log_level")
    def _upper_level(cls, v: str) -> str:
        return v.upper()


@lru_cache()
def get_settings() -> Settings:
    """Return the cached settings instance."""
    return Settings()
