"""Central configuration using Pydantic Settings."""

from __future__ import annotations

from pydantic import Field
from pydantic_settings import BaseSettings, SettingsConfigDict


class Settings(BaseSettings):

    loglevel: str = Field(default="INFO", description="Root logging level")

    # Monte-Carlo worker pool
    harness_max_par: int = Field(
        default=4, ge=1, description="Maximum concurrent experiment work items"
    )
    default_master_seed: int = Field(
        default=20240501, description="Master seed used when none is configured"
    )

    # Caching
    sensing_cache_ttl: int = Field(
        default=600, description="TTL seconds for service layer cache; 0 disables"
    )
    kernel_cache_size: int = Field(
        default=128, description="LRU size for sampled smoothing kernels"
    )

    # Pydantic v2 config
    model_config = SettingsConfigDict(case_sensitive=False, env_prefix="")


settings = Settings()
