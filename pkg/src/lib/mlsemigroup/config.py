from pydantic_settings import BaseSettings, SettingsConfigDict

from .schemas import SeriesConfig


class Settings(BaseSettings):
    model_config = SettingsConfigDict(env_prefix="ML_", env_file=".env", extra="ignore")

    # Series summation
    TOL: float = 1e-14
    MAX_TERMS: int = 10000
    Z_CAP: float = 50.0

    # Negative arguments
    CANCELLATION_LIMIT: float = 50.0
    QUAD_TOL: float = 1e-12

    # Logging
    LOG_LEVEL: str = "WARNING"

    def series_config(self) -> SeriesConfig:
        return SeriesConfig(
            tol=self.TOL,
            max_terms=self.MAX_TERMS,
            z_cap=self.Z_CAP,
            cancellation_limit=self.CANCELLATION_LIMIT,
            quad_tol=self.QUAD_TOL,
        )


def get_settings() -> Settings:
    """Read settings from the environment each time, so ``ML_*`` overrides apply per run."""
    return Settings()
