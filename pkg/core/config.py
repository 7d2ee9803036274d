"""Configuration management using Pydantic Settings."""

from pydantic_settings import BaseSettings, SettingsConfigDict


class Settings(BaseSettings):
    """Application settings.

    Every field can be overridden from the environment or a ``.env`` file
    (for example ``COLLISION_EPSILON=1e-9``). The defaults reproduce the
    documented acceptance runs.
    """

    # Logging
    LOG_LEVEL: str = "WARNING"
    LOG_FORMAT: str = "console"

    # Geometry tolerances
    CONSTRAINT_TOL: float = 1e-12  # |q⊙q + 1| relative to max(1, z²)
    TANGENCY_TOL: float = 1e-9  # |q⊙v| relative to |q|·|v|
    DISTANCE_CLAMP_TOL: float = 1e-12

    # Numerical differentiation of the chart maps
    PUSHFORWARD_STEP: float = 1e-5
    PUSHFORWARD_MAX_Z: float = 1e8

    # Dynamics
    COLLISION_EPSILON: float = 1e-8  # hyperbolic distance

    # Relative equilibria
    RESIDUAL_TOL: float = 1e-8
    DISTANCE_DRIFT_TOL: float = 1e-6
    PBAR_XTOL: float = 1e-14

    # Output
    OUTPUT_DIGITS: int = 17

    model_config = SettingsConfigDict(
        env_file=".env",
        env_file_encoding="utf-8",
        extra="ignore",
    )


settings = Settings()
