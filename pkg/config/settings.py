import logging
import os
from typing import Any, Literal, Tuple, Type

from pydantic import Field, ValidationError
from pydantic_settings import (
    BaseSettings,
    PydanticBaseSettingsSource,
    SettingsConfigDict,
    YamlConfigSettingsSource,
)

from eisenstein_mmv.shared_libraries.precision import TruncationBudget, configure_precision


def get_yaml_file():
    """
    Get the config file path from the CONFIG_PATH environment variable.
    """

    if "CONFIG_PATH" in os.environ:
        CONFIG_PATH = os.getenv("CONFIG_PATH")
    else:
        raise Exception(
            "CONFIG_PATH not found in the environment variables. Please"
            " set CONFIG_PATH to a .yaml file, e.g. config.yaml at the"
            " repository root"
        )

    return CONFIG_PATH


class Settings(BaseSettings):
    """
    Engine settings shared by every subcommand and echoed into every report.
    Values come from the yaml file named by CONFIG_PATH and can be overridden
    by APP_-prefixed environment variables or by CLI flags (`with_overrides`).
    """

    @staticmethod
    def get_settings():
        """Initialize a settings object to get all the defined variables"""
        try:
            settings = Settings()
            return settings
        except ValidationError as e:
            logging.error("Invalid engine settings in .yaml file:")
            for error in e.errors():
                logging.error("- %s: %s", error["loc"][0], error["msg"])
            raise

    # Configure BaseSettings to read variables from yaml file
    model_config = SettingsConfigDict(yaml_file=get_yaml_file(), env_prefix="APP_", extra="ignore")

    @classmethod
    def settings_customise_sources(
        cls,
        settings_cls: Type[BaseSettings],
        init_settings: PydanticBaseSettingsSource,
        env_settings: PydanticBaseSettingsSource,
        dotenv_settings: PydanticBaseSettingsSource,
        file_secret_settings: PydanticBaseSettingsSource,
    ) -> Tuple[PydanticBaseSettingsSource, ...]:
        return (env_settings, YamlConfigSettingsSource(settings_cls))

    # ---------- PRECISION AND TRUNCATION ----------
    DIGITS: int = Field(40, ge=20, env="DIGITS")
    EPS: float = Field(1e-45, gt=0, env="EPS")
    NMAX: int = Field(20000, ge=1, env="NMAX")
    QUAD_DEGREE: int = Field(5, ge=2, le=10, env="QUAD_DEGREE")

    # ---------- VERIFICATION RUNS ----------
    GRID: Literal["small", "full"] = Field("small", env="GRID")
    WORKERS: int = Field(8, ge=1, env="WORKERS")
    OUTPUT_FORMAT: Literal["json", "csv"] = Field("json", env="OUTPUT_FORMAT")
    LOG_LEVEL: str = Field("INFO", env="LOG_LEVEL")

    def with_overrides(self, **overrides: Any) -> "Settings":
        """Copy with CLI overrides applied; None values are ignored. Validated."""
        updates = {key: value for key, value in overrides.items() if value is not None}
        return Settings.model_validate({**self.model_dump(), **updates})

    def to_budget(self) -> TruncationBudget:
        return TruncationBudget(eps=self.EPS, n_max=self.NMAX)

    def apply_precision(self) -> None:
        configure_precision(self.DIGITS)
