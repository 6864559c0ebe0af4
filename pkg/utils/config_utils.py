import os
from dotenv import load_dotenv
from pydantic import BaseModel, ConfigDict, Field, ValidationError, model_validator

from utils.errors import ConfigError

# Load environment variables
ENV_FILE = os.path.join(os.path.dirname(os.path.dirname(__file__)), ".env")
load_dotenv(ENV_FILE)

ENV_PRECISION_START = "SIGJUMP_PRECISION_START"
ENV_PRECISION_CEILING = "SIGJUMP_PRECISION_CEILING"
ENV_LOG_LEVEL = "SIGJUMP_LOG_LEVEL"


class Settings(BaseModel):
    model_config = ConfigDict(frozen=True)

    precision_start_bits: int = Field(default=64, ge=16, description="Working precision of the first sign attempt.")
    precision_ceiling_bits: int = Field(default=4096, ge=16, description="Precision after which sign determination gives up.")
    log_level: str = Field(default="WARNING", description="Level passed to logging_utils.configure_logging.")

    @model_validator(mode="after")
    def _start_below_ceiling(self):
        if self.precision_start_bits > self.precision_ceiling_bits:
            raise ValueError("precision start exceeds ceiling")
        return self


def load_settings(**overrides) -> Settings:
    """
    Loads settings from environment variables (after .env has been applied).

    Input:
        overrides: Explicit values that win over the environment (used by tests and CLI flags).

    Output:
        Settings: Validated settings.
    """
    raw = {
        "precision_start_bits": os.getenv(ENV_PRECISION_START, 64),
        "precision_ceiling_bits": os.getenv(ENV_PRECISION_CEILING, 4096),
        "log_level": os.getenv(ENV_LOG_LEVEL, "WARNING"),
    }
    raw.update({k: v for k, v in overrides.items() if v is not None})
    try:
        return Settings(**raw)
    except ValidationError as e:
        raise ConfigError(f"invalid configuration: {e.errors()[0]['msg']}") from e
