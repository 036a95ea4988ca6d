from __future__ import annotations

from pydantic import BaseModel, ConfigDict, Field
import yamling


class ConfigFile(BaseModel):
    """Base class for YAML config files.

    Unknown keys are rejected so that typos surface as validation errors.
    """

    model_config = ConfigDict(extra="forbid")

    config_file_path: str | None = Field(None, exclude=True)

    def to_yaml(self) -> str:
        """Convert the configuration to YAML format."""
        cfg = self.model_dump(mode="json", exclude_none=True)
        return yamling.dump_yaml(cfg)
