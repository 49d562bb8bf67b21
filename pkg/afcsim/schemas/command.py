from typing import Any, Dict, List, Optional

from pydantic import BaseModel, ConfigDict, model_validator

from afcsim.schemas.system import SystemConfig


class CommandMetadata(BaseModel):
    """Metadata about a command"""
    name: str
    description: str
    documentation: str


class CommandArgs(BaseModel):
    """Base class for command arguments"""
    model_config = ConfigDict(extra="forbid")


class SystemArgs(CommandArgs):
    """Arguments of commands that evaluate one system configuration"""
    config: SystemConfig


class OutputTable(BaseModel):
    """Result of executing a command: ordered columns, numeric rows and metadata"""
    columns: List[str]
    rows: List[List[Any]]
    metadata: Dict[str, Any]
    passed: Optional[bool] = None

    @model_validator(mode="after")
    def _check_row_width(self) -> "OutputTable":
        width = len(self.columns)
        for index, row in enumerate(self.rows):
            if len(row) != width:
                raise ValueError(
                    f"Row {index} has {len(row)} values, expected {width}"
                )
        return self
