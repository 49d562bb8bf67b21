import argparse
from abc import ABC, abstractmethod
from typing import Any, Dict, Generic, Optional, TypeVar

from afcsim import __version__
from afcsim.schemas.command import CommandArgs, CommandMetadata, OutputTable
from afcsim.schemas.system import SystemConfig

TArgs = TypeVar('TArgs', bound=CommandArgs)


def parse_n_range(text: str) -> tuple[int, int]:
    """Parse an inclusive ``first:last`` cycle range"""
    first, sep, last = text.partition(":")
    try:
        bounds = (int(first), int(last)) if sep else (int(first), int(first))
    except ValueError:
        raise argparse.ArgumentTypeError(f"invalid cycle range: {text!r}")
    if bounds[0] < 1 or bounds[1] < bounds[0]:
        raise argparse.ArgumentTypeError(f"cycle range must be nonempty and start at >= 1: {text!r}")
    return bounds


class Command(Generic[TArgs], ABC):
    """Base class for all commands"""

    @property
    @abstractmethod
    def metadata(self) -> CommandMetadata:
        """
        Return metadata about the command.
        Should include:
        - name: str
        - description: str
        - documentation: str (columns and metadata written by the command)
        """
        pass

    def convert_args(self, args: Dict[str, Any]) -> TArgs:
        """Convert dictionary arguments to the appropriate type"""
        if not hasattr(self, '_args_type'):
            # Get the concrete type bound to TArgs for this class instance
            self._args_type = self.__class__.__orig_bases__[0].__args__[0]
        return self._args_type(**args)

    def add_arguments(self, parser: argparse.ArgumentParser) -> None:
        """Register command-specific command-line flags"""
        pass

    def cli_args(
        self, namespace: argparse.Namespace, config: Optional[SystemConfig]
    ) -> Dict[str, Any]:
        """Collect this command's arguments from parsed command-line flags"""
        return {"config": config}

    @abstractmethod
    def execute(self, args: TArgs) -> OutputTable:
        """Run the command and return its output table"""
        pass

    def base_metadata(self, config: Optional[SystemConfig] = None) -> Dict[str, Any]:
        metadata: Dict[str, Any] = {
            "command": self.metadata.name,
            "version": __version__,
        }
        if config is not None:
            metadata["config"] = config.model_dump()
        return metadata
