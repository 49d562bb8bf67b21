from typing import Dict, List, Type

from afcsim.core.exceptions import UnknownCommandError
from afcsim.schemas.command import CommandMetadata
from afcsim.services.commands.base import Command


class CommandFactory:
    """Registry of the analysis and simulation commands, keyed by name"""

    _commands: Dict[str, Type[Command]] = {}

    @classmethod
    def register(cls, command_class: Type[Command]) -> Type[Command]:
        """Register a command class; usable as a class decorator"""
        name = command_class().metadata.name
        if name in cls._commands and cls._commands[name] is not command_class:
            raise ValueError(f"Command {name} already registered")
        cls._commands[name] = command_class
        return command_class

    @classmethod
    def get_command(cls, command_name: str) -> Command:
        if command_name not in cls._commands:
            raise UnknownCommandError(command_name, sorted(cls._commands))
        return cls._commands[command_name]()

    @classmethod
    def command_names(cls) -> List[str]:
        return list(cls._commands)

    @classmethod
    def list_commands(cls) -> List[CommandMetadata]:
        """Metadata for every command, in registration order"""
        return [cmd().metadata for cmd in cls._commands.values()]
