from .base import Command
from .boundary import BoundaryCommand
from .efficiency import EfficiencyCommand
from .factory import CommandFactory
from .simulate import SimulateCommand
from .sweep import SweepCommand
from .theory import TheoryCommand

# Register all commands
CommandFactory.register(TheoryCommand)
CommandFactory.register(SimulateCommand)
CommandFactory.register(SweepCommand)
CommandFactory.register(EfficiencyCommand)
CommandFactory.register(BoundaryCommand)

__all__ = [
    "Command",
    "CommandFactory",
    "BoundaryCommand",
    "EfficiencyCommand",
    "SimulateCommand",
    "SweepCommand",
    "TheoryCommand",
]
