"""Core module exceptions"""


class AfcsimError(Exception):
    """Base class for simulator errors"""
    pass


class ConfigError(AfcsimError):
    """Raised when a config file or override cannot be parsed"""
    def __init__(self, key: str, message: str):
        self.key = key
        super().__init__(f"{key}: {message}")


class ConfigValidationError(AfcsimError):
    """Raised when a system configuration violates a parameter constraint"""
    def __init__(self, field: str, message: str):
        self.field = field
        super().__init__(f"Invalid {field}: {message}")


class DomainError(AfcsimError):
    """Raised when an argument lies outside an operation's domain"""
    pass


class DegenerateStateError(DomainError):
    """Raised when the modulator gain would diverge"""
    pass


class PreconditionError(DomainError):
    """Raised when the threshold condition between input SNR and channel SNR fails"""
    pass


class LengthMismatchError(DomainError):
    """Raised when ensemble statistics and a trajectory cover different cycle counts"""
    def __init__(self, expected: int, actual: int):
        self.expected = expected
        self.actual = actual
        super().__init__(f"Cycle count mismatch: expected {expected}, got {actual}")



class UnknownCommandError(AfcsimError, LookupError):
    """Raised when no command is registered under a name"""
    def __init__(self, name: str, known: list):
        self.name = name
        self.known = known
        super().__init__(f"Command {name} not found (known: {', '.join(known)})")
