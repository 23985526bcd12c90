class NonlocalError(Exception):
    """Base class of every error raised by the solver stack."""

    exit_code = 1


class ConfigError(NonlocalError, ValueError):
    """Malformed or out-of-domain entry in a run configuration."""

    exit_code = 2

    def __init__(self, message: str, line: int | None = None, key: str | None = None) -> None:
        self.line = line
        self.key = key
        location = []
        if line is not None:
            location.append(f"line {line}")
        if key is not None:
            location.append(f"key '{key}'")
        prefix = f"{', '.join(location)}: " if location else ""
        super().__init__(f"{prefix}{message}")


class ExistenceConditionError(NonlocalError, RuntimeError):
    """The sharp existence condition ||w|| < a_I does not hold; the solve is refused."""

    exit_code = 3


class NumericalFailureError(NonlocalError, ArithmeticError):
    """A numerical kernel could not produce a trustworthy result."""

    exit_code = 4
