"""Exception types shared across the package."""


class GraphError(Exception):
    """Structural problem with a property graph (unknown ids, bad endpoints)."""


class DataError(Exception):
    """Input data could not be turned into a graph.

    ``line`` is the 1-based line number of the offending record, when known.
    """

    def __init__(self, message, line=None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


class PatternSyntaxError(ValueError):
    """Malformed grouping pattern or construction rule."""

    def __init__(self, message, position):
        super().__init__(f"{message} at offset {position}")
        self.position = position


class ConfigError(ValueError):
    """Invalid pipeline or generator configuration."""
