class FairnessEngineError(ValueError):
    """Base class for every error raised by the engine."""


class OrderingError(FairnessEngineError):
    """A list arrived with a tick that is not after the window's latest tick."""


class SetupError(FairnessEngineError):
    """The catalog or training data cannot support the configured agents."""


class ConfigError(FairnessEngineError):
    """Invalid or unknown configuration key."""

    def __init__(self, key: str, message: str):
        self.key = key
        super().__init__(f"[CONFIG] {key}: {message}")


class DataLoadError(FairnessEngineError):
    """Malformed or inconsistent input file."""

    def __init__(self, path: str, row: int, message: str):
        self.path = path
        self.row = row
        location = f"{path}, row {row}" if row else str(path)
        super().__init__(f"[DATA] {location}: {message}")


class InputError(FairnessEngineError):
    """Metric arguments outside their domain."""
