from typing import Optional


class SilverBulletError(Exception):
    """Base class for every error raised by the silver_bullet package"""
    pass


class ConfigError(SilverBulletError):
    """Exception raised for configuration file and override problems"""

    def __init__(self, message: str, path: Optional[str] = None,
                 line: Optional[int] = None, key: Optional[str] = None):
        self.path = path
        self.line = line
        self.key = key
        location = ""
        if path:
            location = f"{path}:{line}: " if line else f"{path}: "
        elif line:
            location = f"line {line}: "
        super().__init__(f"{location}{message}")


class TimingError(SilverBulletError):
    """Exception raised when DRAM timings cannot produce an activation window"""
    pass


class ConstraintError(SilverBulletError):
    """Exception raised when a configuration breaks a production/consumption constraint"""
    pass


class DomainError(SilverBulletError):
    """Exception raised for arguments outside a formula's domain"""
    pass


class TraceError(SilverBulletError):
    """Exception raised for malformed trace lines or out-of-range rows"""

    def __init__(self, message: str, line: Optional[int] = None,
                 ordinal: Optional[int] = None):
        self.line = line
        self.ordinal = ordinal
        if line is not None:
            message = f"line {line}: {message}"
        elif ordinal is not None:
            message = f"event {ordinal}: {message}"
        super().__init__(message)


class OracleLimitError(SilverBulletError):
    """Exception raised when the exhaustive search would exceed its state-space guard"""

    def __init__(self, message: str, hint: str):
        self.hint = hint
        super().__init__(f"{message} ({hint})")


class UsageError(SilverBulletError):
    """Exception raised for unknown presets and bad argument combinations"""
    pass
