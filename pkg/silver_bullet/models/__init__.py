from .errors import (
    ConfigError,
    ConstraintError,
    DomainError,
    OracleLimitError,
    SilverBulletError,
    TimingError,
    TraceError,
    UsageError,
)
from .device import DeviceProfile, WindowDerivation, derive_window_t
from .mechanism import MechanismConfig, Scheme, TiePolicy, TieRule
from .validation import Violation, ViolationCode, validate

__all__ = [
    "ConfigError",
    "ConstraintError",
    "DeviceProfile",
    "DomainError",
    "MechanismConfig",
    "OracleLimitError",
    "Scheme",
    "SilverBulletError",
    "TiePolicy",
    "TieRule",
    "TimingError",
    "TraceError",
    "UsageError",
    "Violation",
    "ViolationCode",
    "WindowDerivation",
    "derive_window_t",
    "validate",
]
